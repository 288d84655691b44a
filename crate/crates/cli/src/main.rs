use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num::ToPrimitive;

use ringcode::algebra::{Elem, Ring};
use ringcode::asymptotics::{emit_curves, EntropyScaling};
use ringcode::bounds::{all_bounds, ball_size, CSV_HEADER};
use ringcode::network::{
    all_messages, assign_coefficients, multicast_check, network_code_params, parse_messages, transfer_matrix,
    CoefficientMode, NetworkSpec,
};
use ringcode::simulator::{ErrorModel, Simulation};
use ringcode::weights::{format_rational, parse_rational, Rational, WeightFunction};

mod verify;

#[derive(Parser)]
#[command(name = "ringcode", version, about = "Exact homogeneous-weight code bounds and network error analysis")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print a weight table and check homogeneity.
    Weights {
        #[command(flatten)]
        weight: WeightArgs,
        #[arg(long)]
        csv: bool,
    },
    /// Count the words of A^k with weight at most r.
    Ball {
        #[command(flatten)]
        weight: WeightArgs,
        #[arg(long)]
        k: usize,
        #[arg(long, value_parser = rational)]
        r: Rational,
    },
    /// Evaluate the Plotkin, Elias and sphere-packing bounds.
    Bounds {
        #[command(flatten)]
        weight: WeightArgs,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        s: usize,
        #[arg(long)]
        ell: usize,
        #[arg(long, value_parser = rational)]
        d: Rational,
        #[arg(long)]
        csv: bool,
    },
    /// Emit asymptotic bound curves as CSV.
    Asymptotic {
        #[command(flatten)]
        weight: WeightArgs,
        #[arg(long, default_value_t = 1.0)]
        sigma: f64,
        #[arg(long, default_value_t = 0.0)]
        lambda: f64,
        #[arg(long, default_value_t = 0.01)]
        step: f64,
        #[arg(long, value_enum, default_value_t = Scaling::Stated)]
        scaling: Scaling,
    },
    /// Analyze or simulate a network file.
    Network {
        #[command(subcommand)]
        action: NetworkAction,
    },
    /// Re-derive the bundled worked examples.
    Verify {
        #[command(subcommand)]
        what: VerifyWhat,
    },
}

#[derive(Subcommand)]
enum NetworkAction {
    /// Transfer matrix, sink codes and their parameters.
    Analyze {
        file: PathBuf,
        #[command(flatten)]
        net: NetworkArgs,
        /// Print K and F.
        #[arg(long)]
        matrices: bool,
    },
    /// Inject errors and decode at every sink.
    Simulate {
        file: PathBuf,
        #[command(flatten)]
        net: NetworkArgs,
        /// exhaustive:<budget>, random:<count>:<seed> or fixed:<vector>
        #[arg(long)]
        model: String,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[arg(long)]
        csv: bool,
    },
}

#[derive(Subcommand)]
enum VerifyWhat {
    /// Check the golden matrices, codes and parameters.
    PaperExamples {
        #[arg(long)]
        fixtures: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Scaling {
    /// σ − λ − H(ξ)
    Stated,
    /// (σ − λ)(1 − H(ξ))
    Free,
}

#[derive(Clone, Copy, ValueEnum, PartialEq)]
enum Family {
    Homogeneous,
    Hamming,
}

#[derive(Args)]
struct WeightArgs {
    /// z<m>, f<p>, f<p>^<e>:<c0>,...,<ce>, or mat2:<field> for 2×2 matrices
    #[arg(long)]
    ring: String,
    #[arg(long, value_parser = rational)]
    gamma: Option<Rational>,
    #[arg(long, value_enum, default_value_t = Family::Homogeneous)]
    weight: Family,
}

#[derive(Args)]
struct NetworkArgs {
    /// `all` or a file with one message per line
    #[arg(long, default_value = "all")]
    messages: String,
    #[arg(long, value_parser = rational)]
    gamma: Option<Rational>,
    #[arg(long, value_enum, default_value_t = Family::Homogeneous)]
    weight: Family,
    /// ones, random:<seed>, or file (the file's coeff lines, else ones)
    #[arg(long, default_value = "file")]
    coefficients: String,
}

fn rational(s: &str) -> Result<Rational, String> {
    parse_rational(s).ok_or_else(|| format!("`{s}` is not a rational number"))
}

/// Usage and input errors; reported with exit status 2.
struct Usage(String);

impl<E: std::fmt::Display> From<E> for Usage {
    fn from(e: E) -> Self {
        Usage(e.to_string())
    }
}

fn default_gamma(ring: &Ring) -> Rational {
    if ring.is_field() {
        let q = ring.size() as i64;
        Rational::new(q - 1, q)
    } else {
        Rational::from(1)
    }
}

/// The weight and a one-line description of the `(ring, γ)` in effect.
fn build_weight(args: &WeightArgs) -> Result<(WeightFunction, String), Usage> {
    if let Some(field) = args.ring.strip_prefix("mat2:") {
        let field: Ring = field.parse()?;
        let q = field.size() as i64;
        let (gamma, note) = match args.gamma {
            Some(g) => (g, ""),
            None => (Rational::new(q * q - 1, q), " (default)"),
        };
        let w = WeightFunction::matrix_ring(&field, gamma)?;
        return Ok((w, format!("ring {}, gamma {}{note}", args.ring, format_rational(&gamma))));
    }
    let ring: Ring = args.ring.parse()?;
    weight_for(&ring, args.gamma, args.weight)
}

fn weight_for(ring: &Ring, gamma: Option<Rational>, family: Family) -> Result<(WeightFunction, String), Usage> {
    let (gamma, note) = match gamma {
        Some(g) => (g, ""),
        None => (default_gamma(ring), " (default)"),
    };
    let w = match family {
        Family::Homogeneous => WeightFunction::homogeneous(ring, gamma)?,
        Family::Hamming => WeightFunction::hamming(ring, gamma)?,
    };
    let kind = if family == Family::Hamming { ", hamming weight" } else { "" };
    Ok((w, format!("ring {ring}, gamma {}{note}{kind}", format_rational(&gamma))))
}

fn load_network(file: &PathBuf, args: &NetworkArgs) -> Result<(NetworkSpec, ringcode::algebra::RingMatrix, ringcode::algebra::RingMatrix, Vec<Vec<Elem>>), Usage> {
    let text = fs::read_to_string(file).map_err(|e| Usage(format!("{}: {e}", file.display())))?;
    let net = NetworkSpec::parse(&text).map_err(|e| Usage(format!("{}: {e}", file.display())))?;
    let mode = match args.coefficients.as_str() {
        "file" => net.default_mode(),
        "ones" => CoefficientMode::Ones,
        other => match other.strip_prefix("random:").and_then(|s| s.parse().ok()) {
            Some(seed) => CoefficientMode::Random(seed),
            None => return Err(Usage(format!("unknown coefficient mode `{other}`"))),
        },
    };
    let k = assign_coefficients(&net, &mode)?;
    let f = transfer_matrix(&k)?;
    let messages = if args.messages == "all" {
        all_messages(net.ring(), net.m())
    } else {
        let text = fs::read_to_string(&args.messages).map_err(|e| Usage(format!("{}: {e}", args.messages)))?;
        parse_messages(net.ring(), net.m(), &text)?
    };
    Ok((net, k, f, messages))
}

fn run(cli: Cli) -> Result<ExitCode, Usage> {
    match cli.command {
        Command::Weights { weight, csv } => {
            let (w, label) = build_weight(&weight)?;
            let check = w.verify_homogeneous();
            if csv {
                eprintln!("# {label}");
                print!("{}", w.to_csv());
            } else {
                println!("# {label}");
                println!("element weight");
                for (a, x) in w.table().iter().enumerate() {
                    println!("{a} {}", format_rational(x));
                }
                match &check {
                    ringcode::weights::Homogeneity::Pass => println!("homogeneous: pass"),
                    other => println!("homogeneous: fail ({other:?})"),
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Ball { weight, k, r } => {
            let (w, label) = build_weight(&weight)?;
            println!("# {label}");
            println!("|B^{k}({})| = {}", format_rational(&r), ball_size(&w, k, r));
            Ok(ExitCode::SUCCESS)
        }
        Command::Bounds { weight, n, s, ell, d, csv } => {
            let (w, label) = build_weight(&weight)?;
            let reports = all_bounds(&w, n, s, ell, d)?;
            if csv {
                eprintln!("# {label}");
                println!("{CSV_HEADER}");
                for r in &reports {
                    println!("{}", r.csv_row());
                }
            } else {
                println!("# {label}");
                println!("# n={n} s={s} ell={ell} d={}", format_rational(&d));
                for r in &reports {
                    println!("{r}");
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Asymptotic { weight, sigma, lambda, step, scaling } => {
            let (w, label) = build_weight(&weight)?;
            let scaling = match scaling {
                Scaling::Stated => EntropyScaling::Stated,
                Scaling::Free => EntropyScaling::FreeCoordinates,
            };
            let curve = emit_curves(&w, sigma, lambda, step, scaling)?;
            eprintln!("# {label}, sigma {sigma}, lambda {lambda}");
            print!("{}", curve.to_csv());
            Ok(ExitCode::SUCCESS)
        }
        Command::Network { action: NetworkAction::Analyze { file, net: args, matrices } } => {
            let (net, k, f, messages) = load_network(&file, &args)?;
            let (w, label) = weight_for(net.ring(), args.gamma, args.weight)?;
            println!("# {label}");
            println!("edges n={} source edges m={} messages={}", net.n(), net.m(), messages.len());
            for (i, e) in net.edges().iter().enumerate() {
                println!("  {:>3}: {} -> {}  (line {})", i + 1, e.tail, e.head, net.file_index()[i] + 1);
            }
            if matrices {
                println!("K\n{}", k.to_text());
                println!("F\n{}", f.to_text());
            }
            let checks = multicast_check(&net, &f, &messages);
            for (t, ok) in &checks {
                println!("multicast {t}: {}", if *ok { "pass" } else { "fail" });
            }
            if checks.iter().any(|(_, ok)| !ok) {
                return Ok(ExitCode::from(1));
            }
            let params = network_code_params(&net, &f, &messages, &w)?;
            println!("sink n_t s_t ell_t size d_t combined_bound");
            for s in &params.sinks {
                let d = s.d.map_or_else(|| "-".to_string(), |d| format_rational(&d));
                let b = match &s.bound {
                    Some(r) if r.applicable() => format!("{} ({})", r.value.as_ref().expect("applicable"), r.winner.map_or("", |k| k.name())),
                    _ => "-".to_string(),
                };
                println!("{} {} {} {} {} {} {}", s.sink, s.n_t, s.s_t, s.ell_t, s.size, d, b);
            }
            println!("{params}");
            Ok(ExitCode::SUCCESS)
        }
        Command::Network { action: NetworkAction::Simulate { file, net: args, model, trials, csv } } => {
            let (net, _, f, messages) = load_network(&file, &args)?;
            let (w, label) = weight_for(net.ring(), args.gamma, args.weight)?;
            let model = ErrorModel::parse(&model, net.ring(), net.n())?;
            let stats = Simulation::new(&net, &f, &messages, &w)?.run(&model, trials)?;
            if csv {
                eprintln!("# {label}");
                print!("{}", stats.to_csv());
            } else {
                println!("# {label}");
                println!("trials {}", stats.trials.len());
                for (s, c) in stats.sinks.iter().zip(&stats.counts) {
                    let pct = |x: u64| 100.0 * x.to_f64().unwrap_or(0.0) / c.total().max(1) as f64;
                    println!(
                        "{s}: correct {} ({:.1}%), miscorrected {}, detected {}, invisible {}",
                        c.correct,
                        pct(c.correct),
                        c.miscorrected,
                        c.detected,
                        c.invisible
                    );
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify { what: VerifyWhat::PaperExamples { fixtures } } => {
            let dir = fixtures.unwrap_or_else(|| PathBuf::from(ringcode::fixtures::DIR));
            let checks = verify::run(&dir).map_err(|m| Usage(format!("missing data file {}", m.0.display())))?;
            let mut failed = 0;
            for c in &checks {
                match &c.outcome {
                    Ok(detail) => println!("PASS {}: {detail}", c.name),
                    Err(detail) => {
                        failed += 1;
                        println!("FAIL {}: {detail}", c.name);
                    }
                }
            }
            println!("{} of {} checks passed", checks.len() - failed, checks.len());
            Ok(if failed == 0 { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
