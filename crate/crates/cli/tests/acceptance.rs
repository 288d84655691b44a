//! Acceptance suite: one line per criterion, nonzero exit if any fails.

use std::collections::{BTreeSet, HashMap};
use std::process::Command;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use ringcode::algebra::{row_canonical, vec_add, vec_mat_mul, Elem, Ring, RingMatrix};
use ringcode::asymptotics::{asym_elias, asym_plotkin, asym_sphere, emit_curves, entropy, AsymParams, EntropyScaling};
use ringcode::bounds::{all_bounds, ball_size, plotkin_bound, plotkin_inequality};
use ringcode::codes::{CodeError, CodeFile, KernelFamily, OptimumSearch, QuotientCode, SearchLimits};
use ringcode::fixtures;
use ringcode::network::{
    all_messages, assign_coefficients, network_code_params, parse_messages, sink_view, transfer_matrix, NetworkSpec,
};
use ringcode::simulator::{ErrorModel, Outcome, Simulation};
use ringcode::weights::{avg_coset_weight, induced_weight, puncture, submodule_span, vector_weight, Rational, WeightFunction};

type Outcome_ = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(start: Instant, limit: Duration) -> Result<(), String> {
    let took = start.elapsed();
    ensure(took < limit, || format!("took {took:.2?}, limit {limit:?}"))
}

fn ring(spec: &str) -> Ring {
    spec.parse().expect("ring spec")
}

fn lee() -> WeightFunction {
    WeightFunction::homogeneous(&ring("z4"), Rational::from(1)).unwrap()
}

fn field_weight(spec: &str) -> WeightFunction {
    let r = ring(spec);
    let q = r.size() as i64;
    WeightFunction::homogeneous(&r, Rational::new(q - 1, q)).unwrap()
}

fn two_sink() -> (NetworkSpec, RingMatrix, RingMatrix) {
    let net = NetworkSpec::parse(fixtures::TWO_SINK_NET).unwrap();
    let k = assign_coefficients(&net, &net.default_mode()).unwrap();
    let f = transfer_matrix(&k).unwrap();
    (net, k, f)
}

fn golden_network() -> Outcome_ {
    let start = Instant::now();
    let (net, k, f) = two_sink();
    let want_k = RingMatrix::parse_text(fixtures::TWO_SINK_K).unwrap();
    let want_f = RingMatrix::parse_text(fixtures::TWO_SINK_F).unwrap();
    ensure(k == want_k, || "K differs from the printed matrix".into())?;
    ensure(f == want_f, || "F differs from the printed matrix".into())?;
    let id = RingMatrix::identity(net.ring().clone(), 15);
    ensure(want_f.mul(&id.sub(&want_k).unwrap()).unwrap().is_identity(), || "F(I - K) != I".into())?;
    let w = WeightFunction::homogeneous(net.ring(), Rational::new(1, 2)).unwrap();
    let msgs = all_messages(net.ring(), 2);
    let t1 = sink_view(&net, &f, "t1", &msgs, &w).map_err(|e| e.to_string())?;
    let t2 = sink_view(&net, &f, "t2", &msgs, &w).map_err(|e| e.to_string())?;
    ensure(t1.generator.row_vectors() == vec![vec![0, 1], vec![1, 1]], || format!("G1 = {:?}", t1.generator.row_vectors()))?;
    ensure(t2.generator.row_vectors() == vec![vec![0, 0, 1], vec![1, 1, 1]], || format!("G2 = {:?}", t2.generator.row_vectors()))?;
    let mut table: Vec<Rational> = t2.code.reps().iter().map(|u| induced_weight(&w, &t2.kernel, u)).collect();
    table.sort();
    ensure(table == [0, 1, 1, 1].map(Rational::from), || format!("coset weights {table:?}"))?;
    let line = network_code_params(&net, &f, &msgs, &w).map_err(|e| e.to_string())?.to_string();
    ensure(line == "(15, {(2,15,4,1),(3,15,4,1)}) network code of size 4", || format!("parameter line `{line}`"))?;
    within(start, Duration::from_secs(1))?;
    Ok(format!("K, F, G1, G2, coset weights (0,1,1,1) and `{line}` in {:.0?}", start.elapsed()))
}

fn golden_z4() -> Outcome_ {
    let start = Instant::now();
    let file = CodeFile::parse(fixtures::Z4_TWO_COSETS).map_err(|e| e.to_string())?;
    let code = file.build(lee()).map_err(|e| e.to_string())?;
    ensure(file.kernel == vec![vec![0, 1, 1, 1, 3, 3, 3]], || "kernel generator".into())?;
    let support = code.kernel().support().len();
    ensure(support == 6, || format!("support size {support}"))?;
    let d = code.min_induced_distance().map_err(|e| e.to_string())?;
    ensure(d == Rational::from(8), || format!("d = {d}"))?;
    let p = plotkin_bound(Rational::from(8), 7, 6, Rational::from(1));
    ensure(p.value == Some(2u32.into()), || format!("Plotkin {:?}", p.value))?;
    let map = RingMatrix::parse_text(fixtures::Z4_MAP).unwrap();
    let images: BTreeSet<Vec<Elem>> = file.reps.iter().map(|u| vec_mat_mul(&file.ring, u, &map)).collect();
    let want: BTreeSet<Vec<Elem>> = parse_messages(&file.ring, 6, fixtures::Z4_MESSAGES).unwrap().into_iter().collect();
    let expected: BTreeSet<Vec<Elem>> = [vec![1, 2, 0, 0, 2, 3], vec![3, 0, 0, 2, 2, 1]].into_iter().collect();
    ensure(images == want && want == expected, || format!("images {images:?}"))?;
    within(start, Duration::from_secs(1))?;
    Ok(format!("supp K = 6, d = 8, Plotkin = 2, images {{120023, 300221}} in {:.0?}", start.elapsed()))
}

fn homogeneity() -> Outcome_ {
    let z8 = WeightFunction::homogeneous(&ring("z8"), Rational::from(1)).unwrap();
    let want_z8 = [0, 1, 1, 1, 2, 1, 1, 1].map(Rational::from);
    ensure(z8.table() == want_z8, || format!("Z8 table {:?}", z8.table()))?;
    let bachoc = WeightFunction::matrix_ring(&ring("f2"), Rational::new(3, 2)).unwrap();
    let mut cases = vec![("Lee Z4".to_string(), lee()), ("Z8".to_string(), z8), ("2x2 over F2".to_string(), bachoc)];
    for spec in ["f2", "f3", "f2^2:1,1,1", "f5"] {
        cases.push((format!("Hamming {spec}"), field_weight(spec)));
    }
    for (name, w) in &cases {
        let h = w.verify_homogeneous();
        ensure(h.passed(), || format!("{name}: {h:?}"))?;
    }
    Ok(format!("{} tables pass", cases.len()))
}

/// A random submodule spanned by up to three random vectors.
fn random_kernel(rng: &mut ChaCha8Rng, r: &Ring, n: usize) -> Vec<Vec<Elem>> {
    let count = rng.gen_range(0..=3);
    (0..count).map(|_| (0..n).map(|_| rng.gen_range(0..r.size())).collect()).collect()
}

fn coset_average() -> Outcome_ {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut checked = 0;
    for (spec, w) in [("z4", lee()), ("f2", field_weight("f2"))] {
        let r = ring(spec);
        for _ in 0..100 {
            let n = rng.gen_range(1..=7);
            let gens = random_kernel(&mut rng, &r, n);
            let k = submodule_span(&r, n, &gens).unwrap();
            let x: Vec<Elem> = (0..n).map(|_| rng.gen_range(0..r.size())).collect();
            let total: Rational = k.elements().iter().map(|z| vector_weight(&w, &vec_add(&r, &x, z))).sum();
            let enumerated = total / Rational::from(k.size() as i64);
            let closed = w.gamma() * Rational::from(k.ell() as i64) + vector_weight(&w, &puncture(&x, k.support()));
            ensure(enumerated == closed, || format!("{spec} n={n} K={gens:?} x={x:?}: {enumerated} vs {closed}"))?;
            let lib = avg_coset_weight(&w, &k, &x).map_err(|e| e.to_string())?;
            ensure(lib == closed, || "library average differs".into())?;
            checked += 1;
        }
    }
    Ok(format!("{checked} random (K, x) pairs over Z4 and F2, n <= 7"))
}

fn tiny_codes_satisfy_plotkin(w: &WeightFunction, n: usize) -> Result<usize, String> {
    // every kernel spanned by at most two vectors, every code of 2 or 3 cosets
    // containing the zero coset
    let r = w.ring().unwrap().clone();
    let vectors = all_messages(&r, n);
    let mut kernels: BTreeSet<Vec<Vec<Elem>>> = BTreeSet::new();
    for a in &vectors {
        for b in &vectors {
            let m = RingMatrix::from_rows(r.clone(), n, &[a.clone(), b.clone()]).unwrap();
            kernels.insert(row_canonical(&m).row_vectors());
        }
    }
    let mut count = 0;
    for gens in &kernels {
        let k = submodule_span(&r, n, gens).unwrap();
        let reps: Vec<Vec<Elem>> = {
            let mut seen = BTreeSet::new();
            vectors.iter().filter(|v| seen.insert(k.reducer().reduce(v))).cloned().collect()
        };
        for i in 1..reps.len() {
            for j in i..reps.len() {
                let members: Vec<Vec<Elem>> = if i == j {
                    vec![reps[0].clone(), reps[i].clone()]
                } else {
                    vec![reps[0].clone(), reps[i].clone(), reps[j].clone()]
                };
                let code = QuotientCode::new(w.clone(), k.clone(), members).map_err(|e| e.to_string())?;
                let p = code.params();
                let d = p.d.expect("two or more cosets");
                let check = plotkin_inequality(p.size as u64, d, p.s, p.ell, w.gamma());
                ensure(check.holds(), || format!("{} n={n} K={gens:?} C={:?}: {check:?}", w.alphabet(), code.reps()))?;
                count += 1;
            }
        }
    }
    Ok(count)
}

fn bound_soundness() -> Outcome_ {
    let start = Instant::now();
    // the search answer does not depend on n ≥ s, so each (s, ℓ, d) is
    // searched once and compared with the bounds for every n
    let limits = SearchLimits { max_nodes: 100_000, max_submodules: 30_000, ..SearchLimits::default() };
    let (mut checked, mut skipped, mut comparisons) = (0usize, 0usize, 0usize);
    let mut skipped_families = Vec::new();
    for (w, max_n) in [(field_weight("f2"), 12usize), (field_weight("f3"), 7), (lee(), 6)] {
        let scale = w.grid().scale();
        for ell in 0..=max_n {
            let family = match KernelFamily::new(&w, ell, limits) {
                Ok(f) => f,
                Err(CodeError::CapExceeded { .. }) => {
                    let instances: usize = (ell..=max_n).map(|s| (w.max_weight() * Rational::from(s as i64) * scale).to_integer() as usize).sum();
                    skipped += instances;
                    skipped_families.push(format!("{} ell={ell}", w.alphabet()));
                    continue;
                }
                Err(e) => return Err(e.to_string()),
            };
            for s in ell..=max_n {
                let search = OptimumSearch::with_family(&w, s, &family, limits).map_err(|e| e.to_string())?;
                let top = (w.max_weight() * Rational::from(s as i64) * scale).to_integer();
                for j in 1..=top {
                    let d = Rational::new(j, scale);
                    let best = match search.optimum(d) {
                        Ok(b) => b,
                        Err(CodeError::CapExceeded { .. }) => {
                            skipped += 1;
                            continue;
                        }
                        Err(e) => return Err(e.to_string()),
                    };
                    checked += 1;
                    for n in s..=max_n {
                        for report in all_bounds(&w, n, s, ell, d).map_err(|e| e.to_string())? {
                            if let Some(v) = &report.value {
                                comparisons += 1;
                                ensure(num::BigUint::from(best) <= *v, || {
                                    format!("{} n={n} s={s} ell={ell} d={d}: optimum {best} > {} {v}", w.alphabet(), report.kind)
                                })?;
                            }
                        }
                    }
                    // the optimum satisfies the Plotkin inequality at its design distance
                    if best >= 2 {
                        let check = plotkin_inequality(best, d, s, ell, w.gamma());
                        ensure(check.holds(), || format!("{} s={s} ell={ell} d={d}: {check:?}", w.alphabet()))?;
                    }
                }
            }
        }
    }
    let mut enumerated = 0;
    for (w, n) in [(field_weight("f2"), 4), (field_weight("f3"), 3), (lee(), 3)] {
        enumerated += tiny_codes_satisfy_plotkin(&w, n)?;
    }
    within(start, Duration::from_secs(180))?;
    ensure(checked > 0, || "nothing checked".into())?;
    Ok(format!(
        "{checked} (ring, s, ell, d) optima within {comparisons} applicable bounds; Plotkin inequality on {enumerated} enumerated codes; {skipped} instances past search limits ({}) in {:.1?}",
        if skipped_families.is_empty() { "none".to_string() } else { format!("kernel families {}, rest clique budget", skipped_families.join(", ")) },
        start.elapsed()
    ))
}

fn ball_oracle() -> Outcome_ {
    let z4 = lee();
    let b = ball_size(&z4, 3, Rational::from(2));
    ensure(b == 22u32.into(), || format!("Z4 Lee k=3 r=2 gives {b}"))?;
    let mut weights = vec![
        ("f2", field_weight("f2")),
        ("f3", field_weight("f3")),
        ("f5", field_weight("f5")),
        ("z4", z4),
        ("z8", WeightFunction::homogeneous(&ring("z8"), Rational::from(1)).unwrap()),
        ("z9", WeightFunction::homogeneous(&ring("z9"), Rational::from(1)).unwrap()),
        ("z6", WeightFunction::homogeneous(&ring("z6"), Rational::from(1)).unwrap()),
    ];
    weights.push(("mat2(f2)", WeightFunction::matrix_ring(&ring("f2"), Rational::new(3, 2)).unwrap()));
    let mut cases = 0;
    for (name, w) in &weights {
        let q = w.size() as u64;
        let grid = w.grid();
        let mut k = 0u32;
        while q.pow(k) <= 1 << 16 {
            // histogram of scaled weights by enumerating every word
            let mut hist: HashMap<i64, u64> = HashMap::new();
            for c in 0..q.pow(k) {
                let word: i64 = (0..k).map(|i| grid.value(((c / q.pow(i)) % q) as Elem)).sum();
                *hist.entry(word).or_default() += 1;
            }
            let top = grid.max_value() * k as i64;
            for j in -1..=2 * top + 2 {
                let r = Rational::new(j, 2 * grid.scale());
                let brute: u64 = hist.iter().filter(|(&v, _)| Rational::new(v, grid.scale()) <= r).map(|(_, &c)| c).sum();
                let dp = ball_size(w, k as usize, r);
                ensure(dp == brute.into(), || format!("{name} k={k} r={r}: {dp} vs {brute}"))?;
                cases += 1;
            }
            k += 1;
        }
    }
    Ok(format!("{cases} (ring, k, r) cases over {} weights, Z4 Lee k=3 r=2 -> 22", weights.len()))
}

fn entropy_checks() -> Outcome_ {
    let f2 = field_weight("f2");
    let h = entropy(&f2, 0.25).map_err(|e| e.to_string())?;
    ensure((h - 0.811278).abs() < 1e-6, || format!("H(0.25) = {h}"))?;
    let z8 = WeightFunction::homogeneous(&ring("z8"), Rational::from(1)).unwrap();
    for (name, w) in [("z4", lee()), ("z8", z8), ("f2", f2)] {
        let g: f64 = num::ToPrimitive::to_f64(&w.gamma()).unwrap();
        let top = entropy(&w, g).map_err(|e| e.to_string())?;
        ensure((top - 1.0).abs() < 1e-9, || format!("{name}: H(gamma) = {top}"))?;
        ensure(entropy(&w, 0.0).unwrap() == 0.0, || format!("{name}: H(0) != 0"))?;
        let mut prev = 0.0;
        for i in 0..=1000 {
            let v = entropy(&w, g * i as f64 / 1000.0).map_err(|e| e.to_string())?;
            ensure(v >= prev, || format!("{name}: decreases at step {i}"))?;
            prev = v;
        }
    }
    Ok(format!("H(0.25) = {h:.9}, H(gamma) = 1, H(0) = 0, monotone on Z4, Z8, F2"))
}

/// q-ary entropy, written out.
fn hq(q: f64, x: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    if x >= 1.0 {
        return (q - 1.0).log(q);
    }
    x * (q - 1.0).log(q) - x * x.log(q) - (1.0 - x) * (1.0 - x).log(q)
}

fn asymptotic_curves() -> Outcome_ {
    let z8 = WeightFunction::homogeneous(&ring("z8"), Rational::from(1)).unwrap();
    let mut curves = 0;
    for (name, w, lambda) in [("z4", lee(), 0.1), ("z8", z8.clone(), 0.05), ("z8", z8, 0.15), ("f2", field_weight("f2"), 0.1)] {
        for scaling in [EntropyScaling::Stated, EntropyScaling::FreeCoordinates] {
            let c = emit_curves(&w, 1.0, lambda, 0.005, scaling).map_err(|e| e.to_string())?;
            for (label, series) in [("plotkin", &c.plotkin), ("elias", &c.elias), ("sphere", &c.sphere)] {
                let vals: Vec<f64> = series.iter().flatten().copied().collect();
                ensure(vals.windows(2).all(|p| p[1] <= p[0] + 1e-12), || format!("{name} {label} increases"))?;
                curves += 1;
            }
            let last = c.plotkin.last().copied().flatten();
            ensure(last == Some(0.0), || format!("{name}: Plotkin at gamma sigma is {last:?}"))?;
        }
    }
    // classical limits: Hamming over F2, F3, and Lee over Z4 through its
    // binary image, where the per-symbol ball exponent is H2(δ/2)
    let mut samples = 0;
    let cases: Vec<(WeightFunction, Box<dyn Fn(f64) -> f64>)> = vec![
        (field_weight("f2"), Box::new(|x| hq(2.0, x))),
        (field_weight("f3"), Box::new(|x| hq(3.0, x))),
        (lee(), Box::new(|x| hq(2.0, x / 2.0))),
    ];
    for (w, h) in &cases {
        let theta: f64 = num::ToPrimitive::to_f64(&w.gamma()).unwrap();
        for i in 1..=10 {
            let delta = theta * i as f64 / 10.0;
            let p = AsymParams::new(w, 1.0, 0.0, delta).map_err(|e| e.to_string())?;
            let plotkin = 1.0 - delta / theta;
            let elias = 1.0 - h(theta - (theta * (theta - delta)).sqrt());
            let sphere = 1.0 - h(delta / 2.0);
            ensure((asym_plotkin(&p) - plotkin).abs() < 1e-8, || format!("{} Plotkin at {delta}", w.alphabet()))?;
            let e = asym_elias(&p, w, EntropyScaling::Stated).ok_or("Elias not applicable")?;
            ensure((e - elias).abs() < 1e-8, || format!("{} Elias at {delta}: {e} vs {elias}", w.alphabet()))?;
            let s = asym_sphere(&p, w, EntropyScaling::Stated).ok_or("sphere not applicable")?;
            ensure((s - sphere).abs() < 1e-8, || format!("{} sphere at {delta}: {s} vs {sphere}", w.alphabet()))?;
            samples += 1;
        }
    }
    Ok(format!("{curves} curves nonincreasing, Plotkin 0 at gamma sigma, {samples} classical samples within 1e-8"))
}

fn simulator_guarantees() -> Outcome_ {
    let start = Instant::now();
    let (net, _, f) = two_sink();
    let w = WeightFunction::homogeneous(net.ring(), Rational::new(1, 2)).unwrap();
    let sim = Simulation::new(&net, &f, &all_messages(net.ring(), 2), &w).map_err(|e| e.to_string())?;
    let all = sim.run(&ErrorModel::ExhaustiveUpTo(Rational::from(15)), 1).map_err(|e| e.to_string())?;
    let k1 = &sim.decoders()[0].view().kernel;
    let (mut invisible, mut single) = (0, 0);
    for t in &all.trials {
        let nonzero = t.error.iter().any(|&a| a != 0);
        let inside = k1.contains(&t.error);
        ensure((t.outcomes[0] == Outcome::Invisible) == (nonzero && inside), || format!("t1 error {:?}", t.error))?;
        if nonzero && inside {
            invisible += 1;
        }
        if t.error.iter().filter(|&&a| a != 0).count() == 1 && !inside {
            ensure(t.outcomes[0] != Outcome::Correct, || format!("t1 corrected {:?}", t.error))?;
            single += 1;
        }
    }
    let z4_net = NetworkSpec::parse(fixtures::Z4_ONE_SINK_NET).unwrap();
    let zf = transfer_matrix(&assign_coefficients(&z4_net, &z4_net.default_mode()).unwrap()).unwrap();
    let msgs = parse_messages(z4_net.ring(), 6, fixtures::Z4_MESSAGES).unwrap();
    let zsim = Simulation::new(&z4_net, &zf, &msgs, &lee()).map_err(|e| e.to_string())?;
    let z = zsim.run(&ErrorModel::ExhaustiveUpTo(Rational::from(3)), 1).map_err(|e| e.to_string())?;
    let c = z.counts[0];
    ensure(c.correct == c.total(), || format!("Z4 sink: {c:?}"))?;
    within(start, Duration::from_secs(60))?;
    Ok(format!(
        "{invisible} kernel errors invisible at t1 ({} trials), {single} single-edge errors uncorrected, {} Z4 errors of Lee weight <= 3 all corrected, in {:.1?}",
        all.trials.len(),
        c.total(),
        start.elapsed()
    ))
}

fn determinism() -> Outcome_ {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let path = dir.path().join("two_sink.net");
    std::fs::write(&path, fixtures::TWO_SINK_NET).map_err(|e| e.to_string())?;
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_ringcode"))
            .args(["network", "simulate"])
            .arg(&path)
            .args(["--model", "random:3:12345", "--trials", "1000", "--csv"])
            .output()
    };
    let a = run().map_err(|e| e.to_string())?;
    let b = run().map_err(|e| e.to_string())?;
    ensure(a.status.success() && b.status.success(), || String::from_utf8_lossy(&a.stderr).into_owned())?;
    ensure(a.stdout == b.stdout, || "outputs differ".into())?;
    let text = String::from_utf8_lossy(&a.stdout);
    ensure(text.starts_with("sink,correct,miscorrected,detected,invisible\n"), || text.to_string())?;
    Ok(format!("{} identical bytes", a.stdout.len()))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome_); 10] = [
        ("golden two-sink network", golden_network),
        ("golden Z4 two-coset code", golden_z4),
        ("homogeneity suite", homogeneity),
        ("coset-average closed form", coset_average),
        ("bound soundness", bound_soundness),
        ("ball oracle", ball_oracle),
        ("entropy checks", entropy_checks),
        ("asymptotic curve properties", asymptotic_curves),
        ("simulator guarantees", simulator_guarantees),
        ("determinism", determinism),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("criterion {:>2} PASS {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {:>2} FAIL {name}: {detail}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
