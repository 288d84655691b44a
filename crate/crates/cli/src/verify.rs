//! Reproduces the worked examples from the fixture files and reports each
//! comparison.

use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};

use ringcode::algebra::{vec_mat_mul, Elem, MatrixError, Ring, RingMatrix};
use ringcode::bounds::plotkin_bound;
use ringcode::codes::CodeFile;
use ringcode::network::{all_messages, assign_coefficients, network_code_params, parse_messages, sink_view, transfer_matrix, NetworkSpec};
use ringcode::weights::{format_rational, induced_weight, Rational, WeightFunction};

pub struct Check {
    pub name: &'static str,
    pub outcome: Result<String, String>,
}

/// A fixture file that could not be read.
#[derive(Debug)]
pub struct MissingFile(pub PathBuf);

fn read(dir: &Path, name: &str) -> Result<String, MissingFile> {
    let path = dir.join(name);
    fs::read_to_string(&path).map_err(|_| MissingFile(path))
}

/// First position where two matrices differ, one-based.
fn first_difference(got: &RingMatrix, want: &RingMatrix) -> Option<String> {
    if (got.rows(), got.cols()) != (want.rows(), want.cols()) {
        return Some(format!("shape {}x{} differs from {}x{}", got.rows(), got.cols(), want.rows(), want.cols()));
    }
    for r in 0..got.rows() {
        for c in 0..got.cols() {
            if got.get(r, c) != want.get(r, c) {
                return Some(format!(
                    "entry (row {}, col {}) is {}, expected {}",
                    r + 1,
                    c + 1,
                    got.get(r, c),
                    want.get(r, c)
                ));
            }
        }
    }
    None
}

fn parse_matrix(text: &str, name: &str) -> Result<RingMatrix, String> {
    RingMatrix::parse_text(text).map_err(|e| match e {
        MatrixError::EntryOutOfRange { row, col, value, ring } => {
            format!("{name}: entry (row {}, col {}) = {value} is not in {ring}", row + 1, col + 1)
        }
        other => format!("{name}: {other}"),
    })
}

fn matrix_check(got: &RingMatrix, want: &RingMatrix) -> Result<String, String> {
    match first_difference(got, want) {
        None => Ok(format!("{}x{} exact", got.rows(), got.cols())),
        Some(d) => Err(d),
    }
}

fn rows(ring: &Ring, rows: &[&[Elem]]) -> RingMatrix {
    let cols = rows[0].len();
    RingMatrix::from_rows(ring.clone(), cols, &rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).expect("fixed shape")
}

fn two_sink_checks(dir: &Path, out: &mut Vec<Check>) -> Result<(), MissingFile> {
    let net_text = read(dir, "two_sink.net")?;
    let k_text = read(dir, "two_sink_k.txt")?;
    let f_text = read(dir, "two_sink_f.txt")?;
    let net = match NetworkSpec::parse(&net_text) {
        Ok(n) => n,
        Err(e) => {
            out.push(Check { name: "two-sink network", outcome: Err(format!("two_sink.net: {e}")) });
            return Ok(());
        }
    };
    let ring = net.ring().clone();
    let k = assign_coefficients(&net, &net.default_mode()).expect("unit coefficients fit");
    let f = transfer_matrix(&k).expect("acyclic network");
    let want_k = parse_matrix(&k_text, "two_sink_k.txt");
    let want_f = parse_matrix(&f_text, "two_sink_f.txt");
    out.push(Check { name: "coefficient matrix K", outcome: want_k.clone().and_then(|w| matrix_check(&k, &w)) });
    out.push(Check { name: "transfer matrix F", outcome: want_f.clone().and_then(|w| matrix_check(&f, &w)) });
    let inverse = match (&want_k, &want_f) {
        (Ok(wk), Ok(wf)) => {
            let id = RingMatrix::identity(ring.clone(), wk.rows());
            match id.sub(wk).and_then(|m| wf.mul(&m)) {
                Ok(p) => matrix_check(&p, &id).map(|_| "F(I - K) = I".to_string()),
                Err(e) => Err(e.to_string()),
            }
        }
        _ => Err("fixtures unreadable".into()),
    };
    out.push(Check { name: "fixture identity F(I - K) = I", outcome: inverse });

    let w = WeightFunction::homogeneous(&ring, Rational::new(1, 2)).expect("positive gamma");
    let msgs = all_messages(&ring, net.m());
    let g1 = rows(&ring, &[&[0, 1], &[1, 1]]);
    let g2 = rows(&ring, &[&[0, 0, 1], &[1, 1, 1]]);
    for (name, sink, want) in [("sink t1 generator G1", "t1", g1), ("sink t2 generator G2", "t2", g2)] {
        let outcome = sink_view(&net, &f, sink, &msgs, &w)
            .map_err(|e| e.to_string())
            .and_then(|v| matrix_check(&v.generator, &want));
        out.push(Check { name, outcome });
    }
    let table = sink_view(&net, &f, "t2", &msgs, &w).map_err(|e| e.to_string()).and_then(|v| {
        let mut weights: Vec<Rational> = v.code.reps().iter().map(|u| induced_weight(&w, &v.kernel, u)).collect();
        weights.sort();
        let shown: Vec<String> = weights.iter().map(format_rational).collect();
        let shown = format!("({})", shown.join(","));
        if weights == [0, 1, 1, 1].map(Rational::from) {
            Ok(shown)
        } else {
            Err(format!("coset weights {shown}, expected (0,1,1,1)"))
        }
    });
    out.push(Check { name: "sink t2 coset weights", outcome: table });
    let line = network_code_params(&net, &f, &msgs, &w).map_err(|e| e.to_string()).and_then(|p| {
        let got = p.to_string();
        let want = "(15, {(2,15,4,1),(3,15,4,1)}) network code of size 4";
        if got == want {
            Ok(got)
        } else {
            Err(format!("got `{got}`, expected `{want}`"))
        }
    });
    out.push(Check { name: "network code parameters", outcome: line });
    Ok(())
}

fn z4_checks(dir: &Path, out: &mut Vec<Check>) -> Result<(), MissingFile> {
    let code_text = read(dir, "z4_two_cosets.code")?;
    let map_text = read(dir, "z4_map.txt")?;
    let msg_text = read(dir, "z4_messages.txt")?;
    let net_text = read(dir, "z4_one_sink.net")?;
    let file = match CodeFile::parse(&code_text) {
        Ok(f) => f,
        Err(e) => {
            out.push(Check { name: "Z4 code", outcome: Err(format!("z4_two_cosets.code: {e}")) });
            return Ok(());
        }
    };
    let lee = WeightFunction::homogeneous(&file.ring, Rational::from(1)).expect("positive gamma");
    let code = file.build(lee.clone()).map_err(|e| e.to_string());
    out.push(Check {
        name: "Z4 kernel support size",
        outcome: code.clone().and_then(|c| {
            let s = c.kernel().support().len();
            if s == 6 {
                Ok("6".into())
            } else {
                Err(format!("support size {s}, expected 6"))
            }
        }),
    });
    let d = code.clone().and_then(|c| c.min_induced_distance().map_err(|e| e.to_string()));
    out.push(Check {
        name: "Z4 minimum induced Lee distance",
        outcome: d.clone().and_then(|d| {
            if d == Rational::from(8) {
                Ok("8".into())
            } else {
                Err(format!("d = {}, expected 8", format_rational(&d)))
            }
        }),
    });
    let plotkin = plotkin_bound(Rational::from(8), 7, 6, Rational::from(1));
    out.push(Check {
        name: "Z4 Plotkin bound",
        outcome: match plotkin.value {
            Some(v) if v == 2u32.into() => Ok("2".into()),
            other => Err(format!("got {other:?}, expected 2")),
        },
    });
    let map = parse_matrix(&map_text, "z4_map.txt");
    let images = map.clone().and_then(|m| {
        let got: BTreeSet<Vec<Elem>> = file.reps.iter().map(|u| vec_mat_mul(&file.ring, u, &m)).collect();
        let want: BTreeSet<Vec<Elem>> = parse_messages(&file.ring, m.cols(), &msg_text)
            .map_err(|e| format!("z4_messages.txt: {e}"))?
            .into_iter()
            .collect();
        let show = |s: &BTreeSet<Vec<Elem>>| {
            s.iter().map(|v| v.iter().map(|x| x.to_string()).collect::<String>()).collect::<Vec<_>>().join(", ")
        };
        if got == want {
            Ok(format!("{{{}}}", show(&got)))
        } else {
            Err(format!("images {{{}}}, expected {{{}}}", show(&got), show(&want)))
        }
    });
    out.push(Check { name: "Z4 punctured code", outcome: images });
    let sink_map = NetworkSpec::parse(&net_text).map_err(|e| format!("z4_one_sink.net: {e}")).and_then(|net| {
        let k = assign_coefficients(&net, &net.default_mode()).map_err(|e| e.to_string())?;
        let f = transfer_matrix(&k).map_err(|e| e.to_string())?;
        let edges = net.sink_edges("t").map_err(|e| e.to_string())?;
        let want = map.clone()?;
        matrix_check(&f.select_columns(&edges), &want)
    });
    out.push(Check { name: "Z4 one-sink network map", outcome: sink_map });
    Ok(())
}

pub fn run(dir: &Path) -> Result<Vec<Check>, MissingFile> {
    let mut out = Vec::new();
    two_sink_checks(dir, &mut out)?;
    z4_checks(dir, &mut out)?;
    Ok(out)
}
