use num::BigUint;

use ringcode::bounds::{all_bounds, combined_bound};
use ringcode::codes::{exhaustive_optimum, is_delta_error_correcting, puncture_to_support, CodeFile};
use ringcode::fixtures;
use ringcode::network::{
    all_messages, assign_coefficients, network_code_params, sink_view, transfer_matrix, CoefficientMode, NetworkSpec,
};
use ringcode::simulator::{ErrorModel, Simulation};
use ringcode::weights::{Rational, WeightFunction};

fn lee() -> WeightFunction {
    WeightFunction::homogeneous(&"z4".parse().unwrap(), Rational::from(1)).unwrap()
}

#[test]
fn z4_code_file_round_trip_and_puncturing() {
    let file = CodeFile::parse(fixtures::Z4_TWO_COSETS).unwrap();
    let again = CodeFile::parse(&file.to_text()).unwrap();
    assert_eq!(again.reps, file.reps);
    assert_eq!(again.kernel, file.kernel);
    let code = file.build(lee()).unwrap();
    let punctured = puncture_to_support(&code).unwrap();
    assert_eq!(punctured.params().size, code.params().size);
    assert_eq!(punctured.min_induced_distance().unwrap(), code.min_induced_distance().unwrap());
    // d = 8 corrects every error of weight below 4
    assert!(is_delta_error_correcting(&code, Rational::from(4)).unwrap().passed());
    assert!(!is_delta_error_correcting(&code, Rational::from(5)).unwrap().passed());
}

#[test]
fn network_sink_codes_respect_their_bounds() {
    let net = NetworkSpec::parse(fixtures::TWO_SINK_NET).unwrap();
    let w = WeightFunction::homogeneous(net.ring(), Rational::new(1, 2)).unwrap();
    for seed in 0..4 {
        let k = assign_coefficients(&net, &CoefficientMode::Random(seed)).unwrap();
        let f = transfer_matrix(&k).unwrap();
        let msgs = all_messages(net.ring(), net.m());
        for t in net.sinks() {
            let view = sink_view(&net, &f, t, &msgs, &w).unwrap();
            let p = view.code.params();
            let Some(d) = p.d else { continue };
            if p.s < p.ell {
                continue;
            }
            let report = combined_bound(&w, p.n, p.s, p.ell, d).unwrap();
            if let Some(v) = report.value {
                assert!(BigUint::from(p.size) <= v, "seed {seed} sink {t}: {p} above {v}");
            }
        }
    }
}

#[test]
fn unit_coefficients_give_the_printed_parameters() {
    let net = NetworkSpec::parse(fixtures::TWO_SINK_NET).unwrap();
    let f = transfer_matrix(&assign_coefficients(&net, &net.default_mode()).unwrap()).unwrap();
    let w = WeightFunction::homogeneous(net.ring(), Rational::new(1, 2)).unwrap();
    let params = network_code_params(&net, &f, &all_messages(net.ring(), 2), &w).unwrap();
    assert_eq!(params.size(), 4);
    assert_eq!(params.sinks.iter().map(|s| s.n_t).collect::<Vec<_>>(), [2, 3]);
}

#[test]
fn small_optima_are_within_every_bound() {
    let f2 = WeightFunction::homogeneous(&"f2".parse().unwrap(), Rational::from(1)).unwrap();
    for (n, s, ell, d) in [(5, 5, 0, 3), (6, 6, 0, 3), (6, 5, 2, 2), (7, 7, 0, 3), (7, 7, 3, 3)] {
        let d = Rational::from(d);
        let best = exhaustive_optimum(&f2, n, s, ell, d).unwrap();
        for r in all_bounds(&f2, n, s, ell, d).unwrap() {
            if let Some(v) = &r.value {
                assert!(BigUint::from(best) <= *v, "n={n} s={s} ell={ell} d={d}: {best} > {} {v}", r.kind);
            }
        }
    }
}

#[test]
fn exhaustive_simulation_matches_the_code_distance() {
    // radius below d/2 on the embedded Z4 code is always corrected
    let net = NetworkSpec::parse(fixtures::Z4_ONE_SINK_NET).unwrap();
    let f = transfer_matrix(&assign_coefficients(&net, &net.default_mode()).unwrap()).unwrap();
    let msgs = ringcode::network::parse_messages(net.ring(), 6, fixtures::Z4_MESSAGES).unwrap();
    let sim = Simulation::new(&net, &f, &msgs, &lee()).unwrap();
    let stats = sim.run(&ErrorModel::ExhaustiveUpTo(Rational::from(2)), 1).unwrap();
    let c = stats.counts[0];
    assert_eq!(c.correct, c.total());
    assert!(c.total() > 0);
}
