use dqcopt::circuit::{Circuit, Gate};
use dqcopt::frontend::CorpusSpec;
use dqcopt::optimizer::{self, optimize, PASSES};
use dqcopt::sim::unitary_equal_up_to_phase;
use proptest::prelude::*;

const TOL: f64 = 1e-7;

fn gate_strategy(width: usize) -> impl Strategy<Value = Gate> {
    let q = 0..width;
    let angle = prop_oneof![
        Just(std::f64::consts::FRAC_PI_2),
        Just(-std::f64::consts::FRAC_PI_2),
        -3.2f64..3.2,
    ];
    let pair = (0..width, 0..width).prop_filter("distinct", |(a, b)| a != b);
    let triple = (0..width, 0..width, 0..width).prop_filter("distinct", |(a, b, c)| a != b && b != c && a != c);
    let one = (0..14usize, q, angle.clone(), angle.clone(), angle).prop_map(|(k, q, a, b, c)| match k {
        0 => Gate::x(q),
        1 => Gate::y(q),
        2 => Gate::z(q),
        3 | 4 => Gate::h(q),
        5 => Gate::s(q),
        6 => Gate::sdg(q),
        7 => Gate::t(q),
        8 => Gate::tdg(q),
        9 => Gate::rx(a, q),
        10 => Gate::ry(a, q),
        11 | 12 => Gate::rz(a, q),
        _ => Gate::u3(a, b, c, q),
    });
    let two = (0..4usize, pair).prop_map(|(k, (a, b))| match k {
        0 | 1 => Gate::cx(a, b),
        2 => Gate::cz(a, b),
        _ => Gate::swap(a, b),
    });
    if width >= 3 {
        prop_oneof![5 => one, 4 => two, 1 => triple.prop_map(|(a, b, c)| Gate::ccx(a, b, c))].boxed()
    } else {
        prop_oneof![5 => one, 4 => two].boxed()
    }
}

fn circuit_strategy() -> impl Strategy<Value = Circuit> {
    (2usize..=5)
        .prop_flat_map(|w| (Just(w), prop::collection::vec(gate_strategy(w), 0..40)))
        .prop_map(|(w, gates)| Circuit::new("rand", w, gates).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 300, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn every_pass_preserves_semantics(c in circuit_strategy()) {
        for (name, pass) in PASSES {
            let (out, report) = pass(&c);
            prop_assert!(unitary_equal_up_to_phase(&c, &out, TOL).unwrap(), "{name} changed the unitary");
            prop_assert!(report.iterations >= 1);
            let (before, after) = (c.gate_counts(), out.gate_counts());
            prop_assert!(after.two <= before.two, "{name} raised 2Q count");
            prop_assert!(after.total() <= before.total(), "{name} raised total count");
            if name == "collect_and_resynthesize_blocks" {
                prop_assert_eq!(after.three, before.three);
            } else {
                prop_assert!(after.three <= before.three);
                prop_assert!(after.one <= before.one, "{name} raised 1Q count");
            }
        }
    }

    #[test]
    fn optimize_is_sound_and_idempotent(c in circuit_strategy()) {
        let (once, reports) = optimize(&c);
        prop_assert!(unitary_equal_up_to_phase(&c, &once, TOL).unwrap());
        prop_assert!(optimizer::rounds(&reports) <= optimizer::MAX_OPTIMIZE_ITERATIONS);
        let (twice, _) = optimize(&once);
        prop_assert_eq!(once.gates(), twice.gates());
    }
}

#[test]
fn corpus_circuits_within_oracle_width() {
    for c in CorpusSpec::standard(7).with_max_width(10).circuits().unwrap() {
        let (out, _) = optimize(&c);
        assert!(unitary_equal_up_to_phase(&c, &out, TOL).unwrap(), "{}", c.id());
        assert!(out.gate_counts().total() <= c.gate_counts().total(), "{}", c.id());
        let (again, _) = optimize(&out);
        assert_eq!(again.gates(), out.gates(), "{}", c.id());
    }
}
