use dqcopt::circuit::{Circuit, Gate};
use dqcopt::frontend::{emit_qasm, generate, load_corpus, parse_qasm_with_id, write_corpus, CorpusSpec, Family};
use dqcopt::sim::unitary_equal_up_to_phase;
use proptest::prelude::*;

#[test]
fn corpus_survives_disk_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let circuits = CorpusSpec::standard(3).circuits().unwrap();
    write_corpus(dir.path(), &circuits).unwrap();
    let mut loaded = load_corpus(dir.path()).unwrap();
    let mut expected = circuits.clone();
    loaded.sort_by(|a, b| a.id().cmp(b.id()));
    expected.sort_by(|a, b| a.id().cmp(b.id()));
    assert_eq!(loaded, expected);
}

#[test]
fn corpus_is_deterministic() {
    let a = CorpusSpec::standard(11).circuits().unwrap();
    let b = CorpusSpec::standard(11).circuits().unwrap();
    assert_eq!(a, b);
    assert_ne!(generate(Family::Random, 8, 11).unwrap(), generate(Family::Random, 8, 12).unwrap());
}

fn gate(width: usize) -> impl Strategy<Value = Gate> {
    let angle = -10.0f64..10.0;
    let pair = (0..width, 0..width).prop_filter("distinct", |(a, b)| a != b);
    prop_oneof![
        (0..width).prop_map(Gate::h),
        (0..width).prop_map(Gate::sdg),
        (angle.clone(), 0..width).prop_map(|(a, q)| Gate::rz(a, q)),
        (angle.clone(), angle.clone(), angle, 0..width).prop_map(|(a, b, c, q)| Gate::u3(a, b, c, q)),
        pair.clone().prop_map(|(a, b)| Gate::cx(a, b)),
        pair.prop_map(|(a, b)| Gate::swap(a, b)),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 200, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn emit_then_parse_is_identity(gates in (2usize..6).prop_flat_map(|w| prop::collection::vec(gate(w), 0..30).prop_map(move |g| (w, g)))) {
        let (width, gates) = gates;
        let c = Circuit::new("rt", width, gates).unwrap();
        let text = emit_qasm(&c).unwrap();
        let back = parse_qasm_with_id(&text, "rt").unwrap();
        prop_assert_eq!(&back, &c);
        prop_assert!(unitary_equal_up_to_phase(&back, &c, 1e-12).unwrap());
    }
}
