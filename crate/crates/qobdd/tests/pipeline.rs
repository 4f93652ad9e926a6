//! End-to-end checks across the synthesis pipeline: catalogue entry ->
//! sampled parameter set -> program -> exhaustive sweep, with the closed
//! forms as independent oracles for every probability the simulator
//! produces.

use qobdd::bounds::check_width_bound;
use qobdd::zoo;
use qobdd::{
    build_general, build_single, closed_form_general, closed_form_single, sample_good_set,
    Characteristic, ErrorClass, FingerprintSpec, Modulus, QbpProgram, ZooEntry,
};

fn index_to_bits(idx: u64, n: usize) -> Vec<bool> {
    (0..n).map(|i| (idx >> i) & 1 == 1).collect()
}

fn single_spec(entry: &ZooEntry, epsilon: f64, seed: u64) -> FingerprintSpec {
    let ks = sample_good_set(entry.modulus(), epsilon, seed, 256)
        .unwrap_or_else(|e| panic!("no good set for {} (m={}): {e}", entry.name(), entry.modulus()));
    FingerprintSpec::new(Characteristic::from_single(entry.poly().clone()), ks).unwrap()
}

fn sweep_agreement(
    entry: &ZooEntry,
    spec: &FingerprintSpec,
    program: &QbpProgram,
    general: bool,
) -> f64 {
    let n = entry.vars();
    let mut worst = 0.0f64;
    for idx in 0..(1u64 << n) {
        let input = index_to_bits(idx, n);
        let sim = program.accept_probability(&input).unwrap();
        let closed = if general {
            closed_form_general(spec, &input).unwrap()
        } else {
            closed_form_single(spec, &input).unwrap()
        };
        worst = worst.max((sim - closed).abs());
    }
    worst
}

#[test]
fn catalogue_entries_run_one_sided_through_the_pipeline() {
    // (entry, epsilon): m = 3 sits exactly on the 1/4 boundary, so it needs
    // a slightly looser epsilon than the rest.
    let cases: Vec<(ZooEntry, f64)> = vec![
        (zoo::mod_m(6, &Modulus::from_u64(3).unwrap()).unwrap(), 0.3),
        (zoo::mod_m_weighted(5, &Modulus::from_u64(5).unwrap()).unwrap(), 0.25),
        (zoo::eq(3).unwrap(), 0.25),
        (zoo::palindrome(6).unwrap(), 0.25),
        (zoo::perm(2).unwrap(), 0.25),
    ];
    for (entry, epsilon) in cases {
        let spec = single_spec(&entry, epsilon, 7);
        let program = build_single(&spec).unwrap();

        assert!(program.is_read_once(), "{}", entry.name());
        assert_eq!(program.measures().length, entry.vars());
        assert_eq!(program.measures().width, 2 * spec.t());

        let report = program
            .classify_error(|input: &[bool]| entry.truth(input), 22)
            .unwrap();
        match report.classification {
            ErrorClass::OneSided { error } => {
                assert!(error < epsilon, "{}: error {error} >= {epsilon}", entry.name())
            }
            other => panic!("{}: expected one-sided, got {other:?}", entry.name()),
        }
        assert!(report.max_norm_deviation < 1e-9);

        let worst = sweep_agreement(&entry, &spec, &program, false);
        assert!(worst < 1e-9, "{}: worst gap {worst}", entry.name());
    }
}

#[test]
fn general_construction_single_polynomial_bound() {
    // One polynomial through the multi-target construction: positives hit 1,
    // negatives stay at or below 1/2 + sqrt(epsilon)/2.
    let epsilon = 0.25;
    let entry = zoo::eq(3).unwrap();
    let spec = single_spec(&entry, epsilon, 7);
    let program = build_general(&spec).unwrap();
    assert_eq!(program.dim(), 2 * spec.t());
    assert!(program.is_read_once());

    let bound = 0.5 + epsilon.sqrt() / 2.0;
    for idx in 0..(1u64 << entry.vars()) {
        let input = index_to_bits(idx, entry.vars());
        let p = program.accept_probability(&input).unwrap();
        if entry.truth(&input) {
            assert!((p - 1.0).abs() < 1e-9);
        } else {
            assert!(p <= bound + 1e-9, "input {idx:b}: {p} > {bound}");
        }
    }
    let worst = sweep_agreement(&entry, &spec, &program, true);
    assert!(worst < 1e-9);
}

#[test]
fn equality_acceptance_is_symmetric_under_block_swap() {
    let entry = zoo::eq(3).unwrap();
    let spec = single_spec(&entry, 0.25, 7);
    let program = build_single(&spec).unwrap();
    for idx in 0..(1u64 << 6) {
        let input = index_to_bits(idx, 6);
        let mut swapped = input.clone();
        swapped.rotate_left(3);
        let a = program.accept_probability(&input).unwrap();
        let b = program.accept_probability(&swapped).unwrap();
        assert!((a - b).abs() < 1e-12, "idx {idx}: {a} vs {b}");
    }
}

#[test]
fn rotation_programs_stay_real() {
    let entry = zoo::palindrome(5).unwrap();
    let spec = single_spec(&entry, 0.25, 7);
    let program = build_single(&spec).unwrap();
    for idx in 0..(1u64 << 5) {
        let state = program.run(&index_to_bits(idx, 5)).unwrap();
        for amp in state {
            assert!(amp.im.abs() < 1e-12);
        }
    }
}

#[test]
fn measured_widths_respect_the_deterministic_lower_bound() {
    let cases: Vec<(ZooEntry, f64)> = vec![
        (zoo::mod_m(6, &Modulus::from_u64(3).unwrap()).unwrap(), 0.3),
        (zoo::eq(3).unwrap(), 0.25),
        (zoo::palindrome(6).unwrap(), 0.25),
    ];
    for (entry, epsilon) in cases {
        let spec = single_spec(&entry, epsilon, 7);
        let program = build_single(&spec).unwrap();
        let report = program
            .classify_error(|input: &[bool]| entry.truth(input), 22)
            .unwrap();
        let error = match report.classification {
            ErrorClass::OneSided { error } => error,
            other => panic!("{}: {other:?}", entry.name()),
        };
        let margin = 0.5 - error;
        let order: Vec<usize> = (1..=entry.vars()).collect();
        assert!(
            check_width_bound(&program, |input: &[bool]| entry.truth(input), &order, margin)
                .unwrap(),
            "{} violates the width bound",
            entry.name()
        );
    }
}

#[test]
fn interchange_round_trip_preserves_probabilities() {
    let entry = zoo::eq(3).unwrap();
    let spec = single_spec(&entry, 0.25, 7);
    let program = build_single(&spec).unwrap();
    let json = serde_json::to_string(&program).unwrap();
    let back: QbpProgram = serde_json::from_str(&json).unwrap();
    assert_eq!(back.measures(), program.measures());
    for idx in 0..(1u64 << 6) {
        let input = index_to_bits(idx, 6);
        let a = program.accept_probability(&input).unwrap();
        let b = back.accept_probability(&input).unwrap();
        // densification reorders floating-point work, so allow rounding noise
        assert!((a - b).abs() < 1e-12);
    }
    // a second trip through JSON is bit-identical: dense stays dense
    let json2 = serde_json::to_string(&back).unwrap();
    let back2: QbpProgram = serde_json::from_str(&json2).unwrap();
    for idx in 0..(1u64 << 6) {
        let input = index_to_bits(idx, 6);
        assert_eq!(
            back.accept_probability(&input).unwrap(),
            back2.accept_probability(&input).unwrap()
        );
    }
}
