use paramorphism::braids::BraidWord;
use paramorphism::quasimorphisms::{
    by_name, cross_linking_preset, defect_estimate, exponent_sum_qm, homogenize, random_pure_word, random_word,
    signature_qm, Domain, Quasimorphism,
};
use paramorphism::sphere::stream_rng;
use proptest::prelude::*;
use rand::Rng;

const N: usize = 5;

fn draw(qm: &Quasimorphism, rng: &mut impl Rng, len: usize) -> BraidWord {
    match qm.domain {
        Domain::All => random_word(rng, N, len),
        Domain::Pure => random_pure_word(rng, N, len),
    }
}

fn homomorphisms() -> Vec<Quasimorphism> {
    vec![exponent_sum_qm(), cross_linking_preset(N)]
}

#[test]
fn homomorphisms_are_additive() {
    let mut rng = stream_rng(3, 1);
    for qm in homomorphisms() {
        for _ in 0..10_000 {
            let a = draw(&qm, &mut rng, 12);
            let b = draw(&qm, &mut rng, 12);
            let ab = a.then(&b).unwrap();
            assert_eq!(qm.evaluate(&ab), qm.evaluate(&a) + qm.evaluate(&b), "{}: {a} | {b}", qm.name);
        }
    }
}

#[test]
fn inversion_negates() {
    let mut rng = stream_rng(3, 2);
    for qm in [exponent_sum_qm(), cross_linking_preset(N), signature_qm(N)] {
        for _ in 0..1000 {
            let a = draw(&qm, &mut rng, 15);
            let gap = (qm.evaluate(&a.inverse()) + qm.evaluate(&a)).abs();
            let allowed = if qm.homogeneous { 0.0 } else { qm.declared_defect };
            assert!(gap <= allowed, "{}: {a}", qm.name);
        }
    }
}

#[test]
fn conjugation_invariance() {
    let mut rng = stream_rng(3, 3);
    for qm in [exponent_sum_qm(), cross_linking_preset(N), signature_qm(N)] {
        for _ in 0..1000 {
            let a = draw(&qm, &mut rng, 12);
            let b = draw(&qm, &mut rng, 6);
            let conj = b.then(&a).unwrap().then(&b.inverse()).unwrap();
            let gap = (qm.evaluate(&conj) - qm.evaluate(&a)).abs();
            assert!(gap <= qm.declared_defect, "{}: {a} by {b}", qm.name);
        }
    }
}

#[test]
fn sampled_defects_respect_declarations() {
    let mut rng = stream_rng(3, 4);
    for qm in [exponent_sum_qm(), cross_linking_preset(N), signature_qm(N)] {
        let d = defect_estimate(&qm, &mut rng, N, 2000, 20);
        assert!(d <= qm.declared_defect, "{}: sampled {d} > declared {}", qm.name, qm.declared_defect);
    }
}

#[test]
fn homogeneous_plug_ins_scale_with_powers() {
    let mut rng = stream_rng(3, 5);
    for qm in homomorphisms() {
        assert!(qm.homogeneous);
        for _ in 0..200 {
            let w = draw(&qm, &mut rng, 10);
            for k in 1..=8 {
                let gap = (qm.evaluate(&w.power(k)) - k as f64 * qm.evaluate(&w)).abs();
                assert!(gap <= qm.declared_defect);
            }
        }
    }
}

#[test]
fn evaluators_by_name() {
    for name in ["exponent-sum", "cross-linking", "signature"] {
        assert_eq!(by_name(name, 4).unwrap().name, name);
    }
    assert!(by_name("bestvina-fujiwara", 4).is_none());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn homogenization_value_tracks_last_ratio(seed in 0u64..10_000, k_max in 2usize..12) {
        let mut rng = stream_rng(seed, 6);
        let qm = signature_qm(3);
        let w = random_word(&mut rng, 3, 8);
        let h = homogenize(&qm, &w, k_max, 0.05);
        prop_assert_eq!(h.per_k.len(), h.k_max);
        if h.converged {
            prop_assert!((h.value - h.per_k[h.k_max - 1]).abs() <= qm.declared_defect / h.k_max as f64);
        }
    }
}
