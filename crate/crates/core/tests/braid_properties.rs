use paramorphism::braids::{
    extract_with, pole_sensitivity, sphere_relation_multiplicities, BraidInvariants, BraidWord, ExtractionOptions,
};
use paramorphism::estimator::base_configuration;
use paramorphism::flows::{eggbeater_family, rotation, standard_disks, FullTwist, Isotopy};
use paramorphism::sphere::{
    geodesic, hemisphere_of, sample_configuration, stream_rng, uniform_in_cap, uniform_point, Configuration,
    SpherePoint, Vec3,
};
use proptest::prelude::*;
use rand::Rng;

fn eggbeater() -> Isotopy {
    eggbeater_family(&standard_disks(), &[FullTwist::new(1, 3)], 1.0).unwrap()
}

fn flow(choice: u8, rng: &mut impl Rng) -> Isotopy {
    match choice % 4 {
        0 => eggbeater(),
        1 => eggbeater().iterate(2).inverse(),
        2 => rotation(*uniform_point(rng).vector(), rng.gen_range(0.3..3.0)),
        _ => rotation(Vec3::x(), rng.gen_range(0.3..3.0)),
    }
}

fn clearance(pole: &SpherePoint, x: &Configuration, z: &Configuration) -> f64 {
    x.points()
        .iter()
        .zip(z.points())
        .flat_map(|(p, q)| {
            let g = geodesic(p, q).unwrap();
            (0..=50).map(move |i| g.at(i as f64 / 50.0))
        })
        .map(|p| p.angle_to(pole))
        .fold(f64::INFINITY, f64::min)
}

#[test]
fn matched_labels_give_pure_braids() {
    let mut rng = stream_rng(5, 1);
    for i in 0..40u8 {
        let f = flow(i, &mut rng);
        let x = sample_configuration(&mut rng, 5, 0.05).unwrap();
        if let Ok(e) = extract_with(&f, &x, &x, &ExtractionOptions::default()) {
            assert!(e.word.is_pure(), "{}", e.word);
        }
    }
}

/// Poles reachable from the chart pole without crossing any strand give identical
/// invariants. The eggbeater support and rotations about the pole axis stay clear of
/// a neighborhood of the pole, and so do the tails by construction of `x`.
#[test]
fn projection_stable_near_the_chart_pole() {
    let opts = ExtractionOptions::default();
    let pole = opts.chart.pole();
    let z = base_configuration(4, 2);
    let mut rng = stream_rng(5, 2);
    let mut checked = 0;
    while checked < 10 {
        let x = sample_configuration(&mut rng, 4, 0.05).unwrap();
        if clearance(&pole, &x, &z) < 0.3 {
            continue;
        }
        let f = if checked % 2 == 0 { eggbeater() } else { rotation(Vec3::x(), rng.gen_range(0.5..3.0)) };
        let poles: Vec<SpherePoint> = (0..20).map(|_| uniform_in_cap(&mut rng, &pole, 0.05)).collect();
        let s = pole_sensitivity(&f, &x, &z, &poles, &opts).unwrap();
        assert_eq!(s.inadmissible, 0);
        assert_eq!(s.agreeing, poles.len(), "{s:?}");
        checked += 1;
    }
}

/// Arbitrary poles change the planar word only by strands encircling the pole, which
/// are sphere relations.
#[test]
fn projection_stable_modulo_sphere_relations() {
    let opts = ExtractionOptions::default();
    let z = base_configuration(4, 2);
    let mut rng = stream_rng(5, 3);
    let mut checked = 0;
    for i in 0..8u8 {
        let f = flow(i, &mut rng);
        let x = sample_configuration(&mut rng, 4, 0.05).unwrap();
        let poles: Vec<SpherePoint> = (0..20).map(|_| uniform_point(&mut rng)).collect();
        let Ok(s) = pole_sensitivity(&f, &x, &z, &poles, &opts) else { continue };
        assert!(s.sphere_relation_only(), "{s:?}");
        checked += 1;
    }
    assert!(checked >= 6);
}

#[test]
fn sphere_relation_decomposition() {
    // Strand 1 encircling the other three.
    let around = BraidWord::parse_with_strands("s1 s2 s3 s3 s2 s1", 4).unwrap();
    let base = BraidWord::full_twist(4, 1, 3, 1).unwrap();
    let moved = base.then(&around).unwrap();
    let m = sphere_relation_multiplicities(&BraidInvariants::of(&moved), &BraidInvariants::of(&base)).unwrap();
    assert_eq!(m, vec![1, 0, 0, 0]);
    let off = BraidWord::full_twist(4, 2, 3, 1).unwrap();
    assert!(sphere_relation_multiplicities(&BraidInvariants::of(&off), &BraidInvariants::of(&BraidWord::empty(4)))
        .is_none());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    /// Perturbing the base configuration within its strata keeps every invariant.
    #[test]
    fn tail_stable(seed in 0u64..1000, choice in 0u8..4) {
        let mut rng = stream_rng(seed, 4);
        let f = flow(choice, &mut rng);
        let x = sample_configuration(&mut rng, 4, 0.05).unwrap();
        let z = base_configuration(4, 2);
        let nearby: Vec<SpherePoint> =
            z.points().iter().map(|p| p.rotated(uniform_point(&mut rng).vector(), 1e-3)).collect();
        let z2 = Configuration::new(nearby).unwrap();
        let axis = Vec3::z();
        for (p, q) in z.points().iter().zip(z2.points()) {
            prop_assume!(hemisphere_of(p, &axis) == hemisphere_of(q, &axis));
        }
        let opts = ExtractionOptions::default();
        if let (Ok(a), Ok(b)) = (extract_with(&f, &x, &z, &opts), extract_with(&f, &x, &z2, &opts)) {
            prop_assert_eq!(BraidInvariants::of(&a.word), BraidInvariants::of(&b.word));
        }
    }
}
