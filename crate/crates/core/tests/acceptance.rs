//! Acceptance criteria 1-12. Each test writes one `PASS`/`FAIL` line to stderr
//! (bypassing output capture) and then asserts.

mod common;

use std::f64::consts::PI;
use std::io::Write;

use common::all_words;
use common::seifert::seifert_signature;
use paramorphism::braids::{cocycle_check, ExtractionOptions};
use paramorphism::cli::{self, Experiment, ExperimentConfig, FlowPreset};
use paramorphism::estimator::{
    base_configuration, equator_family, frag_report, ishida_polynomial_prediction, nondeg_report, phi_bar_estimate,
    phi_estimate, phi_samples, property3_check, property4_scan, EstimatorOptions, IshidaSpec, Trend,
    ISHIDA_MONOMIALS,
};
use paramorphism::flows::{
    cap_twist, eggbeater_family, l1_length, rotation, standard_disks, CircleFlow, FullTwist, Isotopy,
};
use paramorphism::quasimorphisms::{cross_linking_preset, signature};
use paramorphism::sphere::{
    sample_configuration, stratum_volume, stream_rng, uniform_point, Disk, Hemisphere, SpherePoint, Vec3,
};
use rand::Rng;

const N: usize = 4;
const SAMPLES: usize = 2000;
const SEED: u64 = 7;

const COCYCLE_TRIALS: usize = 50;
const LENGTH_REL_TOL: f64 = 1e-3;
const SPLIT_SAMPLES: usize = 1000;
const GROWTH_KS: std::ops::RangeInclusive<usize> = 1..=20;
const P4_MIN_FLOWS: usize = 20;
const COLLAR_DELTAS: [f64; 4] = [0.2, 0.1, 0.05, 0.025];
const COLLAR_SLOPE_MIN: f64 = 0.8;
const DISPLACEMENT_SLACK: f64 = 1e-3;
const SIGNATURE_MAX_LEN: usize = 6;
const WORKER_COUNTS: [usize; 3] = [1, 4, 8];
const STDERR_RATIO_TOL: f64 = 0.2;
const STRATUM_DRAWS: usize = 100_000;
const STRATUM_SIGMAS: f64 = 3.0;
const ISHIDA_SPECS: usize = 100;

fn verdict(criterion: usize, name: &str, pass: bool, detail: String) {
    let tag = if pass { "PASS" } else { "FAIL" };
    let mut err = std::io::stderr().lock();
    let _ = writeln!(err, "{tag} criterion {criterion:>2} {name}: {detail}");
    assert!(pass, "criterion {criterion} ({name}) failed: {detail}");
}

fn opts() -> EstimatorOptions {
    EstimatorOptions::default().with_samples(SAMPLES).with_seed(SEED)
}

fn eggbeater() -> Isotopy {
    eggbeater_family(&standard_disks(), &[FullTwist::new(1, 3)], 1.0).unwrap()
}

fn random_axis(rng: &mut impl Rng) -> Vec3 {
    *uniform_point(rng).vector()
}

#[test]
fn criterion_01_cocycle() {
    let mut rng = stream_rng(SEED, 1);
    let egg = eggbeater();
    let egg_inv = egg.inverse();
    let z = base_configuration(N, 2);
    let opts = ExtractionOptions::default();
    let pick = |rng: &mut rand_chacha::ChaCha8Rng| match rng.gen_range(0..3) {
        0 => rotation(random_axis(rng), rng.gen_range(0.2..3.0)),
        1 => egg.clone(),
        _ => egg_inv.clone(),
    };
    let (mut agreed, mut words_equal, mut inadmissible) = (0, 0, 0);
    let mut checked = 0;
    while checked < COCYCLE_TRIALS {
        let f = pick(&mut rng);
        let g = pick(&mut rng);
        let x = sample_configuration(&mut rng, N, 0.05).unwrap();
        match cocycle_check(&f, &g, &x, &z, &opts) {
            Ok(r) => {
                checked += 1;
                agreed += r.invariants_equal as usize;
                words_equal += r.words_equal as usize;
            }
            Err(_) => inadmissible += 1,
        }
        assert!(inadmissible <= COCYCLE_TRIALS, "too many inadmissible triples");
    }
    verdict(
        1,
        "cocycle",
        agreed == COCYCLE_TRIALS,
        format!("{agreed}/{COCYCLE_TRIALS} invariant sets equal, {words_equal} words equal, {inadmissible} redrawn"),
    );
}

#[test]
fn criterion_02_length() {
    let len = l1_length(&rotation(Vec3::z(), 1.0)).unwrap();
    let rel = (len - PI * PI).abs() / (PI * PI);
    let zero = l1_length(&Isotopy::identity()).unwrap();
    verdict(
        2,
        "l1 length",
        rel < LENGTH_REL_TOL && zero == 0.0,
        format!("rotation(1) = {len:.8} (rel err {rel:.2e}), identity = {zero}"),
    );
}

#[test]
fn criterion_03_split_cancellation() {
    let f = cap_twist(SpherePoint::north(), 0.4, 1.2, 1.5).unwrap();
    let g = cap_twist(SpherePoint::south(), 0.3, 1.0, -2.0).unwrap();
    let fg = g.then(&f);
    let qm = cross_linking_preset(N);
    let samples = phi_samples(&fg, &qm, N, &opts().with_samples(SPLIT_SAMPLES)).unwrap();
    let values: Vec<Option<f64>> = samples.into_values().flatten().collect();
    let present = values.iter().flatten().count();
    let nonzero = values.iter().flatten().filter(|v| **v != 0.0).count();
    verdict(
        3,
        "split cancellation",
        values.len() >= SPLIT_SAMPLES && present == values.len() && nonzero == 0,
        format!("{present}/{} samples evaluated, {nonzero} nonzero", values.len()),
    );
}

#[test]
fn criterion_04_growth() {
    let qm = cross_linking_preset(N);
    let ks: Vec<usize> = GROWTH_KS.collect();
    let egg = phi_bar_estimate(&eggbeater(), &qm, N, &ks, Trend::Growth, &opts()).unwrap();
    let polar = phi_bar_estimate(&rotation(Vec3::z(), 1.0), &qm, N, &ks, Trend::Flat, &opts()).unwrap();
    let c = |r: &paramorphism::estimator::PropertyReport, k: &str| r.constants.get(k).copied().unwrap_or(f64::NAN);
    verdict(
        4,
        "growth",
        egg.pass && polar.pass,
        format!(
            "eggbeater slope {:.5} CI [{:.5}, {:.5}] R2 {:.5}; polar slope CI [{:.3}, {:.3}]",
            c(&egg, "slope"),
            c(&egg, "slope_ci_low"),
            c(&egg, "slope_ci_high"),
            c(&egg, "r2"),
            c(&polar, "slope_ci_low"),
            c(&polar, "slope_ci_high"),
        ),
    );
}

#[test]
fn criterion_05_equator_boundedness() {
    let qm = cross_linking_preset(N);
    let family = equator_family().unwrap();
    let r = property3_check(&family, &eggbeater(), &[1, 2, 3, 4, 5], &qm, N, &opts()).unwrap();
    verdict(
        5,
        "equator boundedness",
        r.pass,
        format!(
            "B = {:.4}, eggbeater k=3 = {:.4}, monotone {}, growing {}",
            r.constants["B"], r.constants["eggbeater_k3"], r.diagnostics["eggbeater_monotone"], r.diagnostics["eggbeater_growing"]
        ),
    );
}

#[test]
fn criterion_06_affine_bound() {
    let qm = cross_linking_preset(N);
    let tilt = Vec3::new(1.0, 0.5, 1.0).normalize();
    let mut flows: Vec<Isotopy> =
        (0..12).map(|i| rotation(tilt, 0.01 * 150f64.powf(i as f64 / 11.0))).collect();
    let egg = eggbeater();
    flows.extend((1..=8).map(|k| egg.iterate(k)));
    assert!(flows.len() >= P4_MIN_FLOWS);
    let r = property4_scan(&flows, &qm, N, &opts()).unwrap();
    verdict(
        6,
        "affine bound",
        r.pass,
        format!(
            "A = {:.4}, {} flows over {:.2} decades, outliers {}",
            r.constants["A"], flows.len(), r.diagnostics["length_span_decades"].as_f64().unwrap_or(f64::NAN), r.diagnostics["outliers"]
        ),
    );
}

#[test]
fn criterion_07_collar_scaling() {
    let r = frag_report(&CircleFlow::rotation(1.0), &COLLAR_DELTAS).unwrap();
    let slope = r.constants["loglog_slope"];
    let lengths: Vec<String> = r.points.iter().map(|p| format!("{:.4}", p.value)).collect();
    verdict(7, "collar scaling", slope >= COLLAR_SLOPE_MIN, format!("slope {slope:.4}, lengths [{}]", lengths.join(", ")));
}

#[test]
fn criterion_08_displacement() {
    let f = rotation(Vec3::x(), PI);
    let cap = Disk::with_area(SpherePoint::north(), 0.05).unwrap();
    let r = nondeg_report(&f, &cap, 400).unwrap();
    let (bound, length) = (r.constants["bound"], r.constants["length"]);
    verdict(
        8,
        "displacement",
        bound > 0.0 && bound <= length + DISPLACEMENT_SLACK,
        format!("bound {bound:.5} <= length {length:.5}"),
    );
}

#[test]
fn criterion_09_signature_oracle() {
    let mut checked = 0;
    let mut mismatches = Vec::new();
    for n in [2, 3] {
        for len in 0..=SIGNATURE_MAX_LEN {
            for w in all_words(n, len) {
                checked += 1;
                if signature(&w) != seifert_signature(&w) {
                    mismatches.push(w.to_string());
                }
            }
        }
    }
    let trefoil = signature(&"s1 s1 s1".parse().unwrap());
    verdict(
        9,
        "signature oracle",
        mismatches.is_empty() && trefoil == -2,
        format!("{checked} words, {} mismatches, trefoil {trefoil}", mismatches.len()),
    );
}

#[test]
fn criterion_10_determinism_and_scaling() {
    let dir = tempfile::tempdir().unwrap();
    let reports: Vec<Vec<u8>> = WORKER_COUNTS
        .iter()
        .map(|&workers| {
            let out = dir.path().join(format!("w{workers}"));
            let c = ExperimentConfig {
                experiment: Experiment::Estimate,
                flow: FlowPreset::Eggbeater,
                samples: SAMPLES,
                seed: SEED,
                workers,
                out: out.clone(),
                ..Default::default()
            };
            cli::run(&c).unwrap();
            std::fs::read(out.join("report.json")).unwrap()
        })
        .collect();
    let identical = reports.windows(2).all(|w| w[0] == w[1]);

    let qm = cross_linking_preset(N);
    let f = eggbeater().iterate(3);
    let small = phi_estimate(&f, &qm, N, &opts().with_samples(2 * SAMPLES)).unwrap();
    let large = phi_estimate(&f, &qm, N, &opts().with_samples(4 * SAMPLES)).unwrap();
    let ratio = small.stderr / large.stderr;
    let within = (ratio / 2f64.sqrt() - 1.0).abs() <= STDERR_RATIO_TOL;
    verdict(
        10,
        "determinism and scaling",
        identical && within,
        format!("reports identical across workers {WORKER_COUNTS:?}: {identical}; stderr ratio {ratio:.4}"),
    );
}

#[test]
fn criterion_11_stratum_weights() {
    let n = 4;
    let mut rng = stream_rng(SEED, 11);
    let mut counts = vec![0usize; n + 1];
    for _ in 0..STRATUM_DRAWS {
        let x = sample_configuration(&mut rng, n, 0.0).unwrap();
        counts[x.count_in(&Vec3::z(), Hemisphere::Plus)] += 1;
    }
    let draws = STRATUM_DRAWS as f64;
    let mut worst = 0.0f64;
    for (k, &c) in counts.iter().enumerate() {
        let p = stratum_volume(n, k, 0.5);
        let sigma = (draws * p * (1.0 - p)).sqrt();
        worst = worst.max((c as f64 - draws * p).abs() / sigma);
    }
    let freq2 = counts[2] as f64 / draws;
    verdict(
        11,
        "stratum weights",
        worst <= STRATUM_SIGMAS && stratum_volume(4, 2, 0.5) == 0.375,
        format!("k=2 frequency {freq2:.5} vs 0.375, worst deviation {worst:.2} sigma"),
    );
}

#[test]
fn criterion_12_ishida() {
    let mut rng = stream_rng(SEED, 12);
    let mut exact = 0;
    for _ in 0..ISHIDA_SPECS {
        let areas: [f64; 4] = std::array::from_fn(|_| rng.gen_range(0.01..0.1));
        let coefficients = ISHIDA_MONOMIALS
            .iter()
            .map(|m| (m.iter().map(|i| i.to_string()).collect::<String>(), rng.gen_range(-2.0..2.0)))
            .collect();
        let base = IshidaSpec { areas, scale: 1.0, b: Some(rng.gen_range(-2.0..2.0)), coefficients };
        let r = [0.25, 0.5, 2.0][rng.gen_range(0..3)];
        let scaled = IshidaSpec { scale: r, ..base.clone() };
        let p = ishida_polynomial_prediction(&base).unwrap();
        let pr = ishida_polynomial_prediction(&scaled).unwrap();
        exact += (pr == r.powi(4) * p) as usize;
    }
    let b_only = ishida_polynomial_prediction(&IshidaSpec::b_only([0.1; 4], 1.0)).unwrap();
    verdict(
        12,
        "ishida homogeneity",
        exact == ISHIDA_SPECS && (b_only - 2.4e-3).abs() <= 1e-15,
        format!("{exact}/{ISHIDA_SPECS} exact, b-only value {b_only:e}"),
    );
}
