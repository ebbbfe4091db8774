use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::report::{PropertyId, PropertyReport, ReportPoint};
use super::stats::{affine_envelope, kendall_tau, log_log_slope, monotone_within_noise, weighted_linear_fit};
use super::{phi_estimate, phi_iterates, run_samples, EstimatorError, EstimatorOptions, ParamorphismEstimate};
use crate::braids::extract_with;
use crate::flows::{cap_twist, collar_cutoff_isotopy, l1_length, rotation, CircleFlow, Isotopy};
use crate::quasimorphisms::Quasimorphism;
use crate::sphere::{Disk, SpherePoint, Vec3};

/// Expected behavior of `Phi(f^k)` in `k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Trend {
    /// Slope confidence interval excludes 0 and the fit is linear.
    Growth,
    /// Slope confidence interval contains 0.
    Flat,
}

const R2_MIN: f64 = 0.99;
const EQUATOR_PROBES: usize = 100;
const EQUATOR_TOLERANCE: f64 = 1e-6;

fn point(k: f64, e: &ParamorphismEstimate) -> ReportPoint {
    ReportPoint::new(k, e.mean, e.stderr, e.total_samples())
}

fn combined(a: f64, b: f64) -> f64 {
    (a * a + b * b).sqrt()
}

/// Growth of `Phi_n(f^k)` over `ks`: weighted least-squares slope, its 95% interval
/// and `R^2`. Ratios `Phi(f^k)/k` are reported with a convergence flag.
pub fn phi_bar_estimate(
    f: &Isotopy,
    qm: &Quasimorphism,
    n: usize,
    ks: &[usize],
    trend: Trend,
    opts: &EstimatorOptions,
) -> Result<PropertyReport, EstimatorError> {
    if ks.len() < 3 || ks.windows(2).any(|w| w[0] >= w[1]) || ks[0] == 0 {
        return Err(EstimatorError::InvalidInput("iteration counts must be positive, increasing, at least 3".into()));
    }
    let estimates = phi_iterates(f, qm, n, ks, opts)?;
    let mut report = PropertyReport::new(PropertyId::P2, opts.seed);
    report.points = ks.iter().zip(&estimates).map(|(&k, e)| point(k as f64, e)).collect();
    let x: Vec<f64> = ks.iter().map(|&k| k as f64).collect();
    let y: Vec<f64> = estimates.iter().map(|e| e.mean).collect();
    let se: Vec<f64> = estimates.iter().map(|e| e.stderr).collect();
    let fit = weighted_linear_fit(&x, &y, &se).expect("three distinct iteration counts");
    report.constant("slope", fit.slope);
    report.constant("slope_ci_low", fit.slope_ci.0);
    report.constant("slope_ci_high", fit.slope_ci.1);
    report.constant("intercept", fit.intercept);
    if let Some(r2) = fit.r2 {
        report.constant("r2", r2);
    }
    let ratios: Vec<f64> = x.iter().zip(&y).map(|(k, v)| v / k).collect();
    let m = ks.len();
    let noise = combined(se[m - 1] / x[m - 1], se[m - 2] / x[m - 2]);
    let converged = (ratios[m - 1] - ratios[m - 2]).abs() <= 3.0 * noise + 0.05 * ratios[m - 1].abs();
    report.diagnostic("per_k_ratios", &ratios);
    report.diagnostic("converged", converged);
    report.diagnostic("failures", estimates.iter().map(|e| e.failures).max().unwrap_or(0));
    report.pass = match trend {
        Trend::Growth => !fit.slope_ci_contains(0.0) && fit.r2.is_some_and(|r2| r2 >= R2_MIN),
        Trend::Flat => fit.slope_ci_contains(0.0),
    };
    report.diagnostic("expected_trend", trend);
    Ok(report)
}

/// Additivity defect `Phi(g f) - Phi(f) - Phi(g)` per pair against the length of `g`,
/// estimated sample by sample on common configurations. Fits the minimal envelope
/// `|defect| <= C + D |g|_1` and tests whether `D` is significantly positive.
pub fn property1_scan(
    pairs: &[(Isotopy, Isotopy)],
    qm: &Quasimorphism,
    n: usize,
    opts: &EstimatorOptions,
) -> Result<PropertyReport, EstimatorError> {
    if pairs.is_empty() {
        return Err(EstimatorError::InvalidInput("no pairs".into()));
    }
    let mut report = PropertyReport::new(PropertyId::P1, opts.seed);
    let mut max_abs_sample = 0.0f64;
    for (i, (f, g)) in pairs.iter().enumerate() {
        let gf = f.then(g);
        let ext = &opts.extraction;
        let table = run_samples(n, opts, |_, x, z| {
            let v = |iso: &Isotopy| extract_with(iso, x, z, ext).map(|e| qm.evaluate(&e.word));
            Ok(vec![v(&gf)? - v(f)? - v(g)?])
        })?;
        for (_, values) in &table.strata {
            for v in values.iter().flatten() {
                max_abs_sample = max_abs_sample.max(v[0].abs());
            }
        }
        let e = table.estimate(0, opts.area_plus, &qm.name, opts.seed);
        report.points.push(point(i as f64, &e).with_length(l1_length(g)?));
    }
    let lengths: Vec<f64> = report.points.iter().map(|p| p.length.unwrap_or(0.0)).collect();
    let defects: Vec<f64> = report.points.iter().map(|p| p.value.abs()).collect();
    let se: Vec<f64> = report.points.iter().map(|p| p.stderr).collect();
    let env = affine_envelope(&lengths, &defects);
    report.constant("C", env.c);
    report.constant("D", env.d);
    if let Some(fit) = weighted_linear_fit(&lengths, &defects, &se) {
        report.constant("slope", fit.slope);
        report.diagnostic("d_significant", fit.slope_ci.0 > 0.0);
    }
    let positive: Vec<f64> = lengths.iter().copied().filter(|l| *l > 0.0).collect();
    let span = positive.iter().cloned().fold(0.0, f64::max) / positive.iter().cloned().fold(f64::INFINITY, f64::min);
    report.diagnostic("length_span_decades", if span.is_finite() { span.log10() } else { 0.0 });
    report.diagnostic("max_abs_sample_defect", max_abs_sample);
    report.diagnostic("constants", "empirical");
    report.pass = env.c.is_finite() && env.d.is_finite();
    Ok(report)
}

/// Largest latitude reached by the image of `probes` equally spaced equator points.
pub fn equator_displacement(h: &Isotopy, probes: usize) -> f64 {
    let points: Vec<SpherePoint> =
        (0..probes).map(|i| SpherePoint::from_lat_lon(0.0, 2.0 * PI * i as f64 / probes as f64)).collect();
    h.time_one_many(&points).iter().map(|p| p.latitude().abs()).fold(0.0, f64::max)
}

/// Boundedness on equator-preserving maps: `B = max |Phi(h)|` over the family, with a
/// Equator-preserving maps: polar rotations over `[0, 4 pi]`, then collar cutoffs
/// composed with twists supported in each hemisphere.
pub fn equator_family() -> Result<Vec<(f64, Isotopy)>, EstimatorError> {
    let mut family: Vec<(f64, Isotopy)> = (0..9).map(|i| {
        let a = 4.0 * PI * i as f64 / 8.0;
        (a, rotation(Vec3::z(), a))
    }).collect();
    for (i, angle) in [0.5, 1.0, 2.0, 4.0].into_iter().enumerate() {
        let north = cap_twist(SpherePoint::north(), 0.4, 1.2, angle)?;
        let south = cap_twist(SpherePoint::south(), 0.3, 1.0, -angle)?;
        let collar = collar_cutoff_isotopy(CircleFlow::rotation(angle), 0.1)?;
        family.push((4.0 * PI + 1.0 + i as f64, north.then(&south).then(&collar)));
    }
    Ok(family)
}

/// Kendall trend test of `|Phi|` against the family parameter, contrasted with the
/// iterates of `eggbeater` over `eggbeater_ks` (which must contain 3).
pub fn property3_check(
    family: &[(f64, Isotopy)],
    eggbeater: &Isotopy,
    eggbeater_ks: &[usize],
    qm: &Quasimorphism,
    n: usize,
    opts: &EstimatorOptions,
) -> Result<PropertyReport, EstimatorError> {
    if !eggbeater_ks.contains(&3) || eggbeater_ks.windows(2).any(|w| w[0] >= w[1]) {
        return Err(EstimatorError::InvalidInput("eggbeater iterates must be increasing and include 3".into()));
    }
    let mut report = PropertyReport::new(PropertyId::P3, opts.seed);
    let mut worst_probe = 0.0f64;
    for (_, h) in family {
        let d = equator_displacement(h, EQUATOR_PROBES);
        if d >= EQUATOR_TOLERANCE {
            return Err(EstimatorError::EquatorNotPreserved { max_displacement: d });
        }
        worst_probe = worst_probe.max(d);
    }
    for (param, h) in family {
        let e = phi_estimate(h, qm, n, opts)?;
        report.points.push(point(*param, &e));
    }
    let b = report.points.iter().map(|p| p.value.abs()).fold(0.0, f64::max);
    let params: Vec<f64> = family.iter().map(|(p, _)| *p).collect();
    let abs: Vec<f64> = report.points.iter().map(|p| p.value.abs()).collect();
    let kendall = kendall_tau(&params, &abs);

    let egg = phi_iterates(eggbeater, qm, n, eggbeater_ks, opts)?;
    let v: Vec<f64> = egg.iter().map(|e| e.mean).collect();
    let se: Vec<f64> = egg.iter().map(|e| e.stderr).collect();
    let v3 = v[eggbeater_ks.iter().position(|&k| k == 3).unwrap()];
    let monotone = monotone_within_noise(&v, &se);
    let last = v.len() - 1;
    let growing = v[last] - v[0] > 3.0 * combined(se[last], se[0]);

    report.constant("B", b);
    report.constant("eggbeater_k3", v3);
    report.diagnostic("kendall_tau", kendall.tau);
    report.diagnostic("kendall_p", kendall.p_value);
    report.diagnostic("equator_probe_max", worst_probe);
    report.diagnostic(
        "eggbeater",
        eggbeater_ks.iter().zip(&egg).map(|(&k, e)| point(k as f64, e)).collect::<Vec<_>>(),
    );
    report.diagnostic("eggbeater_monotone", monotone);
    report.diagnostic("eggbeater_growing", growing);
    report.pass = b < v3.abs() && monotone && growing;
    Ok(report)
}

/// `|Phi(f)|` against `|f|_1` over a family of flows: the minimal `A` with
/// `|Phi| <= A (|f|_1 + 1)` on every point, and outlier counts.
pub fn property4_scan(
    flows: &[Isotopy],
    qm: &Quasimorphism,
    n: usize,
    opts: &EstimatorOptions,
) -> Result<PropertyReport, EstimatorError> {
    let mut report = PropertyReport::new(PropertyId::P4, opts.seed);
    for (i, f) in flows.iter().enumerate() {
        let e = phi_estimate(f, qm, n, opts)?;
        report.points.push(point(i as f64, &e).with_length(l1_length(f)?));
    }
    let len = |p: &ReportPoint| p.length.unwrap_or(0.0) + 1.0;
    let ratio = |p: &ReportPoint| p.value.abs() / len(p);
    let a_hat = report.points.iter().map(ratio).fold(0.0, f64::max);
    let outliers = report.points.iter().filter(|p| p.value.abs() > a_hat * len(p) + 3.0 * p.stderr).count();
    // Leave-one-out: is a point above the envelope fitted on the others?
    let loo = (0..report.points.len())
        .filter(|&i| {
            let others = report.points.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, p)| ratio(p));
            let a = others.fold(0.0, f64::max);
            let p = &report.points[i];
            p.value.abs() - 3.0 * p.stderr > a * len(p)
        })
        .count();
    let positive: Vec<f64> = report.points.iter().filter_map(|p| p.length).filter(|l| *l > 0.0).collect();
    let decades = if positive.is_empty() {
        0.0
    } else {
        (positive.iter().cloned().fold(0.0, f64::max) / positive.iter().cloned().fold(f64::INFINITY, f64::min)).log10()
    };
    report.constant("A", a_hat);
    report.diagnostic("outliers", outliers);
    report.diagnostic("leave_one_out_outliers", loo);
    report.diagnostic("length_span_decades", decades);
    report.diagnostic("constants", "empirical");
    report.pass = flows.len() >= 20 && decades >= 2.0 && outliers == 0;
    Ok(report)
}

/// Certificates `|Phi(f_i)|` next to the length upper bounds `|f_i|_1` for a sequence of
/// maps; passes when the certificates increase beyond noise.
pub fn d1_lower_bound_report(
    sequence: &[Isotopy],
    qm: &Quasimorphism,
    n: usize,
    opts: &EstimatorOptions,
) -> Result<PropertyReport, EstimatorError> {
    if sequence.len() < 2 {
        return Err(EstimatorError::InvalidInput("need at least two maps".into()));
    }
    let mut report = PropertyReport::new(PropertyId::D1, opts.seed);
    for (i, f) in sequence.iter().enumerate() {
        let e = phi_estimate(f, qm, n, opts)?;
        let mut p = point((i + 1) as f64, &e).with_length(l1_length(f)?);
        p.value = p.value.abs();
        report.points.push(p);
    }
    let v: Vec<f64> = report.points.iter().map(|p| p.value).collect();
    let se: Vec<f64> = report.points.iter().map(|p| p.stderr).collect();
    let lengths: Vec<f64> = report.points.iter().map(|p| p.length.unwrap_or(0.0)).collect();
    let last = v.len() - 1;
    let monotone = monotone_within_noise(&v, &se);
    let growing = v[last] - v[0] > 3.0 * combined(se[last], se[0]);
    let x: Vec<f64> = (1..=v.len()).map(|i| i as f64).collect();
    if let Some(fit) = weighted_linear_fit(&x, &v, &se) {
        report.constant("certificate_slope", fit.slope);
    }
    if let Some(fit) = weighted_linear_fit(&x, &lengths, &vec![0.0; x.len()]) {
        report.constant("length_slope", fit.slope);
    }
    let gaps: Vec<f64> = lengths.iter().zip(&v).map(|(l, c)| l - c).collect();
    report.diagnostic("length_minus_certificate", gaps);
    report.diagnostic("monotone", monotone);
    report.diagnostic("constants", "empirical");
    report.pass = monotone && growing;
    Ok(report)
}

/// Lengths of the collar cutoff of `boundary` for each half-width; passes when the
/// log-log slope of length against width is at least 0.8.
pub fn frag_report(boundary: &CircleFlow, deltas: &[f64]) -> Result<PropertyReport, EstimatorError> {
    let mut report = PropertyReport::new(PropertyId::Frag, 0);
    for &d in deltas {
        let len = l1_length(&collar_cutoff_isotopy(boundary.clone(), d)?)?;
        report.points.push(ReportPoint::new(d, len, 0.0, 0));
    }
    let x: Vec<f64> = report.points.iter().map(|p| p.k_or_index).collect();
    let y: Vec<f64> = report.points.iter().map(|p| p.value).collect();
    let slope = log_log_slope(&x, &y).unwrap_or(f64::NAN);
    report.constant("loglog_slope", slope);
    report.pass = slope >= 0.8;
    Ok(report)
}

/// Probe points of a disk: a boundary ring and a sunflower of interior points.
fn disk_probes(disk: &Disk, probes: usize) -> Vec<SpherePoint> {
    const GOLDEN: f64 = 2.399_963_229_728_653;
    let c = disk.center;
    let axis = crate::sphere::orthogonal_unit(c.vector());
    let ring = probes.div_ceil(2).max(1);
    let interior = probes.saturating_sub(ring);
    let mut out = Vec::with_capacity(probes.max(1));
    for i in 0..ring {
        let p = c.rotated(&axis, disk.radius);
        out.push(p.rotated(c.vector(), 2.0 * PI * i as f64 / ring as f64));
    }
    for i in 0..interior {
        let r = disk.radius * ((i as f64 + 0.5) / interior as f64).sqrt();
        out.push(c.rotated(&axis, r).rotated(c.vector(), GOLDEN * i as f64));
    }
    out
}

/// `epsilon * Area(D)` with `epsilon` the least displacement of the probe points, when
/// the probe images all lie outside `D`; otherwise 0. The area is taken in the same
/// units as lengths (total sphere area `4 pi`).
pub fn displacement_lower_bound(f: &Isotopy, disk: &Disk, probes: usize) -> f64 {
    let pts = disk_probes(disk, probes);
    let images = f.time_one_many(&pts);
    let disjoint = images.iter().all(|q| q.angle_to(&disk.center) > disk.radius);
    if !disjoint {
        return 0.0;
    }
    let eps = pts.iter().zip(&images).map(|(p, q)| p.angle_to(q)).fold(f64::INFINITY, f64::min);
    eps * 4.0 * PI * disk.area()
}

/// Displacement bound against the length of `f`; passes when `0 < bound <= length + 1e-3`.
pub fn nondeg_report(f: &Isotopy, disk: &Disk, probes: usize) -> Result<PropertyReport, EstimatorError> {
    let bound = displacement_lower_bound(f, disk, probes);
    let length = l1_length(f)?;
    let mut report = PropertyReport::new(PropertyId::NonDeg, 0);
    report.points.push(ReportPoint::new(0.0, bound, 0.0, probes).with_length(length));
    report.constant("bound", bound);
    report.constant("length", length);
    report.pass = bound > 0.0 && bound <= length + 1e-3;
    Ok(report)
}
