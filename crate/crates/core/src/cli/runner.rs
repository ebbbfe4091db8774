use std::fs;

use serde_json::json;

use super::config::{Experiment, ExperimentConfig, FlowPreset};
use crate::estimator::{
    base_configuration, d1_lower_bound_report, equator_family, frag_report, nondeg_report, phi_bar_estimate, phi_estimate, property1_scan, property3_check,
    property4_scan, EstimatorError, EstimatorOptions, PropertyId, PropertyReport, ReportPoint, Trend,
};
use crate::flows::{
    collar_cutoff_isotopy, eggbeater_family, l1_length, rotation, standard_disks, CircleFlow, FlowError,
    FullTwist, Isotopy, RandomFourier,
};
use crate::quasimorphisms::{by_name, Quasimorphism};
use crate::sphere::{stream_rng, Disk, SpherePoint, Vec3};

/// Exit codes of `run`.
pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

#[derive(Debug)]
pub struct RunOutcome {
    pub report: PropertyReport,
    /// Error message when the experiment failed numerically.
    pub error: Option<String>,
    pub exit_code: i32,
}

fn axis(c: &ExperimentConfig) -> Vec3 {
    match c.axis.as_str() {
        "x" => Vec3::x(),
        "y" => Vec3::y(),
        _ => Vec3::z(),
    }
}

/// The isotopy selected by the flow preset.
pub fn build_flow(c: &ExperimentConfig) -> Result<Isotopy, FlowError> {
    match c.flow {
        FlowPreset::Rotation => Ok(rotation(axis(c), c.angle)),
        FlowPreset::Eggbeater => eggbeater_family(&standard_disks(), &[FullTwist::new(1, 3)], c.scale),
        FlowPreset::Collar => collar_cutoff_isotopy(CircleFlow::rotation(c.angle), c.delta),
        FlowPreset::RandomFourier => {
            let mut rng = stream_rng(c.seed, 0xf0);
            Ok(Isotopy::from_hamiltonian(RandomFourier::sample(&mut rng, 3.0, 6, c.amplitude)))
        }
    }
}

fn logspace(lo: f64, hi: f64, m: usize) -> Vec<f64> {
    (0..m).map(|i| lo * (hi / lo).powf(i as f64 / (m - 1) as f64)).collect()
}

fn run_experiment(c: &ExperimentConfig, qm: &Quasimorphism) -> Result<PropertyReport, EstimatorError> {
    let opts = EstimatorOptions::default().with_samples(c.samples).with_seed(c.seed).with_workers(c.workers);
    let ks = c.ks().map_err(|e| EstimatorError::InvalidInput(e.0))?;
    let f = build_flow(c)?;
    match c.experiment {
        Experiment::Estimate => {
            let e = phi_estimate(&f, qm, c.n, &opts)?;
            let mut r = PropertyReport::new(PropertyId::Estimate, c.seed);
            r.points.push(ReportPoint::new(0.0, e.mean, e.stderr, e.total_samples()));
            r.constant("mean", e.mean);
            r.constant("stderr", e.stderr);
            r.diagnostic("estimate", &e);
            r.pass = true;
            Ok(r)
        }
        Experiment::Length => {
            let len = l1_length(&f)?;
            let mut r = PropertyReport::new(PropertyId::Length, c.seed);
            r.points.push(ReportPoint::new(0.0, len, 0.0, 0));
            r.constant("length", len);
            r.pass = len.is_finite();
            Ok(r)
        }
        Experiment::P2 => {
            let trend = if c.flow == FlowPreset::Rotation && c.axis == "z" { Trend::Flat } else { Trend::Growth };
            phi_bar_estimate(&f, qm, c.n, &ks, trend, &opts)
        }
        Experiment::P1 => {
            let tilt = Vec3::new(1.0, 0.0, 1.0).normalize();
            let pairs: Vec<(Isotopy, Isotopy)> =
                logspace(0.02, 2.0, 10).into_iter().map(|a| (f.clone(), rotation(tilt, a))).collect();
            property1_scan(&pairs, qm, c.n, &opts)
        }
        Experiment::P3 => {
            let egg = eggbeater_family(&standard_disks(), &[FullTwist::new(1, 3)], c.scale)?;
            let k_max = ks.last().copied().unwrap_or(5).max(3);
            let egg_ks: Vec<usize> = (1..=k_max).collect();
            property3_check(&equator_family()?, &egg, &egg_ks, qm, c.n, &opts)
        }
        Experiment::P4 => {
            let flows: Vec<Isotopy> = match c.flow {
                FlowPreset::Eggbeater => ks.iter().map(|&k| f.iterate(k)).collect(),
                FlowPreset::Rotation => {
                    let tilt = Vec3::new(1.0, 0.5, 1.0).normalize();
                    logspace(0.01, 1.5, 20).into_iter().map(|a| rotation(tilt, a)).collect()
                }
                _ => {
                    let mut rng = stream_rng(c.seed, 0xf4);
                    let base: Vec<RandomFourier> = (0..20).map(|_| RandomFourier::sample(&mut rng, 3.0, 6, 1.0)).collect();
                    base.into_iter()
                        .zip(logspace(0.01, 1.5, 20))
                        .map(|(h, a)| Isotopy::from_hamiltonian(h.scaled(a)))
                        .collect()
                }
            };
            property4_scan(&flows, qm, c.n, &opts)
        }
        Experiment::Frag => frag_report(&CircleFlow::rotation(c.angle), &[0.2, 0.1, 0.05, 0.025]),
        Experiment::Nondeg => {
            let cap = Disk::with_area(SpherePoint::north(), 0.05)?;
            nondeg_report(&f, &cap, 400)
        }
        Experiment::D1 => {
            let seq: Vec<Isotopy> = ks.iter().map(|&k| f.iterate(k)).collect();
            d1_lower_bound_report(&seq, qm, c.n, &opts)
        }
    }
}

/// Runs the configured experiment and writes `report.json` and `points.csv` into the
/// output directory. Numerical failures produce a failing report carrying the error.
pub fn run(c: &ExperimentConfig) -> std::io::Result<RunOutcome> {
    let qm = by_name(&c.qm, c.n).expect("validated evaluator");
    let (mut report, error) = match run_experiment(c, &qm) {
        Ok(r) => (r, None),
        Err(e) => {
            let property = match c.experiment {
                Experiment::P1 => PropertyId::P1,
                Experiment::P2 => PropertyId::P2,
                Experiment::P3 => PropertyId::P3,
                Experiment::P4 => PropertyId::P4,
                Experiment::Frag => PropertyId::Frag,
                Experiment::Nondeg => PropertyId::NonDeg,
                Experiment::D1 => PropertyId::D1,
                Experiment::Estimate => PropertyId::Estimate,
                Experiment::Length => PropertyId::Length,
            };
            let mut r = PropertyReport::new(property, c.seed);
            r.diagnostic("error", json!({ "kind": "NumericalFailure", "message": e.to_string() }));
            (r, Some(e.to_string()))
        }
    };
    report.seed = c.seed;
    let bases: std::collections::BTreeMap<String, Vec<[f64; 3]>> = (2..=c.n - 2)
        .map(|k| (k.to_string(), base_configuration(c.n, k).points().iter().map(|p| p.coords()).collect()))
        .collect();
    report.diagnostic("base_configuration", bases);
    report.config_hash = Some(c.hash());
    report.manifest = Some(qm.manifest());
    fs::create_dir_all(&c.out)?;
    fs::write(c.out.join("report.json"), report.to_json())?;
    fs::write(c.out.join("points.csv"), report.to_csv())?;
    let exit_code = match (&error, report.pass) {
        (Some(_), _) => EXIT_NUMERICAL,
        (None, true) => EXIT_PASS,
        (None, false) => EXIT_FAIL,
    };
    Ok(RunOutcome { report, error, exit_code })
}
