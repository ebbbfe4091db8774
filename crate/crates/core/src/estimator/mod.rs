//! Stratified Monte Carlo estimation of the functional
//! `Phi_n(f) = sum_{k=2}^{n-2} vol(X_{n,k}) E_k[ qm(gamma(f, x)) ]`
//! and the property experiments built on it.
//!
//! Samples are drawn in blocks of `BLOCK` configurations per stratum; every block
//! has its own random stream, so results do not depend on how blocks are scheduled.
//! Per-sample values are reduced by pairwise summation in sample order.

mod ishida;
mod properties;
mod report;
pub mod stats;

use std::collections::BTreeMap;
use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::braids::{braid_compose, extract_with, BraidError, BraidWord, ExtractionOptions};
use crate::flows::{FlowError, Isotopy};
use crate::numerics::pairwise_sum;
use crate::quasimorphisms::Quasimorphism;
use crate::sphere::{sample_stratum, stratum_volume, stream_rng, Configuration, SphereError, SpherePoint};

pub use ishida::{ishida_polynomial_prediction, IshidaSpec, ISHIDA_MONOMIALS};
pub use properties::{
    d1_lower_bound_report, displacement_lower_bound, equator_displacement, equator_family, frag_report, nondeg_report,
    phi_bar_estimate, property1_scan, property3_check, property4_scan, Trend,
};
pub use report::{PropertyId, PropertyReport, ReportPoint};

/// Configurations per random stream.
pub const BLOCK: usize = 64;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EstimatorError {
    #[error("strand count {0} must exceed 3")]
    InvalidStrandCount(usize),
    #[error("{0} samples per stratum, need at least 10")]
    TooFewSamples(usize),
    #[error("{failures} of {total} samples failed, above the {limit} limit: {last}")]
    FailureRateExceeded { failures: usize, total: usize, limit: f64, last: String },
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("map moves the equator by {max_displacement}")]
    EquatorNotPreserved { max_displacement: f64 },
    #[error("missing polynomial coefficients: {0}")]
    IncompleteCoefficients(String),
    #[error(transparent)]
    Flow(#[from] FlowError),
    #[error(transparent)]
    Braid(#[from] BraidError),
    #[error(transparent)]
    Sphere(#[from] SphereError),
}

#[derive(Debug, Clone, PartialEq)]
pub struct EstimatorOptions {
    /// Total samples, split evenly over the strata.
    pub samples: usize,
    pub seed: u64,
    /// Worker threads; changes throughput only.
    pub workers: usize,
    /// Normalized area of the northern region.
    pub area_plus: f64,
    pub extraction: ExtractionOptions,
    pub max_failure_rate: f64,
    pub separation_floor: f64,
}

impl Default for EstimatorOptions {
    fn default() -> Self {
        Self {
            samples: 2000,
            seed: 0,
            workers: 1,
            area_plus: 0.5,
            extraction: ExtractionOptions::default(),
            max_failure_rate: 0.01,
            separation_floor: 1e-9,
        }
    }
}

impl EstimatorOptions {
    pub fn with_samples(mut self, samples: usize) -> Self {
        self.samples = samples;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_workers(mut self, workers: usize) -> Self {
        self.workers = workers.max(1);
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParamorphismEstimate {
    pub mean: f64,
    pub stderr: f64,
    pub n: usize,
    pub qm_name: String,
    pub seed: u64,
    pub samples_per_stratum: BTreeMap<usize, usize>,
    pub stratum_means: BTreeMap<usize, f64>,
    pub stratum_variances: BTreeMap<usize, f64>,
    pub stratum_volumes: BTreeMap<usize, f64>,
    pub failures: usize,
}

impl ParamorphismEstimate {
    /// `sum_k vol_k * mean_k`, recomputed from the stored strata.
    pub fn recombined_mean(&self) -> f64 {
        let terms: Vec<f64> = self.stratum_means.iter().map(|(k, m)| self.stratum_volumes[k] * m).collect();
        pairwise_sum(&terms)
    }

    pub fn total_samples(&self) -> usize {
        self.samples_per_stratum.values().sum()
    }
}

/// Deterministic base configuration for stratum `k`: the first `k` points in the north,
/// the rest in the south, on golden-angle spirals in the latitude band `[0.1, pi/2 - 0.1]`.
pub fn base_configuration(n: usize, k: usize) -> Configuration {
    const GOLDEN: f64 = 2.399_963_229_728_653;
    let band = |j: usize, m: usize| 0.1 + (PI / 2.0 - 0.2) * (j as f64 + 0.5) / m as f64;
    let points = (0..n)
        .map(|i| {
            let (j, m, side) = if i < k { (i, k, 1.0) } else { (i - k, n - k, -1.0) };
            SpherePoint::from_lat_lon(side * band(j, m), PI + GOLDEN * j as f64 + if side > 0.0 { 0.0 } else { 0.5 })
        })
        .collect();
    Configuration::new(points).expect("spiral points are distinct")
}

/// Per-sample values of every stratum, one vector per output; `None` marks a failed sample.
#[derive(Debug, Clone)]
pub(crate) struct SampleTable {
    pub n: usize,
    pub strata: Vec<(usize, Vec<Option<Vec<f64>>>)>,
    pub failures: usize,
}

fn strata(n: usize) -> Vec<usize> {
    (2..=n - 2).collect()
}

/// Evaluates `eval(k, x, z)` on `opts.samples` stratified configurations.
pub(crate) fn run_samples<F>(n: usize, opts: &EstimatorOptions, eval: F) -> Result<SampleTable, EstimatorError>
where
    F: Fn(usize, &Configuration, &Configuration) -> Result<Vec<f64>, BraidError> + Sync,
{
    if n <= 3 {
        return Err(EstimatorError::InvalidStrandCount(n));
    }
    let ks = strata(n);
    let per = opts.samples.div_ceil(ks.len());
    if per < 10 {
        return Err(EstimatorError::TooFewSamples(per));
    }
    let tasks: Vec<(usize, usize)> =
        ks.iter().flat_map(|&k| (0..per.div_ceil(BLOCK)).map(move |b| (k, b))).collect();
    let bases: BTreeMap<usize, Configuration> = ks.iter().map(|&k| (k, base_configuration(n, k))).collect();
    let work = || {
        tasks
            .par_iter()
            .map(|&(k, b)| {
                let mut rng = stream_rng(opts.seed, ((k as u64) << 32) | b as u64);
                let count = BLOCK.min(per - b * BLOCK);
                (0..count)
                    .map(|_| {
                        let x = sample_stratum(&mut rng, n, k, opts.separation_floor)?;
                        Ok(eval(k, &x, &bases[&k]).map_err(|e| e.to_string()))
                    })
                    .collect::<Result<Vec<_>, SphereError>>()
            })
            .collect::<Result<Vec<_>, SphereError>>()
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(opts.workers.max(1))
        .build()
        .map_err(|e| EstimatorError::InvalidInput(e.to_string()))?;
    let blocks = pool.install(work)?;

    let mut table = SampleTable { n, strata: ks.iter().map(|&k| (k, Vec::with_capacity(per))).collect(), failures: 0 };
    let mut last = String::new();
    for (&(k, _), block) in tasks.iter().zip(blocks) {
        let slot = &mut table.strata[k - 2].1;
        for r in block {
            match r {
                Ok(v) => slot.push(Some(v)),
                Err(e) => {
                    table.failures += 1;
                    last = e;
                    slot.push(None);
                }
            }
        }
    }
    let total = per * ks.len();
    if table.failures as f64 > opts.max_failure_rate * total as f64 {
        return Err(EstimatorError::FailureRateExceeded {
            failures: table.failures,
            total,
            limit: opts.max_failure_rate,
            last,
        });
    }
    Ok(table)
}

impl SampleTable {
    /// Successful values of output `j` in stratum `k`.
    pub fn values(&self, k: usize, j: usize) -> Vec<f64> {
        self.strata[k - 2].1.iter().flatten().map(|v| v[j]).collect()
    }

    pub fn estimate(&self, j: usize, area_plus: f64, qm_name: &str, seed: u64) -> ParamorphismEstimate {
        let mut est = ParamorphismEstimate {
            mean: 0.0,
            stderr: 0.0,
            n: self.n,
            qm_name: qm_name.to_string(),
            seed,
            samples_per_stratum: BTreeMap::new(),
            stratum_means: BTreeMap::new(),
            stratum_variances: BTreeMap::new(),
            stratum_volumes: BTreeMap::new(),
            failures: self.failures,
        };
        let mut var_terms = Vec::new();
        for &(k, _) in &self.strata {
            let v = self.values(k, j);
            let m = v.len();
            let mean = if m == 0 { 0.0 } else { pairwise_sum(&v) / m as f64 };
            let dev: Vec<f64> = v.iter().map(|x| (x - mean) * (x - mean)).collect();
            let var = if m > 1 { pairwise_sum(&dev) / (m - 1) as f64 } else { 0.0 };
            let vol = stratum_volume(self.n, k, area_plus);
            est.samples_per_stratum.insert(k, m);
            est.stratum_means.insert(k, mean);
            est.stratum_variances.insert(k, var);
            est.stratum_volumes.insert(k, vol);
            if m > 0 {
                var_terms.push(vol * vol * var / m as f64);
            }
        }
        est.mean = est.recombined_mean();
        est.stderr = pairwise_sum(&var_terms).sqrt();
        est
    }
}

fn braid_value(
    qm: &Quasimorphism,
    iso: &Isotopy,
    x: &Configuration,
    z: &Configuration,
    opts: &ExtractionOptions,
) -> Result<f64, BraidError> {
    Ok(qm.evaluate(&extract_with(iso, x, z, opts)?.word))
}

/// `Phi_n(f)` for the evaluator `qm`.
pub fn phi_estimate(
    f: &Isotopy,
    qm: &Quasimorphism,
    n: usize,
    opts: &EstimatorOptions,
) -> Result<ParamorphismEstimate, EstimatorError> {
    let table = run_samples(n, opts, |_, x, z| Ok(vec![braid_value(qm, f, x, z, &opts.extraction)?]))?;
    Ok(table.estimate(0, opts.area_plus, &qm.name, opts.seed))
}

/// Braids `gamma(f^k, x)` for `k = 1..=k_max`, built as products of single-iterate
/// braids along the orbit of `x`.
pub fn iterate_braids(
    f: &Isotopy,
    x: &Configuration,
    z: &Configuration,
    k_max: usize,
    opts: &ExtractionOptions,
) -> Result<Vec<BraidWord>, BraidError> {
    let mut words = Vec::with_capacity(k_max);
    let mut acc = BraidWord::empty(x.n());
    let mut current = x.clone();
    for _ in 0..k_max {
        let e = extract_with(f, &current, z, opts)?;
        acc = braid_compose(&e.word, &acc)?;
        words.push(acc.clone());
        current = Configuration::with_floor(e.image, 0.0)?;
    }
    Ok(words)
}

/// `Phi_n(f^k)` for every `k` in `ks` from one set of samples.
pub fn phi_iterates(
    f: &Isotopy,
    qm: &Quasimorphism,
    n: usize,
    ks: &[usize],
    opts: &EstimatorOptions,
) -> Result<Vec<ParamorphismEstimate>, EstimatorError> {
    let k_max = ks.iter().copied().max().unwrap_or(0);
    let table = run_samples(n, opts, |_, x, z| {
        let words = iterate_braids(f, x, z, k_max, &opts.extraction)?;
        Ok(ks.iter().map(|&k| if k == 0 { 0.0 } else { qm.evaluate(&words[k - 1]) }).collect())
    })?;
    Ok((0..ks.len()).map(|j| table.estimate(j, opts.area_plus, &qm.name, opts.seed)).collect())
}

/// Per-sample values of `qm(gamma(f, x))`, grouped by stratum; failed samples are `None`.
pub fn phi_samples(
    f: &Isotopy,
    qm: &Quasimorphism,
    n: usize,
    opts: &EstimatorOptions,
) -> Result<BTreeMap<usize, Vec<Option<f64>>>, EstimatorError> {
    let table = run_samples(n, opts, |_, x, z| Ok(vec![braid_value(qm, f, x, z, &opts.extraction)?]))?;
    Ok(table.strata.into_iter().map(|(k, v)| (k, v.into_iter().map(|s| s.map(|x| x[0])).collect())).collect())
}
