//! Braid words, their invariants, and braids traced by configurations under isotopies.

mod extract;
mod word;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::flows::Isotopy;
use crate::quasimorphisms::signature;
use crate::sphere::{Configuration, SphereError};

pub use extract::{extract_braid, extract_with, trace_braid, Extraction, ExtractionOptions};
pub use word::{braid_compose, braid_inverse, permutation_braid, BraidWord, Letter};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BraidError {
    #[error("strand counts differ: {left} vs {right}")]
    StrandMismatch { left: usize, right: usize },
    #[error("strand {strand} passes through the projection pole")]
    PoleCollision { strand: usize },
    #[error("strands cross tangentially in the projection")]
    TangentialCrossing,
    #[error(transparent)]
    Sphere(#[from] SphereError),
    #[error("letter index {index} out of range for {n} strands")]
    InvalidLetter { index: usize, n: usize },
    #[error("parse error: {0}")]
    Parse(String),
}

/// Invariants compared by the cocycle check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BraidInvariants {
    pub permutation: Vec<usize>,
    pub exponent_sum: i64,
    /// Twice the linking numbers, `[i][j]` for 0-based labels.
    pub crossing_counts: Vec<Vec<i64>>,
    pub signature: i64,
}

impl BraidInvariants {
    pub fn of(w: &BraidWord) -> Self {
        Self {
            permutation: w.permutation(),
            exponent_sum: w.exponent_sum(),
            crossing_counts: w.crossing_counts(),
            signature: signature(w),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CocycleReport {
    /// `gamma(g f, x)`.
    pub direct: BraidWord,
    /// `gamma(g, f(x)) . gamma(f, x)`.
    pub product: BraidWord,
    pub words_equal: bool,
    pub invariants_equal: bool,
    pub direct_invariants: BraidInvariants,
    pub product_invariants: BraidInvariants,
}

/// Compares the braid of `g f` at `x` with the product of the braids of `g` at `f(x)`
/// and `f` at `x`, all relative to the base configuration `z`.
pub fn cocycle_check(
    f: &Isotopy,
    g: &Isotopy,
    x: &Configuration,
    z: &Configuration,
    opts: &ExtractionOptions,
) -> Result<CocycleReport, BraidError> {
    let ef = extract_with(f, x, z, opts)?;
    let fx = Configuration::with_floor(ef.image.clone(), 0.0)?;
    let eg = extract_with(g, &fx, z, opts)?;
    let direct = extract_with(&f.then(g), x, z, opts)?.word;
    let product = braid_compose(&eg.word, &ef.word)?;
    let direct_invariants = BraidInvariants::of(&direct);
    let product_invariants = BraidInvariants::of(&product);
    Ok(CocycleReport {
        words_equal: direct == product,
        invariants_equal: direct_invariants == product_invariants,
        direct,
        product,
        direct_invariants,
        product_invariants,
    })
}

/// Multiplicities `m` with `a - b = sum_i m_i P_i` on crossing counts, where `P_i` is the
/// pattern of strand `i` encircling all other strands once (the sphere relation read
/// as a planar word). `None` when the permutations differ or no integer `m` exists.
pub fn sphere_relation_multiplicities(a: &BraidInvariants, b: &BraidInvariants) -> Option<Vec<i64>> {
    let n = a.permutation.len();
    if a.permutation != b.permutation || b.permutation.len() != n || n < 2 {
        return None;
    }
    let d = |i: usize, j: usize| a.crossing_counts[i][j] - b.crossing_counts[i][j];
    let m: Vec<i64> = if n == 2 {
        if d(0, 1) % 2 != 0 {
            return None;
        }
        vec![d(0, 1) / 2, 0]
    } else {
        let mut m = Vec::with_capacity(n);
        for i in 0..n {
            let (j, k) = match i {
                0 => (1, 2),
                1 => (0, 2),
                _ => (0, 1),
            };
            let four_m = d(i, j) + d(i, k) - d(j, k);
            if four_m % 4 != 0 {
                return None;
            }
            m.push(four_m / 4);
        }
        m
    };
    let consistent = (0..n).all(|i| (0..n).all(|j| i == j || d(i, j) == 2 * (m[i] + m[j])));
    consistent.then_some(m)
}

/// Invariants of one extraction under alternative projection poles.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PoleSensitivity {
    pub reference: BraidInvariants,
    /// Poles whose extraction failed.
    pub inadmissible: usize,
    /// Poles reproducing the reference invariants exactly.
    pub agreeing: usize,
    /// Sphere-relation multiplicities of each admissible pole against the reference;
    /// `None` entries differ by more than sphere relations.
    pub multiplicities: Vec<Option<Vec<i64>>>,
}

impl PoleSensitivity {
    pub fn sphere_relation_only(&self) -> bool {
        self.multiplicities.iter().all(Option::is_some)
    }
}

/// Re-extracts `gamma(iso, x)` under each pole and compares with the chart in `opts`.
pub fn pole_sensitivity(
    iso: &Isotopy,
    x: &Configuration,
    z: &Configuration,
    poles: &[crate::sphere::SpherePoint],
    opts: &ExtractionOptions,
) -> Result<PoleSensitivity, BraidError> {
    let reference = BraidInvariants::of(&extract_with(iso, x, z, opts)?.word);
    let mut out = PoleSensitivity { reference, inadmissible: 0, agreeing: 0, multiplicities: Vec::new() };
    for pole in poles {
        let alt = ExtractionOptions { chart: crate::sphere::Stereographic::new(*pole), ..*opts };
        match extract_with(iso, x, z, &alt) {
            Ok(e) => {
                let inv = BraidInvariants::of(&e.word);
                out.agreeing += (inv == out.reference) as usize;
                out.multiplicities.push(sphere_relation_multiplicities(&inv, &out.reference));
            }
            Err(_) => out.inadmissible += 1,
        }
    }
    Ok(out)
}
