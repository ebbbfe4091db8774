//! L^p lengths of isotopies by product quadrature over time and the sphere.
//!
//! Lengths use the radius-one sphere with its standard area element (total area
//! `4 pi`), so the unit-speed rotation about an axis has length `pi^2`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::hamiltonian::{frame, Hamiltonian};
use super::isotopy::Isotopy;
use super::FlowError;
use crate::numerics::composite_rule;

/// Relative gap between a quadrature and its refinement above which the result is rejected.
pub const REFINEMENT_TOLERANCE: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureSpec {
    /// Gauss-Legendre nodes in time per segment.
    pub time_nodes: usize,
    /// Gauss-Legendre nodes per polar panel.
    pub polar_nodes: usize,
    /// Minimal number of polar panels on [0, pi].
    pub polar_panels: usize,
    /// Trapezoidal nodes in azimuth.
    pub azimuth_nodes: usize,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self { time_nodes: 8, polar_nodes: 16, polar_panels: 8, azimuth_nodes: 96 }
    }
}

impl QuadratureSpec {
    pub fn refined(&self) -> Self {
        Self {
            time_nodes: self.time_nodes * 2,
            polar_nodes: self.polar_nodes * 2,
            polar_panels: self.polar_panels,
            azimuth_nodes: self.azimuth_nodes * 2,
        }
    }

    fn validate(&self) -> Result<(), FlowError> {
        if self.time_nodes == 0 || self.polar_nodes == 0 || self.polar_panels == 0 || self.azimuth_nodes == 0 {
            return Err(FlowError::QuadratureInvalid);
        }
        Ok(())
    }
}

fn segment_length(h: &dyn Hamiltonian, exponent: f64, spec: &QuadratureSpec) -> f64 {
    let hint = h.quadrature_hint();
    let (e1, e2) = frame(&hint.axis);
    let mut breaks: Vec<f64> = (0..=spec.polar_panels).map(|i| PI * i as f64 / spec.polar_panels as f64).collect();
    breaks.extend(hint.breaks.iter().copied().filter(|b| *b > 0.0 && *b < PI));
    breaks.sort_by(f64::total_cmp);
    breaks.dedup_by(|a, b| (*a - *b).abs() < 1e-14);
    let polar = composite_rule(&breaks, spec.polar_nodes);
    let az_w = 2.0 * PI / spec.azimuth_nodes as f64;
    let time = composite_rule(&[0.0, 1.0], spec.time_nodes);
    let mut total = 0.0;
    for (t, wt) in time {
        let mut spatial = 0.0;
        for &(theta, wtheta) in &polar {
            let (s, c) = theta.sin_cos();
            let mut ring = 0.0;
            for j in 0..spec.azimuth_nodes {
                let lam = (j as f64 + 0.5) * az_w;
                let p = hint.axis * c + (e1 * lam.cos() + e2 * lam.sin()) * s;
                ring += h.vector_field(t, &p).norm().powf(exponent);
            }
            spatial += ring * az_w * wtheta * s;
        }
        total += wt * spatial.powf(1.0 / exponent);
    }
    total
}

fn length_with(iso: &Isotopy, exponent: f64, spec: &QuadratureSpec) -> f64 {
    iso.segments().iter().map(|seg| segment_length(seg.hamiltonian.as_ref(), exponent, spec)).sum()
}

/// `int_0^1 (int_S |X_t|^p)^(1/p) dt`, summed over segments (time reversal does not
/// change speeds). The result is accepted only if a uniformly refined quadrature
/// agrees to `REFINEMENT_TOLERANCE`; the refined value is returned.
pub fn lp_length(iso: &Isotopy, exponent: f64, spec: &QuadratureSpec) -> Result<f64, FlowError> {
    if !(exponent >= 1.0) {
        return Err(FlowError::ExponentInvalid(exponent));
    }
    spec.validate()?;
    if iso.is_identity() {
        return Ok(0.0);
    }
    let coarse = length_with(iso, exponent, spec);
    let fine = length_with(iso, exponent, &spec.refined());
    let scale = fine.abs().max(1e-300);
    if (fine - coarse).abs() > REFINEMENT_TOLERANCE * scale && (fine - coarse).abs() > 1e-12 {
        return Err(FlowError::QuadratureTooCoarse { coarse, fine });
    }
    Ok(fine)
}

/// L^1 length at the default quadrature.
pub fn l1_length(iso: &Isotopy) -> Result<f64, FlowError> {
    lp_length(iso, 1.0, &QuadratureSpec::default())
}
