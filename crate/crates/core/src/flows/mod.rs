//! Hamiltonian isotopies of the sphere: construction, integration, group operations,
//! lengths, the twist (eggbeater) family and the equatorial collar cutoff.

mod eggbeater;
mod hamiltonian;
mod isotopy;
mod length;

use std::f64::consts::PI;

use thiserror::Error;

pub use eggbeater::{
    cap_twist, eggbeater_family, eggbeater_with, scaled_disks, standard_disks, twist_caps, EggbeaterOptions,
    FullTwist,
};
pub use hamiltonian::{
    CircleFlow, CircleMode, Collar, Cutoff, FourierTerm, Hamiltonian, QuadratureHint, RandomFourier, Zonal,
    ZonalProfile,
};
pub use isotopy::{
    compose, inverse, iterate, rotation, Isotopy, Segment, Trajectory, DEFAULT_RESOLUTION, DEFAULT_STEP,
};
pub use length::{l1_length, lp_length, QuadratureSpec, REFINEMENT_TOLERANCE};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FlowError {
    #[error("invalid step size {0}")]
    StepSizeInvalid(f64),
    #[error("segment durations must be positive")]
    NonPositiveDuration,
    #[error("quadrature too coarse: {coarse} vs refined {fine}")]
    QuadratureTooCoarse { coarse: f64, fine: f64 },
    #[error("quadrature resolution must be positive")]
    QuadratureInvalid,
    #[error("length exponent {0} must be at least 1")]
    ExponentInvalid(f64),
    #[error("layout infeasible: {0}")]
    LayoutInfeasible(String),
    #[error("collar half-width {delta} does not embed around the equator")]
    CollarTooWide { delta: f64 },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

/// Isotopy supported in the collar `|latitude| < delta` that restricts to the flow of
/// `boundary` on the equator.
pub fn collar_cutoff_isotopy(boundary: CircleFlow, delta: f64) -> Result<Isotopy, FlowError> {
    if !(delta > 0.0) {
        return Err(FlowError::InvalidParameter(format!("collar half-width {delta}")));
    }
    if delta >= PI / 2.0 {
        return Err(FlowError::CollarTooWide { delta });
    }
    if boundary.is_identity() {
        return Ok(Isotopy::identity());
    }
    Ok(Isotopy::from_hamiltonian(Collar::new(boundary, delta)))
}
