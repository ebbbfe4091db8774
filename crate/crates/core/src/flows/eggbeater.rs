//! Twist-map realizations of pure braids on four marked disks.
//!
//! Each full twist `A_ij` becomes one autonomous zonal Hamiltonian centered between
//! disks `i` and `j`: the inner cap, which contains both disks, turns rigidly by
//! `2 pi`, and the angular speed decays along a C² smootherstep to zero across a
//! transition annulus that avoids every other disk. Composing one twist per letter
//! makes the disk centers trace the target braid once per application.

use std::f64::consts::PI;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::hamiltonian::{Hamiltonian, Zonal, ZonalProfile};
use super::isotopy::{Isotopy, Segment};
use super::FlowError;
use crate::sphere::{Disk, Hemisphere, SpherePoint, Vec3};

/// Pure braid generator `A_ij^sign`: strands `i` and `j` (1-based disk labels) make
/// one full turn around each other, counterclockwise for `sign = +1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FullTwist {
    pub i: usize,
    pub j: usize,
    pub sign: i8,
}

impl FullTwist {
    pub fn new(i: usize, j: usize) -> Self {
        Self { i, j, sign: 1 }
    }

    pub fn inverse(self) -> Self {
        Self { sign: -self.sign, ..self }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EggbeaterOptions {
    /// Gap between the disks and the rigid part of a twist cap.
    pub margin: f64,
    /// Width of the annulus over which a twist decays to zero.
    pub transition: f64,
}

impl Default for EggbeaterOptions {
    fn default() -> Self {
        Self { margin: 0.03, transition: 0.3 }
    }
}

/// Four disks: two in the north at latitude 0.45, two in the south at latitude -0.45,
/// at longitudes `pi -+ 0.7`, each of geodesic radius 0.25. The layout keeps clear of
/// the equatorial projection pole at (1, 0, 0).
pub fn standard_disks() -> [Disk; 4] {
    let mk = |lat: f64, lon: f64| Disk { center: SpherePoint::from_lat_lon(lat, lon), radius: 0.25 };
    [mk(0.45, PI - 0.7), mk(0.45, PI + 0.7), mk(-0.45, PI - 0.7), mk(-0.45, PI + 0.7)]
}

/// The twist caps used for `target` on the given (already scaled) disks.
pub fn twist_caps(
    disks: &[Disk; 4],
    target: &[FullTwist],
    options: &EggbeaterOptions,
) -> Result<Vec<Zonal>, FlowError> {
    let mut caps = Vec::with_capacity(target.len());
    for tw in target {
        if tw.i == tw.j || !(1..=4).contains(&tw.i) || !(1..=4).contains(&tw.j) || tw.sign.abs() != 1 {
            return Err(FlowError::InvalidParameter(format!("bad twist {tw:?}")));
        }
        let (a, b) = (&disks[tw.i - 1], &disks[tw.j - 1]);
        let mid = a.center.vector() + b.center.vector();
        let center = SpherePoint::from_vector(mid)
            .map_err(|_| FlowError::LayoutInfeasible("twisted disks are antipodal".into()))?;
        let inner = center.angle_to(&a.center).max(center.angle_to(&b.center)) + a.radius.max(b.radius) + options.margin;
        let outer = inner + options.transition;
        if outer >= PI {
            return Err(FlowError::LayoutInfeasible(format!("twist cap A{}{} covers the sphere", tw.i, tw.j)));
        }
        for (k, d) in disks.iter().enumerate() {
            if k + 1 == tw.i || k + 1 == tw.j {
                continue;
            }
            if center.angle_to(&d.center) - d.radius <= outer {
                return Err(FlowError::LayoutInfeasible(format!(
                    "twist cap A{}{} meets disk {}",
                    tw.i,
                    tw.j,
                    k + 1
                )));
            }
        }
        caps.push(Zonal::new(
            format!("twist-{}-{}", tw.i, tw.j),
            *center.vector(),
            ZonalProfile::Twist { angle: 2.0 * PI * tw.sign as f64, inner, outer },
        ));
    }
    Ok(caps)
}

/// Disks with areas scaled by `r`, centers fixed.
pub fn scaled_disks(disks: &[Disk; 4], r: f64) -> Result<[Disk; 4], FlowError> {
    if !(r > 0.0) {
        return Err(FlowError::InvalidParameter(format!("scale {r} must be positive")));
    }
    let total: f64 = disks.iter().map(|d| r * d.area()).sum();
    if total >= 1.0 {
        return Err(FlowError::LayoutInfeasible(format!("scaled disk areas sum to {total} >= 1")));
    }
    let mut out = *disks;
    for d in out.iter_mut() {
        *d = Disk::with_area(d.center, r * d.area())
            .map_err(|_| FlowError::LayoutInfeasible("scaled disk area out of range".into()))?;
    }
    Ok(out)
}

fn check_layout(disks: &[Disk; 4]) -> Result<(), FlowError> {
    let z = Vec3::z();
    for (k, d) in disks.iter().enumerate() {
        let side = if k < 2 { Hemisphere::Plus } else { Hemisphere::Minus };
        if !d.inside_hemisphere(&z, side) {
            return Err(FlowError::LayoutInfeasible(format!("disk {} leaves its hemisphere", k + 1)));
        }
    }
    for i in 0..4 {
        for j in i + 1..4 {
            if !disks[i].disjoint_from(&disks[j]) {
                return Err(FlowError::LayoutInfeasible(format!("disks {} and {} overlap", i + 1, j + 1)));
            }
        }
    }
    Ok(())
}

/// Composition of one twist map per letter of `target`, on the disks rescaled by
/// `r`. The first letter is applied first.
pub fn eggbeater_family(disks: &[Disk; 4], target: &[FullTwist], r: f64) -> Result<Isotopy, FlowError> {
    eggbeater_with(disks, target, r, &EggbeaterOptions::default())
}

pub fn eggbeater_with(
    disks: &[Disk; 4],
    target: &[FullTwist],
    r: f64,
    options: &EggbeaterOptions,
) -> Result<Isotopy, FlowError> {
    let scaled = scaled_disks(disks, r)?;
    check_layout(&scaled)?;
    let caps = twist_caps(&scaled, target, options)?;
    let segments = caps
        .into_iter()
        .map(|z| Segment { hamiltonian: Arc::new(z) as Arc<dyn Hamiltonian>, duration: 1.0, reversed: false })
        .collect();
    Isotopy::from_segments(segments)
}

/// Autonomous twist supported in the cap of radius `outer` about `center`, turning
/// the inner cap rigidly by `angle`.
pub fn cap_twist(center: SpherePoint, inner: f64, outer: f64, angle: f64) -> Result<Isotopy, FlowError> {
    if !(0.0 < inner && inner < outer && outer < PI) {
        return Err(FlowError::InvalidParameter(format!("cap radii {inner}, {outer}")));
    }
    Ok(Isotopy::from_hamiltonian(Zonal::new(
        "cap-twist",
        *center.vector(),
        ZonalProfile::Twist { angle, inner, outer },
    )))
}
