//! Round-sphere primitives: points, geodesic arcs, hemispheres, geodesic disks,
//! configurations of marked points and their stratified sampling.
//!
//! Areas in this module are normalized so that the whole sphere has area 1.

use std::f64::consts::PI;

use nalgebra::Vector3;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub type Vec3 = Vector3<f64>;

/// Angle below which two points count as antipodal for geodesic purposes.
pub const ANTIPODAL_MARGIN: f64 = 1e-9;
/// Dead zone of the hemisphere classifier.
pub const EQUATOR_DEAD_ZONE: f64 = 1e-12;
/// Default minimal pairwise geodesic distance of a configuration.
pub const DEFAULT_SEPARATION_FLOOR: f64 = 1e-9;
/// Minimal angular distance to the projection pole.
pub const POLE_MARGIN: f64 = 1e-6;
const MAX_REJECTIONS: usize = 1000;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SphereError {
    #[error("points are antipodal (angle {angle}); shortest path is not unique")]
    AntipodalPair { angle: f64 },
    #[error("point lies within {margin} of the projection pole")]
    NearPole { margin: f64 },
    #[error("configuration sampling exhausted after {MAX_REJECTIONS} rejections (n = {n}, floor = {floor})")]
    SamplingExhausted { n: usize, floor: f64 },
    #[error("invalid disk radius {0}; expected a value in (0, pi)")]
    InvalidDisk(f64),
    #[error("cannot normalize a zero vector")]
    ZeroVector,
    #[error("configuration needs at least 2 points, got {0}")]
    TooFewPoints(usize),
    #[error("points {i} and {j} are closer than the separation floor {floor}")]
    PointsTooClose { i: usize, j: usize, floor: f64 },
    #[error("stratum {k} is out of range for {n} points")]
    BadStratum { n: usize, k: usize },
}

/// A point of the unit sphere.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(into = "[f64; 3]", try_from = "[f64; 3]")]
pub struct SpherePoint(Vec3);

impl SpherePoint {
    pub fn new(x: f64, y: f64, z: f64) -> Result<Self, SphereError> {
        Self::from_vector(Vec3::new(x, y, z))
    }

    pub fn from_vector(v: Vec3) -> Result<Self, SphereError> {
        let norm = v.norm();
        if !(norm > 0.0) || !norm.is_finite() {
            return Err(SphereError::ZeroVector);
        }
        Ok(Self(v / norm))
    }

    /// Renormalizes a vector that is already close to unit length.
    pub(crate) fn from_nearly_unit(v: Vec3) -> Self {
        Self(v / v.norm())
    }

    /// Point at latitude `lat` and longitude `lon` (radians).
    pub fn from_lat_lon(lat: f64, lon: f64) -> Self {
        Self(Vec3::new(lat.cos() * lon.cos(), lat.cos() * lon.sin(), lat.sin()))
    }

    pub fn north() -> Self {
        Self(Vec3::z())
    }

    pub fn south() -> Self {
        Self(-Vec3::z())
    }

    pub fn vector(&self) -> &Vec3 {
        &self.0
    }

    pub fn coords(&self) -> [f64; 3] {
        [self.0.x, self.0.y, self.0.z]
    }

    pub fn antipode(&self) -> Self {
        Self(-self.0)
    }

    pub fn dot(&self, other: &SpherePoint) -> f64 {
        self.0.dot(&other.0)
    }

    /// Geodesic distance, computed with atan2 for accuracy at small and large angles.
    pub fn angle_to(&self, other: &SpherePoint) -> f64 {
        self.0.cross(&other.0).norm().atan2(self.0.dot(&other.0))
    }

    pub fn latitude(&self) -> f64 {
        self.0.z.clamp(-1.0, 1.0).asin()
    }

    pub fn longitude(&self) -> f64 {
        self.0.y.atan2(self.0.x)
    }

    /// Rotation about `axis` (unit) by `angle`, counterclockwise seen from outside at `axis`.
    pub fn rotated(&self, axis: &Vec3, angle: f64) -> Self {
        Self::from_nearly_unit(rotate_vector(&self.0, axis, angle))
    }
}

impl From<SpherePoint> for [f64; 3] {
    fn from(p: SpherePoint) -> Self {
        p.coords()
    }
}

impl TryFrom<[f64; 3]> for SpherePoint {
    type Error = SphereError;
    fn try_from(c: [f64; 3]) -> Result<Self, Self::Error> {
        SpherePoint::new(c[0], c[1], c[2])
    }
}

/// Rodrigues rotation of `v` about the unit vector `axis`.
pub fn rotate_vector(v: &Vec3, axis: &Vec3, angle: f64) -> Vec3 {
    let (s, c) = angle.sin_cos();
    v * c + axis.cross(v) * s + axis * (axis.dot(v) * (1.0 - c))
}

/// Any unit vector orthogonal to `v`.
pub fn orthogonal_unit(v: &Vec3) -> Vec3 {
    let helper = if v.x.abs() < 0.9 { Vec3::x() } else { Vec3::y() };
    v.cross(&helper).normalize()
}

/// Constant-speed great-circle arc between two non-antipodal points.
#[derive(Debug, Clone, Copy)]
pub struct Geodesic {
    from: SpherePoint,
    to: SpherePoint,
    axis: Vec3,
    length: f64,
}

impl Geodesic {
    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn start(&self) -> SpherePoint {
        self.from
    }

    pub fn end(&self) -> SpherePoint {
        self.to
    }

    /// Point at parameter `s` in [0, 1]; the endpoints are returned exactly.
    pub fn at(&self, s: f64) -> SpherePoint {
        if s <= 0.0 || self.length == 0.0 {
            return self.from;
        }
        if s >= 1.0 {
            return self.to;
        }
        self.from.rotated(&self.axis, s * self.length)
    }
}

pub fn geodesic(p: &SpherePoint, q: &SpherePoint) -> Result<Geodesic, SphereError> {
    let angle = p.angle_to(q);
    if angle >= PI - ANTIPODAL_MARGIN {
        return Err(SphereError::AntipodalPair { angle });
    }
    let cross = p.vector().cross(q.vector());
    let axis = if cross.norm() > 0.0 { cross.normalize() } else { orthogonal_unit(p.vector()) };
    Ok(Geodesic { from: *p, to: *q, axis, length: angle })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Hemisphere {
    Plus,
    Minus,
    OnEquator,
}

pub fn hemisphere_of(p: &SpherePoint, equator_axis: &Vec3) -> Hemisphere {
    let d = p.vector().dot(equator_axis);
    if d.abs() < EQUATOR_DEAD_ZONE {
        Hemisphere::OnEquator
    } else if d > 0.0 {
        Hemisphere::Plus
    } else {
        Hemisphere::Minus
    }
}

/// Normalized area of a spherical cap of geodesic radius `radius`.
pub fn cap_area(radius: f64) -> f64 {
    (1.0 - radius.cos()) / 2.0
}

/// Geodesic disk (spherical cap).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Disk {
    pub center: SpherePoint,
    pub radius: f64,
}

impl Disk {
    pub fn new(center: SpherePoint, radius: f64) -> Result<Self, SphereError> {
        if !(radius > 0.0 && radius < PI) {
            return Err(SphereError::InvalidDisk(radius));
        }
        Ok(Self { center, radius })
    }

    /// Disk of the given normalized area, which must lie in (0, 1).
    pub fn with_area(center: SpherePoint, area: f64) -> Result<Self, SphereError> {
        if !(area > 0.0 && area < 1.0) {
            return Err(SphereError::InvalidDisk(f64::NAN));
        }
        Self::new(center, (1.0 - 2.0 * area).acos())
    }

    pub fn area(&self) -> f64 {
        cap_area(self.radius)
    }

    pub fn contains(&self, p: &SpherePoint) -> bool {
        self.center.angle_to(p) < self.radius
    }

    /// True when the closed disks are disjoint.
    pub fn disjoint_from(&self, other: &Disk) -> bool {
        self.center.angle_to(&other.center) > self.radius + other.radius
    }

    /// True when the disk lies in the open hemisphere on the given side of the equator
    /// orthogonal to `axis`.
    pub fn inside_hemisphere(&self, axis: &Vec3, side: Hemisphere) -> bool {
        let lat = self.center.vector().dot(axis).clamp(-1.0, 1.0).asin();
        match side {
            Hemisphere::Plus => lat - self.radius > 0.0,
            Hemisphere::Minus => lat + self.radius < 0.0,
            Hemisphere::OnEquator => false,
        }
    }
}

/// Ordered tuple of pairwise distinct points.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Configuration {
    points: Vec<SpherePoint>,
}

impl Configuration {
    pub fn new(points: Vec<SpherePoint>) -> Result<Self, SphereError> {
        Self::with_floor(points, DEFAULT_SEPARATION_FLOOR)
    }

    pub fn with_floor(points: Vec<SpherePoint>, floor: f64) -> Result<Self, SphereError> {
        if points.len() < 2 {
            return Err(SphereError::TooFewPoints(points.len()));
        }
        for i in 0..points.len() {
            for j in i + 1..points.len() {
                if points[i].angle_to(&points[j]) <= floor {
                    return Err(SphereError::PointsTooClose { i, j, floor });
                }
            }
        }
        Ok(Self { points })
    }

    pub fn n(&self) -> usize {
        self.points.len()
    }

    pub fn points(&self) -> &[SpherePoint] {
        &self.points
    }

    /// Number of points strictly in the northern hemisphere.
    pub fn count_in(&self, axis: &Vec3, side: Hemisphere) -> usize {
        self.points.iter().filter(|p| hemisphere_of(p, axis) == side).count()
    }

    pub fn min_separation(&self) -> f64 {
        let mut best = f64::INFINITY;
        for i in 0..self.points.len() {
            for j in i + 1..self.points.len() {
                best = best.min(self.points[i].angle_to(&self.points[j]));
            }
        }
        best
    }
}

/// Counter-based random stream: stream `stream` of run `seed`.
///
/// Every (seed, stream) pair is an independent ChaCha8 keystream, so results do not
/// depend on which worker draws them.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Area-uniform point on the whole sphere.
pub fn uniform_point<R: Rng + ?Sized>(rng: &mut R) -> SpherePoint {
    let z: f64 = rng.gen_range(-1.0..=1.0);
    let lon: f64 = rng.gen_range(0.0..2.0 * PI);
    let r = (1.0 - z * z).max(0.0).sqrt();
    SpherePoint(Vec3::new(r * lon.cos(), r * lon.sin(), z))
}

/// Area-uniform point in the cap of geodesic radius `radius` about `center`.
pub fn uniform_in_cap<R: Rng + ?Sized>(rng: &mut R, center: &SpherePoint, radius: f64) -> SpherePoint {
    let cos_min = radius.cos();
    let c: f64 = rng.gen_range(cos_min..=1.0);
    let lon: f64 = rng.gen_range(0.0..2.0 * PI);
    let s = (1.0 - c * c).max(0.0).sqrt();
    let e1 = orthogonal_unit(center.vector());
    let e2 = center.vector().cross(&e1);
    SpherePoint::from_nearly_unit(center.vector() * c + (e1 * lon.cos() + e2 * lon.sin()) * s)
}

/// Draws `n` i.i.d. area-uniform points, resampling any point closer than `floor`
/// to an earlier one.
pub fn sample_configuration<R: Rng + ?Sized>(
    rng: &mut R,
    n: usize,
    floor: f64,
) -> Result<Configuration, SphereError> {
    sample_with(rng, n, floor, |rng, _| uniform_point(rng))
}

/// Draws a configuration with exactly `k` points in the open northern hemisphere:
/// points `0..k` are uniform in the north, points `k..n` uniform in the south.
pub fn sample_stratum<R: Rng + ?Sized>(
    rng: &mut R,
    n: usize,
    k: usize,
    floor: f64,
) -> Result<Configuration, SphereError> {
    if k > n {
        return Err(SphereError::BadStratum { n, k });
    }
    let north = SpherePoint::north();
    let south = SpherePoint::south();
    sample_with(rng, n, floor, |rng, i| loop {
        let p = uniform_in_cap(rng, if i < k { &north } else { &south }, PI / 2.0);
        if p.vector().z.abs() >= EQUATOR_DEAD_ZONE {
            break p;
        }
    })
}

fn sample_with<R: Rng + ?Sized>(
    rng: &mut R,
    n: usize,
    floor: f64,
    mut draw: impl FnMut(&mut R, usize) -> SpherePoint,
) -> Result<Configuration, SphereError> {
    if n < 2 {
        return Err(SphereError::TooFewPoints(n));
    }
    let mut points: Vec<SpherePoint> = Vec::with_capacity(n);
    for i in 0..n {
        let mut rejections = 0;
        loop {
            let p = draw(rng, i);
            if points.iter().all(|q| q.angle_to(&p) > floor) {
                points.push(p);
                break;
            }
            rejections += 1;
            if rejections >= MAX_REJECTIONS {
                return Err(SphereError::SamplingExhausted { n, floor });
            }
        }
    }
    Ok(Configuration { points })
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Measure of the ordered-tuple stratum with exactly `k` of `n` points in a region of
/// normalized area `area_plus`.
pub fn stratum_volume(n: usize, k: usize, area_plus: f64) -> f64 {
    if k > n {
        return 0.0;
    }
    binomial(n, k) * area_plus.powi(k as i32) * (1.0 - area_plus).powi((n - k) as i32)
}

/// Stereographic chart from a pole onto the plane through the origin orthogonal to it.
///
/// The frame satisfies `e1 x e2 = -pole`, so the chart preserves orientation as seen
/// from outside the sphere.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Stereographic {
    pole: SpherePoint,
    e1: Vec3,
    e2: Vec3,
}

impl Stereographic {
    pub fn new(pole: SpherePoint) -> Self {
        let e1 = orthogonal_unit(pole.vector());
        Self::with_first_axis(pole, e1)
    }

    /// Chart whose first planar axis is the projection of `first` onto the pole's
    /// orthogonal complement.
    pub fn with_first_axis(pole: SpherePoint, first: Vec3) -> Self {
        let n = pole.vector();
        let e1 = (first - n * n.dot(&first)).normalize();
        let e2 = -n.cross(&e1);
        Self { pole, e1, e2 }
    }

    /// Pole on the equator at (1, 0, 0) with the first planar axis pointing south, so
    /// the northern hemisphere maps to the half plane of negative first coordinate.
    pub fn equatorial() -> Self {
        Self::with_first_axis(SpherePoint(Vec3::x()), -Vec3::z())
    }

    pub fn pole(&self) -> SpherePoint {
        self.pole
    }

    pub fn project(&self, p: &SpherePoint) -> Result<[f64; 2], SphereError> {
        if p.angle_to(&self.pole) <= POLE_MARGIN {
            return Err(SphereError::NearPole { margin: POLE_MARGIN });
        }
        Ok(self.project_unchecked(p))
    }

    pub(crate) fn project_unchecked(&self, p: &SpherePoint) -> [f64; 2] {
        let v = p.vector();
        let denom = 1.0 - v.dot(self.pole.vector());
        [v.dot(&self.e1) / denom, v.dot(&self.e2) / denom]
    }

    pub fn unproject(&self, q: [f64; 2]) -> SpherePoint {
        let r2 = q[0] * q[0] + q[1] * q[1];
        let planar = self.e1 * q[0] + self.e2 * q[1];
        let v = (planar * 2.0 + self.pole.vector() * (r2 - 1.0)) / (r2 + 1.0);
        SpherePoint::from_nearly_unit(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn geodesic_identity_and_quarter_circle() {
        let p = SpherePoint::new(1.0, 0.0, 0.0).unwrap();
        let q = SpherePoint::new(0.0, 1.0, 0.0).unwrap();
        let g = geodesic(&p, &p).unwrap();
        assert_eq!(g.length(), 0.0);
        assert_eq!(g.at(0.5), p);
        let g = geodesic(&p, &q).unwrap();
        assert_abs_diff_eq!(g.length(), PI / 2.0, epsilon = 1e-15);
        assert_eq!(g.at(1.0), q);
        assert_abs_diff_eq!(g.at(0.5).angle_to(&p), PI / 4.0, epsilon = 1e-14);
    }

    #[test]
    fn geodesic_rejects_antipodes() {
        let err = geodesic(&SpherePoint::north(), &SpherePoint::south()).unwrap_err();
        assert!(matches!(err, SphereError::AntipodalPair { .. }));
    }

    #[test]
    fn hemisphere_classifier() {
        let z = Vec3::z();
        assert_eq!(hemisphere_of(&SpherePoint::north(), &z), Hemisphere::Plus);
        assert_eq!(hemisphere_of(&SpherePoint::south(), &z), Hemisphere::Minus);
        let e = SpherePoint::new(1.0, 0.0, 0.0).unwrap();
        assert_eq!(hemisphere_of(&e, &z), Hemisphere::OnEquator);
    }

    #[test]
    fn stratum_volume_examples() {
        assert_abs_diff_eq!(stratum_volume(4, 2, 0.5), 0.375, epsilon = 1e-15);
        assert_abs_diff_eq!(stratum_volume(5, 0, 0.3), 0.7f64.powi(5), epsilon = 1e-15);
        assert_eq!(stratum_volume(3, 1, 1.0), 0.0);
        for n in 2..9 {
            for a in [0.0, 0.13, 0.5, 0.77, 1.0] {
                let total: f64 = (0..=n).map(|k| stratum_volume(n, k, a)).sum();
                assert_abs_diff_eq!(total, 1.0, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn sampling_is_deterministic() {
        let a = sample_configuration(&mut stream_rng(11, 0), 4, DEFAULT_SEPARATION_FLOOR).unwrap();
        let b = sample_configuration(&mut stream_rng(11, 0), 4, DEFAULT_SEPARATION_FLOOR).unwrap();
        assert_eq!(a, b);
        let c = sample_configuration(&mut stream_rng(11, 1), 4, DEFAULT_SEPARATION_FLOOR).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn sampling_exhausts_under_packing_bound() {
        // 50 caps of radius 0.5 have total normalized area 50 * 0.0612 > 1.
        let err = sample_configuration(&mut stream_rng(3, 0), 50, 1.0).unwrap_err();
        assert!(matches!(err, SphereError::SamplingExhausted { n: 50, .. }));
    }

    #[test]
    fn hemisphere_frequency_is_half() {
        let mut rng = stream_rng(5, 9);
        let trials = 100_000;
        let mut counts = [0usize; 4];
        for _ in 0..trials {
            let c = sample_configuration(&mut rng, 4, DEFAULT_SEPARATION_FLOOR).unwrap();
            for (i, p) in c.points().iter().enumerate() {
                if p.vector().z > 0.0 {
                    counts[i] += 1;
                }
            }
        }
        let sigma = (0.25 / trials as f64).sqrt();
        for c in counts {
            assert!((c as f64 / trials as f64 - 0.5).abs() < 3.0 * sigma);
        }
    }

    #[test]
    fn stratum_sampling_respects_blocks() {
        let mut rng = stream_rng(2, 2);
        for _ in 0..200 {
            let c = sample_stratum(&mut rng, 6, 2, DEFAULT_SEPARATION_FLOOR).unwrap();
            for (i, p) in c.points().iter().enumerate() {
                assert_eq!(p.vector().z > 0.0, i < 2);
            }
        }
    }

    #[test]
    fn stereographic_examples() {
        let pole = SpherePoint::north();
        let chart = Stereographic::new(pole);
        let origin = chart.project(&SpherePoint::south()).unwrap();
        assert_abs_diff_eq!(origin[0], 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(origin[1], 0.0, epsilon = 1e-15);
        let eq = chart.project(&SpherePoint::from_lat_lon(0.0, 0.7)).unwrap();
        assert_abs_diff_eq!(eq[0].hypot(eq[1]), 1.0, epsilon = 1e-14);
        assert!(matches!(chart.project(&pole), Err(SphereError::NearPole { .. })));
    }

    #[test]
    fn equatorial_chart_orders_north_first() {
        let chart = Stereographic::equatorial();
        let n = chart.project(&SpherePoint::from_lat_lon(0.4, 2.0)).unwrap();
        let s = chart.project(&SpherePoint::from_lat_lon(-0.4, 2.0)).unwrap();
        assert!(n[0] < 0.0 && s[0] > 0.0);
    }

    #[test]
    fn disk_area_formula() {
        let d = Disk::new(SpherePoint::north(), PI / 2.0).unwrap();
        assert_abs_diff_eq!(d.area(), 0.5, epsilon = 1e-15);
        let d = Disk::with_area(SpherePoint::north(), 0.05).unwrap();
        assert_abs_diff_eq!(d.area(), 0.05, epsilon = 1e-15);
        assert!(Disk::new(SpherePoint::north(), 0.0).is_err());
    }
}
