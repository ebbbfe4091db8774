//! Hamiltonian functions on the unit sphere.
//!
//! The generated vector field is `X = grad H x p`: a positive Hamiltonian turns
//! counterclockwise around its maximum as seen from outside the sphere. With
//! `H = z` this is the rotation about the z-axis at unit angular speed.

use std::f64::consts::PI;
use std::fmt::Debug;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::sphere::{orthogonal_unit, SpherePoint, Vec3};

/// Polar axis and panel breakpoints (polar angles about that axis) that make a
/// Hamiltonian's speed piecewise smooth for product quadrature.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureHint {
    pub axis: Vec3,
    pub breaks: Vec<f64>,
}

impl Default for QuadratureHint {
    fn default() -> Self {
        Self { axis: Vec3::z(), breaks: Vec::new() }
    }
}

pub trait Hamiltonian: Send + Sync + Debug {
    fn name(&self) -> &str;

    /// Energy at time `t` in [0, 1].
    fn value(&self, t: f64, p: &Vec3) -> f64;

    /// Tangential gradient at time `t`.
    fn gradient(&self, t: f64, p: &Vec3) -> Vec3;

    /// Upper bound on the speed `|X|` over space and time.
    fn max_speed(&self) -> f64;

    /// Upper bound on the speed along the trajectory through `p`.
    fn speed_bound_at(&self, _p: &SpherePoint) -> f64 {
        self.max_speed()
    }

    /// Closed-form flow from time `t0` to `t1`, when one exists.
    fn exact_flow(&self, _p: &SpherePoint, _t0: f64, _t1: f64) -> Option<SpherePoint> {
        None
    }

    fn quadrature_hint(&self) -> QuadratureHint {
        QuadratureHint::default()
    }

    fn vector_field(&self, t: f64, p: &Vec3) -> Vec3 {
        self.gradient(t, p).cross(p)
    }
}

/// Radial angular-speed profile of a zonal Hamiltonian, as a function of the polar
/// angle from the zonal axis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum ZonalProfile {
    /// Rigid rotation at the given angular speed.
    Rigid { rate: f64 },
    /// Rigid rotation by `angle` inside the cap of radius `inner`, decaying along a
    /// C² smootherstep to zero at radius `outer`.
    Twist { angle: f64, inner: f64, outer: f64 },
}

fn smootherstep(x: f64) -> f64 {
    let x = x.clamp(0.0, 1.0);
    x * x * x * (x * (6.0 * x - 15.0) + 10.0)
}

impl ZonalProfile {
    /// Angular speed at polar angle `theta`.
    pub fn rate(&self, theta: f64) -> f64 {
        match *self {
            ZonalProfile::Rigid { rate } => rate,
            ZonalProfile::Twist { angle, inner, outer } => {
                if theta <= inner {
                    angle
                } else if theta >= outer {
                    0.0
                } else {
                    angle * smootherstep((outer - theta) / (outer - inner))
                }
            }
        }
    }

    fn max_rate(&self) -> f64 {
        match *self {
            ZonalProfile::Rigid { rate } => rate.abs(),
            ZonalProfile::Twist { angle, .. } => angle.abs(),
        }
    }

    /// Energy as a function of `u = cos(theta)`, normalized to vanish outside a twist.
    fn energy(&self, u: f64) -> f64 {
        match *self {
            ZonalProfile::Rigid { rate } => rate * u,
            ZonalProfile::Twist { angle, inner, outer } => {
                let theta = u.clamp(-1.0, 1.0).acos();
                if theta >= outer {
                    return 0.0;
                }
                // dH/du = rate(theta), so H(u) = int_theta^outer rate(s) sin(s) ds.
                let lo = theta.max(inner);
                let mut total = gauss_legendre_16(|s| self.rate(s) * s.sin(), lo, outer);
                if theta < inner {
                    total += angle * (theta.cos() - inner.cos());
                }
                total
            }
        }
    }
}

fn gauss_legendre_16(f: impl Fn(f64) -> f64, a: f64, b: f64) -> f64 {
    const X: [f64; 8] = [
        0.0950125098376374,
        0.2816035507792589,
        0.4580167776572274,
        0.6178762444026438,
        0.755404408355003,
        0.8656312023878318,
        0.9445750230732326,
        0.9894009349916499,
    ];
    const W: [f64; 8] = [
        0.1894506104550685,
        0.1826034150449236,
        0.1691565193950025,
        0.1495959888165767,
        0.1246289712555339,
        0.0951585116824928,
        0.0622535239386479,
        0.0271524594117541,
    ];
    let (m, h) = ((a + b) / 2.0, (b - a) / 2.0);
    X.iter().zip(W).map(|(&x, w)| w * (f(m - h * x) + f(m + h * x))).sum::<f64>() * h
}

/// Autonomous Hamiltonian depending only on the polar angle about `axis`.
///
/// Its flow rotates each point about `axis` by `rate(theta) * t`, so trajectories
/// are computed in closed form and the flow is exactly area preserving.
#[derive(Debug, Clone)]
pub struct Zonal {
    name: String,
    axis: Vec3,
    profile: ZonalProfile,
}

impl Zonal {
    pub fn new(name: impl Into<String>, axis: Vec3, profile: ZonalProfile) -> Self {
        Self { name: name.into(), axis: axis.normalize(), profile }
    }

    pub fn rotation(axis: Vec3, angle: f64) -> Self {
        Self::new("rotation", axis, ZonalProfile::Rigid { rate: angle })
    }

    pub fn axis(&self) -> &Vec3 {
        &self.axis
    }

    pub fn profile(&self) -> &ZonalProfile {
        &self.profile
    }

    fn polar_angle(&self, p: &Vec3) -> f64 {
        self.axis.cross(p).norm().atan2(self.axis.dot(p))
    }
}

impl Hamiltonian for Zonal {
    fn name(&self) -> &str {
        &self.name
    }

    fn value(&self, _t: f64, p: &Vec3) -> f64 {
        self.profile.energy(self.axis.dot(p))
    }

    fn gradient(&self, _t: f64, p: &Vec3) -> Vec3 {
        let u = self.axis.dot(p);
        (self.axis - p * u) * self.profile.rate(self.polar_angle(p))
    }

    fn max_speed(&self) -> f64 {
        self.profile.max_rate()
    }

    fn speed_bound_at(&self, p: &SpherePoint) -> f64 {
        let theta = self.polar_angle(p.vector());
        (self.profile.rate(theta) * theta.sin()).abs()
    }

    fn exact_flow(&self, p: &SpherePoint, t0: f64, t1: f64) -> Option<SpherePoint> {
        let rate = self.profile.rate(self.polar_angle(p.vector()));
        if rate == 0.0 || t0 == t1 {
            return Some(*p);
        }
        Some(p.rotated(&self.axis, rate * (t1 - t0)))
    }

    fn quadrature_hint(&self) -> QuadratureHint {
        let breaks = match self.profile {
            ZonalProfile::Rigid { .. } => Vec::new(),
            ZonalProfile::Twist { inner, outer, .. } => vec![inner, outer],
        };
        QuadratureHint { axis: self.axis, breaks }
    }
}

/// One plane-wave term `coef * cos(k . p + omega t + phase)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FourierTerm {
    pub wave: [f64; 3],
    pub omega: f64,
    pub phase: f64,
    pub coef: f64,
}

/// Smooth time-dependent Hamiltonian built from random plane waves restricted to the
/// sphere.
#[derive(Debug, Clone)]
pub struct RandomFourier {
    amplitude: f64,
    terms: Vec<FourierTerm>,
}

impl RandomFourier {
    /// `terms` waves with wave-vector norm at most `degree`, time frequencies up to
    /// `2 pi`, and coefficients normalized so their absolute values sum to one.
    pub fn sample<R: Rng + ?Sized>(rng: &mut R, degree: f64, terms: usize, amplitude: f64) -> Self {
        let mut out = Vec::with_capacity(terms);
        for _ in 0..terms {
            let dir = crate::sphere::uniform_point(rng);
            let norm = rng.gen_range(0.5..=1.0) * degree;
            out.push(FourierTerm {
                wave: (dir.vector() * norm).into(),
                omega: rng.gen_range(-2.0 * PI..2.0 * PI),
                phase: rng.gen_range(0.0..2.0 * PI),
                coef: rng.gen_range(-1.0..1.0),
            });
        }
        let total: f64 = out.iter().map(|t| t.coef.abs()).sum();
        if total > 0.0 {
            for t in &mut out {
                t.coef /= total;
            }
        }
        Self { amplitude, terms: out }
    }

    pub fn from_terms(amplitude: f64, terms: Vec<FourierTerm>) -> Self {
        Self { amplitude, terms }
    }

    pub fn amplitude(&self) -> f64 {
        self.amplitude
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self { amplitude: self.amplitude * factor, terms: self.terms.clone() }
    }
}

impl Hamiltonian for RandomFourier {
    fn name(&self) -> &str {
        "random-fourier"
    }

    fn value(&self, t: f64, p: &Vec3) -> f64 {
        self.amplitude
            * self
                .terms
                .iter()
                .map(|w| w.coef * (Vec3::from(w.wave).dot(p) + w.omega * t + w.phase).cos())
                .sum::<f64>()
    }

    fn gradient(&self, t: f64, p: &Vec3) -> Vec3 {
        let mut g = Vec3::zeros();
        for w in &self.terms {
            let k = Vec3::from(w.wave);
            g -= k * (w.coef * (k.dot(p) + w.omega * t + w.phase).sin());
        }
        g *= self.amplitude;
        g - p * g.dot(p)
    }

    fn max_speed(&self) -> f64 {
        self.amplitude.abs()
            * self.terms.iter().map(|w| w.coef.abs() * Vec3::from(w.wave).norm()).sum::<f64>()
    }
}

/// One Fourier mode `amplitude * cos(wavenumber * lambda + phase + frequency * t)` of a
/// circle vector field.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CircleMode {
    pub wavenumber: u32,
    pub amplitude: f64,
    pub phase: f64,
    pub frequency: f64,
}

/// Time-dependent angular velocity field `v(t, lambda)` on the equator; its flow is a
/// path of circle diffeomorphisms starting at the identity.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct CircleFlow {
    pub rate: f64,
    pub modes: Vec<CircleMode>,
}

impl CircleFlow {
    pub fn rotation(angle: f64) -> Self {
        Self { rate: angle, modes: Vec::new() }
    }

    pub fn is_identity(&self) -> bool {
        self.rate == 0.0 && self.modes.iter().all(|m| m.amplitude == 0.0)
    }

    pub fn velocity(&self, t: f64, lambda: f64) -> f64 {
        self.rate
            + self
                .modes
                .iter()
                .map(|m| m.amplitude * (m.wavenumber as f64 * lambda + m.phase + m.frequency * t).cos())
                .sum::<f64>()
    }

    pub fn velocity_derivative(&self, t: f64, lambda: f64) -> f64 {
        -self
            .modes
            .iter()
            .map(|m| {
                let k = m.wavenumber as f64;
                m.amplitude * k * (k * lambda + m.phase + m.frequency * t).sin()
            })
            .sum::<f64>()
    }

    fn max_velocity(&self) -> f64 {
        self.rate.abs() + self.modes.iter().map(|m| m.amplitude.abs()).sum::<f64>()
    }

    fn max_velocity_derivative(&self) -> f64 {
        self.modes.iter().map(|m| (m.amplitude * m.wavenumber as f64).abs()).sum()
    }

    /// Time-one map of the circle flow, by classical RK4 with `steps` steps.
    pub fn time_one(&self, lambda: f64, steps: usize) -> f64 {
        let h = 1.0 / steps as f64;
        let mut x = lambda;
        for i in 0..steps {
            let t = i as f64 * h;
            let k1 = self.velocity(t, x);
            let k2 = self.velocity(t + h / 2.0, x + h / 2.0 * k1);
            let k3 = self.velocity(t + h / 2.0, x + h / 2.0 * k2);
            let k4 = self.velocity(t + h, x + h * k3);
            x += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        }
        x
    }
}

/// Collar cutoff profile: equal to 1 on `|x| <= 1/3`, supported in `|x| < CUTOFF_EDGE`,
/// with `|chi'| <= 2`.
///
/// On the transition interval the derivative is a plateau with sin² ramps of relative
/// width `RAMP`, which makes the profile C².
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cutoff;

const CUTOFF_START: f64 = 1.0 / 3.0;
const CUTOFF_EDGE: f64 = 0.99;
const RAMP: f64 = 0.2;

impl Cutoff {
    fn ramp_integral(tau: f64) -> f64 {
        let a = RAMP;
        if tau <= 0.0 {
            0.0
        } else if tau < a {
            tau / 2.0 - a / (2.0 * PI) * (PI * tau / a).sin()
        } else if tau <= 1.0 - a {
            a / 2.0 + (tau - a)
        } else if tau < 1.0 {
            let s = 1.0 - tau;
            (1.0 - a) - (s / 2.0 - a / (2.0 * PI) * (PI * s / a).sin())
        } else {
            1.0 - a
        }
    }

    fn ramp(tau: f64) -> f64 {
        let a = RAMP;
        if tau <= 0.0 || tau >= 1.0 {
            0.0
        } else if tau < a {
            (PI * tau / (2.0 * a)).sin().powi(2)
        } else if tau > 1.0 - a {
            (PI * (1.0 - tau) / (2.0 * a)).sin().powi(2)
        } else {
            1.0
        }
    }

    pub fn value(x: f64) -> f64 {
        let tau = (x.abs() - CUTOFF_START) / (CUTOFF_EDGE - CUTOFF_START);
        1.0 - Self::ramp_integral(tau) / (1.0 - RAMP)
    }

    pub fn derivative(x: f64) -> f64 {
        let width = CUTOFF_EDGE - CUTOFF_START;
        let tau = (x.abs() - CUTOFF_START) / width;
        -x.signum() * Self::ramp(tau) / ((1.0 - RAMP) * width)
    }

    pub fn support_edge() -> f64 {
        CUTOFF_EDGE
    }

    pub fn plateau_edge() -> f64 {
        CUTOFF_START
    }
}

/// Cut-off lift of a circle flow to a collar of the equator.
///
/// In Archimedes coordinates `(z, lambda)`, which are Darboux for the area form,
/// `G = chi(s / delta) * z * v(t, lambda)` with `s = asin z` the signed geodesic
/// distance to the equator. On the equator the flow is `lambda' = v`, and the
/// equator is invariant.
#[derive(Debug, Clone)]
pub struct Collar {
    boundary: CircleFlow,
    delta: f64,
}

impl Collar {
    pub(crate) fn new(boundary: CircleFlow, delta: f64) -> Self {
        Self { boundary, delta }
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn boundary(&self) -> &CircleFlow {
        &self.boundary
    }
}

impl Hamiltonian for Collar {
    fn name(&self) -> &str {
        "collar"
    }

    fn value(&self, t: f64, p: &Vec3) -> f64 {
        let z = p.z.clamp(-1.0, 1.0);
        let s = z.asin();
        if s.abs() >= self.delta * CUTOFF_EDGE {
            return 0.0;
        }
        Cutoff::value(s / self.delta) * z * self.boundary.velocity(t, p.y.atan2(p.x))
    }

    fn gradient(&self, t: f64, p: &Vec3) -> Vec3 {
        let z = p.z.clamp(-1.0, 1.0);
        let s = z.asin();
        if s.abs() >= self.delta * CUTOFF_EDGE {
            return Vec3::zeros();
        }
        let lambda = p.y.atan2(p.x);
        let chi = Cutoff::value(s / self.delta);
        let dchi = Cutoff::derivative(s / self.delta) / self.delta;
        let v = self.boundary.velocity(t, lambda);
        let dv = self.boundary.velocity_derivative(t, lambda);
        let r2 = p.x * p.x + p.y * p.y;
        let dgdz = dchi / (1.0 - z * z).sqrt() * z * v + chi * v;
        let dgdl = chi * z * dv;
        let grad_z = Vec3::z() - p * z;
        let grad_l = Vec3::new(-p.y, p.x, 0.0) / r2;
        grad_z * dgdz + grad_l * dgdl
    }

    fn max_speed(&self) -> f64 {
        let d = self.delta;
        let vmax = self.boundary.max_velocity();
        (2.0 * d.tan() / d / 0.99 + 1.0) * vmax + d.tan() * self.boundary.max_velocity_derivative()
    }

    fn quadrature_hint(&self) -> QuadratureHint {
        let d = self.delta;
        let e = PI / 2.0;
        let mut breaks = vec![
            e - d * CUTOFF_EDGE,
            e - d * CUTOFF_START,
            e,
            e + d * CUTOFF_START,
            e + d * CUTOFF_EDGE,
        ];
        // Extra panels keep the quadrature resolution proportional to the collar width.
        for k in 1..4 {
            let f = k as f64 / 4.0;
            breaks.push(e - d * (CUTOFF_START + f * (CUTOFF_EDGE - CUTOFF_START)));
            breaks.push(e + d * (CUTOFF_START + f * (CUTOFF_EDGE - CUTOFF_START)));
        }
        QuadratureHint { axis: Vec3::z(), breaks }
    }
}

/// Orthonormal frame `(e1, e2)` completing `axis` to a right-handed basis.
pub(crate) fn frame(axis: &Vec3) -> (Vec3, Vec3) {
    let e1 = orthogonal_unit(axis);
    (e1, axis.cross(&e1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sphere::{stream_rng, uniform_point};
    use approx::assert_abs_diff_eq;

    fn check_gradient(h: &dyn Hamiltonian, seed: u64) {
        let mut rng = stream_rng(seed, 0);
        for i in 0..50 {
            let p = uniform_point(&mut rng);
            let t = i as f64 / 50.0;
            let g = h.gradient(t, p.vector());
            assert!(g.dot(p.vector()).abs() < 1e-10, "gradient not tangent");
            let (e1, e2) = frame(p.vector());
            let eps = 1e-6;
            for e in [e1, e2] {
                let plus = SpherePoint::from_vector(p.vector() + e * eps).unwrap();
                let minus = SpherePoint::from_vector(p.vector() - e * eps).unwrap();
                let fd = (h.value(t, plus.vector()) - h.value(t, minus.vector())) / (2.0 * eps);
                let tol = 1e-6f64.max(1e-4 * g.norm());
                assert!((fd - g.dot(&e)).abs() < tol, "{}: fd {fd} vs {}", h.name(), g.dot(&e));
            }
        }
    }

    #[test]
    fn gradients_match_finite_differences() {
        check_gradient(&Zonal::rotation(Vec3::new(1.0, 2.0, 0.5), 1.3), 1);
        check_gradient(
            &Zonal::new("twist", Vec3::new(0.3, -0.2, 1.0), ZonalProfile::Twist { angle: 2.0 * PI, inner: 0.5, outer: 0.9 }),
            2,
        );
        check_gradient(&RandomFourier::sample(&mut stream_rng(4, 4), 3.0, 6, 0.7), 3);
        let boundary = CircleFlow {
            rate: 0.4,
            modes: vec![CircleMode { wavenumber: 2, amplitude: 0.3, phase: 0.1, frequency: 1.0 }],
        };
        check_gradient(&Collar::new(boundary, 0.6), 4);
    }

    #[test]
    fn height_generates_counterclockwise_rotation() {
        let h = Zonal::rotation(Vec3::z(), 1.0);
        let p = Vec3::x();
        let x = h.vector_field(0.0, &p);
        assert_abs_diff_eq!(x, Vec3::y(), epsilon = 1e-15);
    }

    #[test]
    fn cutoff_profile_properties() {
        for i in 0..=2000 {
            let x = -1.2 + 2.4 * i as f64 / 2000.0;
            let v = Cutoff::value(x);
            assert!((0.0..=1.0 + 1e-15).contains(&v));
            if x.abs() <= 1.0 / 3.0 {
                assert_eq!(v, 1.0);
            }
            if x.abs() >= 0.99 {
                assert!(v.abs() < 1e-15);
            }
            assert!(Cutoff::derivative(x).abs() <= 2.0);
            let eps = 1e-6;
            let fd = (Cutoff::value(x + eps) - Cutoff::value(x - eps)) / (2.0 * eps);
            assert!((fd - Cutoff::derivative(x)).abs() < 1e-5);
        }
    }

    #[test]
    fn twist_energy_vanishes_outside_support() {
        let profile = ZonalProfile::Twist { angle: 1.0, inner: 0.3, outer: 0.6 };
        assert_eq!(profile.energy(0.7f64.cos()), 0.0);
        assert!(profile.energy(1.0) > 0.0);
    }
}
