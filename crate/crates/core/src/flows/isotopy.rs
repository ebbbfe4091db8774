use std::sync::Arc;

use serde::Serialize;

use super::hamiltonian::{Hamiltonian, Zonal};
use super::FlowError;
use crate::sphere::{SpherePoint, Vec3};

/// Default integrator step in Hamiltonian time.
pub const DEFAULT_STEP: f64 = 1.0 / 128.0;
/// Default maximal angular spacing between recorded trajectory samples.
pub const DEFAULT_RESOLUTION: f64 = 0.02;

/// One Hamiltonian flowed over its own time interval [0, 1].
#[derive(Debug, Clone)]
pub struct Segment {
    pub hamiltonian: Arc<dyn Hamiltonian>,
    /// Share of the isotopy's time axis taken by this segment.
    pub duration: f64,
    /// Run the flow backwards, from time 1 to time 0.
    pub reversed: bool,
}

/// Piecewise Hamiltonian isotopy starting at the identity.
#[derive(Debug, Clone)]
pub struct Isotopy {
    segments: Vec<Segment>,
    step_size: f64,
    resolution: f64,
}

impl Default for Isotopy {
    fn default() -> Self {
        Self::identity()
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Trajectory {
    /// Time-ordered samples on the normalized time axis [0, 1].
    pub samples: Vec<(f64, SpherePoint)>,
}

impl Trajectory {
    pub fn end(&self) -> SpherePoint {
        self.samples.last().expect("trajectory has at least one sample").1
    }

    /// Dense output by great-circle interpolation between samples.
    pub fn at(&self, t: f64) -> SpherePoint {
        let idx = self.samples.partition_point(|(s, _)| *s <= t);
        if idx == 0 {
            return self.samples[0].1;
        }
        if idx == self.samples.len() {
            return self.end();
        }
        let (t0, p0) = self.samples[idx - 1];
        let (t1, p1) = self.samples[idx];
        if t1 <= t0 {
            return p1;
        }
        let s = (t - t0) / (t1 - t0);
        let v = p0.vector() * (1.0 - s) + p1.vector() * s;
        SpherePoint::from_vector(v).unwrap_or(p0)
    }

    /// Largest angular gap between consecutive samples.
    pub fn max_gap(&self) -> f64 {
        self.samples.windows(2).map(|w| w[0].1.angle_to(&w[1].1)).fold(0.0, f64::max)
    }
}

impl Isotopy {
    pub fn identity() -> Self {
        Self { segments: Vec::new(), step_size: DEFAULT_STEP, resolution: DEFAULT_RESOLUTION }
    }

    pub fn from_hamiltonian(h: impl Hamiltonian + 'static) -> Self {
        Self::from_arc(Arc::new(h))
    }

    pub fn from_arc(h: Arc<dyn Hamiltonian>) -> Self {
        Self {
            segments: vec![Segment { hamiltonian: h, duration: 1.0, reversed: false }],
            ..Self::identity()
        }
    }

    pub fn from_segments(segments: Vec<Segment>) -> Result<Self, FlowError> {
        if segments.iter().any(|s| !(s.duration > 0.0)) {
            return Err(FlowError::NonPositiveDuration);
        }
        Ok(Self { segments, ..Self::identity() })
    }

    pub fn with_step_size(mut self, step: f64) -> Result<Self, FlowError> {
        if !(step > 0.0 && step.is_finite()) {
            return Err(FlowError::StepSizeInvalid(step));
        }
        self.step_size = step;
        Ok(self)
    }

    pub fn with_resolution(mut self, resolution: f64) -> Result<Self, FlowError> {
        if !(resolution > 0.0 && resolution.is_finite()) {
            return Err(FlowError::StepSizeInvalid(resolution));
        }
        self.resolution = resolution;
        Ok(self)
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    pub fn step_size(&self) -> f64 {
        self.step_size
    }

    pub fn resolution(&self) -> f64 {
        self.resolution
    }

    pub fn is_identity(&self) -> bool {
        self.segments.is_empty()
    }

    pub fn total_duration(&self) -> f64 {
        self.segments.iter().map(|s| s.duration).sum()
    }

    /// Run `self` first, then `next`.
    pub fn then(&self, next: &Isotopy) -> Isotopy {
        let mut segments = self.segments.clone();
        segments.extend(next.segments.iter().cloned());
        Isotopy {
            segments,
            step_size: self.step_size.min(next.step_size),
            resolution: self.resolution.min(next.resolution),
        }
    }

    /// Time-reversed isotopy from the identity to the inverse time-one map.
    pub fn inverse(&self) -> Isotopy {
        let segments = self
            .segments
            .iter()
            .rev()
            .map(|s| Segment { reversed: !s.reversed, ..s.clone() })
            .collect();
        Isotopy { segments, ..self.clone() }
    }

    /// `k`-fold concatenation; `iterate(0)` is the identity.
    pub fn iterate(&self, k: usize) -> Isotopy {
        let mut segments = Vec::with_capacity(self.segments.len() * k);
        for _ in 0..k {
            segments.extend(self.segments.iter().cloned());
        }
        Isotopy { segments, ..self.clone() }
    }

    /// Number of substeps used for segment `seg` when moving the given points.
    fn substeps(&self, seg: &Segment, points: &[SpherePoint]) -> usize {
        let exact = points.first().is_none_or(|p| seg.hamiltonian.exact_flow(p, 0.0, 0.0).is_some());
        let speed = points.iter().map(|p| seg.hamiltonian.speed_bound_at(p)).fold(0.0, f64::max);
        let by_resolution = (speed / self.resolution).ceil() as usize;
        if exact {
            by_resolution.max(1)
        } else {
            by_resolution.max((1.0 / self.step_size).ceil() as usize).max(1)
        }
    }

    /// Advances all `points` together through every segment, calling `record` with the
    /// normalized time and current positions at each common sample.
    pub(crate) fn sweep(&self, points: &[SpherePoint], mut record: impl FnMut(f64, &[SpherePoint])) -> Vec<SpherePoint> {
        let mut current = points.to_vec();
        record(0.0, &current);
        let total = self.total_duration();
        let mut elapsed = 0.0;
        for seg in &self.segments {
            let m = self.substeps(seg, &current);
            let h = 1.0 / m as f64;
            for step in 0..m {
                let (t0, t1) = if seg.reversed {
                    (1.0 - step as f64 * h, 1.0 - (step + 1) as f64 * h)
                } else {
                    (step as f64 * h, (step + 1) as f64 * h)
                };
                for p in current.iter_mut() {
                    *p = advance(seg.hamiltonian.as_ref(), p, t0, t1);
                }
                let tau = (elapsed + seg.duration * (step + 1) as f64 * h) / total;
                record(tau.min(1.0), &current);
            }
            elapsed += seg.duration;
        }
        current
    }

    pub fn integrate(&self, p: &SpherePoint) -> Trajectory {
        let mut samples = Vec::new();
        self.sweep(std::slice::from_ref(p), |t, pts| samples.push((t, pts[0])));
        Trajectory { samples }
    }

    pub fn time_one(&self, p: &SpherePoint) -> SpherePoint {
        self.time_one_many(std::slice::from_ref(p))[0]
    }

    /// Time-one map applied to each point independently.
    pub fn time_one_many(&self, points: &[SpherePoint]) -> Vec<SpherePoint> {
        points.iter().map(|p| self.sweep(std::slice::from_ref(p), |_, _| {})[0]).collect()
    }
}

/// `compose(a, b)`: the isotopy of `a o b`, running `b` first.
pub fn compose(a: &Isotopy, b: &Isotopy) -> Isotopy {
    b.then(a)
}

pub fn inverse(a: &Isotopy) -> Isotopy {
    a.inverse()
}

pub fn iterate(a: &Isotopy, k: usize) -> Isotopy {
    a.iterate(k)
}

/// Autonomous isotopy whose time-one map is the rotation by `angle` about `axis`.
pub fn rotation(axis: Vec3, angle: f64) -> Isotopy {
    if angle == 0.0 {
        return Isotopy::identity();
    }
    Isotopy::from_hamiltonian(Zonal::rotation(axis, angle))
}

const GL_A11: f64 = 0.25;
const GL_A12: f64 = 0.25 - 0.288_675_134_594_812_9;
const GL_A21: f64 = 0.25 + 0.288_675_134_594_812_9;
const GL_A22: f64 = 0.25;
const GL_C1: f64 = 0.5 - 0.288_675_134_594_812_9;
const GL_C2: f64 = 0.5 + 0.288_675_134_594_812_9;

/// One step from `t0` to `t1`: closed form if the Hamiltonian has one, otherwise the
/// two-stage Gauss-Legendre collocation method (order 4, symmetric, preserves `|p|`)
/// followed by renormalization.
fn advance(h: &dyn Hamiltonian, p: &SpherePoint, t0: f64, t1: f64) -> SpherePoint {
    if let Some(q) = h.exact_flow(p, t0, t1) {
        return q;
    }
    let dt = t1 - t0;
    let x = *p.vector();
    let f = |t: f64, y: &Vec3| h.vector_field(t, y);
    let mut k1 = f(t0 + GL_C1 * dt, &x);
    let mut k2 = f(t0 + GL_C2 * dt, &x);
    for _ in 0..60 {
        let n1 = f(t0 + GL_C1 * dt, &(x + (k1 * GL_A11 + k2 * GL_A12) * dt));
        let n2 = f(t0 + GL_C2 * dt, &(x + (k1 * GL_A21 + k2 * GL_A22) * dt));
        let change = (n1 - k1).norm() + (n2 - k2).norm();
        k1 = n1;
        k2 = n2;
        if change * dt.abs() < 1e-15 {
            break;
        }
    }
    if k1 == Vec3::zeros() && k2 == Vec3::zeros() {
        return *p;
    }
    SpherePoint::from_nearly_unit(x + (k1 + k2) * (dt / 2.0))
}
