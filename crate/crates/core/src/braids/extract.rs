//! Braids traced by configurations under an isotopy.
//!
//! The closed loop is: geodesic tails from the base configuration `z` to `x`, the
//! isotopy applied to `x`, and the reversed tails from `f(x)` back to `z`. Every
//! sample is projected through a stereographic chart and the strands are kept
//! sorted by planar `x` coordinate. Between consecutive samples the motion is
//! taken linear; inversions are resolved by adjacent swaps in order of their
//! crossing times, each emitting one letter whose sign is read off the second
//! coordinate at the crossing.

use serde::{Deserialize, Serialize};

use super::word::{permutation_braid, BraidWord, Letter};
use super::BraidError;
use crate::flows::Isotopy;
use crate::sphere::{geodesic, stream_rng, uniform_point, Configuration, SpherePoint, Stereographic};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExtractionOptions {
    pub chart: Stereographic,
    /// Samples closer than this (radians) to the chart pole abort with `PoleCollision`.
    pub pole_clearance: f64,
    /// Minimal relative speed at a crossing and minimal planar gap between crossing strands.
    pub transversality: f64,
    /// Size (radians) of the perturbation of the base configuration on a retry.
    pub jitter: f64,
    pub max_retries: usize,
    /// Maximal geodesic step along the tails.
    pub tail_resolution: f64,
}

impl Default for ExtractionOptions {
    fn default() -> Self {
        Self {
            chart: Stereographic::equatorial(),
            pole_clearance: 1e-3,
            transversality: 1e-10,
            jitter: 1e-6,
            max_retries: 3,
            tail_resolution: 0.02,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Extraction {
    pub word: BraidWord,
    /// Time-one image of `x`.
    pub image: Vec<SpherePoint>,
    /// Number of jittered retries used.
    pub retries: usize,
}

type Planar = [f64; 2];

fn key_less(a: &Planar, b: &Planar) -> bool {
    (a[0], a[1]) < (b[0], b[1])
}

struct Tracker {
    /// `order[p]`: strand at position `p`.
    order: Vec<usize>,
    prev: Vec<Planar>,
    letters: Vec<Letter>,
    transversality: f64,
}

impl Tracker {
    fn new(start: Vec<Planar>, transversality: f64) -> Self {
        let mut order: Vec<usize> = (0..start.len()).collect();
        order.sort_by(|&a, &b| (start[a][0], start[a][1]).partial_cmp(&(start[b][0], start[b][1])).unwrap());
        Self { order, prev: start, letters: Vec::new(), transversality }
    }

    fn push(&mut self, next: Vec<Planar>) -> Result<(), BraidError> {
        let (p0, p1) = (&self.prev, &next);
        loop {
            let mut best: Option<(f64, usize)> = None;
            for q in 0..self.order.len().saturating_sub(1) {
                let (a, b) = (self.order[q], self.order[q + 1]);
                if !key_less(&p1[b], &p1[a]) {
                    continue;
                }
                let d0 = p0[a][0] - p0[b][0];
                let d1 = p1[a][0] - p1[b][0];
                let tau = if d0 >= 0.0 {
                    0.0
                } else {
                    if (d1 - d0).abs() < self.transversality {
                        return Err(BraidError::TangentialCrossing);
                    }
                    (-d0 / (d1 - d0)).clamp(0.0, 1.0)
                };
                if best.is_none_or(|(t, _)| tau < t) {
                    best = Some((tau, q));
                }
            }
            let Some((tau, q)) = best else { break };
            let (a, b) = (self.order[q], self.order[q + 1]);
            let ya = p0[a][1] + tau * (p1[a][1] - p0[a][1]);
            let yb = p0[b][1] + tau * (p1[b][1] - p0[b][1]);
            if (ya - yb).abs() < self.transversality {
                return Err(BraidError::TangentialCrossing);
            }
            self.letters.push(Letter::new(q + 1, if ya < yb { 1 } else { -1 }));
            self.order.swap(q, q + 1);
        }
        self.prev = next;
        Ok(())
    }
}

fn project_all(chart: &Stereographic, points: &[SpherePoint], clearance: f64) -> Result<Vec<Planar>, BraidError> {
    let pole = chart.pole();
    points
        .iter()
        .enumerate()
        .map(|(i, p)| {
            if p.angle_to(&pole) <= clearance {
                return Err(BraidError::PoleCollision { strand: i + 1 });
            }
            chart.project(p).map_err(|_| BraidError::PoleCollision { strand: i + 1 })
        })
        .collect()
}

/// Samples of the geodesics from `from[i]` to `to[i]`, on a common grid fine enough
/// for `resolution`. The first sample is `from`, the last `to`.
fn tail_samples(from: &[SpherePoint], to: &[SpherePoint], resolution: f64) -> Result<Vec<Vec<SpherePoint>>, BraidError> {
    let paths = from
        .iter()
        .zip(to)
        .map(|(a, b)| geodesic(a, b).map_err(BraidError::from))
        .collect::<Result<Vec<_>, _>>()?;
    let longest = paths.iter().map(|g| g.length()).fold(0.0, f64::max);
    let m = ((longest / resolution).ceil() as usize).max(1);
    Ok((0..=m).map(|j| paths.iter().map(|g| g.at(j as f64 / m as f64)).collect()).collect())
}

fn extract_once(iso: &Isotopy, x: &[SpherePoint], z: &[SpherePoint], opts: &ExtractionOptions) -> Result<Extraction, BraidError> {
    let project = |pts: &[SpherePoint]| project_all(&opts.chart, pts, opts.pole_clearance);
    let mut tracker = Tracker::new(project(z)?, opts.transversality);
    let start_order = tracker.order.clone();

    for pts in tail_samples(z, x, opts.tail_resolution)?.iter().skip(1) {
        tracker.push(project(pts)?)?;
    }
    let mut failure = None;
    let image = iso.sweep(x, |t, pts| {
        if failure.is_some() || t == 0.0 {
            return;
        }
        if let Err(e) = project(pts).and_then(|planar| tracker.push(planar)) {
            failure = Some(e);
        }
    });
    if let Some(e) = failure {
        return Err(e);
    }
    // The return tail is the reversed outbound tail from `z` to the image, so that
    // consecutive loops cancel letter by letter.
    let back = tail_samples(z, &image, opts.tail_resolution)?;
    for pts in back.iter().rev().skip(1) {
        tracker.push(project(pts)?)?;
    }
    debug_assert_eq!(tracker.order, start_order);

    // Conjugate into the label frame: strand `i` starts at position `i`.
    let n = z.len();
    let mut rank = vec![0; n];
    for (pos, &strand) in start_order.iter().enumerate() {
        rank[strand] = pos;
    }
    let p = permutation_braid(&rank);
    let body = BraidWord::new(n, tracker.letters)?;
    let word = p.then(&body)?.then(&p.inverse())?.reduce();
    Ok(Extraction { word, image, retries: 0 })
}

/// Open braid of the flow segment alone, in the position frame: strands are ordered
/// by their projected positions at `x`, and no tails are added. Non-pure in general.
pub fn trace_braid(iso: &Isotopy, x: &Configuration, opts: &ExtractionOptions) -> Result<BraidWord, BraidError> {
    let project = |pts: &[SpherePoint]| project_all(&opts.chart, pts, opts.pole_clearance);
    let mut tracker = Tracker::new(project(x.points())?, opts.transversality);
    let mut failure = None;
    iso.sweep(x.points(), |t, pts| {
        if failure.is_some() || t == 0.0 {
            return;
        }
        if let Err(e) = project(pts).and_then(|planar| tracker.push(planar)) {
            failure = Some(e);
        }
    });
    if let Some(e) = failure {
        return Err(e);
    }
    Ok(BraidWord::new(x.n(), tracker.letters)?.reduce())
}

fn jittered(z: &[SpherePoint], attempt: usize, size: f64) -> Vec<SpherePoint> {
    let mut rng = stream_rng(attempt as u64, 0x6a17);
    z.iter().map(|p| p.rotated(uniform_point(&mut rng).vector(), size)).collect()
}

/// Braid of `iso` at `x` relative to the base configuration `z`, in the label frame.
/// A tangential crossing is retried with `z` perturbed by `opts.jitter`.
pub fn extract_with(
    iso: &Isotopy,
    x: &Configuration,
    z: &Configuration,
    opts: &ExtractionOptions,
) -> Result<Extraction, BraidError> {
    if x.n() != z.n() {
        return Err(BraidError::StrandMismatch { left: x.n(), right: z.n() });
    }
    let mut base = z.points().to_vec();
    let mut attempt = 0;
    loop {
        match extract_once(iso, x.points(), &base, opts) {
            Err(BraidError::TangentialCrossing) if attempt < opts.max_retries => {
                attempt += 1;
                base = jittered(z.points(), attempt, opts.jitter);
            }
            Ok(mut e) => {
                e.retries = attempt;
                return Ok(e);
            }
            Err(e) => return Err(e),
        }
    }
}

pub fn extract_braid(iso: &Isotopy, x: &Configuration, z: &Configuration) -> Result<BraidWord, BraidError> {
    extract_with(iso, x, z, &ExtractionOptions::default()).map(|e| e.word)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flows::{cap_twist, eggbeater_family, rotation, standard_disks, FullTwist};
    use crate::sphere::Vec3;
    use std::f64::consts::PI;

    fn config(points: &[(f64, f64)]) -> Configuration {
        Configuration::new(points.iter().map(|&(lat, lon)| SpherePoint::from_lat_lon(lat, lon)).collect()).unwrap()
    }

    #[test]
    fn identity_gives_trivial_braid() {
        let x = config(&[(0.3, 3.0), (0.5, 3.5), (-0.4, 2.8), (-0.2, 3.3)]);
        let z = config(&[(0.4, 2.9), (0.2, 3.6), (-0.5, 3.1), (-0.3, 2.7)]);
        assert!(extract_braid(&Isotopy::identity(), &x, &z).unwrap().is_empty());
    }

    #[test]
    fn half_twist_exchange() {
        // Seen from outside at the south pole, rotation about -z is counterclockwise.
        let x = config(&[(-1.2, 0.0), (-1.2, PI)]);
        let opts = ExtractionOptions::default();
        let ccw = trace_braid(&rotation(-Vec3::z(), PI), &x, &opts).unwrap();
        assert_eq!(ccw.to_string(), "s1");
        let cw = trace_braid(&rotation(Vec3::z(), PI), &x, &opts).unwrap();
        assert_eq!(cw.to_string(), "s1^-1");
        // Closed loops return every strand to its base point.
        assert!(extract_braid(&rotation(-Vec3::z(), PI), &x, &x).map_or(true, |w| w.is_pure()));
    }

    #[test]
    fn full_twist_links_once() {
        let x = config(&[(-1.2, 0.0), (-1.2, PI)]);
        let w = extract_braid(&rotation(-Vec3::z(), 2.0 * PI), &x, &x).unwrap();
        assert!(w.is_pure());
        assert_eq!(w.linking_number(1, 2), 1.0);
    }

    #[test]
    fn eggbeater_traces_its_target() {
        let disks = standard_disks();
        let centers = Configuration::new(disks.iter().map(|d| d.center).collect()).unwrap();
        let iso = eggbeater_family(&disks, &[FullTwist::new(1, 3)], 1.0).unwrap();
        let w = extract_braid(&iso, &centers, &centers).unwrap();
        assert!(w.is_pure());
        assert_eq!(w.linking_number(1, 3), 1.0);
        for (i, j) in [(1, 2), (1, 4), (2, 3), (2, 4), (3, 4)] {
            assert_eq!(w.linking_number(i, j), 0.0);
        }
        let inv = extract_braid(&iso.inverse(), &centers, &centers).unwrap();
        assert_eq!(inv.linking_number(1, 3), -1.0);
    }

    #[test]
    fn strand_count_mismatch() {
        let x = config(&[(0.1, 3.0), (0.2, 3.2)]);
        let z = config(&[(0.1, 3.0), (0.2, 3.2), (0.3, 3.4)]);
        assert!(matches!(extract_braid(&Isotopy::identity(), &x, &z), Err(BraidError::StrandMismatch { .. })));
    }

    #[test]
    fn pole_collision_is_reported() {
        let x = config(&[(0.0, 0.0), (0.5, 3.0)]);
        assert!(matches!(extract_braid(&Isotopy::identity(), &x, &x), Err(BraidError::PoleCollision { strand: 1 })));
    }

    #[test]
    fn twist_outside_support_is_trivial() {
        let x = config(&[(0.3, 3.0), (-0.3, 3.2), (0.1, 2.5)]);
        let iso = cap_twist(SpherePoint::north(), 0.2, 0.4, 2.0 * PI).unwrap();
        assert!(extract_braid(&iso, &x, &x).unwrap().is_empty());
    }
}
