//! Small statistics used by the property reports.

use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal, StudentsT};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    pub slope_stderr: f64,
    /// Two-sided 95% confidence interval of the slope.
    pub slope_ci: (f64, f64),
    /// Weighted coefficient of determination; `None` when the data have no spread.
    pub r2: Option<f64>,
}

impl LinearFit {
    pub fn slope_ci_contains(&self, v: f64) -> bool {
        self.slope_ci.0 <= v && v <= self.slope_ci.1
    }
}

/// Weighted least squares of `y` on `x` with weights `1 / se^2`. Falls back to
/// ordinary least squares when some standard error is zero. Needs three points.
pub fn weighted_linear_fit(x: &[f64], y: &[f64], se: &[f64]) -> Option<LinearFit> {
    let m = x.len();
    if m < 3 || y.len() != m || se.len() != m {
        return None;
    }
    let w: Vec<f64> = if se.iter().all(|s| *s > 0.0) { se.iter().map(|s| 1.0 / (s * s)).collect() } else { vec![1.0; m] };
    let sw: f64 = w.iter().sum();
    let xm = w.iter().zip(x).map(|(w, x)| w * x).sum::<f64>() / sw;
    let ym = w.iter().zip(y).map(|(w, y)| w * y).sum::<f64>() / sw;
    let sxx: f64 = w.iter().zip(x).map(|(w, x)| w * (x - xm).powi(2)).sum();
    if sxx == 0.0 {
        return None;
    }
    let sxy: f64 = (0..m).map(|i| w[i] * (x[i] - xm) * (y[i] - ym)).sum();
    let slope = sxy / sxx;
    let intercept = ym - slope * xm;
    let ss_res: f64 = (0..m).map(|i| w[i] * (y[i] - intercept - slope * x[i]).powi(2)).sum();
    let ss_tot: f64 = (0..m).map(|i| w[i] * (y[i] - ym).powi(2)).sum();
    let dof = (m - 2) as f64;
    let slope_stderr = (ss_res / dof / sxx).sqrt();
    let t = StudentsT::new(0.0, 1.0, dof).expect("positive dof").inverse_cdf(0.975);
    let r2 = if ss_tot > 0.0 { Some(1.0 - ss_res / ss_tot) } else { None };
    Some(LinearFit {
        slope,
        intercept,
        slope_stderr,
        slope_ci: (slope - t * slope_stderr, slope + t * slope_stderr),
        r2,
    })
}

/// Ordinary least-squares slope of `log y` against `log x`.
pub fn log_log_slope(x: &[f64], y: &[f64]) -> Option<f64> {
    let lx: Vec<f64> = x.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = y.iter().map(|v| v.ln()).collect();
    if lx.len() < 2 || lx.iter().chain(&ly).any(|v| !v.is_finite()) {
        return None;
    }
    let m = lx.len() as f64;
    let xm = lx.iter().sum::<f64>() / m;
    let ym = ly.iter().sum::<f64>() / m;
    let sxx: f64 = lx.iter().map(|x| (x - xm).powi(2)).sum();
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - xm) * (y - ym)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KendallTest {
    pub tau: f64,
    /// Two-sided p-value of the normal approximation with tie correction.
    pub p_value: f64,
}

/// Kendall's tau-b between `x` and `y` and the p-value for "no monotone trend".
/// Constant data give `tau = 0`, `p = 1`.
pub fn kendall_tau(x: &[f64], y: &[f64]) -> KendallTest {
    let m = x.len().min(y.len());
    let (mut concordant, mut discordant) = (0.0f64, 0.0f64);
    let (mut n0, mut tx, mut ty) = (0.0f64, 0.0f64, 0.0f64);
    for i in 0..m {
        for j in i + 1..m {
            n0 += 1.0;
            let dx = (x[i] - x[j]).signum() * ((x[i] != x[j]) as i32 as f64);
            let dy = (y[i] - y[j]).signum() * ((y[i] != y[j]) as i32 as f64);
            if dx == 0.0 {
                tx += 1.0;
            }
            if dy == 0.0 {
                ty += 1.0;
            }
            if dx * dy > 0.0 {
                concordant += 1.0;
            } else if dx * dy < 0.0 {
                discordant += 1.0;
            }
        }
    }
    let denom = ((n0 - tx) * (n0 - ty)).sqrt();
    if denom == 0.0 {
        return KendallTest { tau: 0.0, p_value: 1.0 };
    }
    let tau = (concordant - discordant) / denom;
    let n = m as f64;
    let var_s = n * (n - 1.0) * (2.0 * n + 5.0) / 18.0;
    let z = (concordant - discordant) / var_s.sqrt();
    let p_value = 2.0 * (1.0 - Normal::standard().cdf(z.abs()));
    KendallTest { tau, p_value: p_value.min(1.0) }
}

/// Whether `v` is non-decreasing up to three combined standard errors between
/// neighbors.
pub fn monotone_within_noise(v: &[f64], se: &[f64]) -> bool {
    (1..v.len()).all(|i| v[i] >= v[i - 1] - 3.0 * (se[i].powi(2) + se[i - 1].powi(2)).sqrt())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AffineEnvelope {
    pub c: f64,
    pub d: f64,
}

/// Minimal affine envelope `y_i <= c + d x_i` with `c, d >= 0`, minimizing the total
/// gap `sum (c + d x_i - y_i)`: a two-variable linear program solved by enumerating
/// the vertices of the feasible region.
pub fn affine_envelope(x: &[f64], y: &[f64]) -> AffineEnvelope {
    let feasible = |c: f64, d: f64| {
        c >= -1e-12 && d >= -1e-12 && x.iter().zip(y).all(|(xi, yi)| c + d * xi >= yi - 1e-9 * (1.0 + yi.abs()))
    };
    let sx: f64 = x.iter().sum();
    let cost = |c: f64, d: f64| x.len() as f64 * c + d * sx;
    let mut candidates = Vec::new();
    // Vertices on c = 0 or d = 0.
    candidates.push((y.iter().cloned().fold(0.0, f64::max), 0.0));
    let dmax = x.iter().zip(y).filter(|(xi, _)| **xi > 0.0).map(|(xi, yi)| yi / xi).fold(0.0, f64::max);
    candidates.push((0.0, dmax));
    // Intersections of pairs of tight constraints.
    for i in 0..x.len() {
        for j in i + 1..x.len() {
            if (x[i] - x[j]).abs() > 1e-15 {
                let d = (y[i] - y[j]) / (x[i] - x[j]);
                candidates.push((y[i] - d * x[i], d));
            }
        }
    }
    candidates
        .into_iter()
        .filter(|&(c, d)| feasible(c, d))
        .map(|(c, d)| (c.max(0.0), d.max(0.0)))
        .min_by(|a, b| cost(a.0, a.1).total_cmp(&cost(b.0, b.1)))
        .map(|(c, d)| AffineEnvelope { c, d })
        .unwrap_or(AffineEnvelope { c: f64::INFINITY, d: 0.0 })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_line_fit() {
        let x = [1.0, 2.0, 3.0, 4.0];
        let y = [2.0, 4.0, 6.0, 8.0];
        let fit = weighted_linear_fit(&x, &y, &[0.1; 4]).unwrap();
        assert!((fit.slope - 2.0).abs() < 1e-12);
        assert!((fit.r2.unwrap() - 1.0).abs() < 1e-12);
        let flat = weighted_linear_fit(&x, &[0.0; 4], &[0.0; 4]).unwrap();
        assert!(flat.slope_ci_contains(0.0));
        assert!(flat.r2.is_none());
    }

    #[test]
    fn kendall_detects_trend() {
        let x: Vec<f64> = (0..20).map(|i| i as f64).collect();
        assert!(kendall_tau(&x, &x).p_value < 1e-6);
        assert_eq!(kendall_tau(&x, &[1.0; 20]).p_value, 1.0);
    }

    #[test]
    fn envelope_is_tight() {
        let x = [0.0, 1.0, 2.0, 4.0];
        let y = [1.0, 1.5, 2.0, 3.0];
        let e = affine_envelope(&x, &y);
        assert!((e.c - 1.0).abs() < 1e-12 && (e.d - 0.5).abs() < 1e-12);
        let zero = affine_envelope(&x, &[0.0; 4]);
        assert_eq!((zero.c, zero.d), (0.0, 0.0));
    }

    #[test]
    fn log_slope() {
        let x = [0.2, 0.1, 0.05];
        let y: Vec<f64> = x.iter().map(|v| 3.0 * v).collect();
        assert!((log_log_slope(&x, &y).unwrap() - 1.0).abs() < 1e-12);
    }
}
