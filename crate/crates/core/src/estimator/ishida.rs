use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::EstimatorError;

/// Index quadruples of the quartic monomials besides `a1 a2 a3 a4`.
pub const ISHIDA_MONOMIALS: [[usize; 4]; 8] = [
    [1, 1, 3, 3],
    [1, 1, 4, 4],
    [1, 1, 3, 4],
    [1, 2, 3, 3],
    [1, 2, 4, 4],
    [2, 2, 3, 3],
    [2, 2, 3, 4],
    [2, 2, 4, 4],
];

/// Disk areas (normalized), scale, the value `b` of the target braid and the
/// coefficients `c_ijkl` keyed by their indices, e.g. `"1133"`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IshidaSpec {
    pub areas: [f64; 4],
    pub scale: f64,
    pub b: Option<f64>,
    pub coefficients: BTreeMap<String, f64>,
}

impl IshidaSpec {
    /// Spec with `b` set and every `c_ijkl` zero.
    pub fn b_only(areas: [f64; 4], b: f64) -> Self {
        let coefficients = ISHIDA_MONOMIALS.iter().map(|m| (key(m), 0.0)).collect();
        Self { areas, scale: 1.0, b: Some(b), coefficients }
    }

    fn validate(&self) -> Result<(), EstimatorError> {
        let total: f64 = self.areas.iter().map(|a| self.scale * a).sum();
        if self.areas.iter().any(|a| !(*a > 0.0)) || !(self.scale > 0.0) || total >= 1.0 {
            return Err(EstimatorError::InvalidInput(format!("scaled areas {:?} x {}", self.areas, self.scale)));
        }
        Ok(())
    }
}

fn key(m: &[usize; 4]) -> String {
    m.iter().map(|i| i.to_string()).collect()
}

/// `P(r a) = 4! (b a1 a2 a3 a4 + sum c_ijkl a_i a_j a_k a_l)` on the areas `r a`.
pub fn ishida_polynomial_prediction(spec: &IshidaSpec) -> Result<f64, EstimatorError> {
    spec.validate()?;
    let b = spec.b.ok_or_else(|| EstimatorError::IncompleteCoefficients("b".into()))?;
    let a: Vec<f64> = spec.areas.iter().map(|x| spec.scale * x).collect();
    let mut total = b * a[0] * a[1] * a[2] * a[3];
    for m in &ISHIDA_MONOMIALS {
        let k = key(m);
        let c = spec.coefficients.get(&k).ok_or(EstimatorError::IncompleteCoefficients(k))?;
        total += c * m.iter().map(|&i| a[i - 1]).product::<f64>();
    }
    Ok(24.0 * total)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        let zero = IshidaSpec::b_only([0.1; 4], 0.0);
        assert_eq!(ishida_polynomial_prediction(&zero).unwrap(), 0.0);
        let p = ishida_polynomial_prediction(&IshidaSpec::b_only([0.1; 4], 1.0)).unwrap();
        assert!((p - 2.4e-3).abs() < 1e-15);
        let mut missing = IshidaSpec::b_only([0.1; 4], 1.0);
        missing.coefficients.remove("2234");
        assert!(matches!(ishida_polynomial_prediction(&missing), Err(EstimatorError::IncompleteCoefficients(k)) if k == "2234"));
        missing.b = None;
        assert!(ishida_polynomial_prediction(&missing).is_err());
    }
}
