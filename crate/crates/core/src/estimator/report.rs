use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum PropertyId {
    P1,
    P2,
    P3,
    P4,
    Frag,
    NonDeg,
    /// Lower-bound certificates for the metric on equators.
    D1,
    /// A single estimate or length evaluation.
    Estimate,
    Length,
}

impl PropertyId {
    pub fn label(self) -> &'static str {
        match self {
            PropertyId::P1 => "p1",
            PropertyId::P2 => "p2",
            PropertyId::P3 => "p3",
            PropertyId::P4 => "p4",
            PropertyId::Frag => "frag",
            PropertyId::NonDeg => "nondeg",
            PropertyId::D1 => "d1",
            PropertyId::Estimate => "estimate",
            PropertyId::Length => "length",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportPoint {
    /// Iterate count, scan index, or swept parameter.
    pub k_or_index: f64,
    pub value: f64,
    pub stderr: f64,
    pub samples: usize,
    /// L^1 length of the flow behind the point, when relevant.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub length: Option<f64>,
}

impl ReportPoint {
    pub fn new(k_or_index: f64, value: f64, stderr: f64, samples: usize) -> Self {
        Self { k_or_index, value, stderr, samples, length: None }
    }

    pub fn with_length(mut self, length: f64) -> Self {
        self.length = Some(length);
        self
    }
}

/// Outcome of one property experiment. Constants are empirical envelopes fitted from
/// the points; `pass` is a function of the points and the stated thresholds only.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PropertyReport {
    pub property: PropertyId,
    pub constants: BTreeMap<String, f64>,
    pub diagnostics: BTreeMap<String, serde_json::Value>,
    pub points: Vec<ReportPoint>,
    pub pass: bool,
    pub seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub config_hash: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub manifest: Option<serde_json::Value>,
}

impl PropertyReport {
    pub fn new(property: PropertyId, seed: u64) -> Self {
        Self {
            property,
            constants: BTreeMap::new(),
            diagnostics: BTreeMap::new(),
            points: Vec::new(),
            pass: false,
            seed,
            config_hash: None,
            manifest: None,
        }
    }

    pub fn constant(&mut self, name: &str, value: f64) {
        self.constants.insert(name.to_string(), value);
    }

    pub fn diagnostic(&mut self, name: &str, value: impl Serialize) {
        self.diagnostics.insert(name.to_string(), serde_json::to_value(value).expect("serializable diagnostic"));
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// Rows `experiment,k_or_index,value,stderr,samples,seed` with a header.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("experiment,k_or_index,value,stderr,samples,seed\n");
        for p in &self.points {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{}",
                self.property.label(),
                p.k_or_index,
                p.value,
                p.stderr,
                p.samples,
                self.seed
            );
        }
        out
    }

    pub fn summary_line(&self) -> String {
        let constants: Vec<String> = self.constants.iter().map(|(k, v)| format!("{k}={v:.6}")).collect();
        format!(
            "{} {} {}",
            if self.pass { "PASS" } else { "FAIL" },
            self.property.label(),
            constants.join(" ")
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_layout() {
        let mut r = PropertyReport::new(PropertyId::P2, 7);
        r.points.push(ReportPoint::new(1.0, 0.5, 0.1, 100));
        assert_eq!(r.to_csv(), "experiment,k_or_index,value,stderr,samples,seed\np2,1,0.5,0.1,100,7\n");
        let v: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
        for key in ["property", "constants", "points", "pass", "seed"] {
            assert!(v.get(key).is_some());
        }
    }
}
