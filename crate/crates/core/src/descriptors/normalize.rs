//! Linear clamp maps from raw property values onto [0, 1].

use serde::{Deserialize, Serialize};

use super::PropertyId;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormalizationSpec {
    pub property: PropertyId,
    pub lower: f64,
    pub upper: f64,
    /// When set, `lower` maps to 1 and `upper` to 0.
    #[serde(default)]
    pub reversed: bool,
}

pub fn normalize(raw: f64, spec: &NormalizationSpec) -> f64 {
    let t = ((raw - spec.lower) / (spec.upper - spec.lower)).clamp(0.0, 1.0);
    if spec.reversed {
        1.0 - t
    } else {
        t
    }
}
