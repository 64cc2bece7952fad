use serde::Serialize;

use crate::electromech::Cantilever;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PowerLimit {
    Latching,
    SelfActuation,
}

/// Power handling of a line whose varactors all see the incident wave.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PowerCapability {
    pub p_latch: f64,
    /// `f64::INFINITY` above the model's power cap.
    pub p_self: f64,
    pub p_max: f64,
    pub limited_by: PowerLimit,
}

/// Latching and self-actuation limits of `beam` on a line of impedance
/// `z_line`. `mismatch_factor` multiplies the squared RF voltage, e.g.
/// `(1 + |gamma|)^2` for a standing-wave crest.
pub fn power_capability(beam: &Cantilever, z_line: f64, mismatch_factor: f64) -> Result<PowerCapability> {
    if !(mismatch_factor >= 1.0) {
        return Err(Error::Domain(format!(
            "mismatch factor must be at least 1, got {mismatch_factor}"
        )));
    }
    let p_latch = beam.latch_power(z_line)? / mismatch_factor;
    let p_self = beam.self_actuation_power(z_line)? / mismatch_factor;
    let (p_max, limited_by) = if p_latch <= p_self {
        (p_latch, PowerLimit::Latching)
    } else {
        (p_self, PowerLimit::SelfActuation)
    };
    Ok(PowerCapability {
        p_latch,
        p_self,
        p_max,
        limited_by,
    })
}

/// Checks that a design handles `rated_w` of hot-switched RF power.
/// Returns the list of violated rules; empty means the design passes.
pub fn lint_power_rating(beam: &Cantilever, z_line: f64, mismatch_factor: f64, rated_w: f64) -> Result<Vec<String>> {
    let cap = power_capability(beam, z_line, mismatch_factor)?;
    let mut issues = Vec::new();
    if !(cap.p_latch >= rated_w) {
        issues.push(format!(
            "RF latching at {:.3} W, below the {rated_w} W rating",
            cap.p_latch
        ));
    }
    if !(cap.p_self >= rated_w) {
        issues.push(format!(
            "RF self-actuation at {:.3} W, below the {rated_w} W rating",
            cap.p_self
        ));
    }
    if !(beam.beam().residual_actuation_gap() > 0.0) {
        issues.push("actuation electrode collapses before tip contact".to_string());
    }
    Ok(issues)
}
