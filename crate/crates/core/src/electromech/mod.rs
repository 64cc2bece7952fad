//! Lumped rigid-lever model of the two-area cantilever.
//!
//! The beam is a rigid plate hinged at its anchor (x = 0) on an angular
//! spring `k_theta`. A rotation `theta` closes the gap at axial position `x`
//! by `theta * x`. Two electrodes sit under the beam: a large actuation pad
//! close to the anchor, driven by the DC bias, and a small distal contact
//! tip over the RF line, driven by the RF signal. The tip reaches the line
//! dielectric at `theta_c = tip.gap / tip.x_end`, while the actuation pad
//! still has a residual air gap left (dual-gap rule).

mod model;
mod torque;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

pub use model::{angular_stiffness_from_beam, Cantilever, CvPoint, PullIn, SweepDirection};
pub use torque::{effective_gap, region_torque, rms_voltage};

/// One electrode under the beam, described by its axial extent from the
/// anchor, lateral width and at-rest air gap.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ElectrodeRegion {
    pub x_start: f64,
    pub x_end: f64,
    pub width: f64,
    pub gap: f64,
}

impl ElectrodeRegion {
    pub fn area(&self) -> f64 {
        self.width * (self.x_end - self.x_start)
    }

    pub fn centroid(&self) -> f64 {
        0.5 * (self.x_start + self.x_end)
    }

    pub fn validate(&self, path: &str) -> Result<()> {
        check_positive(self.x_start, &format!("{path}.x_start"))?;
        check_positive(self.width, &format!("{path}.width"))?;
        check_positive(self.gap, &format!("{path}.gap"))?;
        if !(self.x_end > self.x_start) {
            return Err(Error::invalid(
                format!("{path}.x_end"),
                format!("must exceed {path}.x_start"),
            ));
        }
        Ok(())
    }
}

/// Geometry, dielectric and stiffness of the two-area cantilever.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BeamDesign {
    pub actuation: ElectrodeRegion,
    pub tip: ElectrodeRegion,
    /// Dielectric thickness on the line under the tip (m).
    pub t_d: f64,
    /// Relative permittivity of that dielectric.
    pub eps_r: f64,
    /// Angular restoring stiffness about the anchor (N m/rad).
    pub k_theta: f64,
}

impl BeamDesign {
    /// Checks every geometric invariant. `path` prefixes error locations.
    pub fn validate(&self, path: &str) -> Result<()> {
        let p = |field: &str| {
            if path.is_empty() {
                field.to_string()
            } else {
                format!("{path}.{field}")
            }
        };
        self.actuation.validate(&p("actuation"))?;
        self.tip.validate(&p("tip"))?;
        check_positive(self.t_d, &p("t_d"))?;
        check_positive(self.k_theta, &p("k_theta"))?;
        if !(self.eps_r >= 1.0) || !self.eps_r.is_finite() {
            return Err(Error::invalid(p("eps_r"), "must be at least 1"));
        }
        if self.tip.x_start < self.actuation.x_end {
            return Err(Error::invalid(
                p("tip.x_start"),
                format!("tip must be distal: must not be below {}", p("actuation.x_end")),
            ));
        }
        if !(self.actuation.gap > self.tip.gap) {
            return Err(Error::invalid(
                p("actuation.gap"),
                format!("{} must exceed {} (dual-gap rule)", p("actuation.gap"), p("tip.gap")),
            ));
        }
        if !(self.residual_actuation_gap() > 0.0) {
            return Err(Error::invalid(
                p("actuation.gap"),
                "actuation electrode would be collapsed before the tip lands",
            ));
        }
        Ok(())
    }

    /// Air gap left over the distal edge of the actuation pad when the tip
    /// lands.
    pub fn residual_actuation_gap(&self) -> f64 {
        self.actuation.gap - self.tip.gap / self.tip.x_end * self.actuation.x_end
    }
}

/// Bias and RF excitation seen by one varactor.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DriveCondition {
    pub v_dc: f64,
    pub p_rf: f64,
    pub z_line: f64,
}

impl DriveCondition {
    pub fn dc(v_dc: f64) -> Self {
        Self {
            v_dc,
            p_rf: 0.0,
            z_line: 50.0,
        }
    }

    pub fn new(v_dc: f64, p_rf: f64, z_line: f64) -> Self {
        Self { v_dc, p_rf, z_line }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.v_dc >= 0.0) || !(self.p_rf >= 0.0) {
            return Err(Error::Domain(format!(
                "drive must be non-negative (v_dc = {}, p_rf = {})",
                self.v_dc, self.p_rf
            )));
        }
        if !(self.z_line > 0.0) {
            return Err(Error::Domain(format!("z_line must be positive, got {}", self.z_line)));
        }
        Ok(())
    }
}

/// Solved mechanical state of the beam.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MechEquilibrium {
    pub theta: f64,
    pub in_contact: bool,
    /// Normal force at the tip, reported only in contact.
    pub contact_force: Option<f64>,
    /// Up state: `dR/dtheta > 0`. Contact: the beam is held down.
    pub stable: bool,
    /// Smallest remaining air gap over the actuation electrode (m).
    pub collapse_margin: f64,
}

/// How the RF power maps to the voltage that pulls on the tip.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ForceMode {
    /// Time-averaged force, `V^2 = P Z`.
    #[default]
    Rms,
    /// Worst case at the waveform crest, `V^2 = 2 P Z`.
    Peak,
}

/// Modelling switches and numerical settings.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ModelOptions {
    pub force_mode: ForceMode,
    /// Extra air gap left between tip and dielectric in contact (m).
    pub contact_roughness: f64,
    /// Whether the actuation pad is covered by the same dielectric as the
    /// line. When false its counter-electrode is bare metal.
    pub actuation_dielectric: bool,
    /// Theta grid used to bracket equilibria.
    pub grid_points: usize,
    /// Powers above this are reported as unbounded (W).
    pub power_cap: f64,
}

impl Default for ModelOptions {
    fn default() -> Self {
        Self {
            force_mode: ForceMode::Rms,
            contact_roughness: 0.0,
            actuation_dielectric: true,
            grid_points: 2048,
            power_cap: 1.0e4,
        }
    }
}

impl ModelOptions {
    pub fn validate(&self, path: &str) -> Result<()> {
        if !(self.contact_roughness >= 0.0) || !self.contact_roughness.is_finite() {
            return Err(Error::invalid(
                format!("{path}.contact_roughness"),
                "must be non-negative",
            ));
        }
        if self.grid_points < 2 {
            return Err(Error::invalid(format!("{path}.grid_points"), "must be at least 2"));
        }
        if !(self.power_cap > 0.0) {
            return Err(Error::invalid(format!("{path}.power_cap"), "must be positive"));
        }
        Ok(())
    }
}

pub(crate) fn check_positive(value: f64, path: &str) -> Result<()> {
    if value > 0.0 && value.is_finite() {
        Ok(())
    } else {
        Err(Error::invalid(path, format!("must be positive, got {value}")))
    }
}
