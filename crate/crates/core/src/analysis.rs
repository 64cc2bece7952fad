//! Batch analyses behind the command line front end. Each returns a plain
//! serializable value; formatting is deterministic.

use std::fmt::Write as _;

use rayon::prelude::*;
use serde::Serialize;

use crate::design::{DesignFile, Options};
use crate::dmtl::{power_capability, synthesize_bits, BitSynthesis, Pattern, PhaseReport, PowerCapability};
use crate::electromech::DriveCondition;
use crate::network::{write_touchstone, SMatrix};
use crate::{Error, Result};

/// Static characterization of one varactor.
#[derive(Debug, Clone, Serialize)]
pub struct BeamReport {
    pub options: Options,
    pub theta_contact: f64,
    pub v_pull_in: f64,
    pub self_actuated: bool,
    pub v_release: f64,
    pub p_latch: f64,
    /// `None` when self-actuation needs more than `options.power_cap`.
    pub p_self: Option<f64>,
    pub power: PowerCapability,
    pub c_up: f64,
    pub c_down: f64,
    pub capacitance_ratio: f64,
    pub hold_voltage: f64,
    pub contact_force: f64,
    pub collapse_margin: f64,
}

pub fn beam_analyze(design: &DesignFile) -> Result<BeamReport> {
    let beam = design.cantilever();
    let z = design.options.z_line;
    let pull_in = beam.pull_in_voltage(0.0, z)?;
    let hold_voltage = design.options.hold_voltage.unwrap_or(1.2 * pull_in.voltage);
    let held = beam.contact_state(&DriveCondition::new(hold_voltage, 0.0, z))?;
    let p_self = beam.self_actuation_power(z)?;
    Ok(BeamReport {
        options: design.options,
        theta_contact: beam.theta_contact(),
        v_pull_in: pull_in.voltage,
        self_actuated: pull_in.self_actuated,
        v_release: beam.release_voltage(0.0, z)?,
        p_latch: beam.latch_power(z)?,
        p_self: p_self.is_finite().then_some(p_self),
        power: power_capability(&beam, z, design.options.mismatch_factor)?,
        c_up: beam.up_capacitance(),
        c_down: beam.down_capacitance(),
        capacitance_ratio: beam.capacitance_ratio(),
        hold_voltage,
        contact_force: held.contact_force.unwrap_or(0.0),
        collapse_margin: held.collapse_margin,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PowerSweepRow {
    pub p_rf: f64,
    pub v_release: f64,
    pub latched: bool,
}

/// Minimum DC release voltage against RF power.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PowerSweepResult {
    pub rows: Vec<PowerSweepRow>,
}

impl PowerSweepResult {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("p_watts,v_release_volts,latched\n");
        for r in &self.rows {
            writeln!(out, "{},{},{}", r.p_rf, r.v_release, r.latched).unwrap();
        }
        out
    }
}

/// `steps` evenly spaced powers from `p_min` to `p_max` inclusive.
pub fn power_sweep(design: &DesignFile, p_min: f64, p_max: f64, steps: usize) -> Result<PowerSweepResult> {
    if !(p_min >= 0.0) {
        return Err(Error::invalid("--pmin", "must be non-negative"));
    }
    if !(p_max > p_min) || !p_max.is_finite() {
        return Err(Error::invalid("--pmax", "must exceed --pmin"));
    }
    if steps < 2 {
        return Err(Error::invalid("--steps", "must be at least 2"));
    }
    let beam = design.cantilever();
    let z = design.options.z_line;
    let rows = (0..steps)
        .into_par_iter()
        .map(|i| {
            let p_rf = if i == steps - 1 {
                p_max
            } else {
                p_min + (p_max - p_min) * i as f64 / (steps - 1) as f64
            };
            let v_release = beam.release_voltage(p_rf, z)?;
            Ok(PowerSweepRow {
                p_rf,
                v_release,
                latched: v_release == 0.0,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(PowerSweepResult { rows })
}

pub fn dmtl_phase(design: &DesignFile, freq: f64) -> Result<PhaseReport> {
    let dmtl = design.dmtl()?;
    if !(freq > 0.0) || !freq.is_finite() {
        return Err(Error::invalid("--freq", "must be positive"));
    }
    Ok(dmtl.phase_report(freq))
}

/// Line S-parameters over a linear frequency grid.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SparamSweep {
    pub pattern: String,
    pub f_bragg: f64,
    /// False when part of the grid reaches half the Bragg frequency.
    pub within_half_bragg: bool,
    pub points: Vec<SMatrix>,
}

impl SparamSweep {
    pub fn to_touchstone(&self) -> Result<String> {
        let mut buf = Vec::new();
        write_touchstone(&self.points, &mut buf)?;
        Ok(String::from_utf8(buf).expect("touchstone output is ASCII"))
    }
}

pub fn dmtl_sparams(design: &DesignFile, f_min: f64, f_max: f64, points: usize, pattern: &str) -> Result<SparamSweep> {
    let dmtl = design.dmtl()?;
    if !(f_min > 0.0) {
        return Err(Error::invalid("--fmin", "must be positive"));
    }
    if points == 0 {
        return Err(Error::invalid("--points", "must be at least 1"));
    }
    if points > 1 && !(f_max > f_min) || !f_max.is_finite() {
        return Err(Error::invalid("--fmax", "must exceed --fmin"));
    }
    let pattern: Pattern = pattern.parse()?;
    if pattern.len() != dmtl.n_cells {
        return Err(Error::invalid(
            "--pattern",
            format!("has {} cells, design has {}", pattern.len(), dmtl.n_cells),
        ));
    }
    let freqs: Vec<f64> = if points == 1 {
        vec![f_min]
    } else {
        (0..points)
            .map(|i| {
                if i == points - 1 {
                    f_max
                } else {
                    f_min + (f_max - f_min) * i as f64 / (points - 1) as f64
                }
            })
            .collect()
    };
    let f_bragg = dmtl.bragg_frequency();
    let highest = *freqs.last().expect("grid is not empty");
    Ok(SparamSweep {
        pattern: pattern.to_string(),
        f_bragg,
        within_half_bragg: highest < 0.5 * f_bragg,
        points: dmtl.assemble_sparams(&pattern, &freqs, design.options.z_ref)?,
    })
}

pub fn dmtl_synth(design: &DesignFile, freq: f64, targets: &[f64]) -> Result<BitSynthesis> {
    let dmtl = design.dmtl()?;
    if !(freq > 0.0) || !freq.is_finite() {
        return Err(Error::invalid("--freq", "must be positive"));
    }
    if targets.is_empty() || targets.iter().any(|t| !(*t >= 0.0) || !t.is_finite()) {
        return Err(Error::invalid(
            "--targets",
            "need one or more finite, non-negative angles",
        ));
    }
    if targets.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::invalid("--targets", "must be ascending"));
    }
    synthesize_bits(dmtl, freq, targets)
}
