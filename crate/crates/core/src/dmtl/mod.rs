//! Distributed MEMS transmission line phase shifter.
//!
//! A high-impedance line is loaded every `pitch` by a cell of switched
//! varactors. Switching a cell down raises the distributed capacitance,
//! lowering the line impedance and slowing the wave; the extra delay per
//! cell is the phase step of the shifter.

mod bits;
mod power;

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::electromech::check_positive;
use crate::network::{abcd_to_s, shunt_abcd, tline_abcd, SMatrix, TwoPortAbcd};
use crate::{Error, Result, C0};

pub use bits::{plan_bits, synthesize_bits, Bit, BitCoding, BitSynthesis, TargetState};
pub use power::{lint_power_rating, power_capability, PowerCapability, PowerLimit};

/// Unloaded host line.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LineParams {
    pub z0_unloaded: f64,
    pub eps_eff: f64,
}

impl LineParams {
    /// Inductance per unit length (H/m).
    pub fn l_t(&self) -> f64 {
        self.z0_unloaded * self.eps_eff.sqrt() / C0
    }

    /// Capacitance per unit length (F/m).
    pub fn c_t(&self) -> f64 {
        self.eps_eff.sqrt() / (self.z0_unloaded * C0)
    }

    pub fn validate(&self, path: &str) -> Result<()> {
        check_positive(self.z0_unloaded, &format!("{path}.z0_unloaded"))?;
        if !(self.eps_eff >= 1.0) || !self.eps_eff.is_finite() {
            return Err(Error::invalid(format!("{path}.eps_eff"), "must be at least 1"));
        }
        Ok(())
    }
}

/// Impedance of the line loaded by `c_cell` every `pitch`.
pub fn loaded_impedance(line: &LineParams, pitch: f64, c_cell: f64) -> f64 {
    (line.l_t() / (line.c_t() + c_cell / pitch)).sqrt()
}

/// Electrical length of one loaded cell (rad).
pub fn phase_per_cell(line: &LineParams, pitch: f64, c_cell: f64, freq: f64) -> f64 {
    2.0 * PI * freq * pitch * (line.l_t() * (line.c_t() + c_cell / pitch)).sqrt()
}

/// Bragg cutoff of the periodically loaded line.
pub fn bragg_frequency(line: &LineParams, pitch: f64, c_cell: f64) -> f64 {
    1.0 / (PI * pitch * (line.l_t() * (line.c_t() + c_cell / pitch)).sqrt())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CellState {
    Up,
    Down,
}

/// Per-cell actuation states, written as a string of `u` and `d`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pattern(pub Vec<CellState>);

impl Pattern {
    pub fn uniform(state: CellState, n: usize) -> Self {
        Pattern(vec![state; n])
    }

    pub fn down_count(&self) -> usize {
        self.0.iter().filter(|s| **s == CellState::Down).count()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl FromStr for Pattern {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.chars()
            .map(|c| match c {
                'u' | 'U' => Ok(CellState::Up),
                'd' | 'D' => Ok(CellState::Down),
                other => Err(Error::invalid(
                    "pattern",
                    format!("expected only `u` or `d`, found `{other}`"),
                )),
            })
            .collect::<Result<Vec<_>>>()
            .map(Pattern)
    }
}

impl fmt::Display for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.0 {
            f.write_str(match s {
                CellState::Up => "u",
                CellState::Down => "d",
            })?;
        }
        Ok(())
    }
}

/// Loaded-line phase shifter.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DmtlDesign {
    pub line: LineParams,
    pub pitch: f64,
    pub n_cells: usize,
    pub cantilevers_per_cell: usize,
    pub c_up_single: f64,
    pub c_down_single: f64,
    /// Cell indices actuated together, one group per bit.
    pub bit_plan: Vec<Vec<usize>>,
    /// Series resistance of each varactor branch (Ohm).
    pub series_resistance: f64,
    /// Series inductance of each varactor branch (H).
    pub series_inductance: f64,
}

impl DmtlDesign {
    /// Design with every cell in its own bit and an ideal capacitive load.
    pub fn new(line: LineParams, pitch: f64, n_cells: usize, c_up_single: f64, c_down_single: f64) -> Self {
        Self {
            line,
            pitch,
            n_cells,
            cantilevers_per_cell: 2,
            c_up_single,
            c_down_single,
            bit_plan: (0..n_cells).map(|i| vec![i]).collect(),
            series_resistance: 0.0,
            series_inductance: 0.0,
        }
    }

    pub fn validate(&self, path: &str) -> Result<()> {
        self.line.validate(&format!("{path}.line"))?;
        check_positive(self.pitch, &format!("{path}.pitch"))?;
        if self.n_cells == 0 {
            return Err(Error::invalid(format!("{path}.n_cells"), "must be at least 1"));
        }
        if self.cantilevers_per_cell == 0 {
            return Err(Error::invalid(
                format!("{path}.cantilevers_per_cell"),
                "must be at least 1",
            ));
        }
        for (name, v) in [
            ("c_up_single", self.c_up_single),
            ("c_down_single", self.c_down_single),
            ("series_resistance", self.series_resistance),
            ("series_inductance", self.series_inductance),
        ] {
            if !(v >= 0.0) || !v.is_finite() {
                return Err(Error::invalid(
                    format!("{path}.{name}"),
                    format!("must be non-negative, got {v}"),
                ));
            }
        }
        let mut owner = vec![None; self.n_cells];
        for (k, group) in self.bit_plan.iter().enumerate() {
            for &cell in group {
                let slot = owner.get_mut(cell).ok_or_else(|| {
                    Error::invalid(
                        format!("{path}.bit_plan[{k}]"),
                        format!("cell {cell} is out of range (n_cells = {})", self.n_cells),
                    )
                })?;
                if let Some(prev) = slot.replace(k) {
                    return Err(Error::invalid(
                        format!("{path}.bit_plan[{k}]"),
                        format!("cell {cell} already belongs to bit {prev}"),
                    ));
                }
            }
        }
        if let Some(cell) = owner.iter().position(Option::is_none) {
            return Err(Error::invalid(
                format!("{path}.bit_plan"),
                format!("cell {cell} is not assigned to any bit"),
            ));
        }
        Ok(())
    }

    /// Capacitance of one cell, all its cantilevers in parallel.
    pub fn cell_capacitance(&self, state: CellState) -> f64 {
        let single = match state {
            CellState::Up => self.c_up_single,
            CellState::Down => self.c_down_single,
        };
        self.cantilevers_per_cell as f64 * single
    }

    pub fn phase_per_cell(&self, state: CellState, freq: f64) -> f64 {
        phase_per_cell(&self.line, self.pitch, self.cell_capacitance(state), freq)
    }

    /// Extra phase one cell adds when switched down.
    pub fn delta_phase_per_cell(&self, freq: f64) -> f64 {
        self.phase_per_cell(CellState::Down, freq) - self.phase_per_cell(CellState::Up, freq)
    }

    /// Bragg frequency at down-state loading.
    pub fn bragg_frequency(&self) -> f64 {
        bragg_frequency(&self.line, self.pitch, self.cell_capacitance(CellState::Down))
    }

    pub fn phase_report(&self, freq: f64) -> PhaseReport {
        let c_up = self.cell_capacitance(CellState::Up);
        let c_down = self.cell_capacitance(CellState::Down);
        let phase_up = phase_per_cell(&self.line, self.pitch, c_up, freq);
        let phase_down = phase_per_cell(&self.line, self.pitch, c_down, freq);
        let f_bragg = self.bragg_frequency();
        PhaseReport {
            freq,
            phase_up,
            phase_down,
            delta_phase_cell: phase_down - phase_up,
            delta_phase_line: self.n_cells as f64 * (phase_down - phase_up),
            z_loaded_up: loaded_impedance(&self.line, self.pitch, c_up),
            z_loaded_down: loaded_impedance(&self.line, self.pitch, c_down),
            f_bragg,
            below_half_bragg: freq < 0.5 * f_bragg,
        }
    }

    fn branch_admittance(&self, state: CellState, freq: f64) -> Complex64 {
        let c = self.cell_capacitance(state);
        if c == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        let omega = 2.0 * PI * freq;
        let z = Complex64::new(self.series_resistance, omega * self.series_inductance)
            + 1.0 / Complex64::new(0.0, omega * c);
        1.0 / z
    }

    /// One cell: half a pitch of line, the varactor shunt, half a pitch.
    pub fn cell_abcd(&self, state: CellState, freq: f64) -> Result<TwoPortAbcd> {
        let half = tline_abcd(self.line.z0_unloaded, self.line.eps_eff, 0.5 * self.pitch, freq)?;
        let shunt = shunt_abcd(self.branch_admittance(state, freq), freq)?;
        half.then(&shunt)?.then(&half)
    }

    /// S-parameters of the whole line for `pattern` at every frequency of
    /// `freqs`, in grid order.
    pub fn assemble_sparams(&self, pattern: &Pattern, freqs: &[f64], z_ref: f64) -> Result<Vec<SMatrix>> {
        if pattern.len() != self.n_cells {
            return Err(Error::invalid(
                "pattern",
                format!("has {} cells, design has {}", pattern.len(), self.n_cells),
            ));
        }
        if freqs.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::Domain("frequency grid must be strictly ascending".into()));
        }
        freqs
            .par_iter()
            .map(|&f| {
                let up = self.cell_abcd(CellState::Up, f)?;
                let down = self.cell_abcd(CellState::Down, f)?;
                let chain = pattern.0.iter().try_fold(TwoPortAbcd::identity(f), |acc, s| {
                    acc.then(match s {
                        CellState::Up => &up,
                        CellState::Down => &down,
                    })
                })?;
                abcd_to_s(&chain, z_ref)
            })
            .collect()
    }
}

/// Phase figures of one cell at `freq`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PhaseReport {
    pub freq: f64,
    pub phase_up: f64,
    pub phase_down: f64,
    pub delta_phase_cell: f64,
    pub delta_phase_line: f64,
    pub z_loaded_up: f64,
    pub z_loaded_down: f64,
    pub f_bragg: f64,
    /// The lumped model is trusted only below half the Bragg frequency.
    pub below_half_bragg: bool,
}
