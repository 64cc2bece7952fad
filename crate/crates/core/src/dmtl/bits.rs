//! Digital bit synthesis: grouping cells so that switching whole groups
//! reaches a list of target phase states.

use serde::Serialize;

use super::DmtlDesign;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum BitCoding {
    /// Bit `k` carries `2^k` times the smallest target step.
    Binary,
    /// Bit `k` carries the increment from target `k - 1` to target `k`;
    /// state `k` switches bits `0..=k`.
    Thermometer,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Bit {
    pub nominal_deg: f64,
    pub cells: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TargetState {
    pub target_deg: f64,
    /// Indices into [`BitSynthesis::bits`] switched down for this state.
    pub bits_on: Vec<usize>,
    pub cells_down: usize,
    pub achieved_deg: f64,
    pub error_deg: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BitSynthesis {
    pub cell_step_deg: f64,
    pub coding: BitCoding,
    pub bits: Vec<Bit>,
    pub states: Vec<TargetState>,
    pub cells_used: usize,
    pub unused_cells: Vec<usize>,
}

/// Plans bits for `targets` (degrees, ascending) on `design` at `freq`.
pub fn synthesize_bits(design: &DmtlDesign, freq: f64, targets: &[f64]) -> Result<BitSynthesis> {
    let step = design.delta_phase_per_cell(freq).to_degrees();
    plan_bits(step, design.n_cells, targets)
}

/// Cells needed for `target`, ties rounded up.
fn cells_for(target: f64, step: f64) -> usize {
    (target / step + 0.5).floor() as usize
}

/// Plans bits for a line of `n_cells` cells each adding `step_deg`.
///
/// Binary weighting is used when every target is a multiple of the smallest
/// one and the rounded bit sizes keep every state within half a step;
/// otherwise each target gets its own increment bit. Every reported state
/// is within `step_deg / 2` of its target.
pub fn plan_bits(step_deg: f64, n_cells: usize, targets: &[f64]) -> Result<BitSynthesis> {
    if targets.iter().any(|t| !(*t >= 0.0) || !t.is_finite()) {
        return Err(Error::Domain("phase targets must be finite and non-negative".into()));
    }
    if targets.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::Domain("phase targets must be ascending".into()));
    }
    let max = targets.last().copied().unwrap_or(0.0);
    if max > 0.0 {
        if !(step_deg > 0.0) {
            return Err(Error::Domain(format!(
                "cell phase step is {step_deg} deg; no target above 0 deg is reachable"
            )));
        }
        let required = cells_for(max, step_deg);
        if required > n_cells {
            return Err(Error::Unachievable {
                target_deg: max,
                required,
                available: n_cells,
            });
        }
    }

    let plan = binary_plan(step_deg, n_cells, targets).unwrap_or_else(|| thermometer_plan(step_deg, n_cells, targets));
    Ok(plan)
}

fn binary_plan(step: f64, n_cells: usize, targets: &[f64]) -> Option<BitSynthesis> {
    let lsb = targets.iter().copied().find(|t| *t > 0.0)?;
    let mut multiples = Vec::with_capacity(targets.len());
    for &t in targets {
        let k = (t / lsb).round();
        if (t - k * lsb).abs() > 1e-9 * t.max(lsb) {
            return None;
        }
        multiples.push(k as u64);
    }
    let max_k = *multiples.iter().max()?;
    let n_bits = (u64::BITS - max_k.leading_zeros()) as usize;
    let sizes: Vec<usize> = (0..n_bits).map(|j| cells_for(lsb * (1u64 << j) as f64, step)).collect();
    let total: usize = sizes.iter().sum();
    if total > n_cells {
        return None;
    }
    let bits = assign_cells(&sizes, (0..n_bits).map(|j| lsb * (1u64 << j) as f64));
    let states: Vec<TargetState> = targets
        .iter()
        .zip(&multiples)
        .map(|(&t, &k)| {
            let on: Vec<usize> = (0..n_bits).filter(|j| k >> j & 1 == 1).collect();
            state(t, on, &sizes, step)
        })
        .collect();
    if states.iter().any(|s| s.error_deg.abs() > 0.5 * step) {
        return None;
    }
    Some(finish(step, n_cells, BitCoding::Binary, bits, states))
}

fn thermometer_plan(step: f64, n_cells: usize, targets: &[f64]) -> BitSynthesis {
    let mut sizes = Vec::new();
    let mut nominal = Vec::new();
    let mut states = Vec::with_capacity(targets.len());
    let (mut prev_cells, mut prev_target) = (0, 0.0);
    for &t in targets {
        let cells = if t > 0.0 { cells_for(t, step) } else { 0 };
        if cells > prev_cells {
            sizes.push(cells - prev_cells);
            nominal.push(t - prev_target);
            prev_cells = cells;
            prev_target = t;
        }
        let on: Vec<usize> = if cells == 0 {
            Vec::new()
        } else {
            (0..sizes.len()).collect()
        };
        states.push(state(t, on, &sizes, step));
    }
    let bits = assign_cells(&sizes, nominal.into_iter());
    finish(step, n_cells, BitCoding::Thermometer, bits, states)
}

fn assign_cells(sizes: &[usize], nominal: impl Iterator<Item = f64>) -> Vec<Bit> {
    let mut next = 0;
    sizes
        .iter()
        .zip(nominal)
        .map(|(&n, nominal_deg)| {
            let cells = (next..next + n).collect();
            next += n;
            Bit { nominal_deg, cells }
        })
        .collect()
}

fn state(target: f64, bits_on: Vec<usize>, sizes: &[usize], step: f64) -> TargetState {
    let cells_down: usize = bits_on.iter().map(|&j| sizes[j]).sum();
    let achieved = cells_down as f64 * step;
    TargetState {
        target_deg: target,
        bits_on,
        cells_down,
        achieved_deg: achieved,
        error_deg: achieved - target,
    }
}

fn finish(step: f64, n_cells: usize, coding: BitCoding, bits: Vec<Bit>, states: Vec<TargetState>) -> BitSynthesis {
    let cells_used: usize = bits.iter().map(|b| b.cells.len()).sum();
    BitSynthesis {
        cell_step_deg: step,
        coding,
        bits,
        states,
        cells_used,
        unused_cells: (cells_used..n_cells).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_target_gives_empty_plan() {
        let plan = plan_bits(10.0, 16, &[0.0]).unwrap();
        assert!(plan.bits.is_empty());
        assert_eq!(plan.states.len(), 1);
        assert_eq!(plan.states[0].error_deg, 0.0);
        assert_eq!(plan.cells_used, 0);
    }

    #[test]
    fn two_bit_shifter_with_exact_step() {
        let plan = plan_bits(11.25, 32, &[0.0, 90.0, 180.0, 270.0]).unwrap();
        assert_eq!(plan.coding, BitCoding::Binary);
        let sizes: Vec<usize> = plan.bits.iter().map(|b| b.cells.len()).collect();
        assert_eq!(sizes, vec![8, 16]);
        for s in &plan.states {
            assert_eq!(s.error_deg, 0.0);
        }
        assert_eq!(plan.states[3].bits_on, vec![0, 1]);
        assert_eq!(plan.cells_used, 24);
        assert_eq!(plan.unused_cells, (24..32).collect::<Vec<_>>());
    }

    #[test]
    fn rounding_examples() {
        let plan = plan_bits(10.0, 16, &[90.0]).unwrap();
        assert_eq!(plan.states[0].cells_down, 9);
        assert_eq!(plan.states[0].error_deg, 0.0);

        let plan = plan_bits(10.0, 16, &[45.0]).unwrap();
        assert_eq!(plan.states[0].cells_down, 5);
        assert_eq!(plan.states[0].error_deg, 5.0);
    }

    #[test]
    fn falls_back_to_thermometer_when_binary_overshoots() {
        // Every binary bit of 0.05 * 2^j rounds to zero cells, so 0.75 would
        // land 0.75 steps short.
        let plan = plan_bits(1.0, 10, &[0.05, 0.75]).unwrap();
        assert_eq!(plan.coding, BitCoding::Thermometer);
        for s in &plan.states {
            assert!(s.error_deg.abs() <= 0.5);
        }
    }

    #[test]
    fn unachievable_target_names_required_cells() {
        let err = plan_bits(10.0, 8, &[0.0, 90.0]).unwrap_err();
        match err {
            Error::Unachievable {
                required, available, ..
            } => {
                assert_eq!(required, 9);
                assert_eq!(available, 8);
            }
            other => panic!("unexpected {other}"),
        }
        assert!(err_string(plan_bits(10.0, 8, &[0.0, 90.0])).contains("needs 9 cells"));
    }

    #[test]
    fn rejects_unsorted_targets() {
        assert!(plan_bits(10.0, 16, &[90.0, 45.0]).is_err());
        assert!(plan_bits(10.0, 16, &[-5.0]).is_err());
        assert!(plan_bits(0.0, 16, &[5.0]).is_err());
    }

    fn err_string(r: Result<BitSynthesis>) -> String {
        r.unwrap_err().to_string()
    }
}
