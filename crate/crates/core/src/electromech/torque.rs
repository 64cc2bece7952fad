//! Closed-form electrostatics of a tilted plate over a flat electrode.

use super::ElectrodeRegion;
use crate::{Error, Result, EPS0};

/// RMS voltage of a travelling wave of power `p_rf` on a line of
/// impedance `z_line`.
pub fn rms_voltage(p_rf: f64, z_line: f64) -> Result<f64> {
    if !(z_line > 0.0) {
        return Err(Error::Domain(format!("line impedance must be positive, got {z_line}")));
    }
    if !(p_rf >= 0.0) {
        return Err(Error::Domain(format!("RF power must be non-negative, got {p_rf}")));
    }
    Ok((p_rf * z_line).sqrt())
}

/// Air gap plus the series dielectric layer, expressed as an equivalent
/// vacuum gap.
pub fn effective_gap(gap: f64, t_d: f64, eps_r: f64) -> f64 {
    if eps_r.is_infinite() {
        return gap;
    }
    gap + t_d / eps_r
}

/// Electrostatic torque about the anchor on the part of the beam above
/// `region`, for a beam rotated by `theta` with `v_eff` across the gap.
///
/// `d_extra` is added to the region's air gap (dielectric equivalent gap).
/// The pressure `eps0 v^2 / (2 (G - theta x)^2)` integrates along the lever
/// arm to
///
/// ```text
/// T = eps0 w v^2 / (2 theta^2) * [G / (G - theta x) + ln(G - theta x)]  from x_start to x_end
/// ```
///
/// which is evaluated here in the cancellation-free form
/// `eps0 w v^2 / (2 G^2) * [x^2 h(theta x / G)]` with
/// `h(r) = (r / (1 - r) + ln(1 - r)) / r^2`, so that `theta -> 0` recovers the
/// parallel-plate torque `eps0 w v^2 (x_end^2 - x_start^2) / (4 G^2)`.
pub fn region_torque(region: &ElectrodeRegion, theta: f64, v_eff: f64, d_extra: f64) -> Result<f64> {
    let g = region.gap + d_extra;
    if !(theta >= 0.0) {
        return Err(Error::Domain(format!("rotation must be non-negative, got {theta}")));
    }
    let limit = g / region.x_end;
    if theta >= limit {
        return Err(Error::Penetration { theta, limit });
    }
    let r_start = theta * region.x_start / g;
    let r_end = theta * region.x_end / g;
    let moment =
        region.x_end * region.x_end * lever_kernel(r_end) - region.x_start * region.x_start * lever_kernel(r_start);
    Ok(EPS0 * region.width * v_eff * v_eff / (2.0 * g * g) * moment)
}

/// `h(r) = (r/(1-r) + ln(1-r)) / r^2 = sum_{n>=2} (n-1)/n r^(n-2)`.
fn lever_kernel(r: f64) -> f64 {
    const SERIES_LIMIT: f64 = 0.05;
    if r < SERIES_LIMIT {
        // 0.05^18 is below f64 resolution relative to h(0) = 1/2.
        let mut sum = 0.0;
        for n in (2..=20).rev() {
            let n = n as f64;
            sum = sum * r + (n - 1.0) / n;
        }
        sum
    } else {
        (r / (1.0 - r) + (-r).ln_1p()) / (r * r)
    }
}
