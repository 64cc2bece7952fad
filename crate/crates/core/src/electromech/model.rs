use serde::Serialize;

use super::torque::{region_torque, rms_voltage};
use super::{BeamDesign, DriveCondition, ForceMode, MechEquilibrium, ModelOptions};
use crate::{Error, Result, EPS0};

/// Relative tolerance of the theta bisection.
const THETA_RTOL: f64 = 1e-10;
/// Relative tolerance of the voltage and power bisections.
const SEARCH_RTOL: f64 = 1e-6;

/// Pull-in voltage, or zero when RF power alone pulls the beam in.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PullIn {
    pub voltage: f64,
    pub self_actuated: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SweepDirection {
    Up,
    Down,
}

/// One point of a C-V hysteresis trace.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CvPoint {
    pub sweep: SweepDirection,
    pub voltage: f64,
    pub capacitance: f64,
    pub in_contact: bool,
}

/// A validated beam together with the model options it is analysed with.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cantilever {
    beam: BeamDesign,
    options: ModelOptions,
}

impl Cantilever {
    pub fn new(beam: BeamDesign) -> Result<Self> {
        Self::with_options(beam, ModelOptions::default())
    }

    pub fn with_options(beam: BeamDesign, options: ModelOptions) -> Result<Self> {
        beam.validate("beam")?;
        options.validate("options")?;
        if options.contact_roughness >= beam.tip.gap {
            return Err(Error::invalid(
                "options.contact_roughness",
                "must be smaller than beam.tip.gap",
            ));
        }
        Ok(Self { beam, options })
    }

    pub fn beam(&self) -> &BeamDesign {
        &self.beam
    }

    pub fn options(&self) -> &ModelOptions {
        &self.options
    }

    /// Rotation at which the tip lands on the line.
    pub fn theta_contact(&self) -> f64 {
        (self.beam.tip.gap - self.options.contact_roughness) / self.beam.tip.x_end
    }

    fn dielectric_gap(&self) -> f64 {
        self.beam.t_d / self.beam.eps_r
    }

    fn actuation_offset(&self) -> f64 {
        if self.options.actuation_dielectric {
            self.dielectric_gap()
        } else {
            0.0
        }
    }

    /// Equivalent vacuum separation between tip and line in contact.
    pub fn contact_separation(&self) -> f64 {
        self.dielectric_gap() + self.options.contact_roughness
    }

    /// Voltage whose square sets the RF electrostatic force.
    pub fn rf_voltage(&self, p_rf: f64, z_line: f64) -> Result<f64> {
        let v = rms_voltage(p_rf, z_line)?;
        Ok(match self.options.force_mode {
            ForceMode::Rms => v,
            ForceMode::Peak => v * std::f64::consts::SQRT_2,
        })
    }

    fn rf_force_factor(&self) -> f64 {
        match self.options.force_mode {
            ForceMode::Rms => 1.0,
            ForceMode::Peak => 2.0,
        }
    }

    pub fn actuation_torque(&self, theta: f64, v_dc: f64) -> Result<f64> {
        region_torque(&self.beam.actuation, theta, v_dc, self.actuation_offset())
    }

    pub fn tip_torque(&self, theta: f64, v_rf: f64) -> Result<f64> {
        region_torque(&self.beam.tip, theta, v_rf, self.dielectric_gap())
    }

    /// Net opening torque `k theta - T_act - T_tip`.
    pub fn residual(&self, theta: f64, drive: &DriveCondition) -> Result<f64> {
        let v_rf = self.rf_voltage(drive.p_rf, drive.z_line)?;
        self.residual_with(theta, drive.v_dc, v_rf)
    }

    fn residual_with(&self, theta: f64, v_dc: f64, v_rf: f64) -> Result<f64> {
        Ok(self.beam.k_theta * theta - self.actuation_torque(theta, v_dc)? - self.tip_torque(theta, v_rf)?)
    }

    /// Every free (not in contact) equilibrium in `[0, theta_c]`, ascending.
    ///
    /// Sign changes of the residual are bracketed on a uniform theta grid and
    /// refined by bisection.
    pub fn equilibria(&self, drive: &DriveCondition) -> Result<Vec<MechEquilibrium>> {
        drive.validate()?;
        let v_rf = self.rf_voltage(drive.p_rf, drive.z_line)?;
        let residual = |theta: f64| self.residual_with(theta, drive.v_dc, v_rf);
        let theta_c = self.theta_contact();
        let n = self.options.grid_points;

        let mut roots = Vec::new();
        let mut prev_theta = 0.0;
        let mut prev = residual(0.0)?;
        if prev == 0.0 {
            roots.push(self.free_state(0.0, residual(theta_c / n as f64)? > 0.0));
        }
        for i in 1..=n {
            let theta = theta_c * i as f64 / n as f64;
            let r = residual(theta)?;
            if r == 0.0 {
                roots.push(self.free_state(theta, prev < 0.0));
            } else if prev != 0.0 && (prev < 0.0) != (r < 0.0) {
                let root = bisect(&residual, prev_theta, theta, prev)?;
                roots.push(self.free_state(root, prev < 0.0));
            }
            prev_theta = theta;
            prev = r;
        }
        Ok(roots)
    }

    fn free_state(&self, theta: f64, stable: bool) -> MechEquilibrium {
        MechEquilibrium {
            theta,
            in_contact: false,
            contact_force: None,
            stable,
            collapse_margin: self.beam.actuation.gap - theta * self.beam.actuation.x_end,
        }
    }

    /// Up-state equilibrium: the smallest stable root of the residual.
    /// Without one the beam is pulled in and the contact state is returned.
    pub fn solve_up_state(&self, drive: &DriveCondition) -> Result<MechEquilibrium> {
        let roots = self.equilibria(drive)?;
        match roots.into_iter().find(|e| e.stable) {
            Some(eq) => Ok(eq),
            None => self.contact_state(drive),
        }
    }

    fn is_pulled_in(&self, v_dc: f64, p_rf: f64, z_line: f64) -> Result<bool> {
        Ok(self
            .solve_up_state(&DriveCondition::new(v_dc, p_rf, z_line))?
            .in_contact)
    }

    /// Smallest DC bias that leaves no stable up state.
    pub fn pull_in_voltage(&self, p_rf: f64, z_line: f64) -> Result<PullIn> {
        if self.is_pulled_in(0.0, p_rf, z_line)? {
            return Ok(PullIn {
                voltage: 0.0,
                self_actuated: true,
            });
        }
        // Single-gap estimate at the pad centroid as the first bracket guess.
        let act = &self.beam.actuation;
        let g = act.gap + self.actuation_offset();
        let k_eff = self.beam.k_theta / (act.centroid() * act.centroid());
        let mut hi = (8.0 * k_eff * g.powi(3) / (27.0 * EPS0 * act.area())).sqrt();
        let mut lo = 0.0;
        let mut doublings = 0;
        while !self.is_pulled_in(hi, p_rf, z_line)? {
            lo = hi;
            hi *= 2.0;
            doublings += 1;
            if doublings > 64 {
                return Err(Error::Domain("no pull-in found below 2^64 x estimate".into()));
            }
        }
        while hi - lo > SEARCH_RTOL * hi {
            let mid = 0.5 * (lo + hi);
            if self.is_pulled_in(mid, p_rf, z_line)? {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        Ok(PullIn {
            voltage: hi,
            self_actuated: false,
        })
    }

    /// Torque of the RF field on the landed tip, which sits flat on the
    /// dielectric.
    pub fn tip_contact_torque(&self, v_rf: f64) -> f64 {
        let d = self.contact_separation();
        EPS0 * self.beam.tip.area() * v_rf * v_rf / (2.0 * d * d) * self.beam.tip.centroid()
    }

    /// Beam pinned on the line: contact force and collapse margin.
    pub fn contact_state(&self, drive: &DriveCondition) -> Result<MechEquilibrium> {
        drive.validate()?;
        let theta_c = self.theta_contact();
        let v_rf = self.rf_voltage(drive.p_rf, drive.z_line)?;
        let closing = self.actuation_torque(theta_c, drive.v_dc)? + self.tip_contact_torque(v_rf);
        let force = ((closing - self.beam.k_theta * theta_c) / self.beam.tip.x_end).max(0.0);
        Ok(MechEquilibrium {
            theta: theta_c,
            in_contact: true,
            contact_force: Some(force),
            stable: force > 0.0,
            collapse_margin: self.beam.actuation.gap - theta_c * self.beam.actuation.x_end,
        })
    }

    /// DC bias at or below which the landed beam recovers the up state.
    /// Zero means the RF power latches the beam down.
    pub fn release_voltage(&self, p_rf: f64, z_line: f64) -> Result<f64> {
        let theta_c = self.theta_contact();
        let v_rf = self.rf_voltage(p_rf, z_line)?;
        let tau_act = self.actuation_torque(theta_c, 1.0)?;
        let spare = self.beam.k_theta * theta_c - self.tip_contact_torque(v_rf);
        Ok((spare.max(0.0) / tau_act).sqrt())
    }

    /// RF power at which the tip alone holds the beam down.
    pub fn latch_power(&self, z_line: f64) -> Result<f64> {
        if !(z_line > 0.0) {
            return Err(Error::Domain(format!("line impedance must be positive, got {z_line}")));
        }
        let d = self.contact_separation();
        let tip = &self.beam.tip;
        Ok(2.0 * self.beam.k_theta * self.theta_contact() * d * d
            / (EPS0 * tip.area() * tip.centroid() * z_line * self.rf_force_factor()))
    }

    /// Smallest RF power that pulls the beam in with no DC bias. Returns
    /// `f64::INFINITY` when that exceeds `options.power_cap`.
    pub fn self_actuation_power(&self, z_line: f64) -> Result<f64> {
        let cap = self.options.power_cap;
        if !self.is_pulled_in(0.0, cap, z_line)? {
            return Ok(f64::INFINITY);
        }
        let (mut lo, mut hi) = (0.0, cap);
        while hi - lo > SEARCH_RTOL * hi {
            let mid = 0.5 * (lo + hi);
            if self.is_pulled_in(0.0, mid, z_line)? {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        Ok(hi)
    }

    /// RF capacitance of the tip at rotation `theta`.
    pub fn capacitance_at(&self, theta: f64) -> f64 {
        let tip = &self.beam.tip;
        EPS0 * tip.area() / (tip.gap - theta * tip.centroid() + self.dielectric_gap())
    }

    pub fn up_capacitance(&self) -> f64 {
        self.capacitance_at(0.0)
    }

    pub fn down_capacitance(&self) -> f64 {
        EPS0 * self.beam.tip.area() / self.contact_separation()
    }

    pub fn capacitance_ratio(&self) -> f64 {
        self.down_capacitance() / self.up_capacitance()
    }

    /// Up-then-down bias sweep over `v_grid` with hysteresis.
    pub fn cv_curve(&self, v_grid: &[f64], p_rf: f64, z_line: f64) -> Result<Vec<CvPoint>> {
        if v_grid.iter().any(|v| !(*v >= 0.0)) {
            return Err(Error::Domain("bias grid must be non-negative".into()));
        }
        if v_grid.windows(2).any(|w| w[1] < w[0]) {
            return Err(Error::Domain("bias grid must be ascending".into()));
        }
        let v_release = self.release_voltage(p_rf, z_line)?;
        let mut trace = Vec::with_capacity(2 * v_grid.len());
        let mut down = false;
        for &v in v_grid {
            let mut theta = self.theta_contact();
            if !down {
                let eq = self.solve_up_state(&DriveCondition::new(v, p_rf, z_line))?;
                down = eq.in_contact;
                theta = eq.theta;
            }
            trace.push(self.cv_point(SweepDirection::Up, v, down, theta));
        }
        for &v in v_grid.iter().rev() {
            let mut theta = self.theta_contact();
            if !down || v <= v_release {
                let eq = self.solve_up_state(&DriveCondition::new(v, p_rf, z_line))?;
                down = eq.in_contact;
                theta = eq.theta;
            }
            trace.push(self.cv_point(SweepDirection::Down, v, down, theta));
        }
        Ok(trace)
    }

    fn cv_point(&self, sweep: SweepDirection, voltage: f64, down: bool, theta: f64) -> CvPoint {
        CvPoint {
            sweep,
            voltage,
            capacitance: if down {
                self.down_capacitance()
            } else {
                self.capacitance_at(theta)
            },
            in_contact: down,
        }
    }
}

fn bisect<F>(f: &F, mut lo: f64, mut hi: f64, mut f_lo: f64) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    while hi - lo > THETA_RTOL * hi {
        let mid = 0.5 * (lo + hi);
        let f_mid = f(mid)?;
        if f_mid == 0.0 {
            return Ok(mid);
        }
        if (f_mid < 0.0) == (f_lo < 0.0) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Angular stiffness of a uniform cantilever of length `length` loaded at
/// its free end: `k_tip L^2` with `k_tip = E w t^3 / (4 L^3)`.
pub fn angular_stiffness_from_beam(youngs_modulus: f64, width: f64, thickness: f64, length: f64) -> Result<f64> {
    for (name, v) in [
        ("youngs_modulus", youngs_modulus),
        ("width", width),
        ("thickness", thickness),
        ("length", length),
    ] {
        if !(v > 0.0) {
            return Err(Error::Domain(format!("{name} must be positive, got {v}")));
        }
    }
    Ok(youngs_modulus * width * thickness.powi(3) / (4.0 * length))
}
