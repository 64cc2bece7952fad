//! Independent oracles shared by the integration and acceptance suites.
//!
//! Nothing here calls into the torque or solver code paths it is used to
//! check: the energy scan works from capacitances, the quadrature from the
//! raw pressure integrand.

#![allow(dead_code)]

use mems_sim::electromech::{BeamDesign, ElectrodeRegion};
use mems_sim::network::SMatrix;
use mems_sim::EPS0;
use rand::Rng;

/// Midpoint rule of the lever-arm torque integrand
/// `eps0 w v^2 x / (2 (G - theta x)^2)` with `n` points.
pub fn quadrature_torque(region: &ElectrodeRegion, theta: f64, v: f64, g: f64, n: usize) -> f64 {
    let h = (region.x_end - region.x_start) / n as f64;
    let mut sum = 0.0;
    for i in 0..n {
        let x = region.x_start + (i as f64 + 0.5) * h;
        let gap = g - theta * x;
        sum += x / (gap * gap);
    }
    EPS0 * region.width * v * v / 2.0 * sum * h
}

/// Capacitance of a tilted plate over `region` with effective gap `g`:
/// `eps0 w / theta * ln((G - theta x_start) / (G - theta x_end))`.
pub fn region_capacitance(region: &ElectrodeRegion, theta: f64, g: f64) -> f64 {
    if theta == 0.0 {
        return EPS0 * region.area() / g;
    }
    let a = -theta * region.x_start / g;
    let b = -theta * region.x_end / g;
    EPS0 * region.width / theta * (a.ln_1p() - b.ln_1p())
}

/// Beam energy landscape for fixed voltages.
pub struct EnergyScan<'a> {
    pub beam: &'a BeamDesign,
    pub v_dc: f64,
    pub v_rf: f64,
    pub grid: usize,
}

impl EnergyScan<'_> {
    pub fn theta_contact(&self) -> f64 {
        self.beam.tip.gap / self.beam.tip.x_end
    }

    /// `1/2 k theta^2 - 1/2 sum C_i(theta) V_i^2`, both electrodes coated.
    pub fn energy(&self, theta: f64) -> f64 {
        let d = self.beam.t_d / self.beam.eps_r;
        let c_act = region_capacitance(&self.beam.actuation, theta, self.beam.actuation.gap + d);
        let c_tip = region_capacitance(&self.beam.tip, theta, self.beam.tip.gap + d);
        0.5 * self.beam.k_theta * theta * theta
            - 0.5 * c_act * self.v_dc * self.v_dc
            - 0.5 * c_tip * self.v_rf * self.v_rf
    }

    /// Local minima strictly below contact, refined by golden section.
    pub fn minima(&self) -> Vec<f64> {
        let tc = self.theta_contact();
        let n = self.grid;
        let thetas: Vec<f64> = (0..=n).map(|i| tc * i as f64 / n as f64).collect();
        let e: Vec<f64> = thetas.iter().map(|&t| self.energy(t)).collect();
        let mut out = Vec::new();
        for i in 0..n {
            let left_higher = i == 0 || e[i - 1] > e[i];
            if left_higher && e[i + 1] > e[i] {
                let lo = if i == 0 { 0.0 } else { thetas[i - 1] };
                out.push(self.golden(lo, thetas[i + 1]));
            }
        }
        out
    }

    fn golden(&self, mut a: f64, mut b: f64) -> f64 {
        let r = 0.5 * (5f64.sqrt() - 1.0);
        let mut c = b - r * (b - a);
        let mut d = a + r * (b - a);
        let (mut fc, mut fd) = (self.energy(c), self.energy(d));
        for _ in 0..200 {
            if b - a <= 1e-14 * self.theta_contact() {
                break;
            }
            if fc <= fd {
                b = d;
                d = c;
                fd = fc;
                c = b - r * (b - a);
                fc = self.energy(c);
            } else {
                a = c;
                c = d;
                fc = fd;
                d = a + r * (b - a);
                fd = self.energy(d);
            }
        }
        // Boundary minimum at rest.
        if a == 0.0 && self.energy(0.0) <= self.energy(0.5 * (a + b)) {
            return 0.0;
        }
        0.5 * (a + b)
    }

    /// True when the landscape keeps a free minimum below contact.
    pub fn has_up_state(&self) -> bool {
        !self.minima().is_empty()
    }
}

/// Textbook parallel-plate pull-in `sqrt(8 k g^3 / (27 eps0 A))`.
pub fn parallel_plate_pull_in(k: f64, g: f64, area: f64) -> f64 {
    (8.0 * k * g.powi(3) / (27.0 * EPS0 * area)).sqrt()
}

/// Beam whose tip is negligible and whose actuation pad is a narrow strip
/// (width in x equal to 1/100 of its centroid), behaving like a single
/// parallel-plate actuator with `k_eff = k_theta / centroid^2`.
pub fn degenerate_beam(k_theta: f64) -> BeamDesign {
    let centroid = 200e-6;
    let half = 0.5 * centroid / 100.0;
    BeamDesign {
        actuation: ElectrodeRegion {
            x_start: centroid - half,
            x_end: centroid + half,
            width: 100e-6,
            gap: 2e-6,
        },
        tip: ElectrodeRegion {
            x_start: 320e-6,
            x_end: 340e-6,
            width: 1e-12,
            gap: 1.9e-6,
        },
        t_d: 0.5e-6,
        eps_r: 3.9,
        k_theta,
    }
}

/// Random beam satisfying every design invariant.
pub fn random_beam<R: Rng>(rng: &mut R) -> BeamDesign {
    loop {
        let a_start = rng.gen_range(20e-6..120e-6);
        let a_end = a_start + rng.gen_range(50e-6..250e-6);
        let t_start = a_end + rng.gen_range(5e-6..60e-6);
        let t_end = t_start + rng.gen_range(5e-6..40e-6);
        let g_tip = rng.gen_range(0.5e-6..2e-6);
        let g_act = g_tip * rng.gen_range(1.1..3.0);
        let beam = BeamDesign {
            actuation: ElectrodeRegion {
                x_start: a_start,
                x_end: a_end,
                width: rng.gen_range(50e-6..250e-6),
                gap: g_act,
            },
            tip: ElectrodeRegion {
                x_start: t_start,
                x_end: t_end,
                width: rng.gen_range(5e-6..40e-6),
                gap: g_tip,
            },
            t_d: rng.gen_range(0.1e-6..0.5e-6),
            eps_r: rng.gen_range(2.0..9.0),
            k_theta: rng.gen_range(20.0..300.0) * t_end * t_end,
        };
        if beam.validate("beam").is_ok() {
            return beam;
        }
    }
}

/// Unwrapped `-arg(s21)` along an ascending grid starting near DC.
pub fn insertion_phase(points: &[SMatrix]) -> Vec<f64> {
    let mut out = Vec::with_capacity(points.len());
    let mut prev = 0.0;
    let mut offset = 0.0;
    for p in points {
        let raw = -p.s21.arg();
        let mut unwrapped = raw + offset;
        while unwrapped - prev > std::f64::consts::PI {
            offset -= 2.0 * std::f64::consts::PI;
            unwrapped -= 2.0 * std::f64::consts::PI;
        }
        while prev - unwrapped > std::f64::consts::PI {
            offset += 2.0 * std::f64::consts::PI;
            unwrapped += 2.0 * std::f64::consts::PI;
        }
        out.push(unwrapped);
        prev = unwrapped;
    }
    out
}
