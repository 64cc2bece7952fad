//! Two-port network algebra at a single frequency.

mod touchstone;

use num_complex::Complex64;
use serde::Serialize;

use crate::{Error, Result, C0};

pub use touchstone::{read_touchstone, write_touchstone};

const ONE: Complex64 = Complex64::new(1.0, 0.0);
const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const J: Complex64 = Complex64::new(0.0, 1.0);

/// Transmission (ABCD) matrix of a two-port at `freq`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoPortAbcd {
    pub a: Complex64,
    pub b: Complex64,
    pub c: Complex64,
    pub d: Complex64,
    pub freq: f64,
}

impl TwoPortAbcd {
    pub fn identity(freq: f64) -> Self {
        Self {
            a: ONE,
            b: ZERO,
            c: ZERO,
            d: ONE,
            freq,
        }
    }

    pub fn determinant(&self) -> Complex64 {
        self.a * self.d - self.b * self.c
    }

    /// `self` followed by `next`.
    pub fn then(&self, next: &TwoPortAbcd) -> Result<TwoPortAbcd> {
        if self.freq != next.freq {
            return Err(Error::MixedFrequency {
                expected: self.freq,
                found: next.freq,
            });
        }
        Ok(TwoPortAbcd {
            a: self.a * next.a + self.b * next.c,
            b: self.a * next.b + self.b * next.d,
            c: self.c * next.a + self.d * next.c,
            d: self.c * next.b + self.d * next.d,
            freq: self.freq,
        })
    }
}

/// Scattering matrix at `freq` referenced to the real impedance `z_ref`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SMatrix {
    #[serde(with = "complex_pair")]
    pub s11: Complex64,
    #[serde(with = "complex_pair")]
    pub s12: Complex64,
    #[serde(with = "complex_pair")]
    pub s21: Complex64,
    #[serde(with = "complex_pair")]
    pub s22: Complex64,
    pub freq: f64,
    pub z_ref: f64,
}

impl SMatrix {
    pub fn is_reciprocal(&self, tol: f64) -> bool {
        (self.s12 - self.s21).norm() <= tol
    }

    /// Both columns of a lossless S-matrix have unit norm.
    pub fn is_lossless(&self, tol: f64) -> bool {
        let col1 = self.s11.norm_sqr() + self.s21.norm_sqr();
        let col2 = self.s12.norm_sqr() + self.s22.norm_sqr();
        (col1 - 1.0).abs() <= tol && (col2 - 1.0).abs() <= tol
    }

    /// Inverse of [`abcd_to_s`].
    pub fn to_abcd(&self) -> Result<TwoPortAbcd> {
        if self.s21.norm() == 0.0 {
            return Err(Error::SingularConversion);
        }
        let z = self.z_ref;
        let (s11, s12, s21, s22) = (self.s11, self.s12, self.s21, self.s22);
        let den = 2.0 * s21;
        Ok(TwoPortAbcd {
            a: ((ONE + s11) * (ONE - s22) + s12 * s21) / den,
            b: z * ((ONE + s11) * (ONE + s22) - s12 * s21) / den,
            c: ((ONE - s11) * (ONE - s22) - s12 * s21) / (z * den),
            d: ((ONE - s11) * (ONE + s22) + s12 * s21) / den,
            freq: self.freq,
        })
    }
}

/// Lossless TEM line section of impedance `z0`, effective permittivity
/// `eps_eff` and physical `length`.
pub fn tline_abcd(z0: f64, eps_eff: f64, length: f64, freq: f64) -> Result<TwoPortAbcd> {
    if !(z0 > 0.0) || !(eps_eff > 0.0) || !(length >= 0.0) || !(freq > 0.0) {
        return Err(Error::Domain(format!(
            "line section needs z0 > 0, eps_eff > 0, length >= 0, freq > 0 \
             (got {z0}, {eps_eff}, {length}, {freq})"
        )));
    }
    let beta_l = 2.0 * std::f64::consts::PI * freq * eps_eff.sqrt() / C0 * length;
    let (sin, cos) = beta_l.sin_cos();
    Ok(TwoPortAbcd {
        a: Complex64::new(cos, 0.0),
        b: J * z0 * sin,
        c: J * sin / z0,
        d: Complex64::new(cos, 0.0),
        freq,
    })
}

/// Shunt admittance `y` to ground.
pub fn shunt_abcd(y: Complex64, freq: f64) -> Result<TwoPortAbcd> {
    if !(freq > 0.0) {
        return Err(Error::Domain(format!("frequency must be positive, got {freq}")));
    }
    Ok(TwoPortAbcd {
        a: ONE,
        b: ZERO,
        c: y,
        d: ONE,
        freq,
    })
}

/// Product of `chain` in order. An empty chain has no frequency and is
/// rejected.
pub fn cascade(chain: &[TwoPortAbcd]) -> Result<TwoPortAbcd> {
    let (first, rest) = chain
        .split_first()
        .ok_or_else(|| Error::Domain("cannot cascade an empty chain".into()))?;
    rest.iter().try_fold(*first, |acc, m| acc.then(m))
}

pub fn abcd_to_s(m: &TwoPortAbcd, z_ref: f64) -> Result<SMatrix> {
    if !(z_ref > 0.0) {
        return Err(Error::Domain(format!(
            "reference impedance must be positive, got {z_ref}"
        )));
    }
    let b = m.b / z_ref;
    let c = m.c * z_ref;
    let den = m.a + b + c + m.d;
    if den.norm() == 0.0 {
        return Err(Error::SingularConversion);
    }
    Ok(SMatrix {
        s11: (m.a + b - c - m.d) / den,
        s12: 2.0 * m.determinant() / den,
        s21: 2.0 / den,
        s22: (-m.a + b - c + m.d) / den,
        freq: m.freq,
        z_ref,
    })
}

mod complex_pair {
    use num_complex::Complex64;
    use serde::Serializer;

    pub fn serialize<S: Serializer>(z: &Complex64, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq([z.re, z.im])
    }
}
