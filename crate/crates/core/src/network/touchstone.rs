//! Touchstone v1 two-port files.
//!
//! The writer always emits `# HZ S RI R <z_ref>` followed by one record per
//! frequency in the column order `f S11 S21 S12 S22`. The reader also
//! accepts other frequency units and the MA / DB formats.

use std::io::Write;

use num_complex::Complex64;

use super::SMatrix;
use crate::{Error, Result};

/// Writes `points` as a Touchstone v1 `.s2p` document.
///
/// The points must share one reference impedance and be strictly ascending
/// in frequency. An empty list yields a header for a 50 Ohm reference.
pub fn write_touchstone<W: Write>(points: &[SMatrix], out: &mut W) -> Result<()> {
    let z_ref = points.first().map_or(50.0, |p| p.z_ref);
    if let Some(p) = points.iter().find(|p| p.z_ref != z_ref) {
        return Err(Error::Touchstone(format!(
            "mixed reference impedances: {} and {} Ohm",
            z_ref, p.z_ref
        )));
    }
    if let Some(w) = points.windows(2).find(|w| !(w[1].freq > w[0].freq)) {
        return Err(Error::Touchstone(format!(
            "frequencies must be strictly ascending: {} Hz then {} Hz",
            w[0].freq, w[1].freq
        )));
    }
    writeln!(out, "# HZ S RI R {z_ref}")?;
    for p in points {
        write!(out, "{:.15e}", p.freq)?;
        for s in [p.s11, p.s21, p.s12, p.s22] {
            write!(out, " {:.15e} {:.15e}", s.re, s.im)?;
        }
        writeln!(out)?;
    }
    Ok(())
}

#[derive(Clone, Copy)]
enum Format {
    Ri,
    Ma,
    Db,
}

/// Parses a two-port Touchstone v1 document holding S-parameters.
pub fn read_touchstone(text: &str) -> Result<Vec<SMatrix>> {
    let mut freq_scale = 1e9;
    let mut format = Format::Ma;
    let mut z_ref = 50.0;
    let mut seen_options = false;
    let mut values = Vec::new();

    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('!').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if let Some(opts) = line.strip_prefix('#') {
            if seen_options {
                continue;
            }
            seen_options = true;
            let mut tokens = opts.split_whitespace().map(str::to_ascii_uppercase);
            while let Some(tok) = tokens.next() {
                match tok.as_str() {
                    "HZ" => freq_scale = 1.0,
                    "KHZ" => freq_scale = 1e3,
                    "MHZ" => freq_scale = 1e6,
                    "GHZ" => freq_scale = 1e9,
                    "S" => {}
                    "Y" | "Z" | "G" | "H" => {
                        return Err(Error::Touchstone(format!(
                            "line {}: only S-parameters are supported, found {tok}",
                            lineno + 1
                        )))
                    }
                    "RI" => format = Format::Ri,
                    "MA" => format = Format::Ma,
                    "DB" => format = Format::Db,
                    "R" => {
                        let value = tokens
                            .next()
                            .ok_or_else(|| Error::Touchstone(format!("line {}: R without a value", lineno + 1)))?;
                        z_ref = parse_number(&value, lineno)?;
                    }
                    other => {
                        return Err(Error::Touchstone(format!(
                            "line {}: unknown option `{other}`",
                            lineno + 1
                        )))
                    }
                }
            }
            continue;
        }
        for tok in line.split_whitespace() {
            values.push(parse_number(tok, lineno)?);
        }
    }

    if values.len() % 9 != 0 {
        return Err(Error::Touchstone(format!(
            "expected 9 numbers per two-port record, found {} numbers",
            values.len()
        )));
    }
    let points: Vec<SMatrix> = values
        .chunks_exact(9)
        .map(|r| {
            let s = |i: usize| to_complex(format, r[i], r[i + 1]);
            SMatrix {
                freq: r[0] * freq_scale,
                s11: s(1),
                s21: s(3),
                s12: s(5),
                s22: s(7),
                z_ref,
            }
        })
        .collect();
    if let Some(w) = points.windows(2).find(|w| !(w[1].freq > w[0].freq)) {
        return Err(Error::Touchstone(format!(
            "frequencies must be strictly ascending: {} Hz then {} Hz",
            w[0].freq, w[1].freq
        )));
    }
    Ok(points)
}

fn parse_number(tok: &str, lineno: usize) -> Result<f64> {
    tok.parse()
        .map_err(|_| Error::Touchstone(format!("line {}: bad number `{tok}`", lineno + 1)))
}

fn to_complex(format: Format, x: f64, y: f64) -> Complex64 {
    match format {
        Format::Ri => Complex64::new(x, y),
        Format::Ma => Complex64::from_polar(x, y.to_radians()),
        Format::Db => Complex64::from_polar(10f64.powf(x / 20.0), y.to_radians()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn point(freq: f64) -> SMatrix {
        SMatrix {
            s11: Complex64::new(0.1, -0.2),
            s12: Complex64::new(0.7, 0.3),
            s21: Complex64::new(0.7, 0.3),
            s22: Complex64::new(-0.05, 0.15),
            freq,
            z_ref: 50.0,
        }
    }

    fn render(points: &[SMatrix]) -> String {
        let mut buf = Vec::new();
        write_touchstone(points, &mut buf).unwrap();
        String::from_utf8(buf).unwrap()
    }

    #[test]
    fn empty_list_is_header_only() {
        assert_eq!(render(&[]), "# HZ S RI R 50\n");
    }

    #[test]
    fn matched_line_row() {
        let p = SMatrix {
            s11: Complex64::new(0.0, 0.0),
            s12: Complex64::from_polar(1.0, -0.3),
            s21: Complex64::from_polar(1.0, -0.3),
            s22: Complex64::new(0.0, 0.0),
            freq: 1e9,
            z_ref: 50.0,
        };
        let text = render(&[p]);
        let row: Vec<f64> = text
            .lines()
            .nth(1)
            .unwrap()
            .split_whitespace()
            .map(|t| t.parse().unwrap())
            .collect();
        assert_eq!(row.len(), 9);
        assert_eq!(row[0], 1e9);
        assert_eq!((row[1], row[2]), (0.0, 0.0));
        assert!(((row[3] * row[3] + row[4] * row[4]) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn written_file_reads_back() {
        let points = [point(1e9), point(2.5e9), point(10e9)];
        let back = read_touchstone(&render(&points)).unwrap();
        assert_eq!(back.len(), 3);
        for (a, b) in points.iter().zip(&back) {
            assert_eq!(a.freq, b.freq);
            assert_eq!(a.z_ref, b.z_ref);
            for (x, y) in [(a.s11, b.s11), (a.s12, b.s12), (a.s21, b.s21), (a.s22, b.s22)] {
                assert!((x - y).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn header_uses_reference_impedance() {
        let mut p = point(1e9);
        p.z_ref = 75.0;
        assert!(render(&[p]).starts_with("# HZ S RI R 75\n"));
    }

    #[test]
    fn rejects_unsorted_or_mixed_input() {
        let mut buf = Vec::new();
        assert!(write_touchstone(&[point(2e9), point(1e9)], &mut buf).is_err());
        assert!(write_touchstone(&[point(1e9), point(1e9)], &mut buf).is_err());
        let mut other = point(3e9);
        other.z_ref = 75.0;
        assert!(write_touchstone(&[point(1e9), other], &mut buf).is_err());
    }

    #[test]
    fn reads_ghz_ma_with_comments() {
        let text = "! measured\n# GHz S MA R 50\n1.0 0.5 90 1 0 1 0 0.5 -90 ! first\n";
        let p = read_touchstone(text).unwrap();
        assert_eq!(p[0].freq, 1e9);
        assert!((p[0].s11 - Complex64::new(0.0, 0.5)).norm() < 1e-15);
        assert!((p[0].s22 - Complex64::new(0.0, -0.5)).norm() < 1e-15);
    }

    #[test]
    fn rejects_truncated_record() {
        assert!(read_touchstone("# HZ S RI R 50\n1 0 0 1 0\n").is_err());
        assert!(read_touchstone("# HZ Z RI R 50\n").is_err());
    }
}
