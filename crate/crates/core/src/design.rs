//! Design files: versioned JSON documents describing a beam, its host line
//! and optionally a DMTL built from it. All values are SI.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::dmtl::{DmtlDesign, LineParams};
use crate::electromech::{check_positive, BeamDesign, Cantilever, ForceMode, ModelOptions};
use crate::{Error, Result};

pub const SCHEMA_VERSION: u32 = 1;

const REFERENCE_DESIGN: &str = include_str!("../assets/reference_design.json");

/// Analysis options. Every field has a default, and the resolved values
/// are echoed in reports.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Options {
    pub force_mode: ForceMode,
    pub contact_roughness: f64,
    pub actuation_dielectric: bool,
    pub grid_points: usize,
    pub power_cap: f64,
    /// Multiplier on the squared RF voltage for standing-wave worst cases.
    pub mismatch_factor: f64,
    /// Reference impedance of emitted S-parameters (Ohm).
    pub z_ref: f64,
    /// Impedance the RF power is referenced to at the varactor (Ohm).
    pub z_line: f64,
    /// DC bias at which `beam analyze` reports the contact force. Defaults
    /// to 1.2 times the pull-in voltage.
    pub hold_voltage: Option<f64>,
}

impl Default for Options {
    fn default() -> Self {
        let m = ModelOptions::default();
        Self {
            force_mode: m.force_mode,
            contact_roughness: m.contact_roughness,
            actuation_dielectric: m.actuation_dielectric,
            grid_points: m.grid_points,
            power_cap: m.power_cap,
            mismatch_factor: 1.0,
            z_ref: 50.0,
            z_line: 50.0,
            hold_voltage: None,
        }
    }
}

impl Options {
    pub fn model(&self) -> ModelOptions {
        ModelOptions {
            force_mode: self.force_mode,
            contact_roughness: self.contact_roughness,
            actuation_dielectric: self.actuation_dielectric,
            grid_points: self.grid_points,
            power_cap: self.power_cap,
        }
    }

    fn validate(&self) -> Result<()> {
        self.model().validate("options")?;
        if !(self.mismatch_factor >= 1.0) {
            return Err(Error::invalid("options.mismatch_factor", "must be at least 1"));
        }
        check_positive(self.z_ref, "options.z_ref")?;
        check_positive(self.z_line, "options.z_line")?;
        if let Some(v) = self.hold_voltage {
            if !(v >= 0.0) {
                return Err(Error::invalid("options.hold_voltage", "must be non-negative"));
            }
        }
        Ok(())
    }
}

/// `dmtl` section as written in the file. Capacitances default to the
/// beam's own up and down capacitances.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct DmtlSection {
    pitch: f64,
    n_cells: usize,
    #[serde(default = "default_cantilevers")]
    cantilevers_per_cell: usize,
    c_up_single: Option<f64>,
    c_down_single: Option<f64>,
    bit_plan: Option<Vec<Vec<usize>>>,
    #[serde(default)]
    series_resistance: f64,
    #[serde(default)]
    series_inductance: f64,
}

fn default_cantilevers() -> usize {
    2
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDesignFile {
    schema: u32,
    beam: BeamDesign,
    line: LineParams,
    dmtl: Option<DmtlSection>,
    #[serde(default)]
    options: Options,
}

/// A fully validated design file with defaults applied.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DesignFile {
    pub schema: u32,
    pub beam: BeamDesign,
    pub line: LineParams,
    pub dmtl: Option<DmtlDesign>,
    pub options: Options,
}

impl DesignFile {
    /// The design shipped with the crate.
    pub fn reference() -> Self {
        parse_design(REFERENCE_DESIGN).expect("shipped reference design is valid")
    }

    pub fn cantilever(&self) -> Cantilever {
        Cantilever::with_options(self.beam, self.options.model()).expect("validated when the design was loaded")
    }

    pub fn dmtl(&self) -> Result<&DmtlDesign> {
        self.dmtl.as_ref().ok_or(Error::MissingSection("dmtl"))
    }
}

pub fn load_design(path: impl AsRef<Path>) -> Result<DesignFile> {
    let text = std::fs::read_to_string(path)?;
    parse_design(&text)
}

pub fn parse_design(text: &str) -> Result<DesignFile> {
    let raw: RawDesignFile = serde_json::from_str(text).map_err(|e| Error::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    if raw.schema != SCHEMA_VERSION {
        return Err(Error::invalid(
            "schema",
            format!("unsupported version {}, expected {SCHEMA_VERSION}", raw.schema),
        ));
    }
    raw.options.validate()?;
    let cantilever = Cantilever::with_options(raw.beam, raw.options.model())?;
    raw.line.validate("line")?;

    let dmtl = raw
        .dmtl
        .map(|s| {
            let design = DmtlDesign {
                line: raw.line,
                pitch: s.pitch,
                n_cells: s.n_cells,
                cantilevers_per_cell: s.cantilevers_per_cell,
                c_up_single: s.c_up_single.unwrap_or_else(|| cantilever.up_capacitance()),
                c_down_single: s.c_down_single.unwrap_or_else(|| cantilever.down_capacitance()),
                bit_plan: s.bit_plan.unwrap_or_else(|| (0..s.n_cells).map(|i| vec![i]).collect()),
                series_resistance: s.series_resistance,
                series_inductance: s.series_inductance,
            };
            design.validate("dmtl").map(|_| design)
        })
        .transpose()?;

    Ok(DesignFile {
        schema: raw.schema,
        beam: raw.beam,
        line: raw.line,
        dmtl,
        options: raw.options,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn reference_value() -> serde_json::Value {
        serde_json::from_str(REFERENCE_DESIGN).unwrap()
    }

    fn parse_value(v: &serde_json::Value) -> Result<DesignFile> {
        parse_design(&v.to_string())
    }

    #[test]
    fn reference_loads_clean() {
        let d = DesignFile::reference();
        assert_eq!(d.schema, 1);
        let dmtl = d.dmtl().unwrap();
        assert_eq!(dmtl.n_cells, 16);
        assert_eq!(dmtl.c_up_single, d.cantilever().up_capacitance());
        assert_eq!(d.options.mismatch_factor, 1.0);
        assert_eq!(d.options.grid_points, 2048);
    }

    #[test]
    fn dual_gap_violation_is_rejected_with_path() {
        let mut v = reference_value();
        v["beam"]["actuation"]["gap"] = serde_json::json!(1.0e-6);
        let err = parse_value(&v).unwrap_err();
        assert!(err.is_input_error());
        assert_eq!(
            err.to_string(),
            "beam.actuation.gap: beam.actuation.gap must exceed beam.tip.gap (dual-gap rule)"
        );
    }

    #[test]
    fn missing_dmtl_section_is_reported_on_use() {
        let mut v = reference_value();
        v.as_object_mut().unwrap().remove("dmtl");
        let d = parse_value(&v).unwrap();
        assert!(matches!(d.dmtl(), Err(Error::MissingSection("dmtl"))));
        assert!(d.cantilever().up_capacitance() > 0.0);
    }

    #[test]
    fn parse_errors_carry_position() {
        let err = parse_design("{\n  \"schema\": 1,\n  \"beam\": ]\n}").unwrap_err();
        match err {
            Error::Parse { line, .. } => assert_eq!(line, 3),
            other => panic!("unexpected {other}"),
        }
    }

    #[test]
    fn unknown_fields_and_bad_schema_rejected() {
        let mut v = reference_value();
        v["beam"]["tip"]["colour"] = serde_json::json!("gold");
        assert!(matches!(parse_value(&v), Err(Error::Parse { .. })));

        let mut v = reference_value();
        v["schema"] = serde_json::json!(2);
        assert!(parse_value(&v).unwrap_err().to_string().starts_with("schema:"));
    }

    #[test]
    fn nested_invariants_use_json_paths() {
        let mut v = reference_value();
        v["line"]["eps_eff"] = serde_json::json!(0.5);
        assert!(parse_value(&v).unwrap_err().to_string().starts_with("line.eps_eff"));

        let mut v = reference_value();
        v["dmtl"]["pitch"] = serde_json::json!(-1.0);
        assert!(parse_value(&v).unwrap_err().to_string().starts_with("dmtl.pitch"));

        let mut v = reference_value();
        v["beam"]["tip"]["width"] = serde_json::json!(0.0);
        assert!(parse_value(&v).unwrap_err().to_string().starts_with("beam.tip.width"));

        let mut v = reference_value();
        v["options"]["contact_roughness"] = serde_json::json!(2e-6);
        assert!(parse_value(&v)
            .unwrap_err()
            .to_string()
            .starts_with("options.contact_roughness"));
    }
}
