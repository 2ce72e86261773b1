//! Report structure and its CSV/JSON emission.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::{self, Write};
use std::path::Path;

use emergent_core::{Point, ScaleElement};
use serde::Serialize;
use serde_json::ser::{CompactFormatter, Formatter};

use crate::config::{ExperimentConfig, Format};
use crate::CliError;

/// One named check: its worst residual against its tolerance.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckEntry {
    pub residual: f64,
    pub tol: f64,
    pub pass: bool,
    /// Only asserted checks decide the exit status.
    pub asserted: bool,
}

impl CheckEntry {
    pub fn asserted(residual: f64, tol: f64) -> Self {
        CheckEntry {
            residual,
            tol,
            pass: residual <= tol,
            asserted: true,
        }
    }

    pub fn reported(residual: f64, tol: f64) -> Self {
        CheckEntry {
            asserted: false,
            ..Self::asserted(residual, tol)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub config: ExperimentConfig,
    pub net: Vec<ScaleElement>,
    pub values: Vec<Point>,
    pub residuals: Vec<f64>,
    pub extrapolated: Option<Point>,
    pub rate: Option<f64>,
    /// Pass flag of every asserted check, plus `overall`.
    pub pass: BTreeMap<String, bool>,
    pub checks: BTreeMap<String, CheckEntry>,
    pub notes: Vec<String>,
}

impl Report {
    pub fn new(config: ExperimentConfig) -> Self {
        Report {
            config,
            net: Vec::new(),
            values: Vec::new(),
            residuals: Vec::new(),
            extrapolated: None,
            rate: None,
            pass: BTreeMap::new(),
            checks: BTreeMap::new(),
            notes: Vec::new(),
        }
    }

    pub fn push_row(&mut self, eps: ScaleElement, value: Point, residual: f64) {
        self.net.push(eps);
        self.values.push(value);
        self.residuals.push(residual);
    }

    pub fn check(&mut self, name: &str, entry: CheckEntry) {
        self.checks.insert(name.to_string(), entry);
    }

    /// Fills the `pass` map from the asserted checks; `extra_ok` can veto the overall flag.
    pub fn finish(&mut self, extra_ok: bool) {
        self.pass = self
            .checks
            .iter()
            .filter(|(_, c)| c.asserted)
            .map(|(k, c)| (k.clone(), c.pass))
            .collect();
        let overall = extra_ok && self.pass.values().all(|&p| p);
        self.pass.insert("overall".into(), overall);
    }

    pub fn passed(&self) -> bool {
        self.pass.get("overall").copied().unwrap_or(false)
    }

    pub fn to_json(&self) -> Vec<u8> {
        let mut out = Vec::new();
        let mut ser = serde_json::Serializer::with_formatter(&mut out, SignificantDigits);
        self.serialize(&mut ser)
            .expect("reports contain only serializable data");
        out.push(b'\n');
        out
    }

    pub fn to_csv(&self) -> Vec<u8> {
        let dim = self.values.first().map_or(0, |v| v.dim());
        let mut s = String::from("epsilon");
        for i in 0..dim {
            let _ = write!(s, ",component_{i}");
        }
        s.push_str(",residual\n");
        for ((eps, value), residual) in self.net.iter().zip(&self.values).zip(&self.residuals) {
            s.push_str(&format_scale(eps));
            for c in value.iter() {
                s.push(',');
                s.push_str(&format_float(*c));
            }
            s.push(',');
            s.push_str(&format_float(*residual));
            s.push('\n');
        }
        s.into_bytes()
    }

    pub fn render(&self, format: Format) -> Vec<u8> {
        match format {
            Format::Csv => self.to_csv(),
            Format::Json => self.to_json(),
        }
    }
}

/// 17 significant digits, enough to round-trip any double.
pub fn format_float(v: f64) -> String {
    format!("{v:.16e}")
}

fn format_scale(eps: &ScaleElement) -> String {
    match eps {
        ScaleElement::PositiveReal(e) => format_float(*e),
        ScaleElement::IntegerShift(n) => n.to_string(),
        ScaleElement::NonzeroComplex(z) => format!("{:.16e}{:+.16e}i", z.re, z.im),
    }
}

struct SignificantDigits;

impl Formatter for SignificantDigits {
    fn write_f64<W: ?Sized + Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        writer.write_all(format_float(value).as_bytes())
    }

    fn write_f32<W: ?Sized + Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(writer, value as f64)
    }

    fn write_i64<W: ?Sized + Write>(&mut self, writer: &mut W, value: i64) -> io::Result<()> {
        CompactFormatter.write_i64(writer, value)
    }
}

/// Writes to a temporary file beside `path`, then renames it into place.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    let io_err = |e: io::Error| CliError::Io(format!("{}: {e}", path.display()));
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io_err)?;
    tmp.write_all(bytes).map_err(io_err)?;
    tmp.as_file().sync_all().map_err(io_err)?;
    tmp.persist(path).map_err(|e| io_err(e.error))?;
    Ok(())
}

pub fn emit_report(report: &Report, format: Format, path: &Path) -> Result<(), CliError> {
    write_atomic(path, &report.render(format))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_keep_seventeen_digits() {
        assert_eq!(format_float(0.1), "1.0000000000000001e-1");
        assert_eq!(format_float(1.0 / 3.0).parse::<f64>().unwrap(), 1.0 / 3.0);
        assert_eq!(format_scale(&ScaleElement::integer(-3)), "-3");
    }

    #[test]
    fn json_numbers_use_the_formatter() {
        let mut out = Vec::new();
        let mut ser = serde_json::Serializer::with_formatter(&mut out, SignificantDigits);
        vec![0.5f64, f64::NAN].serialize(&mut ser).unwrap();
        assert_eq!(
            String::from_utf8(out).unwrap(),
            "[5.0000000000000000e-1,null]"
        );
    }

    #[test]
    fn unwritable_path_is_an_error() {
        let err = write_atomic(Path::new("/nonexistent-dir/x/report.json"), b"{}").unwrap_err();
        assert!(matches!(err, CliError::Io(_)));
    }
}
