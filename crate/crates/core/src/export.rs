//! CSV and JSON emission. CSV numbers carry 17 significant digits; JSON uses
//! the shortest representation that parses back to the same `f64`.

use serde::Serialize;

use crate::appendix::{AppendixRow, RelativeVariation};
use crate::error::{QkdError, Result};
use crate::rates::KeyRateReport;
use crate::scan::{ScanPoint, ScanResult};
use crate::security::{ThresholdCurve, ThresholdPoint};

pub trait CsvRecord {
    const HEADER: &'static [&'static str];
    fn fields(&self) -> Vec<String>;
}

pub fn format_number(x: f64) -> String {
    format!("{x:.16e}")
}

fn format_optional(x: Option<f64>) -> String {
    x.map(format_number).unwrap_or_default()
}

fn output_error(e: impl std::fmt::Display) -> QkdError {
    QkdError::Output(e.to_string())
}

fn write_table(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> Result<String> {
    let mut writer = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    writer.write_record(header).map_err(output_error)?;
    for row in rows {
        writer.write_record(&row).map_err(output_error)?;
    }
    let bytes = writer.into_inner().map_err(output_error)?;
    String::from_utf8(bytes).map_err(output_error)
}

pub fn to_csv<R: CsvRecord>(records: &[R]) -> Result<String> {
    write_table(R::HEADER, records.iter().map(CsvRecord::fields))
}

/// Several threshold curves in one table, with a leading `attack` column.
pub fn curves_to_csv(curves: &[ThresholdCurve]) -> Result<String> {
    let header: Vec<&str> = std::iter::once("attack")
        .chain(ThresholdPoint::HEADER.iter().copied())
        .collect();
    let rows = curves.iter().flat_map(|c| {
        c.points.iter().map(move |p| {
            std::iter::once(c.attack_class.clone())
                .chain(p.fields())
                .collect()
        })
    });
    write_table(&header, rows)
}

pub fn to_json<T: Serialize + ?Sized>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value).map_err(output_error)?;
    s.push('\n');
    Ok(s)
}

impl CsvRecord for ThresholdPoint {
    const HEADER: &'static [&'static str] = &["T", "omega_star", "N_star", "secure"];

    fn fields(&self) -> Vec<String> {
        vec![
            format_number(self.T),
            format_optional(self.omega_star),
            format_optional(self.N_star),
            self.secure.as_str().to_string(),
        ]
    }
}

impl CsvRecord for ScanResult {
    const HEADER: &'static [&'static str] = &[
        "T",
        "omega",
        "best_g",
        "best_g_prime",
        "R_min",
        "grid_resolution",
    ];

    fn fields(&self) -> Vec<String> {
        [
            self.T,
            self.omega,
            self.best_g,
            self.best_g_prime,
            self.R_min,
            self.grid_resolution,
        ]
        .into_iter()
        .map(format_number)
        .collect()
    }
}

impl CsvRecord for ScanPoint {
    const HEADER: &'static [&'static str] = &["g", "g_prime", "R"];

    fn fields(&self) -> Vec<String> {
        [self.g, self.g_prime, self.R]
            .into_iter()
            .map(format_number)
            .collect()
    }
}

impl CsvRecord for KeyRateReport {
    const HEADER: &'static [&'static str] = &[
        "nu1",
        "nu2",
        "nu3nu4_product",
        "nubar1",
        "nubar2",
        "S_E",
        "S_E_cond",
        "I_AB",
        "chi_EA",
        "R",
        "sigma",
        "sigma_prime",
        "Delta",
    ];

    fn fields(&self) -> Vec<String> {
        [
            self.nu1,
            self.nu2,
            self.nu3nu4_product,
            self.nubar1,
            self.nubar2,
            self.S_E,
            self.S_E_cond,
            self.I_AB,
            self.chi_EA,
            self.R,
            self.sigma,
            self.sigma_prime,
            self.Delta,
        ]
        .into_iter()
        .map(format_number)
        .collect()
    }
}

impl CsvRecord for AppendixRow {
    const HEADER: &'static [&'static str] = &["T", "omega", "attack", "I_AB", "chi_EA"];

    fn fields(&self) -> Vec<String> {
        vec![
            format_number(self.T),
            format_number(self.omega),
            self.attack.clone(),
            format_number(self.I_AB),
            format_number(self.chi_EA),
        ]
    }
}

impl CsvRecord for RelativeVariation {
    const HEADER: &'static [&'static str] =
        &["T", "omega", "delta_I_AB", "delta_chi_EA", "flagged"];

    fn fields(&self) -> Vec<String> {
        vec![
            format_number(self.T),
            format_number(self.omega),
            format_optional(self.delta_I_AB),
            format_optional(self.delta_chi_EA),
            self.flagged.to_string(),
        ]
    }
}
