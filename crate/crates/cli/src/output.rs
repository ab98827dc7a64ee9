//! Row types and their CSV / JSON encodings.
//!
//! Column names and order are part of the schema. Floats are written in
//! shortest round-trip form; missing values (an infinite mean, an absent
//! crossing) are empty CSV fields and JSON `null`.

use std::io::Write;

use serde::Serialize;

use crate::args::Format;
use crate::error::CliError;

pub const SCHEMA: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EvalRow {
    pub model: String,
    pub lambda: String,
    pub p: String,
    pub regime: String,
    pub mean_lo: Option<f64>,
    pub mean_hi: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CompareRow {
    pub d: String,
    pub lambda: String,
    pub p: String,
    pub verdict: String,
    pub lhs_lo: f64,
    pub lhs_hi: f64,
    pub rhs: Option<f64>,
    #[serde(rename = "M")]
    pub m: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanRow {
    pub lambda: f64,
    pub p: f64,
    pub region: &'static str,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TraceRow {
    pub d: String,
    pub lambda: String,
    pub p_l: Option<f64>,
    pub p_u: Option<f64>,
    pub tol: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimulateRow {
    pub model: String,
    pub lambda: String,
    pub p: String,
    pub replicates: u64,
    pub seed: u64,
    pub mean: Option<f64>,
    pub std_error: Option<f64>,
    pub censored_fraction: f64,
    pub survival_fraction: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReplicateRow {
    pub index: u64,
    pub extinction_time: Option<f64>,
    pub max_colonies: u64,
    pub censored: bool,
}

#[derive(Serialize)]
struct JsonDoc<'a, T> {
    schema: u32,
    rows: &'a [T],
}

/// Writes `rows` with the schema line and a header, even when empty.
pub fn write_csv<T: Serialize, W: Write>(
    mut out: W,
    header: &[&str],
    rows: &[T],
) -> Result<(), CliError> {
    writeln!(out, "# schema={SCHEMA}")?;
    let mut w = csv::WriterBuilder::new()
        .has_headers(false)
        .from_writer(out);
    w.write_record(header)?;
    for row in rows {
        w.serialize(row)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_json<T: Serialize, W: Write>(mut out: W, rows: &[T]) -> Result<(), CliError> {
    serde_json::to_writer_pretty(
        &mut out,
        &JsonDoc {
            schema: SCHEMA,
            rows,
        },
    )?;
    writeln!(out)?;
    Ok(())
}

pub fn write_rows<T: Serialize, W: Write>(
    out: W,
    format: Format,
    header: &[&str],
    rows: &[T],
) -> Result<(), CliError> {
    match format {
        Format::Csv => write_csv(out, header, rows),
        Format::Json => write_json(out, rows),
    }
}

pub const EVAL_HEADER: &[&str] = &["model", "lambda", "p", "regime", "mean_lo", "mean_hi"];
pub const COMPARE_HEADER: &[&str] = &[
    "d", "lambda", "p", "verdict", "lhs_lo", "lhs_hi", "rhs", "M",
];
pub const SCAN_HEADER: &[&str] = &["lambda", "p", "region"];
pub const TRACE_HEADER: &[&str] = &["d", "lambda", "p_l", "p_u", "tol"];
pub const SIMULATE_HEADER: &[&str] = &[
    "model",
    "lambda",
    "p",
    "replicates",
    "seed",
    "mean",
    "std_error",
    "censored_fraction",
    "survival_fraction",
];
pub const REPLICATE_HEADER: &[&str] = &["index", "extinction_time", "max_colonies", "censored"];

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_has_schema_line_and_header() {
        let rows = [ScanRow {
            lambda: 0.5,
            p: 0.1,
            region: "gray",
        }];
        let mut buf = Vec::new();
        write_csv(&mut buf, SCAN_HEADER, &rows).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text, "# schema=1\nlambda,p,region\n0.5,0.1,gray\n");
    }

    #[test]
    fn floats_round_trip_and_missing_values_are_empty() {
        let x = 0.1 + 0.2;
        let rows = [TraceRow {
            d: "2".into(),
            lambda: "1/2".into(),
            p_l: Some(x),
            p_u: None,
            tol: 5e-3,
        }];
        let mut buf = Vec::new();
        write_csv(&mut buf, TRACE_HEADER, &rows).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let last = text.lines().last().unwrap();
        let fields: Vec<&str> = last.split(',').collect();
        assert_eq!(fields[2].parse::<f64>().unwrap(), x);
        assert_eq!(fields[3], "");
    }

    #[test]
    fn json_mirrors_rows() {
        let rows = [ScanRow {
            lambda: 0.5,
            p: 0.1,
            region: "white",
        }];
        let mut buf = Vec::new();
        write_json(&mut buf, &rows).unwrap();
        let v: serde_json::Value = serde_json::from_slice(&buf).unwrap();
        assert_eq!(v["schema"], 1);
        assert_eq!(v["rows"][0]["region"], "white");
    }
}
