//! Tabular emission of scan records. CSV is the primary format; JSON
//! mirrors the same column names. Floats are printed with 12 significant
//! digits so re-parsing reproduces the records exactly at that precision.

use macroreal::catalog::Family;
use serde_json::{json, Map, Value};

use crate::scan::ScanRecord;
use crate::{CliError, Result};

pub fn format_float(x: f64) -> String {
    format!("{x:.11e}")
}

pub fn csv_header(families: &[Family], nsit_columns: &[String]) -> String {
    let mut cols = vec![String::from("phase")];
    cols.extend(families.iter().map(|f| format!("family_max_{}", f.name())));
    cols.push(String::from("oracle_feasible"));
    cols.extend(nsit_columns.iter().cloned());
    cols.join(",")
}

pub fn to_csv(records: &[ScanRecord], families: &[Family], nsit_columns: &[String]) -> String {
    let mut out = csv_header(families, nsit_columns);
    out.push('\n');
    for rec in records {
        let mut cells = vec![format_float(rec.phase)];
        cells.extend(rec.family_max.iter().map(|v| format_float(*v)));
        cells.push(String::from(if rec.oracle_feasible { "1" } else { "0" }));
        cells.extend(rec.nsit.iter().map(|v| format_float(*v)));
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

pub fn to_json(records: &[ScanRecord], families: &[Family], nsit_columns: &[String]) -> Value {
    Value::Array(
        records
            .iter()
            .map(|rec| {
                let mut obj = Map::new();
                obj.insert(String::from("phase"), json!(rec.phase));
                for (fam, v) in families.iter().zip(&rec.family_max) {
                    obj.insert(format!("family_max_{}", fam.name()), json!(v));
                }
                obj.insert(
                    String::from("oracle_feasible"),
                    json!(if rec.oracle_feasible { 1 } else { 0 }),
                );
                for (name, v) in nsit_columns.iter().zip(&rec.nsit) {
                    obj.insert(name.clone(), json!(v));
                }
                Value::Object(obj)
            })
            .collect(),
    )
}

/// Parse CSV produced by [`to_csv`]; used by the round-trip tests and by
/// anyone post-processing a stored scan.
pub fn parse_csv(text: &str) -> Result<(Vec<String>, Vec<ScanRecord>)> {
    let mut lines = text.lines();
    let header = lines
        .next()
        .ok_or_else(|| CliError::input("empty CSV"))?
        .split(',')
        .map(String::from)
        .collect::<Vec<_>>();
    let feasible_col = header
        .iter()
        .position(|c| c == "oracle_feasible")
        .ok_or_else(|| CliError::input("CSV lacks an oracle_feasible column"))?;
    let mut records = Vec::new();
    for (lineno, line) in lines.enumerate() {
        if line.is_empty() {
            continue;
        }
        let cells: Vec<&str> = line.split(',').collect();
        if cells.len() != header.len() {
            return Err(CliError::input(format!(
                "line {}: {} cells, expected {}",
                lineno + 2,
                cells.len(),
                header.len()
            )));
        }
        let num = |i: usize| -> Result<f64> {
            cells[i]
                .parse::<f64>()
                .map_err(|_| CliError::input(format!("line {}: bad number {:?}", lineno + 2, cells[i])))
        };
        let mut family_max = Vec::new();
        for i in 1..feasible_col {
            family_max.push(num(i)?);
        }
        let mut nsit = Vec::new();
        for i in feasible_col + 1..header.len() {
            nsit.push(num(i)?);
        }
        records.push(ScanRecord {
            phase: num(0)?,
            family_max,
            oracle_feasible: cells[feasible_col] == "1",
            nsit,
        });
    }
    Ok((header, records))
}
