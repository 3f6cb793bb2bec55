//! The five reference tables: exact value, main-term approximation and
//! their relative error at fixed points.

use std::io::{self, Write};

use hypasym::numerics::{ComplexValue, Precision};
use hypasym::oracle::eval_f;
use hypasym::phase::main_term;
use hypasym::{Error, EvalPoint, Result};
use rayon::prelude::*;
use serde::Serialize;

use crate::format::{complex_compact, complex_spaced, rel_error};
use crate::Precisions;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TableSpec {
    pub id: u8,
    pub r: f64,
    pub alpha: f64,
    pub z: f64,
}

pub const TABLES: [TableSpec; 5] = [
    TableSpec {
        id: 1,
        r: 100.0,
        alpha: 0.1,
        z: 0.99,
    },
    TableSpec {
        id: 2,
        r: 100.0,
        alpha: 0.1,
        z: 0.9999,
    },
    TableSpec {
        id: 3,
        r: 100.0,
        alpha: 0.1,
        z: 0.00001,
    },
    TableSpec {
        id: 4,
        r: 100.0,
        alpha: 0.02,
        z: 0.99,
    },
    TableSpec {
        id: 5,
        r: 100.0,
        alpha: 0.02,
        z: 0.9999,
    },
];

/// Which tables to emit.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TableSelection {
    All,
    One(u8),
}

impl std::str::FromStr for TableSelection {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        if s.eq_ignore_ascii_case("all") {
            return Ok(TableSelection::All);
        }
        match s.parse::<u8>() {
            Ok(id) if (1..=TABLES.len() as u8).contains(&id) => Ok(TableSelection::One(id)),
            _ => Err(format!(
                "table id must be 1..={} or 'all', got '{s}'",
                TABLES.len()
            )),
        }
    }
}

impl TableSelection {
    pub fn specs(self) -> Vec<TableSpec> {
        match self {
            TableSelection::All => TABLES.to_vec(),
            TableSelection::One(id) => TABLES.iter().copied().filter(|t| t.id == id).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TableRow {
    pub spec: TableSpec,
    pub label: String,
    /// Reference value of the function.
    pub f_value: ComplexValue,
    /// Main-term approximation.
    pub r_value: ComplexValue,
    pub rel_error: f64,
}

impl TableRow {
    pub fn compute(spec: TableSpec, precisions: Precisions) -> Result<TableRow> {
        let p = EvalPoint::new(spec.r, spec.alpha, spec.z)?;
        let f = eval_f(&p)
            .map_err(|e| Error::Oracle(Box::new(e)))?
            .value
            .with_precision(precisions.oracle);
        let approx = main_term(&p)?.value.with_precision(precisions.asymptotic);
        Ok(TableRow {
            spec,
            label: format!("r = {}, alpha = {}, z = {}", spec.r, spec.alpha, spec.z),
            f_value: f,
            rel_error: approx.rel_error_to(&f),
            r_value: approx,
        })
    }
}

/// Rows for the selection, computed concurrently, returned in table order.
pub fn compute_rows(selection: TableSelection, precisions: Precisions) -> Result<Vec<TableRow>> {
    selection
        .specs()
        .into_par_iter()
        .map(|spec| TableRow::compute(spec, precisions))
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum TableFormat {
    Md,
    Csv,
    Json,
}

pub fn render(rows: &[TableRow], format: TableFormat, out: &mut dyn Write) -> io::Result<()> {
    match format {
        TableFormat::Md => render_md(rows, out),
        TableFormat::Csv => render_csv(rows, out),
        TableFormat::Json => render_json(rows, out),
    }
}

fn render_md(rows: &[TableRow], out: &mut dyn Write) -> io::Result<()> {
    writeln!(out, "<!-- {} -->", crate::version_tag())?;
    for row in rows {
        writeln!(out)?;
        writeln!(out, "### Table {}: {}", row.spec.id, row.label)?;
        writeln!(out)?;
        writeln!(out, "| Function | Approximation | Relative error |")?;
        writeln!(out, "|---|---|---|")?;
        writeln!(
            out,
            "| F(r,alpha,z) | {} | |",
            complex_spaced(row.f_value.to_c64())
        )?;
        writeln!(
            out,
            "| R(r,alpha,z) | {} | {} |",
            complex_spaced(row.r_value.to_c64()),
            rel_error(row.rel_error)
        )?;
    }
    Ok(())
}

fn render_csv(rows: &[TableRow], out: &mut dyn Write) -> io::Result<()> {
    writeln!(out, "# {}", crate::version_tag())?;
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["table", "r", "alpha", "z", "F", "R", "rel_error"])?;
    for row in rows {
        w.write_record([
            row.spec.id.to_string(),
            row.spec.r.to_string(),
            row.spec.alpha.to_string(),
            row.spec.z.to_string(),
            complex_compact(row.f_value.to_c64()),
            complex_compact(row.r_value.to_c64()),
            rel_error(row.rel_error),
        ])?;
    }
    w.flush()
}

#[derive(Serialize)]
struct JsonRow<'a> {
    table: u8,
    label: &'a str,
    r: f64,
    alpha: f64,
    z: f64,
    #[serde(rename = "F")]
    f: String,
    #[serde(rename = "R")]
    approx: String,
    rel_error: String,
    precision_f: &'static str,
    precision_r: &'static str,
}

fn precision_name(p: Precision) -> &'static str {
    match p {
        Precision::Standard => "standard",
        Precision::Extended => "extended",
    }
}

fn render_json(rows: &[TableRow], out: &mut dyn Write) -> io::Result<()> {
    let doc: Vec<JsonRow> = rows
        .iter()
        .map(|row| JsonRow {
            table: row.spec.id,
            label: &row.label,
            r: row.spec.r,
            alpha: row.spec.alpha,
            z: row.spec.z,
            f: complex_compact(row.f_value.to_c64()),
            approx: complex_compact(row.r_value.to_c64()),
            rel_error: rel_error(row.rel_error),
            precision_f: precision_name(row.f_value.precision()),
            precision_r: precision_name(row.r_value.precision()),
        })
        .collect();
    serde_json::to_writer_pretty(&mut *out, &doc)?;
    writeln!(out)
}
