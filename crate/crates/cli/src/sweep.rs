//! Grid sweeps: oracle against expansion on every (r, alpha, z) cell.

use std::io::{self, Write};

use hypasym::evaluator::fit_exponent;
use hypasym::oracle::eval_f;
use hypasym::{evaluate, Branch, Error, EvalPoint, ExpansionResult, Result};
use num_complex::Complex64;
use rayon::prelude::*;

use crate::format::sci;
use crate::Precisions;

pub const MAX_CELLS: usize = 1_000_000;

#[derive(Clone, Debug, PartialEq)]
pub struct SweepSpec {
    pub rs: Vec<f64>,
    pub alphas: Vec<f64>,
    pub zs: Vec<f64>,
    /// Terms in the expansion, main term included.
    pub order: usize,
    /// `None` routes automatically.
    pub branch: Option<Branch>,
}

impl SweepSpec {
    pub fn cells(&self) -> usize {
        self.rs.len() * self.alphas.len() * self.zs.len()
    }

    /// Cells in lexicographic (r, alpha, z) order.
    pub fn grid(&self) -> Vec<(f64, f64, f64)> {
        let mut out = Vec::with_capacity(self.cells());
        for &r in &self.rs {
            for &a in &self.alphas {
                for &z in &self.zs {
                    out.push((r, a, z));
                }
            }
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepRow {
    pub r: f64,
    pub alpha: f64,
    pub z: f64,
    pub exact: Option<Complex64>,
    pub approx: Option<ExpansionResult>,
    pub rel_error: Option<f64>,
    pub error: Option<Error>,
}

impl SweepRow {
    fn compute(
        r: f64,
        alpha: f64,
        z: f64,
        order: usize,
        branch: Option<Branch>,
        prec: Precisions,
    ) -> SweepRow {
        let mut row = SweepRow {
            r,
            alpha,
            z,
            exact: None,
            approx: None,
            rel_error: None,
            error: None,
        };
        let p = match EvalPoint::new(r, alpha, z) {
            Ok(p) => p,
            Err(e) => {
                row.error = Some(e);
                return row;
            }
        };
        let exact = eval_f(&p)
            .map(|o| o.value.with_precision(prec.oracle))
            .map_err(|e| Error::Oracle(Box::new(e)));
        let approx = evaluate(&p, order, branch).map(|e| e.with_precision(prec.asymptotic));
        if let (Ok(f), Ok(a)) = (&exact, &approx) {
            row.rel_error = Some(a.value.rel_error_to(f));
        }
        row.exact = exact.as_ref().ok().map(|v| v.to_c64());
        row.error = approx.as_ref().err().or(exact.as_ref().err()).cloned();
        row.approx = approx.ok();
        row
    }

    pub fn failed(&self) -> bool {
        self.error.is_some()
    }
}

pub fn run(spec: &SweepSpec, prec: Precisions) -> Result<Vec<SweepRow>> {
    if spec.cells() > MAX_CELLS {
        return Err(Error::Domain(format!(
            "sweep grid has {} cells, the limit is {MAX_CELLS}",
            spec.cells()
        )));
    }
    if spec.order == 0 {
        return Err(Error::Domain("expansion order must be at least 1".into()));
    }
    Ok(spec
        .grid()
        .into_par_iter()
        .map(|(r, a, z)| SweepRow::compute(r, a, z, spec.order, spec.branch, prec))
        .collect())
}

/// Fitted decay exponent of the relative error in alpha*r for one
/// (alpha, z) column of the grid.
#[derive(Clone, Debug, PartialEq)]
pub struct DecayFit {
    pub alpha: f64,
    pub z: f64,
    pub points: usize,
    pub exponent: f64,
}

/// One fit per (alpha, z) with at least three usable r values, in grid order.
pub fn decay_fits(rows: &[SweepRow]) -> Vec<DecayFit> {
    let mut keys: Vec<(f64, f64)> = Vec::new();
    for row in rows {
        if !keys.contains(&(row.alpha, row.z)) {
            keys.push((row.alpha, row.z));
        }
    }
    keys.into_iter()
        .filter_map(|(alpha, z)| {
            let samples: Vec<(f64, f64)> = rows
                .iter()
                .filter(|row| row.alpha == alpha && row.z == z)
                .filter_map(|row| row.rel_error.map(|e| (alpha * row.r, e)))
                .filter(|&(x, e)| x > 0.0 && e > 0.0)
                .collect();
            fit_exponent(&samples).ok().map(|exponent| DecayFit {
                alpha,
                z,
                points: samples.len(),
                exponent,
            })
        })
        .collect()
}

pub const CSV_HEADER: [&str; 11] = [
    "r",
    "alpha",
    "z",
    "branch",
    "re_F",
    "im_F",
    "re_R",
    "im_R",
    "rel_error",
    "est_remainder",
    "error",
];

fn opt(x: Option<f64>) -> String {
    x.map(sci).unwrap_or_default()
}

pub fn write_csv(rows: &[SweepRow], order: usize, out: &mut dyn Write) -> io::Result<()> {
    writeln!(out, "# {}", crate::version_tag())?;
    {
        let mut w = csv::Writer::from_writer(&mut *out);
        w.write_record(CSV_HEADER)?;
        for row in rows {
            let approx = row.approx.as_ref();
            w.write_record([
                row.r.to_string(),
                row.alpha.to_string(),
                row.z.to_string(),
                approx
                    .map(|a| a.branch.name().to_string())
                    .unwrap_or_default(),
                opt(row.exact.map(|f| f.re)),
                opt(row.exact.map(|f| f.im)),
                opt(approx.map(|a| a.value.re())),
                opt(approx.map(|a| a.value.im())),
                opt(row.rel_error),
                opt(approx.map(|a| a.est_remainder)),
                row.error
                    .as_ref()
                    .map(|e| format!("{}: {}", e.kind(), e).replace('\n', " "))
                    .unwrap_or_default(),
            ])?;
        }
        w.flush()?;
    }
    let fits = decay_fits(rows);
    if !fits.is_empty() {
        writeln!(
            out,
            "# decay fit of log(rel_error) against log(alpha*r), {order}-term expansion"
        )?;
        writeln!(out, "# alpha,z,points,exponent")?;
        for f in fits {
            writeln!(out, "# {},{},{},{:.4}", f.alpha, f.z, f.points, f.exponent)?;
        }
    }
    Ok(())
}

/// Whitespace table for gnuplot; a blank line separates (r, alpha) blocks
/// so `splot` sees a grid. Failed cells are skipped.
pub fn write_plot(rows: &[SweepRow], out: &mut dyn Write) -> io::Result<()> {
    writeln!(out, "# {}", crate::version_tag())?;
    writeln!(out, "# r alpha z rel_error est_remainder")?;
    let mut last: Option<(f64, f64)> = None;
    for row in rows {
        let (Some(e), Some(a)) = (row.rel_error, row.approx.as_ref()) else {
            continue;
        };
        if last.is_some_and(|k| k != (row.r, row.alpha)) {
            writeln!(out)?;
        }
        last = Some((row.r, row.alpha));
        writeln!(
            out,
            "{} {} {} {} {}",
            row.r,
            row.alpha,
            row.z,
            sci(e),
            sci(a.est_remainder)
        )?;
    }
    Ok(())
}
