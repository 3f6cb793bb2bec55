//! Coefficient export for the LG and temme branches.

use std::io::{self, Write};

use hypasym::lg::a_coeffs;
use hypasym::temme::{ftilde_ladder, TemmeContext, STENCIL_HALF, STEP_FACTOR};
use hypasym::Result;

/// A_0..A_order sampled on `points` equispaced z in [0, 1 - delta].
#[derive(Clone, Debug, PartialEq)]
pub struct LgTable {
    pub alpha: f64,
    pub delta: f64,
    pub nodes: usize,
    pub grid_residual: f64,
    pub z: Vec<f64>,
    /// `values[j][i]` is A_j at `z[i]`.
    pub values: Vec<Vec<f64>>,
}

pub fn lg_table(alpha: f64, order: usize, delta: f64, points: usize) -> Result<LgTable> {
    let c = a_coeffs(alpha, order, delta)?;
    let points = points.max(2);
    let z: Vec<f64> = (0..points)
        .map(|i| c.z_max * i as f64 / (points - 1) as f64)
        .collect();
    let values = (0..=order).map(|j| c.sample(j, &z)).collect();
    Ok(LgTable {
        alpha,
        delta,
        nodes: c.nodes,
        grid_residual: c.grid_residual,
        z,
        values,
    })
}

impl LgTable {
    pub fn write(&self, out: &mut dyn Write) -> io::Result<()> {
        writeln!(out, "# {}", crate::version_tag())?;
        writeln!(
            out,
            "# lg coefficients alpha={} delta={} chebyshev_nodes={} grid_residual={:.3e} precision=standard",
            self.alpha, self.delta, self.nodes, self.grid_residual
        )?;
        let names: Vec<String> = (0..self.values.len()).map(|j| format!("A_{j}")).collect();
        writeln!(out, "z {}", names.join(" "))?;
        for (i, z) in self.z.iter().enumerate() {
            let row: Vec<String> = self
                .values
                .iter()
                .map(|v| format!("{:.12e}", v[i]))
                .collect();
            writeln!(out, "{z} {}", row.join(" "))?;
        }
        Ok(())
    }
}

/// f̃_0..f̃_order at one point.
#[derive(Clone, Debug, PartialEq)]
pub struct TemmeTable {
    pub r: f64,
    pub alpha: f64,
    pub z: f64,
    pub step: f64,
    pub values: Vec<f64>,
}

pub fn temme_table(r: f64, alpha: f64, z: f64, order: usize) -> Result<TemmeTable> {
    let ctx = TemmeContext::new(r, alpha, z)?;
    let values = ftilde_ladder(&ctx, order)?;
    Ok(TemmeTable {
        r,
        alpha,
        z,
        step: STEP_FACTOR * alpha,
        values,
    })
}

impl TemmeTable {
    pub fn write(&self, out: &mut dyn Write) -> io::Result<()> {
        writeln!(out, "# {}", crate::version_tag())?;
        writeln!(
            out,
            "# temme ftilde r={} alpha={} z={} stencil={}-point step={:.3e} (checked at {:.3e}) precision=extended",
            self.r,
            self.alpha,
            self.z,
            2 * STENCIL_HALF + 1,
            self.step,
            2.0 * self.step
        )?;
        writeln!(out, "k ftilde")?;
        for (k, v) in self.values.iter().enumerate() {
            writeln!(out, "{k} {v:.15e}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lg_order_zero_is_one() {
        let t = lg_table(0.1, 0, 0.1, 5).unwrap();
        assert_eq!(t.values.len(), 1);
        assert!(t.values[0].iter().all(|&v| v == 1.0));
        assert_eq!(t.z[0], 0.0);
        assert!((t.z[4] - 0.9).abs() < 1e-15);
    }

    #[test]
    fn temme_ladder_length() {
        let t = temme_table(100.0, 0.1, 0.9999, 2).unwrap();
        assert_eq!(t.values.len(), 3);
        assert!(temme_table(100.0, 0.1, 0.9999, 9).is_err());
    }
}
