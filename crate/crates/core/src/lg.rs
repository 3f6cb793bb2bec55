//! Liouville-Green route.
//!
//! `Y(z) = z^{1/2+ir} (1-z)^{1/2-irα} F` solves `Y'' = ((ir)² h + g) Y`, and
//! `F = C₁ e^{irξ} Σ_j A_j(z)/(ir)^j / (h^{1/4} z^{1/2+ir} (1-z)^{1/2-irα})`.
//! The A_j are built as Chebyshev interpolants on `[0, 1-δ]` and normalized
//! by `A_j(0) = 0` for j ≥ 1.

use num_complex::Complex64;

use crate::error::{domain, regime, Error, Result};
use crate::evaluator::{Branch, ExpansionResult};
use crate::numerics::cheb::Chebyshev;
use crate::numerics::{cdd, ComplexValue, SeriesJet, DD};
use crate::phase::radicand;
use crate::point::EvalPoint;

/// Default distance kept from z = 1.
pub const DEFAULT_DELTA: f64 = 0.1;
/// Highest supported expansion order.
pub const MAX_ORDER: usize = 4;

/// h, g and the first two derivatives of h at one (α, z).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OdeData {
    pub h_val: f64,
    pub g_val: f64,
    pub h_prime: f64,
    pub h_second: f64,
}

struct OdeDd {
    h: DD,
    g: DD,
    h1: DD,
    h2: DD,
}

/// With P = 1-(1-α²)z and D = z(1-z): h = P/D², h' = N/D³ with
/// N = P'D - 2PD', and h'' = (N'D - 3ND')/D⁴ with N' = 4P - P'D'.
fn ode_dd(alpha: DD, z: DD) -> OdeDd {
    let p = radicand(alpha, z);
    let dp = -(1.0 - alpha.sqr());
    let d = z * (1.0 - z);
    let dd = 1.0 - z * 2.0;
    let n = dp * d - p * dd * 2.0;
    let dn = p * 4.0 - dp * dd;
    let d2 = d.sqr();
    let gnum = 1.0 - z * 0.75 + z.sqr() * 0.75;
    OdeDd {
        h: p / d2,
        g: -gnum / (d2 * 4.0),
        h1: n / (d2 * d),
        h2: (dn * d - n * dd * 3.0) / d2.sqr(),
    }
}

fn check_interior(alpha: f64, z: f64) -> Result<()> {
    if !(0.0..1.0).contains(&alpha) {
        return Err(domain(format!("alpha must lie in [0, 1), got {alpha}")));
    }
    if !(z > 0.0 && z < 1.0) {
        return Err(domain(format!("z must lie in (0, 1), got {z}")));
    }
    Ok(())
}

pub fn ode_data(alpha: f64, z: f64) -> Result<OdeData> {
    check_interior(alpha, z)?;
    let o = ode_dd(DD::from_f64(alpha), DD::from_f64(z));
    Ok(OdeData {
        h_val: o.h.to_f64(),
        g_val: o.g.to_f64(),
        h_prime: o.h1.to_f64(),
        h_second: o.h2.to_f64(),
    })
}

/// ξ(α, z) in double-word.
pub fn xi_dd(alpha: f64, z: f64) -> Result<DD> {
    check_interior(alpha, z)?;
    let a = DD::from_f64(alpha);
    let zz = DD::from_f64(z);
    let s = radicand(a, zz).sqrt();
    let mut v = -(1.0 + s).ln() * 2.0 + zz.ln() - a * (1.0 - zz).ln();
    if alpha > 0.0 {
        v = v + a * (a + s).ln() * 2.0 + (1.0 - a) * (1.0 - a.sqr()).ln();
    }
    Ok(v)
}

pub fn xi(alpha: f64, z: f64) -> Result<f64> {
    xi_dd(alpha, z).map(DD::to_f64)
}

/// Λ = (16gh² + 4hh'' - 5h'²) / (32 h^{5/2}), from the closed-form h, h', h''.
pub fn lambda_dd(alpha: f64, z: f64) -> Result<DD> {
    check_interior(alpha, z)?;
    let z0 = 1.0 / (1.0 - alpha * alpha);
    if z0 - z < 1e-3 {
        return Err(domain(format!("z = {z} is at the turning point {z0}")));
    }
    let o = ode_dd(DD::from_f64(alpha), DD::from_f64(z));
    let num = o.g * o.h.sqr() * 16.0 + o.h * o.h2 * 4.0 - o.h1.sqr() * 5.0;
    let h52 = o.h.sqr() * o.h.sqrt();
    Ok(num / (h52 * 32.0))
}

pub fn lambda_fn(alpha: f64, z: f64) -> Result<f64> {
    lambda_dd(alpha, z).map(DD::to_f64)
}

/// C₁ as a phase: C₁ = exp(ir · c1_phase).
pub fn c1_phase_dd(alpha: f64) -> DD {
    let a = DD::from_f64(alpha);
    let mut v = DD::LN_2 * 2.0;
    if alpha > 0.0 {
        v = v - a * (1.0 + a).ln() * 2.0 - (1.0 - a) * (1.0 - a.sqr()).ln();
    }
    v
}

/// A_1..A_order on [0, z_max].
///
/// The recursion `A_{j+1} = -q A_j' + ∫₀^z Λ A_j`, q = 1/(2√h), is split in
/// two: the integrals are Chebyshev interpolants on the grid, while
/// derivatives come from exact Taylor-jet algebra at the point of interest
/// (`A_{j+1}' = -(q A_j')' + Λ A_j`), so nothing is differentiated
/// numerically.
#[derive(Clone, Debug)]
pub struct LgCoefficients {
    pub alpha: f64,
    pub z_max: f64,
    pub order: usize,
    /// ∫₀^z Λ A_j for j = 0..order-1.
    pub integrals: Vec<Chebyshev>,
    /// A_j(0) for j = 1..=order; the normalization makes these zero.
    pub integration_constants: Vec<f64>,
    /// Interpolation nodes used.
    pub nodes: usize,
    /// Largest discrepancy against a table built on twice as many nodes.
    pub grid_residual: f64,
}

/// Taylor jets of q = z(1-z)/(2√P) and Λ at z, of length `len`.
fn local_data(alpha: f64, z: f64, len: usize) -> (SeriesJet, SeriesJet) {
    let k = 1.0 - alpha * alpha;
    let p = 1.0 - k * z;
    let mut dcoef = vec![z * (1.0 - z), 1.0 - 2.0 * z, -1.0];
    dcoef.resize(len.max(3), 0.0);
    let d = SeriesJet::new(z, dcoef).truncate(len);
    let q = (&d * &SeriesJet::pow_affine(z, p, -k, -0.5, len)).scale(0.5);
    // Λ = ((1-α⁴)z + 4α² - 1) / (32 P^{5/2}); its value is replaced by the
    // literal closed form below.
    let mut ncoef = vec![
        (1.0 - alpha.powi(4)) * z + 4.0 * alpha * alpha - 1.0,
        1.0 - alpha.powi(4),
    ];
    ncoef.resize(len.max(2), 0.0);
    let num = SeriesJet::new(z, ncoef).truncate(len);
    let mut lam = (&num * &SeriesJet::pow_affine(z, p, -k, -2.5, len)).scale(1.0 / 32.0);
    lam.coeffs[0] = lambda_at(alpha, z);
    (q, lam)
}

/// Jets of A_0..A_levels at z, given the integrals I_0..I_{levels-1}.
fn local_jets(alpha: f64, z: f64, levels: usize, integrals: &[Chebyshev]) -> Vec<SeriesJet> {
    let len = levels + 1;
    let (q, lam) = local_data(alpha, z, len);
    let mut out = Vec::with_capacity(len);
    let mut a = SeriesJet::constant(z, 1.0, len);
    for integral in integrals.iter().take(levels) {
        let da = a.derivative();
        let value = if z == 0.0 {
            0.0
        } else {
            -q.value() * da.value() + integral.eval(z)
        };
        let qda = &q * &da;
        let next_d = &qda.derivative().scale(-1.0) + &(&lam * &a);
        let next = next_d.integral(value);
        out.push(a);
        a = next;
    }
    out.push(a);
    out
}

impl LgCoefficients {
    /// A_j(z); A_0 = 1.
    pub fn a(&self, j: usize, z: f64) -> f64 {
        self.jets(z)[j].value()
    }

    /// Taylor jets of A_0..A_order at z.
    pub fn jets(&self, z: f64) -> Vec<SeriesJet> {
        local_jets(self.alpha, z, self.order, &self.integrals)
    }

    pub fn sample(&self, j: usize, z_grid: &[f64]) -> Vec<f64> {
        z_grid.iter().map(|&z| self.a(j, z)).collect()
    }
}

/// Λ at z, with the removable z → 0 singularity of the closed form avoided
/// by nudging off the endpoint.
fn lambda_at(alpha: f64, z: f64) -> f64 {
    let z = z.max(1e-12);
    lambda_dd(alpha, z).map(DD::to_f64).unwrap_or(f64::NAN)
}

fn build_integrals(alpha: f64, z_max: f64, order: usize, n: usize) -> Vec<Chebyshev> {
    let nodes = Chebyshev::nodes(0.0, z_max, n);
    let lam: Vec<f64> = nodes.iter().map(|&z| lambda_at(alpha, z)).collect();
    let mut integrals: Vec<Chebyshev> = Vec::with_capacity(order);
    for j in 0..order {
        let prod: Vec<f64> = nodes
            .iter()
            .zip(&lam)
            .map(|(&z, l)| l * local_jets(alpha, z, j, &integrals)[j].value())
            .collect();
        integrals.push(Chebyshev::from_values(0.0, z_max, &prod).integral(0.0));
    }
    integrals
}

const BASE_NODES: usize = 32;
const MAX_NODES: usize = 1024;
const GRID_TOL: f64 = 1e-13;

/// Builds the A_j tables on [0, 1-δ], doubling the node count until a
/// table on twice as many nodes agrees to `GRID_TOL` at check points.
pub fn a_coeffs(alpha: f64, order: usize, delta: f64) -> Result<LgCoefficients> {
    if !(0.0..1.0).contains(&alpha) {
        return Err(domain(format!("alpha must lie in [0, 1), got {alpha}")));
    }
    if order > MAX_ORDER {
        return Err(domain(format!(
            "LG order is capped at {MAX_ORDER}, got {order}"
        )));
    }
    if !(delta > 0.0 && delta < 1.0) {
        return Err(domain(format!("delta must lie in (0, 1), got {delta}")));
    }
    let z_max = 1.0 - delta;
    let probe: Vec<f64> = (0..=40).map(|k| z_max * k as f64 / 40.0).collect();
    let mut n = BASE_NODES;
    let mut coarse = build_integrals(alpha, z_max, order, n);
    loop {
        let fine = build_integrals(alpha, z_max, order, 2 * n);
        let mut resid = 0.0f64;
        for &z in &probe {
            let a = local_jets(alpha, z, order, &coarse);
            let b = local_jets(alpha, z, order, &fine);
            for (x, y) in a.iter().zip(&b) {
                let scale = y.value().abs().max(1.0);
                resid = resid.max((x.value() - y.value()).abs() / scale);
            }
        }
        if resid.is_nan() {
            return Err(Error::Conditioning("non-finite LG coefficient".into()));
        }
        if resid <= GRID_TOL {
            return Ok(LgCoefficients {
                alpha,
                z_max,
                order,
                integrals: coarse,
                integration_constants: vec![0.0; order],
                nodes: n,
                grid_residual: resid,
            });
        }
        if 2 * n >= MAX_NODES {
            return Err(Error::Conditioning(format!(
                "LG coefficients unresolved on {} nodes (residual {resid:.1e})",
                2 * n
            )));
        }
        n *= 2;
        coarse = fine;
    }
}

/// Phase and amplitude of the LG leading term, composed from C₁, ξ and the
/// Y-transform factors:
/// `r(c1 + ξ - log z + α log(1-z))` and `h^{-1/4} z^{-1/2} (1-z)^{-1/2}`.
pub fn lg_leading_parts(alpha: f64, z: f64) -> Result<(DD, DD)> {
    let zz = DD::from_f64(z);
    let phase =
        c1_phase_dd(alpha) + xi_dd(alpha, z)? - zz.ln() + DD::from_f64(alpha) * (1.0 - zz).ln();
    let o = ode_dd(DD::from_f64(alpha), zz);
    let amp = (o.h.sqrt().sqrt() * (zz * (1.0 - zz)).sqrt()).recip();
    Ok((phase, amp))
}

/// The LG expansion with `order - 1` correction terms A_j(z)/(ir)^j.
pub fn lg_evaluate(p: &EvalPoint, order: usize) -> Result<ExpansionResult> {
    lg_evaluate_with(p, order, DEFAULT_DELTA)
}

pub fn lg_evaluate_with(p: &EvalPoint, order: usize, delta: f64) -> Result<ExpansionResult> {
    if order == 0 {
        return Err(domain("expansion order must be at least 1"));
    }
    if order > MAX_ORDER {
        return Err(domain(format!(
            "LG order is capped at {MAX_ORDER}, got {order}"
        )));
    }
    if p.z > 1.0 - delta {
        return Err(regime(format!(
            "LG branch needs z <= 1 - delta = {}, got {}",
            1.0 - delta,
            p.z
        )));
    }
    let main = if p.z == 0.0 {
        ComplexValue::one(crate::numerics::Precision::Extended)
    } else {
        let (phase, amp) = lg_leading_parts(p.alpha, p.z)?;
        ComplexValue::extended(cdd::expi(phase * DD::from_f64(p.r)) * amp)
    };
    // A_order is not summed; it feeds the remainder estimate
    let coeffs = a_coeffs(p.alpha, order, delta)?;
    let ir = Complex64::new(0.0, p.r);
    let term = |j: usize| Complex64::from(coeffs.a(j, p.z)) / ir.powu(j as u32);
    let corrections: Vec<Complex64> = (1..order).map(term).collect();
    let omitted = Some(term(order));
    Ok(ExpansionResult::assemble(
        Branch::LG,
        main,
        order,
        corrections,
        omitted,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lambda_simplified(alpha: f64, z: f64) -> f64 {
        // the numerator collapses to z(1-z)((1-α⁴)z + 4α² - 1) times D⁵
        let p = 1.0 - (1.0 - alpha * alpha) * z;
        ((1.0 - alpha.powi(4)) * z + 4.0 * alpha * alpha - 1.0) / (32.0 * p.powf(2.5))
    }

    #[test]
    fn closed_form_derivatives_match_differences() {
        let (a, z) = (0.1, 0.4);
        let h = |z: f64| ode_data(a, z).unwrap().h_val;
        let o = ode_data(a, z).unwrap();
        let e = 1e-6;
        let d1 = (h(z + e) - h(z - e)) / (2.0 * e);
        let d2 = (h(z + e) - 2.0 * h(z) + h(z - e)) / (e * e);
        assert!((o.h_prime - d1).abs() <= 1e-9 * o.h_prime.abs());
        assert!((o.h_second - d2).abs() <= 1e-5 * o.h_second.abs());
    }

    #[test]
    fn ode_signs() {
        for k in 1..20 {
            let z = k as f64 / 20.0;
            let o = ode_data(0.1, z).unwrap();
            assert!(o.h_val > 0.0 && o.g_val < 0.0);
        }
    }

    #[test]
    fn lambda_matches_simplified_form() {
        for &a in &[0.0, 0.05, 0.1, 0.5] {
            for k in 1..19 {
                let z = k as f64 / 20.0;
                let got = lambda_fn(a, z).unwrap();
                let want = lambda_simplified(a, z);
                assert!(
                    (got - want).abs() <= 1e-12 * want.abs().max(1e-3),
                    "({a},{z})"
                );
            }
        }
    }

    #[test]
    fn lambda_continuous_on_grid() {
        let mut prev = lambda_fn(0.1, 0.05).unwrap();
        for k in 1..=85 {
            let z = 0.05 + k as f64 * 0.01;
            let v = lambda_fn(0.1, z).unwrap();
            assert!(v.is_finite() && (v - prev).abs() < 0.05, "z={z}");
            prev = v;
        }
    }

    #[test]
    fn xi_at_alpha_zero() {
        let z = 0.3;
        let want = -2.0 * (1.0 + (1.0f64 - z).sqrt()).ln() + z.ln();
        assert!((xi(0.0, z).unwrap() - want).abs() < 1e-15);
        // ξ → 0 as z → 1 when α = 0
        assert!(xi(0.0, 1.0 - 1e-12).unwrap().abs() < 1e-5);
    }

    #[test]
    fn xi_derivative_is_sqrt_h() {
        let (a, z) = (0.1, 0.3);
        let e = 1e-6;
        let d = (xi(a, z + e).unwrap() - xi(a, z - e).unwrap()) / (2.0 * e);
        let want = ode_data(a, z).unwrap().h_val.sqrt();
        assert!((d - want).abs() <= 1e-8 * want);
    }

    #[test]
    fn a0_is_one_and_normalized() {
        let c = a_coeffs(0.05, 3, 0.1).unwrap();
        assert_eq!(c.a(0, 0.37), 1.0);
        for j in 1..=3 {
            assert!(c.a(j, 0.0).abs() < 1e-14, "A_{j}(0)");
        }
    }

    #[test]
    fn a1_is_integral_of_lambda() {
        let c = a_coeffs(0.05, 1, 0.1).unwrap();
        let gl = crate::numerics::quad::GaussLegendre::new(40);
        let want: f64 = gl.integrate(0.0, 0.5, |z| lambda_simplified(0.05, z));
        assert!((c.a(1, 0.5) - want).abs() < 1e-13);
        assert!((c.a(1, 0.5) + 0.0254327).abs() < 1e-6);
    }

    #[test]
    fn order_cap_and_regime() {
        let p = EvalPoint::new(100.0, 0.1, 0.95).unwrap();
        assert!(matches!(lg_evaluate(&p, 1), Err(Error::Regime(_))));
        let p = EvalPoint::new(100.0, 0.1, 0.5).unwrap();
        assert!(lg_evaluate(&p, 5).is_err());
        assert!(lg_evaluate(&p, 4).is_ok());
    }

    #[test]
    fn origin_is_one() {
        let p = EvalPoint::new(100.0, 0.1, 0.0).unwrap();
        let v = lg_evaluate(&p, 3).unwrap();
        assert!((v.value.to_c64() - 1.0).norm() < 1e-14);
    }
}
