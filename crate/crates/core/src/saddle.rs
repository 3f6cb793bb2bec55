//! Saddle-point evaluation of the Euler integral
//! `∫₀¹ y^{-1/4}(1-y)^{-3/4}(1-zy)^{-1/4} e^{ir f(α,y)} dy`
//! about the interior saddle y₋, times the gamma-ratio prefactor.

use num_complex::Complex64;

use crate::error::{domain, regime, Error, Result};
use crate::evaluator::{product_terms, Branch, ExpansionResult};
use crate::numerics::{cdd, ComplexValue, GammaProductSeries, SeriesJet, DD};
use crate::phase::radicand;
use crate::point::EvalPoint;

/// y₋ must stay this far from both ends of (0, 1).
pub const INTERIOR_EPS: f64 = 1e-3;
pub const MAX_ORDER: usize = 8;
/// The gamma prefactor is only expanded for r at least this large.
pub const MIN_R: f64 = 10.0;

/// Closed-form data at the saddle y₋.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SaddleData {
    pub y_minus: f64,
    pub y_plus: f64,
    pub f_at: f64,
    /// ∂²f/∂y² at y₋; strictly negative.
    pub f_second: f64,
    /// y^{-1/4}(1-y)^{-3/4}(1-zy)^{-1/4} at y₋.
    pub amp_factor: f64,
}

fn check_alpha(alpha: f64) -> Result<()> {
    if !(0.0..1.0).contains(&alpha) {
        return Err(domain(format!("alpha must lie in [0, 1), got {alpha}")));
    }
    Ok(())
}

/// √(1-(1-α²)z), erroring on a negative radicand.
fn root_s(alpha: f64, z: f64) -> Result<DD> {
    let p = radicand(DD::from_f64(alpha), DD::from_f64(z));
    if p.is_sign_negative() {
        return Err(domain(format!(
            "1-(1-alpha^2)z < 0 at (alpha, z) = ({alpha}, {z})"
        )));
    }
    Ok(p.sqrt())
}

/// (y₋, y₊) in double-word. y₋ uses `(1-α)/(1+S)`, the same number as
/// `(1-S)/((1+α)z)` without the cancellation at small z.
pub fn saddle_points_dd(alpha: f64, z: f64) -> Result<(DD, DD)> {
    check_alpha(alpha)?;
    if !(z > 0.0 && z <= 1.0) {
        return Err(domain(format!(
            "saddle points need 0 < z <= 1 (they escape to infinity at z = 0), got {z}"
        )));
    }
    let s = root_s(alpha, z)?;
    let a = DD::from_f64(alpha);
    let y_minus = (1.0 - a) / (1.0 + s);
    let y_plus = (1.0 + s) / ((1.0 + a) * z);
    Ok((y_minus, y_plus))
}

pub fn saddle_points(alpha: f64, z: f64) -> Result<(f64, f64)> {
    let (m, p) = saddle_points_dd(alpha, z)?;
    Ok((m.to_f64(), p.to_f64()))
}

/// f(α, y) = (1-α) log y + (1+α) log(1-y) - (1-α) log(1-zy).
pub fn phase_f_dd(alpha: f64, y: DD, z: DD) -> Result<DD> {
    let zy = z * y;
    if !(y > 0.0 && y < 1.0) || !(zy < 1.0) {
        return Err(domain(format!(
            "f(alpha, y) needs 0 < y < 1 and zy < 1, got y = {}, zy = {}",
            y.to_f64(),
            zy.to_f64()
        )));
    }
    let a = DD::from_f64(alpha);
    Ok((1.0 - a) * y.ln() + (1.0 + a) * (1.0 - y).ln() - (1.0 - a) * (1.0 - zy).ln())
}

pub fn phase_f(alpha: f64, y: f64, z: f64) -> Result<f64> {
    phase_f_dd(alpha, DD::from_f64(y), DD::from_f64(z)).map(DD::to_f64)
}

/// ∂f/∂y; zero at both saddles.
pub fn phase_f_prime(alpha: f64, y: f64, z: f64) -> f64 {
    (1.0 - alpha) / y - (1.0 + alpha) / (1.0 - y) + (1.0 - alpha) * z / (1.0 - z * y)
}

/// `(1-α)log(1-α²) - 2log(1+S) + 2α log(α+S)`.
pub fn f_at_saddle_dd(alpha: f64, z: f64) -> Result<DD> {
    let s = root_s(alpha, z)?;
    let a = DD::from_f64(alpha);
    let mut f = (1.0 - a) * (-a.sqr()).ln_1p() - (1.0 + s).ln() * 2.0;
    if alpha > 0.0 {
        f += a * (a + s).ln() * 2.0;
    }
    Ok(f)
}

/// `-2(1+α)(1+S)²S / ((1-α)(α+S)²)`.
pub fn f_second_closed_dd(alpha: f64, z: f64) -> Result<DD> {
    let s = root_s(alpha, z)?;
    let a = DD::from_f64(alpha);
    Ok(-((1.0 + a) * (1.0 + s).sqr() * s) / ((1.0 - a) * (a + s).sqr()) * 2.0)
}

/// `(1+α)^{1/4}(1+S) / ((1-α)^{1/4}(α+S))`.
pub fn amp_factor_closed_dd(alpha: f64, z: f64) -> Result<DD> {
    let s = root_s(alpha, z)?;
    let a = DD::from_f64(alpha);
    let q = ((1.0 + a) / (1.0 - a)).sqrt().sqrt();
    Ok(q * (1.0 + s) / (a + s))
}

/// The amplitude factor recomputed from y₋ directly.
pub fn amp_factor_direct_dd(alpha: f64, z: f64) -> Result<DD> {
    let (y, _) = saddle_points_dd(alpha, z)?;
    let zz = DD::from_f64(z);
    let quarter = |x: DD| x.sqrt().sqrt();
    let one_m_y = 1.0 - y;
    Ok((quarter(y) * quarter(one_m_y).powi(3) * quarter(1.0 - zz * y)).recip())
}

pub fn saddle_closed_forms(alpha: f64, z: f64) -> Result<SaddleData> {
    let (ym, yp) = saddle_points_dd(alpha, z)?;
    let y_minus = ym.to_f64();
    if !(y_minus > INTERIOR_EPS && y_minus < 1.0 - INTERIOR_EPS) {
        return Err(regime(format!(
            "saddle y- = {y_minus} is within {INTERIOR_EPS} of an endpoint; use the temme branch"
        )));
    }
    let data = SaddleData {
        y_minus,
        y_plus: yp.to_f64(),
        f_at: f_at_saddle_dd(alpha, z)?.to_f64(),
        f_second: f_second_closed_dd(alpha, z)?.to_f64(),
        amp_factor: amp_factor_closed_dd(alpha, z)?.to_f64(),
    };
    debug_assert!(data.f_second < 0.0);
    debug_assert!(z >= 1.0 || data.y_plus > 1.0);
    Ok(data)
}

/// `2log2 - (1+α)log(1+α) - (1-α)log(1-α)`: the r-coefficient of the
/// gamma ratio's phase.
pub fn gamma_phase_dd(alpha: f64) -> DD {
    let a = DD::from_f64(alpha);
    DD::LN_2 * 2.0 - (1.0 + a) * a.ln_1p() - (1.0 - a) * (-a).ln_1p()
}

fn gamma_series(alpha: f64, terms: usize) -> GammaProductSeries {
    GammaProductSeries::new(
        &[
            (1.0, 2.0, 1),
            (0.75, 1.0 - alpha, -1),
            (0.25, 1.0 + alpha, -1),
        ],
        terms,
    )
}

/// Large-r form of Γ(1+2ir) / (Γ(3/4+ir(1-α)) Γ(1/4+ir(1+α))):
/// `(1+α)^{1/4}√r / ((1-α)^{1/4}√π) · e^{πi/4 + ir·gamma_phase} · (1 + Σ c_j/r^j)`.
pub fn gamma_prefactor(p: &EvalPoint, order: usize) -> Result<ExpansionResult> {
    if order == 0 {
        return Err(domain("expansion order must be at least 1"));
    }
    if p.r < MIN_R {
        return Err(domain(format!(
            "gamma prefactor needs r >= {MIN_R}, got {}",
            p.r
        )));
    }
    let a = DD::from_f64(p.alpha);
    let modulus = ((1.0 + a) / (1.0 - a)).sqrt().sqrt() * (DD::from_f64(p.r) / DD::PI).sqrt();
    let theta = DD::FRAC_PI_4 + gamma_phase_dd(p.alpha) * p.r;
    let main = ComplexValue::extended(cdd::expi(theta) * modulus);
    let terms = gamma_series(p.alpha, order).correction_terms(p.r);
    Ok(ExpansionResult::assemble(
        Branch::Saddle,
        main,
        order,
        terms[..order - 1].to_vec(),
        terms.last().copied(),
    ))
}

/// Phase (per unit r) of the leading saddle term: f(α, y₋) from the
/// literal three-log form plus the gamma phase. Equals 2·l₁(α, z).
pub fn saddle_phase_dd(alpha: f64, z: f64) -> Result<DD> {
    let (ym, _) = saddle_points_dd(alpha, z)?;
    Ok(phase_f_dd(alpha, ym, DD::from_f64(z))? + gamma_phase_dd(alpha))
}

/// amp_factor · √(2π/(r|f″|)) · (1+α)^{1/4}√r/((1-α)^{1/4}√π); r cancels.
/// Equals (1-(1-α²)z)^{-1/4}.
pub fn saddle_amplitude_dd(alpha: f64, z: f64) -> Result<DD> {
    let g = amp_factor_closed_dd(alpha, z)?;
    let f2 = f_second_closed_dd(alpha, z)?.abs();
    let a = DD::from_f64(alpha);
    let gamma_mod = ((1.0 + a) / (1.0 - a)).sqrt().sqrt() / DD::PI.sqrt();
    Ok(g * (DD::TAU / f2).sqrt() * gamma_mod)
}

/// Coefficients d_k (k = 1..=k_max) of the relative corrections d_k/r^k of
/// the saddle integral, from exact Taylor jets of f and the amplitude at y₋.
///
/// With f - f(y₋) = c₂w² (c₂ = f″/2), the integral becomes
/// `e^{irf(y₋)} ∫ G(w) e^{irc₂w²} dw`, `G = g(y(w)) dy/dw`, and the even
/// moments give `d_k = (G_{2k}/G₀) (1/2)_k (-2i/|f″|)^k`.
pub fn saddle_coefficients(alpha: f64, z: f64, k_max: usize) -> Result<Vec<Complex64>> {
    let data = saddle_closed_forms(alpha, z)?;
    let y = data.y_minus;
    let len = 2 * k_max + 3;
    let ln = |c: f64, slope: f64| SeriesJet::ln_affine(y, c, slope, len);
    let f = &(&ln(y, 1.0).scale(1.0 - alpha) + &ln(1.0 - y, -1.0).scale(1.0 + alpha))
        - &ln(1.0 - z * y, -z).scale(1.0 - alpha);
    let c2 = f.coeffs[2];
    if !(c2 < 0.0) {
        return Err(Error::Conditioning(format!(
            "f'' at the saddle is not negative: {}",
            2.0 * c2
        )));
    }
    // Φ(u) = (f - f₀)/(c₂u²), Φ(0) = 1
    let phi = SeriesJet::new(0.0, f.coeffs[2..].iter().map(|c| c / c2).collect());
    let mut wc = vec![0.0];
    wc.extend(phi.sqrt().coeffs);
    let u_of_w = SeriesJet::new(0.0, wc).revert();
    let pw = |c: f64, slope: f64, e: f64| SeriesJet::pow_affine(y, c, slope, e, len - 1);
    let g = &(&pw(y, 1.0, -0.25) * &pw(1.0 - y, -1.0, -0.75)) * &pw(1.0 - z * y, -z, -0.25);
    let big_g = &g.compose(&u_of_w) * &u_of_w.derivative();
    let g0 = big_g.coeffs[0];
    let step = Complex64::new(0.0, -2.0 / data.f_second.abs());
    let mut poch = 1.0;
    let mut out = Vec::with_capacity(k_max);
    for k in 1..=k_max {
        poch *= k as f64 - 0.5;
        let gk = big_g.coeff(2 * k) / g0;
        out.push(gk * poch * step.powu(k as u32));
    }
    Ok(out)
}

/// The leading saddle term e^{ir(f(y₋) + gamma phase)} · amplitude.
pub fn saddle_main_term(alpha: f64, z: f64, r: f64) -> Result<ComplexValue> {
    let phase = saddle_phase_dd(alpha, z)?;
    let amp = saddle_amplitude_dd(alpha, z)?;
    Ok(ComplexValue::extended(
        cdd::expi(phase * DD::from_f64(r)) * amp,
    ))
}

/// Saddle expansion with `order - 1` correction orders (saddle integral
/// and gamma ratio multiplied out order by order).
pub fn saddle_evaluate(p: &EvalPoint, order: usize) -> Result<ExpansionResult> {
    if order == 0 {
        return Err(domain("expansion order must be at least 1"));
    }
    if order > MAX_ORDER {
        return Err(domain(format!(
            "saddle order is capped at {MAX_ORDER}, got {order}"
        )));
    }
    if p.r < MIN_R {
        return Err(regime(format!(
            "saddle branch needs r >= {MIN_R}, got {}",
            p.r
        )));
    }
    saddle_closed_forms(p.alpha, p.z)?;
    let main = saddle_main_term(p.alpha, p.z, p.r)?;
    let d = saddle_coefficients(p.alpha, p.z, order)?;
    let integral_terms: Vec<Complex64> = d
        .iter()
        .enumerate()
        .map(|(j, c)| c / p.r.powi(j as i32 + 1))
        .collect();
    let gamma_terms = gamma_series(p.alpha, order).correction_terms(p.r);
    let all = product_terms(&integral_terms, &gamma_terms);
    Ok(ExpansionResult::assemble(
        Branch::Saddle,
        main,
        order,
        all[..order - 1].to_vec(),
        all.last().copied(),
    ))
}
