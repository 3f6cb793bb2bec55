//! The z → 1 route: after the double transformation the function becomes a
//! gamma ratio times `∫₀^∞ e^{2ir(-x + α log q(x))} dx/√q(x)`, which is put in
//! the canonical form `∫ e^{-w(t - α log t)} f(t) dt/t` (w = 2ir) and expanded
//! by repeated integration by parts about t = α.
//!
//! The integration variable of that canonical form is called `t` below; the
//! spectral parameter αr is always written `alpha * r`.

use num_complex::Complex64;

use crate::error::{domain, regime, Error, Result};
use crate::evaluator::{product_terms, Branch, ExpansionResult};
use crate::numerics::{cdd, ComplexValue, GammaProductSeries, SeriesJet, DD};
use crate::phase::radicand;
use crate::point::EvalPoint;

/// Highest expansion order (number of ladder terms summed).
pub const MAX_ORDER: usize = 3;
/// Highest f̃_k available; f̃_3 only feeds the remainder estimate.
pub const MAX_LADDER: usize = 3;
pub const MIN_Z: f64 = 0.5;
/// The branch claims nothing below αr = 1.
pub const MIN_ALPHA_R: f64 = 1.0;
/// Stencil step as a fraction of α.
pub const STEP_FACTOR: f64 = 1e-3;
pub const STENCIL_HALF: i32 = 6;
const JET_TOL: f64 = 1e-6;

/// Per-point constants of the transformed integral.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TemmeContext {
    pub alpha: f64,
    pub z: f64,
    pub r: f64,
    /// Y = (1-√(1-z))/(2√(1-z)).
    pub big_y: f64,
    /// w = 2ir.
    pub w: ComplexValue,
    /// λ = αw = 2iαr.
    pub lambda_p: ComplexValue,
    pub x0: f64,
    pub a_alpha: f64,
    pub dtdx_at_x0: f64,
    y_dd: DD,
    x0_dd: DD,
    a_dd: DD,
    dtdx_dd: DD,
}

fn check_alpha_z(alpha: f64, z: f64) -> Result<()> {
    if !(alpha > 0.0 && alpha < 1.0) || !(z > 0.0 && z < 1.0) {
        return Err(domain(format!(
            "temme branch needs 0 < alpha < 1 and 0 < z < 1, got ({alpha}, {z})"
        )));
    }
    Ok(())
}

/// Y = (1-√(1-z))/(2√(1-z)), written as z/(2√(1-z)(1+√(1-z))).
pub fn big_y_dd(z: f64) -> DD {
    let s1 = (1.0 - DD::from_f64(z)).sqrt();
    DD::from_f64(z) / (s1 * (1.0 + s1) * 2.0)
}

/// q(x) = (1-e^{-x})((Y+1)e^x - Y).
pub fn q_dd(x: DD, y: DD) -> DD {
    -(-x).exp_m1() * ((y + 1.0) * x.exp() - y)
}

/// q′(x) = (Y+1)e^x - Y e^{-x}.
pub fn q_prime_dd(x: DD, y: DD) -> DD {
    (y + 1.0) * x.exp() - y * (-x).exp()
}

/// q″(x) = (Y+1)e^x + Y e^{-x}.
pub fn q_second_dd(x: DD, y: DD) -> DD {
    (y + 1.0) * x.exp() + y * (-x).exp()
}

pub fn q_fn(x: f64, big_y: f64) -> f64 {
    q_dd(DD::from_f64(x), DD::from_f64(big_y)).to_f64()
}

pub fn q_prime(x: f64, big_y: f64) -> f64 {
    q_prime_dd(DD::from_f64(x), DD::from_f64(big_y)).to_f64()
}

pub fn q_second(x: f64, big_y: f64) -> f64 {
    q_second_dd(DD::from_f64(x), DD::from_f64(big_y)).to_f64()
}

/// x₀ = log((1+√(1-(1-α²)z)) / ((1-α)(1+√(1-z)))), the root of q = αq′.
pub fn temme_saddle_dd(alpha: f64, z: f64) -> Result<DD> {
    check_alpha_z(alpha, z)?;
    let a = DD::from_f64(alpha);
    let zz = DD::from_f64(z);
    let s = radicand(a, zz).sqrt();
    let s1 = (1.0 - zz).sqrt();
    Ok(((1.0 + s) / ((1.0 - a) * (1.0 + s1))).ln())
}

pub fn temme_saddle(alpha: f64, z: f64) -> Result<f64> {
    temme_saddle_dd(alpha, z).map(DD::to_f64)
}

impl TemmeContext {
    pub fn new(r: f64, alpha: f64, z: f64) -> Result<Self> {
        check_alpha_z(alpha, z)?;
        let a = DD::from_f64(alpha);
        let y = big_y_dd(z);
        let x0 = temme_saddle_dd(alpha, z)?;
        let q0 = q_dd(x0, y);
        let a_dd = x0 - a * q0.ln() - a + a * a.ln();
        let dtdx = (1.0 - a.sqr() * q_second_dd(x0, y) / q0).sqrt();
        if !(dtdx > 0.0 && dtdx <= 1.0) {
            return Err(Error::Conditioning(format!(
                "dt/dx at the saddle is {} (expected in (0, 1])",
                dtdx.to_f64()
            )));
        }
        debug_assert!(z <= 0.9985 || y > 10.0);
        Ok(TemmeContext {
            alpha,
            z,
            r,
            big_y: y.to_f64(),
            w: ComplexValue::extended(cdd::imag(DD::from_f64(r) * 2.0)),
            lambda_p: ComplexValue::extended(cdd::imag(DD::mul_f64_exact(alpha, r) * 2.0)),
            x0: x0.to_f64(),
            a_alpha: a_dd.to_f64(),
            dtdx_at_x0: dtdx.to_f64(),
            y_dd: y,
            x0_dd: x0,
            a_dd,
            dtdx_dd: dtdx,
        })
    }

    pub fn from_point(p: &EvalPoint) -> Result<Self> {
        Self::new(p.r, p.alpha, p.z)
    }

    pub fn x0_dd(&self) -> DD {
        self.x0_dd
    }

    /// q(x₀) - α²q″(x₀).
    pub fn amplitude_radicand_dd(&self) -> DD {
        let a = DD::from_f64(self.alpha);
        q_dd(self.x0_dd, self.y_dd) - a.sqr() * q_second_dd(self.x0_dd, self.y_dd)
    }
}

/// q, q - q(x₀) and q - αq′ at x₀ + v. Near the saddle the differences
/// are formed from expm1 so that they keep full relative accuracy.
struct Shifted {
    q: DD,
    dq: DD,
    g: DD,
}

impl TemmeContext {
    fn shifted(&self, v: DD) -> Shifted {
        let a = DD::from_f64(self.alpha);
        let y = self.y_dd;
        let x = self.x0_dd + v;
        if v.abs() < self.x0_dd * 0.5 {
            // q = (Y+1)e^x + Ye^{-x} - (2Y+1)
            let up = (y + 1.0) * self.x0_dd.exp() * v.exp_m1();
            let down = y * (-self.x0_dd).exp() * (-v).exp_m1();
            let q0 = q_dd(self.x0_dd, y);
            let dq = up + down;
            // q(x₀) - αq′(x₀) = 0 by construction of x₀
            let g = up * (1.0 - a) + down * (1.0 + a);
            Shifted { q: q0 + dq, dq, g }
        } else {
            let q = q_dd(x, y);
            Shifted {
                q,
                dq: q - q_dd(self.x0_dd, y),
                g: q - a * q_prime_dd(x, y),
            }
        }
    }

    /// φ(x₀+v) - φ(x₀) with φ(x) = x - α log q(x).
    fn phi_diff(&self, v: DD, sh: &Shifted) -> DD {
        let q0 = q_dd(self.x0_dd, self.y_dd);
        let ratio = if v.abs() < self.x0_dd * 0.5 {
            (sh.dq / q0).ln_1p()
        } else {
            (sh.q / q0).ln()
        };
        v - DD::from_f64(self.alpha) * ratio
    }
}

/// ψ(t) - ψ(α) = (t-α) - α log(1 + (t-α)/α), with ψ(t) = t - α log t + A.
fn psi_diff(alpha: DD, t: DD) -> DD {
    let u = t - alpha;
    u - alpha * (u / alpha).ln_1p()
}

/// Offset v = x(t) - x₀, solving φ(x₀+v) - φ(x₀) = ψ(t) - ψ(α) (the
/// defining relation `x - α log q(x) = t - α log t + A(α)` with A fixed so
/// that t = α maps to x₀). Newton's method, safeguarded by bisection in a
/// bracket on the correct side of the saddle.
pub fn transform_offset_dd(ctx: &TemmeContext, t: DD) -> Result<DD> {
    if !(t > 0.0) {
        return Err(domain(format!("x(t) needs t > 0, got {}", t.to_f64())));
    }
    let alpha = DD::from_f64(ctx.alpha);
    if t == alpha {
        return Ok(DD::ZERO);
    }
    let target = psi_diff(alpha, t);
    let g = |v: DD| ctx.phi_diff(v, &ctx.shifted(v)) - target;
    // g(0) = -target < 0 on both sides
    let (mut lo, mut hi) = if t < alpha {
        // φ decreases on (0, x₀]; walk the left end towards x = 0
        let mut gap = ctx.x0_dd * 0.5;
        let mut steps = 0;
        while g(-(ctx.x0_dd - gap)) < 0.0 {
            gap *= 0.5;
            steps += 1;
            if steps > 1100 || gap.hi() == 0.0 {
                return Err(Error::Convergence(format!(
                    "x(t) bracket failed near 0 for t = {}",
                    t.to_f64()
                )));
            }
        }
        (-(ctx.x0_dd - gap), DD::ZERO)
    } else {
        let hi = ctx.x0_dd * 9.0 + 10.0;
        if g(hi) < 0.0 {
            return Err(Error::Convergence(format!(
                "x(t) not bracketed by [x0, 10 x0 + 10] for t = {}",
                t.to_f64()
            )));
        }
        (DD::ZERO, hi)
    };
    let g_lo_positive = g(lo) > 0.0;
    // quadratic start: ψ'' (α) = 1/α, φ''(x₀) = (q - α²q″)/(α q) at x₀
    let phi2 = ctx.amplitude_radicand_dd() / (alpha * q_dd(ctx.x0_dd, ctx.y_dd));
    let guess = ((t - alpha) / alpha.sqrt()) / phi2.sqrt();
    let mut v = if guess > lo && guess < hi {
        guess
    } else {
        (lo + hi) * 0.5
    };
    for _ in 0..400 {
        let sh = ctx.shifted(v);
        let gv = ctx.phi_diff(v, &sh) - target;
        if gv.hi() == 0.0 {
            return Ok(v);
        }
        if (gv > 0.0) == g_lo_positive {
            lo = v;
        } else {
            hi = v;
        }
        let d = sh.g / sh.q;
        let newton = v - gv / d;
        let next = if d.hi() != 0.0 && newton > lo && newton < hi {
            newton
        } else {
            (lo + hi) * 0.5
        };
        let step = (next - v).abs();
        v = next;
        let scale = v.abs().to_f64().max(f64::MIN_POSITIVE);
        if step.to_f64() <= 1e-31 * scale || (hi - lo).to_f64() <= 1e-32 * scale {
            return Ok(v);
        }
    }
    Err(Error::Convergence(format!(
        "x(t) did not converge for t = {}",
        t.to_f64()
    )))
}

pub fn variable_transform_dd(ctx: &TemmeContext, t: DD) -> Result<DD> {
    Ok(ctx.x0_dd + transform_offset_dd(ctx, t)?)
}

pub fn variable_transform(ctx: &TemmeContext, t: f64) -> Result<f64> {
    variable_transform_dd(ctx, DD::from_f64(t)).map(DD::to_f64)
}

/// f(t) = (t/√q(x)) dx/dt with dx/dt = q(x)(t-α)/(t(q(x)-αq′(x))); at t = α
/// the limit α/(√q(x₀)·(dt/dx)(x₀)) is used.
pub fn f_of_t_dd(ctx: &TemmeContext, t: DD) -> Result<DD> {
    let alpha = DD::from_f64(ctx.alpha);
    if t == alpha {
        let q0 = q_dd(ctx.x0_dd, ctx.y_dd);
        return Ok(alpha / (q0.sqrt() * ctx.dtdx_dd));
    }
    let v = transform_offset_dd(ctx, t)?;
    let sh = ctx.shifted(v);
    let dxdt = sh.q * (t - alpha) / (t * sh.g);
    Ok(t / sh.q.sqrt() * dxdt)
}

pub fn f_of_t(ctx: &TemmeContext, t: f64) -> Result<f64> {
    f_of_t_dd(ctx, DD::from_f64(t)).map(DD::to_f64)
}

/// Finite-difference weights (Fornberg's recursion) for derivatives
/// 0..=m at 0 on the nodes `xs`; `w[k][j]` multiplies f(xs[j]).
fn fornberg(xs: &[DD], m: usize) -> Vec<Vec<DD>> {
    let n = xs.len();
    let mut c = vec![vec![DD::ZERO; n]; m + 1];
    c[0][0] = DD::ONE;
    let mut c1 = DD::ONE;
    let mut c4 = xs[0];
    for i in 1..n {
        let mn = i.min(m);
        let mut c2 = DD::ONE;
        let c5 = c4;
        c4 = xs[i];
        for j in 0..i {
            let c3 = xs[i] - xs[j];
            c2 *= c3;
            if j == i - 1 {
                for k in (1..=mn).rev() {
                    c[k][i] = c1 * (c[k - 1][i - 1] * k as f64 - c5 * c[k][i - 1]) / c2;
                }
                c[0][i] = -c1 * c5 * c[0][i - 1] / c2;
            }
            for k in (1..=mn).rev() {
                c[k][j] = (c4 * c[k][j] - c[k - 1][j] * k as f64) / c3;
            }
            c[0][j] = c4 * c[0][j] / c3;
        }
        c1 = c2;
    }
    c
}

/// Taylor coefficients a_0..a_degree of f about t = α from a 13-point
/// central stencil with spacing `step`, all in double-word.
pub fn taylor_jet(ctx: &TemmeContext, degree: usize, step: f64) -> Result<SeriesJet> {
    let h = DD::from_f64(step);
    let alpha = DD::from_f64(ctx.alpha);
    let offsets: Vec<DD> = (-STENCIL_HALF..=STENCIL_HALF).map(DD::from).collect();
    let weights = fornberg(&offsets, degree);
    let values = offsets
        .iter()
        .map(|&o| f_of_t_dd(ctx, alpha + o * h))
        .collect::<Result<Vec<DD>>>()?;
    let mut coeffs = Vec::with_capacity(degree + 1);
    let mut scale = DD::ONE;
    for (k, wk) in weights.iter().enumerate() {
        if k > 0 {
            scale = scale * h * k as f64;
        }
        let d: DD = wk.iter().zip(&values).map(|(&w, &v)| w * v).sum();
        let a = (d / scale).to_f64();
        if !a.is_finite() {
            return Err(Error::Conditioning(format!(
                "Taylor coefficient a_{k} is not finite"
            )));
        }
        coeffs.push(a);
    }
    Ok(SeriesJet::new(ctx.alpha, coeffs))
}

/// f̃_0(α)..f̃_kmax(α) from a jet of f about α, via
/// `f̃_{k+1}(t) = t · d/dt[(f̃_k(t) - f̃_k(α))/(t - α)]` applied to jets.
pub fn ftilde_from_jet(jet: &SeriesJet, alpha: f64, k_max: usize) -> Vec<f64> {
    let mut out = vec![jet.value()];
    let mut g = jet.coeffs.clone();
    for _ in 0..k_max {
        if g.len() < 3 {
            break;
        }
        let next: Vec<f64> = (0..g.len() - 2)
            .map(|m| alpha * (m + 1) as f64 * g[m + 2] + m as f64 * g[m + 1])
            .collect();
        out.push(next[0]);
        g = next;
    }
    out
}

/// f̃_0(α)..f̃_kmax(α), kmax ≤ 3. The jet is rebuilt at twice the step and
/// the two ladders must agree to 1e-6 relative.
pub fn ftilde_ladder(ctx: &TemmeContext, k_max: usize) -> Result<Vec<f64>> {
    if k_max > MAX_LADDER {
        return Err(domain(format!("f~ ladder is capped at k = {MAX_LADDER}")));
    }
    let step = STEP_FACTOR * ctx.alpha;
    let degree = (2 * k_max).max(1);
    let fine = ftilde_from_jet(&taylor_jet(ctx, degree, step)?, ctx.alpha, k_max);
    let coarse = ftilde_from_jet(&taylor_jet(ctx, degree, 2.0 * step)?, ctx.alpha, k_max);
    for (k, (a, b)) in fine.iter().zip(&coarse).enumerate() {
        if (a - b).abs() > JET_TOL * a.abs().max(fine[0].abs()) {
            return Err(Error::Conditioning(format!(
                "f~_{k} unstable under step doubling: {a} vs {b}"
            )));
        }
    }
    Ok(fine)
}

/// Phase per unit r of the assembled leading term:
/// `-(1-α)log(1-z) - 2log(1+Y) - 2A(α) + 2(αlogα - α) - 2αlogα - 2(1-α)log(1-α)`,
/// collecting the prefactors, e^{-wA}, Γ(λ)/w^λ and the gamma ratio (their
/// ±π/4 cancel). Equals 2F(α, z).
pub fn assembled_phase_dd(ctx: &TemmeContext) -> DD {
    let a = DD::from_f64(ctx.alpha);
    let zz = DD::from_f64(ctx.z);
    let la = a.ln();
    -(1.0 - a) * (-zz).ln_1p() - (1.0 + ctx.y_dd).ln() * 2.0 - ctx.a_dd * 2.0 + (a * la - a) * 2.0
        - a * la * 2.0
        - (1.0 - a) * (-a).ln_1p() * 2.0
}

/// Modulus of the leading term:
/// `(1-z)^{-1/4} · √r/√π · √π/√(rα) · α/√(q(x₀) - α²q″(x₀))`.
pub fn assembled_amplitude_dd(ctx: &TemmeContext) -> DD {
    let a = DD::from_f64(ctx.alpha);
    let one_m_z = 1.0 - DD::from_f64(ctx.z);
    let f0 = a / ctx.amplitude_radicand_dd().sqrt();
    f0 / (one_m_z.sqrt().sqrt() * a.sqrt())
}

fn gamma_series(alpha: f64, terms: usize) -> GammaProductSeries {
    GammaProductSeries::new(
        &[
            (1.0, 2.0, 1),
            (0.0, 2.0 * alpha, 1),
            (0.5, 2.0 * alpha, -1),
            (0.5, 2.0 * (1.0 - alpha), -1),
        ],
        terms,
    )
}

/// The Temme expansion summing `order` ladder terms (order ≤ 3), with the
/// gamma factors' large-r corrections multiplied in order by order.
pub fn temme_evaluate(p: &EvalPoint, order: usize) -> Result<ExpansionResult> {
    if order == 0 {
        return Err(domain("expansion order must be at least 1"));
    }
    if order > MAX_ORDER {
        return Err(domain(format!(
            "temme order is capped at {MAX_ORDER}, got {order}"
        )));
    }
    if p.z < MIN_Z {
        return Err(regime(format!(
            "temme branch needs z >= {MIN_Z}, got {}",
            p.z
        )));
    }
    if p.alpha * p.r < MIN_ALPHA_R {
        return Err(regime(format!(
            "temme branch needs alpha*r >= {MIN_ALPHA_R}, got {}",
            p.alpha * p.r
        )));
    }
    let ctx = TemmeContext::from_point(p)?;
    let theta = assembled_phase_dd(&ctx) * DD::from_f64(p.r);
    let main = ComplexValue::extended(cdd::expi(theta) * assembled_amplitude_dd(&ctx));
    let ft = ftilde_ladder(&ctx, order)?;
    let w = Complex64::new(0.0, 2.0 * p.r);
    let ladder: Vec<Complex64> = (1..=order)
        .map(|k| Complex64::from(ft[k] / ft[0]) / w.powu(k as u32))
        .collect();
    let gamma = gamma_series(p.alpha, order).correction_terms(p.r);
    let all = product_terms(&ladder, &gamma);
    Ok(ExpansionResult::assemble(
        Branch::Temme,
        main,
        order,
        all[..order - 1].to_vec(),
        all.last().copied(),
    ))
}
