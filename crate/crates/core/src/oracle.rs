//! Reference values of F(r, α, z) = ₂F₁(1/4+iρ, 3/4+iρ; 1+2ir; z), ρ = r(1-α).
//!
//! Nothing here uses an asymptotic formula for F. Four routes:
//!
//! * the Gauss series at z, in double-word;
//! * the connection formula to 1 - z (two Gauss series at 1 - z);
//! * quadrature of the Laplace-type integral over x ∈ (0, ∞) obtained after
//!   the quadratic transformation (`eval_transformed`);
//! * quadrature of the Euler integral over y ∈ (0, 1).
//!
//! Series results for z > 1/2 are cross-checked by quadrature. When both
//! series lose too many digits to cancellation (large r), the two
//! quadratures check each other.

use std::f64::consts::{LN_2, PI};

use num_complex::{Complex, Complex64};

use crate::error::{domain, Error, Result};
use crate::numerics::dd::DD_EPSILON;
use crate::numerics::gamma::ln_gamma_dd;
use crate::numerics::quad::GaussLegendre;
use crate::numerics::{cdd, ComplexValue, CDD, DD};
use crate::point::EvalPoint;

/// Largest r the oracle accepts.
pub const MAX_R: f64 = 1000.0;
/// Largest z the oracle accepts.
pub const MAX_Z: f64 = 1.0 - 1e-6;
/// Every returned result is at least this accurate (relative).
pub const ACCURACY_TARGET: f64 = 1e-9;
/// Allowed disagreement between independent methods.
pub const AGREEMENT_TOL: f64 = 1e-8;
/// Series whose largest partial sum exceeds the result by more than this
/// factor are rejected.
pub const MAX_CANCELLATION: f64 = 1e21;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum OracleMethod {
    GaussSeries,
    TransformedSeries,
    QuadratureCrossCheck,
}

impl OracleMethod {
    pub fn name(self) -> &'static str {
        match self {
            OracleMethod::GaussSeries => "gauss-series",
            OracleMethod::TransformedSeries => "transformed-series",
            OracleMethod::QuadratureCrossCheck => "quadrature-cross-check",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OracleResult {
    pub value: ComplexValue,
    pub method: OracleMethod,
    /// Estimated relative error.
    pub est_accuracy: f64,
}

/// Outcome of a hypergeometric series summation.
#[derive(Clone, Copy, Debug)]
pub struct SeriesSum {
    pub value: CDD,
    pub terms: usize,
    /// max |partial sum| / |final sum|
    pub cancellation: f64,
    pub est_rel_error: f64,
}

/// Term cap for a series at argument `x`: 10⌈1/(1-x)⌉ + 10⁴.
pub fn term_cap(x: f64) -> usize {
    10 * (1.0 / (1.0 - x)).ceil() as usize + 10_000
}

fn cabs(z: CDD) -> f64 {
    Complex64::new(z.re.hi(), z.im.hi()).norm()
}

fn c_real(x: f64) -> CDD {
    cdd::real(DD::from_f64(x))
}

/// Σ (a)_n (b)_n / ((c)_n n!) xⁿ in double-word, with the term cap and the
/// cancellation guard.
pub fn gauss_series(a: CDD, b: CDD, c: CDD, x: DD) -> Result<SeriesSum> {
    let cap = term_cap(x.to_f64());
    let one = c_real(1.0);
    let mut term = one;
    let mut sum = one;
    let mut max_partial = 1.0f64;
    let mut small_run = 0;
    for n in 0..cap {
        let nn = c_real(n as f64);
        term = term * (a + nn) * (b + nn) / ((c + nn) * DD::from_f64((n + 1) as f64)) * x;
        sum = sum + term;
        let s = cabs(sum);
        max_partial = max_partial.max(s);
        if cabs(term) <= 1e-35 * s {
            small_run += 1;
            if small_run >= 3 {
                let cancellation = max_partial / s;
                if cancellation > MAX_CANCELLATION {
                    return Err(Error::Cancellation(format!(
                        "series lost {:.1} digits to cancellation",
                        cancellation.log10()
                    )));
                }
                let terms = n + 1;
                return Ok(SeriesSum {
                    value: sum,
                    terms,
                    cancellation,
                    est_rel_error: 4.0 * DD_EPSILON * cancellation * (terms as f64).sqrt(),
                });
            }
        } else {
            small_run = 0;
        }
    }
    Err(Error::Convergence(format!(
        "series at x = {} not converged after {cap} terms",
        x.to_f64()
    )))
}

struct Params {
    a: CDD,
    b: CDD,
    c: CDD,
}

fn params(p: &EvalPoint) -> Params {
    let rho = DD::from_f64(p.r) * (1.0 - DD::from_f64(p.alpha));
    let two_r = DD::from_f64(2.0 * p.r);
    Params {
        a: Complex::new(DD::from_f64(0.25), rho),
        b: Complex::new(DD::from_f64(0.75), rho),
        c: Complex::new(DD::ONE, two_r),
    }
}

fn lg(s: CDD) -> Result<CDD> {
    ln_gamma_dd(s)
}

/// The Gauss series at z.
pub fn eval_gauss_series(p: &EvalPoint) -> Result<(ComplexValue, f64)> {
    let Params { a, b, c } = params(p);
    let s = gauss_series(a, b, c, DD::from_f64(p.z))?;
    Ok((ComplexValue::extended(s.value), s.est_rel_error))
}

/// The connection formula to 1 - z. Needs α > 0, since c - a - b = 2irα.
pub fn eval_connection_series(p: &EvalPoint) -> Result<(ComplexValue, f64)> {
    if p.alpha == 0.0 {
        return Err(domain("connection formula is degenerate at alpha = 0"));
    }
    let Params { a, b, c } = params(p);
    let w = 1.0 - DD::from_f64(p.z);
    let one = c_real(1.0);
    let cab = c - a - b;
    let s1 = gauss_series(a, b, a + b - c + one, w)?;
    let s2 = gauss_series(c - a, c - b, cab + one, w)?;
    let l1 = lg(c)? + lg(cab)? - lg(c - a)? - lg(c - b)?;
    let l2 = cab * cdd::real(w.ln()) + lg(c)? + lg(-cab)? - lg(a)? - lg(b)?;
    let t1 = cdd::exp(l1) * s1.value;
    let t2 = cdd::exp(l2) * s2.value;
    let sum = t1 + t2;
    let cancel = (cabs(t1) + cabs(t2)) / cabs(sum);
    if cancel * s1.cancellation.max(s2.cancellation) > MAX_CANCELLATION {
        return Err(Error::Cancellation(
            "connection terms cancel beyond double-word reach".into(),
        ));
    }
    let est = cancel * (s1.est_rel_error + s2.est_rel_error + 64.0 * DD_EPSILON * 1e4);
    Ok((ComplexValue::extended(sum), est))
}

/// Oscillatory quadrature over [a, b]: panels no wider than a quarter of the
/// local wavelength divided by `refine`, `GL` nodes each. `freq` bounds the
/// phase derivative near a point.
fn oscillatory_panels(
    a: f64,
    b: f64,
    refine: f64,
    max_width: f64,
    gl: &GaussLegendre,
    freq: &dyn Fn(f64) -> f64,
    f: &dyn Fn(f64) -> Complex64,
) -> Result<Complex64> {
    let mut acc = Complex64::new(0.0, 0.0);
    let mut panels = 0usize;
    let mut comp = Complex64::new(0.0, 0.0);
    let mut x = a;
    while x < b {
        let width_at = |u: f64| (PI / (2.0 * freq(u).max(1.0))).min(max_width) / refine;
        let w0 = width_at(x);
        let w = w0.min(width_at((x + w0).min(b)));
        let hi = (x + w).min(b);
        panels += 1;
        if !(hi > x) || panels > MAX_PANELS {
            return Err(Error::Quadrature(format!(
                "panel cap reached on [{a}, {b}] near {x}"
            )));
        }
        let panel: Complex64 = gl.mapped(x, hi).map(|(u, wt)| f(u) * wt).sum();
        // Kahan summation keeps the panel total from drifting
        let y = panel - comp;
        let t = acc + y;
        comp = (t - acc) - y;
        acc = t;
        x = hi;
    }
    Ok(acc)
}

/// A set of segments integrated together, refined until stable.
struct Segment<'a> {
    a: f64,
    b: f64,
    max_width: f64,
    freq: &'a dyn Fn(f64) -> f64,
    f: &'a dyn Fn(f64) -> Complex64,
}

const GL_NODES: usize = 8;
const MAX_PANELS: usize = 4_000_000;
const MAX_REFINE: f64 = 8.0;

fn integrate_segments(segments: &[Segment<'_>], tol: f64) -> Result<(Complex64, f64)> {
    let gl = GaussLegendre::new(GL_NODES);
    let run = |refine: f64| -> Result<Complex64> {
        segments
            .iter()
            .map(|s| oscillatory_panels(s.a, s.b, refine, s.max_width, &gl, s.freq, s.f))
            .sum()
    };
    let mut refine = 1.0;
    let mut prev = run(refine)?;
    loop {
        refine *= 2.0;
        let next = run(refine)?;
        let est = (next - prev).norm() / next.norm();
        if est <= tol {
            // the finer value is typically far better than the difference
            return Ok((next, est));
        }
        if refine >= MAX_REFINE {
            return Err(Error::Quadrature(format!(
                "error estimate {est:.2e} above {tol:.0e} after refinement"
            )));
        }
        prev = next;
    }
}

fn check_point(p: &EvalPoint) -> Result<()> {
    if p.r > MAX_R {
        return Err(domain(format!("oracle accepts r <= {MAX_R}, got {}", p.r)));
    }
    if p.z > MAX_Z {
        return Err(domain(format!("oracle accepts z <= 1 - 1e-6, got {}", p.z)));
    }
    Ok(())
}

/// Reduces `k·s` (k, s doubles) modulo 2π using a double-word product.
fn reduced_product(k: f64, s: f64) -> f64 {
    let t = DD::mul_f64_exact(k, s);
    (t - DD::TAU * (t / DD::TAU).round()).to_f64()
}

/// The prefactor of the x-integral, as a double-word logarithm:
/// (1-z)^{-1/4-iρ} (1+Y)^{-2ir} Γ(1+2ir) / (Γ(1/2+2irα) Γ(1/2+2ir(1-α))).
fn transformed_prefactor_ln(p: &EvalPoint) -> Result<CDD> {
    let r = DD::from_f64(p.r);
    let al = DD::from_f64(p.alpha);
    let w = 1.0 - DD::from_f64(p.z);
    let sw = w.sqrt();
    let one_plus_y = (1.0 + sw) / (sw * 2.0);
    let rho = r * (1.0 - al);
    let lw = w.ln();
    let pre =
        Complex::new(lw * -0.25, -rho * lw) + Complex::new(DD::ZERO, -(r * 2.0) * one_plus_y.ln());
    let g = lg(Complex::new(DD::ONE, r * 2.0))?
        - lg(Complex::new(DD::HALF, r * al * 2.0))?
        - lg(Complex::new(DD::HALF, r * (1.0 - al) * 2.0))?;
    Ok(pre + g)
}

/// F via quadrature of ∫₀^∞ e^{2ir(-x+α log q(x))} q(x)^{-1/2} dx,
/// q(x) = (1-e^{-x})((Y+1)eˣ - Y), with its gamma prefactor.
/// Returns the value and the estimated relative error.
pub fn eval_transformed_with_estimate(p: &EvalPoint) -> Result<(ComplexValue, f64)> {
    check_point(p)?;
    if p.z == 0.0 {
        return Ok((ComplexValue::one(crate::numerics::Precision::Extended), 0.0));
    }
    let r = p.r;
    let al = p.alpha;
    let sw = (1.0 - p.z).sqrt();
    let y = (1.0 - sw) / (2.0 * sw);
    // q/x on (0, 1], and log q - x for x >= 1; both free of overflow
    let q_over_x = |x: f64| (-(-x).exp_m1() / x) * (1.0 + (y + 1.0) * x.exp_m1());
    let q_prime_over_q = |x: f64| {
        let em = (-x).exp();
        let num = (y + 1.0) - y * em * em;
        let den = (-(-x).exp_m1()) * ((y + 1.0) - y * em);
        num / den
    };
    let two_r = 2.0 * r;
    let two_ra = 2.0 * r * al;
    let kappa = 2.0 * r * (1.0 - al);

    // x = e^{-s}, s in [0, S): dx = x ds, integrand √x (q/x)^{-1/2} e^{iθ}
    let f_s = |s: f64| {
        let x = (-s).exp();
        let qx = q_over_x(x);
        let theta = -two_r * x - reduced_product(two_ra, s) + two_ra * qx.ln();
        Complex64::from_polar(x.sqrt() / qx.sqrt(), theta)
    };
    let freq_s = |s: f64| {
        let x = (-s).exp();
        two_r * x * (-1.0 + al * q_prime_over_q(x)).abs() + two_ra
    };
    // x in [1, X): log q = x + log(Y+1 - Y e^{-x}) + log1p(-e^{-x})
    let f_x = |x: f64| {
        let em = (-x).exp();
        let lrest = ((y + 1.0) - y * em).ln() + (-em).ln_1p();
        let theta = -reduced_product(kappa, x) + two_ra * lrest;
        let lq = x + lrest;
        Complex64::from_polar((-0.5 * lq).exp(), theta)
    };
    let freq_x = |x: f64| two_r * (-1.0 + al * q_prime_over_q(x)).abs();

    const S_MAX: f64 = 80.0;
    const X_MAX: f64 = 80.0;
    // split at the saddle of the phase, x₀
    let s0 = (1.0 + (1.0 - (1.0 - al * al) * p.z).sqrt()) / ((1.0 - al) * (1.0 + sw));
    let x0 = s0.ln();
    let mut segs: Vec<Segment> = Vec::new();
    if x0 > 0.0 && x0 < 1.0 {
        let sb = -x0.ln();
        segs.push(Segment {
            a: 0.0,
            b: sb,
            max_width: 0.25,
            freq: &freq_s,
            f: &f_s,
        });
        segs.push(Segment {
            a: sb,
            b: S_MAX,
            max_width: 0.25,
            freq: &freq_s,
            f: &f_s,
        });
    } else {
        segs.push(Segment {
            a: 0.0,
            b: S_MAX,
            max_width: 0.25,
            freq: &freq_s,
            f: &f_s,
        });
    }
    if (1.0..X_MAX).contains(&x0) {
        segs.push(Segment {
            a: 1.0,
            b: x0,
            max_width: 0.25,
            freq: &freq_x,
            f: &f_x,
        });
        segs.push(Segment {
            a: x0,
            b: X_MAX,
            max_width: 0.25,
            freq: &freq_x,
            f: &f_x,
        });
    } else {
        segs.push(Segment {
            a: 1.0,
            b: X_MAX,
            max_width: 0.25,
            freq: &freq_x,
            f: &f_x,
        });
    }
    let (integral, est) = integrate_segments(&segs, ACCURACY_TARGET / 10.0)?;
    let pre = cdd::exp(transformed_prefactor_ln(p)?);
    let value = pre * cdd::from_c64(integral);
    // rounding in the f64 integrand and the phase reduction
    let floor = 1e-13 * (1.0 + r).sqrt();
    Ok((ComplexValue::extended(value), est + floor))
}

/// F from the quadratically transformed representation, by quadrature.
pub fn eval_transformed(p: &EvalPoint) -> Result<ComplexValue> {
    let (v, est) = eval_transformed_with_estimate(p)?;
    if est > ACCURACY_TARGET {
        return Err(Error::Quadrature(format!(
            "estimate {est:.2e} above target"
        )));
    }
    Ok(v)
}

/// F via the Euler integral
/// Γ(c)/(Γ(b)Γ(c-b)) ∫₀¹ y^{b-1} (1-y)^{c-b-1} (1-zy)^{-a} dy,
/// with y = e^{-s}/2 on (0, 1/2] and 1-y = e^{-s}/2 on [1/2, 1).
pub fn eval_euler_with_estimate(p: &EvalPoint) -> Result<(ComplexValue, f64)> {
    check_point(p)?;
    if p.z == 0.0 {
        return Ok((ComplexValue::one(crate::numerics::Precision::Extended), 0.0));
    }
    let r = p.r;
    let al = p.alpha;
    let z = p.z;
    let rho = r * (1.0 - al);
    let kap = r * (1.0 + al);
    // phase r f(α, y) = ρ log y + κ log(1-y) - ρ log(1-zy)
    let dtheta = |y: f64| rho / y - kap / (1.0 - y) + rho * z / (1.0 - z * y);

    let f_left = |s: f64| {
        let y = 0.5 * (-s).exp();
        let l1y = (-y).ln_1p();
        let l1zy = (-z * y).ln_1p();
        // log y = -ln2 - s
        let theta = -reduced_product(rho, s) - rho * LN_2 + kap * l1y - rho * l1zy;
        let lmag = 0.75 * (-LN_2 - s) - 0.75 * l1y - 0.25 * l1zy;
        Complex64::from_polar(lmag.exp(), theta)
    };
    let freq_left = |s: f64| {
        let y = 0.5 * (-s).exp();
        (y * dtheta(y)).abs()
    };
    let f_right = |s: f64| {
        let u = 0.5 * (-s).exp(); // 1 - y
        let ly = (-u).ln_1p();
        let l1zy = ((1.0 - z) + z * u).ln();
        let theta = -reduced_product(kap, s) - kap * LN_2 + rho * ly - rho * l1zy;
        let lmag = -0.25 * ly + 0.25 * (-LN_2 - s) - 0.25 * l1zy;
        Complex64::from_polar(lmag.exp(), theta)
    };
    let freq_right = |s: f64| {
        let u = 0.5 * (-s).exp();
        (u * rho / (1.0 - u) - kap + u * rho * z / ((1.0 - z) + z * u)).abs()
    };
    // the stationary point y₋ lies in one of the halves
    let sq = (1.0 - (1.0 - al * al) * z).sqrt();
    let ym = (1.0 - sq) / ((1.0 + al) * z);
    let mut segs: Vec<Segment> = Vec::new();
    const S_LEFT: f64 = 60.0;
    // (1-y)^{1/4} decays slowly in s
    const S_RIGHT: f64 = 160.0;
    if ym > 0.0 && ym < 0.5 {
        let sb = -(2.0 * ym).ln();
        segs.push(Segment {
            a: 0.0,
            b: sb,
            max_width: 0.25,
            freq: &freq_left,
            f: &f_left,
        });
        segs.push(Segment {
            a: sb,
            b: S_LEFT,
            max_width: 0.25,
            freq: &freq_left,
            f: &f_left,
        });
    } else {
        segs.push(Segment {
            a: 0.0,
            b: S_LEFT,
            max_width: 0.25,
            freq: &freq_left,
            f: &f_left,
        });
    }
    if (0.5..1.0).contains(&ym) {
        let sb = -(2.0 * (1.0 - ym)).ln();
        segs.push(Segment {
            a: 0.0,
            b: sb,
            max_width: 0.25,
            freq: &freq_right,
            f: &f_right,
        });
        segs.push(Segment {
            a: sb,
            b: S_RIGHT,
            max_width: 0.25,
            freq: &freq_right,
            f: &f_right,
        });
    } else {
        segs.push(Segment {
            a: 0.0,
            b: S_RIGHT,
            max_width: 0.25,
            freq: &freq_right,
            f: &f_right,
        });
    }
    let (integral, est) = integrate_segments(&segs, ACCURACY_TARGET / 10.0)?;
    let Params { a: _, b, c } = params(p);
    let pre = cdd::exp(lg(c)? - lg(b)? - lg(c - b)?);
    let value = pre * cdd::from_c64(integral);
    let floor = 1e-13 * (1.0 + r).sqrt();
    Ok((ComplexValue::extended(value), est + floor))
}

fn cross_check(
    primary: (ComplexValue, f64),
    secondary: (ComplexValue, f64),
    method: OracleMethod,
) -> Result<OracleResult> {
    let diff = primary.0.rel_error_to(&secondary.0);
    if !(diff <= AGREEMENT_TOL) {
        return Err(Error::Disagreement(format!(
            "independent evaluations differ by {diff:.2e} (relative)"
        )));
    }
    finish(primary.0, method, primary.1.max(diff))
}

fn finish(value: ComplexValue, method: OracleMethod, est: f64) -> Result<OracleResult> {
    if !(est <= ACCURACY_TARGET) {
        return Err(Error::Convergence(format!(
            "estimated accuracy {est:.2e} misses the {ACCURACY_TARGET:.0e} target"
        )));
    }
    Ok(OracleResult {
        value,
        method,
        est_accuracy: est,
    })
}

/// The more accurate of the two series, if either meets the target.
fn best_series(p: &EvalPoint) -> Result<((ComplexValue, f64), OracleMethod)> {
    let gauss = eval_gauss_series(p);
    if let Ok(g) = gauss {
        if g.1 <= ACCURACY_TARGET / 100.0 {
            return Ok((g, OracleMethod::GaussSeries));
        }
    }
    let conn = eval_connection_series(p);
    let best = match (gauss, conn) {
        (Ok(g), Ok(c)) if c.1 < g.1 => (c, OracleMethod::TransformedSeries),
        (Ok(g), _) => (g, OracleMethod::GaussSeries),
        (Err(_), Ok(c)) => (c, OracleMethod::TransformedSeries),
        (Err(e), Err(_)) => return Err(e),
    };
    if best.0 .1 > ACCURACY_TARGET {
        return Err(Error::Cancellation(
            "no series meets the accuracy target".into(),
        ));
    }
    Ok(best)
}

/// F(r, α, z) to 1e-9 relative.
///
/// z ≤ 1/2: the Gauss series alone. z > 1/2: a series (Gauss, else the
/// connection formula) checked against `eval_transformed`. When no series
/// keeps enough digits, the x- and y-quadratures check each other.
pub fn eval_f(p: &EvalPoint) -> Result<OracleResult> {
    check_point(p)?;
    if p.z == 0.0 {
        return finish(
            ComplexValue::one(crate::numerics::Precision::Extended),
            OracleMethod::GaussSeries,
            0.0,
        );
    }
    match best_series(p) {
        Ok((v, method)) if p.z <= 0.5 => finish(v.0, method, v.1),
        Ok((v, method)) => cross_check(v, eval_transformed_with_estimate(p)?, method),
        Err(_) => cross_check(
            eval_transformed_with_estimate(p)?,
            eval_euler_with_estimate(p)?,
            OracleMethod::QuadratureCrossCheck,
        ),
    }
}
