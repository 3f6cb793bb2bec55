//! The closed-form leading term: phase l₁(α, z), amplitude, and the
//! z → 1 route's phase F(α, z).

use crate::error::{domain, Result};
use crate::numerics::{cdd, ComplexValue, DD};
use crate::point::EvalPoint;

/// 1 - (1-α²) z in double-word.
pub(crate) fn radicand(alpha: DD, z: DD) -> DD {
    1.0 - (1.0 - alpha.sqr()) * z
}

fn check_square(alpha: f64, z: f64) -> Result<()> {
    if !(0.0..1.0).contains(&alpha) || !(0.0..1.0).contains(&z) {
        return Err(domain(format!(
            "(alpha, z) = ({alpha}, {z}) outside [0,1) x [0,1)"
        )));
    }
    Ok(())
}

/// l₁(α, z) in double-word.
///
/// Written as `-ln(1 + (S-1)/2) + α ln(1 + (S-1)/(1+α))` with
/// `S - 1 = -(1-α²)z/(1+S)`, which equals the four-logarithm form but does
/// not cancel near z = 0.
pub fn l1_phase_dd(alpha: f64, z: f64) -> Result<DD> {
    check_square(alpha, z)?;
    let a = DD::from_f64(alpha);
    let zz = DD::from_f64(z);
    let p = radicand(a, zz);
    if p.is_sign_negative() {
        return Err(domain("1-(1-alpha^2)z is negative"));
    }
    let s = p.sqrt();
    let sm1 = -(1.0 - a.sqr()) * zz / (1.0 + s);
    let first = -(sm1 * 0.5).ln_1p();
    let second = if alpha == 0.0 {
        DD::ZERO
    } else {
        a * (sm1 / (1.0 + a)).ln_1p()
    };
    Ok(first + second)
}

pub fn l1_phase(alpha: f64, z: f64) -> Result<f64> {
    l1_phase_dd(alpha, z).map(DD::to_f64)
}

/// The five-logarithm phase of the z → 1 route, evaluated term by term.
#[allow(non_snake_case)]
pub fn temme_phase_F_dd(alpha: f64, z: f64) -> Result<DD> {
    if !(alpha > 0.0 && alpha < 1.0) || !(z > 0.0 && z < 1.0) {
        return Err(domain(format!(
            "F(alpha, z) needs 0 < alpha < 1 and 0 < z < 1, got ({alpha}, {z})"
        )));
    }
    let a = DD::from_f64(alpha);
    let zz = DD::from_f64(z);
    let s = radicand(a, zz).sqrt();
    let s1 = (1.0 - zz).sqrt();
    let one_m_a = 1.0 - a;
    let t1 = -((1.0 + s) / (one_m_a * (1.0 + s1))).ln();
    let t2 = a * ((a + s) / ((1.0 - a.sqr()) * s1)).ln();
    let t3 = -((1.0 + s1) / (s1 * 2.0)).ln();
    let t4 = -one_m_a * s1.ln();
    let t5 = -one_m_a * one_m_a.ln();
    Ok(t1 + t2 + t3 + t4 + t5)
}

#[allow(non_snake_case)]
pub fn temme_phase_F(alpha: f64, z: f64) -> Result<f64> {
    temme_phase_F_dd(alpha, z).map(DD::to_f64)
}

/// `amplitude · exp(2ir · phase)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MainTerm {
    pub phase: f64,
    pub amplitude: f64,
    pub value: ComplexValue,
}

/// (1 - (1-α²) z)^{-1/4} in double-word.
pub(crate) fn amplitude_dd(alpha: f64, z: f64) -> DD {
    radicand(DD::from_f64(alpha), DD::from_f64(z))
        .sqrt()
        .sqrt()
        .recip()
}

pub fn main_term(p: &EvalPoint) -> Result<MainTerm> {
    let phase = l1_phase_dd(p.alpha, p.z)?;
    let amp = amplitude_dd(p.alpha, p.z);
    let theta = phase * DD::from_f64(p.r) * 2.0;
    let value = ComplexValue::extended(cdd::expi(theta) * amp);
    Ok(MainTerm {
        phase: phase.to_f64(),
        amplitude: amp.to_f64(),
        value,
    })
}

/// The α = 0 main term written with arcosh, at z = 4/x² (x > 2):
/// `x^{2ir} e^{-2ir arcosh(x/2)} (x²/(x²-4))^{1/4}`.
pub fn arcosh_main_term(r: f64, x: f64) -> Result<ComplexValue> {
    if !(x > 2.0) {
        return Err(domain(format!("arcosh form needs x > 2, got {x}")));
    }
    let xd = DD::from_f64(x);
    let h = xd * 0.5;
    // arcosh(u) = ln(u + sqrt(u² - 1))
    let acosh = (h + (h.sqr() - 1.0).sqrt()).ln();
    let theta = (xd.ln() - acosh) * DD::from_f64(r) * 2.0;
    let x2 = xd.sqr();
    let amp = (x2 / (x2 - 4.0)).sqrt().sqrt();
    Ok(ComplexValue::extended(cdd::expi(theta) * amp))
}
