//! Double-word ("double-double") real arithmetic.
//!
//! A value is the unevaluated sum `hi + lo` of two `f64`s with
//! `|lo| <= ulp(hi) / 2`, giving roughly 106 bits (≈31–32 decimal digits)
//! of significand. The error-free transforms follow Dekker and Knuth; the
//! transcendental functions refine an `f64` seed by one Newton step or use
//! argument reduction plus Taylor series.

use std::cmp::Ordering;
use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Div, DivAssign, Mul, MulAssign, Neg, Rem, Sub, SubAssign};

use num_traits::{Num, One, Zero};

/// Unit roundoff of the double-word format, 2^-104.
pub const DD_EPSILON: f64 = 4.930380657631324e-32;

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let e = b - (s - a);
    (s, e)
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let e = (a - (s - bb)) + (b - bb);
    (s, e)
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    let e = a.mul_add(b, -p);
    (p, e)
}

/// A double-word real number.
#[derive(Clone, Copy, Default)]
pub struct DD {
    hi: f64,
    lo: f64,
}

impl DD {
    pub const ZERO: DD = DD { hi: 0.0, lo: 0.0 };
    pub const ONE: DD = DD { hi: 1.0, lo: 0.0 };
    pub const HALF: DD = DD { hi: 0.5, lo: 0.0 };
    pub const PI: DD = DD {
        hi: std::f64::consts::PI,
        lo: 1.2246467991473532e-16,
    };
    pub const TAU: DD = DD {
        hi: std::f64::consts::TAU,
        lo: 2.4492935982947064e-16,
    };
    pub const FRAC_PI_2: DD = DD {
        hi: std::f64::consts::FRAC_PI_2,
        lo: 6.123233995736766e-17,
    };
    pub const FRAC_PI_4: DD = DD {
        hi: std::f64::consts::FRAC_PI_4,
        lo: 3.061616997868383e-17,
    };
    pub const LN_2: DD = DD {
        hi: std::f64::consts::LN_2,
        lo: 2.3190468138462996e-17,
    };

    /// Builds a value from two words, renormalizing them.
    #[inline]
    pub fn new(hi: f64, lo: f64) -> DD {
        let (h, l) = two_sum(hi, lo);
        DD { hi: h, lo: l }
    }

    #[inline]
    pub const fn from_f64(x: f64) -> DD {
        DD { hi: x, lo: 0.0 }
    }

    /// Exact product of two doubles.
    #[inline]
    pub fn mul_f64_exact(a: f64, b: f64) -> DD {
        let (p, e) = two_prod(a, b);
        DD::new(p, e)
    }

    /// Exact sum of two doubles.
    #[inline]
    pub fn add_f64_exact(a: f64, b: f64) -> DD {
        let (s, e) = two_sum(a, b);
        DD { hi: s, lo: e }
    }

    #[inline]
    pub fn hi(self) -> f64 {
        self.hi
    }

    #[inline]
    pub fn lo(self) -> f64 {
        self.lo
    }

    #[inline]
    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    #[inline]
    pub fn is_finite(self) -> bool {
        self.hi.is_finite()
    }

    #[inline]
    pub fn is_nan(self) -> bool {
        self.hi.is_nan()
    }

    #[inline]
    pub fn is_sign_negative(self) -> bool {
        self.hi < 0.0 || (self.hi == 0.0 && self.lo < 0.0)
    }

    #[inline]
    pub fn abs(self) -> DD {
        if self.is_sign_negative() {
            -self
        } else {
            self
        }
    }

    #[inline]
    pub fn sqr(self) -> DD {
        let (p, e) = two_prod(self.hi, self.hi);
        let e = e + 2.0 * self.hi * self.lo;
        let (h, l) = quick_two_sum(p, e);
        DD { hi: h, lo: l }
    }

    /// Multiplication by an exact power of two.
    #[inline]
    pub fn ldexp(self, exp: i32) -> DD {
        let s = 2f64.powi(exp);
        DD {
            hi: self.hi * s,
            lo: self.lo * s,
        }
    }

    #[inline]
    pub fn recip(self) -> DD {
        DD::ONE / self
    }

    pub fn sqrt(self) -> DD {
        if self.hi == 0.0 {
            return DD::ZERO;
        }
        if self.hi < 0.0 {
            return DD::from_f64(f64::NAN);
        }
        // Karp's trick: one Newton step from the f64 root.
        let x = 1.0 / self.hi.sqrt();
        let ax = self.hi * x;
        let diff = self - DD::from_f64(ax).sqr();
        DD::add_f64_exact(ax, diff.hi * (x * 0.5))
    }

    /// Nearest integer, ties away from zero.
    pub fn round(self) -> DD {
        let h = self.hi.round();
        if h == self.hi {
            let l = self.lo.round();
            DD::new(h, l)
        } else if (h - self.hi).abs() == 0.5 && self.lo != 0.0 {
            // a tie in hi is broken by the sign of lo
            if self.lo > 0.0 {
                DD::from_f64(self.hi.floor() + 1.0)
            } else {
                DD::from_f64(self.hi.floor())
            }
        } else {
            DD::from_f64(h)
        }
    }

    pub fn floor(self) -> DD {
        let h = self.hi.floor();
        if h == self.hi {
            DD::new(h, self.lo.floor())
        } else {
            DD::from_f64(h)
        }
    }

    /// e^x - 1 for |x| <= ln2/2, accurate relative to the result.
    fn expm1_reduced(x: DD) -> DD {
        const SQUARINGS: i32 = 9;
        let s = x.ldexp(-SQUARINGS);
        // Taylor series of e^s - 1; |s| < 7e-4 so 10 terms reach 1e-35.
        let mut term = s;
        let mut sum = s;
        let mut k = 2.0;
        loop {
            term = term * s / k;
            sum += term;
            if term.hi.abs() <= 1e-36 * sum.hi.abs().max(f64::MIN_POSITIVE) {
                break;
            }
            k += 1.0;
        }
        // e^{2s} - 1 = (e^s - 1)(e^s + 1)
        for _ in 0..SQUARINGS {
            sum = sum * (sum + 2.0);
        }
        sum
    }

    pub fn exp(self) -> DD {
        if self.hi > 709.78 {
            return DD::from_f64(f64::INFINITY);
        }
        if self.hi < -745.2 {
            return DD::ZERO;
        }
        if self.hi == 0.0 {
            return DD::ONE;
        }
        let k = (self.hi / DD::LN_2.hi).round();
        let r = self - DD::LN_2 * k;
        let e = DD::expm1_reduced(r) + 1.0;
        // Scale in two steps so that 2^k never overflows on its own.
        let k = k as i32;
        let k1 = k / 2;
        e.ldexp(k1).ldexp(k - k1)
    }

    pub fn exp_m1(self) -> DD {
        if self.hi.abs() <= 0.34 {
            DD::expm1_reduced(self)
        } else {
            self.exp() - 1.0
        }
    }

    pub fn ln(self) -> DD {
        if self.hi <= 0.0 {
            return if self.hi == 0.0 {
                DD::from_f64(f64::NEG_INFINITY)
            } else {
                DD::from_f64(f64::NAN)
            };
        }
        if !self.hi.is_finite() {
            return self;
        }
        // Split off a power of two so e^{-y} below stays in the normal range.
        let e = self.hi.log2().round() as i32;
        let m = self.ldexp(-e);
        // Newton on e^y = m: y <- y + m e^{-y} - 1. One step doubles the
        // digits of the f64 seed; a second step absorbs the seed's roundoff.
        let mut y = DD::from_f64(m.hi.ln());
        for _ in 0..2 {
            y = y + m * (-y).exp() - 1.0;
        }
        y + DD::LN_2 * e as f64
    }

    /// ln(1 + x), accurate relative to the result for small x.
    pub fn ln_1p(self) -> DD {
        if self.hi.abs() > 0.25 {
            return (self + 1.0).ln();
        }
        if self.hi == 0.0 {
            return self;
        }
        // Newton on expm1(y) = x.
        let mut y = DD::from_f64(self.hi.ln_1p());
        for _ in 0..2 {
            let em = y.exp_m1();
            y += (self - em) / (em + 1.0);
        }
        y
    }

    fn sin_taylor(x: DD) -> DD {
        let x2 = -x.sqr();
        let mut term = x;
        let mut sum = x;
        let mut k = 2.0;
        while term.hi.abs() > 1e-36 {
            term = term * x2 / (k * (k + 1.0));
            sum += term;
            k += 2.0;
        }
        sum
    }

    fn cos_taylor(x: DD) -> DD {
        let x2 = -x.sqr();
        let mut term = DD::ONE;
        let mut sum = DD::ONE;
        let mut k = 1.0;
        while term.hi.abs() > 1e-36 {
            term = term * x2 / (k * (k + 1.0));
            sum += term;
            k += 2.0;
        }
        sum
    }

    /// (sin x, cos x) with reduction modulo π/2 in double-word arithmetic.
    pub fn sin_cos(self) -> (DD, DD) {
        if self.hi == 0.0 {
            return (self, DD::ONE);
        }
        let k = (self.hi / DD::FRAC_PI_2.hi).round();
        let r = self - DD::FRAC_PI_2 * k;
        let s = DD::sin_taylor(r);
        let c = DD::cos_taylor(r);
        match (k as i64).rem_euclid(4) {
            0 => (s, c),
            1 => (c, -s),
            2 => (-s, -c),
            _ => (-c, s),
        }
    }

    pub fn sin(self) -> DD {
        self.sin_cos().0
    }

    pub fn cos(self) -> DD {
        self.sin_cos().1
    }

    /// Four-quadrant arctangent of `self / x`, in (-π, π].
    pub fn atan2(self, x: DD) -> DD {
        let y = self;
        if x.hi == 0.0 && y.hi == 0.0 {
            return DD::ZERO;
        }
        let t0 = DD::from_f64(y.hi.atan2(x.hi));
        let (s, c) = t0.sin_cos();
        // tan of the residual angle; one step suffices from an f64 seed
        let num = y * c - x * s;
        let den = x * c + y * s;
        t0 + num / den
    }

    pub fn powf(self, p: DD) -> DD {
        (p * self.ln()).exp()
    }

    pub fn powi(self, n: i32) -> DD {
        if n == 0 {
            return DD::ONE;
        }
        let mut base = if n < 0 { self.recip() } else { self };
        let mut e = n.unsigned_abs();
        let mut acc = DD::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc *= base;
            }
            base = base.sqr();
            e >>= 1;
        }
        acc
    }

    pub fn max(self, other: DD) -> DD {
        if self >= other {
            self
        } else {
            other
        }
    }

    pub fn min(self, other: DD) -> DD {
        if self <= other {
            self
        } else {
            other
        }
    }
}

impl From<f64> for DD {
    #[inline]
    fn from(x: f64) -> DD {
        DD::from_f64(x)
    }
}

impl From<i32> for DD {
    #[inline]
    fn from(x: i32) -> DD {
        DD::from_f64(x as f64)
    }
}

impl From<DD> for f64 {
    #[inline]
    fn from(x: DD) -> f64 {
        x.to_f64()
    }
}

impl PartialEq for DD {
    fn eq(&self, other: &DD) -> bool {
        self.hi == other.hi && self.lo == other.lo
    }
}

impl PartialOrd for DD {
    fn partial_cmp(&self, other: &DD) -> Option<Ordering> {
        match self.hi.partial_cmp(&other.hi)? {
            Ordering::Equal => self.lo.partial_cmp(&other.lo),
            o => Some(o),
        }
    }
}

impl PartialEq<f64> for DD {
    fn eq(&self, other: &f64) -> bool {
        self.hi == *other && self.lo == 0.0
    }
}

impl PartialOrd<f64> for DD {
    fn partial_cmp(&self, other: &f64) -> Option<Ordering> {
        self.partial_cmp(&DD::from_f64(*other))
    }
}

impl Neg for DD {
    type Output = DD;
    #[inline]
    fn neg(self) -> DD {
        DD {
            hi: -self.hi,
            lo: -self.lo,
        }
    }
}

impl Add for DD {
    type Output = DD;
    #[inline]
    fn add(self, b: DD) -> DD {
        let (s1, s2) = two_sum(self.hi, b.hi);
        let (t1, t2) = two_sum(self.lo, b.lo);
        let s2 = s2 + t1;
        let (s1, s2) = quick_two_sum(s1, s2);
        let s2 = s2 + t2;
        let (h, l) = quick_two_sum(s1, s2);
        DD { hi: h, lo: l }
    }
}

impl Add<f64> for DD {
    type Output = DD;
    #[inline]
    fn add(self, b: f64) -> DD {
        let (s1, s2) = two_sum(self.hi, b);
        let s2 = s2 + self.lo;
        let (h, l) = quick_two_sum(s1, s2);
        DD { hi: h, lo: l }
    }
}

impl Add<DD> for f64 {
    type Output = DD;
    #[inline]
    fn add(self, b: DD) -> DD {
        b + self
    }
}

impl Sub for DD {
    type Output = DD;
    #[inline]
    fn sub(self, b: DD) -> DD {
        self + (-b)
    }
}

impl Sub<f64> for DD {
    type Output = DD;
    #[inline]
    fn sub(self, b: f64) -> DD {
        self + (-b)
    }
}

impl Sub<DD> for f64 {
    type Output = DD;
    #[inline]
    fn sub(self, b: DD) -> DD {
        (-b) + self
    }
}

impl Mul for DD {
    type Output = DD;
    #[inline]
    fn mul(self, b: DD) -> DD {
        let (p, e) = two_prod(self.hi, b.hi);
        let e = e + (self.hi * b.lo + self.lo * b.hi);
        let (h, l) = quick_two_sum(p, e);
        DD { hi: h, lo: l }
    }
}

impl Mul<f64> for DD {
    type Output = DD;
    #[inline]
    fn mul(self, b: f64) -> DD {
        let (p, e) = two_prod(self.hi, b);
        let e = e + self.lo * b;
        let (h, l) = quick_two_sum(p, e);
        DD { hi: h, lo: l }
    }
}

impl Mul<DD> for f64 {
    type Output = DD;
    #[inline]
    fn mul(self, b: DD) -> DD {
        b * self
    }
}

impl Div for DD {
    type Output = DD;
    fn div(self, b: DD) -> DD {
        let q1 = self.hi / b.hi;
        let r = self - b * q1;
        let q2 = r.hi / b.hi;
        let r = r - b * q2;
        let q3 = r.hi / b.hi;
        let (h, l) = quick_two_sum(q1, q2);
        DD { hi: h, lo: l } + q3
    }
}

impl Div<f64> for DD {
    type Output = DD;
    #[inline]
    fn div(self, b: f64) -> DD {
        self / DD::from_f64(b)
    }
}

impl Div<DD> for f64 {
    type Output = DD;
    #[inline]
    fn div(self, b: DD) -> DD {
        DD::from_f64(self) / b
    }
}

impl Rem for DD {
    type Output = DD;
    fn rem(self, b: DD) -> DD {
        let q = self / b;
        let q = if q.is_sign_negative() {
            -((-q).floor())
        } else {
            q.floor()
        };
        self - b * q
    }
}

macro_rules! assign_ops {
    ($($tr:ident $m:ident $op:tt),*) => {$(
        impl $tr for DD {
            #[inline]
            fn $m(&mut self, b: DD) { *self = *self $op b; }
        }
        impl $tr<f64> for DD {
            #[inline]
            fn $m(&mut self, b: f64) { *self = *self $op b; }
        }
    )*};
}
assign_ops!(AddAssign add_assign +, SubAssign sub_assign -, MulAssign mul_assign *, DivAssign div_assign /);

impl Sum for DD {
    fn sum<I: Iterator<Item = DD>>(iter: I) -> DD {
        iter.fold(DD::ZERO, |a, b| a + b)
    }
}

impl Zero for DD {
    fn zero() -> DD {
        DD::ZERO
    }
    fn is_zero(&self) -> bool {
        self.hi == 0.0 && self.lo == 0.0
    }
}

impl One for DD {
    fn one() -> DD {
        DD::ONE
    }
}

impl Num for DD {
    type FromStrRadixErr = std::num::ParseFloatError;

    /// Decimal strings only; digits beyond f64 precision are parsed in two
    /// pieces so that 30-digit literals survive.
    fn from_str_radix(s: &str, radix: u32) -> Result<DD, Self::FromStrRadixErr> {
        debug_assert_eq!(radix, 10);
        parse_decimal(s)
    }
}

fn parse_decimal(s: &str) -> Result<DD, std::num::ParseFloatError> {
    let s = s.trim();
    let (mant, exp) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().unwrap_or(0)),
        None => (s, 0),
    };
    let neg = mant.starts_with('-');
    let mant = mant.trim_start_matches(['-', '+']);
    let (int_part, frac_part) = match mant.find('.') {
        Some(i) => (&mant[..i], &mant[i + 1..]),
        None => (mant, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return "".parse::<f64>().map(DD::from_f64);
    }
    let digits: String = format!("{int_part}{frac_part}");
    let mut exp10 = exp - frac_part.len() as i32;
    // Accumulate 15-digit chunks exactly: value = sum chunk_k * 10^(...)
    let mut acc = DD::ZERO;
    for chunk in digits.as_bytes().chunks(15) {
        let c = std::str::from_utf8(chunk).unwrap().parse::<f64>()?;
        acc = acc * DD::from_f64(10f64.powi(chunk.len() as i32)) + c;
    }
    let ten = DD::from_f64(10.0);
    while exp10 > 0 {
        acc *= ten;
        exp10 -= 1;
    }
    if exp10 < 0 {
        acc /= ten.powi(-exp10);
    }
    Ok(if neg { -acc } else { acc })
}

impl std::str::FromStr for DD {
    type Err = std::num::ParseFloatError;
    fn from_str(s: &str) -> Result<DD, Self::Err> {
        parse_decimal(s)
    }
}

impl fmt::Debug for DD {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DD({:e}, {:e})", self.hi, self.lo)
    }
}

impl fmt::Display for DD {
    /// Scientific notation with 32 significant digits.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.hi.is_finite() {
            return write!(f, "{}", self.hi);
        }
        if self.hi == 0.0 {
            return write!(f, "0");
        }
        let neg = self.is_sign_negative();
        let mut x = self.abs();
        let mut e = x.hi.log10().floor() as i32;
        x /= DD::from_f64(10.0).powi(e);
        if x.hi >= 10.0 {
            x /= 10.0;
            e += 1;
        } else if x.hi < 1.0 {
            x *= 10.0;
            e -= 1;
        }
        let mut digits = String::with_capacity(34);
        for i in 0..32 {
            let d = x.hi.floor().clamp(0.0, 9.0);
            digits.push(char::from(b'0' + d as u8));
            if i == 0 {
                digits.push('.');
            }
            x = (x - d) * 10.0;
        }
        write!(f, "{}{}e{}", if neg { "-" } else { "" }, digits, e)
    }
}
