//! Truncated Taylor series ("jets") about a point.
//!
//! Coefficients are stored in powers of `(x - center)`. All operations
//! truncate to the shorter operand, so a jet of length `m` is exact through
//! order `m - 1` and says nothing beyond it.

use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use num_traits::Num;

/// Scalar field for jet coefficients.
pub trait JetScalar: Copy + Num + Neg<Output = Self> + From<f64> + std::fmt::Debug {}
impl JetScalar for f64 {}
impl JetScalar for Complex64 {}

#[derive(Clone, Debug, PartialEq)]
pub struct SeriesJet<T = f64> {
    pub center: f64,
    pub coeffs: Vec<T>,
}

fn s<T: JetScalar>(x: f64) -> T {
    T::from(x)
}

impl<T: JetScalar> SeriesJet<T> {
    pub fn new(center: f64, coeffs: Vec<T>) -> Self {
        assert!(!coeffs.is_empty(), "a jet needs at least one coefficient");
        SeriesJet { center, coeffs }
    }

    pub fn constant(center: f64, c: T, len: usize) -> Self {
        let mut coeffs = vec![T::zero(); len];
        coeffs[0] = c;
        SeriesJet { center, coeffs }
    }

    /// The identity map `x - center`.
    pub fn variable(center: f64, len: usize) -> Self {
        let mut coeffs = vec![T::zero(); len];
        if len > 1 {
            coeffs[1] = T::one();
        }
        SeriesJet { center, coeffs }
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Value at the center; always exactly the first coefficient.
    pub fn value(&self) -> T {
        self.coeffs[0]
    }

    pub fn coeff(&self, k: usize) -> T {
        self.coeffs.get(k).copied().unwrap_or_else(T::zero)
    }

    pub fn truncate(mut self, len: usize) -> Self {
        self.coeffs.truncate(len.max(1));
        self
    }

    /// Horner evaluation at `x`.
    pub fn eval(&self, x: T) -> T {
        let dx = x - s(self.center);
        self.coeffs
            .iter()
            .rev()
            .fold(T::zero(), |acc, &c| acc * dx + c)
    }

    pub fn scale(&self, k: T) -> Self {
        SeriesJet::new(self.center, self.coeffs.iter().map(|&c| c * k).collect())
    }

    pub fn derivative(&self) -> Self {
        let n = self.len();
        if n == 1 {
            return SeriesJet::constant(self.center, T::zero(), 1);
        }
        let coeffs = (1..n).map(|k| self.coeffs[k] * s(k as f64)).collect();
        SeriesJet::new(self.center, coeffs)
    }

    /// Antiderivative with the given value at the center; one order longer.
    pub fn integral(&self, at_center: T) -> Self {
        let mut coeffs = Vec::with_capacity(self.len() + 1);
        coeffs.push(at_center);
        for (k, &c) in self.coeffs.iter().enumerate() {
            coeffs.push(c / s((k + 1) as f64));
        }
        SeriesJet::new(self.center, coeffs)
    }

    pub fn recip(&self) -> Self {
        let a0 = self.coeffs[0];
        assert!(
            a0 != T::zero(),
            "reciprocal of a jet vanishing at its center"
        );
        let n = self.len();
        let mut b = vec![T::zero(); n];
        b[0] = T::one() / a0;
        for k in 1..n {
            let mut acc = T::zero();
            for j in 1..=k {
                acc = acc + self.coeffs[j] * b[k - j];
            }
            b[k] = -acc / a0;
        }
        SeriesJet::new(self.center, b)
    }

    /// ln(f / f(center)), i.e. the logarithm without its constant term.
    pub fn ln_normalized(&self) -> Self {
        let d = self.derivative() * self.recip();
        d.integral(T::zero()).truncate(self.len())
    }

    /// (f / f(center))^p.
    pub fn pow_normalized(&self, p: T) -> Self {
        self.ln_normalized().scale(p).exp()
    }

    /// exp(f) / exp(f(center)): the exponential without its constant factor.
    pub fn exp(&self) -> Self {
        // g = exp(f) satisfies g' = f' g, solved order by order with g0 = 1.
        let n = self.len();
        let mut g = vec![T::zero(); n];
        g[0] = T::one();
        for k in 1..n {
            let mut acc = T::zero();
            for j in 1..=k {
                acc = acc + s::<T>(j as f64) * self.coeffs[j] * g[k - j];
            }
            g[k] = acc / s((k) as f64);
        }
        SeriesJet::new(self.center, g)
    }

    /// f(g(x)) where `inner` vanishes at its center; the result is centered
    /// where `inner` is.
    pub fn compose(&self, inner: &SeriesJet<T>) -> Self {
        assert!(
            inner.coeffs[0] == T::zero(),
            "inner jet must vanish at its center"
        );
        let n = self.len().min(inner.len());
        let mut acc = SeriesJet::constant(inner.center, self.coeffs[n - 1], n);
        let inner = inner.clone().truncate(n);
        for k in (0..n - 1).rev() {
            acc = &acc * &inner;
            acc.coeffs[0] = acc.coeffs[0] + self.coeffs[k];
        }
        acc
    }

    /// Compositional inverse of a jet with zero constant term and nonzero
    /// linear term. The result maps values of `self - self(center)` back to
    /// offsets from `self.center`, so its own center is 0.
    pub fn revert(&self) -> Self {
        let n = self.len();
        assert!(self.coeffs[0] == T::zero(), "revert needs f(center) = 0");
        assert!(
            n >= 2 && self.coeffs[1] != T::zero(),
            "revert needs f'(center) != 0"
        );
        let a1 = self.coeffs[1];
        let mut g = vec![T::zero(); n];
        g[1] = T::one() / a1;
        let f0 = SeriesJet::new(0.0, self.coeffs.clone());
        for k in 2..n {
            let trial = SeriesJet::new(0.0, g.clone());
            let c = f0.compose(&trial).coeffs[k];
            g[k] = -c / a1;
        }
        SeriesJet::new(0.0, g)
    }
}

impl SeriesJet<f64> {
    /// Square root of a jet with a positive value at its center.
    pub fn sqrt(&self) -> Self {
        let a0 = self.coeffs[0];
        assert!(
            a0 > 0.0,
            "sqrt of a jet needs a positive value at the center"
        );
        self.pow_normalized(0.5).scale(a0.sqrt())
    }

    /// Jet of ln(c + x - center) for c > 0.
    pub fn ln_affine(center: f64, c: f64, slope: f64, len: usize) -> Self {
        let mut coeffs = vec![0.0; len];
        coeffs[0] = c.ln();
        let u = slope / c;
        let mut p = 1.0;
        for (k, coeff) in coeffs.iter_mut().enumerate().skip(1) {
            p *= u;
            *coeff = if k % 2 == 1 { p } else { -p } / k as f64;
        }
        SeriesJet::new(center, coeffs)
    }

    /// Jet of (c + slope·(x - center))^p for c > 0.
    pub fn pow_affine(center: f64, c: f64, slope: f64, p: f64, len: usize) -> Self {
        let mut coeffs = vec![0.0; len];
        let u = slope / c;
        let mut binom = c.powf(p);
        coeffs[0] = binom;
        for (k, coeff) in coeffs.iter_mut().enumerate().skip(1) {
            binom *= (p - (k as f64 - 1.0)) / k as f64 * u;
            *coeff = binom;
        }
        SeriesJet::new(center, coeffs)
    }
}

impl<T: JetScalar> Add for &SeriesJet<T> {
    type Output = SeriesJet<T>;
    fn add(self, rhs: &SeriesJet<T>) -> SeriesJet<T> {
        let n = self.len().min(rhs.len());
        let coeffs = (0..n).map(|k| self.coeffs[k] + rhs.coeffs[k]).collect();
        SeriesJet::new(self.center, coeffs)
    }
}

impl<T: JetScalar> Sub for &SeriesJet<T> {
    type Output = SeriesJet<T>;
    fn sub(self, rhs: &SeriesJet<T>) -> SeriesJet<T> {
        let n = self.len().min(rhs.len());
        let coeffs = (0..n).map(|k| self.coeffs[k] - rhs.coeffs[k]).collect();
        SeriesJet::new(self.center, coeffs)
    }
}

impl<T: JetScalar> Mul for &SeriesJet<T> {
    type Output = SeriesJet<T>;
    fn mul(self, rhs: &SeriesJet<T>) -> SeriesJet<T> {
        let n = self.len().min(rhs.len());
        let mut coeffs = vec![T::zero(); n];
        for i in 0..n {
            for j in 0..n - i {
                coeffs[i + j] = coeffs[i + j] + self.coeffs[i] * rhs.coeffs[j];
            }
        }
        SeriesJet::new(self.center, coeffs)
    }
}

macro_rules! owned_ops {
    ($($tr:ident $m:ident),*) => {$(
        impl<T: JetScalar> $tr for SeriesJet<T> {
            type Output = SeriesJet<T>;
            fn $m(self, rhs: SeriesJet<T>) -> SeriesJet<T> { (&self).$m(&rhs) }
        }
    )*};
}
owned_ops!(Add add, Sub sub, Mul mul);

#[cfg(test)]
mod tests {
    use super::*;

    fn assert_coeffs(j: &SeriesJet, want: &[f64], tol: f64) {
        for (k, w) in want.iter().enumerate() {
            assert!(
                (j.coeff(k) - w).abs() <= tol,
                "k={k}: {} vs {w}",
                j.coeff(k)
            );
        }
    }

    #[test]
    fn value_is_first_coefficient() {
        let j = SeriesJet::new(0.3, vec![1.25, 2.0, -1.0]);
        assert_eq!(j.value(), 1.25);
        assert_eq!(j.eval(0.3), 1.25);
    }

    #[test]
    fn exp_and_log_are_inverse() {
        let x = SeriesJet::<f64>::variable(0.0, 8);
        let e = x.exp();
        let fact = [1.0, 1.0, 0.5, 1.0 / 6.0, 1.0 / 24.0, 1.0 / 120.0];
        assert_coeffs(&e, &fact, 1e-15);
        let back = e.ln_normalized();
        assert_coeffs(&back, &[0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0], 1e-15);
    }

    #[test]
    fn reversion_of_exp_minus_one_is_log1p() {
        let x = SeriesJet::<f64>::variable(0.0, 9);
        let mut em1 = x.exp();
        em1.coeffs[0] = 0.0;
        let inv = em1.revert();
        let log1p: Vec<f64> = (0..9)
            .map(|k| {
                if k == 0 {
                    0.0
                } else {
                    (-1f64).powi(k + 1) / k as f64
                }
            })
            .collect();
        assert_coeffs(&inv, &log1p, 1e-14);
    }

    #[test]
    fn affine_helpers_match_generic_ops() {
        let len = 7;
        let base = SeriesJet::new(0.4, vec![0.4 * 2.0 + 1.0, 2.0, 0.0, 0.0, 0.0, 0.0, 0.0]);
        let generic = base.pow_normalized(-0.75).scale(1.8f64.powf(-0.75));
        let direct = SeriesJet::pow_affine(0.4, 1.8, 2.0, -0.75, len);
        assert_coeffs(&generic, &direct.coeffs, 1e-13);
        let mut lg = base.ln_normalized();
        lg.coeffs[0] = 1.8f64.ln();
        let ld = SeriesJet::ln_affine(0.4, 1.8, 2.0, len);
        assert_coeffs(&lg, &ld.coeffs, 1e-13);
    }

    #[test]
    fn sqrt_squares_back() {
        let j = SeriesJet::new(0.0, vec![4.0, 1.0, -3.0, 0.5, 2.0]);
        let r = j.sqrt();
        let sq = &r * &r;
        assert_coeffs(&sq, &j.coeffs, 1e-14);
    }
}
