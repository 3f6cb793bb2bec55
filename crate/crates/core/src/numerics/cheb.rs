//! Chebyshev interpolation on an interval.

use std::f64::consts::PI;

/// Chebyshev series `Σ c_k T_k(u)` with `u` the affine image of `[a, b]`
/// on `[-1, 1]`.
#[derive(Clone, Debug)]
pub struct Chebyshev {
    pub a: f64,
    pub b: f64,
    pub coeffs: Vec<f64>,
}

impl Chebyshev {
    /// First-kind nodes on `[a, b]`, in increasing order.
    pub fn nodes(a: f64, b: f64, n: usize) -> Vec<f64> {
        (0..n)
            .rev()
            .map(|k| {
                let u = (PI * (k as f64 + 0.5) / n as f64).cos();
                0.5 * (a + b) + 0.5 * (b - a) * u
            })
            .collect()
    }

    /// Interpolant through samples taken at `nodes(a, b, values.len())`.
    pub fn from_values(a: f64, b: f64, values: &[f64]) -> Self {
        let n = values.len();
        let mut coeffs = vec![0.0; n];
        for (j, c) in coeffs.iter_mut().enumerate() {
            let mut s = 0.0;
            for (k, &v) in values.iter().rev().enumerate() {
                s += v * (PI * j as f64 * (k as f64 + 0.5) / n as f64).cos();
            }
            *c = s * 2.0 / n as f64;
        }
        coeffs[0] *= 0.5;
        Chebyshev { a, b, coeffs }
    }

    pub fn fit<F: FnMut(f64) -> f64>(a: f64, b: f64, n: usize, f: F) -> Self {
        let v: Vec<f64> = Self::nodes(a, b, n).into_iter().map(f).collect();
        Self::from_values(a, b, &v)
    }

    fn to_unit(&self, x: f64) -> f64 {
        (2.0 * x - self.a - self.b) / (self.b - self.a)
    }

    /// Clenshaw evaluation.
    pub fn eval(&self, x: f64) -> f64 {
        let u = self.to_unit(x);
        let mut b1 = 0.0;
        let mut b2 = 0.0;
        for &c in self.coeffs.iter().skip(1).rev() {
            let t = 2.0 * u * b1 - b2 + c;
            b2 = b1;
            b1 = t;
        }
        u * b1 - b2 + self.coeffs[0]
    }

    pub fn derivative(&self) -> Self {
        let n = self.coeffs.len();
        let mut d = vec![0.0; n.max(1)];
        if n > 1 {
            for k in (0..n - 1).rev() {
                let next = if k + 2 < n { d[k + 2] } else { 0.0 };
                d[k] = next + 2.0 * (k + 1) as f64 * self.coeffs[k + 1];
            }
            d[0] *= 0.5;
            d.truncate(n - 1);
        }
        let scale = 2.0 / (self.b - self.a);
        Chebyshev {
            a: self.a,
            b: self.b,
            coeffs: d.into_iter().map(|c| c * scale).collect(),
        }
    }

    /// Antiderivative vanishing at `x0`.
    pub fn integral(&self, x0: f64) -> Self {
        let c = &self.coeffs;
        let n = c.len();
        let at = |k: usize| c.get(k).copied().unwrap_or(0.0);
        let mut out = vec![0.0; n + 1];
        let scale = 0.5 * (self.b - self.a);
        for (k, slot) in out.iter_mut().enumerate().skip(1) {
            let prev = if k == 1 { 2.0 * at(0) } else { at(k - 1) };
            *slot = scale * (prev - at(k + 1)) / (2 * k) as f64;
        }
        let mut s = Chebyshev {
            a: self.a,
            b: self.b,
            coeffs: out,
        };
        let v = s.eval(x0);
        s.coeffs[0] -= v;
        s
    }

    /// Drops trailing coefficients below `tol` times the largest one, so
    /// rounding noise is not amplified by differentiation.
    pub fn chop(mut self, tol: f64) -> Self {
        let big = self.coeffs.iter().fold(0.0f64, |m, c| m.max(c.abs()));
        let keep = self
            .coeffs
            .iter()
            .rposition(|c| c.abs() > tol * big)
            .map_or(1, |i| i + 1);
        self.coeffs.truncate(keep);
        self
    }

    /// Magnitude of the trailing coefficients, a truncation-error proxy.
    pub fn tail(&self, k: usize) -> f64 {
        self.coeffs.iter().rev().take(k).map(|c| c.abs()).sum()
    }
}
