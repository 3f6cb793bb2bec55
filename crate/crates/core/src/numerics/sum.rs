//! Order-independent summation.
//!
//! Every term is split into its `f64` words and accumulated exactly as a
//! non-overlapping expansion (Shewchuk). The total is rounded once, so the
//! result depends only on the multiset of terms, never on their order or on
//! how the input was chunked.

use num_complex::Complex;

use super::dd::DD;
use super::value::{ComplexValue, Precision};

/// Exact running sum of `f64` values.
#[derive(Clone, Debug, Default)]
pub struct ExactAccumulator {
    partials: Vec<f64>,
}

impl ExactAccumulator {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: f64) {
        let mut x = x;
        let mut i = 0;
        for j in 0..self.partials.len() {
            let mut y = self.partials[j];
            if x.abs() < y.abs() {
                std::mem::swap(&mut x, &mut y);
            }
            let hi = x + y;
            let lo = y - (hi - x);
            if lo != 0.0 {
                self.partials[i] = lo;
                i += 1;
            }
            x = hi;
        }
        self.partials.truncate(i);
        self.partials.push(x);
    }

    pub fn add_dd(&mut self, x: DD) {
        self.add(x.hi());
        self.add(x.lo());
    }

    /// Folds another exact sum into this one.
    pub fn merge(&mut self, other: &ExactAccumulator) {
        for &p in &other.partials {
            self.add(p);
        }
    }

    /// Correctly rounded value of the exact sum.
    pub fn round_f64(&self) -> f64 {
        round_partials(&self.partials)
    }

    /// The exact sum rounded to double-word: hi is the correctly rounded
    /// sum and lo the correctly rounded remainder.
    pub fn round_dd(&self) -> DD {
        let hi = self.round_f64();
        let mut rest = self.clone();
        rest.add(-hi);
        DD::new(hi, rest.round_f64())
    }
}

fn round_partials(p: &[f64]) -> f64 {
    let mut n = p.len();
    if n == 0 {
        return 0.0;
    }
    n -= 1;
    let mut hi = p[n];
    let mut lo = 0.0;
    while n > 0 {
        let x = hi;
        n -= 1;
        let y = p[n];
        hi = x + y;
        let yr = hi - x;
        lo = y - yr;
        if lo != 0.0 {
            break;
        }
    }
    // Half-way case: the remaining partials decide the rounding direction.
    if n > 0 && ((lo < 0.0 && p[n - 1] < 0.0) || (lo > 0.0 && p[n - 1] > 0.0)) {
        let y = lo * 2.0;
        let x = hi + y;
        let yr = x - hi;
        if y == yr {
            hi = x;
        }
    }
    hi
}

/// Streaming exact complex accumulator.
#[derive(Clone, Debug, Default)]
pub struct CompensatedSum {
    re: ExactAccumulator,
    im: ExactAccumulator,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, z: Complex<DD>) {
        self.re.add_dd(z.re);
        self.im.add_dd(z.im);
    }

    pub fn merge(&mut self, other: &CompensatedSum) {
        self.re.merge(&other.re);
        self.im.merge(&other.im);
    }

    pub fn total(&self) -> Complex<DD> {
        Complex::new(self.re.round_dd(), self.im.round_dd())
    }
}

/// Sum of a finite sequence, returned at Extended precision. The empty sum
/// is zero.
pub fn compensated_sum<I>(terms: I) -> ComplexValue
where
    I: IntoIterator<Item = ComplexValue>,
{
    let mut acc = CompensatedSum::new();
    for t in terms {
        acc.add(t.to_cdd());
    }
    ComplexValue::new(acc.total(), Precision::Extended)
}
