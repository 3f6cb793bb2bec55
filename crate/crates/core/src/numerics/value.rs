use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_complex::{Complex, Complex64};

use super::cdd::{self, CDD};
use super::dd::DD;

/// Working precision of a value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Precision {
    /// IEEE double.
    Standard,
    /// Double-word, about 31 significant digits.
    Extended,
}

impl Precision {
    /// The lower of two precisions; mixed arithmetic runs at this one.
    pub fn meet(self, other: Precision) -> Precision {
        self.min(other)
    }
}

impl std::str::FromStr for Precision {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "standard" => Ok(Precision::Standard),
            "extended" => Ok(Precision::Extended),
            other => Err(format!("unknown precision '{other}'")),
        }
    }
}

/// A complex number carried at a selectable precision.
///
/// Standard values are stored rounded to `f64` in the high words, so that
/// any arithmetic involving a Standard operand behaves exactly like
/// `Complex64` arithmetic.
#[derive(Clone, Copy, PartialEq)]
pub struct ComplexValue {
    value: CDD,
    precision: Precision,
}

impl ComplexValue {
    pub fn new(value: CDD, precision: Precision) -> Self {
        let value = match precision {
            Precision::Extended => value,
            Precision::Standard => cdd::from_c64(cdd::to_c64(value)),
        };
        ComplexValue { value, precision }
    }

    pub fn extended(value: CDD) -> Self {
        ComplexValue::new(value, Precision::Extended)
    }

    pub fn standard(value: Complex64) -> Self {
        ComplexValue {
            value: cdd::from_c64(value),
            precision: Precision::Standard,
        }
    }

    pub fn from_parts(re: f64, im: f64, precision: Precision) -> Self {
        ComplexValue::new(Complex::new(DD::from_f64(re), DD::from_f64(im)), precision)
    }

    pub fn zero(precision: Precision) -> Self {
        ComplexValue::from_parts(0.0, 0.0, precision)
    }

    pub fn one(precision: Precision) -> Self {
        ComplexValue::from_parts(1.0, 0.0, precision)
    }

    pub fn precision(&self) -> Precision {
        self.precision
    }

    pub fn re(&self) -> f64 {
        self.value.re.to_f64()
    }

    pub fn im(&self) -> f64 {
        self.value.im.to_f64()
    }

    pub fn to_c64(&self) -> Complex64 {
        cdd::to_c64(self.value)
    }

    pub fn to_cdd(&self) -> CDD {
        self.value
    }

    pub fn with_precision(&self, precision: Precision) -> Self {
        ComplexValue::new(self.value, precision)
    }

    pub fn norm(&self) -> f64 {
        match self.precision {
            Precision::Standard => self.to_c64().norm(),
            Precision::Extended => cdd::abs(self.value).to_f64(),
        }
    }

    /// |self - other| / |other|
    pub fn rel_error_to(&self, reference: &ComplexValue) -> f64 {
        let d = cdd::abs(self.value - reference.value);
        (d / cdd::abs(reference.value)).to_f64()
    }

    fn binary(
        self,
        rhs: ComplexValue,
        ext: impl Fn(CDD, CDD) -> CDD,
        std: impl Fn(Complex64, Complex64) -> Complex64,
    ) -> ComplexValue {
        match self.precision.meet(rhs.precision) {
            Precision::Extended => ComplexValue::extended(ext(self.value, rhs.value)),
            Precision::Standard => ComplexValue::standard(std(self.to_c64(), rhs.to_c64())),
        }
    }
}

impl Add for ComplexValue {
    type Output = ComplexValue;
    fn add(self, rhs: ComplexValue) -> ComplexValue {
        self.binary(rhs, |a, b| a + b, |a, b| a + b)
    }
}

impl Sub for ComplexValue {
    type Output = ComplexValue;
    fn sub(self, rhs: ComplexValue) -> ComplexValue {
        self.binary(rhs, |a, b| a - b, |a, b| a - b)
    }
}

impl Mul for ComplexValue {
    type Output = ComplexValue;
    fn mul(self, rhs: ComplexValue) -> ComplexValue {
        self.binary(rhs, |a, b| a * b, |a, b| a * b)
    }
}

impl Div for ComplexValue {
    type Output = ComplexValue;
    fn div(self, rhs: ComplexValue) -> ComplexValue {
        self.binary(rhs, |a, b| a / b, |a, b| a / b)
    }
}

impl Neg for ComplexValue {
    type Output = ComplexValue;
    fn neg(self) -> ComplexValue {
        ComplexValue {
            value: -self.value,
            precision: self.precision,
        }
    }
}

impl fmt::Debug for ComplexValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}({:e}, {:e})", self.precision, self.re(), self.im())
    }
}
