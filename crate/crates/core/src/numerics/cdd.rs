//! Elementary functions on `Complex<DD>` with principal-branch conventions.

use num_complex::{Complex, Complex64};

use super::dd::DD;

pub type CDD = Complex<DD>;

#[inline]
pub fn from_c64(z: Complex64) -> CDD {
    Complex::new(DD::from_f64(z.re), DD::from_f64(z.im))
}

#[inline]
pub fn to_c64(z: CDD) -> Complex64 {
    Complex64::new(z.re.to_f64(), z.im.to_f64())
}

#[inline]
pub fn real(x: DD) -> CDD {
    Complex::new(x, DD::ZERO)
}

#[inline]
pub fn imag(y: DD) -> CDD {
    Complex::new(DD::ZERO, y)
}

pub fn abs(z: CDD) -> DD {
    let (a, b) = (z.re.abs(), z.im.abs());
    let (big, small) = if a >= b { (a, b) } else { (b, a) };
    if big.hi() == 0.0 {
        return DD::ZERO;
    }
    let q = small / big;
    big * (q.sqr() + 1.0).sqrt()
}

/// Principal argument in (-π, π].
pub fn arg(z: CDD) -> DD {
    z.im.atan2(z.re)
}

/// e^{iθ}
pub fn expi(theta: DD) -> CDD {
    let (s, c) = theta.sin_cos();
    Complex::new(c, s)
}

pub fn exp(z: CDD) -> CDD {
    let m = z.re.exp();
    let (s, c) = z.im.sin_cos();
    Complex::new(m * c, m * s)
}

/// Principal logarithm: imaginary part in (-π, π].
pub fn ln(z: CDD) -> CDD {
    Complex::new(abs(z).ln(), arg(z))
}

/// Principal power z^w = exp(w ln z).
pub fn powc(z: CDD, w: CDD) -> CDD {
    exp(w * ln(z))
}

/// Principal square root.
pub fn sqrt(z: CDD) -> CDD {
    if z.im.hi() == 0.0 && z.im.lo() == 0.0 {
        return if z.re.is_sign_negative() {
            Complex::new(DD::ZERO, (-z.re).sqrt())
        } else {
            Complex::new(z.re.sqrt(), DD::ZERO)
        };
    }
    let r = abs(z);
    let re = ((r + z.re) * 0.5).sqrt();
    let im = ((r - z.re) * 0.5).sqrt();
    if z.im.is_sign_negative() {
        Complex::new(re, -im)
    } else {
        Complex::new(re, im)
    }
}
