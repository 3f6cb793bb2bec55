//! Fixed-width number formatting shared by every output format.

use num_complex::Complex64;

/// Significant digits printed for values.
pub const VALUE_DIGITS: usize = 10;

/// `x` with ten significant digits in positional notation; values too large
/// or too small for that fall back to `e` notation.
pub fn sig10(x: f64) -> String {
    if !x.is_finite() {
        return format!("{x}");
    }
    if x == 0.0 {
        return format!("{:.*}", VALUE_DIGITS - 1, 0.0);
    }
    let sci = format!("{:.*e}", VALUE_DIGITS - 1, x);
    let exp: i32 = sci
        .rsplit('e')
        .next()
        .and_then(|e| e.parse().ok())
        .unwrap_or(0);
    if !(-7..=9).contains(&exp) {
        return sci;
    }
    let decimals = (VALUE_DIGITS as i32 - 1 - exp).max(0) as usize;
    format!("{x:.decimals$}")
}

fn split(z: Complex64) -> (String, char, String) {
    let sign = if z.im < 0.0 { '-' } else { '+' };
    (sig10(z.re), sign, sig10(z.im.abs()))
}

/// `a + bi`, the form used on the terminal and in markdown.
pub fn complex_spaced(z: Complex64) -> String {
    let (re, sign, im) = split(z);
    format!("{re} {sign} {im}i")
}

/// `a+bi`, the form used inside CSV and JSON fields.
pub fn complex_compact(z: Complex64) -> String {
    let (re, sign, im) = split(z);
    format!("{re}{sign}{im}i")
}

/// Relative errors: nine decimals down to 1e-4, `e` notation with ten
/// significant digits below that.
pub fn rel_error(e: f64) -> String {
    if e >= 1e-4 || e == 0.0 || !e.is_finite() {
        format!("{e:.9}")
    } else {
        format!("{e:.9e}")
    }
}

/// Lowercase `e` notation with ten significant digits, for CSV columns.
pub fn sci(x: f64) -> String {
    format!("{:.*e}", VALUE_DIGITS - 1, x)
}
