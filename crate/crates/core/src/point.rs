use crate::error::{domain, Result};
use crate::numerics::DD;

/// A parameter triple (r, α, z).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EvalPoint {
    pub r: f64,
    pub alpha: f64,
    pub z: f64,
}

impl EvalPoint {
    /// Checks `r > 0`, `0 <= α < 1`, `0 <= z < 1`.
    pub fn new(r: f64, alpha: f64, z: f64) -> Result<Self> {
        if !(r > 0.0 && r.is_finite()) {
            return Err(domain(format!("r must be positive and finite, got {r}")));
        }
        if !(0.0..1.0).contains(&alpha) {
            return Err(domain(format!("alpha must lie in [0, 1), got {alpha}")));
        }
        if !(0.0..1.0).contains(&z) {
            return Err(domain(format!("z must lie in [0, 1), got {z}")));
        }
        Ok(EvalPoint { r, alpha, z })
    }

    /// The spectral parameter t = αr, exact in double-word.
    pub fn t_spec(&self) -> DD {
        DD::mul_f64_exact(self.alpha, self.r)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation() {
        assert!(EvalPoint::new(100.0, 0.1, 0.99).is_ok());
        assert!(EvalPoint::new(100.0, 0.0, 0.0).is_ok());
        assert!(EvalPoint::new(0.0, 0.1, 0.5).is_err());
        assert!(EvalPoint::new(100.0, 1.0, 0.5).is_err());
        assert!(EvalPoint::new(100.0, 0.1, 1.0).is_err());
        assert!(EvalPoint::new(100.0, -0.1, 0.5).is_err());
        assert!(EvalPoint::new(f64::NAN, 0.1, 0.5).is_err());
    }

    #[test]
    fn t_spec_is_exact() {
        let p = EvalPoint::new(100.0, 0.1, 0.5).unwrap();
        let t = p.t_spec();
        // 0.1 is not representable; αr keeps the rounding residue in lo
        assert_eq!(t.hi(), 0.1 * 100.0);
        assert!(t.lo() != 0.0);
    }
}
