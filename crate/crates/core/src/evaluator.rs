//! Branch selection, remainder estimates and cross-branch comparison.

use std::fmt;

use num_complex::Complex64;

use crate::error::{domain, Error, Result};
use crate::numerics::{cdd, ComplexValue, Precision};
use crate::oracle::{eval_f, OracleMethod};
use crate::point::EvalPoint;
use crate::{lg, phase, saddle, temme};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Branch {
    LG,
    Saddle,
    Temme,
    MainTermOnly,
}

impl Branch {
    pub const ALL: [Branch; 4] = [
        Branch::LG,
        Branch::Saddle,
        Branch::Temme,
        Branch::MainTermOnly,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Branch::LG => "lg",
            Branch::Saddle => "saddle",
            Branch::Temme => "temme",
            Branch::MainTermOnly => "main",
        }
    }
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Branch {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "lg" => Ok(Branch::LG),
            "saddle" => Ok(Branch::Saddle),
            "temme" => Ok(Branch::Temme),
            "main" | "main-term-only" => Ok(Branch::MainTermOnly),
            other => Err(format!("unknown branch '{other}'")),
        }
    }
}

/// An asymptotic value `main · (1 + Σ correction_terms)`.
#[derive(Clone, Debug, PartialEq)]
pub struct ExpansionResult {
    pub value: ComplexValue,
    pub main_term: ComplexValue,
    pub order_used: usize,
    /// Relative corrections, one per included order beyond the first.
    pub correction_terms: Vec<ComplexValue>,
    /// Heuristic size of the error; an estimate, not a bound.
    pub est_remainder: f64,
    pub branch: Branch,
}

/// Safety factor applied to the remainder heuristic.
pub const REMAINDER_SAFETY: f64 = 2.0;

impl ExpansionResult {
    /// Composes `main · (1 + Σ corrections)`. The remainder estimate is
    /// twice |main| times the first omitted relative term when known,
    /// otherwise the last included one.
    pub fn assemble(
        branch: Branch,
        main: ComplexValue,
        order: usize,
        corrections: Vec<Complex64>,
        omitted: Option<Complex64>,
    ) -> Self {
        let factor: Complex64 = Complex64::new(1.0, 0.0) + corrections.iter().sum::<Complex64>();
        let value = ComplexValue::extended(main.to_cdd() * cdd::from_c64(factor));
        let last = omitted.or_else(|| corrections.last().copied());
        let est = last.map_or(0.0, |t| REMAINDER_SAFETY * main.norm() * t.norm());
        ExpansionResult {
            value,
            main_term: main,
            order_used: order,
            correction_terms: corrections
                .into_iter()
                .map(ComplexValue::standard)
                .collect(),
            est_remainder: est,
            branch,
        }
    }

    pub fn with_precision(mut self, precision: Precision) -> Self {
        self.value = self.value.with_precision(precision);
        self.main_term = self.main_term.with_precision(precision);
        self
    }
}

/// Order-by-order product of `(1 + Σ a_k)(1 + Σ b_k)`, where `a[k-1]` and
/// `b[k-1]` are the terms of order k. Keeps orders up to the shorter input.
pub(crate) fn product_terms(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    let n = a.len().min(b.len());
    (1..=n)
        .map(|k| {
            let cross: Complex64 = (1..k).map(|i| a[i - 1] * b[k - i - 1]).sum();
            a[k - 1] + b[k - 1] + cross
        })
        .collect()
}

/// Routing thresholds.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Config {
    /// z > 1 - delta goes to the temme branch.
    pub delta: f64,
    /// z below this only gets the main term.
    pub z_tiny: f64,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            delta: lg::DEFAULT_DELTA,
            z_tiny: 1e-3,
        }
    }
}

impl Config {
    /// The branch automatic routing picks at `p`.
    pub fn route(&self, p: &EvalPoint) -> Branch {
        if p.z < self.z_tiny {
            Branch::MainTermOnly
        } else if p.z <= 1.0 - self.delta {
            Branch::Saddle
        } else {
            Branch::Temme
        }
    }
}

pub fn evaluate(p: &EvalPoint, order: usize, branch: Option<Branch>) -> Result<ExpansionResult> {
    evaluate_with(p, order, branch, &Config::default())
}

/// Evaluates with `order` terms (main term plus `order - 1` corrections).
/// An explicit branch is used as asked; if the point is outside its regime
/// the branch's error is returned rather than falling back.
pub fn evaluate_with(
    p: &EvalPoint,
    order: usize,
    branch: Option<Branch>,
    config: &Config,
) -> Result<ExpansionResult> {
    if order == 0 {
        return Err(domain("expansion order must be at least 1"));
    }
    match branch.unwrap_or_else(|| config.route(p)) {
        Branch::LG => lg::lg_evaluate_with(p, order, config.delta),
        Branch::Saddle => saddle::saddle_evaluate(p, order),
        Branch::Temme => temme::temme_evaluate(p, order),
        Branch::MainTermOnly => main_only(p, config),
    }
}

/// The bare main term. Near z = 0 the first correction is A₁(z)/(ir) with
/// A₁(z) ≈ Λ(z)·z, which sets the estimate; elsewhere the estimate is the
/// routed branch's order-1 estimate, or infinity if that is unavailable.
fn main_only(p: &EvalPoint, config: &Config) -> Result<ExpansionResult> {
    let main = phase::main_term(p)?.value;
    let est = if p.z == 0.0 {
        0.0
    } else if p.z < config.z_tiny {
        let lam = lg::lambda_fn(p.alpha, p.z)?;
        REMAINDER_SAFETY * main.norm() * (lam * p.z / p.r).abs()
    } else {
        let routed = config.route(p);
        evaluate_with(p, 1, Some(routed), config).map_or(f64::INFINITY, |e| e.est_remainder)
    };
    Ok(ExpansionResult {
        value: main,
        main_term: main,
        order_used: 1,
        correction_terms: Vec::new(),
        est_remainder: est,
        branch: Branch::MainTermOnly,
    })
}

/// One branch at one order, measured against the oracle.
#[derive(Clone, Debug, PartialEq)]
pub struct BranchEntry {
    pub branch: Branch,
    pub order: usize,
    pub value: ComplexValue,
    pub rel_error: f64,
    pub est_remainder: f64,
}

/// Every branch valid at a point, next to the oracle value.
#[derive(Clone, Debug, PartialEq)]
pub struct BranchReport {
    pub point: EvalPoint,
    pub oracle: ComplexValue,
    pub oracle_method: OracleMethod,
    /// Ordered by branch (LG, saddle, temme, main) then by order.
    pub per_branch: Vec<BranchEntry>,
}

impl BranchReport {
    pub fn get(&self, branch: Branch, order: usize) -> Option<&BranchEntry> {
        self.per_branch
            .iter()
            .find(|e| e.branch == branch && e.order == order)
    }
}

pub fn compare(p: &EvalPoint, orders: &[usize]) -> Result<BranchReport> {
    compare_with(p, orders, &Config::default())
}

pub fn compare_with(p: &EvalPoint, orders: &[usize], config: &Config) -> Result<BranchReport> {
    let oracle = eval_f(p).map_err(|e| Error::Oracle(Box::new(e)))?;
    let mut orders = orders.to_vec();
    orders.sort_unstable();
    orders.dedup();
    let mut per_branch = Vec::new();
    for branch in Branch::ALL {
        let list: &[usize] = if branch == Branch::MainTermOnly {
            &[1]
        } else {
            &orders
        };
        for &n in list {
            if let Ok(e) = evaluate_with(p, n, Some(branch), config) {
                per_branch.push(BranchEntry {
                    branch,
                    order: e.order_used,
                    rel_error: e.value.rel_error_to(&oracle.value),
                    value: e.value,
                    est_remainder: e.est_remainder,
                });
            }
        }
    }
    Ok(BranchReport {
        point: *p,
        oracle: oracle.value,
        oracle_method: oracle.method,
        per_branch,
    })
}

/// Least-squares slope of log(err) against log(x).
pub fn fit_exponent(samples: &[(f64, f64)]) -> Result<f64> {
    if samples.len() < 3 {
        return Err(Error::InsufficientData(format!(
            "a decay fit needs at least 3 points, got {}",
            samples.len()
        )));
    }
    if samples.iter().any(|&(x, e)| !(x > 0.0) || !(e > 0.0)) {
        return Err(domain("decay fit needs positive abscissae and errors"));
    }
    let n = samples.len() as f64;
    let lx: Vec<f64> = samples.iter().map(|s| s.0.ln()).collect();
    let ly: Vec<f64> = samples.iter().map(|s| s.1.ln()).collect();
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxx: f64 = lx.iter().map(|x| (x - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::InsufficientData("all abscissae coincide".into()));
    }
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    Ok(sxy / sxx)
}

/// Measured exponent of the relative error in αr. `order` counts correction
/// terms as in the theorem's `Σ_{j=1}^{N}`, so the expansion evaluated has
/// `order + 1` terms and the expected slope is about `-(order + 1)`.
pub fn decay_fit(points: &[EvalPoint], order: usize) -> Result<f64> {
    decay_fit_with(points, order, &Config::default())
}

pub fn decay_fit_with(points: &[EvalPoint], order: usize, config: &Config) -> Result<f64> {
    if points.len() < 3 {
        return Err(Error::InsufficientData(format!(
            "a decay fit needs at least 3 points, got {}",
            points.len()
        )));
    }
    let mut samples = Vec::with_capacity(points.len());
    for p in points {
        let oracle = eval_f(p).map_err(|e| Error::Oracle(Box::new(e)))?;
        let e = evaluate_with(p, order + 1, None, config)?;
        samples.push((p.alpha * p.r, e.value.rel_error_to(&oracle.value)));
    }
    fit_exponent(&samples)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn branch_names_round_trip() {
        for b in Branch::ALL {
            assert_eq!(b.name().parse::<Branch>().unwrap(), b);
        }
        assert!("airy".parse::<Branch>().is_err());
    }

    #[test]
    fn assemble_composes_and_estimates() {
        let main = ComplexValue::standard(c(2.0, 0.0));
        let e =
            ExpansionResult::assemble(Branch::LG, main, 2, vec![c(0.1, 0.0)], Some(c(0.0, 0.01)));
        assert!((e.value.to_c64() - c(2.2, 0.0)).norm() < 1e-15);
        assert!((e.est_remainder - 0.04).abs() < 1e-15);
        let e = ExpansionResult::assemble(Branch::LG, main, 2, vec![c(0.1, 0.0)], None);
        assert!((e.est_remainder - 0.4).abs() < 1e-15);
        let e = ExpansionResult::assemble(Branch::LG, main, 1, vec![], None);
        assert_eq!(e.est_remainder, 0.0);
    }

    #[test]
    fn product_terms_orders() {
        let a = [c(1.0, 0.0), c(2.0, 0.0)];
        let b = [c(10.0, 0.0), c(20.0, 0.0)];
        // (1 + a1 + a2)(1 + b1 + b2): order 2 collects a2 + b2 + a1 b1
        let p = product_terms(&a, &b);
        assert_eq!(p, vec![c(11.0, 0.0), c(32.0, 0.0)]);
    }

    #[test]
    fn routing() {
        let cfg = Config::default();
        let at = |z| cfg.route(&EvalPoint::new(100.0, 0.1, z).unwrap());
        assert_eq!(at(1e-5), Branch::MainTermOnly);
        assert_eq!(at(0.5), Branch::Saddle);
        assert_eq!(at(0.9), Branch::Saddle);
        assert_eq!(at(0.99), Branch::Temme);
        assert_eq!(at(0.9999), Branch::Temme);
    }

    #[test]
    fn explicit_branch_is_passed_through() {
        let p = EvalPoint::new(100.0, 0.1, 0.6).unwrap();
        let a = evaluate(&p, 3, Some(Branch::LG)).unwrap();
        let b = lg::lg_evaluate(&p, 3).unwrap();
        assert_eq!(a, b);
        let q = EvalPoint::new(100.0, 0.1, 0.99).unwrap();
        assert!(evaluate(&q, 2, Some(Branch::LG))
            .unwrap_err()
            .is_input_error());
    }

    #[test]
    fn tiny_z_main_only() {
        let p = EvalPoint::new(100.0, 0.1, 1e-5).unwrap();
        let e = evaluate(&p, 1, None).unwrap();
        assert_eq!(e.branch, Branch::MainTermOnly);
        assert!((e.value.re() - 1.0).abs() < 1e-5);
        assert!(e.est_remainder > 0.0 && e.est_remainder < 1e-8);
        let origin = EvalPoint::new(100.0, 0.1, 0.0).unwrap();
        let e = evaluate(&origin, 3, None).unwrap();
        assert_eq!(e.value.to_c64(), c(1.0, 0.0));
        assert_eq!(e.est_remainder, 0.0);
    }

    #[test]
    fn fit_of_synthetic_data() {
        let flat: Vec<(f64, f64)> = [10.0, 20.0, 40.0].iter().map(|&x| (x, 3e-4)).collect();
        assert!(fit_exponent(&flat).unwrap().abs() < 1e-12);
        let sq: Vec<(f64, f64)> = [10.0, 20.0, 40.0, 80.0]
            .iter()
            .map(|&x| (x, 5.0 / (x * x)))
            .collect();
        assert!((fit_exponent(&sq).unwrap() + 2.0).abs() < 1e-12);
        assert!(matches!(
            fit_exponent(&sq[..2]),
            Err(Error::InsufficientData(_))
        ));
        let p = EvalPoint::new(100.0, 0.1, 0.5).unwrap();
        assert!(matches!(
            decay_fit(&[p, p], 1),
            Err(Error::InsufficientData(_))
        ));
    }
}
