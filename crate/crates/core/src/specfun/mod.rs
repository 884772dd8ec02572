//! Incomplete gamma function at integer arguments.
//!
//! For `m >= 1` and integer `n >= 0`,
//!
//! ```text
//! Γ(m, n) = (m − 1)! · e^{−n} · S(m, n),     S(m, n) = Σ_{i=0}^{m−1} n^i / i!
//! ```
//!
//! Every threshold in this crate is a ratio in which the `e^{−n}` factor
//! cancels, so the functions here work with the rational part only:
//! [`partial_exp_sum`] is `S(m, n)` and [`scaled_incomplete_gamma`] is
//! `e^n · Γ(m, n) = (m − 1)! · S(m, n)`, an integer.
//!
//! Exact rationals are used up to [`EXACT_LIMIT`]; past that the values are
//! carried as logarithms (see [`Precision`]).

mod scalar;

pub use scalar::ExactScalar;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};

/// Largest size parameter for which [`Precision::Auto`] stays in exact mode.
pub const EXACT_LIMIT: u64 = 500;

/// Arithmetic mode for quantities built from factorials.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Precision {
    /// Exact rationals up to [`EXACT_LIMIT`], logarithms beyond.
    #[default]
    Auto,
    Exact,
    Float,
}

impl Precision {
    pub fn use_exact(self, size: u64) -> bool {
        match self {
            Precision::Auto => size <= EXACT_LIMIT,
            Precision::Exact => true,
            Precision::Float => false,
        }
    }
}

/// The integer arguments of `Γ(m, n)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GammaArgs {
    m: u64,
    n: u64,
}

impl GammaArgs {
    pub fn new(m: u64, n: u64) -> Result<Self> {
        if m == 0 {
            return Err(domain("incomplete gamma requires m >= 1"));
        }
        Ok(Self { m, n })
    }

    pub fn m(&self) -> u64 {
        self.m
    }

    pub fn n(&self) -> u64 {
        self.n
    }
}

/// `S(m, n) = Σ_{i=0}^{m−1} n^i / i!`.
pub fn partial_exp_sum(m: u64, n: u64) -> Result<ExactScalar> {
    partial_exp_sum_with(m, n, Precision::Auto)
}

pub fn partial_exp_sum_with(m: u64, n: u64, precision: Precision) -> Result<ExactScalar> {
    let args = GammaArgs::new(m, n)?;
    if precision.use_exact(m.max(n)) {
        let numerator = scaled_gamma_integer(args);
        let denominator = factorial(m - 1);
        return Ok(ExactScalar::from_ratio(BigRational::new(
            numerator.into(),
            denominator.into(),
        )));
    }
    // forward chain: term_0 = 1, term_i = term_{i-1} · n / i
    let nf = n as f64;
    Ok(ExactScalar::from_ln(ln_sum_of_chain(
        0.0,
        (1..m).map(|i| nf / i as f64),
    )))
}

/// `e^n · Γ(m, n) = (m − 1)! · S(m, n)`.
pub fn scaled_incomplete_gamma(m: u64, n: u64) -> Result<ExactScalar> {
    scaled_incomplete_gamma_with(m, n, Precision::Auto)
}

pub fn scaled_incomplete_gamma_with(m: u64, n: u64, precision: Precision) -> Result<ExactScalar> {
    let args = GammaArgs::new(m, n)?;
    if precision.use_exact(m.max(n)) {
        return Ok(ExactScalar::from_integer(BigInt::from(
            scaled_gamma_integer(args),
        )));
    }
    if n == 0 {
        let ln_fact: f64 = (1..m).map(|j| (j as f64).ln()).sum();
        return Ok(ExactScalar::from_ln(ln_fact));
    }
    // backward chain from the top term n^{m-1}: term_{i} = term_{i+1} · (i+1) / n
    let nf = n as f64;
    let top = (m - 1) as f64 * nf.ln();
    Ok(ExactScalar::from_ln(ln_sum_of_chain(
        top,
        (0..m - 1).rev().map(|i| (i + 1) as f64 / nf),
    )))
}

/// `e^n Γ(m+1, n) − m · e^n Γ(m, n) − n^m`, which vanishes identically.
///
/// Both gamma values are evaluated independently from their defining sums,
/// so a non-zero result flags an arithmetic defect.
pub fn gamma_recurrence_residual(m: u64, n: u64) -> Result<ExactScalar> {
    let lower = GammaArgs::new(m, n)?;
    let upper = GammaArgs::new(m + 1, n)?;
    let big = BigInt::from(scaled_gamma_integer(upper));
    let small = BigInt::from(scaled_gamma_integer(lower));
    let power = BigInt::from(num_traits::pow::Pow::pow(BigUint::from(n), m));
    Ok(ExactScalar::from_integer(big - BigInt::from(m) * small - power))
}

/// Logarithm of the large-`m` approximation `Γ(m, m+1) ≈ (m/e)^m √(π/(2m))`.
pub fn gamma_asymptotic_log(m: u64) -> Result<f64> {
    if m == 0 {
        return Err(domain("incomplete gamma requires m >= 1"));
    }
    let m = m as f64;
    Ok(m * (m.ln() - 1.0) + 0.5 * (std::f64::consts::PI / (2.0 * m)).ln())
}

/// Logarithm of the exact `Γ(m, m+1)`, including the `e^{−(m+1)}` factor.
pub fn ln_incomplete_gamma_at_successor(m: u64) -> Result<f64> {
    let scaled = scaled_incomplete_gamma(m, m + 1)?;
    Ok(scaled.ln().expect("scaled gamma is positive") - (m + 1) as f64)
}

/// `Σ_{i=0}^{m−1} n^i · (m−1)!/i!` by Horner's rule over the defining sum.
fn scaled_gamma_integer(args: GammaArgs) -> BigUint {
    let n = BigUint::from(args.n);
    let mut coefficient = BigUint::one();
    let mut acc = BigUint::one();
    for i in (0..args.m - 1).rev() {
        coefficient *= i + 1;
        acc = acc * &n + &coefficient;
    }
    acc
}

pub(crate) fn factorial(n: u64) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, k| acc * k)
}

/// `ln Σ_j t_j` for the chain `t_0 = e^{first_ln}`, `t_{j+1} = t_j · ratio_j`.
///
/// Terms are carried with a shared exponent offset so that chains whose
/// partial products overflow or underflow `f64` still sum accurately.
pub(crate) fn ln_sum_of_chain(first_ln: f64, ratios: impl IntoIterator<Item = f64>) -> f64 {
    const RESCALE: f64 = 1e200;
    let ln_rescale = RESCALE.ln();
    let mut offset = first_ln;
    let mut term = 1.0f64;
    let mut acc = 1.0f64;
    for r in ratios {
        term *= r;
        if term.is_zero() {
            break;
        }
        acc += term;
        if acc > RESCALE {
            acc /= RESCALE;
            term /= RESCALE;
            offset += ln_rescale;
        }
    }
    offset + acc.ln()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn frac(n: i64, d: i64) -> ExactScalar {
        ExactScalar::from_fraction(n, d)
    }

    #[test]
    fn partial_sum_examples() {
        for n in [0, 1, 7, 300] {
            assert_eq!(partial_exp_sum(1, n).unwrap(), frac(1, 1));
        }
        assert_eq!(partial_exp_sum(3, 4).unwrap(), frac(13, 1));
        assert_eq!(partial_exp_sum(4, 5).unwrap(), frac(118, 3));
    }

    #[test]
    fn scaled_gamma_examples() {
        assert_eq!(scaled_incomplete_gamma(3, 4).unwrap(), frac(26, 1));
        assert_eq!(scaled_incomplete_gamma(1, 9).unwrap(), frac(1, 1));
        assert_eq!(scaled_incomplete_gamma(4, 5).unwrap(), frac(236, 1));
        assert_eq!(scaled_incomplete_gamma(5, 0).unwrap(), frac(24, 1));
    }

    #[test]
    fn zero_order_is_rejected() {
        assert!(partial_exp_sum(0, 3).is_err());
        assert!(scaled_incomplete_gamma(0, 3).is_err());
        assert!(gamma_recurrence_residual(0, 3).is_err());
        assert!(gamma_asymptotic_log(0).is_err());
    }

    #[test]
    fn recurrence_residual_examples() {
        for (m, n) in [(3, 4), (1, 5), (7, 8), (1, 0), (12, 0)] {
            assert!(gamma_recurrence_residual(m, n).unwrap().is_zero(), "({m},{n})");
        }
    }

    #[test]
    fn asymptotic_log_examples() {
        let e = std::f64::consts::E;
        let pi = std::f64::consts::PI;
        let direct3 = ((3.0 / e).powi(3) * (pi / 6.0).sqrt()).ln();
        assert!((gamma_asymptotic_log(3).unwrap() - direct3).abs() < 1e-14);
        assert!((gamma_asymptotic_log(3).unwrap() + 0.027_678).abs() < 1e-5);
        let direct1 = (e.recip() * (pi / 2.0).sqrt()).ln();
        assert!((gamma_asymptotic_log(1).unwrap() - direct1).abs() < 1e-14);
    }

    #[test]
    fn asymptotic_ratio_gap_shrinks() {
        let gaps: Vec<f64> = [10u64, 50, 100, 500]
            .iter()
            .map(|&m| {
                let ratio = (gamma_asymptotic_log(m).unwrap()
                    - ln_incomplete_gamma_at_successor(m).unwrap())
                .exp();
                // the asymptotic form overshoots: exact/asymptotic < 1
                (1.0 / ratio - 1.0).abs()
            })
            .collect();
        assert!(gaps.windows(2).all(|w| w[1] < w[0]), "{gaps:?}");
        // ~ 1 − √(2/(πm)) + O(1/m) at m = 100
        let ratio_100 = (ln_incomplete_gamma_at_successor(100).unwrap()
            - gamma_asymptotic_log(100).unwrap())
        .exp();
        assert!((ratio_100 - 0.894_952_894).abs() < 1e-8, "{ratio_100}");
    }

    #[test]
    fn log_mode_matches_exact_mode() {
        for (m, n) in [(1, 0), (1, 4), (3, 4), (40, 41), (200, 13), (300, 301), (17, 250)] {
            let exact = scaled_incomplete_gamma_with(m, n, Precision::Exact).unwrap();
            let float = scaled_incomplete_gamma_with(m, n, Precision::Float).unwrap();
            let (a, b) = (exact.ln().unwrap(), float.ln().unwrap());
            assert!((a - b).abs() <= 1e-12 * a.abs().max(1.0), "({m},{n}): {a} vs {b}");

            let exact = partial_exp_sum_with(m, n, Precision::Exact).unwrap();
            let float = partial_exp_sum_with(m, n, Precision::Float).unwrap();
            let (a, b) = (exact.ln().unwrap(), float.ln().unwrap());
            assert!((a - b).abs() <= 1e-12 * a.abs().max(1.0), "({m},{n}): {a} vs {b}");
        }
    }

    #[test]
    fn chain_sum_survives_overflow() {
        // Σ_{i=0}^{999} 10^i = (10^1000 − 1)/9
        let got = ln_sum_of_chain(0.0, std::iter::repeat_n(10.0, 999));
        let expected = 1000.0 * 10f64.ln() - 9f64.ln();
        assert!((got - expected).abs() < 1e-10);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn partial_sum_increases_with_order(m in 1u64..120, n in 1u64..120) {
                let a = partial_exp_sum(m, n).unwrap();
                let b = partial_exp_sum(m + 1, n).unwrap();
                prop_assert!(b.as_ratio().unwrap() > a.as_ratio().unwrap());
            }

            #[test]
            fn recurrence_holds(m in 1u64..200, n in 0u64..200) {
                prop_assert!(gamma_recurrence_residual(m, n).unwrap().is_zero());
            }
        }
    }
}
