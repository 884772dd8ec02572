//! Offspring laws of the rumor on the Cayley tree `T_d`.
//!
//! * `X`: ignorant neighbors a non-root spreader contacts before stifling;
//! * `N`: the same count for the root, which starts with `d + 1` ignorants;
//! * `X'`, `N'`: the number of those contacts that turn into spreaders when
//!   each contacted ignorant spreads with probability `p` (binomial thinning);
//! * `β(d)`: probability that a non-root spreader contacts one designated
//!   ignorant neighbor before stifling.
//!
//! All laws come from the contact-sequence picture: a spreader of degree
//! `d + 1` picks neighbors uniformly at random and stops at the first pick
//! that is not an ignorant.

mod pmf;

pub use pmf::Pmf;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::error::{domain, ensure_degree, ensure_probability, Result};
use crate::specfun::{
    factorial, ln_sum_of_chain, scaled_incomplete_gamma_with, ExactScalar, Precision,
};

/// Which closed form of `β` to use.
///
/// `Paper` is the published closed form `(e^{d+1}Γ(d,d+1) − Γ(d))/(d+1)^d`;
/// `Series` sums every contact path, including the one that reaches the
/// designated neighbor on the last possible attempt. They differ by exactly
/// `(d−1)!/(d+1)^d` (see [`beta_gap`]).
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum BetaForm {
    #[default]
    Paper,
    Series,
}

/// `P(X = i) = C(d,i)·(i+1)!/(d+1)^{i+1}` on `{0, …, d}`.
pub fn law_x(d: u32) -> Result<Pmf> {
    ensure_degree(d, 2)?;
    let base = BigInt::from(d + 1);
    let mut falling = BigInt::one(); // d!/(d−i)!
    let mut power = base.clone(); // (d+1)^{i+1}
    let mut masses = Vec::with_capacity(d as usize + 1);
    for i in 0..=d {
        if i > 0 {
            falling *= d - i + 1;
            power *= &base;
        }
        masses.push(BigRational::new(&falling * (i + 1), power.clone()));
    }
    Pmf::from_exact(0, masses)
}

/// `P(N = i) = i!·C(d+1,i)·i/(d+1)^{i+1}` on `{1, …, d+1}`.
pub fn law_n(d: u32) -> Result<Pmf> {
    ensure_degree(d, 2)?;
    let base = BigInt::from(d + 1);
    let mut falling = BigInt::one(); // (d+1)!/(d+1−i)!
    let mut power = base.clone();
    let mut masses = Vec::with_capacity(d as usize + 1);
    for i in 1..=d + 1 {
        falling *= d + 2 - i;
        power *= &base;
        masses.push(BigRational::new(&falling * i, power.clone()));
    }
    Pmf::from_exact(1, masses)
}

/// Law of `X'`: `law_x(d)` thinned with probability `p`.
pub fn offspring_law(d: u32, p: f64) -> Result<Pmf> {
    ensure_probability(p)?;
    if p == 1.0 {
        return law_x(d);
    }
    law_x(d)?.thinned(p)
}

/// Law of `N'` on `{0, …, d+1}`.
///
/// Evaluated by binomial mixing `Σ_k C(k,i) p^i (1−p)^{k−i} P(N = k)`, which
/// is the printed closed form with the `(p/(1−p))^i` factor distributed over
/// the sum; at `p = 1` it is `law_n(d)` with `P(N' = 0) = 0`.
pub fn law_n_prime(d: u32, p: f64) -> Result<Pmf> {
    ensure_probability(p)?;
    let n = law_n(d)?;
    if p == 1.0 {
        return Ok(n.extended_down_to(0));
    }
    n.thinned(p)
}

/// Exact law of `N'` for rational `p`.
pub fn law_n_prime_exact(d: u32, p: &BigRational) -> Result<Pmf> {
    let pf = p.to_f64().unwrap_or(f64::NAN);
    ensure_probability(pf)?;
    let n = law_n(d)?;
    if p.is_one() {
        return Ok(n.extended_down_to(0));
    }
    n.thinned_exact(p)
}

/// `P(N' = i)` by the closed form
/// `(p/(1−p))^i /(d+1) · Σ_{k=i}^{d+1} k·k!·C(k,i)·C(d+1,k)·((1−p)/(d+1))^k`,
/// defined for `p < 1`.
pub fn law_n_prime_closed_form(d: u32, p: f64) -> Result<Vec<f64>> {
    ensure_degree(d, 2)?;
    if !(p > 0.0 && p < 1.0) {
        return Err(domain("the closed form of N' needs 0 < p < 1"));
    }
    let top = d as usize + 1;
    let q = (1.0 - p) / (d + 1) as f64;
    let ratio = p / (1.0 - p);
    // falling[k] = k!·C(d+1,k) = (d+1)!/(d+1−k)!
    let mut falling = vec![1.0f64; top + 1];
    for k in 1..=top {
        falling[k] = falling[k - 1] * (top + 1 - k) as f64;
    }
    let out = (0..=top)
        .map(|i| {
            let inner: f64 = (i..=top)
                .map(|k| k as f64 * falling[k] * binomial(k, i) * q.powi(k as i32))
                .sum();
            ratio.powi(i as i32) * inner / (d + 1) as f64
        })
        .collect();
    Ok(out)
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, j| acc * (n - j) as f64 / (j + 1) as f64)
}

/// `E(X) = d·e^{d+1}Γ(d,d+1)/(d+1)^d = d!·S(d,d+1)/(d+1)^d`.
pub fn mean_x(d: u32) -> Result<ExactScalar> {
    mean_x_with(d, Precision::Auto)
}

pub fn mean_x_with(d: u32, precision: Precision) -> Result<ExactScalar> {
    ensure_degree(d, 2)?;
    if precision.use_exact(d as u64 + 1) {
        let scaled = scaled_gamma_ratio(d)?;
        return Ok(ExactScalar::from_ratio(scaled * BigInt::from(d)));
    }
    Ok(ExactScalar::from_ln(ln_mean_terms(d, 0)))
}

/// `β(d)` in the published closed form `(d−1)!·(S(d,d+1) − 1)/(d+1)^d`.
pub fn beta_paper(d: u32) -> Result<ExactScalar> {
    beta_paper_with(d, Precision::Auto)
}

pub fn beta_paper_with(d: u32, precision: Precision) -> Result<ExactScalar> {
    // d = 1 is admitted here: hub-tree thresholds evaluate β(k−1) for k = 2.
    ensure_degree(d, 1)?;
    if precision.use_exact(d as u64 + 1) {
        let scaled = scaled_gamma_ratio(d)?;
        let correction = BigRational::new(
            factorial(d as u64 - 1).into(),
            num_traits::pow::Pow::pow(BigUint::from(d + 1), d).into(),
        );
        return Ok(ExactScalar::from_ratio(scaled - correction));
    }
    if d == 1 {
        return Ok(ExactScalar::zero());
    }
    Ok(ExactScalar::from_ln(ln_mean_terms(d, 1) - (d as f64).ln()))
}

/// `β(d)` as the first-principles sum over the attempt `i` at which the
/// designated neighbor is first contacted:
/// `Σ_{i=1}^{d} [(d−1)!/(d−i)!]/(d+1)^i`.
pub fn beta_series(d: u32) -> Result<ExactScalar> {
    beta_series_with(d, Precision::Auto)
}

pub fn beta_series_with(d: u32, precision: Precision) -> Result<ExactScalar> {
    ensure_degree(d, 1)?;
    if precision.use_exact(d as u64 + 1) {
        let base = BigInt::from(d + 1);
        let mut falling = BigInt::one(); // (d−1)!/(d−i)!
        let mut power = base.clone();
        let mut sum = BigRational::new(BigInt::one(), base.clone());
        for i in 2..=d {
            falling *= d - i + 1;
            power *= &base;
            sum += BigRational::new(falling.clone(), power.clone());
        }
        return Ok(ExactScalar::from_ratio(sum));
    }
    let df = d as f64;
    Ok(ExactScalar::from_ln(ln_sum_of_chain(
        -(df + 1.0).ln(),
        (1..d).map(|i| (d - i) as f64 / (df + 1.0)),
    )))
}

pub fn beta(d: u32, form: BetaForm) -> Result<ExactScalar> {
    beta_with(d, form, Precision::Auto)
}

pub fn beta_with(d: u32, form: BetaForm, precision: Precision) -> Result<ExactScalar> {
    match form {
        BetaForm::Paper => beta_paper_with(d, precision),
        BetaForm::Series => beta_series_with(d, precision),
    }
}

/// `beta_series(d) − beta_paper(d) = (d−1)!/(d+1)^d`, the probability of the
/// contact path that reaches the designated neighbor on attempt `d`.
pub fn beta_gap(d: u32) -> Result<ExactScalar> {
    ensure_degree(d, 1)?;
    if (d as u64) < crate::specfun::EXACT_LIMIT {
        return Ok(ExactScalar::from_fraction(
            BigInt::from(factorial(d as u64 - 1)),
            BigInt::from(num_traits::pow::Pow::pow(BigUint::from(d + 1), d)),
        ));
    }
    let ln_fact: f64 = (1..d).map(|j| (j as f64).ln()).sum();
    Ok(ExactScalar::from_ln(ln_fact - d as f64 * ((d + 1) as f64).ln()))
}

/// `(d−1)!·S(d, d+1)/(d+1)^d` as an exact rational.
fn scaled_gamma_ratio(d: u32) -> Result<BigRational> {
    let scaled = scaled_incomplete_gamma_with(d as u64, d as u64 + 1, Precision::Exact)?;
    let numerator = scaled.as_ratio().expect("exact mode").numer().clone();
    let power = num_traits::pow::Pow::pow(BigInt::from(d + 1), d);
    Ok(BigRational::new(numerator, power))
}

/// `ln Σ_{i=from}^{d−1} t_i` with `t_i = d!·(d+1)^{i−d}/i!`, so that
/// `E(X) = Σ_{i≥0} t_i` and `d·β_paper(d) = Σ_{i≥1} t_i`.
///
/// Every `t_i` lies in `(0, 1)` and the chain runs downward from
/// `t_{d−1} = d/(d+1)`, so no factorial is ever formed.
fn ln_mean_terms(d: u32, from: u32) -> f64 {
    let df = d as f64;
    ln_sum_of_chain(
        (df / (df + 1.0)).ln(),
        (from + 1..d).rev().map(|i| i as f64 / (df + 1.0)),
    )
}

/// What a generating function counts.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PgfKind {
    /// `X'`, spreaders generated by a non-root spreader.
    OffspringXPrime,
    /// `N'`, spreaders generated by the root.
    RootNPrime,
}

/// Parameters of `G_{X'}` or `G_{N'}`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PgfSpec {
    d: u32,
    p: f64,
    kind: PgfKind,
}

impl PgfSpec {
    pub fn new(d: u32, p: f64, kind: PgfKind) -> Result<Self> {
        ensure_degree(d, 2)?;
        ensure_probability(p)?;
        Ok(Self { d, p, kind })
    }

    pub fn offspring(d: u32, p: f64) -> Result<Self> {
        Self::new(d, p, PgfKind::OffspringXPrime)
    }

    pub fn root(d: u32, p: f64) -> Result<Self> {
        Self::new(d, p, PgfKind::RootNPrime)
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn kind(&self) -> PgfKind {
        self.kind
    }

    /// `ζ = (sp + 1 − p)/(d + 1)`.
    pub fn zeta(&self, s: f64) -> f64 {
        (s * self.p + 1.0 - self.p) / (self.d + 1) as f64
    }

    pub fn eval(&self, s: f64) -> Result<f64> {
        match self.kind {
            PgfKind::OffspringXPrime => pgf_x_prime(self, s),
            PgfKind::RootNPrime => pgf_n_prime(self, s),
        }
    }
}

fn ensure_unit(s: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&s) {
        return Err(domain(format!("pgf argument must lie in [0, 1], got {s}")));
    }
    Ok(())
}

/// `G_{X'}(s) = (d!/(d+1))·Σ_{n=0}^{d} (n+1)·ζ^n/(d−n)!`.
///
/// Written as a polynomial in `u = sp + 1 − p` whose coefficients
/// `(n+1)·d!/((d−n)!·(d+1)^{n+1})` are built as running products, which
/// keeps it finite at `ζ = 0` and free of factorial overflow.
pub fn pgf_x_prime(spec: &PgfSpec, s: f64) -> Result<f64> {
    ensure_unit(s)?;
    if s == 1.0 {
        return Ok(1.0);
    }
    let d = spec.d;
    let u = s * spec.p + 1.0 - spec.p;
    let base = (d + 1) as f64;
    let mut coeffs = Vec::with_capacity(d as usize + 1);
    let mut falling = 1.0; // d!/((d−n)!(d+1)^n)
    for n in 0..=d {
        if n > 0 {
            falling *= (d - n + 1) as f64 / base;
        }
        coeffs.push((n + 1) as f64 * falling / base);
    }
    Ok(horner(&coeffs, u))
}

/// `G_{N'}(s) = d!·Σ_{n=1}^{d+1} n·ζ^n/(d+1−n)!`.
pub fn pgf_n_prime(spec: &PgfSpec, s: f64) -> Result<f64> {
    ensure_unit(s)?;
    if s == 1.0 {
        return Ok(1.0);
    }
    let d = spec.d;
    let u = s * spec.p + 1.0 - spec.p;
    let base = (d + 1) as f64;
    let mut coeffs = vec![0.0];
    let mut falling = 1.0; // (d+1)!/((d+1−n)!(d+1)^n)
    for n in 1..=d + 1 {
        falling *= (d + 2 - n) as f64 / base;
        coeffs.push(n as f64 * falling / base);
    }
    Ok(horner(&coeffs, u))
}

fn horner(coeffs: &[f64], x: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
}
