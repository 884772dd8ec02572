//! Critical values and survival probabilities.
//!
//! The rumor on `T_d` survives exactly when the branching process of
//! spreaders with offspring `X'` and `N'` initial particles survives, so
//! `p_c(d) = 1/E(X)`, `θ(d, p) = 1 − G_{N'}(ψ)` with `ψ` the extinction
//! probability of one lineage, and on hub trees the mean number of hubs
//! reached from a hub is `E(X)·α·β(k−1)^{h−1}`.

use std::cmp::Ordering;

use num_rational::BigRational;
use num_traits::One;
use serde::Serialize;

use crate::error::{domain, ensure_degree, ensure_probability, Error, Result};
use crate::laws::{self, BetaForm, PgfSpec};
use crate::specfun::{ExactScalar, Precision};

/// Bisection bracket `[0, 1 − ROOT_BRACKET_GAP]`.
pub const ROOT_BRACKET_GAP: f64 = 1e-9;
pub const BISECTION_MAX_ITERATIONS: u32 = 200;
pub const BISECTION_TOLERANCE: f64 = 1e-12;
pub const FIXED_POINT_MAX_ITERATIONS: u64 = 1_000_000;
/// The printed double sum for `θ` carries `(1−p)^{−i}`; it is only evaluated
/// up to this spread probability.
pub const DOUBLE_SUM_MAX_P: f64 = 1.0 - 1e-6;

/// A critical value with its exact form (when representable), float value,
/// large-`d` approximation and whether it lies strictly below one.
#[derive(Clone, Debug, Serialize)]
pub struct ThresholdReport {
    pub exact: Option<ExactScalar>,
    pub float_value: f64,
    pub asymptotic_value: Option<f64>,
    pub feasible: bool,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}

impl ThresholdReport {
    fn from_scalar(value: ExactScalar, asymptotic_value: Option<f64>) -> Self {
        Self {
            float_value: value.to_f64(),
            feasible: value.cmp_one() == Ordering::Less,
            exact: Some(value),
            asymptotic_value,
            warnings: Vec::new(),
        }
    }
}

/// Smallest non-negative fixed point of `G_{X'}`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RootResult {
    pub psi: f64,
    pub iterations: u64,
    /// `|G_{X'}(psi) − psi|`.
    pub residual: f64,
}

/// `p_c(d) = (d+1)^d / (d!·S(d, d+1)) = 1/E(X)`.
pub fn p_critical(d: u32) -> Result<ThresholdReport> {
    p_critical_with(d, Precision::Auto)
}

pub fn p_critical_with(d: u32, precision: Precision) -> Result<ThresholdReport> {
    ensure_degree(d, 2)?;
    let value = laws::mean_x_with(d, precision)?.recip()?;
    Ok(ThresholdReport::from_scalar(value, Some(p_critical_asymptotic(d))))
}

/// `√(2/(πd))`.
pub fn p_critical_asymptotic(d: u32) -> f64 {
    (2.0 / (std::f64::consts::PI * d as f64)).sqrt()
}

/// Whether `p·E(X) ≤ 1`, decided in exact arithmetic when `E(X)` is exact
/// (every `f64` is a dyadic rational).
pub fn is_subcritical(d: u32, p: f64) -> Result<bool> {
    ensure_degree(d, 2)?;
    ensure_probability(p)?;
    let mean = laws::mean_x(d)?;
    Ok(match mean.as_ratio() {
        Some(m) => {
            let p = BigRational::from_float(p).expect("finite p");
            p * m <= BigRational::one()
        }
        None => p.ln() + mean.ln().expect("positive mean") <= 0.0,
    })
}

/// `ψ` by bisection, with the fixed-point iteration as a cross-check.
pub fn psi_root(d: u32, p: f64) -> Result<RootResult> {
    let bisected = psi_bisection(d, p)?;
    let iterated = psi_fixed_point(d, p)?;
    // fixed-point error is |Δ|/(1 − G'(ψ)), loose only very near p_c
    if (bisected.psi - iterated.psi).abs() > 1e-8 {
        return Err(Error::NumericFault(format!(
            "psi for d={d}, p={p}: bisection {} vs fixed point {}",
            bisected.psi, iterated.psi
        )));
    }
    Ok(bisected)
}

/// `ψ` by bisection of `G_{X'}(s) − s` on `[0, 1 − 1e−9]`.
pub fn psi_bisection(d: u32, p: f64) -> Result<RootResult> {
    let spec = PgfSpec::offspring(d, p)?;
    if is_subcritical(d, p)? {
        return Ok(RootResult {
            psi: 1.0,
            iterations: 0,
            residual: 0.0,
        });
    }
    let f = |s: f64| -> Result<f64> { Ok(spec.eval(s)? - s) };
    let mut lo = 0.0;
    let mut hi = 1.0 - ROOT_BRACKET_GAP;
    if f(hi)? >= 0.0 {
        // the root sits in (1 − gap, 1): only reachable for p within ~1e−9 of p_c
        let residual = f(hi)?.abs();
        return Ok(RootResult {
            psi: hi,
            iterations: 0,
            residual,
        });
    }
    let mut iterations = 0;
    while hi - lo > BISECTION_TOLERANCE {
        if iterations == BISECTION_MAX_ITERATIONS {
            return Err(Error::NumericFault(format!(
                "bisection for psi(d={d}, p={p}) did not converge"
            )));
        }
        iterations += 1;
        let mid = 0.5 * (lo + hi);
        if f(mid)? > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let psi = 0.5 * (lo + hi);
    let residual = f(psi)?.abs();
    if residual > 1e-10 {
        return Err(Error::NumericFault(format!(
            "psi(d={d}, p={p}) residual {residual} exceeds 1e-10"
        )));
    }
    Ok(RootResult {
        psi,
        iterations: iterations as u64,
        residual,
    })
}

/// `ψ` as the limit of `ψ_{n+1} = G_{X'}(ψ_n)` from `ψ_0 = 0`.
pub fn psi_fixed_point(d: u32, p: f64) -> Result<RootResult> {
    let spec = PgfSpec::offspring(d, p)?;
    if is_subcritical(d, p)? {
        return Ok(RootResult {
            psi: 1.0,
            iterations: 0,
            residual: 0.0,
        });
    }
    let mut s = 0.0;
    for iteration in 1..=FIXED_POINT_MAX_ITERATIONS {
        let next = spec.eval(s)?;
        let step = next - s;
        s = next;
        if step <= 1e-16 {
            return Ok(RootResult {
                psi: s,
                iterations: iteration,
                residual: (spec.eval(s)? - s).abs(),
            });
        }
    }
    Err(Error::NumericFault(format!(
        "fixed-point iteration for psi(d={d}, p={p}) hit the iteration cap"
    )))
}

/// Survival probability `θ(d, p) = 1 − G_{N'}(ψ)`.
pub fn theta(d: u32, p: f64) -> Result<f64> {
    if is_subcritical(d, p)? {
        return Ok(0.0);
    }
    let psi = psi_root(d, p)?.psi;
    let g = PgfSpec::root(d, p)?.eval(psi)?;
    Ok((1.0 - g).clamp(0.0, 1.0))
}

/// `θ` through the printed double sum
/// `1 − (1/(d+1)) Σ_i (pψ/(1−p))^i Σ_{k≥i} k·k!·C(k,i)·C(d+1,k)·((1−p)/(d+1))^k`.
pub fn theta_double_sum(d: u32, p: f64) -> Result<f64> {
    ensure_degree(d, 2)?;
    ensure_probability(p)?;
    if p > DOUBLE_SUM_MAX_P {
        return Err(domain(format!(
            "the double-sum form of theta is singular at p = 1; use p <= {DOUBLE_SUM_MAX_P}"
        )));
    }
    if is_subcritical(d, p)? {
        return Ok(0.0);
    }
    let psi = psi_root(d, p)?.psi;
    let top = d as usize + 1;
    let q = (1.0 - p) / (d + 1) as f64;
    let ratio = p * psi / (1.0 - p);
    let mut falling = vec![1.0f64; top + 1];
    for k in 1..=top {
        falling[k] = falling[k - 1] * (top + 1 - k) as f64;
    }
    let mut extinction = 0.0;
    for i in 0..=top {
        let mut binom = 1.0; // C(k, i), starting at k = i
        let mut inner = 0.0;
        for (k, &fall) in falling.iter().enumerate().skip(i) {
            if k > i {
                binom *= k as f64 / (k - i) as f64;
            }
            inner += k as f64 * fall * binom * q.powi(k as i32);
        }
        extinction += ratio.powi(i as i32) * inner;
    }
    Ok(1.0 - extinction / (d + 1) as f64)
}

/// `α_c(d, k, h) = p_c(d)·β(k−1)^{1−h}` with the published `β`.
pub fn alpha_critical(d: u32, k: u32, h: u32) -> Result<ThresholdReport> {
    alpha_critical_with(d, k, h, BetaForm::Paper, Precision::Auto)
}

pub fn alpha_critical_with(
    d: u32,
    k: u32,
    h: u32,
    form: BetaForm,
    precision: Precision,
) -> Result<ThresholdReport> {
    check_hub_args(d, k)?;
    if h < 1 {
        return Err(domain("path length h must be >= 1"));
    }
    let pc = p_critical_with(d, precision)?;
    let pc_value = pc.exact.expect("p_c is always representable");
    let beta = laws::beta_with(k - 1, form, precision)?;
    let asymptotic = pc.asymptotic_value.map(|a| {
        a * (std::f64::consts::PI / (2.0 * (k - 1) as f64)).powf((1.0 - h as f64) / 2.0)
    });
    let mut report = if h == 1 {
        ThresholdReport::from_scalar(pc_value, asymptotic)
    } else if beta.is_zero() {
        ThresholdReport {
            exact: None,
            float_value: f64::INFINITY,
            asymptotic_value: asymptotic,
            feasible: false,
            warnings: vec![format!("beta({}) = 0: no hub is ever reached through a path", k - 1)],
        }
    } else {
        let value = pc_value.mul(&beta.powi(1 - h as i64)?);
        ThresholdReport::from_scalar(value, asymptotic)
    };
    if k >= d {
        report.warnings.push(format!(
            "k = {k} >= d = {d}: the hub threshold formula assumes k < d"
        ));
    }
    Ok(report)
}

fn check_hub_args(d: u32, k: u32) -> Result<()> {
    ensure_degree(d, 3)?;
    if k < 2 {
        return Err(domain(format!("k must be >= 2, got {k}")));
    }
    Ok(())
}

/// Largest `h` with `α_c(d, k, h) < 1`, i.e. `h < log p_c(d)/log β(k−1) + 1`.
pub fn max_h(d: u32, k: u32) -> Result<u32> {
    max_h_with(d, k, BetaForm::Paper, Precision::Auto)
}

pub fn max_h_with(d: u32, k: u32, form: BetaForm, precision: Precision) -> Result<u32> {
    check_hub_args(d, k)?;
    let pc = p_critical_with(d, precision)?;
    if !pc.feasible {
        return Ok(0);
    }
    let pc_value = pc.exact.expect("p_c is always representable");
    let beta = laws::beta_with(k - 1, form, precision)?;
    if beta.is_zero() {
        // α_c is p_c at h = 1 and infinite for every longer path
        return Ok(1);
    }
    let feasible = |h: u32| -> Result<bool> {
        Ok(pc_value.mul(&beta.powi(1 - h as i64)?).cmp_one() == Ordering::Less)
    };
    let ln_pc = pc_value.ln().expect("positive p_c");
    let ln_beta = beta.ln().expect("positive beta");
    let estimate = (ln_pc / ln_beta + 1.0).ceil() - 1.0;
    let mut h = if estimate.is_finite() && estimate >= 1.0 {
        estimate.min(u32::MAX as f64 - 1.0) as u32
    } else {
        1
    };
    while h > 1 && !feasible(h)? {
        h -= 1;
    }
    while feasible(h + 1)? {
        h += 1;
    }
    Ok(h)
}

/// `log d / log k`, the large-`d` scale of the longest feasible path.
pub fn asymptotic_h_bound(d: f64, k: f64) -> Result<f64> {
    if d.is_nan() || d < 3.0 {
        return Err(domain(format!("d must be >= 3, got {d}")));
    }
    if k.is_nan() || k <= 1.0 {
        return Err(domain(format!("k must exceed 1 so that log k > 0, got {k}")));
    }
    Ok(d.ln() / k.ln())
}

/// `log d / log log d`, the scale reached when `k` grows like `log d`.
pub fn log_log_h_scale(d: f64) -> Result<f64> {
    if d.is_nan() || d <= std::f64::consts::E.exp() {
        return Err(domain("log log d must exceed 1"));
    }
    Ok(d.ln() / d.ln().ln())
}

/// Whether `k` is within a factor two of `log d`.
pub fn is_log_scaled(d: f64, k: f64) -> bool {
    let ln_d = d.ln();
    (0.5 * ln_d..=2.0 * ln_d).contains(&k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::laws::law_x;

    fn frac(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    /// ψ by iterating the raw law, independently of the pgf code path.
    fn psi_from_law(d: u32, p: f64) -> f64 {
        let law = law_x(d).unwrap().thinned(p).unwrap();
        let mut s = 0.0f64;
        loop {
            let next: f64 = law.probabilities().iter().enumerate().map(|(i, q)| q * s.powi(i as i32)).sum();
            if (next - s).abs() < 1e-15 {
                return next;
            }
            s = next;
        }
    }

    #[test]
    fn p_critical_matches_table() {
        assert_eq!(p_critical(3).unwrap().exact.unwrap().as_ratio().unwrap(), &frac(32, 39));
        assert_eq!(p_critical(4).unwrap().exact.unwrap().as_ratio().unwrap(), &frac(625, 944));
        let truncated: Vec<f64> = (3..=11)
            .map(|d| (p_critical(d).unwrap().float_value * 1e4).floor() / 1e4)
            .collect();
        let table = [0.8205, 0.6620, 0.5634, 0.4955, 0.4454, 0.4067, 0.3759, 0.3505, 0.3293];
        for (got, want) in truncated.iter().zip(table) {
            assert!((got - want).abs() < 1e-9, "{got} vs {want}");
        }
    }

    #[test]
    fn p_critical_at_two_is_infeasible() {
        let report = p_critical(2).unwrap();
        assert!(!report.feasible);
        assert_eq!(report.exact.unwrap().as_ratio().unwrap(), &frac(9, 8));
        assert!(p_critical(1).is_err());
    }

    #[test]
    fn p_critical_float_agrees_with_exact() {
        for d in 2..200 {
            let r = p_critical(d).unwrap();
            let ln = r.exact.as_ref().unwrap().ln().unwrap();
            assert!((r.float_value.ln() - ln).abs() < 1e-12);
            let f = p_critical_with(d, Precision::Float).unwrap();
            assert!(((f.float_value - r.float_value) / r.float_value).abs() < 1e-12);
        }
    }

    #[test]
    fn psi_examples() {
        assert_eq!(psi_root(3, 0.5).unwrap().psi, 1.0);
        let root = psi_root(3, 1.0).unwrap();
        assert!((root.psi - psi_from_law(3, 1.0)).abs() < 1e-10);
        assert!((root.psi - 0.581_988_897_471_6).abs() < 1e-10);
        assert!(root.residual <= 1e-10);
        // exactly critical: p = 32/39 is not a dyadic rational, so take the
        // float on either side
        let pc = 32.0 / 39.0;
        assert_eq!(psi_root(3, pc).unwrap().psi, 1.0);
        assert!(is_subcritical(4, 625.0 / 944.0).unwrap());
    }

    #[test]
    fn theta_examples() {
        assert_eq!(theta(4, 0.5).unwrap(), 0.0);
        let psi = psi_from_law(3, 1.0);
        let g_n = crate::laws::law_n(3).unwrap().pgf(psi);
        assert!((theta(3, 1.0).unwrap() - (1.0 - g_n)).abs() < 1e-10);
        assert!((theta(3, 1.0).unwrap() - 0.661_288_923_219_8).abs() < 1e-9);
        let a = theta(4, 0.9).unwrap();
        let b = theta_double_sum(4, 0.9).unwrap();
        assert!((a - b).abs() < 1e-10, "{a} vs {b}");
        assert!((a - 0.751_143_856_499).abs() < 1e-9);
        assert!(theta_double_sum(4, 1.0).is_err());
    }

    #[test]
    fn theta_positive_for_p_one() {
        for d in 3..=50 {
            assert!(theta(d, 1.0).unwrap() > 0.0, "d = {d}");
        }
        assert_eq!(theta(2, 1.0).unwrap(), 0.0);
    }

    #[test]
    fn alpha_examples() {
        for (d, k) in [(3, 2), (10, 4), (40, 7)] {
            let a = alpha_critical(d, k, 1).unwrap();
            assert_eq!(a.exact.unwrap(), p_critical(d).unwrap().exact.unwrap());
        }
        let a = alpha_critical(5, 3, 2).unwrap();
        let pc5 = p_critical(5).unwrap().exact.unwrap();
        assert_eq!(a.exact.as_ref().unwrap(), &pc5.mul(&ExactScalar::from_fraction(3, 1)));
        assert!((a.float_value - 1.690_434_782_6).abs() < 1e-9);
        assert!(!a.feasible);
        assert!(alpha_critical(5, 1, 2).is_err());
        assert!(alpha_critical(5, 3, 0).is_err());
        assert!(alpha_critical(2, 3, 1).is_err());
        assert!(alpha_critical(5, 6, 1).unwrap().warnings.len() == 1);
        let k2 = alpha_critical(5, 2, 2).unwrap();
        assert!(!k2.feasible && k2.float_value.is_infinite());
    }

    #[test]
    fn max_h_examples() {
        assert_eq!(max_h(5, 3).unwrap(), 1);
        assert_eq!(max_h(3, 2).unwrap(), 1);
        let h = max_h(1000, 10).unwrap();
        assert!(alpha_critical(1000, 10, h).unwrap().feasible);
        assert!(!alpha_critical(1000, 10, h + 1).unwrap().feasible);
        // h < log p_c / log β + 1 evaluated in floats
        let pc = p_critical(1000).unwrap().float_value;
        let beta = crate::laws::beta_paper(9).unwrap().to_f64();
        let bound = pc.ln() / beta.ln() + 1.0;
        assert_eq!(h, bound.ceil() as u32 - 1);
        assert_eq!(h, 3);
    }

    #[test]
    fn asymptotic_bound_examples() {
        let e = std::f64::consts::E;
        assert!((asymptotic_h_bound(e.powi(4), e.powi(2)).unwrap() - 2.0).abs() < 1e-12);
        let b = asymptotic_h_bound(1e6, 14.0).unwrap();
        assert!((b - 5.235).abs() < 1e-3, "{b}");
        assert!(asymptotic_h_bound(100.0, 1.0).is_err());
        let grid: Vec<f64> = (3..60).map(|d| asymptotic_h_bound(d as f64, 5.0).unwrap()).collect();
        assert!(grid.windows(2).all(|w| w[1] > w[0]));
        assert!(is_log_scaled(1e6, 14.0));
        assert!(!is_log_scaled(1e6, 40.0));
    }

    mod props {
        use super::super::*;
        use proptest::prelude::*;

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(48))]

            #[test]
            fn theta_is_nondecreasing_in_p(d in 3u32..30, a in 1u32..=20, b in 1u32..=20) {
                let (lo, hi) = (a.min(b) as f64 / 20.0, a.max(b) as f64 / 20.0);
                prop_assert!(theta(d, lo).unwrap() <= theta(d, hi).unwrap() + 1e-12);
            }

            #[test]
            fn theta_positive_iff_supercritical(d in 3u32..40, j in 1u32..=40) {
                let p = j as f64 / 40.0;
                let pc = p_critical(d).unwrap().float_value;
                let t = theta(d, p).unwrap();
                prop_assert_eq!(t > 0.0, p > pc);
            }

            #[test]
            fn max_h_is_the_feasibility_boundary(d in 3u32..2000, k in 2u32..40) {
                let h = max_h(d, k).unwrap();
                prop_assert!(h >= 1);
                prop_assert!(alpha_critical(d, k, h).unwrap().feasible);
                prop_assert!(!alpha_critical(d, k, h + 1).unwrap().feasible);
            }

            #[test]
            fn psi_is_a_fixed_point(d in 3u32..60, j in 1u32..=20) {
                let p = j as f64 / 20.0;
                let root = psi_root(d, p).unwrap();
                let g = PgfSpec::offspring(d, p).unwrap().eval(root.psi).unwrap();
                prop_assert!((g - root.psi).abs() <= 1e-10);
            }
        }
    }
}
