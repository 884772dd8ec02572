//! Galton–Watson engine for the spreader process `Z_{n+1} = Σ_{i ≤ Z_n} X'_i`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{domain, ensure_degree, ensure_probability, Error, Result};
use crate::laws::{self, Pmf};
use crate::stats::{replica_rng, EstimateCI};

pub const DEFAULT_HORIZON: u32 = 60;
pub const DEFAULT_POPULATION_CAP: u64 = 10_000_000;
/// Above this population, a generation is drawn as a multinomial over the
/// offspring support instead of individual by individual.
const AGGREGATE_THRESHOLD: u64 = 256;
const EXTINCTION_MAX_ITERATIONS: u64 = 1_000_000;
/// Population ceiling for the per-individual coupled trial.
pub const COUPLING_POPULATION_CAP: u64 = 1_000_000;

/// How one individual's offspring count is drawn.
#[derive(Clone, Debug)]
pub enum OffspringSampler {
    /// Inverse CDF of `offspring_law`.
    InverseCdf,
    /// A draw `X` from `base_law` followed by `Binomial(X, p)`.
    Thinning { base_law: Pmf, p: f64 },
}

#[derive(Clone, Debug)]
pub struct GwSpec {
    pub initial_law: Pmf,
    pub offspring_law: Pmf,
    pub max_generations: u32,
    pub population_cap: u64,
    pub sampler: OffspringSampler,
}

impl GwSpec {
    pub fn new(
        initial_law: Pmf,
        offspring_law: Pmf,
        max_generations: u32,
        population_cap: u64,
    ) -> Result<Self> {
        if max_generations < 1 {
            return Err(domain("max_generations must be >= 1"));
        }
        if population_cap < 1 {
            return Err(domain("population_cap must be >= 1"));
        }
        if initial_law.support_min() < 0 || offspring_law.support_min() < 0 {
            return Err(domain("population laws must have non-negative support"));
        }
        Ok(Self {
            initial_law,
            offspring_law,
            max_generations,
            population_cap,
            sampler: OffspringSampler::InverseCdf,
        })
    }

    /// Root count `N'` and offspring `X'` of the rumor on `T_d`.
    pub fn for_rumor(d: u32, p: f64, max_generations: u32, population_cap: u64) -> Result<Self> {
        ensure_degree(d, 2)?;
        ensure_probability(p)?;
        Self::new(
            laws::law_n_prime(d, p)?,
            laws::offspring_law(d, p)?,
            max_generations,
            population_cap,
        )
    }

    /// Switches to drawing `X'` as a thinned `X`.
    pub fn with_thinning(mut self, base_law: Pmf, p: f64) -> Result<Self> {
        if base_law.support_min() < 0 {
            return Err(domain("thinning needs a non-negative base law"));
        }
        if !(0.0..=1.0).contains(&p) {
            return Err(domain(format!("thinning probability must lie in [0, 1], got {p}")));
        }
        self.sampler = OffspringSampler::Thinning { base_law, p };
        Ok(self)
    }

    /// One offspring count.
    pub fn sample_offspring<R: Rng + ?Sized>(&self, rng: &mut R) -> u64 {
        match &self.sampler {
            OffspringSampler::InverseCdf => self.offspring_law.sample(rng) as u64,
            OffspringSampler::Thinning { base_law, p } => {
                let x = base_law.sample(rng) as u64;
                binomial(rng, x, *p)
            }
        }
    }

    /// Total offspring of `z` individuals.
    fn generation_total<R: Rng + ?Sized>(&self, rng: &mut R, z: u64) -> u64 {
        if z <= AGGREGATE_THRESHOLD {
            return (0..z).map(|_| self.sample_offspring(rng)).sum();
        }
        match &self.sampler {
            OffspringSampler::InverseCdf => multinomial_total(rng, z, &self.offspring_law),
            OffspringSampler::Thinning { base_law, p } => {
                let raw = multinomial_total(rng, z, base_law);
                binomial(rng, raw, *p)
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GwOutcome {
    pub survived_to_horizon: bool,
    pub extinction_generation: Option<u32>,
    pub peak_population: u64,
    pub capped: bool,
}

fn binomial<R: Rng + ?Sized>(rng: &mut R, n: u64, p: f64) -> u64 {
    if n == 0 || p <= 0.0 {
        return 0;
    }
    if p >= 1.0 {
        return n;
    }
    Binomial::new(n, p).expect("valid binomial").sample(rng)
}

/// `Σ_i i·C_i` for `(C_i) ~ Multinomial(z, law)`, by sequential binomials.
fn multinomial_total<R: Rng + ?Sized>(rng: &mut R, z: u64, law: &Pmf) -> u64 {
    let mut remaining = z;
    let mut mass_left = 1.0;
    let mut total = 0u64;
    for (value, q) in law.support() {
        if remaining == 0 {
            break;
        }
        let count = if q >= mass_left {
            remaining
        } else {
            binomial(rng, remaining, (q / mass_left).clamp(0.0, 1.0))
        };
        total += count * value as u64;
        remaining -= count;
        mass_left -= q;
    }
    total
}

pub fn simulate_gw(spec: &GwSpec, rng_seed: u64) -> GwOutcome {
    simulate_gw_with_rng(spec, &mut ChaCha8Rng::seed_from_u64(rng_seed))
}

pub fn simulate_gw_with_rng<R: Rng + ?Sized>(spec: &GwSpec, rng: &mut R) -> GwOutcome {
    let mut z = spec.initial_law.sample(rng) as u64;
    let mut peak = z;
    if z == 0 {
        return GwOutcome {
            survived_to_horizon: false,
            extinction_generation: Some(0),
            peak_population: 0,
            capped: false,
        };
    }
    for generation in 1..=spec.max_generations {
        z = spec.generation_total(rng, z);
        peak = peak.max(z);
        if z == 0 {
            return GwOutcome {
                survived_to_horizon: false,
                extinction_generation: Some(generation),
                peak_population: peak,
                capped: false,
            };
        }
        if z > spec.population_cap {
            return GwOutcome {
                survived_to_horizon: true,
                extinction_generation: None,
                peak_population: peak,
                capped: true,
            };
        }
    }
    GwOutcome {
        survived_to_horizon: true,
        extinction_generation: None,
        peak_population: peak,
        capped: false,
    }
}

/// Fraction of replicas alive at `horizon`, replica `r` drawing from
/// `replica_rng(seed, r)`.
pub fn survival_mc_spec(spec: &GwSpec, replicas: u64, seed: u64) -> Result<EstimateCI> {
    if replicas < 1 {
        return Err(domain("replicas must be >= 1"));
    }
    let survivors: u64 = (0..replicas)
        .into_par_iter()
        .map(|r| simulate_gw_with_rng(spec, &mut replica_rng(seed, r)).survived_to_horizon as u64)
        .sum();
    Ok(EstimateCI::wilson(survivors, replicas, seed))
}

pub fn survival_mc(
    d: u32,
    p: f64,
    replicas: u64,
    horizon: u32,
    cap: u64,
    seed: u64,
) -> Result<EstimateCI> {
    let spec = GwSpec::for_rumor(d, p, horizon, cap)?;
    survival_mc_spec(&spec, replicas, seed)
}

/// Extinction probability as the limit of `s ← G(s)` from `s = 0`.
///
/// Laws with mean at most one (other than `δ_1`) die out surely and return 1
/// without iterating.
pub fn extinction_by_iteration(law: &Pmf, tol: f64) -> Result<f64> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(domain("tol must be > 0"));
    }
    if law.support_min() < 0 {
        return Err(domain("offspring law must have non-negative support"));
    }
    if law.prob(1) == 1.0 {
        return Ok(0.0);
    }
    if law.mean() <= 1.0 {
        return Ok(1.0);
    }
    let derivative = |s: f64| -> f64 {
        law.support()
            .filter(|&(i, _)| i >= 1)
            .map(|(i, q)| i as f64 * q * s.powi(i as i32 - 1))
            .sum()
    };
    let mut s = 0.0;
    for _ in 0..EXTINCTION_MAX_ITERATIONS {
        let next = law.pgf(s);
        let step = (next - s).abs();
        s = next;
        // remaining error ≈ step·r/(1−r) for contraction rate r
        let r = derivative(s).min(1.0 - 1e-300);
        if step == 0.0 || step * r / (1.0 - r) <= 0.5 * tol {
            return Ok(s);
        }
    }
    Err(Error::NumericFault(format!(
        "pgf iteration did not converge within {EXTINCTION_MAX_ITERATIONS} steps"
    )))
}

/// Runs the processes for `p1 <= p2` on one stream of uniforms: each
/// individual of process 2 draws `X` contacts with uniforms `U_j`, and a
/// contact yields a child in process `i` when `U_j <= p_i`. Individuals of
/// process 1 are a subset of those of process 2. Returns whether
/// `Z^{(1)}_n <= Z^{(2)}_n` held at every generation up to `horizon`, or up
/// to the generation at which process 2 exceeds [`COUPLING_POPULATION_CAP`].
pub fn coupled_monotonicity_trial(d: u32, p1: f64, p2: f64, horizon: u32, seed: u64) -> Result<bool> {
    ensure_degree(d, 2)?;
    ensure_probability(p1)?;
    ensure_probability(p2)?;
    if p1 > p2 {
        return Err(domain(format!("coupling needs p1 <= p2, got {p1} > {p2}")));
    }
    let base = laws::law_x(d)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    // root generation: N' is N thinned by p
    let root_n = laws::law_n(d)?;
    let (mut z1, mut z2) = (0u64, 0u64);
    for _ in 0..root_n.sample(&mut rng) {
        let u: f64 = rng.random();
        z1 += (u <= p1) as u64;
        z2 += (u <= p2) as u64;
    }
    if z1 > z2 {
        return Ok(false);
    }
    for _ in 0..horizon {
        if z2 == 0 || z2 > COUPLING_POPULATION_CAP {
            break;
        }
        let (mut next1, mut next2) = (0u64, 0u64);
        for individual in 0..z2 {
            let in_first = individual < z1;
            for _ in 0..base.sample(&mut rng) {
                let u: f64 = rng.random();
                next1 += (in_first && u <= p1) as u64;
                next2 += (u <= p2) as u64;
            }
        }
        if next1 > next2 {
            return Ok(false);
        }
        z1 = next1;
        z2 = next2;
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::thresholds::theta;

    fn delta(at: i64) -> Pmf {
        Pmf::point_mass(at)
    }

    #[test]
    fn degenerate_laws() {
        let dies = GwSpec::new(delta(1), delta(0), 10, 100).unwrap();
        for seed in 0..20 {
            let out = simulate_gw(&dies, seed);
            assert_eq!(out.extinction_generation, Some(1));
            assert!(!out.survived_to_horizon);
        }
        let line = GwSpec::new(delta(1), delta(1), 500, 100).unwrap();
        let out = simulate_gw(&line, 3);
        assert!(out.survived_to_horizon && !out.capped);
        assert_eq!(out.peak_population, 1);
        let doubling = GwSpec::new(delta(1), delta(2), 100, 1000).unwrap();
        let out = simulate_gw(&doubling, 3);
        assert!(out.capped && out.survived_to_horizon && out.extinction_generation.is_none());
        assert!(GwSpec::new(delta(1), delta(1), 0, 10).is_err());
    }

    #[test]
    fn deterministic_for_seed() {
        let spec = GwSpec::for_rumor(4, 0.9, 60, DEFAULT_POPULATION_CAP).unwrap();
        for seed in [0, 1, 99] {
            assert_eq!(simulate_gw(&spec, seed), simulate_gw(&spec, seed));
        }
        assert_eq!(
            survival_mc(4, 0.9, 500, 40, 10_000, 5).unwrap(),
            survival_mc(4, 0.9, 500, 40, 10_000, 5).unwrap()
        );
    }

    #[test]
    fn sampling_modes_match_offspring_law() {
        let d = 4;
        let p = 0.7;
        let inverse = GwSpec::for_rumor(d, p, 1, 10).unwrap();
        let thinned = inverse
            .clone()
            .with_thinning(laws::law_x(d).unwrap(), p)
            .unwrap();
        let target = laws::offspring_law(d, p).unwrap();
        for (spec, seed) in [(&inverse, 1u64), (&thinned, 2)] {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut counts = vec![0u64; target.len()];
            for _ in 0..1_000_000 {
                counts[spec.sample_offspring(&mut rng) as usize] += 1;
            }
            let emp = Pmf::from_counts(0, &counts).unwrap();
            assert!(emp.tv_distance(&target) < 0.005);
        }
    }

    #[test]
    fn aggregated_generation_has_the_right_mean() {
        let spec = GwSpec::for_rumor(5, 0.8, 1, 10).unwrap();
        let mean = spec.offspring_law.mean();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let z = 10_000u64;
        let trials = 200;
        let total: u64 = (0..trials).map(|_| spec.generation_total(&mut rng, z)).sum();
        let got = total as f64 / (trials as f64 * z as f64);
        let se = (spec.offspring_law.variance() / (trials as f64 * z as f64)).sqrt();
        assert!((got - mean).abs() < 4.0 * se, "{got} vs {mean}");
    }

    #[test]
    fn survival_examples() {
        let sub = survival_mc(3, 0.1, 10_000, 60, DEFAULT_POPULATION_CAP, 1).unwrap();
        assert!(sub.estimate < 0.01);
        let one = survival_mc(3, 1.0, 1, 60, DEFAULT_POPULATION_CAP, 1).unwrap();
        assert!(one.estimate == 0.0 || one.estimate == 1.0);
        let est = survival_mc(4, 0.9, 20_000, 60, DEFAULT_POPULATION_CAP, 2).unwrap();
        let th = theta(4, 0.9).unwrap();
        assert!(est.z_score(th) < 3.0, "{est:?} vs {th}");
    }

    #[test]
    fn survival_is_nonincreasing_in_horizon() {
        let short = survival_mc(3, 1.0, 20_000, 60, DEFAULT_POPULATION_CAP, 8).unwrap();
        let long = survival_mc(3, 1.0, 20_000, 120, DEFAULT_POPULATION_CAP, 8).unwrap();
        // same replica streams: each long run is an extension of the short one
        assert!(long.estimate <= short.estimate);
        assert!(short.estimate - long.estimate <= 3.0 * short.standard_error().hypot(long.standard_error()));
    }

    #[test]
    fn extinction_iteration_examples() {
        assert_eq!(extinction_by_iteration(&delta(0), 1e-12).unwrap(), 1.0);
        assert_eq!(extinction_by_iteration(&delta(1), 1e-12).unwrap(), 0.0);
        let sub = laws::offspring_law(3, 0.5).unwrap();
        assert_eq!(extinction_by_iteration(&sub, 1e-12).unwrap(), 1.0);
        let law = laws::law_x(3).unwrap();
        let psi = crate::thresholds::psi_root(3, 1.0).unwrap().psi;
        assert!((extinction_by_iteration(&law, 1e-12).unwrap() - psi).abs() < 1e-10);
        assert!(extinction_by_iteration(&law, 0.0).is_err());
    }

    #[test]
    fn coupling_examples() {
        for seed in 0..200 {
            assert!(coupled_monotonicity_trial(4, 0.5, 0.9, 20, seed).unwrap());
            assert!(coupled_monotonicity_trial(4, 0.01, 1.0, 20, seed).unwrap());
            assert!(coupled_monotonicity_trial(3, 0.7, 0.7, 20, seed).unwrap());
        }
        assert!(coupled_monotonicity_trial(4, 0.9, 0.5, 20, 0).is_err());
    }
}
