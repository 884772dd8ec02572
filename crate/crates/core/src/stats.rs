//! Monte Carlo plumbing: Wilson intervals and per-replica random streams.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

/// `Φ^{-1}(0.975)`.
pub const Z_95: f64 = 1.959_963_984_540_054;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CiMethod {
    Wilson,
}

/// A Monte Carlo proportion with its 95% Wilson score interval.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EstimateCI {
    pub estimate: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub replicas: u64,
    pub successes: u64,
    pub seed: u64,
    pub method: CiMethod,
}

impl EstimateCI {
    pub fn wilson(successes: u64, replicas: u64, seed: u64) -> Self {
        assert!(replicas >= 1 && successes <= replicas);
        let n = replicas as f64;
        let phat = successes as f64 / n;
        let z2 = Z_95 * Z_95;
        let denom = 1.0 + z2 / n;
        let centre = (phat + z2 / (2.0 * n)) / denom;
        let half = Z_95 * (phat * (1.0 - phat) / n + z2 / (4.0 * n * n)).sqrt() / denom;
        Self {
            estimate: phat,
            ci_low: (centre - half).clamp(0.0, phat),
            ci_high: (centre + half).clamp(phat, 1.0),
            replicas,
            successes,
            seed,
            method: CiMethod::Wilson,
        }
    }

    /// Binomial standard error `√(p̂(1−p̂)/n)`.
    pub fn standard_error(&self) -> f64 {
        (self.estimate * (1.0 - self.estimate) / self.replicas as f64).sqrt()
    }

    pub fn covers(&self, value: f64) -> bool {
        self.ci_low <= value && value <= self.ci_high
    }

    /// `|p̂ − value|` in units of the standard error (infinite when the
    /// standard error vanishes and the values differ).
    pub fn z_score(&self, value: f64) -> f64 {
        z_distance(self.estimate, value, self.standard_error())
    }

    /// Distance to another estimate in units of the combined standard error.
    pub fn z_score_against(&self, other: &EstimateCI) -> f64 {
        let se = self.standard_error().hypot(other.standard_error());
        z_distance(self.estimate, other.estimate, se)
    }
}

fn z_distance(a: f64, b: f64, se: f64) -> f64 {
    let gap = (a - b).abs();
    if gap == 0.0 {
        0.0
    } else if se == 0.0 {
        f64::INFINITY
    } else {
        gap / se
    }
}

/// SplitMix64 finaliser.
pub fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Uniform in `[0, 1)` from the top 53 bits of a hash.
pub fn unit_from_hash(h: u64) -> f64 {
    (h >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Independent stream for replica `r` under `master`; the result does not
/// depend on the order in which replicas run.
pub fn replica_rng(master: u64, r: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(master);
    rng.set_stream(r);
    rng
}

/// Seed for per-replica derived objects (such as a random tree).
pub fn replica_seed(master: u64, r: u64) -> u64 {
    mix64(mix64(master) ^ r.wrapping_mul(0xd6e8_feb8_6659_fd93))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    #[test]
    fn wilson_brackets_estimate() {
        let ci = EstimateCI::wilson(30, 100, 1);
        assert!(ci.ci_low < 0.3 && 0.3 < ci.ci_high);
        assert!((ci.ci_low - 0.2189).abs() < 1e-3, "{}", ci.ci_low);
        assert!((ci.ci_high - 0.3958).abs() < 1e-3, "{}", ci.ci_high);
        let zero = EstimateCI::wilson(0, 10_000, 1);
        assert_eq!(zero.ci_low, 0.0);
        assert!(zero.ci_high > 0.0 && zero.ci_high < 5e-4);
        let one = EstimateCI::wilson(1, 1, 1);
        assert_eq!(one.estimate, 1.0);
        assert_eq!(one.ci_high, 1.0);
    }

    #[test]
    fn replica_streams_are_distinct_and_stable() {
        let a: u64 = replica_rng(7, 0).random();
        let b: u64 = replica_rng(7, 1).random();
        let again: u64 = replica_rng(7, 0).random();
        assert_ne!(a, b);
        assert_eq!(a, again);
        assert_ne!(replica_seed(7, 0), replica_seed(7, 1));
    }

    #[test]
    fn unit_hash_range() {
        assert_eq!(unit_from_hash(0), 0.0);
        assert!(unit_from_hash(u64::MAX) < 1.0);
    }
}
