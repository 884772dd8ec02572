use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;
use serde::Serialize;

use crate::error::{domain, Result};

const MASS_TOLERANCE: f64 = 1e-12;

/// Probability mass function over the contiguous integer support
/// `support_min ..= support_min + len - 1`.
///
/// Laws derived in closed form also carry their exact rational masses.
#[derive(Clone, Debug, Serialize)]
pub struct Pmf {
    support_min: i64,
    probabilities: Vec<f64>,
    #[serde(skip)]
    exact: Option<Vec<BigRational>>,
    #[serde(skip)]
    cdf: Vec<f64>,
}

impl Pmf {
    pub fn new(support_min: i64, probabilities: Vec<f64>) -> Result<Self> {
        if probabilities.is_empty() {
            return Err(domain("a pmf needs at least one support point"));
        }
        if let Some(bad) = probabilities.iter().find(|&&q| q.is_nan() || q < 0.0 || !q.is_finite()) {
            return Err(domain(format!("pmf entries must be finite and >= 0, got {bad}")));
        }
        let total: f64 = probabilities.iter().sum();
        if (total - 1.0).abs() > MASS_TOLERANCE * probabilities.len().max(1) as f64 {
            return Err(domain(format!("pmf mass sums to {total}, not 1")));
        }
        Ok(Self::build(support_min, probabilities, None))
    }

    pub fn from_exact(support_min: i64, probabilities: Vec<BigRational>) -> Result<Self> {
        if probabilities.is_empty() {
            return Err(domain("a pmf needs at least one support point"));
        }
        if probabilities.iter().any(|q| q.is_negative()) {
            return Err(domain("pmf entries must be >= 0"));
        }
        let total: BigRational = probabilities.iter().sum();
        if !total.is_one() {
            return Err(domain(format!("pmf mass sums to {total}, not 1")));
        }
        let floats = probabilities
            .iter()
            .map(|q| q.to_f64().unwrap_or(0.0))
            .collect();
        Ok(Self::build(support_min, floats, Some(probabilities)))
    }

    /// Normalised histogram of observed counts.
    pub fn from_counts(support_min: i64, counts: &[u64]) -> Result<Self> {
        let total: u64 = counts.iter().sum();
        if total == 0 {
            return Err(domain("empirical pmf needs at least one observation"));
        }
        let probabilities = counts.iter().map(|&c| c as f64 / total as f64).collect();
        Self::new(support_min, probabilities)
    }

    pub fn point_mass(at: i64) -> Self {
        Self::from_exact(at, vec![BigRational::one()]).expect("unit mass is a valid pmf")
    }

    fn build(support_min: i64, probabilities: Vec<f64>, exact: Option<Vec<BigRational>>) -> Self {
        let mut running = 0.0;
        let mut cdf: Vec<f64> = probabilities
            .iter()
            .map(|q| {
                running += q;
                running
            })
            .collect();
        if let Some(last) = cdf.last_mut() {
            *last = f64::INFINITY;
        }
        Self {
            support_min,
            probabilities,
            exact,
            cdf,
        }
    }

    pub fn support_min(&self) -> i64 {
        self.support_min
    }

    pub fn support_max(&self) -> i64 {
        self.support_min + self.probabilities.len() as i64 - 1
    }

    pub fn len(&self) -> usize {
        self.probabilities.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probabilities.is_empty()
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.probabilities
    }

    pub fn exact(&self) -> Option<&[BigRational]> {
        self.exact.as_deref()
    }

    /// `P(value = i)`, zero outside the support.
    pub fn prob(&self, i: i64) -> f64 {
        if i < self.support_min {
            return 0.0;
        }
        self.probabilities
            .get((i - self.support_min) as usize)
            .copied()
            .unwrap_or(0.0)
    }

    pub fn prob_exact(&self, i: i64) -> Option<BigRational> {
        let exact = self.exact.as_ref()?;
        if i < self.support_min {
            return Some(BigRational::zero());
        }
        Some(
            exact
                .get((i - self.support_min) as usize)
                .cloned()
                .unwrap_or_else(BigRational::zero),
        )
    }

    pub fn total(&self) -> f64 {
        self.probabilities.iter().sum()
    }

    pub fn total_exact(&self) -> Option<BigRational> {
        self.exact.as_ref().map(|e| e.iter().sum())
    }

    pub fn support(&self) -> impl Iterator<Item = (i64, f64)> + '_ {
        self.probabilities
            .iter()
            .enumerate()
            .map(move |(j, &q)| (self.support_min + j as i64, q))
    }

    pub fn mean(&self) -> f64 {
        self.support().map(|(i, q)| i as f64 * q).sum()
    }

    pub fn mean_exact(&self) -> Option<BigRational> {
        let exact = self.exact.as_ref()?;
        Some(
            exact
                .iter()
                .enumerate()
                .map(|(j, q)| q * BigInt::from(self.support_min + j as i64))
                .sum(),
        )
    }

    pub fn variance(&self) -> f64 {
        let mean = self.mean();
        self.support()
            .map(|(i, q)| (i as f64 - mean).powi(2) * q)
            .sum()
    }

    /// Generating function `E[s^V]` (support must be non-negative).
    pub fn pgf(&self, s: f64) -> f64 {
        debug_assert!(self.support_min >= 0);
        let poly = self.probabilities.iter().rev().fold(0.0, |acc, &q| acc * s + q);
        poly * s.powi(self.support_min as i32)
    }

    /// Total-variation distance `½ Σ |P(i) − Q(i)|` over the union of supports.
    pub fn tv_distance(&self, other: &Pmf) -> f64 {
        let lo = self.support_min.min(other.support_min);
        let hi = self.support_max().max(other.support_max());
        0.5 * (lo..=hi)
            .map(|i| (self.prob(i) - other.prob(i)).abs())
            .sum::<f64>()
    }

    /// Inverse-CDF draw.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> i64 {
        let u: f64 = rng.random();
        let j = self.cdf.partition_point(|&c| c <= u);
        self.support_min + j.min(self.probabilities.len() - 1) as i64
    }

    /// Law of `Σ_{ℓ=1}^{V} I_ℓ` with i.i.d. `I_ℓ ~ Bernoulli(p)`.
    pub fn thinned(&self, p: f64) -> Result<Pmf> {
        if self.support_min < 0 {
            return Err(domain("thinning needs a non-negative support"));
        }
        if !(0.0..=1.0).contains(&p) {
            return Err(domain(format!("thinning probability must lie in [0, 1], got {p}")));
        }
        let top = self.support_max() as usize;
        let mut out = vec![0.0; top + 1];
        // row = Binomial(k, p) pmf, grown one trial at a time
        let mut row = vec![1.0];
        for k in 0..=top {
            if k > 0 {
                let mut next = vec![0.0; k + 1];
                for (i, &r) in row.iter().enumerate() {
                    next[i] += r * (1.0 - p);
                    next[i + 1] += r * p;
                }
                row = next;
            }
            let mass = self.prob(k as i64);
            if mass > 0.0 {
                for (i, &r) in row.iter().enumerate() {
                    out[i] += mass * r;
                }
            }
        }
        Pmf::new(0, out)
    }

    pub fn thinned_exact(&self, p: &BigRational) -> Result<Pmf> {
        let exact = self
            .exact
            .as_ref()
            .ok_or_else(|| domain("exact thinning needs an exact pmf"))?;
        if self.support_min < 0 {
            return Err(domain("thinning needs a non-negative support"));
        }
        if p.is_negative() || *p > BigRational::one() {
            return Err(domain("thinning probability must lie in [0, 1]"));
        }
        let q = BigRational::one() - p;
        let top = self.support_max() as usize;
        let mut out = vec![BigRational::zero(); top + 1];
        let mut row = vec![BigRational::one()];
        for k in 0..=top {
            if k > 0 {
                let mut next = vec![BigRational::zero(); k + 1];
                for (i, r) in row.iter().enumerate() {
                    next[i] += r * &q;
                    next[i + 1] += r * p;
                }
                row = next;
            }
            if k as i64 >= self.support_min {
                let mass = &exact[k - self.support_min as usize];
                if !mass.is_zero() {
                    for (i, r) in row.iter().enumerate() {
                        out[i] += mass * r;
                    }
                }
            }
        }
        Pmf::from_exact(0, out)
    }

    /// Same law re-indexed so that the support starts at `new_min <= support_min`.
    pub fn extended_down_to(&self, new_min: i64) -> Pmf {
        assert!(new_min <= self.support_min);
        let pad = (self.support_min - new_min) as usize;
        let mut probabilities = vec![0.0; pad];
        probabilities.extend_from_slice(&self.probabilities);
        let exact = self.exact.as_ref().map(|e| {
            let mut v = vec![BigRational::zero(); pad];
            v.extend(e.iter().cloned());
            v
        });
        Self::build(new_min, probabilities, exact)
    }
}

impl PartialEq for Pmf {
    fn eq(&self, other: &Self) -> bool {
        self.support_min == other.support_min && self.probabilities == other.probabilities
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn rejects_bad_mass() {
        assert!(Pmf::new(0, vec![0.5, 0.4]).is_err());
        assert!(Pmf::new(0, vec![1.5, -0.5]).is_err());
        assert!(Pmf::new(0, vec![]).is_err());
        assert!(Pmf::from_exact(0, vec![r(1, 3), r(1, 3)]).is_err());
        assert!(Pmf::from_counts(0, &[0, 0]).is_err());
    }

    #[test]
    fn moments_and_pgf() {
        let pmf = Pmf::from_exact(1, vec![r(1, 3), r(4, 9), r(2, 9)]).unwrap();
        assert_eq!(pmf.support_max(), 3);
        assert_eq!(pmf.mean_exact().unwrap(), r(17, 9));
        assert!((pmf.mean() - 17.0 / 9.0).abs() < 1e-15);
        assert!((pmf.pgf(1.0) - 1.0).abs() < 1e-15);
        assert!((pmf.pgf(0.5) - (1.0 / 6.0 + 1.0 / 9.0 + 1.0 / 36.0)).abs() < 1e-15);
        assert_eq!(pmf.prob(0), 0.0);
        assert_eq!(pmf.prob(4), 0.0);
    }

    #[test]
    fn thinning_matches_exact_thinning() {
        let pmf = Pmf::from_exact(0, vec![r(1, 4), r(3, 8), r(9, 32), r(3, 32)]).unwrap();
        let a = pmf.thinned(0.5).unwrap();
        let b = pmf.thinned_exact(&r(1, 2)).unwrap();
        assert_eq!(b.total_exact().unwrap(), BigRational::one());
        assert!(a.tv_distance(&b) < 1e-15);
        // Wald: E[thinned] = p · E[original]
        assert_eq!(b.mean_exact().unwrap(), pmf.mean_exact().unwrap() * r(1, 2));
        let full = pmf.thinned(1.0).unwrap();
        assert!(full.tv_distance(&pmf) < 1e-15);
    }

    #[test]
    fn inverse_cdf_sampling_reproduces_law() {
        let pmf = Pmf::new(2, vec![0.1, 0.0, 0.6, 0.3]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut counts = [0u64; 4];
        for _ in 0..200_000 {
            let v = pmf.sample(&mut rng);
            counts[(v - 2) as usize] += 1;
        }
        assert_eq!(counts[1], 0);
        let emp = Pmf::from_counts(2, &counts).unwrap();
        assert!(emp.tv_distance(&pmf) < 0.005);
    }
}
