use std::collections::{HashMap, HashSet};

use rand::Rng;

use crate::{Error, Result};

/// Target class plus sampled negatives for one output position.
#[derive(Debug, Clone, PartialEq)]
pub struct CandidateSet {
    pub target_id: usize,
    /// Distinct negatives, never equal to `target_id`.
    pub sampled_ids: Vec<usize>,
    /// Expected inclusion count per candidate, target first, then `sampled_ids` in order.
    pub expected_counts: Vec<f64>,
}

impl CandidateSet {
    /// Target first, then the sampled ids.
    pub fn ids(&self) -> impl Iterator<Item = usize> + '_ {
        std::iter::once(self.target_id).chain(self.sampled_ids.iter().copied())
    }

    pub fn len(&self) -> usize {
        1 + self.sampled_ids.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

/// Log-uniform (Zipfian over rank) candidate sampler.
///
/// Class `r` is drawn with probability `ln((r + 2) / (r + 1)) / ln(|V| + 1)`,
/// which suits vocabularies whose ids are sorted by decreasing frequency.
///
/// [`sample`](Self::sample) draws with replacement, rejecting the target and
/// repeats, until `n_samples` distinct negatives are collected. The expected
/// count of a negative is its probability of being included,
/// `1 − (1 − q_j)^τ`, where `q_j` is its probability renormalized over
/// non-target classes and `τ` is the number of draws for which the expected
/// number of distinct classes equals `n_samples`. When every non-target
/// class is drawn, all expected counts are exactly 1 and the sampled loss
/// equals the full softmax loss.
#[derive(Debug, Clone)]
pub struct LogUniformSampler {
    vocab_size: usize,
    n_samples: usize,
    log_range: f64,
    tries_cache: HashMap<usize, f64>,
}

impl LogUniformSampler {
    pub fn new(vocab_size: usize, n_samples: usize) -> Result<Self> {
        if n_samples == 0 || n_samples >= vocab_size {
            return Err(Error::invalid(format!(
                "n_samples must be in [1, {}), got {n_samples}",
                vocab_size
            )));
        }
        Ok(Self {
            vocab_size,
            n_samples,
            log_range: ((vocab_size + 1) as f64).ln(),
            tries_cache: HashMap::new(),
        })
    }

    pub fn vocab_size(&self) -> usize {
        self.vocab_size
    }

    pub fn n_samples(&self) -> usize {
        self.n_samples
    }

    pub fn probability(&self, id: usize) -> f64 {
        ((id as f64 + 2.0) / (id as f64 + 1.0)).ln() / self.log_range
    }

    /// One draw with replacement (inverse CDF).
    pub fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        let u: f64 = rng.gen();
        let r = (u * self.log_range).exp().floor() as usize;
        r.saturating_sub(1).min(self.vocab_size - 1)
    }

    pub fn sample<R: Rng + ?Sized>(&mut self, target: usize, rng: &mut R) -> CandidateSet {
        let n = self.n_samples;
        let mut seen = HashSet::with_capacity(2 * n);
        let mut sampled_ids = Vec::with_capacity(n);
        while sampled_ids.len() < n {
            let id = self.draw(rng);
            if id != target && seen.insert(id) {
                sampled_ids.push(id);
            }
        }
        let mut expected_counts = Vec::with_capacity(n + 1);
        expected_counts.push(1.0);
        for &id in &sampled_ids {
            expected_counts.push(self.expected_count(target, id));
        }
        CandidateSet {
            target_id: target,
            sampled_ids,
            expected_counts,
        }
    }

    /// Inclusion probability of negative `id` when `target` is excluded.
    pub fn expected_count(&mut self, target: usize, id: usize) -> f64 {
        if id == target {
            return 1.0;
        }
        if self.n_samples == self.vocab_size - 1 {
            return 1.0;
        }
        let tries = self.tries(target);
        let q = self.probability(id) / (1.0 - self.probability(target));
        -(tries * (-q).ln_1p()).exp_m1()
    }

    fn tries(&mut self, target: usize) -> f64 {
        if let Some(&t) = self.tries_cache.get(&target) {
            return t;
        }
        let norm = 1.0 - self.probability(target);
        let logs: Vec<f64> = (0..self.vocab_size)
            .filter(|&j| j != target)
            .map(|j| (-(self.probability(j) / norm)).ln_1p())
            .collect();
        let n = self.n_samples as f64;
        // f(τ) = Σ (1 − e^{τ l_j}) − n is increasing and concave, so Newton
        // from τ = n (where f ≤ 0) converges monotonically from below.
        let mut tau = n;
        for _ in 0..500 {
            let mut f = -n;
            let mut df = 0.0;
            for &l in &logs {
                let e = (tau * l).exp();
                f += 1.0 - e;
                df -= l * e;
            }
            if df <= 0.0 {
                break;
            }
            let step = -f / df;
            tau += step;
            if step.abs() <= 1e-12 * tau {
                break;
            }
        }
        self.tries_cache.insert(target, tau);
        tau
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::seeded_rng;

    #[test]
    fn probabilities_sum_to_one() {
        let s = LogUniformSampler::new(1000, 10).unwrap();
        let total: f64 = (0..1000).map(|i| s.probability(i)).sum();
        assert!((total - 1.0).abs() < 1e-12);
    }

    #[test]
    fn n_samples_bounds() {
        assert!(LogUniformSampler::new(5, 5).is_err());
        assert!(LogUniformSampler::new(5, 0).is_err());
        assert!(LogUniformSampler::new(5, 4).is_ok());
    }

    #[test]
    fn candidates_distinct_and_exclude_target() {
        let mut s = LogUniformSampler::new(50, 20).unwrap();
        let mut rng = seeded_rng(4);
        for target in [0, 3, 49] {
            let c = s.sample(target, &mut rng);
            let ids: HashSet<usize> = c.ids().collect();
            assert_eq!(ids.len(), 21);
            assert_eq!(c.ids().filter(|&i| i == target).count(), 1);
            assert_eq!(c.expected_counts.len(), 21);
            assert!(c.expected_counts.iter().all(|&e| e > 0.0 && e <= 1.0));
        }
    }

    #[test]
    fn expected_counts_sum_to_n() {
        let mut s = LogUniformSampler::new(200, 30).unwrap();
        let total: f64 = (0..200).filter(|&j| j != 7).map(|j| s.expected_count(7, j)).sum();
        assert!((total - 30.0).abs() < 1e-8, "{total}");
    }

    #[test]
    fn full_coverage_counts_are_one() {
        let mut s = LogUniformSampler::new(5, 4).unwrap();
        let c = s.sample(2, &mut seeded_rng(0));
        assert!(c.expected_counts.iter().all(|&e| e == 1.0));
    }

    #[test]
    fn inclusion_frequencies_track_expected_counts() {
        let mut s = LogUniformSampler::new(30, 8).unwrap();
        let mut rng = seeded_rng(21);
        let trials = 20_000;
        let mut hits = [0usize; 30];
        for _ in 0..trials {
            for id in s.sample(5, &mut rng).sampled_ids {
                hits[id] += 1;
            }
        }
        for j in (0..30).filter(|&j| j != 5) {
            let freq = hits[j] as f64 / trials as f64;
            let e = s.expected_count(5, j);
            assert!((freq - e).abs() < 0.05, "id {j}: {freq} vs {e}");
        }
    }
}
