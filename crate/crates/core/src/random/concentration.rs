//! Analytical tail bounds and a Monte Carlo harness that checks them.

use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::rng::TRIAL_DOMAIN;
use crate::RngSeed;

/// `min(1, 2·exp(-2t²/n))` for a sum of `n` independent `[0, 1]` variables.
pub fn chernoff_bound(n: usize, t: f64) -> f64 {
    (2.0 * (-2.0 * t * t / n as f64).exp()).min(1.0)
}

/// `min(1, 2·exp(-2t²/(n·d²)))` for an `n`-argument function with Lipschitz constant `d`.
pub fn bounded_differences_bound(n: usize, d: f64, t: f64) -> f64 {
    (2.0 * (-2.0 * t * t / (n as f64 * d * d)).exp()).min(1.0)
}

/// The concrete deviation `4·√(n ln n)` used for every "± o(n)" band.
pub fn deviation_band(n: usize) -> f64 {
    let n = n as f64;
    4.0 * (n * n.ln()).sqrt()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TailEstimate {
    pub trials: usize,
    pub mean: f64,
    /// Whether `mean` was supplied rather than estimated.
    pub closed_form_mean: bool,
    pub exceedances: usize,
    pub frequency: f64,
}

/// Frequency of `|X - mean| > t` over `trials` independent draws of `sampler`.
///
/// Without a supplied mean, the mean is estimated from a separate block of
/// `trials` draws so the tail count does not reuse the same samples.
pub fn empirical_tail<F>(
    sampler: F,
    trials: usize,
    t: f64,
    mean: Option<f64>,
    seed: RngSeed,
) -> TailEstimate
where
    F: Fn(&mut ChaCha8Rng) -> f64 + Sync,
{
    let draw = |block: u64| -> Vec<f64> {
        (0..trials as u64)
            .into_par_iter()
            .map(|i| sampler(&mut seed.stream(TRIAL_DOMAIN + block, i).rng()))
            .collect()
    };
    let (mean, closed_form_mean) = match mean {
        Some(m) => (m, true),
        None => {
            let warmup = draw(1);
            (warmup.iter().sum::<f64>() / trials.max(1) as f64, false)
        }
    };
    let samples = draw(0);
    let exceedances = samples.iter().filter(|&&x| (x - mean).abs() > t).count();
    TailEstimate {
        trials,
        mean,
        closed_form_mean,
        exceedances,
        frequency: exceedances as f64 / trials.max(1) as f64,
    }
}

/// One line of a statistical experiment report.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StatReport {
    pub experiment: String,
    pub params: Vec<(String, f64)>,
    pub trials: usize,
    pub observed: f64,
    pub bound: f64,
    pub pass: bool,
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    #[test]
    fn bound_values() {
        assert_eq!(chernoff_bound(100, 0.0), 1.0);
        assert!((chernoff_bound(100, 10.0) - 2.0 * (-2.0f64).exp()).abs() < 1e-15);
        assert!((chernoff_bound(100, 10.0) - 0.2707).abs() < 1e-4);
        assert!((chernoff_bound(400, 40.0) - 6.709e-4).abs() < 1e-6);
        assert!((bounded_differences_bound(100, 2.0, 20.0) - 0.2707).abs() < 1e-4);
        assert_eq!(bounded_differences_bound(100, 1.0, 10.0), chernoff_bound(100, 10.0));
    }

    #[test]
    fn constant_sampler_never_deviates() {
        let est = empirical_tail(|_| 3.0, 100, 0.5, None, RngSeed::new(1));
        assert_eq!(est.exceedances, 0);
        assert_eq!(est.mean, 3.0);
    }

    #[test]
    fn coin_sum_tail_below_bound() {
        let coins = |r: &mut ChaCha8Rng| (0..100).filter(|_| r.random_bool(0.5)).count() as f64;
        let est = empirical_tail(coins, 20_000, 10.0, Some(50.0), RngSeed::new(2));
        assert!(est.frequency <= chernoff_bound(100, 10.0), "{est:?}");
    }

    #[test]
    fn estimated_mean_is_close() {
        let coins = |r: &mut ChaCha8Rng| (0..100).filter(|_| r.random_bool(0.5)).count() as f64;
        let est = empirical_tail(coins, 5_000, 10.0, None, RngSeed::new(3));
        assert!((est.mean - 50.0).abs() < 0.5, "{est:?}");
        assert!(!est.closed_form_mean);
    }
}
