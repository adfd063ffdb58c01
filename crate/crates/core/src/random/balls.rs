use rand::Rng;
use serde::Serialize;

use crate::error::{param, Result};
use crate::{RngSeed, VertexSet};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BallsBinsResult {
    pub balls: usize,
    pub bins: usize,
    /// `|B|`.
    pub designated: usize,
    /// Bins of `B` holding exactly one ball.
    pub singleton_count_in_b: usize,
}

/// Bin index of each ball, uniform and independent.
pub fn assign_balls(balls: usize, bins: usize, rng: &mut impl Rng) -> Vec<usize> {
    (0..balls).map(|_| rng.random_range(0..bins)).collect()
}

/// Number of bins in `designated` that received exactly one ball.
pub fn singletons_in(assignment: &[usize], designated: &VertexSet) -> usize {
    let mut load = vec![0u32; designated.universe()];
    for &b in assignment {
        load[b] += 1;
    }
    designated.iter().filter(|&b| load[b] == 1).count()
}

/// Throws `balls` balls into `bins > balls` bins and counts singletons in `designated`.
pub fn throw_balls(
    balls: usize,
    bins: usize,
    designated: &VertexSet,
    seed: RngSeed,
) -> Result<BallsBinsResult> {
    if balls < 1 || bins <= balls {
        return param(format!("need bins > balls >= 1, got {balls} balls and {bins} bins"));
    }
    if designated.universe() != bins {
        return param("designated bin set must range over all bins");
    }
    let assignment = assign_balls(balls, bins, &mut seed.rng());
    Ok(BallsBinsResult {
        balls,
        bins,
        designated: designated.len(),
        singleton_count_in_b: singletons_in(&assignment, designated),
    })
}

/// `E[Z] = |B| · N/M · (1 - 1/M)^(N-1)`.
pub fn expected_singletons(balls: usize, bins: usize, designated: usize) -> f64 {
    let m = bins as f64;
    designated as f64 * balls as f64 / m * (1.0 - 1.0 / m).powi(balls as i32 - 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_ball_is_always_alone() {
        for seed in 0..20 {
            let r = throw_balls(1, 2, &VertexSet::full(2), RngSeed::new(seed)).unwrap();
            assert_eq!(r.singleton_count_in_b, 1);
        }
    }

    #[test]
    fn precondition() {
        assert!(throw_balls(5, 5, &VertexSet::full(5), RngSeed::new(0)).is_err());
        assert!(throw_balls(0, 5, &VertexSet::full(5), RngSeed::new(0)).is_err());
        assert!(throw_balls(2, 5, &VertexSet::full(4), RngSeed::new(0)).is_err());
    }

    #[test]
    fn closed_form_expectation() {
        // 1000 · (1 - 1/2000)^999
        let e = expected_singletons(1000, 2000, 2000);
        assert!((e - 606.76).abs() < 0.01, "{e}");
    }

    #[test]
    fn moving_one_ball_changes_count_by_at_most_two() {
        let b = VertexSet::from_iter(10, [0, 2, 4, 6, 8]);
        let mut rng = RngSeed::new(5).rng();
        for _ in 0..500 {
            let mut a = assign_balls(6, 10, &mut rng);
            let before = singletons_in(&a, &b) as i64;
            let i = rng.random_range(0..a.len());
            a[i] = rng.random_range(0..10);
            assert!((singletons_in(&a, &b) as i64 - before).abs() <= 2);
        }
    }
}
