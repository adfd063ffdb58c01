//! Degree-threshold schedules for the compressed peeling phases.
//!
//! Thresholds follow `Δ_i = n / s^(1 - 1/2^(i-1))`, rounded up, which is
//! `n^(1/2^(i-1))` when `s = n`. The list stops at the first value that falls
//! to the floor `c·(n/s)·log₂ n`, and that last entry is replaced by the floor.
//!
//! Phase `i` (for `i < τ`) peels from `Δ_i` down to `Δ_{i+1}`; it samples each
//! vertex into each of `k_i = ⌈Δ_{i+1}⌉` machines with probability
//! `p_i = min(1, c·log₂ n / Δ_{i+1})`. What is left after the last phase has
//! maximum degree at most `Δ_τ` and is handled by the final phase.

use serde::Serialize;

use crate::error::{param, Result};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PhaseSchedule {
    pub n: usize,
    pub s: usize,
    pub c_scale: f64,
    /// `Δ_1..Δ_τ`.
    pub thresholds: Vec<f64>,
    /// `p_i` per compressed phase, clamped to 1.
    pub probabilities: Vec<f64>,
    /// `k_i` per compressed phase.
    pub machine_counts: Vec<usize>,
    /// Local-Peeling iteration count `t_max` per compressed phase.
    pub local_iterations: Vec<usize>,
    /// Phases whose sampling probability was clamped to 1.
    pub degenerate: Vec<bool>,
}

pub fn log2n(n: usize) -> f64 {
    (n as f64).log2()
}

/// Smallest `t ≥ 0` with `delta / 2^t ≤ floor`.
pub fn iterations_to_floor(delta: f64, floor: f64) -> usize {
    if floor <= 0.0 || !delta.is_finite() {
        return 0;
    }
    let mut t = 0;
    while delta / 2f64.powi(t as i32) > floor {
        t += 1;
    }
    t
}

/// `⌈x⌉`, forgiving float noise just above an integer.
fn ceil_clean(x: f64) -> f64 {
    let r = x.round();
    if (x - r).abs() <= 1e-9 * x.abs().max(1.0) {
        r
    } else {
        x.ceil()
    }
}

/// Upper bound on the threshold count: `⌈log₂ log₂ n⌉ + 2`.
pub fn max_thresholds(n: usize) -> usize {
    let ll = log2n(n).max(1.0).log2();
    ceil_clean(ll).max(0.0) as usize + 2
}

pub fn make_schedule(n: usize, s: usize, c_scale: f64) -> Result<PhaseSchedule> {
    if n < 2 {
        return param(format!("schedule needs n >= 2, got {n}"));
    }
    if s < 2 || s > n {
        return param(format!("memory s = {s} must satisfy 2 <= s <= n = {n}"));
    }
    if !(c_scale > 0.0 && c_scale.is_finite()) {
        return param(format!("c_scale must be positive, got {c_scale}"));
    }
    let nf = n as f64;
    let sf = s as f64;
    let base = c_scale * log2n(n);
    let floor = base * nf / sf;
    let cap = max_thresholds(n);

    let mut thresholds = Vec::new();
    for i in 1..=cap {
        let raw = nf / sf.powf(1.0 - 0.5f64.powi(i as i32 - 1));
        let value = ceil_clean(raw);
        // Values at or below 2 cannot be square-rooted further; stop there too.
        if value <= floor || value <= 2.0 || i == cap {
            thresholds.push(floor);
            break;
        }
        thresholds.push(value);
    }

    let phases = thresholds.len() - 1;
    let mut probabilities = Vec::with_capacity(phases);
    let mut machine_counts = Vec::with_capacity(phases);
    let mut local_iterations = Vec::with_capacity(phases);
    let mut degenerate = Vec::with_capacity(phases);
    for i in 0..phases {
        let next = thresholds[i + 1];
        let raw_p = base / next;
        let p = raw_p.min(1.0);
        probabilities.push(p);
        machine_counts.push(ceil_clean(next).max(1.0) as usize);
        local_iterations.push(iterations_to_floor(p * thresholds[i], base));
        degenerate.push(raw_p >= 1.0);
    }

    Ok(PhaseSchedule {
        n,
        s,
        c_scale,
        thresholds,
        probabilities,
        machine_counts,
        local_iterations,
        degenerate,
    })
}

impl PhaseSchedule {
    /// Number of thresholds `τ`.
    pub fn tau(&self) -> usize {
        self.thresholds.len()
    }

    /// Number of compressed (sampling) phases, `τ - 1`.
    pub fn phases(&self) -> usize {
        self.probabilities.len()
    }

    pub fn is_linear(&self) -> bool {
        self.s == self.n
    }

    /// `c·log₂ n`, the per-machine degree floor.
    pub fn local_floor(&self) -> f64 {
        self.c_scale * log2n(self.n)
    }

    /// `Δ_τ`.
    pub fn final_threshold(&self) -> f64 {
        *self.thresholds.last().expect("schedule is never empty")
    }

    /// Local-Peeling threshold `p_i·Δ_i` for 0-based phase `i`.
    pub fn local_delta(&self, i: usize) -> f64 {
        self.probabilities[i] * self.thresholds[i]
    }

    /// True when `τ = 1` or some phase had its sampling probability clamped.
    pub fn is_degenerate(&self) -> bool {
        self.tau() == 1 || self.degenerate.iter().any(|&d| d)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linear_schedule_n65536() {
        let s = make_schedule(65536, 65536, 4.0).unwrap();
        assert_eq!(s.thresholds, vec![65536.0, 256.0, 64.0]);
        assert_eq!(s.tau(), 3);
        assert_eq!(s.probabilities[0], 0.25);
        assert_eq!(s.machine_counts[0], 256);
        // 4 log n / Δ_3 = 64 / 64
        assert_eq!(s.probabilities[1], 1.0);
        assert!(s.degenerate[1]);
        // p_1 Δ_1 = 16384 -> halve until <= 64: 8 times = log₂ 256
        assert_eq!(s.local_iterations[0], 8);
    }

    #[test]
    fn tiny_schedule_is_single_threshold() {
        let s = make_schedule(4, 4, 4.0).unwrap();
        assert_eq!(s.tau(), 1);
        assert_eq!(s.thresholds, vec![8.0]);
        assert_eq!(s.phases(), 0);
        assert!(s.is_degenerate());
    }

    #[test]
    fn sublinear_floor() {
        let n = 4096;
        let s = make_schedule(n, 64, 4.0).unwrap();
        // floor = 4 · 64 · 12; Δ_2 = 4096 / 8 = 512 falls below it
        assert_eq!(s.thresholds, vec![4096.0, 3072.0]);
        assert!((s.probabilities[0] - 48.0 / 3072.0).abs() < 1e-12);
        assert_eq!(s.machine_counts[0], 3072);
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(make_schedule(1, 1, 4.0).is_err());
        assert!(make_schedule(10, 1, 4.0).is_err());
        assert!(make_schedule(10, 11, 4.0).is_err());
        assert!(make_schedule(10, 10, 0.0).is_err());
    }

    #[test]
    fn tau_bound_holds_broadly() {
        for &n in &[2usize, 3, 5, 16, 100, 1000, 4096, 65536, 1 << 20] {
            for &c in &[0.01, 0.5, 1.0, 2.0, 4.0, 16.0] {
                for s in [n, (n as f64).powf(0.75) as usize, (n as f64).sqrt() as usize] {
                    if s < 2 {
                        continue;
                    }
                    let sch = make_schedule(n, s, c).unwrap();
                    assert!(sch.tau() <= max_thresholds(n), "n={n} s={s} c={c}");
                    assert!(sch.probabilities.iter().all(|&p| p > 0.0 && p <= 1.0));
                }
            }
        }
    }

    #[test]
    fn interior_thresholds_are_square_roots() {
        let s = make_schedule(1 << 20, 1 << 20, 0.5).unwrap();
        for w in s.thresholds[..s.tau() - 1].windows(2) {
            assert_eq!(w[1], w[0].sqrt().ceil());
        }
    }
}
