//! Exact time evolution of a packet under the billiard spectrum.
//!
//! Modes are orthonormal, so the autocorrelation reduces to a phase sum over
//! occupation weights: `C(t) = |Σ_j |c_j|^2 e^{-i E_j t / ħ}|^2`.

use num_complex::Complex64;
use serde::Serialize;

use crate::scar::{lifetime_report, ScarPacket};

/// Default lifetime threshold `C(τ) = 1/e`.
pub const DEFAULT_THRESHOLD: f64 = 0.367_879_441_171_442_33;
/// Default number of samples of [`lifetime_consistency`].
pub const DEFAULT_STEPS: usize = 2048;

/// Survival probability at time `t` (physical units).
pub fn survival(packet: &ScarPacket, t: f64) -> f64 {
    let hbar = packet.config.hbar;
    let amp: Complex64 = packet
        .coeffs
        .iter()
        .zip(&packet.shell.members)
        .map(|(c, m)| c.norm_sqr() * Complex64::from_polar(1.0, -m.energy * t / hbar))
        .sum();
    amp.norm_sqr().min(1.0)
}

/// Uniformly sampled `C(t)`; times are in units of the classical time `T`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SurvivalCurve {
    pub times: Vec<f64>,
    pub values: Vec<f64>,
    /// First crossing of the threshold (units of `T`), `+∞` if none.
    pub tau_numeric: f64,
}

/// [`survival_curve_with_threshold`] at the `1/e` threshold.
pub fn survival_curve(packet: &ScarPacket, t_max_over_t: f64, steps: usize) -> SurvivalCurve {
    survival_curve_with_threshold(packet, t_max_over_t, steps, DEFAULT_THRESHOLD)
}

/// Samples `steps` points on `[0, t_max]` (both ends included), with `t_max`
/// given in units of `T`. The crossing time is linearly interpolated.
pub fn survival_curve_with_threshold(
    packet: &ScarPacket,
    t_max_over_t: f64,
    steps: usize,
    threshold: f64,
) -> SurvivalCurve {
    let steps = steps.max(2);
    let t_classical = lifetime_report(packet).t_classical;
    let times: Vec<f64> = (0..steps)
        .map(|i| t_max_over_t * i as f64 / (steps - 1) as f64)
        .collect();
    let values: Vec<f64> = times
        .iter()
        .map(|&t| survival(packet, t * t_classical))
        .collect();
    let tau_numeric = first_crossing(&times, &values, threshold);
    SurvivalCurve {
        times,
        values,
        tau_numeric,
    }
}

fn first_crossing(times: &[f64], values: &[f64], threshold: f64) -> f64 {
    for i in 1..values.len() {
        if values[i] <= threshold {
            let (c0, c1) = (values[i - 1], values[i]);
            let (t0, t1) = (times[i - 1], times[i]);
            if c0 == c1 {
                return t1;
            }
            return t0 + (threshold - c0) / (c1 - c0) * (t1 - t0);
        }
    }
    f64::INFINITY
}

/// Agreement between the numerical lifetime and `ħ / ΔE`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConsistencyReport {
    /// Units of `T`.
    pub tau_numeric: f64,
    /// Units of `T`.
    pub tau_q: f64,
    pub ratio_of_estimates: f64,
    pub consistent: bool,
}

pub fn lifetime_consistency(packet: &ScarPacket, t_max_over_t: f64) -> ConsistencyReport {
    let curve = survival_curve(packet, t_max_over_t, DEFAULT_STEPS);
    let tau_q = lifetime_report(packet).ratio;
    let (ratio_of_estimates, consistent) = match (curve.tau_numeric.is_finite(), tau_q.is_finite())
    {
        (false, false) => (1.0, true),
        (true, true) => {
            let r = curve.tau_numeric / tau_q;
            (r, (0.5..=2.0).contains(&r))
        }
        (false, true) => (f64::INFINITY, false),
        (true, false) => (0.0, false),
    };
    ConsistencyReport {
        tau_numeric: curve.tau_numeric,
        tau_q,
        ratio_of_estimates,
        consistent,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectrum::{BilliardConfig, EigenMode, Shell};

    fn two_level(e1: f64, e2: f64, w1: f64) -> ScarPacket {
        let c = BilliardConfig::default();
        let mut a = EigenMode::from_zero(&c, 3, 10, 20.0);
        let mut b = EigenMode::from_zero(&c, 2, 13, 20.0);
        a.energy = e1;
        b.energy = e2;
        let shell = Shell::from_members(&c, 1, 3, 10, 3, vec![a, b]);
        let coeffs = vec![
            Complex64::new(w1.sqrt(), 0.0),
            Complex64::new((1.0 - w1).sqrt(), 0.0),
        ];
        ScarPacket::with_coefficients(&shell, 0.5, coeffs).unwrap()
    }

    #[test]
    fn starts_at_one() {
        let p = two_level(1.0, 3.0, 0.3);
        assert!((survival(&p, 0.0) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn two_level_beat() {
        let (e1, e2, w1) = (200.0, 203.5, 0.3);
        let p = two_level(e1, e2, w1);
        let period = std::f64::consts::TAU / (e2 - e1);
        for k in 0..50 {
            let t = 0.037 * k as f64;
            let closed = (Complex64::from_polar(w1, -e1 * t)
                + Complex64::from_polar(1.0 - w1, -e2 * t))
            .norm_sqr();
            assert!((survival(&p, t) - closed).abs() < 1e-12);
            assert!((survival(&p, t + period) - survival(&p, t)).abs() < 1e-9);
        }
    }

    #[test]
    fn crossing_interpolates() {
        let t = [0.0, 1.0, 2.0];
        let v = [1.0, 0.5, 0.0];
        assert!((first_crossing(&t, &v, 0.25) - 1.5).abs() < 1e-15);
        assert!(first_crossing(&t, &[1.0, 0.9, 0.8], 0.25).is_infinite());
    }
}
