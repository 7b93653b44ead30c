//! Per-pair calibration of the day-gap rate λ.
//!
//! A frequent pair's schedule is a sequence of bursts. Each intercontact draw
//! stays inside the short power-law range with probability `1 - q`, where
//! `q = P(p > T)`, so a burst holds `1/q` contacts on average. Bursts are
//! separated by day-scale gaps. With whole-day gaps `ceil(Exp(λ))` the gap
//! length is geometric, so every later day independently hosts a burst with
//! probability `1 - e^-λ`; with continuous gaps burst starts form a Poisson
//! process of rate λ per day. The first burst opens at time zero with
//! probability `1 - q`. Hence
//!
//! ```text
//! E[count] = ((1 - q) + (D_sim - 1)(1 - e^-λ)) / q      (whole days)
//! E[count] = ((1 - q) + D_sim λ) / q                    (continuous)
//! ```
//!
//! which is inverted in closed form.

use core::fmt;

use super::SimConfig;
use crate::sampling::ParetoParams;

/// Smallest λ handed out when the requested count is below what a single
/// opening burst already produces.
pub const MIN_LAMBDA_PER_DAY: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq)]
pub enum CalibrationFailure {
    ZeroEncounters,
    /// More encounters than bursts on every simulated day can deliver.
    TooManyEncounters { requested: u64, max_expected: f64 },
}

impl fmt::Display for CalibrationFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CalibrationFailure::ZeroEncounters => f.write_str("encounter count must be at least 1"),
            CalibrationFailure::TooManyEncounters { requested, max_expected } => write!(
                f,
                "{requested} encounters cannot fit in the simulation (at most {max_expected:.1} expected)"
            ),
        }
    }
}

/// Probability that a short-range intercontact draw overshoots the threshold.
pub fn overshoot_probability(config: &SimConfig) -> f64 {
    ParetoParams::new(config.alpha_ict, config.granularity_s as f64)
        .map(|p| p.survival(config.threshold_s))
        .unwrap_or(1.0)
}

/// Expected number of contacts over the simulation for day-gap rate
/// `lambda` (per day).
pub fn expected_count(config: &SimConfig, lambda: f64) -> f64 {
    let q = overshoot_probability(config);
    let days = config.d_sim_days as f64;
    let bursts = if config.periodic {
        (days - 1.0) * -libm::expm1(-lambda)
    } else {
        days * lambda
    };
    ((1.0 - q) + bursts) / q
}

/// Largest count reachable under whole-day gaps (a burst every day).
pub fn max_expected_count(config: &SimConfig) -> f64 {
    let q = overshoot_probability(config);
    ((1.0 - q) + (config.d_sim_days as f64 - 1.0)) / q
}

/// Solves λ (per day) so that [`expected_count`] equals `n_e`.
///
/// Counts below the single-burst floor `(1 - q)/q` map to
/// [`MIN_LAMBDA_PER_DAY`]. The continuous-gap mode shares the whole-day
/// upper bound so both modes accept the same pairs.
pub fn solve_lambda(config: &SimConfig, n_e: u64) -> Result<f64, CalibrationFailure> {
    if n_e == 0 {
        return Err(CalibrationFailure::ZeroEncounters);
    }
    let q = overshoot_probability(config);
    let days = config.d_sim_days as f64;
    let target = n_e as f64;
    let max_expected = max_expected_count(config);
    if target >= max_expected {
        return Err(CalibrationFailure::TooManyEncounters { requested: n_e, max_expected });
    }
    let needed_bursts = q * target - (1.0 - q);
    if needed_bursts <= 0.0 {
        return Ok(MIN_LAMBDA_PER_DAY);
    }
    let lambda = if config.periodic {
        let per_day = needed_bursts / (days - 1.0);
        -libm::log1p(-per_day)
    } else {
        needed_bursts / days
    };
    Ok(lambda.max(MIN_LAMBDA_PER_DAY))
}
