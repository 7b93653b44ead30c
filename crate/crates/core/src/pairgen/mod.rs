//! Per-pair parameters and contact schedules.

mod calibrate;
mod config;
mod schedule;

use alloc::string::ToString;

pub use calibrate::{
    expected_count, max_expected_count, overshoot_probability, solve_lambda, CalibrationFailure,
    MIN_LAMBDA_PER_DAY,
};
pub use config::{SimConfig, Variant, DEFAULT_ALPHA_C, DEFAULT_ALPHA_ICT};
pub use schedule::{
    generate_pair_schedule, generate_pair_schedule_exponential, next_encounter,
    resolve_overlaps, sample_ict_piecewise,
};

use crate::error::{Error, Result};
use crate::sampling::Sampler;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Group {
    /// Contact rate above the threshold: power law with day-scale decay.
    Frequent,
    /// Contact rate at or below the threshold: uniformly placed meetings.
    Sporadic,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PairParams {
    /// `(i, j)` with `i < j`.
    pub pair: (u32, u32),
    /// Contacts per second.
    pub r_e: f64,
    pub n_e: u64,
    pub group: Group,
    /// Day-gap rate per day; set for frequent pairs of the piecewise variant.
    pub lambda: Option<f64>,
    /// Exponential intercontact rate per second; set for the
    /// exponential-pairwise variant.
    pub exp_rate: Option<f64>,
}

/// `floor(duration * rate)`, the assigned number of encounters.
pub fn encounter_count(r_e: f64, duration_s: f64) -> u64 {
    let n = libm::floor(duration_s * r_e);
    if n > 0.0 {
        n as u64
    } else {
        0
    }
}

pub fn classify(config: &SimConfig, r_e: f64) -> Group {
    if r_e > config.rate_threshold {
        Group::Frequent
    } else {
        Group::Sporadic
    }
}

/// Index of `(i, j)`, `i < j`, in row-major upper-triangle order. Used as the
/// pair's random substream.
pub fn pair_index(n_users: u32, i: u32, j: u32) -> u64 {
    debug_assert!(i < j && j < n_users);
    let (n, i, j) = (n_users as u64, i as u64, j as u64);
    i * n - i * (i + 1) / 2 + (j - i - 1)
}

/// Draws the pair's contact rate and derives everything the schedule needs.
///
/// The gamma draw is the expected number of contacts over the whole
/// simulation; the rate is that count divided by the simulated duration.
pub fn draw_pair_params<S: Sampler + ?Sized>(
    config: &SimConfig,
    pair: (u32, u32),
    stream: &mut S,
) -> Result<PairParams> {
    let draw = stream.gamma(config.gamma);
    params_from_rate(config, pair, draw / config.duration_s())
}

/// Builds [`PairParams`] from an already known contact rate.
pub fn params_from_rate(config: &SimConfig, pair: (u32, u32), r_e: f64) -> Result<PairParams> {
    if pair.0 >= pair.1 || pair.1 >= config.n_users {
        return Err(Error::Config(alloc::format!(
            "pair ({}, {}) is not an ordered pair of users below {}",
            pair.0,
            pair.1,
            config.n_users
        )));
    }
    let n_e = encounter_count(r_e, config.duration_s());
    let group = classify(config, r_e);
    let (lambda, exp_rate) = match config.variant {
        Variant::ExponentialPairwise => (None, Some(r_e)),
        Variant::Piecewise if group == Group::Frequent && n_e >= 1 => {
            let lambda = solve_lambda(config, n_e).map_err(|e| Error::Calibration {
                pair,
                reason: e.to_string(),
            })?;
            (Some(lambda), None)
        }
        Variant::Piecewise => (None, None),
    };
    Ok(PairParams { pair, r_e, n_e, group, lambda, exp_rate })
}
