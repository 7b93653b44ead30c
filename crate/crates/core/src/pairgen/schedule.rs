//! Contact schedule of a single pair.
//!
//! All assembly happens on the granularity grid. A draw in seconds becomes
//! `max(1, round(x / granularity))` ticks, so every contact and every gap
//! lasts at least one tick.

use alloc::vec::Vec;

use super::{Group, PairParams, SimConfig};
use crate::error::Result;
use crate::sampling::{Exponential, Normal, ParetoParams, Sampler, Uniform};
use crate::trace::ContactEvent;

/// Start of the next encounter: the gap, the previous contact's duration and
/// the previous start, summed.
pub fn next_encounter(prev_start: u64, prev_duration: u64, ict: u64) -> u64 {
    ict + prev_duration + prev_start
}

fn to_ticks(seconds: f64, granularity: u64) -> u64 {
    let t = libm::round(seconds / granularity as f64);
    if t >= 1.0 {
        t as u64
    } else {
        1
    }
}

fn duration_law(config: &SimConfig) -> Result<ParetoParams> {
    ParetoParams::new(config.alpha_c, config.granularity_s as f64)
}

/// One intercontact time (seconds) for a frequent pair, drawn at time of day
/// `t_day`.
///
/// A power-law draw at or below the threshold is kept as is. Otherwise the
/// gap is `ceil(Exp(λ))` whole days plus a normal offset that moves the next
/// meeting to around `mu_day`. With the periodic term disabled the gap is a
/// plain `D_day * Exp(λ)`. The result is never below the granularity.
pub fn sample_ict_piecewise<S: Sampler + ?Sized>(
    config: &SimConfig,
    lambda: f64,
    t_day: f64,
    stream: &mut S,
) -> Result<f64> {
    let short = ParetoParams::new(config.alpha_ict, config.granularity_s as f64)?;
    let day_gap = Exponential::new(lambda)?;
    let g = config.granularity_s as f64;
    let d_day = config.d_day_s as f64;

    let p = stream.pareto(short);
    if p <= config.threshold_s {
        return Ok(p.max(g));
    }
    let days = stream.exponential(day_gap);
    let ict = if config.periodic {
        let offset = Normal::new(config.mu_day_s - t_day, config.sigma_day_s)?;
        libm::ceil(days) * d_day + stream.normal(offset)
    } else {
        days * d_day
    };
    Ok(ict.max(g))
}

/// Schedule of a piecewise-variant pair.
pub fn generate_pair_schedule<S: Sampler + ?Sized>(
    config: &SimConfig,
    params: &PairParams,
    stream: &mut S,
) -> Result<Vec<ContactEvent>> {
    if params.n_e == 0 {
        return Ok(Vec::new());
    }
    match (params.group, params.lambda) {
        (Group::Frequent, Some(lambda)) => frequent_schedule(config, params, lambda, stream),
        _ => sporadic_schedule(config, params, stream),
    }
}

fn frequent_schedule<S: Sampler + ?Sized>(
    config: &SimConfig,
    params: &PairParams,
    lambda: f64,
    stream: &mut S,
) -> Result<Vec<ContactEvent>> {
    let durations = duration_law(config)?;
    let horizon = config.horizon_ticks();
    let (i, j) = params.pair;
    let mut events = Vec::new();
    // Nobody is connected at time zero: the first gap runs from t = 0.
    let (mut prev_start, mut prev_duration) = (0u64, 0u64);
    loop {
        let now = prev_start + prev_duration;
        let t_day = ((now * config.granularity_s) % config.d_day_s) as f64;
        let ict = sample_ict_piecewise(config, lambda, t_day, stream)?;
        let start = next_encounter(prev_start, prev_duration, to_ticks(ict, config.granularity_s));
        if start >= horizon {
            break;
        }
        let duration = to_ticks(stream.pareto(durations), config.granularity_s);
        let end = start.saturating_add(duration).min(horizon);
        events.push(ContactEvent { i, j, start, end });
        if end >= horizon {
            break;
        }
        prev_start = start;
        prev_duration = end - start;
    }
    Ok(events)
}

fn sporadic_schedule<S: Sampler + ?Sized>(
    config: &SimConfig,
    params: &PairParams,
    stream: &mut S,
) -> Result<Vec<ContactEvent>> {
    let durations = duration_law(config)?;
    let horizon = config.horizon_ticks();
    let days = Uniform::new(0.0, config.d_sim_days as f64)?;
    let time_of_day = Normal::new(config.mu_day_s, config.sigma_day_s)?;
    let d_day = config.d_day_s as f64;
    let g = config.granularity_s as f64;

    let mut starts = Vec::with_capacity(params.n_e as usize);
    for _ in 0..params.n_e {
        let t = if config.periodic {
            let day = libm::floor(stream.uniform(days)).min(config.d_sim_days as f64 - 1.0);
            day * d_day + stream.normal(time_of_day)
        } else {
            stream.uniform(days) * d_day
        };
        let tick = libm::round(t / g);
        if tick >= 0.0 && tick < horizon as f64 {
            starts.push(tick as u64);
        }
    }
    starts.sort_unstable();
    let raw: Vec<(u64, u64)> = starts
        .into_iter()
        .map(|s| {
            let d = to_ticks(stream.pareto(durations), config.granularity_s);
            (s, s.saturating_add(d).min(horizon))
        })
        .collect();
    let (i, j) = params.pair;
    Ok(resolve_overlaps(&raw)
        .into_iter()
        .map(|(start, end)| ContactEvent { i, j, start, end })
        .collect())
}

/// Makes start-sorted `(start, end)` intervals disjoint with at least one
/// tick between contacts.
///
/// A contact running into the next one is cut to end one tick before the
/// next start. If that leaves nothing, the two contacts are merged into one
/// spanning both.
pub fn resolve_overlaps(raw: &[(u64, u64)]) -> Vec<(u64, u64)> {
    let mut out = Vec::with_capacity(raw.len());
    let mut pending: Option<(u64, u64)> = None;
    for &(s, e) in raw {
        pending = Some(match pending {
            None => (s, e),
            Some((ps, pe)) if pe < s => {
                out.push((ps, pe));
                (s, e)
            }
            Some((ps, pe)) => match s.checked_sub(1) {
                Some(cut) if cut > ps => {
                    out.push((ps, cut));
                    (s, e)
                }
                _ => (ps, pe.max(e)),
            },
        });
    }
    out.extend(pending);
    out
}

/// Schedule of an exponential-pairwise pair: exponential gaps at the pair's
/// contact rate, same durations and assembly as the piecewise variant.
pub fn generate_pair_schedule_exponential<S: Sampler + ?Sized>(
    config: &SimConfig,
    params: &PairParams,
    stream: &mut S,
) -> Result<Vec<ContactEvent>> {
    let rate = params.exp_rate.unwrap_or(params.r_e);
    if rate.is_nan() || rate <= 0.0 {
        return Ok(Vec::new());
    }
    let gaps = Exponential::new(rate)?;
    let durations = duration_law(config)?;
    let horizon = config.horizon_ticks();
    let (i, j) = params.pair;
    let mut events = Vec::new();
    let (mut prev_start, mut prev_duration) = (0u64, 0u64);
    loop {
        let ict = to_ticks(stream.exponential(gaps), config.granularity_s);
        let start = next_encounter(prev_start, prev_duration, ict);
        if start >= horizon {
            break;
        }
        let duration = to_ticks(stream.pareto(durations), config.granularity_s);
        let end = start.saturating_add(duration).min(horizon);
        events.push(ContactEvent { i, j, start, end });
        if end >= horizon {
            break;
        }
        prev_start = start;
        prev_duration = end - start;
    }
    Ok(events)
}
