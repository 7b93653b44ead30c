//! End-to-end trace generation.

use alloc::string::ToString;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::pairgen::{
    draw_pair_params, generate_pair_schedule, generate_pair_schedule_exponential, pair_index,
    PairParams, SimConfig, Variant,
};
use crate::sampling::RandomStream;
use crate::trace::{assemble_trace, ContactEvent, Trace, TraceMeta, TraceVariant};
use crate::GENERATOR_VERSION;

/// A generated trace together with the per-pair parameters behind it.
#[derive(Clone, Debug)]
pub struct Generated {
    pub trace: Trace,
    /// One entry per unordered pair, in [`pair_index`] order.
    pub params: Vec<PairParams>,
}

pub fn trace_meta(config: &SimConfig, seed: u64) -> TraceMeta {
    let variant = match (config.variant, config.periodic) {
        (Variant::ExponentialPairwise, _) => TraceVariant::ExponentialPairwise,
        (Variant::Piecewise, true) => TraceVariant::Piecewise,
        (Variant::Piecewise, false) => TraceVariant::PiecewiseAperiodic,
    };
    TraceMeta {
        n_users: config.n_users,
        d_sim_days: config.d_sim_days,
        d_day_s: config.d_day_s,
        granularity_s: config.granularity_s,
        seed: Some(seed),
        variant,
        version: GENERATOR_VERSION.to_string(),
    }
}

/// Parameters and schedule of one pair, drawn from the pair's own substream.
pub fn generate_pair(
    config: &SimConfig,
    seed: u64,
    pair: (u32, u32),
) -> Result<(PairParams, Vec<ContactEvent>)> {
    let mut stream = RandomStream::new(seed, pair_index(config.n_users, pair.0, pair.1));
    let params = draw_pair_params(config, pair, &mut stream)?;
    let schedule = match config.variant {
        Variant::Piecewise => generate_pair_schedule(config, &params, &mut stream)?,
        Variant::ExponentialPairwise => {
            generate_pair_schedule_exponential(config, &params, &mut stream)?
        }
    };
    Ok((params, schedule))
}

/// Generates the full trace. Requires `config.seed`.
///
/// Each pair only reads its own substream, so the output depends on the
/// seed and configuration alone.
pub fn generate_trace(config: &SimConfig) -> Result<Generated> {
    config.validate()?;
    let seed = config
        .seed
        .ok_or_else(|| Error::Config("no seed set for generation".into()))?;
    let n = config.n_users;
    let mut params = Vec::with_capacity(config.pair_count() as usize);
    let mut schedules = Vec::with_capacity(params.capacity());
    for i in 0..n {
        for j in i + 1..n {
            let (p, s) = generate_pair(config, seed, (i, j))?;
            params.push(p);
            schedules.push(s);
        }
    }
    let trace = assemble_trace(trace_meta(config, seed), schedules)?;
    Ok(Generated { trace, params })
}
