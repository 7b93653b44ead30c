#![cfg_attr(not(test), no_std)]

//! Mobility-free generator of pairwise human-encounter traces, plus the
//! analysis and epidemic-replay machinery used to study them.
//!
//! Every pair of users gets a contact rate drawn from a gamma model. Pairs
//! above a rate threshold follow a power-law intercontact-time law with a
//! day-scale exponential tail and a time-of-day term; sporadic pairs meet at
//! uniformly drawn days. The resulting [`Trace`](trace::Trace) is a
//! time-varying contact graph that can be analysed ([`stats`]) or replayed
//! under epidemic routing ([`epidemic`]).
//!
//! The crate only needs `alloc`. File formats and the CLI live in the
//! `pocketsim` crate.

extern crate alloc;

pub mod epidemic;
mod error;
pub mod generator;
pub mod pairgen;
pub mod sampling;
pub mod stats;
pub mod trace;

pub use error::{Error, Result};
pub use generator::{generate_trace, Generated};
pub use pairgen::{PairParams, SimConfig, Variant};
pub use trace::{ContactEvent, Trace, TraceMeta, TraceVariant};

/// Version string stamped into trace metadata.
pub const GENERATOR_VERSION: &str = env!("CARGO_PKG_VERSION");
