//! The time-varying contact graph.
//!
//! Event times are stored as granularity ticks; the query API speaks
//! seconds. An edge `(i, j)` is active at `t` when some contact satisfies
//! `start < t <= end`.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{Error, Result};

/// One contact between users `i < j`, in granularity ticks.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ContactEvent {
    pub i: u32,
    pub j: u32,
    pub start: u64,
    pub end: u64,
}

impl ContactEvent {
    pub fn pair(&self) -> (u32, u32) {
        (self.i, self.j)
    }

    fn sort_key(&self) -> (u64, u32, u32) {
        (self.start, self.i, self.j)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TraceVariant {
    Piecewise,
    /// Piecewise with the time-of-day term switched off.
    PiecewiseAperiodic,
    ExponentialPairwise,
    /// Converted from an external contact dataset.
    Imported,
}

impl TraceVariant {
    pub fn as_str(&self) -> &'static str {
        match self {
            TraceVariant::Piecewise => "piecewise",
            TraceVariant::PiecewiseAperiodic => "piecewise-aperiodic",
            TraceVariant::ExponentialPairwise => "exponential-pairwise",
            TraceVariant::Imported => "imported",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "piecewise" => TraceVariant::Piecewise,
            "piecewise-aperiodic" => TraceVariant::PiecewiseAperiodic,
            "exponential-pairwise" => TraceVariant::ExponentialPairwise,
            "imported" => TraceVariant::Imported,
            _ => return None,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceMeta {
    pub n_users: u32,
    pub d_sim_days: u32,
    pub d_day_s: u64,
    pub granularity_s: u64,
    pub seed: Option<u64>,
    pub variant: TraceVariant,
    pub version: String,
}

impl TraceMeta {
    pub fn validate(&self) -> Result<()> {
        if self.n_users < 2 {
            return Err(Error::Config(format!("trace needs at least 2 users, got {}", self.n_users)));
        }
        if self.granularity_s == 0 || self.d_day_s == 0 || !self.d_day_s.is_multiple_of(self.granularity_s) {
            return Err(Error::Config(format!(
                "day length {} must be a positive multiple of granularity {}",
                self.d_day_s, self.granularity_s
            )));
        }
        Ok(())
    }

    pub fn horizon_ticks(&self) -> u64 {
        self.d_sim_days as u64 * (self.d_day_s / self.granularity_s)
    }

    pub fn duration_s(&self) -> u64 {
        self.d_sim_days as u64 * self.d_day_s
    }
}

/// Time-sorted contacts plus a per-pair index. Immutable once built.
#[derive(Clone, Debug, PartialEq)]
pub struct Trace {
    meta: TraceMeta,
    events: Vec<ContactEvent>,
    by_pair: BTreeMap<(u32, u32), Vec<u32>>,
}

/// Merges per-pair schedules into one trace.
pub fn assemble_trace<I>(meta: TraceMeta, schedules: I) -> Result<Trace>
where
    I: IntoIterator<Item = Vec<ContactEvent>>,
{
    let events: Vec<ContactEvent> = schedules.into_iter().flatten().collect();
    Trace::from_events(meta, events)
}

impl Trace {
    /// Sorts `events` by `(start, i, j)` and checks every trace invariant.
    pub fn from_events(meta: TraceMeta, mut events: Vec<ContactEvent>) -> Result<Trace> {
        meta.validate()?;
        events.sort_unstable_by_key(ContactEvent::sort_key);
        Self::from_sorted(meta, events)
    }

    /// Like [`Trace::from_events`] but rejects input that is not already
    /// sorted.
    pub fn from_sorted(meta: TraceMeta, events: Vec<ContactEvent>) -> Result<Trace> {
        meta.validate()?;
        let horizon = meta.horizon_ticks();
        if u32::try_from(events.len()).is_err() {
            return Err(Error::Config("trace exceeds u32::MAX events".into()));
        }
        let mut by_pair: BTreeMap<(u32, u32), Vec<u32>> = BTreeMap::new();
        for (k, ev) in events.iter().enumerate() {
            let pair = ev.pair();
            let bad = |reason: String| Err(Error::Assembly { pair, reason });
            if ev.i >= ev.j {
                return bad("user ids must satisfy i < j".into());
            }
            if ev.j >= meta.n_users {
                return bad(format!("user id {} is not below n_users = {}", ev.j, meta.n_users));
            }
            if ev.start >= ev.end {
                return bad(format!("contact starting at tick {} does not end after it", ev.start));
            }
            if ev.end > horizon {
                return bad(format!("contact ends at tick {} past the horizon {horizon}", ev.end));
            }
            if k > 0 && events[k - 1].sort_key() >= ev.sort_key() {
                return bad(format!("events are not strictly sorted by (start, i, j) at index {k}"));
            }
            let slot = by_pair.entry(pair).or_default();
            if let Some(&prev) = slot.last() {
                let prev = &events[prev as usize];
                if prev.end >= ev.start {
                    return bad(format!(
                        "contact at tick {} overlaps or touches the previous one ending at {}",
                        ev.start, prev.end
                    ));
                }
            }
            slot.push(k as u32);
        }
        Ok(Trace { meta, events, by_pair })
    }

    pub fn meta(&self) -> &TraceMeta {
        &self.meta
    }

    pub fn events(&self) -> &[ContactEvent] {
        &self.events
    }

    pub fn n_users(&self) -> u32 {
        self.meta.n_users
    }

    pub fn granularity_s(&self) -> u64 {
        self.meta.granularity_s
    }

    /// `(start, end)` of an event in seconds.
    pub fn seconds(&self, ev: &ContactEvent) -> (u64, u64) {
        let g = self.meta.granularity_s;
        (ev.start * g, ev.end * g)
    }

    /// Pairs with at least one contact, in ascending order.
    pub fn pairs(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        self.by_pair.keys().copied()
    }

    /// The pair's contacts in time order. Accepts `(i, j)` in either order.
    pub fn pair_events(&self, i: u32, j: u32) -> impl Iterator<Item = &ContactEvent> + '_ {
        let key = if i < j { (i, j) } else { (j, i) };
        self.by_pair
            .get(&key)
            .into_iter()
            .flatten()
            .map(move |&k| &self.events[k as usize])
    }

    fn check_pair(&self, i: u32, j: u32) -> Result<()> {
        let n = self.meta.n_users;
        if i >= n || j >= n {
            return Err(Error::Query(format!("unknown user in pair ({i}, {j}); n_users = {n}")));
        }
        if i == j {
            return Err(Error::Query(format!("pair ({i}, {j}) is not a pair of distinct users")));
        }
        Ok(())
    }

    /// Whether users `i` and `j` are in contact at `t` seconds.
    pub fn edge_active(&self, i: u32, j: u32, t: u64) -> Result<bool> {
        self.check_pair(i, j)?;
        Ok(self.pair_events(i, j).any(|ev| {
            let (s, e) = self.seconds(ev);
            s < t && t <= e
        }))
    }

    /// Gaps in seconds between the end of each contact and the start of the
    /// next one. Pairs with fewer than two contacts yield nothing.
    pub fn intercontact_times(&self, i: u32, j: u32) -> Vec<u64> {
        let g = self.meta.granularity_s;
        let evs: Vec<&ContactEvent> = self.pair_events(i, j).collect();
        evs.windows(2).map(|w| (w[1].start - w[0].end) * g).collect()
    }

    /// Every pair's intercontact times, concatenated in pair order.
    pub fn all_intercontact_times(&self) -> Vec<u64> {
        let g = self.meta.granularity_s;
        let mut out = Vec::new();
        for idx in self.by_pair.values() {
            for w in idx.windows(2) {
                let (a, b) = (&self.events[w[0] as usize], &self.events[w[1] as usize]);
                out.push((b.start - a.end) * g);
            }
        }
        out
    }

    pub fn contact_count(&self, i: u32, j: u32) -> usize {
        let key = if i < j { (i, j) } else { (j, i) };
        self.by_pair.get(&key).map_or(0, Vec::len)
    }

    /// Pairs in contact at `t` seconds.
    pub fn active_pairs(&self, t: u64) -> BTreeSet<(u32, u32)> {
        let g = self.meta.granularity_s;
        // contacts with start < t, i.e. start_tick < ceil(t / g)
        let limit = t.div_ceil(g);
        let upto = self.events.partition_point(|ev| ev.start < limit);
        self.events[..upto]
            .iter()
            .filter(|ev| t <= ev.end * g)
            .map(ContactEvent::pair)
            .collect()
    }
}
