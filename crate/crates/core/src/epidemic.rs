//! Epidemic-routing replay over a trace.
//!
//! One seed node holds the message at `t0`. Whenever an informed node shares
//! a contact with another node, the message passes instantly at
//! `max(contact start, informed time)` provided that is not after the
//! contact's end. Informed nodes stay informed. Blacklisted nodes never
//! forward; by default they still receive.

use alloc::collections::{BTreeSet, BinaryHeap};
use alloc::format;
use alloc::vec::Vec;
use core::cmp::Reverse;

use crate::error::{Error, Result};
use crate::sampling::RandomStream;
use crate::trace::Trace;

/// How blacklisted nodes take part in a broadcast.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum BlacklistPolicy {
    /// Receive the message but never forward it.
    #[default]
    ReceiveOnly,
    /// Neither receive nor forward.
    Isolate,
}

#[derive(Clone, Debug, PartialEq)]
pub struct EpidemicRun {
    pub seed_node: u32,
    /// Absolute trace time in seconds.
    pub t0: u64,
    pub blacklist: BTreeSet<u32>,
    /// Infection time in seconds per user; `None` if never reached.
    pub infection_times: Vec<Option<u64>>,
}

impl EpidemicRun {
    pub fn infected_count(&self) -> usize {
        self.infection_times.iter().filter(|t| t.is_some()).count()
    }
}

/// Per-node contact lists, sorted by end time, for repeated replays.
#[derive(Clone, Debug)]
pub struct ContactIndex {
    n_users: u32,
    duration_s: u64,
    /// `(end, start, neighbour)` in seconds.
    adjacency: Vec<Vec<(u64, u64, u32)>>,
}

impl ContactIndex {
    pub fn new(trace: &Trace) -> Self {
        let n = trace.n_users() as usize;
        let mut adjacency = alloc::vec![Vec::new(); n];
        for ev in trace.events() {
            let (s, e) = trace.seconds(ev);
            adjacency[ev.i as usize].push((e, s, ev.j));
            adjacency[ev.j as usize].push((e, s, ev.i));
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }
        ContactIndex { n_users: trace.n_users(), duration_s: trace.meta().duration_s(), adjacency }
    }

    pub fn n_users(&self) -> u32 {
        self.n_users
    }

    /// Earliest-arrival replay from `seed_node` at `t0`. Infections after
    /// `until` (seconds) are not explored.
    pub fn run(
        &self,
        seed_node: u32,
        t0: u64,
        blacklist: &BTreeSet<u32>,
        policy: BlacklistPolicy,
        until: Option<u64>,
    ) -> Result<EpidemicRun> {
        if seed_node >= self.n_users {
            return Err(Error::Query(format!(
                "seed node {seed_node} is not below n_users = {}",
                self.n_users
            )));
        }
        if t0 > self.duration_s {
            return Err(Error::Query(format!(
                "start time {t0} s lies outside the trace [0, {}]",
                self.duration_s
            )));
        }
        let n = self.n_users as usize;
        let mut best: Vec<Option<u64>> = alloc::vec![None; n];
        let mut done = alloc::vec![false; n];
        let mut heap = BinaryHeap::new();
        best[seed_node as usize] = Some(t0);
        heap.push(Reverse((t0, seed_node)));
        let limit = until.unwrap_or(u64::MAX);
        while let Some(Reverse((t, u))) = heap.pop() {
            if done[u as usize] {
                continue;
            }
            done[u as usize] = true;
            if blacklist.contains(&u) || t > limit {
                continue;
            }
            let list = &self.adjacency[u as usize];
            let from = list.partition_point(|&(end, _, _)| end < t);
            for &(_, start, v) in &list[from..] {
                if done[v as usize] {
                    continue;
                }
                if policy == BlacklistPolicy::Isolate && blacklist.contains(&v) {
                    continue;
                }
                let cand = start.max(t);
                if cand > limit {
                    continue;
                }
                if best[v as usize].is_none_or(|b| cand < b) {
                    best[v as usize] = Some(cand);
                    heap.push(Reverse((cand, v)));
                }
            }
        }
        Ok(EpidemicRun {
            seed_node,
            t0,
            blacklist: blacklist.clone(),
            infection_times: best,
        })
    }
}

/// Replays `trace` from `seed_node` at `t0` (seconds). Blacklisted nodes
/// receive but do not forward.
pub fn run_epidemic(
    trace: &Trace,
    seed_node: u32,
    t0: u64,
    blacklist: &BTreeSet<u32>,
) -> Result<EpidemicRun> {
    ContactIndex::new(trace).run(seed_node, t0, blacklist, BlacklistPolicy::ReceiveOnly, None)
}

/// Fraction infected as a step function of time since the start.
#[derive(Clone, Debug, PartialEq)]
pub struct InfectionCurve {
    /// `(seconds since t0, fraction infected)` on the granularity grid.
    pub points: Vec<(u64, f64)>,
}

impl InfectionCurve {
    /// Value of the step function at `t` seconds after the start.
    pub fn at(&self, t: u64) -> f64 {
        let k = self.points.partition_point(|&(x, _)| x <= t);
        if k == 0 {
            0.0
        } else {
            self.points[k - 1].1
        }
    }
}

/// Pointwise mean of the runs' infected fractions on the grid
/// `0, g, 2g, ..., horizon`.
pub fn infection_curve(
    runs: &[EpidemicRun],
    n_users: u32,
    granularity_s: u64,
    horizon_s: u64,
) -> Result<InfectionCurve> {
    if runs.is_empty() {
        return Err(Error::Query("no epidemic runs to average".into()));
    }
    if granularity_s == 0 {
        return Err(Error::Config("granularity must be positive".into()));
    }
    let steps = (horizon_s / granularity_s) as usize + 1;
    let mut increments = alloc::vec![0.0f64; steps];
    let weight = 1.0 / (runs.len() as f64 * n_users as f64);
    for run in runs {
        for t in run.infection_times.iter().flatten() {
            let delay = t - run.t0;
            let k = delay.div_ceil(granularity_s) as usize;
            if k < steps {
                increments[k] += weight;
            }
        }
    }
    let mut acc = 0.0;
    let points = increments
        .into_iter()
        .enumerate()
        .map(|(k, inc)| {
            acc += inc;
            (k as u64 * granularity_s, acc.min(1.0))
        })
        .collect();
    Ok(InfectionCurve { points })
}

/// Fraction of the pair's intercontact times strictly above `t` seconds;
/// 1 when the pair has none.
pub fn pair_survival(trace: &Trace, i: u32, j: u32, t: u64) -> f64 {
    survival_of(&trace.intercontact_times(i, j), t)
}

fn survival_of(icts: &[u64], t: u64) -> f64 {
    if icts.is_empty() {
        return 1.0;
    }
    icts.iter().filter(|&&x| x > t).count() as f64 / icts.len() as f64
}

/// `1 - mean(survivals)`.
pub fn centrality_from_survivals(survivals: &[f64]) -> f64 {
    if survivals.is_empty() {
        return 0.0;
    }
    1.0 - survivals.iter().sum::<f64>() / survivals.len() as f64
}

/// Centrality of node `i` at horizon `t`: one minus the mean probability
/// that its intercontact time with another node exceeds `t`.
pub fn centrality(trace: &Trace, i: u32, t: u64) -> Result<f64> {
    let n = trace.n_users();
    if i >= n {
        return Err(Error::Query(format!("unknown user {i}; n_users = {n}")));
    }
    let survivals: Vec<f64> = (0..n).filter(|&j| j != i).map(|j| pair_survival(trace, i, j, t)).collect();
    Ok(centrality_from_survivals(&survivals))
}

#[derive(Clone, Debug, PartialEq)]
pub struct CentralityVector {
    pub values: Vec<f64>,
    pub horizon_s: u64,
}

/// Centrality of every node. Pairs without intercontact samples count as
/// survival 1.
pub fn centralities(trace: &Trace, t: u64) -> CentralityVector {
    let n = trace.n_users() as usize;
    // start from "every pair survives" and correct the pairs with samples
    let mut survival_sum = alloc::vec![(n - 1) as f64; n];
    for (i, j) in trace.pairs() {
        let p = pair_survival(trace, i, j, t);
        survival_sum[i as usize] -= 1.0 - p;
        survival_sum[j as usize] -= 1.0 - p;
    }
    let values = survival_sum
        .into_iter()
        .map(|s| (1.0 - s / (n - 1) as f64).clamp(0.0, 1.0))
        .collect();
    CentralityVector { values, horizon_s: t }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BlacklistMode {
    /// The `k` nodes of highest centrality.
    Centrality,
    /// `k` nodes drawn uniformly per run.
    Random,
}

/// Shared settings of the averaged broadcast experiments.
#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentSpec {
    pub runs: u32,
    /// Length of each broadcast in seconds.
    pub horizon_s: u64,
    /// Start time of day in seconds.
    pub time_of_day_s: u64,
    pub seed: u64,
    /// Horizon used for centrality ranking.
    pub centrality_horizon_s: u64,
    pub policy: BlacklistPolicy,
}

impl Default for ExperimentSpec {
    fn default() -> Self {
        ExperimentSpec {
            runs: 200,
            horizon_s: 86_400,
            time_of_day_s: 6 * 3600,
            seed: 0,
            centrality_horizon_s: 6 * 86_400,
            policy: BlacklistPolicy::ReceiveOnly,
        }
    }
}

/// Stream tag separating experiment draws from pair-generation substreams.
const EXPERIMENT_STREAM: u64 = 0xE91D_0000_0000_0000;

fn averaged_runs<F>(trace: &Trace, spec: &ExperimentSpec, time_of_day_s: u64, mut pick: F) -> Result<InfectionCurve>
where
    F: FnMut(&mut RandomStream) -> BTreeSet<u32>,
{
    let meta = trace.meta();
    if time_of_day_s >= meta.d_day_s {
        return Err(Error::Query(format!(
            "time of day {time_of_day_s} s is not within a {} s day",
            meta.d_day_s
        )));
    }
    if spec.runs == 0 {
        return Err(Error::Query("at least one run is required".into()));
    }
    let index = ContactIndex::new(trace);
    let n = trace.n_users();
    let mut runs = Vec::with_capacity(spec.runs as usize);
    for r in 0..spec.runs {
        let mut stream = RandomStream::new(spec.seed, EXPERIMENT_STREAM | r as u64);
        let day = stream.below(meta.d_sim_days.max(1) as u64);
        let t0 = day * meta.d_day_s + time_of_day_s;
        let blacklist = pick(&mut stream);
        let candidates: Vec<u32> = (0..n).filter(|u| !blacklist.contains(u)).collect();
        if candidates.is_empty() {
            return Err(Error::Query("every node is blacklisted".into()));
        }
        let seed_node = candidates[stream.below(candidates.len() as u64) as usize];
        let until = t0.saturating_add(spec.horizon_s);
        runs.push(index.run(seed_node, t0, &blacklist, spec.policy, Some(until))?);
    }
    infection_curve(&runs, n, meta.granularity_s, spec.horizon_s)
}

/// `k` nodes of highest centrality, ties broken by lower id.
pub fn top_central(values: &[f64], k: usize) -> BTreeSet<u32> {
    let mut order: Vec<u32> = (0..values.len() as u32).collect();
    order.sort_by(|&a, &b| values[b as usize].total_cmp(&values[a as usize]).then(a.cmp(&b)));
    order.into_iter().take(k).collect()
}

fn random_subset(stream: &mut RandomStream, n: u32, k: usize) -> BTreeSet<u32> {
    let mut ids: Vec<u32> = (0..n).collect();
    for s in 0..k {
        let pick = s + stream.below((ids.len() - s) as u64) as usize;
        ids.swap(s, pick);
    }
    ids.truncate(k);
    ids.into_iter().collect()
}

/// Averaged infection curve with `k` blacklisted nodes.
pub fn blacklist_experiment(
    trace: &Trace,
    k: usize,
    mode: BlacklistMode,
    spec: &ExperimentSpec,
) -> Result<InfectionCurve> {
    let n = trace.n_users();
    if k >= n as usize {
        return Err(Error::Query(format!("blacklist size {k} must be below n_users = {n}")));
    }
    match mode {
        BlacklistMode::Centrality => {
            let ranked = centralities(trace, spec.centrality_horizon_s);
            let fixed = top_central(&ranked.values, k);
            averaged_runs(trace, spec, spec.time_of_day_s, |_| fixed.clone())
        }
        BlacklistMode::Random => {
            averaged_runs(trace, spec, spec.time_of_day_s, |s| random_subset(s, n, k))
        }
    }
}

/// One averaged curve per start time of day. All start times share the
/// same random days and seed nodes.
pub fn start_time_experiment(
    trace: &Trace,
    times_of_day_s: &[u64],
    spec: &ExperimentSpec,
) -> Result<Vec<InfectionCurve>> {
    times_of_day_s
        .iter()
        .map(|&tod| averaged_runs(trace, spec, tod, |_| BTreeSet::new()))
        .collect()
}
