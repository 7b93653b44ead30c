//! Reference implementations used to check the crate from the outside.
//! They use `rand`/`rand_distr`/`statrs` only, never the crate's own
//! samplers.

#![allow(dead_code)]

use std::collections::BTreeSet;

use pocketsim_core::epidemic::BlacklistPolicy;
use pocketsim_core::{ContactEvent, SimConfig, Trace, TraceMeta, TraceVariant};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use rand_distr::{Distribution, Exp, Normal, Pareto};

/// Two-sided Kolmogorov-Smirnov statistic of `samples` against `cdf`.
pub fn ks_statistic(samples: &[f64], cdf: impl Fn(f64) -> f64) -> f64 {
    let mut xs = samples.to_vec();
    xs.sort_by(f64::total_cmp);
    let n = xs.len() as f64;
    xs.iter()
        .enumerate()
        .map(|(k, &x)| {
            let f = cdf(x);
            (f - k as f64 / n).abs().max(((k + 1) as f64 / n - f).abs())
        })
        .fold(0.0, f64::max)
}

/// Asymptotic critical value of the KS statistic at level 0.01.
pub fn ks_critical_001(n: usize) -> f64 {
    1.6276 / (n as f64).sqrt()
}

fn ticks(x: f64, g: f64) -> u64 {
    ((x / g).round() as u64).max(1)
}

/// Number of encounters one frequent pair has over the simulated period,
/// simulated tick by tick from the model definition.
pub fn simulate_frequent_count(cfg: &SimConfig, lambda: f64, rng: &mut StdRng) -> usize {
    let g = cfg.granularity_s as f64;
    let day = cfg.d_day_s as f64;
    let horizon = cfg.horizon_ticks();
    let short = Pareto::new(g, cfg.alpha_ict).unwrap();
    let long = Exp::new(lambda).unwrap();
    let dur = Pareto::new(g, cfg.alpha_c).unwrap();
    let mut now = 0u64;
    let mut count = 0;
    loop {
        let p: f64 = short.sample(rng);
        let gap = if p <= cfg.threshold_s {
            p
        } else {
            let t_day = (now as f64 * g) % day;
            let k: f64 = long.sample(rng);
            let offset = Normal::new(cfg.mu_day_s - t_day, cfg.sigma_day_s).unwrap().sample(rng);
            k.ceil() * day + offset
        };
        let start = now + ticks(gap.max(g), g);
        if start >= horizon {
            return count;
        }
        count += 1;
        now = (start + ticks(dur.sample(rng), g)).min(horizon);
        if now >= horizon {
            return count;
        }
    }
}

/// Mean simulated count over `reps` pairs. The same seed is reused for
/// every `lambda`, so the estimate is smooth in `lambda`.
pub fn mean_count(cfg: &SimConfig, lambda: f64, reps: usize, seed: u64) -> f64 {
    let mut rng = StdRng::seed_from_u64(seed);
    (0..reps).map(|_| simulate_frequent_count(cfg, lambda, &mut rng)).sum::<usize>() as f64 / reps as f64
}

/// Per-day rate whose simulated mean count equals `n_e`, by bisection on
/// `log(lambda)` over `[1e-6, 50]`.
pub fn bisect_lambda(cfg: &SimConfig, n_e: u64, reps: usize, seed: u64) -> f64 {
    let (mut lo, mut hi) = (1e-6f64.ln(), 50f64.ln());
    for _ in 0..16 {
        let mid = 0.5 * (lo + hi);
        if mean_count(cfg, mid.exp(), reps, seed) < n_e as f64 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    (0.5 * (lo + hi)).exp()
}

/// Infection times found by advancing a clock one granularity tick at a
/// time and, at each tick, passing the message over every active contact
/// until nothing changes. `t0` must lie on the tick grid.
pub fn brute_force_epidemic(
    trace: &Trace,
    seed_node: u32,
    t0: u64,
    blacklist: &BTreeSet<u32>,
    policy: BlacklistPolicy,
) -> Vec<Option<u64>> {
    let g = trace.granularity_s();
    assert_eq!(t0 % g, 0);
    let n = trace.n_users() as usize;
    let mut infected: Vec<Option<u64>> = vec![None; n];
    infected[seed_node as usize] = Some(t0);
    let end = trace.meta().duration_s();
    let mut t = t0;
    while t <= end {
        loop {
            let mut changed = false;
            for ev in trace.events() {
                let (s, e) = trace.seconds(ev);
                if !(s <= t && t <= e) {
                    continue;
                }
                for (a, b) in [(ev.i, ev.j), (ev.j, ev.i)] {
                    let can_send = infected[a as usize].is_some() && !blacklist.contains(&a);
                    let can_receive = policy == BlacklistPolicy::ReceiveOnly || !blacklist.contains(&b);
                    if can_send && can_receive && infected[b as usize].is_none() {
                        infected[b as usize] = Some(t);
                        changed = true;
                    }
                }
            }
            if !changed {
                break;
            }
        }
        t += g;
    }
    infected
}

pub fn meta(n_users: u32, d_sim_days: u32, d_day_s: u64, granularity_s: u64) -> TraceMeta {
    TraceMeta {
        n_users,
        d_sim_days,
        d_day_s,
        granularity_s,
        seed: None,
        variant: TraceVariant::Imported,
        version: "oracle".into(),
    }
}

/// A random valid trace with at most `max_users` users and `max_events`
/// contacts on a short horizon, so contacts collide often.
pub fn random_trace(rng: &mut StdRng, max_users: u32, max_events: usize) -> Trace {
    let n = rng.random_range(2..=max_users);
    let day_ticks = 24u64;
    let meta = meta(n, 1, day_ticks * 10, 10);
    let horizon = day_ticks;
    let target = rng.random_range(0..=max_events);
    let mut per_pair: std::collections::BTreeMap<(u32, u32), Vec<(u64, u64)>> = Default::default();
    for _ in 0..target {
        let i = rng.random_range(0..n - 1);
        let j = rng.random_range(i + 1..n);
        let s = rng.random_range(0..horizon - 1);
        let e = rng.random_range(s + 1..=(s + 4).min(horizon));
        let spans = per_pair.entry((i, j)).or_default();
        if spans.iter().all(|&(a, b)| e < a || b < s) {
            spans.push((s, e));
        }
    }
    let events = per_pair
        .into_iter()
        .flat_map(|((i, j), spans)| spans.into_iter().map(move |(start, end)| ContactEvent { i, j, start, end }))
        .collect();
    Trace::from_events(meta, events).unwrap()
}
