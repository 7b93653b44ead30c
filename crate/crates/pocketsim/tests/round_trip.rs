use pocketsim::{read_config, read_trace, write_config, write_trace};
use pocketsim_core::sampling::GammaParams;
use pocketsim_core::{generate_trace, ContactEvent, SimConfig, Trace, TraceMeta, TraceVariant, Variant};
use proptest::prelude::*;

fn meta_strategy() -> impl Strategy<Value = TraceMeta> {
    (
        2u32..40,
        1u32..5,
        prop::sample::select(vec![60u64, 300, 900]),
        prop::option::of(any::<u64>()),
        prop::sample::select(vec![
            TraceVariant::Piecewise,
            TraceVariant::PiecewiseAperiodic,
            TraceVariant::ExponentialPairwise,
            TraceVariant::Imported,
        ]),
    )
        .prop_map(|(n_users, d_sim_days, granularity_s, seed, variant)| TraceMeta {
            n_users,
            d_sim_days,
            d_day_s: 86_400,
            granularity_s,
            seed,
            variant,
            version: "0.1.0".into(),
        })
}

fn trace_strategy() -> impl Strategy<Value = Trace> {
    meta_strategy().prop_flat_map(|meta| {
        let horizon = meta.horizon_ticks();
        let n = meta.n_users;
        prop::collection::vec((0..n, 0..n, 0..horizon, 1u64..50), 0..200).prop_map(move |raw| {
            let mut last: std::collections::HashMap<(u32, u32), u64> = Default::default();
            let mut events = Vec::new();
            let mut raw: Vec<_> = raw.into_iter().filter(|r| r.0 != r.1).collect();
            raw.sort_by_key(|r| r.2);
            for (a, b, start, len) in raw {
                let (i, j) = (a.min(b), a.max(b));
                let end = (start + len).min(horizon);
                if start >= end || last.get(&(i, j)).is_some_and(|&e| e >= start) {
                    continue;
                }
                last.insert((i, j), end);
                events.push(ContactEvent { i, j, start, end });
            }
            Trace::from_events(meta.clone(), events).unwrap()
        })
    })
}

fn config_strategy() -> impl Strategy<Value = SimConfig> {
    (
        2u32..500,
        1u32..400,
        0.0f64..1e4,
        1u64..100_000,
        (1e-3f64..10.0, 1e-4f64..10.0, 1e-9f64..1e-3),
        (0.05f64..3.0, 0.05f64..3.0),
        prop::option::of(any::<u64>()),
        any::<bool>(),
        any::<bool>(),
    )
        .prop_map(|(n_users, d_sim_days, sigma, t_extra, (a, b, te), (ai, ac), seed, exp, periodic)| {
            SimConfig {
                n_users,
                d_sim_days,
                sigma_day_s: sigma,
                threshold_s: 300.0 + t_extra as f64 / 7.0,
                gamma: GammaParams::new(a, b).unwrap(),
                rate_threshold: te,
                alpha_ict: ai,
                alpha_c: ac,
                seed,
                variant: if exp { Variant::ExponentialPairwise } else { Variant::Piecewise },
                periodic,
                ..SimConfig::table_one()
            }
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn traces_round_trip(trace in trace_strategy()) {
        let mut bytes = Vec::new();
        let n = write_trace(&trace, &mut bytes).unwrap();
        prop_assert_eq!(n as usize, bytes.len());
        let back = read_trace(&bytes[..]).unwrap();
        prop_assert_eq!(&back, &trace);
        let mut again = Vec::new();
        write_trace(&back, &mut again).unwrap();
        prop_assert_eq!(again, bytes);
    }

    #[test]
    fn configs_round_trip(config in config_strategy()) {
        let mut bytes = Vec::new();
        write_config(&config, &mut bytes).unwrap();
        prop_assert_eq!(read_config(&bytes[..]).unwrap(), config);
    }
}

#[test]
fn large_generated_trace_round_trips() {
    let cfg = SimConfig { n_users: 120, ..SimConfig::table_one() }.with_seed(3);
    let trace = generate_trace(&cfg).unwrap().trace;
    assert!(trace.events().len() >= 10_000, "{}", trace.events().len());
    let mut bytes = Vec::new();
    write_trace(&trace, &mut bytes).unwrap();
    assert_eq!(read_trace(&bytes[..]).unwrap(), trace);
}
