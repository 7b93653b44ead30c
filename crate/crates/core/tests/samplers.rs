mod oracles;

use oracles::{ks_critical_001, ks_statistic};
use pocketsim_core::sampling::*;
use statrs::distribution::{ContinuousCDF, Exp, Gamma, Normal, Pareto, Uniform};

const N: usize = 100_000;

fn draws(seed: u64, n: usize, mut f: impl FnMut(&mut RandomStream) -> f64) -> Vec<f64> {
    let mut s = RandomStream::new(seed, 0);
    (0..n).map(|_| f(&mut s)).collect()
}

fn assert_ks(name: &str, xs: &[f64], cdf: impl Fn(f64) -> f64) {
    let d = ks_statistic(xs, cdf);
    let crit = ks_critical_001(xs.len());
    assert!(d < crit, "{name}: KS statistic {d} exceeds {crit}");
}

#[test]
fn pareto_ks() {
    let p = ParetoParams::new(1.5, 300.0).unwrap();
    let xs = draws(1, N, |s| sample_pareto(p, s));
    assert!(xs.iter().all(|&x| x >= 300.0));
    let oracle = Pareto::new(300.0, 1.5).unwrap();
    assert_ks("pareto", &xs, |x| oracle.cdf(x));
}

#[test]
fn pareto_tail_mass_within_binomial_band() {
    let p = ParetoParams::new(1.5, 300.0).unwrap();
    let xs = draws(2, N, |s| sample_pareto(p, s));
    let q = 10f64.powf(-1.5);
    let sd = (q * (1.0 - q) / N as f64).sqrt();
    let hat = xs.iter().filter(|&&x| x > 3000.0).count() as f64 / N as f64;
    assert!((hat - q).abs() <= 3.0 * sd, "tail mass {hat} vs {q}");
}

#[test]
fn gamma_ks_small_and_large_shape() {
    for (seed, shape, rate) in [(3, 0.19, 0.072), (4, 1.0, 2.0), (5, 4.5, 0.3)] {
        let g = GammaParams::new(shape, rate).unwrap();
        let xs = draws(seed, N, |s| sample_gamma(g, s));
        assert!(xs.iter().all(|&x| x > 0.0));
        let oracle = Gamma::new(shape, rate).unwrap();
        assert_ks("gamma", &xs, |x| oracle.cdf(x));
    }
}

#[test]
fn gamma_one_is_exponential() {
    let g = GammaParams::new(1.0, 2.0).unwrap();
    let xs = draws(6, N, |s| sample_gamma(g, s));
    let mean = xs.iter().sum::<f64>() / N as f64;
    assert!((mean - 0.5).abs() <= 0.02, "{mean}");
}

#[test]
fn contact_rate_law_mean_and_low_mass() {
    let g = GammaParams::new(0.19, 0.072).unwrap();
    let n = 1_000_000;
    let xs = draws(7, n, |s| sample_gamma(g, s));
    let mean = xs.iter().sum::<f64>() / n as f64;
    let expected = 0.19 / 0.072;
    assert!((mean / expected - 1.0).abs() <= 0.02, "mean {mean} vs {expected}");
    let below_one = xs.iter().filter(|&&x| x < 1.0).count() as f64 / n as f64;
    assert!((0.55..=0.75).contains(&below_one), "{below_one}");
    let exact = Gamma::new(0.19, 0.072).unwrap().cdf(1.0);
    assert!((below_one - exact).abs() < 0.005, "{below_one} vs {exact}");
}

#[test]
fn exponential_ks_and_mean() {
    let xs = draws(8, N, |s| sample_exponential(2.0, s).unwrap());
    assert!(xs.iter().all(|&x| x > 0.0));
    let mean = xs.iter().sum::<f64>() / N as f64;
    assert!((mean / 0.5 - 1.0).abs() <= 0.02, "{mean}");
    let oracle = Exp::new(2.0).unwrap();
    assert_ks("exponential", &xs, |x| oracle.cdf(x));
}

#[test]
fn normal_ks() {
    let xs = draws(9, N, |s| sample_normal(43_200.0, 50.0, s).unwrap());
    let oracle = Normal::new(43_200.0, 50.0).unwrap();
    assert_ks("normal", &xs, |x| oracle.cdf(x));
}

#[test]
fn uniform_ks() {
    let xs = draws(10, N, |s| sample_uniform(-3.0, 7.0, s).unwrap());
    assert!(xs.iter().all(|&x| (-3.0..7.0).contains(&x)));
    let oracle = Uniform::new(-3.0, 7.0).unwrap();
    assert_ks("uniform", &xs, |x| oracle.cdf(x));
}

#[test]
fn degenerate_laws() {
    let mut s = RandomStream::new(11, 0);
    assert_eq!(sample_normal(43_200.0, 0.0, &mut s).unwrap(), 43_200.0);
    assert_eq!(sample_uniform(5.0, 5.0, &mut s).unwrap(), 5.0);
}

#[test]
fn replay_is_identical() {
    let g = GammaParams::new(0.19, 0.072).unwrap();
    let a = draws(12, 1000, |s| sample_gamma(g, s));
    let b = draws(12, 1000, |s| sample_gamma(g, s));
    assert_eq!(a, b);
}
