//! Aggregate intercontact-time distribution and comparison metrics.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::pairgen::PairParams;
use crate::trace::Trace;

/// Empirical complementary CDF.
///
/// Each point `(t, p)` holds an observed value and the fraction of samples
/// greater than or equal to it, so the first point always has `p = 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct Ccdf {
    points: Vec<(f64, f64)>,
}

impl Ccdf {
    pub fn from_samples(samples: &[f64]) -> Result<Ccdf> {
        if samples.is_empty() {
            return Err(Error::EmptyDistribution);
        }
        let mut sorted: Vec<f64> = samples.to_vec();
        if sorted.iter().any(|x| !x.is_finite()) {
            return Err(Error::Config("non-finite sample".into()));
        }
        sorted.sort_by(f64::total_cmp);
        let n = sorted.len() as f64;
        let mut points = Vec::new();
        let mut k = 0;
        while k < sorted.len() {
            let v = sorted[k];
            points.push((v, (sorted.len() - k) as f64 / n));
            while k < sorted.len() && sorted[k] == v {
                k += 1;
            }
        }
        Ok(Ccdf { points })
    }

    /// Validates externally supplied points.
    pub fn from_points(points: Vec<(f64, f64)>) -> Result<Ccdf> {
        let Some(&(_, first)) = points.first() else {
            return Err(Error::EmptyDistribution);
        };
        if first != 1.0 {
            return Err(Error::Config(format!("CCDF must start at probability 1, got {first}")));
        }
        for w in points.windows(2) {
            let ((t0, p0), (t1, p1)) = (w[0], w[1]);
            if t1.partial_cmp(&t0) != Some(core::cmp::Ordering::Greater) {
                return Err(Error::Config(format!("CCDF abscissae must increase ({t0} then {t1})")));
            }
            if p1 > p0 {
                return Err(Error::Config(format!("CCDF increases at t = {t1}")));
            }
        }
        if points.iter().any(|&(t, p)| !t.is_finite() || !(0.0..=1.0).contains(&p)) {
            return Err(Error::Config("CCDF values must be finite probabilities".into()));
        }
        Ok(Ccdf { points })
    }

    pub fn points(&self) -> &[(f64, f64)] {
        &self.points
    }

    pub fn min_t(&self) -> f64 {
        self.points[0].0
    }

    pub fn max_t(&self) -> f64 {
        self.points[self.points.len() - 1].0
    }

    /// `P(X >= t)`: the probability of the first point at or after `t`.
    pub fn eval(&self, t: f64) -> f64 {
        let k = self.points.partition_point(|&(x, _)| x < t);
        self.points.get(k).map_or(0.0, |&(_, p)| p)
    }

    /// `P(X <= t)` computed from the stored points.
    pub fn mass_at_or_below(&self, t: f64) -> f64 {
        let k = self.points.partition_point(|&(x, _)| x <= t);
        1.0 - self.points.get(k).map_or(0.0, |&(_, p)| p)
    }
}

/// CCDF of all intercontact times of all pairs.
pub fn aggregate_ccdf(trace: &Trace) -> Result<Ccdf> {
    let samples: Vec<f64> = trace.all_intercontact_times().into_iter().map(|x| x as f64).collect();
    Ccdf::from_samples(&samples)
}

#[derive(Clone, Debug, PartialEq)]
pub struct ComparisonReport {
    pub avg_rel_error: f64,
    pub max_rel_error: f64,
    /// Abscissa of the largest error.
    pub max_error_location: f64,
    pub grid: Vec<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GridSpec {
    pub points: usize,
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec { points: 64 }
    }
}

/// Log-spaced grid over `[lo, hi]` with exact endpoints.
pub fn log_grid(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    if points <= 1 || lo == hi {
        return alloc::vec![lo; points.max(1)];
    }
    let ratio = hi / lo;
    (0..points)
        .map(|k| {
            if k == 0 {
                lo
            } else if k == points - 1 {
                hi
            } else {
                (lo * libm::pow(ratio, k as f64 / (points - 1) as f64)).clamp(lo, hi)
            }
        })
        .collect()
}

fn report(grid: Vec<f64>, model: &[f64], reference: &[f64]) -> ComparisonReport {
    let mut sum = 0.0;
    let mut max = 0.0;
    let mut at = grid.first().copied().unwrap_or(0.0);
    for ((&t, &m), &r) in grid.iter().zip(model).zip(reference) {
        let e = if r == 0.0 {
            if m == 0.0 { 0.0 } else { f64::INFINITY }
        } else {
            libm::fabs(m - r) / r
        };
        sum += e;
        if e > max {
            max = e;
            at = t;
        }
    }
    let avg = if grid.is_empty() { 0.0 } else { sum / grid.len() as f64 };
    ComparisonReport { avg_rel_error: avg, max_rel_error: max, max_error_location: at, grid }
}

/// Relative error `|model - reference| / reference` on a log-spaced grid
/// over the overlap of both supports.
pub fn compare_ccdf(model: &Ccdf, reference: &Ccdf, spec: GridSpec) -> Result<ComparisonReport> {
    if spec.points == 0 {
        return Err(Error::Comparison("grid needs at least one point".into()));
    }
    let lo = model.min_t().max(reference.min_t());
    let hi = model.max_t().min(reference.max_t());
    if lo > hi {
        return Err(Error::Comparison(format!(
            "supports do not overlap ([{}, {}] vs [{}, {}])",
            model.min_t(),
            model.max_t(),
            reference.min_t(),
            reference.max_t()
        )));
    }
    if lo <= 0.0 {
        return Err(Error::Comparison("log grid needs a positive support".into()));
    }
    let grid = log_grid(lo, hi, spec.points);
    let m: Vec<f64> = grid.iter().map(|&t| model.eval(t)).collect();
    let r: Vec<f64> = grid.iter().map(|&t| reference.eval(t)).collect();
    Ok(report(grid, &m, &r))
}

/// Fraction of pairs assigned zero encounters.
pub fn zero_contact_fraction(params: &[PairParams]) -> f64 {
    if params.is_empty() {
        return 0.0;
    }
    params.iter().filter(|p| p.n_e == 0).count() as f64 / params.len() as f64
}

/// Fraction of all user pairs without a single contact in the trace.
pub fn realized_zero_contact_fraction(trace: &Trace) -> f64 {
    let n = trace.n_users() as u64;
    let pairs = n * (n - 1) / 2;
    let touched = trace.pairs().count() as u64;
    (pairs - touched) as f64 / pairs as f64
}

/// Per-pair relative error of contact counts against reference counts,
/// restricted to pairs with at least one contact on both sides. The
/// report's grid holds the compared pairs' positions (0, 1, ...) in pair
/// order.
pub fn contact_count_comparison(
    trace: &Trace,
    reference: &BTreeMap<(u32, u32), u64>,
) -> Result<ComparisonReport> {
    let mut model = Vec::new();
    let mut refs = Vec::new();
    for (&(i, j), &r) in reference {
        let m = trace.contact_count(i, j) as u64;
        if m >= 1 && r >= 1 {
            model.push(m as f64);
            refs.push(r as f64);
        }
    }
    if model.is_empty() {
        return Err(Error::Comparison("no pair has contacts in both the trace and the reference".into()));
    }
    let grid = (0..model.len()).map(|k| k as f64).collect();
    Ok(report(grid, &model, &refs))
}

/// Minimum number of tail samples [`periodicity_score`] accepts.
pub const MIN_TAIL_SAMPLES: usize = 100;

/// Strength of daily periodicity in the intercontact times above
/// `threshold_s`.
///
/// The tail samples are binned at `bin_s`, the histogram is detrended by
/// subtracting a centred one-day moving average, and the score is the
/// correlation between the residual and itself shifted by one day.
pub fn periodicity_score_of(icts: &[u64], threshold_s: f64, day_s: u64, bin_s: u64) -> Result<f64> {
    if bin_s == 0 || day_s < bin_s {
        return Err(Error::Config("bin width must be positive and at most a day".into()));
    }
    let tail: Vec<u64> = icts.iter().copied().filter(|&x| x as f64 > threshold_s).collect();
    if tail.len() < MIN_TAIL_SAMPLES {
        return Err(Error::InsufficientData { needed: MIN_TAIL_SAMPLES, got: tail.len() });
    }
    let lo = tail.iter().min().copied().unwrap_or(0);
    let hi = tail.iter().max().copied().unwrap_or(0);
    let lag = (day_s / bin_s) as usize;
    let bins = ((hi - lo) / bin_s) as usize + 1;
    if bins <= lag + 1 {
        return Err(Error::InsufficientData { needed: lag + 2, got: bins });
    }
    let mut hist = alloc::vec![0.0f64; bins];
    for x in tail {
        hist[((x - lo) / bin_s) as usize] += 1.0;
    }

    // centred moving average over one day, via prefix sums
    let mut prefix = alloc::vec![0.0f64; bins + 1];
    for (k, h) in hist.iter().enumerate() {
        prefix[k + 1] = prefix[k] + h;
    }
    let half = lag / 2;
    let residual: Vec<f64> = (0..bins)
        .map(|k| {
            let a = k.saturating_sub(half);
            let b = (k + lag - half).min(bins);
            hist[k] - (prefix[b] - prefix[a]) / (b - a) as f64
        })
        .collect();

    Ok(pearson(&residual[..bins - lag], &residual[lag..]))
}

/// [`periodicity_score_of`] on a trace, binned at its granularity.
pub fn periodicity_score(trace: &Trace, threshold_s: f64) -> Result<f64> {
    let meta = trace.meta();
    periodicity_score_of(
        &trace.all_intercontact_times(),
        threshold_s,
        meta.d_day_s,
        meta.granularity_s,
    )
}

fn pearson(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (&a, &b) in x.iter().zip(y) {
        sxy += (a - mx) * (b - my);
        sxx += (a - mx) * (a - mx);
        syy += (b - my) * (b - my);
    }
    if sxx == 0.0 || syy == 0.0 {
        return 0.0;
    }
    sxy / libm::sqrt(sxx * syy)
}
