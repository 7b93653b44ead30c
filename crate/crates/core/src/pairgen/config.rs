use alloc::format;

use crate::error::{Error, Result};
use crate::sampling::GammaParams;

/// Which pairwise intercontact-time law drives the frequent pairs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Variant {
    /// Power law below the threshold, day-scale exponential above it.
    Piecewise,
    /// Every pair draws exponential intercontact times at its contact rate.
    ExponentialPairwise,
}

impl Variant {
    pub fn as_str(&self) -> &'static str {
        match self {
            Variant::Piecewise => "piecewise",
            Variant::ExponentialPairwise => "exponential-pairwise",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "piecewise" => Some(Variant::Piecewise),
            "exponential-pairwise" => Some(Variant::ExponentialPairwise),
            _ => None,
        }
    }
}

/// Global model parameters.
///
/// Times are seconds unless the field name says otherwise. `alpha_ict` and
/// `alpha_c` have no published values; the defaults in
/// [`SimConfig::table_one`] are this crate's choice and should be overridden
/// when fitting a particular dataset.
#[derive(Clone, Debug, PartialEq)]
pub struct SimConfig {
    pub n_users: u32,
    pub d_sim_days: u32,
    pub d_day_s: u64,
    pub mu_day_s: f64,
    pub sigma_day_s: f64,
    pub granularity_s: u64,
    /// Power-law / day-scale switch point of the intercontact law.
    pub threshold_s: f64,
    /// Gamma law of the expected number of contacts per pair.
    pub gamma: GammaParams,
    /// Contact-rate threshold (contacts per second) separating frequent and
    /// sporadic pairs.
    pub rate_threshold: f64,
    /// Exponent of the short-range intercontact power law.
    pub alpha_ict: f64,
    /// Exponent of the contact-duration power law.
    pub alpha_c: f64,
    pub seed: Option<u64>,
    pub variant: Variant,
    /// Enables the time-of-day term and whole-day gaps. Disabling it gives
    /// continuous day gaps and continuous sporadic meeting times.
    pub periodic: bool,
}

pub const DEFAULT_ALPHA_ICT: f64 = 0.3;
pub const DEFAULT_ALPHA_C: f64 = 1.8;

impl SimConfig {
    /// The MIT Reality Mining calibration: 100 users over 100 days.
    pub fn table_one() -> Self {
        SimConfig {
            n_users: 100,
            d_sim_days: 100,
            d_day_s: 86_400,
            mu_day_s: 43_200.0,
            sigma_day_s: 50.0,
            granularity_s: 300,
            threshold_s: 6030.0,
            gamma: GammaParams::new(0.19, 0.072).expect("valid constants"),
            rate_threshold: 5.79e-7,
            alpha_ict: DEFAULT_ALPHA_ICT,
            alpha_c: DEFAULT_ALPHA_C,
            seed: None,
            variant: Variant::Piecewise,
            periodic: true,
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |msg: alloc::string::String| Err(Error::Config(msg));
        if self.n_users < 2 {
            return fail(format!("users must be at least 2, got {}", self.n_users));
        }
        if self.d_sim_days == 0 {
            return fail("d_sim_days must be positive".into());
        }
        if self.granularity_s == 0 {
            return fail("granularity_s must be positive".into());
        }
        if self.d_day_s == 0 || !self.d_day_s.is_multiple_of(self.granularity_s) {
            return fail(format!(
                "d_day_s ({}) must be a positive multiple of granularity_s ({})",
                self.d_day_s, self.granularity_s
            ));
        }
        if !(self.mu_day_s > 0.0 && self.mu_day_s < self.d_day_s as f64) {
            return fail(format!("mu_day_s must lie in (0, d_day_s), got {}", self.mu_day_s));
        }
        if !(self.sigma_day_s.is_finite() && self.sigma_day_s >= 0.0) {
            return fail(format!("sigma_day_s must be non-negative, got {}", self.sigma_day_s));
        }
        if !(self.threshold_s.is_finite() && self.threshold_s >= self.granularity_s as f64) {
            return fail(format!(
                "T_s must be at least granularity_s, got {}",
                self.threshold_s
            ));
        }
        if !(self.rate_threshold.is_finite() && self.rate_threshold > 0.0) {
            return fail(format!("T_e must be positive, got {}", self.rate_threshold));
        }
        if !(self.alpha_ict.is_finite() && self.alpha_ict > 0.0) {
            return fail(format!("alpha_ict must be positive, got {}", self.alpha_ict));
        }
        if !(self.alpha_c.is_finite() && self.alpha_c > 0.0) {
            return fail(format!("alpha_c must be positive, got {}", self.alpha_c));
        }
        // re-check in case the struct was built by hand
        GammaParams::new(self.gamma.shape(), self.gamma.rate())?;
        Ok(())
    }

    /// Total simulated time in seconds.
    pub fn duration_s(&self) -> f64 {
        self.d_sim_days as f64 * self.d_day_s as f64
    }

    pub fn day_ticks(&self) -> u64 {
        self.d_day_s / self.granularity_s
    }

    /// Simulated time in granularity ticks.
    pub fn horizon_ticks(&self) -> u64 {
        self.d_sim_days as u64 * self.day_ticks()
    }

    pub fn pair_count(&self) -> u64 {
        let n = self.n_users as u64;
        n * (n - 1) / 2
    }
}
