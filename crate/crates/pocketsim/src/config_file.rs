//! Flat `key=value` configuration files.
//!
//! Keys follow the parameter table of the model: `users`, `d_sim_days`,
//! `d_day_s`, `mu_day_s`, `sigma_day_s`, `granularity_s`, `T_s`, `gamma_a`,
//! `gamma_b`, `T_e`, `alpha_ict`, `alpha_c`, `seed`, `variant` and
//! `periodic`. `seed` (a number or `none`), `alpha_ict`, `alpha_c` and
//! `periodic` may be omitted. Blank lines and lines starting with `#` are
//! ignored.

use std::collections::HashMap;
use std::fs::File;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use pocketsim_core::pairgen::{DEFAULT_ALPHA_C, DEFAULT_ALPHA_ICT};
use pocketsim_core::sampling::GammaParams;
use pocketsim_core::{SimConfig, Variant};

use crate::error::{parse_err, PersistError, Result};

const REQUIRED: [&str; 11] = [
    "users",
    "d_sim_days",
    "d_day_s",
    "mu_day_s",
    "sigma_day_s",
    "granularity_s",
    "T_s",
    "gamma_a",
    "gamma_b",
    "T_e",
    "variant",
];
const OPTIONAL: [&str; 4] = ["seed", "alpha_ict", "alpha_c", "periodic"];

pub fn load_config(path: &Path) -> Result<SimConfig> {
    read_config(BufReader::new(File::open(path)?))
}

/// Parses and validates a configuration.
pub fn read_config<R: BufRead>(input: R) -> Result<SimConfig> {
    let mut values: HashMap<String, (usize, String)> = HashMap::new();
    for (k, line) in input.lines().enumerate() {
        let (no, line) = (k + 1, line?);
        let text = line.trim();
        if text.is_empty() || text.starts_with('#') {
            continue;
        }
        let (key, value) = text
            .split_once('=')
            .ok_or_else(|| parse_err(no, format!("expected `key=value`, found `{text}`")))?;
        let key = key.trim();
        if !REQUIRED.contains(&key) && !OPTIONAL.contains(&key) {
            return Err(parse_err(no, format!("unknown key `{key}`")));
        }
        if values.insert(key.to_string(), (no, value.trim().to_string())).is_some() {
            return Err(parse_err(no, format!("duplicate key `{key}`")));
        }
    }
    if let Some(key) = REQUIRED.iter().find(|k| !values.contains_key(**k)) {
        return Err(PersistError::MissingKey(key.to_string()));
    }

    fn parse<T: std::str::FromStr>(values: &HashMap<String, (usize, String)>, key: &str) -> Result<Option<T>> {
        match values.get(key) {
            None => Ok(None),
            Some((no, v)) => v
                .parse()
                .map(Some)
                .map_err(|_| parse_err(*no, format!("invalid value for `{key}`: `{v}`"))),
        }
    }
    fn required<T: std::str::FromStr>(values: &HashMap<String, (usize, String)>, key: &str) -> Result<T> {
        Ok(parse(values, key)?.expect("required keys were checked"))
    }
    let req = |key: &str| required::<f64>(&values, key);

    let seed = match values.get("seed") {
        Some((_, v)) if v == "none" => None,
        _ => parse::<u64>(&values, "seed")?,
    };
    let (variant_line, variant) = &values["variant"];
    let variant = Variant::parse(variant)
        .ok_or_else(|| parse_err(*variant_line, format!("unknown variant `{variant}`")))?;
    let config = SimConfig {
        n_users: required(&values, "users")?,
        d_sim_days: required(&values, "d_sim_days")?,
        d_day_s: required(&values, "d_day_s")?,
        mu_day_s: req("mu_day_s")?,
        sigma_day_s: req("sigma_day_s")?,
        granularity_s: required(&values, "granularity_s")?,
        threshold_s: req("T_s")?,
        gamma: GammaParams::new(req("gamma_a")?, req("gamma_b")?)?,
        rate_threshold: req("T_e")?,
        alpha_ict: parse(&values, "alpha_ict")?.unwrap_or(DEFAULT_ALPHA_ICT),
        alpha_c: parse(&values, "alpha_c")?.unwrap_or(DEFAULT_ALPHA_C),
        seed,
        variant,
        periodic: parse(&values, "periodic")?.unwrap_or(true),
    };
    config.validate()?;
    Ok(config)
}

/// Writes every key. Reading the output back gives `config` again.
pub fn write_config<W: Write>(config: &SimConfig, mut out: W) -> Result<()> {
    let seed = config.seed.map_or_else(|| "none".to_string(), |s| s.to_string());
    write!(
        out,
        "users={}\nd_sim_days={}\nd_day_s={}\nmu_day_s={}\nsigma_day_s={}\ngranularity_s={}\n\
         T_s={}\ngamma_a={}\ngamma_b={}\nT_e={}\nalpha_ict={}\nalpha_c={}\nseed={}\nvariant={}\nperiodic={}\n",
        config.n_users,
        config.d_sim_days,
        config.d_day_s,
        config.mu_day_s,
        config.sigma_day_s,
        config.granularity_s,
        config.threshold_s,
        config.gamma.shape(),
        config.gamma.rate(),
        config.rate_threshold,
        config.alpha_ict,
        config.alpha_c,
        seed,
        config.variant.as_str(),
        config.periodic,
    )?;
    out.flush()?;
    Ok(())
}
