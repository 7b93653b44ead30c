//! Conversion of external contact lists into traces.

use std::collections::BTreeMap;
use std::io::Read;

use pocketsim_core::{ContactEvent, Trace, TraceMeta, TraceVariant, GENERATOR_VERSION};

use crate::error::{PersistError, Result};

/// Where to find each field in the input CSV and how to quantise it.
#[derive(Clone, Debug, PartialEq)]
pub struct ImportSpec {
    pub i_column: String,
    pub j_column: String,
    /// Contact start in seconds.
    pub start_column: String,
    /// Contact end in seconds.
    pub end_column: String,
    /// Columns present in the file that are deliberately not used.
    pub ignored_columns: Vec<String>,
    pub granularity_s: u64,
    pub d_day_s: u64,
    /// Defaults to the largest user id plus one.
    pub n_users: Option<u32>,
    /// Defaults to the number of days covering the last contact.
    pub d_sim_days: Option<u32>,
}

impl Default for ImportSpec {
    fn default() -> Self {
        ImportSpec {
            i_column: "i".into(),
            j_column: "j".into(),
            start_column: "start".into(),
            end_column: "end".into(),
            ignored_columns: Vec::new(),
            granularity_s: 300,
            d_day_s: 86_400,
            n_users: None,
            d_sim_days: None,
        }
    }
}

/// Reads a headed contact CSV into a trace.
///
/// Starts are rounded down and ends up to the granularity, so a contact
/// shorter than one tick still lasts one tick. Rows of the same pair that
/// overlap or touch after quantisation are merged. Pair order within a row
/// does not matter.
pub fn import_contacts<R: Read>(input: R, spec: &ImportSpec) -> Result<Trace> {
    let fail = |msg: String| PersistError::Import(msg);
    if spec.granularity_s == 0 || !spec.d_day_s.is_multiple_of(spec.granularity_s) {
        return Err(fail("day length must be a positive multiple of the granularity".into()));
    }
    let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(input);
    let headers = reader.headers().map_err(|e| fail(e.to_string()))?.clone();
    let wanted = [&spec.i_column, &spec.j_column, &spec.start_column, &spec.end_column];
    for h in headers.iter() {
        if !wanted.iter().any(|w| *w == h) && !spec.ignored_columns.iter().any(|c| c == h) {
            return Err(fail(format!("unknown column `{h}`")));
        }
    }
    let mut idx = [0usize; 4];
    for (slot, name) in idx.iter_mut().zip(wanted) {
        *slot = headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| fail(format!("column `{name}` not found")))?;
    }

    let g = spec.granularity_s as f64;
    let mut per_pair: BTreeMap<(u32, u32), Vec<(u64, u64)>> = BTreeMap::new();
    let mut max_user = 0u32;
    for (k, record) in reader.records().enumerate() {
        let line = k + 2;
        let record = record.map_err(|e| fail(format!("line {line}: {e}")))?;
        let field = |c: usize| record.get(idx[c]).unwrap_or("");
        let user = |c: usize| -> Result<u32> {
            field(c).parse().map_err(|_| fail(format!("line {line}: bad user id `{}`", field(c))))
        };
        let time = |c: usize| -> Result<f64> {
            match field(c).parse::<f64>() {
                Ok(t) if t.is_finite() && t >= 0.0 => Ok(t),
                _ => Err(fail(format!("line {line}: bad time `{}`", field(c)))),
            }
        };
        let (a, b) = (user(0)?, user(1)?);
        if a == b {
            return Err(fail(format!("line {line}: user {a} in contact with itself")));
        }
        let (start, end) = (time(2)?, time(3)?);
        if end < start {
            return Err(fail(format!("line {line}: negative duration ({start} to {end})")));
        }
        let s = (start / g).floor() as u64;
        let e = ((end / g).ceil() as u64).max(s + 1);
        max_user = max_user.max(a.max(b));
        per_pair.entry((a.min(b), a.max(b))).or_default().push((s, e));
    }

    let n_users = spec.n_users.unwrap_or(if per_pair.is_empty() { 2 } else { max_user + 1 });
    if !per_pair.is_empty() && max_user >= n_users {
        return Err(fail(format!("user id {max_user} is not below n_users = {n_users}")));
    }
    let day_ticks = spec.d_day_s / spec.granularity_s;
    let last = per_pair.values().flatten().map(|&(_, e)| e).max().unwrap_or(0);
    let days = spec.d_sim_days.unwrap_or(last.div_ceil(day_ticks).max(1) as u32);

    let mut events = Vec::new();
    for ((i, j), mut spans) in per_pair {
        spans.sort_unstable();
        let mut current: Option<(u64, u64)> = None;
        for (s, e) in spans {
            current = match current {
                Some((cs, ce)) if s <= ce => Some((cs, ce.max(e))),
                Some((cs, ce)) => {
                    events.push(ContactEvent { i, j, start: cs, end: ce });
                    Some((s, e))
                }
                None => Some((s, e)),
            };
        }
        if let Some((start, end)) = current {
            events.push(ContactEvent { i, j, start, end });
        }
    }
    let meta = TraceMeta {
        n_users,
        d_sim_days: days,
        d_day_s: spec.d_day_s,
        granularity_s: spec.granularity_s,
        seed: None,
        variant: TraceVariant::Imported,
        version: GENERATOR_VERSION.to_string(),
    };
    Ok(Trace::from_events(meta, events)?)
}
