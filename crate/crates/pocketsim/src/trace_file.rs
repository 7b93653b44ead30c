//! Trace files.
//!
//! ```text
//! #n_users=3
//! #D_sim=1
//! #D_day=86400
//! #granularity=300
//! #seed=7
//! #variant=piecewise
//! #version=0.1.0
//! i,j,start,end
//! 0,2,600,1200
//! ```
//!
//! Rows are sorted by `(start, i, j)` and hold integer seconds, which must
//! be multiples of the granularity.

use std::collections::HashMap;
use std::io::{BufRead, Write};

use pocketsim_core::{ContactEvent, Trace, TraceMeta, TraceVariant};

use crate::error::{parse_err, PersistError, Result};

const COLUMNS: &str = "i,j,start,end";
const HEADER_KEYS: [&str; 7] = ["n_users", "D_sim", "D_day", "granularity", "seed", "variant", "version"];

/// Writes `trace` and returns the number of bytes written.
pub fn write_trace<W: Write>(trace: &Trace, mut out: W) -> Result<u64> {
    let meta = trace.meta();
    let mut buf = String::with_capacity(64 + 24 * trace.events().len());
    let seed = meta.seed.map_or_else(|| "none".to_string(), |s| s.to_string());
    buf.push_str(&format!(
        "#n_users={}\n#D_sim={}\n#D_day={}\n#granularity={}\n#seed={}\n#variant={}\n#version={}\n{COLUMNS}\n",
        meta.n_users,
        meta.d_sim_days,
        meta.d_day_s,
        meta.granularity_s,
        seed,
        meta.variant.as_str(),
        meta.version
    ));
    let g = meta.granularity_s;
    for ev in trace.events() {
        buf.push_str(&format!("{},{},{},{}\n", ev.i, ev.j, ev.start * g, ev.end * g));
    }
    out.write_all(buf.as_bytes())?;
    out.flush()?;
    Ok(buf.len() as u64)
}

/// Reads a trace, rejecting the first malformed or invalid line.
pub fn read_trace<R: BufRead>(input: R) -> Result<Trace> {
    let mut lines = numbered(input);
    let meta = read_header(&mut lines)?;
    let mut rows = RowChecker::new(&meta);
    let mut events = Vec::new();
    for item in lines {
        let (no, text) = item?;
        events.push(rows.check(no, &text)?);
    }
    Ok(Trace::from_sorted(meta, events)?)
}

/// Outcome of a lenient pass over a trace file.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ValidationReport {
    pub meta: Option<TraceMeta>,
    /// Rows that passed every check.
    pub valid_rows: usize,
    /// `(line, message)` for every rejected line.
    pub issues: Vec<(usize, String)>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.meta.is_some() && self.issues.is_empty()
    }
}

/// Checks every row instead of stopping at the first problem. Rows that
/// fail are skipped, so later rows are judged against the accepted ones.
pub fn validate_trace<R: BufRead>(input: R) -> Result<ValidationReport> {
    let mut report = ValidationReport::default();
    let mut lines = numbered(input);
    let meta = match read_header(&mut lines) {
        Ok(meta) => meta,
        Err(PersistError::Parse { line, message }) => {
            report.issues.push((line, message));
            return Ok(report);
        }
        Err(e) => return Err(e),
    };
    let mut rows = RowChecker::new(&meta);
    for item in lines {
        let (no, text) = item?;
        match rows.check(no, &text) {
            Ok(_) => report.valid_rows += 1,
            Err(PersistError::Parse { line, message }) => report.issues.push((line, message)),
            Err(e) => return Err(e),
        }
    }
    report.meta = Some(meta);
    Ok(report)
}

fn numbered<R: BufRead>(input: R) -> impl Iterator<Item = Result<(usize, String)>> {
    input
        .lines()
        .enumerate()
        .map(|(k, l)| l.map(|l| (k + 1, l)).map_err(PersistError::from))
}

fn read_header<I>(lines: &mut I) -> Result<TraceMeta>
where
    I: Iterator<Item = Result<(usize, String)>>,
{
    let mut values: HashMap<&'static str, (usize, String)> = HashMap::new();
    let mut last = 0;
    loop {
        let Some(item) = lines.next() else {
            return Err(parse_err(last + 1, format!("missing column line `{COLUMNS}`")));
        };
        let (no, text) = item?;
        last = no;
        let Some(entry) = text.strip_prefix('#') else {
            if text != COLUMNS {
                return Err(parse_err(no, format!("expected `{COLUMNS}`, found `{text}`")));
            }
            break;
        };
        let (key, value) = entry
            .split_once('=')
            .ok_or_else(|| parse_err(no, "header lines must look like `#key=value`"))?;
        let key = HEADER_KEYS
            .iter()
            .find(|k| **k == key)
            .ok_or_else(|| parse_err(no, format!("unknown header key `{key}`")))?;
        if values.insert(key, (no, value.to_string())).is_some() {
            return Err(parse_err(no, format!("duplicate header key `{key}`")));
        }
    }
    let get = |key: &str| {
        values
            .get(key)
            .ok_or_else(|| parse_err(last, format!("header key `{key}` is missing")))
    };
    fn num<T: std::str::FromStr>(entry: &(usize, String), key: &str) -> Result<T> {
        entry
            .1
            .parse()
            .map_err(|_| parse_err(entry.0, format!("`{key}` is not a valid number: `{}`", entry.1)))
    }
    let seed = get("seed")?;
    let variant = get("variant")?;
    let meta = TraceMeta {
        n_users: num(get("n_users")?, "n_users")?,
        d_sim_days: num(get("D_sim")?, "D_sim")?,
        d_day_s: num(get("D_day")?, "D_day")?,
        granularity_s: num(get("granularity")?, "granularity")?,
        seed: if seed.1 == "none" { None } else { Some(num(seed, "seed")?) },
        variant: TraceVariant::parse(&variant.1)
            .ok_or_else(|| parse_err(variant.0, format!("unknown variant `{}`", variant.1)))?,
        version: get("version")?.1.clone(),
    };
    meta.validate().map_err(|e| parse_err(last, e.to_string()))?;
    Ok(meta)
}

/// Per-row checks, mirroring the trace invariants so that failures can
/// name a line.
struct RowChecker {
    n_users: u32,
    granularity: u64,
    horizon: u64,
    prev: Option<(u64, u32, u32)>,
    last_end: HashMap<(u32, u32), u64>,
}

impl RowChecker {
    fn new(meta: &TraceMeta) -> Self {
        RowChecker {
            n_users: meta.n_users,
            granularity: meta.granularity_s,
            horizon: meta.horizon_ticks(),
            prev: None,
            last_end: HashMap::new(),
        }
    }

    fn check(&mut self, no: usize, text: &str) -> Result<ContactEvent> {
        let fields: Vec<&str> = text.split(',').collect();
        if fields.len() != 4 {
            return Err(parse_err(no, format!("expected 4 fields, found {}", fields.len())));
        }
        let id = |k: usize| -> Result<u32> {
            fields[k].parse().map_err(|_| parse_err(no, format!("bad user id `{}`", fields[k])))
        };
        let tick = |k: usize| -> Result<u64> {
            let s: u64 = fields[k]
                .parse()
                .map_err(|_| parse_err(no, format!("bad time `{}`", fields[k])))?;
            if !s.is_multiple_of(self.granularity) {
                return Err(parse_err(
                    no,
                    format!("time {s} is not a multiple of the granularity {}", self.granularity),
                ));
            }
            Ok(s / self.granularity)
        };
        let ev = ContactEvent { i: id(0)?, j: id(1)?, start: tick(2)?, end: tick(3)? };
        if ev.i >= ev.j {
            return Err(parse_err(no, "user ids must satisfy i < j"));
        }
        if ev.j >= self.n_users {
            return Err(parse_err(no, format!("user {} is not below n_users = {}", ev.j, self.n_users)));
        }
        if ev.start >= ev.end {
            return Err(parse_err(no, "contact must end after it starts"));
        }
        if ev.end > self.horizon {
            return Err(parse_err(no, "contact ends after the simulated period"));
        }
        let key = (ev.start, ev.i, ev.j);
        if self.prev.is_some_and(|p| p >= key) {
            return Err(parse_err(no, "rows are not strictly sorted by (start, i, j)"));
        }
        if let Some(&end) = self.last_end.get(&(ev.i, ev.j)) {
            if end >= ev.start {
                return Err(parse_err(no, "contact overlaps or touches the pair's previous contact"));
            }
        }
        self.prev = Some(key);
        self.last_end.insert((ev.i, ev.j), ev.end);
        Ok(ev)
    }
}
