//! Plot-ready CSV tables: CCDFs, infection curves, centralities and
//! per-pair contact counts.

use std::collections::BTreeMap;
use std::io::{Read, Write};

use pocketsim_core::epidemic::{CentralityVector, InfectionCurve};
use pocketsim_core::stats::Ccdf;
use serde::{Deserialize, Serialize};

use crate::error::{parse_err, PersistError, Result};

#[derive(Debug, Serialize, Deserialize)]
struct CcdfRow {
    t_seconds: f64,
    ccdf: f64,
}

#[derive(Debug, Serialize)]
struct CurveRow {
    t_seconds: u64,
    fraction: f64,
}

#[derive(Debug, Serialize)]
struct CentralityRow {
    user_id: u32,
    centrality: f64,
}

#[derive(Debug, Deserialize)]
struct CountRow {
    i: u32,
    j: u32,
    count: u64,
}

fn csv_err(e: csv::Error) -> PersistError {
    let line = e.position().map_or(0, |p| p.line() as usize);
    match e.into_kind() {
        csv::ErrorKind::Io(io) => PersistError::Io(io),
        other => parse_err(line, format!("{other:?}")),
    }
}

fn write_rows<W: Write, T: Serialize>(out: W, rows: impl IntoIterator<Item = T>) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for row in rows {
        w.serialize(row).map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_ccdf<W: Write>(ccdf: &Ccdf, out: W) -> Result<()> {
    write_rows(out, ccdf.points().iter().map(|&(t_seconds, ccdf)| CcdfRow { t_seconds, ccdf }))
}

/// Reads a `t_seconds,ccdf` table as written by [`write_ccdf`].
pub fn read_ccdf<R: Read>(input: R) -> Result<Ccdf> {
    let mut points = Vec::new();
    for row in csv::Reader::from_reader(input).deserialize() {
        let row: CcdfRow = row.map_err(csv_err)?;
        points.push((row.t_seconds, row.ccdf));
    }
    Ok(Ccdf::from_points(points)?)
}

pub fn write_curve<W: Write>(curve: &InfectionCurve, out: W) -> Result<()> {
    write_rows(out, curve.points.iter().map(|&(t_seconds, fraction)| CurveRow { t_seconds, fraction }))
}

pub fn write_centrality<W: Write>(c: &CentralityVector, out: W) -> Result<()> {
    write_rows(
        out,
        c.values
            .iter()
            .enumerate()
            .map(|(u, &centrality)| CentralityRow { user_id: u as u32, centrality }),
    )
}

/// Reads an `i,j,count` table of reference contact counts.
pub fn read_counts<R: Read>(input: R) -> Result<BTreeMap<(u32, u32), u64>> {
    let mut counts = BTreeMap::new();
    for (k, row) in csv::Reader::from_reader(input).deserialize().enumerate() {
        let row: CountRow = row.map_err(csv_err)?;
        if row.i == row.j {
            return Err(parse_err(k + 2, "a pair needs two distinct users"));
        }
        counts.insert((row.i.min(row.j), row.i.max(row.j)), row.count);
    }
    Ok(counts)
}
