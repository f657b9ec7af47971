//! CSV emission and re-reading for metrics, traces and sweep aggregates.

use std::io;

use super::{MetricsRow, RowStatus, SweepRow};
use crate::forwarding::RouteTrace;
use crate::topology::Network;

pub const METRICS_HEADER: [&str; 11] = [
    "scheme",
    "seed",
    "node_count",
    "region_count",
    "fermat_x",
    "fermat_y",
    "relay_id",
    "total_hops",
    "total_distance_m",
    "total_energy_j",
    "status",
];

#[derive(Debug, thiserror::Error)]
pub enum ReportError {
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error("record {record}: {message}")]
    Field { record: usize, message: String },
}

/// Renders `v` with six significant digits, `%g` style.
pub fn format_sig6(v: f64) -> String {
    if v == 0.0 {
        return "0".into();
    }
    if !v.is_finite() {
        return v.to_string();
    }
    let sci = format!("{v:.5e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    let trim = |s: &str| {
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_owned()
        } else {
            s.to_owned()
        }
    };
    if !(-4..6).contains(&exp) {
        format!("{}e{}", trim(mantissa), exp)
    } else {
        trim(&format!("{:.*}", (5 - exp) as usize, v))
    }
}

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map(|v| v.to_string()).unwrap_or_default()
}

/// Writes the metrics header and one line per row, in order.
pub fn emit_csv<W: io::Write>(rows: &[MetricsRow], out: W) -> Result<(), ReportError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(METRICS_HEADER)?;
    for r in rows {
        w.write_record([
            r.scheme.to_string(),
            r.seed.to_string(),
            r.node_count.to_string(),
            r.region_count.to_string(),
            opt(r.fermat_x.map(format_sig6)),
            opt(r.fermat_y.map(format_sig6)),
            opt(r.relay_id),
            r.total_hops.to_string(),
            format_sig6(r.total_distance_m),
            format_sig6(r.total_energy_j),
            r.status.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Parses a metrics CSV produced by [`emit_csv`].
pub fn read_csv<R: io::Read>(input: R) -> Result<Vec<MetricsRow>, ReportError> {
    let mut r = csv::Reader::from_reader(input);
    if r.headers()?.iter().ne(METRICS_HEADER) {
        return Err(ReportError::Field {
            record: 0,
            message: "unexpected header".into(),
        });
    }
    let mut rows = Vec::new();
    for (i, rec) in r.records().enumerate() {
        let rec = rec?;
        let record = i + 1;
        let field = |k: usize| rec.get(k).unwrap_or("");
        let bad = |k: usize| ReportError::Field {
            record,
            message: format!("bad {} `{}`", METRICS_HEADER[k], field(k)),
        };
        let num = |k: usize| field(k).parse::<f64>().map_err(|_| bad(k));
        let count = |k: usize| field(k).parse::<usize>().map_err(|_| bad(k));
        let maybe = |k: usize| {
            if field(k).is_empty() {
                Ok(None)
            } else {
                num(k).map(Some)
            }
        };
        rows.push(MetricsRow {
            scheme: field(0).parse().map_err(|_| bad(0))?,
            seed: field(1).parse().map_err(|_| bad(1))?,
            node_count: count(2)?,
            region_count: count(3)?,
            fermat_x: maybe(4)?,
            fermat_y: maybe(5)?,
            relay_id: if field(6).is_empty() {
                None
            } else {
                Some(count(6)?)
            },
            total_hops: count(7)?,
            total_distance_m: num(8)?,
            total_energy_j: num(9)?,
            status: field(10).parse::<RowStatus>().map_err(|_| bad(10))?,
        });
    }
    Ok(rows)
}

/// Writes `leg,seq,node_id,x,y,hop_distance_m`, one line per node visit.
/// The first visit of each leg has hop distance 0.
pub fn write_trace_csv<'a, W, I>(network: &Network, legs: I, out: W) -> Result<(), ReportError>
where
    W: io::Write,
    I: IntoIterator<Item = &'a RouteTrace>,
{
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["leg", "seq", "node_id", "x", "y", "hop_distance_m"])?;
    for (leg, trace) in legs.into_iter().enumerate() {
        for (seq, &id) in trace.hops.iter().enumerate() {
            let p = network.nodes()[id].position;
            let d = if seq == 0 {
                0.0
            } else {
                trace.per_hop_distance[seq - 1]
            };
            w.write_record([
                leg.to_string(),
                seq.to_string(),
                id.to_string(),
                format_sig6(p.x),
                format_sig6(p.y),
                format_sig6(d),
            ])?;
        }
    }
    w.flush()?;
    Ok(())
}

pub fn write_sweep_csv<W: io::Write>(rows: &[SweepRow], out: W) -> Result<(), ReportError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record([
        "scheme",
        "region_count",
        "runs",
        "delivered",
        "mean_total_hops",
        "mean_total_distance_m",
        "mean_total_energy_j",
    ])?;
    for r in rows {
        w.write_record([
            r.scheme.to_string(),
            r.region_count.to_string(),
            r.runs.to_string(),
            r.delivered.to_string(),
            opt(r.mean_total_hops.map(format_sig6)),
            opt(r.mean_total_distance_m.map(format_sig6)),
            opt(r.mean_total_energy_j.map(format_sig6)),
        ])?;
    }
    w.flush()?;
    Ok(())
}
