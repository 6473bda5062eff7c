//! CSV output of table statistics and solver traces.

use std::fs::File;
use std::io::{self, BufWriter, Read, Write};
use std::path::Path;

use cutter_core::IterationTrace;

use crate::error::{BenchError, Result};
use crate::tables::{AlgorithmRow, StatsRow};

pub const STATS_HEADER: [&str; 8] = [
    "algorithm",
    "schedule",
    "eta",
    "mean",
    "median",
    "min",
    "max",
    "trials",
];

/// Formats like C's `%g`: six significant digits, trailing zeros dropped,
/// exponent notation outside `[1e-4, 1e6)`.
pub fn format_g6(v: f64) -> String {
    if v == 0.0 {
        return "0".to_string();
    }
    if !v.is_finite() {
        return v.to_string();
    }
    let sci = format!("{v:.5e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-4..6).contains(&exp) {
        let mantissa = trim_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        return format!("{mantissa}e{sign}{:02}", exp.abs());
    }
    let decimals = (5 - exp) as usize;
    trim_zeros(&format!("{v:.decimals$}")).to_string()
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// Writes the header and one record per row. Output bytes depend only on
/// the rows. Parsing it back reproduces the rows whenever each mean has at
/// most six significant digits, which holds for up to 100 trials with
/// counts below 10⁴.
pub fn write_stats<W: Write>(rows: &[StatsRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(STATS_HEADER)?;
    for s in rows {
        w.write_record([
            s.row.algorithm().to_string(),
            s.row.rate().name().to_string(),
            format_g6(s.row.eta()),
            format_g6(s.mean),
            s.median.to_string(),
            s.min.to_string(),
            s.max.to_string(),
            s.trials.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn emit_csv(rows: &[StatsRow], path: impl AsRef<Path>) -> Result<()> {
    let file = File::create(path)?;
    write_stats(rows, BufWriter::new(file))
}

pub fn parse_stats<R: Read>(input: R) -> Result<Vec<StatsRow>> {
    let mut r = csv::Reader::from_reader(input);
    if r.headers()?.iter().ne(STATS_HEADER) {
        return Err(BenchError::Csv("unexpected header".into()));
    }
    let mut rows = Vec::new();
    for rec in r.records() {
        let rec = rec?;
        let field = |i: usize| rec.get(i).unwrap_or("");
        let float = |i: usize| {
            field(i)
                .parse::<f64>()
                .map_err(|_| BenchError::Csv(format!("bad number `{}`", field(i))))
        };
        let int = |i: usize| {
            field(i)
                .parse::<usize>()
                .map_err(|_| BenchError::Csv(format!("bad count `{}`", field(i))))
        };
        let rate = field(1).parse()?;
        let row = match field(0) {
            "projected_cutter" => AlgorithmRow::ProjectedCutter {
                r: rate,
                eta: float(2)?,
            },
            "mcspa" => AlgorithmRow::Mcspa { eps: rate },
            other => return Err(BenchError::Csv(format!("unknown algorithm `{other}`"))),
        };
        rows.push(StatsRow {
            row,
            mean: float(3)?,
            median: int(4)?,
            min: int(5)?,
            max: int(6)?,
            trials: int(7)?,
        });
    }
    Ok(rows)
}

pub fn read_csv(path: impl AsRef<Path>) -> Result<Vec<StatsRow>> {
    parse_stats(File::open(path)?)
}

pub fn write_trace(trace: &IterationTrace, path: impl AsRef<Path>) -> Result<()> {
    let mut text = String::new();
    trace
        .write_csv(&mut text)
        .map_err(|_| io::Error::other("trace formatting failed"))?;
    std::fs::write(path, text)?;
    Ok(())
}
