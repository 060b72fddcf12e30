//! OutputRow CSV: header row, LF endings, `{:.16e}` numbers, empty field when undefined.

use std::io::{Read, Write};

use kerr_spin::geodesic::Drift;

use crate::pipeline::OutputRow;
use crate::CliError;

pub const HEADER: [&str; 16] = [
    "tau", "t", "r", "theta", "phi", "r_dot", "theta_dot", "chi", "W1", "W2", "W3", "k_g", "drift_E", "drift_Lz",
    "drift_kappa", "drift_norm",
];

fn num(x: f64) -> String {
    format!("{x:.16e}")
}

fn opt(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

fn record(r: &OutputRow) -> [String; 16] {
    let w = |i: usize| opt(r.w.map(|w| w[i]));
    [
        num(r.tau),
        num(r.t),
        num(r.r),
        num(r.theta),
        num(r.phi),
        num(r.r_dot),
        num(r.theta_dot),
        num(r.chi),
        w(0),
        w(1),
        w(2),
        opt(r.k_g),
        num(r.drift.energy),
        num(r.drift.angular_momentum),
        num(r.drift.carter),
        num(r.drift.norm),
    ]
}

pub fn write_rows<W: Write>(out: W, rows: &[OutputRow]) -> Result<(), CliError> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    let io = |e: csv::Error| CliError::Runtime(format!("csv write: {e}"));
    w.write_record(HEADER).map_err(io)?;
    for r in rows {
        w.write_record(record(r)).map_err(io)?;
    }
    w.flush().map_err(|e| CliError::Runtime(format!("csv write: {e}")))
}

pub fn rows_to_string(rows: &[OutputRow]) -> String {
    let mut buf = Vec::new();
    write_rows(&mut buf, rows).expect("writing to memory");
    String::from_utf8(buf).expect("ascii output")
}

pub fn read_rows<R: Read>(input: R) -> Result<Vec<OutputRow>, CliError> {
    let mut rd = csv::ReaderBuilder::new().has_headers(true).from_reader(input);
    let bad = |msg: String| CliError::Runtime(format!("csv read: {msg}"));
    let header = rd.headers().map_err(|e| bad(e.to_string()))?;
    if header.iter().ne(HEADER.iter().copied()) {
        return Err(bad(format!("unexpected header {header:?}")));
    }
    let mut rows = Vec::new();
    for (line, rec) in rd.records().enumerate() {
        let rec = rec.map_err(|e| bad(e.to_string()))?;
        let field = |i: usize| -> Result<Option<f64>, CliError> {
            let s = &rec[i];
            if s.is_empty() {
                return Ok(None);
            }
            s.parse()
                .map(Some)
                .map_err(|e| bad(format!("row {}, column {}: {e}", line + 2, HEADER[i])))
        };
        let req = |i: usize| -> Result<f64, CliError> {
            field(i)?.ok_or_else(|| bad(format!("row {}, column {} is empty", line + 2, HEADER[i])))
        };
        let w = match (field(8)?, field(9)?, field(10)?) {
            (Some(a), Some(b), Some(c)) => Some([a, b, c]),
            (None, None, None) => None,
            _ => return Err(bad(format!("row {}: partial spin vector", line + 2))),
        };
        rows.push(OutputRow {
            tau: req(0)?,
            t: req(1)?,
            r: req(2)?,
            theta: req(3)?,
            phi: req(4)?,
            r_dot: req(5)?,
            theta_dot: req(6)?,
            chi: req(7)?,
            w,
            k_g: field(11)?,
            drift: Drift {
                energy: req(12)?,
                angular_momentum: req(13)?,
                carter: req(14)?,
                norm: req(15)?,
            },
        });
    }
    Ok(rows)
}
