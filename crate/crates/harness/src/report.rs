//! Per-point records, summaries and their CSV / JSON encodings.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::config::OutputFormat;

/// One evaluated grid point.
///
/// Wigner elements use `j1`, `m1` (for `M`) and `mp` (for `M'`); 3j symbols
/// use `j1..j3`, `m1..m3`. Columns that do not apply are left empty.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Record {
    pub index: usize,
    pub quantity: String,
    pub j1: f64,
    pub j2: Option<f64>,
    pub j3: Option<f64>,
    pub m1: Option<f64>,
    pub m2: Option<f64>,
    pub m3: Option<f64>,
    pub mp: Option<f64>,
    pub alpha: Option<f64>,
    pub beta: Option<f64>,
    pub gamma: Option<f64>,
    pub x: Option<f64>,
    pub y: Option<f64>,
    pub xi2: Option<f64>,
    pub delta: Option<f64>,
    pub region: Option<String>,
    pub em_reliable: Option<bool>,
    pub exact_re: Option<f64>,
    pub exact_im: Option<f64>,
    pub estimate_re: Option<f64>,
    pub estimate_im: Option<f64>,
    /// Envelope of the estimate: the oscillation amplitude, `2J+1` for characters.
    pub amplitude: Option<f64>,
    /// `|exact - estimate|`.
    pub abs_err: Option<f64>,
    /// `abs_err / amplitude`.
    pub envelope_rel_err: Option<f64>,
    pub error: Option<String>,
}

/// Column order of the CSV encoding; field order of [`Record`].
pub const CSV_COLUMNS: [&str; 26] = [
    "index",
    "quantity",
    "j1",
    "j2",
    "j3",
    "m1",
    "m2",
    "m3",
    "mp",
    "alpha",
    "beta",
    "gamma",
    "x",
    "y",
    "xi2",
    "delta",
    "region",
    "em_reliable",
    "exact_re",
    "exact_im",
    "estimate_re",
    "estimate_im",
    "amplitude",
    "abs_err",
    "envelope_rel_err",
    "error",
];

impl Record {
    /// Fills `abs_err` and `envelope_rel_err` when both values are present.
    pub fn finish(&mut self) {
        if let (Some(er), Some(sr)) = (self.exact_re, self.estimate_re) {
            let d = (er - sr).hypot(self.exact_im.unwrap_or(0.0) - self.estimate_im.unwrap_or(0.0));
            self.abs_err = Some(d);
            self.envelope_rel_err = self.amplitude.filter(|a| *a > 0.0).map(|a| d / a);
        }
    }
}

/// Mean error at one spin (or spin scale).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpinSummary {
    pub j: f64,
    pub points: usize,
    pub mean_abs_err: f64,
    pub mean_envelope_rel_err: f64,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub records: usize,
    pub failed: usize,
    pub compared: usize,
    pub max_abs_err: Option<f64>,
    pub mean_abs_err: Option<f64>,
    pub max_envelope_rel_err: Option<f64>,
    pub mean_envelope_rel_err: Option<f64>,
    pub by_spin: Vec<SpinSummary>,
    /// Least-squares slope of `ln(mean envelope error)` against `ln J`.
    pub fitted_exponent: Option<f64>,
}

/// Least-squares slope of `ys` against `xs`.
pub fn fit_slope(xs: &[f64], ys: &[f64]) -> Option<f64> {
    let n = xs.len();
    if n < 2 || n != ys.len() {
        return None;
    }
    let mx = xs.iter().sum::<f64>() / n as f64;
    let my = ys.iter().sum::<f64>() / n as f64;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

/// Slope of `ln y` against `ln x`, ignoring non-positive values.
pub fn fit_power(xs: &[f64], ys: &[f64]) -> Option<f64> {
    let (lx, ly): (Vec<f64>, Vec<f64>) =
        xs.iter().zip(ys).filter(|(x, y)| **x > 0.0 && **y > 0.0).map(|(x, y)| (x.ln(), y.ln())).unzip();
    fit_slope(&lx, &ly)
}

/// 90th percentile by nearest rank.
pub fn percentile(values: &[f64], p: f64) -> Option<f64> {
    if values.is_empty() {
        return None;
    }
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let rank = ((p / 100.0) * v.len() as f64).ceil().max(1.0) as usize;
    Some(v[rank.min(v.len()) - 1])
}

impl Summary {
    /// Summarises records grouped by `keys[i]`, the spin (or spin scale) of record `i`.
    pub fn from_records(records: &[Record], keys: &[f64]) -> Self {
        let failed = records.iter().filter(|r| r.error.is_some()).count();
        let compared: Vec<(&Record, f64)> =
            records.iter().zip(keys.iter().copied()).filter(|(r, _)| r.abs_err.is_some()).collect();
        let abs: Vec<f64> = compared.iter().filter_map(|(r, _)| r.abs_err).collect();
        let env: Vec<f64> = compared.iter().filter_map(|(r, _)| r.envelope_rel_err).collect();
        let mean = |v: &[f64]| (!v.is_empty()).then(|| v.iter().sum::<f64>() / v.len() as f64);
        let max = |v: &[f64]| v.iter().copied().reduce(f64::max);

        let mut spins: Vec<f64> = compared.iter().map(|(_, k)| *k).collect();
        spins.sort_by(f64::total_cmp);
        spins.dedup();
        let by_spin: Vec<SpinSummary> = spins
            .iter()
            .map(|&j| {
                let group: Vec<&Record> = compared.iter().filter(|(_, k)| *k == j).map(|(r, _)| *r).collect();
                let a: Vec<f64> = group.iter().filter_map(|r| r.abs_err).collect();
                let e: Vec<f64> = group.iter().filter_map(|r| r.envelope_rel_err).collect();
                SpinSummary {
                    j,
                    points: group.len(),
                    mean_abs_err: mean(&a).unwrap_or(f64::NAN),
                    mean_envelope_rel_err: mean(&e).unwrap_or(f64::NAN),
                }
            })
            .collect();
        let fitted_exponent = fit_power(
            &by_spin.iter().map(|s| s.j).collect::<Vec<_>>(),
            &by_spin.iter().map(|s| s.mean_envelope_rel_err).collect::<Vec<_>>(),
        );
        Summary {
            records: records.len(),
            failed,
            compared: compared.len(),
            max_abs_err: max(&abs),
            mean_abs_err: mean(&abs),
            max_envelope_rel_err: max(&env),
            mean_envelope_rel_err: mean(&env),
            by_spin,
            fitted_exponent,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ErrorReport {
    pub records: Vec<Record>,
    pub summary: Summary,
}

/// Writes `rows` as CSV with a header row.
pub fn write_csv<W: Write, T: Serialize>(out: W, rows: &[T]) -> std::io::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(r).map_err(std::io::Error::other)?;
    }
    w.flush()
}

/// Writes `{spec, records, summary}` as pretty JSON.
pub fn write_json<W: Write, S: Serialize, T: Serialize, U: Serialize>(
    mut out: W,
    spec: &S,
    records: &[T],
    summary: &U,
) -> std::io::Result<()> {
    #[derive(Serialize)]
    struct Doc<'a, S, T, U> {
        spec: &'a S,
        records: &'a [T],
        summary: &'a U,
    }
    serde_json::to_writer_pretty(&mut out, &Doc { spec, records, summary })?;
    out.write_all(b"\n")
}

/// Writes a table in the requested format. CSV carries only the rows.
pub fn write_table<W: Write, S: Serialize, T: Serialize, U: Serialize>(
    out: W,
    format: OutputFormat,
    spec: &S,
    records: &[T],
    summary: &U,
) -> std::io::Result<()> {
    match format {
        OutputFormat::Csv => write_csv(out, records),
        OutputFormat::Json => write_json(out, spec, records, summary),
    }
}
