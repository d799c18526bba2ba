//! Flat records and their table / CSV / JSON renderings.

use std::io::Write;

use clap::ValueEnum;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Csv,
    Json,
}

/// Round to 10 significant digits. Non-finite values pass through.
pub fn sig10(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{x:.9e}").parse().expect("formatted float parses")
}

pub fn sig10_opt(x: Option<f64>) -> Option<f64> {
    x.filter(|v| v.is_finite()).map(sig10)
}

/// One interval or one coverage row. Field order is the CSV column order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Row {
    pub method: String,
    pub target: String,
    pub kind: String,
    pub lower: Option<f64>,
    pub upper: Option<f64>,
    pub level: f64,
    pub width: f64,
    pub coverage: Option<f64>,
    pub coverage_se: Option<f64>,
    pub replicates: Option<u64>,
    pub degenerate_count: Option<u64>,
    pub seed: Option<u64>,
}

impl Row {
    pub fn rounded(mut self) -> Self {
        self.lower = sig10_opt(self.lower);
        self.upper = sig10_opt(self.upper);
        self.level = sig10(self.level);
        self.width = sig10(self.width);
        self.coverage = sig10_opt(self.coverage);
        self.coverage_se = sig10_opt(self.coverage_se);
        self
    }
}

/// JSON form of a single computed interval: the row plus the advisory flags.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IntervalRecord {
    #[serde(flatten)]
    pub row: Row,
    pub degenerate: bool,
    pub small_sample: bool,
    pub fpc_factor: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiagnosticRow {
    pub scale: String,
    pub ks_stat: f64,
    pub mean: Option<f64>,
    pub variance: Option<f64>,
    pub used: u64,
    pub excluded: u64,
    pub replicates: u64,
    pub seed: u64,
}

impl DiagnosticRow {
    pub fn rounded(mut self) -> Self {
        self.ks_stat = sig10(self.ks_stat);
        self.mean = sig10_opt(self.mean);
        self.variance = sig10_opt(self.variance);
        self
    }
}

fn cell(x: &Option<impl ToString>) -> String {
    x.as_ref().map_or_else(|| "-".to_string(), ToString::to_string)
}

impl Row {
    fn cells(&self) -> Vec<String> {
        vec![
            self.method.clone(),
            self.target.clone(),
            self.kind.clone(),
            cell(&self.lower),
            cell(&self.upper),
            self.level.to_string(),
            self.width.to_string(),
            cell(&self.coverage),
            cell(&self.coverage_se),
            cell(&self.replicates),
            cell(&self.degenerate_count),
            cell(&self.seed),
        ]
    }
}

const ROW_HEADERS: [&str; 12] = [
    "method",
    "target",
    "kind",
    "lower",
    "upper",
    "level",
    "width",
    "coverage",
    "coverage_se",
    "replicates",
    "degenerate_count",
    "seed",
];

fn write_table(out: &mut impl Write, headers: &[&str], rows: &[Vec<String>]) -> std::io::Result<()> {
    let mut widths: Vec<usize> = headers.iter().map(|h| h.len()).collect();
    for r in rows {
        for (w, c) in widths.iter_mut().zip(r) {
            *w = (*w).max(c.len());
        }
    }
    let line = |cells: Vec<&str>| {
        cells
            .iter()
            .zip(&widths)
            .map(|(c, w)| format!("{c:<w$}"))
            .collect::<Vec<_>>()
            .join("  ")
            .trim_end()
            .to_string()
    };
    writeln!(out, "{}", line(headers.to_vec()))?;
    for r in rows {
        writeln!(out, "{}", line(r.iter().map(String::as_str).collect()))?;
    }
    Ok(())
}

fn write_csv<S: Serialize>(out: &mut impl Write, rows: &[S]) -> std::io::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()
}

fn write_json<S: Serialize + ?Sized>(out: &mut impl Write, value: &S) -> std::io::Result<()> {
    serde_json::to_writer_pretty(&mut *out, value)?;
    writeln!(out)
}

pub fn render_interval(out: &mut impl Write, rec: &IntervalRecord, format: Format) -> std::io::Result<()> {
    match format {
        Format::Table => {
            let r = &rec.row;
            writeln!(out, "method        {}", r.method)?;
            writeln!(out, "target        {}", r.target)?;
            writeln!(out, "kind          {}", r.kind)?;
            writeln!(out, "lower         {}", cell(&r.lower))?;
            writeln!(out, "upper         {}", cell(&r.upper))?;
            writeln!(out, "level         {}", r.level)?;
            writeln!(out, "width         {}", r.width)?;
            if let Some(f) = rec.fpc_factor {
                writeln!(out, "fpc_factor    {f}")?;
            }
            writeln!(out, "degenerate    {}", rec.degenerate)?;
            writeln!(out, "small_sample  {}", rec.small_sample)
        }
        Format::Csv => write_csv(out, std::slice::from_ref(&rec.row)),
        Format::Json => write_json(out, rec),
    }
}

pub fn render_rows(out: &mut impl Write, rows: &[Row], format: Format) -> std::io::Result<()> {
    match format {
        Format::Table => {
            let cells: Vec<Vec<String>> = rows.iter().map(Row::cells).collect();
            write_table(out, &ROW_HEADERS, &cells)
        }
        Format::Csv => write_csv(out, rows),
        Format::Json => write_json(out, rows),
    }
}

pub fn render_diagnostic(out: &mut impl Write, row: &DiagnosticRow, format: Format) -> std::io::Result<()> {
    match format {
        Format::Table => {
            let cells = vec![vec![
                row.scale.clone(),
                row.ks_stat.to_string(),
                cell(&row.mean),
                cell(&row.variance),
                row.used.to_string(),
                row.excluded.to_string(),
                row.replicates.to_string(),
                row.seed.to_string(),
            ]];
            write_table(
                out,
                &["scale", "ks_stat", "mean", "variance", "used", "excluded", "replicates", "seed"],
                &cells,
            )
        }
        Format::Csv => write_csv(out, std::slice::from_ref(row)),
        Format::Json => write_json(out, row),
    }
}
