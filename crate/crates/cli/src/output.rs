//! Tabular CSV/JSON output shared by every subcommand.
//!
//! CSV files start with `# key=value` lines echoing the resolved
//! configuration, then a header row, then one row per record. Floats are
//! written with 15 significant digits. JSON files hold the same content as
//! `{"command", "params", "columns", "rows"}` with floats at full precision.

use std::fmt::Write as _;
use std::io::{self, Write};

use cavity_transfer::analysis::Trajectory;
use cavity_transfer::PairId;
use serde::Serialize;
use serde_json::{Map, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

/// One table cell.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Cell {
    Float(f64),
    Int(u64),
    Bool(bool),
    Text(String),
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Float(v)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as u64)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Bool(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

impl Cell {
    fn to_csv(&self) -> String {
        match self {
            Cell::Float(v) => format_sig15(*v),
            Cell::Int(v) => v.to_string(),
            Cell::Bool(v) => v.to_string(),
            Cell::Text(s) => s.clone(),
        }
    }
}

/// A subcommand's output: configuration echo plus rows.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub command: String,
    pub params: Vec<(String, Cell)>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(command: &str, columns: &[&str]) -> Self {
        Self {
            command: command.to_string(),
            params: Vec::new(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn param(mut self, key: &str, value: impl Into<Cell>) -> Self {
        self.params.push((key.to_string(), value.into()));
        self
    }

    pub fn push_row(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn write(&self, format: Format, sink: &mut dyn Write) -> io::Result<()> {
        match format {
            Format::Csv => sink.write_all(self.to_csv().as_bytes()),
            Format::Json => {
                serde_json::to_writer(&mut *sink, &self.to_json())?;
                sink.write_all(b"\n")
            }
        }
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "# command={}", self.command);
        for (k, v) in &self.params {
            let _ = writeln!(out, "# {k}={}", v.to_csv());
        }
        out.push_str(&self.columns.join(","));
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(Cell::to_csv).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self) -> Value {
        let params: Map<String, Value> = self
            .params
            .iter()
            .map(|(k, v)| (k.clone(), serde_json::to_value(v).unwrap_or(Value::Null)))
            .collect();
        serde_json::json!({
            "command": self.command,
            "params": params,
            "columns": self.columns,
            "rows": self.rows,
        })
    }
}

/// Formats like C's `%.15g`: 15 significant digits, trailing zeros dropped,
/// scientific notation outside `1e-4 <= |x| < 1e15`.
pub fn format_sig15(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{x:.14e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-4..15).contains(&exp) {
        let mantissa = trim_fraction(mantissa);
        return format!(
            "{mantissa}e{}{:02}",
            if exp < 0 { '-' } else { '+' },
            exp.abs()
        );
    }
    let decimals = (14 - exp) as usize;
    trim_fraction(&format!("{x:.decimals$}")).to_string()
}

fn trim_fraction(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

pub const TRAJECTORY_COLUMNS: [&str; 9] = [
    "t",
    "C_AB",
    "C_ab",
    "C_Aa",
    "C_Ab",
    "C_Ba",
    "C_Bb",
    "norm",
    "quartet_sum",
];

/// Table form of a trajectory: time, the six concurrences in
/// [`PairId::ALL`] order, norm and quartet sum.
pub fn trajectory_table(traj: &Trajectory) -> Table {
    let p = traj.params;
    let mut table = Table::new("simulate", &TRAJECTORY_COLUMNS)
        .param("theta", p.theta())
        .param("delta", p.delta())
        .param("g_a", p.g_a())
        .param("g_b", p.g_b())
        .param("t_max", traj.times.last().copied().unwrap_or(0.0))
        .param("n_points", traj.len());
    for (t, row) in traj.times.iter().zip(&traj.rows) {
        let mut cells = vec![Cell::Float(*t)];
        cells.extend(
            PairId::ALL
                .iter()
                .map(|&pair| Cell::Float(row.concurrences.get(pair))),
        );
        cells.push(Cell::Float(row.norm));
        cells.push(Cell::Float(row.quartet_sum));
        table.push_row(cells);
    }
    table
}

/// Writes a trajectory in the requested format.
pub fn write_trajectory(traj: &Trajectory, format: Format, sink: &mut dyn Write) -> io::Result<()> {
    trajectory_table(traj).write(format, sink)
}

/// Numeric cells of a CSV table body (comment lines and header skipped).
pub fn parse_csv_numbers(text: &str) -> Vec<Vec<f64>> {
    text.lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(|l| {
            l.split(',')
                .map(|c| c.parse().unwrap_or(f64::NAN))
                .collect()
        })
        .collect()
}

/// Numeric cells of a JSON table.
pub fn parse_json_numbers(value: &Value) -> Vec<Vec<f64>> {
    value["rows"]
        .as_array()
        .map(|rows| {
            rows.iter()
                .map(|r| {
                    r.as_array()
                        .map(|cells| {
                            cells
                                .iter()
                                .map(|c| c.as_f64().unwrap_or(f64::NAN))
                                .collect()
                        })
                        .unwrap_or_default()
                })
                .collect()
        })
        .unwrap_or_default()
}

/// Largest relative difference between the CSV and JSON renderings of the
/// same table, or infinity if their shapes differ.
pub fn csv_json_parity(table: &Table) -> f64 {
    let csv = parse_csv_numbers(&table.to_csv());
    let json = parse_json_numbers(&table.to_json());
    if csv.len() != json.len() || csv.iter().zip(&json).any(|(a, b)| a.len() != b.len()) {
        return f64::INFINITY;
    }
    csv.iter()
        .flatten()
        .zip(json.iter().flatten())
        .map(|(a, b)| (a - b).abs() / b.abs().max(1.0))
        .fold(
            0.0,
            |m, d| if d.is_nan() { f64::INFINITY } else { m.max(d) },
        )
}
