//! Numeric tables and their CSV form.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

const SIG_DIGITS: i32 = 12;

/// Formats `x` with 12 significant digits, trailing zeros trimmed.
/// The output is a pure function of the bits of `x`.
pub fn fmt_num(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let exponent = x.abs().log10().floor() as i32;
    if !(-5..=15).contains(&exponent) {
        let s = format!("{:.*e}", (SIG_DIGITS - 1) as usize, x);
        let (mantissa, exp) = s.split_once('e').expect("scientific format has an exponent");
        return format!("{}e{exp}", trim_zeros(mantissa));
    }
    let decimals = (SIG_DIGITS - 1 - exponent).max(0) as usize;
    trim_zeros(&format!("{x:.decimals$}")).to_string()
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(u64),
    Text(String),
}

impl Cell {
    /// Text cells read as NaN.
    pub fn as_f64(&self) -> f64 {
        match self {
            Cell::Num(x) => *x,
            Cell::Int(n) => *n as f64,
            Cell::Text(_) => f64::NAN,
        }
    }
}

impl std::fmt::Display for Cell {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Cell::Num(x) => f.write_str(&fmt_num(*x)),
            Cell::Int(n) => write!(f, "{n}"),
            Cell::Text(t) => f.write_str(t),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Table {
    /// Written as `# ...` lines before the header.
    pub comments: Vec<String>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new<S: Into<String>>(columns: impl IntoIterator<Item = S>) -> Self {
        Table { comments: Vec::new(), columns: columns.into_iter().map(Into::into).collect(), rows: Vec::new() }
    }

    pub fn push_nums(&mut self, values: impl IntoIterator<Item = f64>) {
        self.push(values.into_iter().map(Cell::Num).collect());
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.columns.len(), "row width must match the header");
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let idx = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r[idx].as_f64()).collect())
    }

    /// Reads back the output of [`Table::to_csv`]; every cell becomes a number.
    pub fn parse_csv(text: &str) -> Result<Table, String> {
        let mut table = Table::default();
        let mut lines = text.lines().enumerate();
        for (i, line) in lines.by_ref() {
            if let Some(c) = line.strip_prefix('#') {
                table.comments.push(c.trim_start().to_string());
            } else {
                table.columns = line.split(',').map(str::to_string).collect();
                if table.columns.iter().any(String::is_empty) {
                    return Err(format!("line {}: empty column name", i + 1));
                }
                break;
            }
        }
        for (i, line) in lines {
            let row = line
                .split(',')
                .map(|v| v.parse::<f64>().map(Cell::Num).map_err(|_| format!("line {}: `{v}` is not a number", i + 1)))
                .collect::<Result<Vec<_>, _>>()?;
            if row.len() != table.columns.len() {
                return Err(format!("line {}: expected {} cells, got {}", i + 1, table.columns.len(), row.len()));
            }
            table.rows.push(row);
        }
        Ok(table)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for c in &self.comments {
            let _ = writeln!(out, "# {c}");
        }
        out.push_str(&self.columns.join(","));
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(Cell::to_string).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    pub fn write_csv(&self, path: &Path) -> std::io::Result<()> {
        fs::write(path, self.to_csv())
    }
}
