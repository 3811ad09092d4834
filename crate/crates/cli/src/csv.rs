//! Plot-ready CSV. Numbers use Rust's shortest round-trip formatting, which
//! is locale independent; infinities are written as `inf`/`-inf` and values
//! outside a column's domain as empty cells, so no cell is ever `NaN`.

use std::fmt::Write as _;

/// A table cell: `None` is outside the column's domain.
pub type Cell = Option<f64>;

pub fn format_number(v: f64) -> String {
    if v == f64::INFINITY {
        "inf".into()
    } else if v == f64::NEG_INFINITY {
        "-inf".into()
    } else if v.is_nan() {
        String::new()
    } else {
        format!("{v:?}")
    }
}

pub fn format_cell(c: Cell) -> String {
    c.map(format_number).unwrap_or_default()
}

/// Inverse of [`format_cell`].
pub fn parse_cell(s: &str) -> Result<Cell, std::num::ParseFloatError> {
    if s.is_empty() {
        Ok(None)
    } else {
        s.parse().map(Some)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(header: Vec<String>) -> Self {
        Table { header, rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<Vec<Cell>> {
        let j = self.header.iter().position(|h| h == name)?;
        Some(self.rows.iter().map(|r| r[j]).collect())
    }

    pub fn render(&self) -> String {
        let mut out = self.header.join(",");
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|&c| format_cell(c)).collect();
            let _ = writeln!(out, "{}", cells.join(","));
        }
        out
    }

    pub fn parse(text: &str) -> Result<Table, String> {
        let mut lines = text.lines();
        let header: Vec<String> = lines.next().ok_or("empty CSV")?.split(',').map(str::to_owned).collect();
        let mut table = Table::new(header);
        for (i, line) in lines.enumerate() {
            let row = line
                .split(',')
                .map(|c| parse_cell(c).map_err(|e| format!("row {i}: {e}")))
                .collect::<Result<Vec<_>, _>>()?;
            if row.len() != table.header.len() {
                return Err(format!("row {i} has {} cells, expected {}", row.len(), table.header.len()));
            }
            table.rows.push(row);
        }
        Ok(table)
    }
}
