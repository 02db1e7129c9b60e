//! CSV tables with a config echo and trailing summary comments.

use std::fmt::Write as _;
use std::io::Write;
use std::path::Path;

use serde::Serialize;

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(usize),
    Text(String),
}

impl Cell {
    fn render(&self) -> String {
        match self {
            // 17 significant digits round-trip every f64
            Cell::Num(v) => format!("{v:.16e}"),
            Cell::Int(v) => v.to_string(),
            Cell::Text(s) => s.clone(),
        }
    }

    pub fn as_f64(&self) -> Option<f64> {
        match self {
            Cell::Num(v) => Some(*v),
            Cell::Int(v) => Some(*v as f64),
            Cell::Text(_) => None,
        }
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub config: String,
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
    pub notes: Vec<String>,
}

impl Table {
    pub fn new<C: Serialize>(config: &C, header: Vec<&'static str>) -> Self {
        Self {
            config: serde_json::to_string(config).expect("config serialises"),
            header,
            rows: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn note(&mut self, line: impl Into<String>) {
        self.notes.push(line.into());
    }

    /// Values of one column, by header name.
    pub fn column(&self, name: &str) -> Vec<f64> {
        let i = self
            .header
            .iter()
            .position(|h| *h == name)
            .expect("known column");
        self.rows
            .iter()
            .map(|r| r[i].as_f64().unwrap_or(f64::NAN))
            .collect()
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        writeln!(out, "# config: {}", self.config).unwrap();
        writeln!(out, "{}", self.header.join(",")).unwrap();
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(Cell::render).collect();
            writeln!(out, "{}", cells.join(",")).unwrap();
        }
        for note in &self.notes {
            writeln!(out, "# {note}").unwrap();
        }
        out
    }

    /// Writes to `path`, or to stdout when no path is given.
    pub fn write(&self, path: Option<&Path>) -> std::io::Result<()> {
        let text = self.render();
        match path {
            Some(p) => std::fs::write(p, text),
            None => std::io::stdout().lock().write_all(text.as_bytes()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn layout() {
        #[derive(Serialize)]
        struct Cfg {
            a: f64,
        }
        let mut t = Table::new(&Cfg { a: 0.5 }, vec!["n", "x", "flag"]);
        t.push(vec![3usize.into(), 0.1.into(), "ok".into()]);
        t.note("done");
        let text = t.render();
        assert_eq!(
            text,
            "# config: {\"a\":0.5}\nn,x,flag\n3,1.0000000000000001e-1,ok\n# done\n"
        );
        let parsed: f64 = "1.0000000000000001e-1".parse().unwrap();
        assert_eq!(parsed, 0.1);
        assert_eq!(t.column("x"), vec![0.1]);
    }
}
