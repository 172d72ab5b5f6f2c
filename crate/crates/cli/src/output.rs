use std::fs;
use std::path::Path;

use serde::Serialize;

use crate::args::Format;
use crate::CliError;

/// A rendered result: a header line, a table and a JSON value.
pub struct Report {
    pub title: String,
    pub headers: Vec<String>,
    pub rows: Vec<Vec<String>>,
    pub json: serde_json::Value,
}

impl Report {
    pub fn new(title: impl Into<String>, headers: &[&str], json: impl Serialize) -> Result<Self, CliError> {
        Ok(Report {
            title: title.into(),
            headers: headers.iter().map(|h| h.to_string()).collect(),
            rows: Vec::new(),
            json: serde_json::to_value(json)?,
        })
    }

    pub fn row(&mut self, cells: Vec<String>) {
        self.rows.push(cells);
    }

    fn table(&self) -> String {
        let cols = self.headers.len();
        let mut widths: Vec<usize> = self.headers.iter().map(|h| h.chars().count()).collect();
        for r in &self.rows {
            for (i, c) in r.iter().enumerate().take(cols) {
                widths[i] = widths[i].max(c.chars().count());
            }
        }
        let line = |cells: &[String]| {
            let mut s = String::new();
            for (i, c) in cells.iter().enumerate() {
                if i > 0 {
                    s.push_str("  ");
                }
                let pad = widths[i].saturating_sub(c.chars().count());
                s.push_str(c);
                if i + 1 < cells.len() {
                    s.push_str(&" ".repeat(pad));
                }
            }
            s.push('\n');
            s
        };
        let mut out = format!("{}\n", self.title);
        if cols > 0 {
            out.push_str(&line(&self.headers));
            for r in &self.rows {
                out.push_str(&line(r));
            }
        }
        out
    }

    fn csv(&self) -> Result<String, CliError> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.headers)?;
        for r in &self.rows {
            w.write_record(r)?;
        }
        let bytes = w.into_inner().map_err(|e| CliError::Io(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| CliError::Io(e.to_string()))
    }

    pub fn render(&self, format: Format) -> Result<String, CliError> {
        match format {
            Format::Table => Ok(self.table()),
            Format::Json => Ok(format!("{}\n", serde_json::to_string_pretty(&self.json)?)),
            Format::Csv => self.csv(),
        }
    }

    pub fn emit(&self, format: Format, path: Option<&Path>) -> Result<(), CliError> {
        let text = self.render(format)?;
        match path {
            Some(p) => fs::write(p, text).map_err(|e| CliError::Io(format!("{}: {e}", p.display()))),
            None => {
                print!("{text}");
                Ok(())
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Report {
        let mut r = Report::new("title", &["a", "bb"], serde_json::json!({"k": 1})).unwrap();
        r.row(vec!["1".into(), "x,y".into()]);
        r.row(vec!["10".into(), "z".into()]);
        r
    }

    #[test]
    fn table_aligns_columns() {
        assert_eq!(sample().render(Format::Table).unwrap(), "title\na   bb\n1   x,y\n10  z\n");
    }

    #[test]
    fn csv_quotes_commas() {
        assert_eq!(sample().render(Format::Csv).unwrap(), "a,bb\n1,\"x,y\"\n10,z\n");
    }

    #[test]
    fn json_is_pretty() {
        assert_eq!(sample().render(Format::Json).unwrap(), "{\n  \"k\": 1\n}\n");
    }
}
