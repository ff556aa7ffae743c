//! Report tables rendered as aligned text, CSV or JSON.

use std::io::Write;

use clap::ValueEnum;
use ejq_core::polygon::Rational;
use serde_json::{Map, Number, Value};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Text,
    Csv,
    Json,
}

/// Twelve significant digits; fixed notation between 1e-4 and 1e12, scientific
/// otherwise. Zero prints as `0.000000000000`, infinities as `inf`/`-inf`.
pub fn format_number(v: f64) -> String {
    if v.is_nan() {
        return "nan".into();
    }
    if v.is_infinite() {
        return if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if v == 0.0 {
        return format!("{:.12}", 0.0);
    }
    let exp = v.abs().log10().floor() as i32;
    if (-4..12).contains(&exp) {
        let decimals = (11 - exp).max(0) as usize;
        let s = format!("{v:.decimals$}");
        // rounding can carry into a new digit (9.99… → 10.0…)
        let digits = s.chars().filter(char::is_ascii_digit).count();
        let leading_zeros = s
            .trim_start_matches('-')
            .chars()
            .take_while(|c| *c == '0' || *c == '.')
            .filter(|c| *c == '0')
            .count();
        if digits - leading_zeros > 12 && decimals > 0 {
            let d = decimals - 1;
            return format!("{v:.d$}");
        }
        s
    } else {
        format!("{v:.11e}")
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(i64),
    Rat(Rational),
    Text(String),
    Bool(bool),
}

impl Cell {
    pub fn text(s: impl Into<String>) -> Self {
        Cell::Text(s.into())
    }

    fn render(&self) -> String {
        match self {
            Cell::Num(v) => format_number(*v),
            Cell::Int(i) => i.to_string(),
            Cell::Rat(q) => q.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Bool(b) => b.to_string(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Num(v) if v.is_finite() => {
                Value::Number(format_number(*v).parse::<Number>().expect("numeric literal"))
            }
            Cell::Int(i) => Value::Number((*i).into()),
            Cell::Bool(b) => Value::Bool(*b),
            other => Value::String(other.render()),
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
        Cell::Int(v as i64)
    }
}

impl From<u64> for Cell {
    fn from(v: u64) -> Self {
        Cell::Text(v.to_string())
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Bool(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_owned())
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

impl From<Rational> for Cell {
    fn from(v: Rational) -> Self {
        Cell::Rat(v)
    }
}

impl From<&Rational> for Cell {
    fn from(v: &Rational) -> Self {
        Cell::Rat(v.clone())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Section {
    pub name: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Section {
    pub fn new(name: &str, columns: &[&str]) -> Self {
        Self {
            name: name.into(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn row(&mut self, cells: Vec<Cell>) -> &mut Self {
        debug_assert_eq!(cells.len(), self.columns.len());
        self.rows.push(cells);
        self
    }

    /// Single-row section of named values.
    pub fn record(name: &str, fields: Vec<(&str, Cell)>) -> Self {
        let (cols, cells): (Vec<&str>, Vec<Cell>) = fields.into_iter().unzip();
        let mut s = Self::new(name, &cols);
        s.row(cells);
        s
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Report {
    pub command: String,
    pub sections: Vec<Section>,
}

impl Report {
    pub fn new(command: &str) -> Self {
        Self {
            command: command.into(),
            sections: Vec::new(),
        }
    }

    pub fn push(&mut self, s: Section) -> &mut Self {
        self.sections.push(s);
        self
    }

    pub fn write(&self, format: Format, out: &mut dyn Write) -> std::io::Result<()> {
        match format {
            Format::Text => self.write_text(out),
            Format::Csv => self.write_csv(out),
            Format::Json => self.write_json(out),
        }
    }

    fn write_text(&self, out: &mut dyn Write) -> std::io::Result<()> {
        if let [s] = self.sections.as_slice() {
            if let ([_], [row]) = (s.columns.as_slice(), s.rows.as_slice()) {
                return writeln!(out, "{}", row[0].render());
            }
        }
        for (k, s) in self.sections.iter().enumerate() {
            if k > 0 {
                writeln!(out)?;
            }
            writeln!(out, "# {}", s.name)?;
            let rendered: Vec<Vec<String>> =
                s.rows.iter().map(|r| r.iter().map(Cell::render).collect()).collect();
            let widths: Vec<usize> = (0..s.columns.len())
                .map(|c| {
                    rendered
                        .iter()
                        .map(|r| r[c].chars().count())
                        .chain(std::iter::once(s.columns[c].chars().count()))
                        .max()
                        .unwrap_or(0)
                })
                .collect();
            let line = |cells: &[String]| {
                let mut l = String::new();
                for (c, (cell, w)) in cells.iter().zip(&widths).enumerate() {
                    if c > 0 {
                        l.push_str("  ");
                    }
                    l.push_str(cell);
                    l.extend(std::iter::repeat_n(' ', w - cell.chars().count()));
                }
                l.trim_end().to_owned()
            };
            writeln!(out, "{}", line(&s.columns))?;
            for r in &rendered {
                writeln!(out, "{}", line(r))?;
            }
        }
        Ok(())
    }

    /// One section: a plain table. Several: long form `section,row,field,value`
    /// so every record has the same width.
    fn write_csv(&self, out: &mut dyn Write) -> std::io::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let csv_err = |e: csv::Error| std::io::Error::other(e.to_string());
        if let [s] = self.sections.as_slice() {
            w.write_record(&s.columns).map_err(csv_err)?;
            for r in &s.rows {
                w.write_record(r.iter().map(Cell::render)).map_err(csv_err)?;
            }
        } else {
            w.write_record(["section", "row", "field", "value"]).map_err(csv_err)?;
            for s in &self.sections {
                for (i, r) in s.rows.iter().enumerate() {
                    for (col, cell) in s.columns.iter().zip(r) {
                        w.write_record([
                            s.name.as_str(),
                            &i.to_string(),
                            col.as_str(),
                            &cell.render(),
                        ])
                        .map_err(csv_err)?;
                    }
                }
            }
        }
        w.flush()
    }

    fn write_json(&self, out: &mut dyn Write) -> std::io::Result<()> {
        let mut doc = Map::new();
        doc.insert("command".into(), Value::String(self.command.clone()));
        for s in &self.sections {
            let rows: Vec<Value> = s
                .rows
                .iter()
                .map(|r| {
                    Value::Object(
                        s.columns
                            .iter()
                            .cloned()
                            .zip(r.iter().map(Cell::json))
                            .collect(),
                    )
                })
                .collect();
            doc.insert(s.name.clone(), Value::Array(rows));
        }
        serde_json::to_writer_pretty(&mut *out, &Value::Object(doc))
            .map_err(|e| std::io::Error::other(e.to_string()))?;
        writeln!(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twelve_significant_digits() {
        assert_eq!(format_number(0.0), "0.000000000000");
        assert_eq!(format_number(-0.0), "0.000000000000");
        assert_eq!(format_number(2f64.ln()), "0.693147180560");
        assert_eq!(format_number(1.0), "1.00000000000");
        assert_eq!(format_number(-123.456), "-123.456000000");
        assert_eq!(format_number(9.9999999999999), "10.0000000000");
        assert_eq!(format_number(1.5e-9), "1.50000000000e-9");
        assert_eq!(format_number(f64::INFINITY), "inf");
        assert_eq!(format_number(f64::NEG_INFINITY), "-inf");
        assert_eq!(format_number(3e15), "3.00000000000e15");
    }

    #[test]
    fn single_value_prints_bare() {
        let mut r = Report::new("entropy");
        r.push(Section::record("entropy", vec![("entropy", Cell::Num(0.0))]));
        let mut buf = Vec::new();
        r.write(Format::Text, &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "0.000000000000\n");
    }

    #[test]
    fn csv_and_json() {
        let mut r = Report::new("x");
        let mut s = Section::new("t", &["a", "b"]);
        s.row(vec![Cell::text("p,q"), Cell::Num(f64::INFINITY)]);
        r.push(s);
        let mut buf = Vec::new();
        r.write(Format::Csv, &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "a,b\n\"p,q\",inf\n");
        let mut buf = Vec::new();
        r.write(Format::Json, &mut buf).unwrap();
        let v: Value = serde_json::from_slice(&buf).unwrap();
        assert_eq!(v["t"][0]["b"], "inf");
        r.push(Section::record("u", vec![("c", Cell::Num(0.5))]));
        let mut buf = Vec::new();
        r.write(Format::Csv, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("section,row,field,value\n"));
        assert!(text.contains("u,0,c,0.500000000000\n"));
    }
}
