use serde_json::{Map, Value as Json};

use crate::args::Format;

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(u64),
    Real(f64),
    Text(String),
}

impl From<u64> for Cell {
    fn from(v: u64) -> Self {
        Cell::Int(v)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as u64)
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Real(v)
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Text(v.to_string())
    }
}

/// Rounds to 12 significant digits and prints the shortest form of the result.
pub fn sig12(x: f64) -> String {
    if !x.is_finite() || x == 0.0 {
        return format!("{x}");
    }
    let rounded: f64 = format!("{x:.11e}").parse().expect("formatted float parses");
    format!("{rounded}")
}

fn round12(x: f64) -> Json {
    if !x.is_finite() {
        return Json::Null;
    }
    let rounded: f64 = sig12(x).parse().expect("formatted float parses");
    serde_json::Number::from_f64(rounded).map_or(Json::Null, Json::Number)
}

impl Cell {
    fn text(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Real(v) => {
                let s = format!("{v:.6}");
                if s == "-0.000000" {
                    "0.000000".into()
                } else {
                    s
                }
            }
            Cell::Text(s) => s.clone(),
        }
    }

    fn csv(&self) -> String {
        match self {
            Cell::Real(v) => sig12(*v),
            other => other.text(),
        }
    }

    fn json(&self) -> Json {
        match self {
            Cell::Int(v) => Json::from(*v),
            Cell::Real(v) => round12(*v),
            Cell::Text(s) => Json::from(s.clone()),
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct Table {
    pub headers: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(headers: &[&str]) -> Self {
        Table {
            headers: headers.iter().map(|h| h.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.headers.len());
        self.rows.push(row);
    }

    fn to_json(&self) -> Json {
        Json::Array(
            self.rows
                .iter()
                .map(|r| {
                    Json::Object(
                        self.headers
                            .iter()
                            .cloned()
                            .zip(r.iter().map(Cell::json))
                            .collect(),
                    )
                })
                .collect(),
        )
    }
}

/// What a command produced: a one-line summary, an optional table, and
/// optionally a richer JSON document replacing the default rendering.
#[derive(Debug, Clone, Default)]
pub struct Report {
    pub summary: Vec<(String, Cell)>,
    pub table: Option<Table>,
    /// Shown instead of `table` in text output.
    pub detail: Option<Table>,
    pub json: Option<Json>,
}

impl Report {
    pub fn summary(pairs: Vec<(&str, Cell)>) -> Self {
        Report {
            summary: pairs.into_iter().map(|(k, v)| (k.to_string(), v)).collect(),
            ..Default::default()
        }
    }

    pub fn with_table(mut self, table: Table) -> Self {
        self.table = Some(table);
        self
    }

    pub fn with_json(mut self, json: Json) -> Self {
        self.json = Some(json);
        self
    }

    pub fn render(&self, format: Format) -> Result<String, csv::Error> {
        Ok(match format {
            Format::Text => self.render_text(),
            Format::Csv => self.render_csv()?,
            Format::Json => {
                let value = match &self.json {
                    Some(j) => round_all(j.clone()),
                    None => self.default_json(),
                };
                let mut s = serde_json::to_string_pretty(&value).expect("json values serialize");
                s.push('\n');
                s
            }
        })
    }

    fn render_text(&self) -> String {
        let mut out = String::new();
        if !self.summary.is_empty() {
            let line: Vec<String> = self
                .summary
                .iter()
                .map(|(k, v)| format!("{k}={}", v.text()))
                .collect();
            out.push_str(&line.join(" "));
            out.push('\n');
        }
        if let Some(t) = self.detail.as_ref().or(self.table.as_ref()) {
            let cells: Vec<Vec<String>> = t
                .rows
                .iter()
                .map(|r| r.iter().map(Cell::text).collect())
                .collect();
            let widths: Vec<usize> = (0..t.headers.len())
                .map(|i| {
                    cells
                        .iter()
                        .map(|r| r[i].len())
                        .chain([t.headers[i].len()])
                        .max()
                        .unwrap_or(0)
                })
                .collect();
            let line = |row: &[String]| {
                let padded: Vec<String> = row
                    .iter()
                    .zip(&widths)
                    .map(|(c, w)| format!("{c:>w$}"))
                    .collect();
                padded.join("  ").trim_end().to_string() + "\n"
            };
            out.push_str(&line(&t.headers));
            for r in &cells {
                out.push_str(&line(r));
            }
        }
        out
    }

    fn render_csv(&self) -> Result<String, csv::Error> {
        let mut w = csv::Writer::from_writer(Vec::new());
        match &self.table {
            Some(t) => {
                w.write_record(&t.headers)?;
                for r in &t.rows {
                    w.write_record(r.iter().map(Cell::csv))?;
                }
            }
            None => {
                w.write_record(self.summary.iter().map(|(k, _)| k))?;
                w.write_record(self.summary.iter().map(|(_, v)| v.csv()))?;
            }
        }
        let bytes = w.into_inner().map_err(|e| e.into_error())?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }

    fn default_json(&self) -> Json {
        let mut map = Map::new();
        for (k, v) in &self.summary {
            map.insert(k.clone(), v.json());
        }
        if let Some(t) = &self.table {
            map.insert("rows".into(), t.to_json());
        }
        Json::Object(map)
    }
}

/// Applies the 12-significant-digit rule to every float inside a document.
fn round_all(v: Json) -> Json {
    match v {
        Json::Number(n) if n.is_f64() => round12(n.as_f64().expect("f64 number")),
        Json::Array(a) => Json::Array(a.into_iter().map(round_all).collect()),
        Json::Object(o) => Json::Object(o.into_iter().map(|(k, v)| (k, round_all(v))).collect()),
        other => other,
    }
}
