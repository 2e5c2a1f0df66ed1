//! Tables rendered as CSV or JSON lines, each behind one provenance line.

use serde_json::{json, Map, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Jsonl,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    F(f64),
    I(i64),
    S(String),
    B(bool),
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::F(v)
    }
}
impl From<i64> for Cell {
    fn from(v: i64) -> Self {
        Cell::I(v)
    }
}
impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::S(v.to_string())
    }
}
impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::S(v)
    }
}
impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::B(v)
    }
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            // 17 significant digits round-trip every f64
            Cell::F(v) => format!("{v:.16e}"),
            Cell::I(v) => v.to_string(),
            Cell::B(v) => v.to_string(),
            Cell::S(s) => {
                if s.contains([',', '"', '\n']) {
                    format!("\"{}\"", s.replace('"', "\"\""))
                } else {
                    s.clone()
                }
            }
        }
    }

    fn json(&self) -> Value {
        match self {
            // non-finite values become null
            Cell::F(v) => serde_json::Number::from_f64(*v).map(Value::Number).unwrap_or(Value::Null),
            Cell::I(v) => json!(v),
            Cell::B(v) => json!(v),
            Cell::S(s) => json!(s),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Table { columns: columns.iter().map(|c| c.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }
}

/// What the file holds: tool version, the echoed configuration and a
/// descriptive tag of the computed quantity.
#[derive(Debug, Clone, PartialEq)]
pub struct Provenance {
    pub quantity: String,
    pub config: Value,
}

impl Provenance {
    fn value(&self) -> Value {
        let mut m = Map::new();
        m.insert("tool".into(), json!(env!("CARGO_PKG_NAME")));
        m.insert("version".into(), json!(env!("CARGO_PKG_VERSION")));
        m.insert("quantity".into(), json!(self.quantity));
        m.insert("config".into(), self.config.clone());
        Value::Object(m)
    }
}

pub fn render(table: &Table, prov: &Provenance, format: Format) -> String {
    let mut out = String::new();
    match format {
        Format::Csv => {
            out.push_str("# provenance ");
            out.push_str(&prov.value().to_string());
            out.push('\n');
            out.push_str(&table.columns.join(","));
            out.push('\n');
            for row in &table.rows {
                let cells: Vec<String> = row.iter().map(Cell::csv).collect();
                out.push_str(&cells.join(","));
                out.push('\n');
            }
        }
        Format::Jsonl => {
            out.push_str(&json!({ "provenance": prov.value() }).to_string());
            out.push('\n');
            for row in &table.rows {
                let obj: Map<String, Value> = table.columns.iter().cloned().zip(row.iter().map(Cell::json)).collect();
                out.push_str(&Value::Object(obj).to_string());
                out.push('\n');
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> (Table, Provenance) {
        let mut t = Table::new(&["name", "x", "n"]);
        t.push(vec!["a,b".into(), 0.1.into(), 3i64.into()]);
        t.push(vec!["c".into(), f64::NAN.into(), (-1i64).into()]);
        (t, Provenance { quantity: "test".into(), config: json!({"k": 1}) })
    }

    #[test]
    fn csv_layout() {
        let (t, p) = sample();
        let s = render(&t, &p, Format::Csv);
        let lines: Vec<&str> = s.lines().collect();
        assert!(lines[0].starts_with("# provenance {"));
        assert_eq!(lines[1], "name,x,n");
        assert_eq!(lines[2], "\"a,b\",1.0000000000000001e-1,3");
        assert_eq!(lines[3], "c,NaN,-1");
        assert_eq!("1.0000000000000001e-1".parse::<f64>().unwrap(), 0.1);
    }

    #[test]
    fn jsonl_layout() {
        let (t, p) = sample();
        let s = render(&t, &p, Format::Jsonl);
        let lines: Vec<Value> = s.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
        assert_eq!(lines[0]["provenance"]["quantity"], "test");
        assert_eq!(lines[1]["x"], 0.1);
        assert!(lines[2]["x"].is_null());
    }
}
