//! Output plumbing: 17-significant-digit real formatting (round-trip safe),
//! CSV assembly, and a minimal JSON writer for the single-object reports.

use std::fmt::Write as _;
use std::path::PathBuf;

/// Serialize a real with 17 significant digits so parsing it back yields the
/// identical f64.
pub fn fmt_real(v: f64) -> String {
    format!("{v:.16e}")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

impl std::str::FromStr for Format {
    type Err = &'static str;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            _ => Err("expected csv | json"),
        }
    }
}

/// Writes `content` to the path, or to stdout when no path is given.
pub fn emit(out: &Option<PathBuf>, content: &str) -> std::io::Result<()> {
    match out {
        Some(path) => std::fs::write(path, content),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

/// One CSV table: header plus pre-formatted rows.
pub fn csv_table(header: &str, rows: &[Vec<String>]) -> String {
    let mut s = String::with_capacity(rows.len() * 32 + header.len() + 1);
    s.push_str(header);
    s.push('\n');
    for row in rows {
        s.push_str(&row.join(","));
        s.push('\n');
    }
    s
}

/// JSON values restricted to what the reports need.
pub enum Json {
    Num(f64),
    Int(u64),
    Bool(bool),
    Str(String),
    Arr(Vec<Json>),
    Obj(Vec<(&'static str, Json)>),
    Null,
}

impl Json {
    pub fn render(&self) -> String {
        let mut s = String::new();
        self.write(&mut s);
        s
    }

    fn write(&self, s: &mut String) {
        match self {
            Json::Num(v) => {
                let _ = write!(s, "{}", fmt_real(*v));
            }
            Json::Int(v) => {
                let _ = write!(s, "{v}");
            }
            Json::Bool(b) => {
                let _ = write!(s, "{b}");
            }
            Json::Str(txt) => {
                s.push('"');
                for c in txt.chars() {
                    match c {
                        '"' => s.push_str("\\\""),
                        '\\' => s.push_str("\\\\"),
                        '\n' => s.push_str("\\n"),
                        '\r' => s.push_str("\\r"),
                        '\t' => s.push_str("\\t"),
                        c if (c as u32) < 0x20 => {
                            let _ = write!(s, "\\u{:04x}", c as u32);
                        }
                        c => s.push(c),
                    }
                }
                s.push('"');
            }
            Json::Arr(items) => {
                s.push('[');
                for (i, item) in items.iter().enumerate() {
                    if i > 0 {
                        s.push(',');
                    }
                    item.write(s);
                }
                s.push(']');
            }
            Json::Obj(fields) => {
                s.push('{');
                for (i, (key, value)) in fields.iter().enumerate() {
                    if i > 0 {
                        s.push(',');
                    }
                    let _ = write!(s, "\"{key}\":");
                    value.write(s);
                }
                s.push('}');
            }
            Json::Null => s.push_str("null"),
        }
    }
}

/// Every JSON report is a single object carrying the schema version and an
/// echo of the configuration that produced it.
pub fn json_report(command: &str, config: Vec<(&'static str, Json)>, body: Vec<(&'static str, Json)>) -> String {
    let mut fields = vec![
        ("schema_version", Json::Int(1)),
        ("command", Json::Str(command.to_string())),
        ("config", Json::Obj(config)),
    ];
    fields.extend(body);
    let mut s = Json::Obj(fields).render();
    s.push('\n');
    s
}

pub fn knots_json(knots: &bridgemin::Knots) -> Json {
    Json::Arr(
        knots
            .rows()
            .into_iter()
            .map(|(t, x)| Json::Arr(vec![Json::Num(t), Json::Num(x)]))
            .collect(),
    )
}
