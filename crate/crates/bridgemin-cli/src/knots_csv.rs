//! Knots CSV format: header `t,x`, one `time,value` row per knot.

use bridgemin::Knots;

pub fn read_knots(path: &std::path::Path) -> Result<Knots, String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("{}: {e}", path.display()))?;
    parse_knots(&text).map_err(|e| format!("{}: {e}", path.display()))
}

pub fn parse_knots(text: &str) -> Result<Knots, String> {
    let mut lines = text.lines().enumerate();
    let (_, header) = lines.next().ok_or("empty knots file")?;
    if header.trim() != "t,x" {
        return Err(format!("expected header 't,x', found '{}'", header.trim()));
    }
    let mut rows = Vec::new();
    for (idx, line) in lines {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let row_no = idx + 1; // 1-based, counting the header as row 1
        let mut fields = line.split(',');
        let t: f64 = parse_field(fields.next(), "t", row_no)?;
        let x: f64 = parse_field(fields.next(), "x", row_no)?;
        if fields.next().is_some() {
            return Err(format!("row {row_no}: expected exactly two fields"));
        }
        rows.push((t, x));
    }
    Knots::from_rows(&rows).map_err(|e| e.to_string())
}

fn parse_field(field: Option<&str>, name: &str, row_no: usize) -> Result<f64, String> {
    let raw = field.ok_or_else(|| format!("row {row_no}: missing field '{name}'"))?.trim();
    raw.parse::<f64>()
        .map_err(|_| format!("row {row_no}: field '{name}' is not a real number: '{raw}'"))
}

#[cfg(test)]
pub fn knots_to_csv(knots: &Knots) -> String {
    let mut s = String::from("t,x\n");
    for (t, x) in knots.rows() {
        s.push_str(&crate::output::fmt_real(t));
        s.push(',');
        s.push_str(&crate::output::fmt_real(x));
        s.push('\n');
    }
    s
}
