//! CSV/JSON emission. JSON mirrors the CSV columns as an array of
//! objects; cells that parse as JSON numbers stay numbers, everything
//! else is quoted.

use crate::config::OutputFormat;

pub struct Table {
    header: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &str) -> Self {
        Table {
            header: header.split(',').map(str::to_string).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push_row(&mut self, row: String) {
        let cells: Vec<String> = row.split(',').map(str::to_string).collect();
        assert_eq!(cells.len(), self.header.len(), "column count mismatch");
        self.rows.push(cells);
    }

    pub fn render(&self, format: OutputFormat) -> String {
        match format {
            OutputFormat::Csv => {
                let mut out = self.header.join(",");
                out.push('\n');
                for row in &self.rows {
                    out.push_str(&row.join(","));
                    out.push('\n');
                }
                out
            }
            OutputFormat::Json => {
                let mut out = String::from("[");
                for (i, row) in self.rows.iter().enumerate() {
                    if i > 0 {
                        out.push(',');
                    }
                    out.push_str("\n  {");
                    for (j, (key, cell)) in self.header.iter().zip(row).enumerate() {
                        if j > 0 {
                            out.push_str(", ");
                        }
                        out.push('"');
                        out.push_str(key);
                        out.push_str("\": ");
                        out.push_str(&json_cell(cell));
                    }
                    out.push('}');
                }
                out.push_str("\n]\n");
                out
            }
        }
    }
}

fn is_json_number(cell: &str) -> bool {
    let mut chars = cell.as_bytes();
    if chars.first() == Some(&b'-') {
        chars = &chars[1..];
    }
    if chars.is_empty() {
        return false;
    }
    let s = std::str::from_utf8(chars).unwrap();
    // integer / decimal / exponent forms only; inf and NaN are not JSON
    let mut seen_digit = false;
    let mut rest = s;
    while let Some(b) = rest.bytes().next() {
        if b.is_ascii_digit() {
            seen_digit = true;
            rest = &rest[1..];
        } else {
            break;
        }
    }
    if !seen_digit {
        return false;
    }
    if let Some(fraction) = rest.strip_prefix('.') {
        let digits = fraction.bytes().take_while(|b| b.is_ascii_digit()).count();
        if digits == 0 {
            return false;
        }
        rest = &fraction[digits..];
    }
    if let Some(exp) = rest.strip_prefix(['e', 'E']) {
        let exp = exp.strip_prefix(['+', '-']).unwrap_or(exp);
        return !exp.is_empty() && exp.bytes().all(|b| b.is_ascii_digit());
    }
    rest.is_empty()
}

fn json_cell(cell: &str) -> String {
    if cell.is_empty() {
        return "null".into();
    }
    if cell == "true" || cell == "false" {
        return cell.into();
    }
    if is_json_number(cell) {
        return cell.into();
    }
    format!("\"{}\"", cell.replace('\\', "\\\\").replace('"', "\\\""))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_cells_keep_numbers_and_quote_text() {
        assert_eq!(json_cell("42"), "42");
        assert_eq!(json_cell("-1.5e-3"), "-1.5e-3");
        assert_eq!(json_cell("1/2"), "\"1/2\"");
        assert_eq!(json_cell("inf"), "\"inf\"");
        assert_eq!(json_cell(""), "null");
        assert_eq!(json_cell("count-p"), "\"count-p\"");
        assert!(!is_json_number("1."));
        assert!(!is_json_number("1e"));
        assert!(is_json_number("10.25"));
    }

    #[test]
    fn render_shapes() {
        let mut t = Table::new("a,b");
        t.push_row("1,x".into());
        assert_eq!(t.render(OutputFormat::Csv), "a,b\n1,x\n");
        assert_eq!(
            t.render(OutputFormat::Json),
            "[\n  {\"a\": 1, \"b\": \"x\"}\n]\n"
        );
    }
}
