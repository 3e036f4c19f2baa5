use std::fmt::Write as _;

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(i64),
    Text(String),
    /// Free text that may contain commas; always quoted in CSV.
    Error(String),
    Null,
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Num(x)
    }
}

impl From<Option<f64>> for Cell {
    fn from(x: Option<f64>) -> Self {
        x.map_or(Cell::Null, Cell::Num)
    }
}

impl From<usize> for Cell {
    fn from(n: usize) -> Self {
        Cell::Int(n as i64)
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.to_string())
    }
}

#[derive(Debug, Clone, Default)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new<S: AsRef<str>>(columns: &[S]) -> Self {
        Table {
            columns: columns.iter().map(|c| c.as_ref().to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }
}

/// `%g`-style rendering with `digits` significant digits. Non-finite values
/// have no numeric rendering and return `None`.
pub fn format_number(x: f64, digits: usize) -> Option<String> {
    if !x.is_finite() {
        return None;
    }
    if x == 0.0 {
        return Some("0".into());
    }
    let sci = format!("{:.*e}", digits - 1, x);
    let (mantissa, exponent) = sci.split_once('e').expect("exponent present");
    let exponent: i32 = exponent.parse().expect("integer exponent");
    if (-5..digits as i32).contains(&exponent) {
        let decimals = (digits as i32 - 1 - exponent).max(0) as usize;
        Some(trim_fraction(&format!("{:.*}", decimals, x)))
    } else {
        Some(format!("{}e{}", trim_fraction(mantissa), exponent))
    }
}

fn trim_fraction(s: &str) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s.to_string()
    }
}

fn csv_quote(s: &str) -> String {
    format!("\"{}\"", s.replace('"', "\"\""))
}

pub fn render_csv(table: &Table, digits: usize) -> String {
    let mut out = table.columns.join(",");
    out.push('\n');
    for row in &table.rows {
        let cells: Vec<String> = row
            .iter()
            .map(|c| match c {
                Cell::Num(x) => format_number(*x, digits).unwrap_or_else(|| x.to_string()),
                Cell::Int(n) => n.to_string(),
                Cell::Text(s) if s.contains([',', '"', '\n']) => csv_quote(s),
                Cell::Text(s) => s.clone(),
                Cell::Error(s) => csv_quote(s),
                Cell::Null => String::new(),
            })
            .collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

/// An array of objects, one per row. Numbers are written with the same
/// significant digits as the CSV form; non-finite numbers become `null`.
pub fn render_json(table: &Table, digits: usize) -> String {
    let mut out = String::from("[");
    for (i, row) in table.rows.iter().enumerate() {
        out.push_str(if i == 0 { "\n  {" } else { ",\n  {" });
        for (j, (name, cell)) in table.columns.iter().zip(row).enumerate() {
            if j > 0 {
                out.push_str(", ");
            }
            let value = match cell {
                Cell::Num(x) => format_number(*x, digits).unwrap_or_else(|| "null".into()),
                Cell::Int(n) => n.to_string(),
                Cell::Text(s) | Cell::Error(s) => {
                    serde_json::to_string(s).expect("string serializes")
                }
                Cell::Null => "null".into(),
            };
            let _ = write!(
                out,
                "{}: {}",
                serde_json::to_string(name).expect("string serializes"),
                value
            );
        }
        out.push('}');
    }
    out.push_str(if table.rows.is_empty() {
        "]\n"
    } else {
        "\n]\n"
    });
    out
}
