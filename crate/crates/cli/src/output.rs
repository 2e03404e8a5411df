use std::fs;
use std::io::{self, Write};
use std::path::Path;

use serde::Serialize;

/// Every value carries 17 significant digits.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn csv<const N: usize>(header: [&str; N], rows: &[[f64; N]]) -> String {
    let mut out = String::with_capacity(rows.len() * N * 24 + 16);
    out.push_str(&header.join(","));
    out.push('\n');
    for row in rows {
        let cells: Vec<String> = row.iter().map(|&v| fmt_f64(v)).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

pub fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
    s.push('\n');
    s
}

/// Writes to `path`, or to stdout when no path is given.
pub fn emit(path: Option<&Path>, text: &str) -> io::Result<()> {
    match path {
        Some(p) => fs::write(p, text),
        None => io::stdout().lock().write_all(text.as_bytes()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_layout() {
        let text = csv(["t", "x", "u"], &[[0.0, -1.5, 0.1]]);
        assert_eq!(
            text,
            "t,x,u\n0.0000000000000000e0,-1.5000000000000000e0,1.0000000000000001e-1\n"
        );
        let back: f64 = text.lines().nth(1).unwrap().split(',').nth(2).unwrap().parse().unwrap();
        assert_eq!(back, 0.1);
    }
}
