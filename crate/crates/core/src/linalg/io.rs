//! Matrix literal formats.
//!
//! * JSON: array of rows, each row an array of `[re, im]` pairs.
//! * Text: one row per line, whitespace-separated `re+imj` tokens.

use num_complex::Complex64;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::ComplexMatrix;
use crate::{Error, Result};

/// JSON wire representation of a [`ComplexMatrix`].
pub type ComplexMatrixJson = Vec<Vec<[f64; 2]>>;

impl Serialize for ComplexMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let rows: ComplexMatrixJson = (0..self.rows())
            .map(|i| self.row(i).iter().map(|z| [z.re, z.im]).collect())
            .collect();
        rows.serialize(s)
    }
}

impl<'de> Deserialize<'de> for ComplexMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let rows = ComplexMatrixJson::deserialize(d)?;
        let rows: Vec<Vec<Complex64>> = rows
            .into_iter()
            .map(|r| r.into_iter().map(|[re, im]| Complex64::new(re, im)).collect())
            .collect();
        ComplexMatrix::from_rows(&rows).map_err(D::Error::custom)
    }
}

impl ComplexMatrix {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("matrix serialises")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::parse(e.line(), "json", e.to_string()))
    }

    /// Whitespace-separated `re+imj` tokens, one row per line.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for i in 0..self.rows() {
            let row: Vec<String> = self.row(i).iter().map(|z| format_complex(*z)).collect();
            out.push_str(&row.join(" "));
            out.push('\n');
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut rows = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let row = line
                .split_whitespace()
                .map(|tok| parse_complex(tok).ok_or_else(|| Error::parse(lineno + 1, tok, "malformed complex number")))
                .collect::<Result<Vec<_>>>()?;
            rows.push(row);
        }
        if rows.is_empty() {
            return Err(Error::parse(0, "", "empty matrix"));
        }
        ComplexMatrix::from_rows(&rows)
    }
}

/// Parses either format, choosing JSON when the first non-blank character is `[`.
pub fn parse_matrix(text: &str) -> Result<ComplexMatrix> {
    if text.trim_start().starts_with('[') {
        ComplexMatrix::from_json(text)
    } else {
        ComplexMatrix::from_text(text)
    }
}

/// `re+imj` using the shortest representation that parses back exactly.
pub fn format_complex(z: Complex64) -> String {
    let sign = if z.im.is_sign_negative() { '-' } else { '+' };
    format!("{:?}{sign}{:?}j", z.re, z.im.abs())
}

/// Accepts `a`, `bj`, `a+bj`, `a-bj`, `j`, `-j` with optional exponents.
pub fn parse_complex(tok: &str) -> Option<Complex64> {
    let Some(body) = tok.strip_suffix('j') else {
        return tok.parse::<f64>().ok().filter(|x| x.is_finite()).map(|re| Complex64::new(re, 0.0));
    };
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| matches!(bytes[k], b'+' | b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(k) => (body[..k].parse::<f64>().ok()?, parse_imag(&body[k..])?),
        None => (0.0, parse_imag(body)?),
    };
    (re.is_finite() && im.is_finite()).then(|| Complex64::new(re, im))
}

fn parse_imag(s: &str) -> Option<f64> {
    match s {
        "" | "+" => Some(1.0),
        "-" => Some(-1.0),
        _ => s.parse().ok(),
    }
}
