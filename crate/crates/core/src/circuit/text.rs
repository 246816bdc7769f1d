//! Line-oriented netlist text format.
//!
//! ```text
//! # comment
//! modes 3
//! coupler 1 2 0.78539816339744828
//! phase 1 1.5707963267948966
//! ```
//!
//! The first directive must be `modes`. Ports are 1-based, angles are decimal
//! radians. Canonical output writes angles with 17 significant digits.

use super::{Element, Netlist};
use crate::fmt::fmt17;
use crate::{Error, Result};

pub fn serialize(nl: &Netlist) -> String {
    let mut out = format!("modes {}\n", nl.n_modes());
    for e in nl.elements() {
        match *e {
            Element::Coupler { a, b, angle } => out.push_str(&format!("coupler {a} {b} {}\n", fmt17(angle))),
            Element::Phase { port, angle } => out.push_str(&format!("phase {port} {}\n", fmt17(angle))),
        }
    }
    out
}

pub fn parse(text: &str) -> Result<Netlist> {
    let mut netlist: Option<Netlist> = None;

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let tokens: Vec<&str> = line.split_whitespace().collect();
        let keyword = tokens[0];

        let Some(nl) = netlist.as_mut() else {
            if keyword != "modes" {
                return Err(Error::parse(line_no, keyword, "expected `modes <n>` before any element"));
            }
            expect_arity(&tokens, 2, line_no)?;
            let n = parse_port(tokens[1], line_no)?;
            netlist = Some(Netlist::new(n).map_err(|e| Error::parse(line_no, tokens[1], e.to_string()))?);
            continue;
        };

        let element = match keyword {
            "coupler" => {
                expect_arity(&tokens, 4, line_no)?;
                Element::coupler(
                    parse_port(tokens[1], line_no)?,
                    parse_port(tokens[2], line_no)?,
                    parse_angle(tokens[3], line_no)?,
                )
            }
            "phase" => {
                expect_arity(&tokens, 3, line_no)?;
                Element::phase(parse_port(tokens[1], line_no)?, parse_angle(tokens[2], line_no)?)
            }
            "modes" => return Err(Error::parse(line_no, keyword, "duplicate `modes` directive")),
            other => return Err(Error::parse(line_no, other, "unknown element")),
        };
        nl.push(element).map_err(|e| Error::parse(line_no, line, e.to_string()))?;
    }

    netlist.ok_or_else(|| Error::parse(0, "", "missing `modes` directive"))
}

fn expect_arity(tokens: &[&str], n: usize, line: usize) -> Result<()> {
    if tokens.len() == n {
        Ok(())
    } else {
        let tok = tokens.get(n).copied().unwrap_or(tokens[tokens.len() - 1]);
        Err(Error::parse(
            line,
            tok,
            format!("`{}` takes {} arguments, got {}", tokens[0], n - 1, tokens.len() - 1),
        ))
    }
}

fn parse_port(tok: &str, line: usize) -> Result<usize> {
    tok.parse::<usize>()
        .map_err(|_| Error::parse(line, tok, "expected a positive integer"))
}

fn parse_angle(tok: &str, line: usize) -> Result<f64> {
    match tok.parse::<f64>() {
        Ok(x) if x.is_finite() => Ok(x),
        _ => Err(Error::parse(line, tok, "malformed angle")),
    }
}
