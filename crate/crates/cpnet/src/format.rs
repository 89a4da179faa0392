//! Line-based text format for CP-nets.
//!
//! ```text
//! cpnet 4
//! domains 2 2 3 2
//! 0 0 1 0
//! 0 0 1 0
//! 0 0 0 1
//! 0 0 0 0
//! cpt 1
//! - : 1,2
//! cpt 3
//! 1,1 : 1,2,3
//! 1,2 : 3,1,2
//! ...
//! ```
//!
//! The adjacency rows follow the `domains` line. Each `cpt i` block (1-based
//! variable number) lists one row per parent assignment: the parent values
//! in variable order, or `-` for a parentless variable, then the preference
//! position of every value. `#` starts a comment; blank lines are ignored.

use std::fmt::Write as _;

use cpnet_core::model::{CpNet, CptRow, ModelError, PreferenceMode, RawNet};
use thiserror::Error;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("line {line}, column {column}: {message}")]
pub struct SyntaxError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error: {0}")]
    Syntax(#[from] SyntaxError),
    #[error("invalid net: {0}")]
    Model(#[from] ModelError),
}

struct Line<'a> {
    number: usize,
    /// Text with the comment removed.
    text: &'a str,
}

impl<'a> Line<'a> {
    fn error(&self, column: usize, message: impl Into<String>) -> SyntaxError {
        SyntaxError { line: self.number, column, message: message.into() }
    }

    /// Whitespace-separated tokens with their 1-based columns.
    fn tokens(&self) -> Vec<(usize, &'a str)> {
        let mut out = Vec::new();
        let mut start = None;
        for (i, c) in self.text.char_indices() {
            match (c.is_whitespace(), start) {
                (true, Some(s)) => {
                    out.push((s + 1, &self.text[s..i]));
                    start = None;
                }
                (false, None) => start = Some(i),
                _ => {}
            }
        }
        if let Some(s) = start {
            out.push((s + 1, &self.text[s..]));
        }
        out
    }
}

fn number<T: std::str::FromStr>(line: &Line<'_>, column: usize, token: &str, what: &str) -> Result<T, SyntaxError> {
    token.parse().map_err(|_| line.error(column, format!("expected {what}, found `{token}`")))
}

fn tuple(line: &Line<'_>, column: usize, text: &str) -> Result<Vec<u16>, SyntaxError> {
    let lead = text.len() - text.trim_start().len();
    let text = text.trim();
    if text == "-" {
        return Ok(Vec::new());
    }
    let mut offset = column + lead;
    let mut out = Vec::new();
    for part in text.split(',') {
        let skip = part.len() - part.trim_start().len();
        out.push(number(line, offset + skip, part.trim(), "a value index")?);
        offset += part.len() + 1;
    }
    Ok(out)
}

/// Parses the text into an unvalidated net.
pub fn parse_raw(text: &str) -> Result<RawNet, SyntaxError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| Line { number: i + 1, text: l.split('#').next().unwrap_or("") })
        .filter(|l| !l.text.trim().is_empty());
    let last_line = text.lines().count().max(1);
    let eof = |what: &str| SyntaxError { line: last_line, column: 1, message: format!("unexpected end of input, expected {what}") };

    let header = lines.next().ok_or_else(|| eof("`cpnet <n>`"))?;
    let n: usize = match header.tokens().as_slice() {
        [(_, "cpnet"), (c, count)] => number(&header, *c, count, "a variable count")?,
        _ => return Err(header.error(1, "expected `cpnet <n>`")),
    };
    if n == 0 {
        return Err(header.error(7, "a net needs at least one variable"));
    }

    let domains = lines.next().ok_or_else(|| eof("`domains ...`"))?;
    let tokens = domains.tokens();
    if tokens.first().map(|t| t.1) != Some("domains") {
        return Err(domains.error(1, "expected `domains <n_1> ... <n_n>`"));
    }
    if tokens.len() != n + 1 {
        return Err(domains.error(1, format!("expected {n} domain sizes, found {}", tokens.len() - 1)));
    }
    let domain_sizes = tokens[1..]
        .iter()
        .map(|(c, t)| number(&domains, *c, t, "a domain size"))
        .collect::<Result<Vec<u16>, _>>()?;

    let mut adjacency = Vec::with_capacity(n);
    for i in 0..n {
        let row = lines.next().ok_or_else(|| eof("an adjacency row"))?;
        let tokens = row.tokens();
        if tokens.len() != n {
            return Err(row.error(1, format!("adjacency row {} must have {n} entries, found {}", i + 1, tokens.len())));
        }
        adjacency.push(
            tokens
                .iter()
                .map(|(c, t)| match *t {
                    "0" => Ok(false),
                    "1" => Ok(true),
                    other => Err(row.error(*c, format!("expected 0 or 1, found `{other}`"))),
                })
                .collect::<Result<Vec<bool>, _>>()?,
        );
    }

    let mut cpts: Vec<Option<Vec<CptRow>>> = vec![None; n];
    let mut current: Option<usize> = None;
    for line in lines {
        let tokens = line.tokens();
        if tokens.first().map(|t| t.1) == Some("cpt") {
            let var: usize = match tokens.as_slice() {
                [_, (c, t)] => number(&line, *c, t, "a variable number")?,
                _ => return Err(line.error(1, "expected `cpt <i>`")),
            };
            if var == 0 || var > n {
                return Err(line.error(tokens[1].0, format!("variable {var} out of range 1..={n}")));
            }
            if cpts[var - 1].is_some() {
                return Err(line.error(tokens[1].0, format!("second `cpt {var}` block")));
            }
            cpts[var - 1] = Some(Vec::new());
            current = Some(var - 1);
            continue;
        }
        let var = current.ok_or_else(|| line.error(1, "CPT row outside a `cpt <i>` block"))?;
        let colon = line.text.find(':').ok_or_else(|| line.error(1, "expected `<parents> : <positions>`"))?;
        let parents = tuple(&line, 1, &line.text[..colon])?;
        let positions = tuple(&line, colon + 2, &line.text[colon + 1..])?;
        cpts[var].as_mut().expect("block opened").push(CptRow { parents, positions });
    }
    let cpts = cpts
        .into_iter()
        .enumerate()
        .map(|(i, c)| c.ok_or_else(|| eof(&format!("a `cpt {}` block", i + 1))))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(RawNet { domain_sizes, adjacency, cpts })
}

/// Parses and validates.
pub fn parse(text: &str, mode: PreferenceMode) -> Result<CpNet, ParseError> {
    Ok(CpNet::new(parse_raw(text)?, mode)?)
}

fn join(values: &[u16]) -> String {
    if values.is_empty() {
        return "-".into();
    }
    values.iter().map(u16::to_string).collect::<Vec<_>>().join(",")
}

/// Canonical text form: rows ordered by parent assignment, no comments.
pub fn serialize(net: &CpNet) -> String {
    let raw = net.to_raw();
    let n = raw.domain_sizes.len();
    let mut out = String::new();
    writeln!(out, "cpnet {n}").unwrap();
    let sizes: Vec<String> = raw.domain_sizes.iter().map(u16::to_string).collect();
    writeln!(out, "domains {}", sizes.join(" ")).unwrap();
    for row in &raw.adjacency {
        let cells: Vec<&str> = row.iter().map(|&e| if e { "1" } else { "0" }).collect();
        writeln!(out, "{}", cells.join(" ")).unwrap();
    }
    for (i, rows) in raw.cpts.iter().enumerate() {
        writeln!(out, "cpt {}", i + 1).unwrap();
        for row in rows {
            writeln!(out, "{} : {}", join(&row.parents), join(&row.positions)).unwrap();
        }
    }
    out
}
