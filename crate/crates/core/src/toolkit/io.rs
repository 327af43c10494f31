//! Text formats `mpm 1` (matrices) and `mpv 1` (vectors).
//!
//! ```text
//! mpm 1
//! 2
//! 0 -1
//! -1/2 -inf
//! ```

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::matrix::{MaxPlusMatrix, MaxPlusVector};
use crate::scalar::MaxPlus;

const MATRIX_MAGIC: &str = "mpm 1";
const VECTOR_MAGIC: &str = "mpv 1";

struct Lines<'a> {
    inner: std::iter::Enumerate<std::str::Lines<'a>>,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str) -> Self {
        Lines { inner: text.lines().enumerate() }
    }

    /// Next line with its 1-based number, or a dimension error.
    fn next(&mut self, what: &str) -> Result<(usize, &'a str)> {
        self.inner
            .next()
            .map(|(i, l)| (i + 1, l))
            .ok_or_else(|| Error::Dimension(format!("unexpected end of input while reading {what}")))
    }

    fn expect_end(&mut self) -> Result<()> {
        match self.inner.find(|(_, l)| !l.trim().is_empty()) {
            None => Ok(()),
            Some((i, _)) => Err(Error::Dimension(format!("unexpected content after the data on line {}", i + 1))),
        }
    }
}

/// Whitespace-separated tokens of a line with their 1-based columns.
fn tokens(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (col, (pos, ch)) in line.char_indices().enumerate() {
        match (ch.is_whitespace(), start) {
            (false, None) => start = Some((col, pos)),
            (true, Some((c, s))) => {
                out.push((c + 1, &line[s..pos]));
                start = None;
            }
            _ => {}
        }
    }
    if let Some((c, s)) = start {
        out.push((c + 1, &line[s..]));
    }
    out
}

fn header<'a>(lines: &mut Lines<'a>, magic: &str) -> Result<usize> {
    let (_, first) = lines.next("the magic line")?;
    let found = first.trim_end_matches('\r').trim();
    if found != magic {
        return Err(Error::MagicMismatch { expected: magic.to_string(), found: found.to_string() });
    }
    let (line, second) = lines.next("the dimension")?;
    let toks = tokens(second);
    let [(column, tok)] = toks.as_slice() else {
        return Err(Error::Parse { line, column: 1, message: "expected a single dimension".into() });
    };
    match tok.parse::<usize>() {
        Ok(n) if n > 0 => Ok(n),
        _ => Err(Error::Parse { line, column: *column, message: format!("invalid dimension `{tok}`") }),
    }
}

fn row(line: usize, text: &str, n: usize) -> Result<Vec<MaxPlus>> {
    let toks = tokens(text);
    if toks.len() != n {
        return Err(Error::Dimension(format!("line {line}: expected {n} entries, found {}", toks.len())));
    }
    toks.into_iter()
        .map(|(column, tok)| MaxPlus::parse_token(tok).map_err(|message| Error::Parse { line, column, message }))
        .collect()
}

pub fn parse_matrix(text: &str) -> Result<MaxPlusMatrix> {
    let mut lines = Lines::new(text);
    let n = header(&mut lines, MATRIX_MAGIC)?;
    let mut data = Vec::with_capacity(n * n);
    for r in 0..n {
        let (line, text) = lines.next(&format!("row {}", r + 1))?;
        data.extend(row(line, text, n)?);
    }
    lines.expect_end()?;
    MaxPlusMatrix::new(n, data)
}

pub fn parse_vector(text: &str) -> Result<MaxPlusVector> {
    let mut lines = Lines::new(text);
    let n = header(&mut lines, VECTOR_MAGIC)?;
    let (line, entries) = lines.next("the entries")?;
    let data = row(line, entries, n)?;
    lines.expect_end()?;
    MaxPlusVector::new(data)
}

fn join(entries: &[MaxPlus]) -> String {
    entries.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ")
}

pub fn serialize_matrix(a: &MaxPlusMatrix) -> String {
    let mut out = format!("{MATRIX_MAGIC}\n{}\n", a.dim());
    for r in a.rows() {
        let _ = writeln!(out, "{}", join(r));
    }
    out
}

pub fn serialize_vector(v: &MaxPlusVector) -> String {
    format!("{VECTOR_MAGIC}\n{}\n{}\n", v.len(), join(v.entries()))
}

pub fn read_matrix(path: &Path) -> Result<MaxPlusMatrix> {
    parse_matrix(&std::fs::read_to_string(path)?)
}

pub fn read_vector(path: &Path) -> Result<MaxPlusVector> {
    parse_vector(&std::fs::read_to_string(path)?)
}
