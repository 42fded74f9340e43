//! The `fms 1` finite-space format.
//!
//! ```text
//! fms 1
//! points 3
//! x y z
//! exact
//! 0 1 1
//! 1 0 1
//! 1 1 0
//! ```
//!
//! Tokens are whitespace separated; blank lines are ignored. Entries may be
//! integers, `num/den` rationals, or decimals. In exact mode decimals are
//! read at their exact value.

use std::fmt::Write as _;

use thiserror::Error;
use triperi_core::{verify_metric_axioms, FiniteSpace, NumericMode, Scalar};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FormatError {
    #[error("line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{0}")]
    Invalid(String),
}

/// A token with its 1-based position.
#[derive(Clone, Copy, Debug)]
pub(crate) struct Token<'a> {
    pub text: &'a str,
    pub line: usize,
    pub column: usize,
}

pub(crate) fn syntax(line: usize, column: usize, message: impl Into<String>) -> FormatError {
    FormatError::Syntax {
        line,
        column,
        message: message.into(),
    }
}

/// Non-blank lines, each split into positioned tokens.
pub(crate) fn tokenized_lines(text: &str) -> Vec<(usize, Vec<Token<'_>>)> {
    text.lines()
        .enumerate()
        .filter_map(|(idx, raw)| {
            let mut tokens = Vec::new();
            let mut start = None;
            for (pos, ch) in raw.char_indices().chain(std::iter::once((raw.len(), ' '))) {
                match (ch.is_whitespace(), start) {
                    (false, None) => start = Some(pos),
                    (true, Some(s)) => {
                        tokens.push(Token {
                            text: &raw[s..pos],
                            line: idx + 1,
                            column: raw[..s].chars().count() + 1,
                        });
                        start = None;
                    }
                    _ => {}
                }
            }
            (!tokens.is_empty()).then_some((idx + 1, tokens))
        })
        .collect()
}

pub(crate) fn expect_header(
    lines: &mut std::slice::Iter<'_, (usize, Vec<Token<'_>>)>,
    magic: &str,
) -> Result<(), FormatError> {
    let (line, toks) = lines
        .next()
        .ok_or_else(|| syntax(1, 1, format!("missing `{magic} 1` header")))?;
    match toks.as_slice() {
        [m, v] if m.text == magic && v.text == "1" => Ok(()),
        [m, v] if m.text == magic => Err(syntax(*line, v.column, format!("unsupported version `{}`", v.text))),
        [t, ..] => Err(syntax(*line, t.column, format!("expected `{magic} 1` header"))),
        [] => unreachable!("blank lines are filtered"),
    }
}

/// Parses the file without checking the metric axioms.
pub fn parse_fms(text: &str) -> Result<FiniteSpace, FormatError> {
    let lines = tokenized_lines(text);
    let mut it = lines.iter();
    expect_header(&mut it, "fms")?;

    let end_line = lines.last().map(|(l, _)| *l + 1).unwrap_or(1);
    let mut next = |what: &str| {
        it.next()
            .ok_or_else(|| syntax(end_line, 1, format!("unexpected end of file, expected {what}")))
    };

    let (line, toks) = next("`points <n>`")?;
    let n = match toks.as_slice() {
        [kw, count] if kw.text == "points" => count
            .text
            .parse::<usize>()
            .ok()
            .filter(|&n| n > 0)
            .ok_or_else(|| syntax(*line, count.column, "point count must be a positive integer"))?,
        [t, ..] => return Err(syntax(*line, t.column, "expected `points <n>`")),
        [] => unreachable!(),
    };

    let (line, toks) = next("point names")?;
    if toks.len() != n {
        let col = toks.get(n).map(|t| t.column).unwrap_or(1);
        return Err(syntax(
            *line,
            col,
            format!("expected {n} point names, found {}", toks.len()),
        ));
    }
    let names: Vec<String> = toks.iter().map(|t| t.text.to_string()).collect();
    for (i, t) in toks.iter().enumerate() {
        if names[..i].contains(&names[i]) {
            return Err(syntax(*line, t.column, format!("duplicate point name `{}`", t.text)));
        }
    }

    let (line, toks) = next("`exact` or `float`")?;
    let mode = match toks.as_slice() {
        [m] if m.text == "exact" => NumericMode::Exact,
        [m] if m.text == "float" => NumericMode::Float,
        [t, ..] => return Err(syntax(*line, t.column, "expected `exact` or `float`")),
        [] => unreachable!(),
    };

    let mut rows = Vec::with_capacity(n);
    for r in 0..n {
        let (line, toks) = next(&format!("matrix row {}", r + 1))?;
        if toks.len() != n {
            let col = toks.get(n).map(|t| t.column).unwrap_or(1);
            return Err(syntax(
                *line,
                col,
                format!("expected {n} entries, found {}", toks.len()),
            ));
        }
        let row = toks
            .iter()
            .map(|t| Scalar::parse(t.text, mode).map_err(|e| syntax(*line, t.column, e.to_string())))
            .collect::<Result<Vec<_>, _>>()?;
        rows.push(row);
    }
    if let Some((line, toks)) = it.next() {
        return Err(syntax(*line, toks[0].column, "unexpected content after the matrix"));
    }
    FiniteSpace::new(names, rows, mode).map_err(|e| FormatError::Invalid(e.to_string()))
}

/// Parses the file and rejects matrices that are not metrics.
pub fn load_fms(text: &str) -> Result<FiniteSpace, FormatError> {
    let space = parse_fms(text)?;
    let report = verify_metric_axioms(&space, None).map_err(|e| FormatError::Invalid(e.to_string()))?;
    match report.violation {
        None => Ok(space),
        Some(v) => Err(FormatError::Invalid(format!("not a metric: {}", v.describe(&space)))),
    }
}

pub fn write_fms(space: &FiniteSpace) -> String {
    let n = space.len();
    let mut out = String::new();
    let _ = writeln!(out, "fms 1");
    let _ = writeln!(out, "points {n}");
    let _ = writeln!(out, "{}", space.names().join(" "));
    let _ = writeln!(out, "{}", space_mode(space));
    for i in 0..n {
        let row: Vec<String> = (0..n).map(|j| space.entry(i, j).to_string()).collect();
        let _ = writeln!(out, "{}", row.join(" "));
    }
    out
}

fn space_mode(space: &FiniteSpace) -> NumericMode {
    triperi_core::MetricSpace::mode(space)
}
