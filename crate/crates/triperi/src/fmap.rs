//! The `fmap 1` self-map format: a header line, then one `source target`
//! line per point of the space.

use std::fmt::Write as _;

use triperi_core::{FiniteSpace, PointRef, TableMap};

use crate::fms::{expect_header, syntax, tokenized_lines, FormatError};

/// Parses a map over `space`. Every point must appear exactly once as a source.
pub fn parse_fmap(text: &str, space: &FiniteSpace) -> Result<TableMap, FormatError> {
    let lines = tokenized_lines(text);
    let mut it = lines.iter();
    expect_header(&mut it, "fmap")?;

    let lookup = |tok: &crate::fms::Token<'_>| match space.index_of(tok.text) {
        Some(PointRef::Index(i)) => Ok(i),
        _ => Err(syntax(tok.line, tok.column, format!("unknown point `{}`", tok.text))),
    };

    let mut images: Vec<Option<usize>> = vec![None; space.len()];
    for (line, toks) in it {
        let [src, dst] = toks.as_slice() else {
            let col = toks.get(2).map(|t| t.column).unwrap_or(toks[0].column);
            return Err(syntax(*line, col, "expected `source target`"));
        };
        let s = lookup(src)?;
        let t = lookup(dst)?;
        if images[s].replace(t).is_some() {
            return Err(syntax(*line, src.column, format!("`{}` mapped twice", src.text)));
        }
    }
    let missing: Vec<&str> = images
        .iter()
        .zip(space.names())
        .filter(|(img, _)| img.is_none())
        .map(|(_, name)| name.as_str())
        .collect();
    if !missing.is_empty() {
        return Err(FormatError::Invalid(format!(
            "map is not total; no image for {}",
            missing.join(", ")
        )));
    }
    TableMap::new(images.into_iter().flatten().collect()).map_err(|e| FormatError::Invalid(e.to_string()))
}

pub fn write_fmap(map: &TableMap, space: &FiniteSpace) -> String {
    let names = space.names();
    let mut out = String::from("fmap 1\n");
    for (s, &t) in map.images().iter().enumerate() {
        let _ = writeln!(out, "{} {}", names[s], names[t]);
    }
    out
}
