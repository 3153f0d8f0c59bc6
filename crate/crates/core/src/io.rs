//! The ideal file format: a header line `ring p=<prime> n=<nvars>`, one
//! polynomial per line in canonical text form, `#` starting comment lines.

use crate::error::{Error, Result};
use crate::gb::Ideal;
use crate::ring::{parse_polynomial, Ring};

pub fn parse_ideal_file(text: &str) -> Result<Ideal> {
    let mut ring: Option<Ring> = None;
    let mut gens = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if ring.is_none() {
            ring = Some(parse_header(line, lineno + 1)?);
            continue;
        }
        let r = ring.as_ref().unwrap();
        let poly = parse_polynomial(r, line).map_err(|e| match e {
            Error::Parse { column, message } => Error::ParseFile { line: lineno + 1, column, message },
            other => other,
        })?;
        gens.push(poly);
    }
    let ring = ring.ok_or(Error::ParseFile {
        line: 1,
        column: 1,
        message: "missing 'ring p=<prime> n=<nvars>' header".into(),
    })?;
    Ideal::new(ring, gens)
}

fn parse_header(line: &str, lineno: usize) -> Result<Ring> {
    let err = |msg: &str| Error::ParseFile { line: lineno, column: 1, message: msg.to_string() };
    let rest = line.strip_prefix("ring").ok_or_else(|| err("expected 'ring p=... n=...'"))?;
    let mut p: Option<u32> = None;
    let mut n: Option<usize> = None;
    for tok in rest.split_whitespace() {
        if let Some(v) = tok.strip_prefix("p=") {
            p = Some(v.parse().map_err(|_| err("bad prime"))?);
        } else if let Some(v) = tok.strip_prefix("n=") {
            n = Some(v.parse().map_err(|_| err("bad variable count"))?);
        } else {
            return Err(err(&format!("unexpected token '{}'", tok)));
        }
    }
    match (p, n) {
        (Some(p), Some(n)) => Ring::new(p, n),
        _ => Err(err("header needs both p= and n=")),
    }
}

/// Canonical text with trailing provenance comments.
pub fn format_ideal_file(ideal: &Ideal, provenance: &[String]) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "ring p={} n={}\n",
        ideal.ring().modulus(),
        ideal.ring().nvars()
    ));
    for g in ideal.generators() {
        out.push_str(&g.to_string());
        out.push('\n');
    }
    for line in provenance {
        out.push_str(&format!("# {}\n", line));
    }
    out
}
