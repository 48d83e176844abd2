//! Plain-text instance files.
//!
//! ```text
//! # comment
//! 3 3
//! 0 1
//! 1 2
//! 2 0
//! w 0 3/2
//! ```
//!
//! The header is `n m`, followed by exactly `m` arc lines `u v` (arc `u -> v`).
//! Weight lines `w v p/q` may follow the arcs; vertices without one weigh 1.
//! Everything after `#` is ignored, as are blank lines.

use std::fmt::Write as _;

use thiserror::Error;

use crate::digraph::{Digraph, GraphError, Weight, Weighting, MAX_VERTICES};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormatErrorKind {
    #[error("expected {0}")]
    Syntax(&'static str),
    #[error("vertex {vertex} out of range for n = {n}")]
    OutOfRange { vertex: usize, n: usize },
    #[error("loop at {0}")]
    Loop(usize),
    #[error("digon {0}~{1}")]
    Digon(usize, usize),
    #[error("arc {0} -> {1} listed twice")]
    DuplicateArc(usize, usize),
    #[error("at most {MAX_VERTICES} vertices are supported, got {0}")]
    TooManyVertices(usize),
    #[error("header declares {declared} arcs, found {found}")]
    ArcCount { declared: usize, found: usize },
    #[error("bad weight: {0}")]
    Weight(String),
    #[error("weight for vertex {0} given twice")]
    DuplicateWeight(usize),
    #[error("arc line after weight lines")]
    ArcAfterWeights,
    #[error("missing header line")]
    MissingHeader,
}

/// A parse failure at a 1-based physical line.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {kind}")]
pub struct FormatError {
    pub line: usize,
    pub kind: FormatErrorKind,
}

fn at(line: usize, kind: FormatErrorKind) -> FormatError {
    FormatError { line, kind }
}

fn number(tok: Option<&str>, line: usize, what: &'static str) -> Result<usize, FormatError> {
    tok.and_then(|t| t.parse().ok()).ok_or_else(|| at(line, FormatErrorKind::Syntax(what)))
}

/// Parses an instance. The weighting is `Some` exactly when the file has weight lines.
pub fn parse_instance(text: &str) -> Result<(Digraph, Option<Weighting>), FormatError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, raw)| (i + 1, raw.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());

    let (hline, header) = lines.next().ok_or(at(text.lines().count().max(1), FormatErrorKind::MissingHeader))?;
    let mut toks = header.split_whitespace();
    let n = number(toks.next(), hline, "header \"n m\"")?;
    let m = number(toks.next(), hline, "header \"n m\"")?;
    if toks.next().is_some() {
        return Err(at(hline, FormatErrorKind::Syntax("header \"n m\"")));
    }
    let mut d = Digraph::empty(n).map_err(|_| at(hline, FormatErrorKind::TooManyVertices(n)))?;
    let mut weights: Option<Vec<Option<Weight>>> = None;
    let mut found = 0;
    let mut last = hline;

    for (line, content) in lines {
        last = line;
        let toks: Vec<&str> = content.split_whitespace().collect();
        if toks[0] == "w" {
            if toks.len() != 3 {
                return Err(at(line, FormatErrorKind::Syntax("weight line \"w v p/q\"")));
            }
            let v = number(Some(toks[1]), line, "weight line \"w v p/q\"")?;
            if v >= n {
                return Err(at(line, FormatErrorKind::OutOfRange { vertex: v, n }));
            }
            let w: Weight = toks[2].parse().map_err(|_| at(line, FormatErrorKind::Weight(toks[2].to_string())))?;
            if w < Weight::from_integer(0) {
                return Err(at(line, FormatErrorKind::Weight(toks[2].to_string())));
            }
            let slots = weights.get_or_insert_with(|| vec![None; n]);
            if slots[v].replace(w).is_some() {
                return Err(at(line, FormatErrorKind::DuplicateWeight(v)));
            }
            continue;
        }
        if weights.is_some() {
            return Err(at(line, FormatErrorKind::ArcAfterWeights));
        }
        if toks.len() != 2 {
            return Err(at(line, FormatErrorKind::Syntax("arc line \"u v\"")));
        }
        let u = number(Some(toks[0]), line, "arc line \"u v\"")?;
        let v = number(Some(toks[1]), line, "arc line \"u v\"")?;
        for x in [u, v] {
            if x >= n {
                return Err(at(line, FormatErrorKind::OutOfRange { vertex: x, n }));
            }
        }
        found += 1;
        if found > m {
            return Err(at(line, FormatErrorKind::ArcCount { declared: m, found }));
        }
        d.try_add_arc(u, v).map_err(|e| {
            at(
                line,
                match e {
                    GraphError::Loop(x) => FormatErrorKind::Loop(x),
                    GraphError::Digon(a, b) => FormatErrorKind::Digon(a, b),
                    _ => FormatErrorKind::DuplicateArc(u, v),
                },
            )
        })?;
    }
    if found != m {
        return Err(at(last, FormatErrorKind::ArcCount { declared: m, found }));
    }
    let weighting = weights.map(|slots| {
        let ws = slots.into_iter().map(|w| w.unwrap_or_else(|| Weight::from_integer(1))).collect();
        Weighting::new(ws).expect("weights checked nonnegative")
    });
    Ok((d, weighting))
}

/// Text form of an instance; `parse_instance` reads it back unchanged.
pub fn emit_instance(d: &Digraph, w: Option<&Weighting>) -> String {
    let mut out = format!("{} {}\n", d.n(), d.arc_count());
    for (u, v) in d.arcs() {
        let _ = writeln!(out, "{u} {v}");
    }
    if let Some(w) = w {
        for (v, x) in w.as_slice().iter().enumerate() {
            let _ = writeln!(out, "w {v} {}/{}", x.numer(), x.denom());
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forge::fixture;

    #[test]
    fn c3_text() {
        let (d, w) = parse_instance("3 3\n0 1\n1 2\n2 0\n").unwrap();
        assert_eq!(d, fixture("C3").unwrap());
        assert!(w.is_none());
    }

    #[test]
    fn digon_line() {
        let err = parse_instance("3 2\n0 1\n1 0\n").unwrap_err();
        assert_eq!(err, FormatError { line: 3, kind: FormatErrorKind::Digon(1, 0) });
    }

    #[test]
    fn weights_and_comments() {
        let text = "# tiny\n\n3 1  # header\n0 1\nw 0 3/2\n";
        let (d, w) = parse_instance(text).unwrap();
        assert_eq!(d.arc_count(), 1);
        let w = w.unwrap();
        assert_eq!(w.get(0), Weight::new(3, 2));
        assert_eq!(w.get(2), Weight::from_integer(1));
    }

    #[test]
    fn errors_carry_lines() {
        let cases = [
            ("2 1\n0 0\n", 2, FormatErrorKind::Loop(0)),
            ("2 1\n0 5\n", 2, FormatErrorKind::OutOfRange { vertex: 5, n: 2 }),
            ("2 2\n0 1\n", 2, FormatErrorKind::ArcCount { declared: 2, found: 1 }),
            ("2 0\nx y\n", 2, FormatErrorKind::Syntax("arc line \"u v\"")),
            ("2 1\n\n0 1\n0 1\n", 4, FormatErrorKind::ArcCount { declared: 1, found: 2 }),
            ("2 0\nw 0 -1\n", 2, FormatErrorKind::Weight("-1".into())),
            ("2 0\nw 0 1\nw 0 2\n", 3, FormatErrorKind::DuplicateWeight(0)),
        ];
        for (text, line, kind) in cases {
            assert_eq!(parse_instance(text).unwrap_err(), FormatError { line, kind }, "{text:?}");
        }
    }

    #[test]
    fn round_trip() {
        for name in crate::forge::FIXTURES {
            let d = fixture(name).unwrap();
            let w = Weighting::new((0..d.n()).map(|v| Weight::new(v as i64 + 1, 3)).collect()).unwrap();
            for w in [None, Some(&w)] {
                let text = emit_instance(&d, w);
                let (back, bw) = parse_instance(&text).unwrap();
                assert_eq!(back, d);
                assert_eq!(bw.as_ref(), w);
                assert_eq!(emit_instance(&back, bw.as_ref()), text);
            }
        }
    }
}
