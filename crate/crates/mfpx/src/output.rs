//! The text report and its inverse.

use std::fmt::Write;

use mfp_core::{Polytope, RationalPoint, Scalar};

use crate::parse::{ParseError, ParseErrorKind};
use crate::pipeline::Report;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Emit {
    Vertices,
    Facets,
    #[default]
    Both,
    Count,
}

fn point(p: &RationalPoint) -> String {
    let cs: Vec<String> = p.coords().iter().map(Scalar::to_string).collect();
    format!("({})", cs.join(","))
}

/// The deterministic part of a report. Timings are left out.
pub fn format_report(r: &Report, emit: Emit) -> String {
    let mut out = String::new();
    writeln!(out, "dim {}", r.polytope.dim()).unwrap();
    if matches!(emit, Emit::Vertices | Emit::Both) {
        let mut vs = r.polytope.vertices().to_vec();
        vs.sort();
        for v in &vs {
            writeln!(out, "vertex {}", point(v)).unwrap();
        }
    }
    if matches!(emit, Emit::Facets | Emit::Both) {
        let mut fs = r.polytope.facets().to_vec();
        fs.sort();
        for f in &fs {
            writeln!(out, "facet {f}").unwrap();
        }
    }
    if let Some(n) = r.lattice_count {
        writeln!(out, "lattice_count {n}").unwrap();
    }
    writeln!(out, "oracle_calls {}", r.oracle_calls).unwrap();
    writeln!(out, "subdivisions {}", r.subdivisions).unwrap();
    out
}

/// Rebuilds the polytope from the `vertex` lines of a report.
pub fn read_vertices(text: &str) -> Result<Polytope, ParseError> {
    let mut pts = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let Some(rest) = line.strip_prefix("vertex ") else {
            continue;
        };
        let err = |msg: &str| ParseError { line: i + 1, col: 8, kind: ParseErrorKind::Syntax(msg.into()) };
        let inner = rest.trim().strip_prefix('(').and_then(|s| s.strip_suffix(')')).ok_or_else(|| err("expected `(...)`"))?;
        let coords = inner
            .split(',')
            .map(|t| t.trim().parse::<Scalar>().map_err(|_| err("bad coordinate")))
            .collect::<Result<Vec<_>, _>>()?;
        pts.push(RationalPoint::new(coords));
    }
    if pts.is_empty() {
        return Err(ParseError { line: 1, col: 1, kind: ParseErrorKind::Syntax("no vertex lines".into()) });
    }
    Polytope::dual_description(&pts).map_err(|e| ParseError { line: 1, col: 1, kind: ParseErrorKind::Syntax(e.to_string()) })
}
