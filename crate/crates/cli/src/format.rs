//! The `plfsurf` text format for triangulated surfaces with intrinsic lengths.
//!
//! ```text
//! plfsurf 1
//! vertices 4
//! # optional explicit edges: e <id> <i> <j>
//! f 0 1 2          # or: f i j k e_ij e_jk e_ki
//! len 0 1.0        # by edge id
//! len 2 3 1.0      # or by endpoints when they name a single edge
//! ```
//!
//! Indices are 0-based. Faces list vertices counter-clockwise. Either every face
//! carries edge ids (needed for loops and multi-edges) or none does, in which
//! case edges are matched by endpoints and numbered by first appearance.
//! `#` starts a comment. Serialization writes the canonical form: all `e`
//! records, faces with edge ids, then `len <id> <value>` records.

use std::fmt::Write as _;

use discrete_curvature::{DiscreteMetric, MarkedSurface};

use crate::error::{CliError, Result};

pub const HEADER: &str = "plfsurf 1";

/// A parsed surface file.
#[derive(Debug, Clone, PartialEq)]
pub struct SurfaceFile {
    pub surface: MarkedSurface,
    pub metric: DiscreteMetric,
}

enum LengthKey {
    Edge(usize),
    Pair(usize, usize),
}

struct Parser<'a> {
    name: &'a str,
}

impl Parser<'_> {
    fn err(&self, line: usize, message: impl Into<String>) -> CliError {
        CliError::Parse { path: self.name.to_string(), line, message: message.into() }
    }

    fn index(&self, line: usize, tok: &str, what: &str) -> Result<usize> {
        tok.parse().map_err(|_| self.err(line, format!("invalid {what} '{tok}'")))
    }

    fn length(&self, line: usize, tok: &str) -> Result<f64> {
        match tok.parse::<f64>() {
            Ok(x) if x.is_finite() && x > 0.0 => Ok(x),
            _ => Err(self.err(line, format!("length '{tok}' is not a positive decimal"))),
        }
    }
}

/// Parses a surface file; `name` is used in error messages.
pub fn parse(text: &str, name: &str) -> Result<SurfaceFile> {
    let p = Parser { name };
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(k, l)| (k + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());

    let Some((line, header)) = lines.next() else {
        return Err(p.err(1, "empty file"));
    };
    if header.split_whitespace().collect::<Vec<_>>() != ["plfsurf", "1"] {
        return Err(p.err(line, format!("expected header '{HEADER}'")));
    }
    let Some((line, vline)) = lines.next() else {
        return Err(p.err(line, "missing 'vertices' record"));
    };
    let n = match vline.split_whitespace().collect::<Vec<_>>()[..] {
        ["vertices", count] => p.index(line, count, "vertex count")?,
        _ => return Err(p.err(line, "expected 'vertices <count>'")),
    };

    let mut edges: Vec<(usize, usize, usize, usize)> = Vec::new();
    let mut faces = Vec::new();
    let mut face_edges: Vec<Option<[usize; 3]>> = Vec::new();
    let mut face_lines = Vec::new();
    let mut lengths: Vec<(usize, LengthKey, f64)> = Vec::new();
    for (line, l) in lines {
        let tok: Vec<&str> = l.split_whitespace().collect();
        let vertex = |t: &str| -> Result<usize> {
            let v = p.index(line, t, "vertex index")?;
            if v >= n {
                return Err(p.err(line, format!("vertex {v} out of range (vertices {n})")));
            }
            Ok(v)
        };
        match tok[..] {
            ["e", id, i, j] => {
                edges.push((line, p.index(line, id, "edge id")?, vertex(i)?, vertex(j)?));
            }
            ["f", i, j, k] => {
                faces.push([vertex(i)?, vertex(j)?, vertex(k)?]);
                face_edges.push(None);
                face_lines.push(line);
            }
            ["f", i, j, k, a, b, c] => {
                faces.push([vertex(i)?, vertex(j)?, vertex(k)?]);
                let id = |t| p.index(line, t, "edge id");
                face_edges.push(Some([id(a)?, id(b)?, id(c)?]));
                face_lines.push(line);
            }
            ["len", id, value] => {
                lengths.push((line, LengthKey::Edge(p.index(line, id, "edge id")?), p.length(line, value)?));
            }
            ["len", i, j, value] => {
                lengths.push((line, LengthKey::Pair(vertex(i)?, vertex(j)?), p.length(line, value)?));
            }
            [kw, ..] if ["e", "f", "len"].contains(&kw) => {
                return Err(p.err(line, format!("wrong number of fields in '{kw}' record")));
            }
            _ => return Err(p.err(line, format!("unknown record '{}'", tok[0]))),
        }
    }
    if faces.is_empty() {
        return Err(p.err(text.lines().count().max(1), "no faces"));
    }

    let explicit = face_edges.iter().filter(|f| f.is_some()).count();
    let surface = if explicit == faces.len() {
        let fe: Vec<[usize; 3]> = face_edges.into_iter().flatten().collect();
        MarkedSurface::from_glued_faces(n, &faces, &fe)?
    } else if explicit == 0 {
        if let Some(&(line, ..)) = edges.first() {
            return Err(p.err(line, "'e' records require edge ids on every face"));
        }
        MarkedSurface::from_faces(n, &faces)?
    } else {
        let line = face_lines[face_edges.iter().position(|f| f.is_none()).unwrap_or(0)];
        return Err(p.err(line, "either every face or no face must carry edge ids"));
    };

    let ne = surface.num_edges();
    let mut seen_edges = vec![false; ne];
    for &(line, id, i, j) in &edges {
        if id >= ne {
            return Err(p.err(line, format!("edge id {id} out of range (edges {ne})")));
        }
        if std::mem::replace(&mut seen_edges[id], true) {
            return Err(p.err(line, format!("duplicate record for edge {id}")));
        }
        let (a, b) = surface.edge_endpoints(id);
        if (a.min(b), a.max(b)) != (i.min(j), i.max(j)) {
            return Err(p.err(line, format!("edge {id} joins {a} and {b} in the faces, not {i} and {j}")));
        }
    }

    let mut values: Vec<Option<f64>> = vec![None; ne];
    for (line, key, value) in lengths {
        let id = match key {
            LengthKey::Edge(id) if id < ne => id,
            LengthKey::Edge(id) => {
                return Err(p.err(line, format!("edge id {id} out of range (edges {ne})")));
            }
            LengthKey::Pair(i, j) => {
                let matches: Vec<usize> = (0..ne)
                    .filter(|&e| {
                        let (a, b) = surface.edge_endpoints(e);
                        (a.min(b), a.max(b)) == (i.min(j), i.max(j))
                    })
                    .collect();
                match matches[..] {
                    [e] => e,
                    [] => return Err(p.err(line, format!("no edge joins {i} and {j}"))),
                    _ => return Err(p.err(line, format!("{} edges join {i} and {j}; use an edge id", matches.len()))),
                }
            }
        };
        if values[id].replace(value).is_some() {
            return Err(p.err(line, format!("duplicate length for edge {id}")));
        }
    }
    let lengths = values
        .iter()
        .enumerate()
        .map(|(e, v)| {
            v.ok_or_else(|| {
                let (a, b) = surface.edge_endpoints(e);
                CliError::Usage(format!("{name}: no length given for edge {e} ({a}-{b})"))
            })
        })
        .collect::<Result<Vec<f64>>>()?;
    let metric = DiscreteMetric::new(&surface, lengths)?;
    Ok(SurfaceFile { surface, metric })
}

/// Canonical text form. Parsing the output and serializing again reproduces
/// it byte for byte.
pub fn serialize(surface: &MarkedSurface, metric: &DiscreteMetric) -> String {
    // Orient every edge record like the first face side that uses it, which is
    // the orientation a parser assigns.
    let ne = surface.num_edges();
    let mut first: Vec<Option<(usize, usize)>> = vec![None; ne];
    for f in 0..surface.num_faces() {
        for h in surface.face_half_edges(f) {
            let e = surface.edge_of(h);
            if first[e].is_none() {
                first[e] = Some((surface.origin(h), surface.dest(h)));
            }
        }
    }
    let mut out = String::new();
    let _ = writeln!(out, "{HEADER}");
    let _ = writeln!(out, "vertices {}", surface.num_vertices());
    for (e, ends) in first.iter().enumerate() {
        let (i, j) = ends.unwrap_or_else(|| surface.edge_endpoints(e));
        let _ = writeln!(out, "e {e} {i} {j}");
    }
    for f in 0..surface.num_faces() {
        let [i, j, k] = surface.face_vertices(f);
        let [a, b, c] = surface.face_edges(f);
        let _ = writeln!(out, "f {i} {j} {k} {a} {b} {c}");
    }
    for (e, l) in metric.lengths().iter().enumerate() {
        let _ = writeln!(out, "len {e} {l}");
    }
    out
}
