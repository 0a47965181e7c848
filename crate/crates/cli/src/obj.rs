//! Import of closed triangle meshes from Wavefront OBJ files.

use std::collections::HashMap;

use discrete_curvature::conformal::delaunay_cot_sum;
use discrete_curvature::conformal::DELAUNAY_EPS;
use discrete_curvature::shapes::from_positions;
use discrete_curvature::{DiscreteMetric, MarkedSurface};

use crate::error::{CliError, Result};

/// A mesh converted to intrinsic lengths.
#[derive(Debug, Clone)]
pub struct Imported {
    pub surface: MarkedSurface,
    pub metric: DiscreteMetric,
    /// Edges violating the Delaunay condition as `(edge, i, j, cot sum)`.
    pub non_delaunay: Vec<(usize, usize, usize, f64)>,
}

fn obj_index(tok: &str, count: usize, line: usize, name: &str) -> Result<usize> {
    let err = |message: String| CliError::Parse { path: name.to_string(), line, message };
    // "v", "v/vt", "v//vn" and "v/vt/vn" all start with the vertex index.
    let head = tok.split('/').next().unwrap_or("");
    let k: i64 = head.parse().map_err(|_| err(format!("invalid vertex reference '{tok}'")))?;
    let idx = if k > 0 { k - 1 } else { count as i64 + k };
    if k == 0 || idx < 0 || idx >= count as i64 {
        return Err(err(format!("vertex reference {k} out of range ({count} vertices so far)")));
    }
    Ok(idx as usize)
}

/// Vertex positions and triangles of a mesh.
pub type Mesh = (Vec<[f64; 3]>, Vec<[usize; 3]>);

/// Parses vertex positions and triangles; other records are ignored.
pub fn parse_obj(text: &str, name: &str) -> Result<Mesh> {
    let mut positions = Vec::new();
    let mut faces = Vec::new();
    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        let l = raw.split('#').next().unwrap_or("");
        let mut tok = l.split_whitespace();
        match tok.next() {
            Some("v") => {
                let c: Vec<f64> = tok.take(3).map(str::parse).collect::<std::result::Result<_, _>>().map_err(|_| {
                    CliError::Parse { path: name.to_string(), line, message: "invalid vertex coordinates".into() }
                })?;
                if c.len() != 3 || c.iter().any(|x| !x.is_finite()) {
                    return Err(CliError::Parse {
                        path: name.to_string(),
                        line,
                        message: "vertex needs three finite coordinates".into(),
                    });
                }
                positions.push([c[0], c[1], c[2]]);
            }
            Some("f") => {
                let refs: Vec<&str> = tok.collect();
                if refs.len() != 3 {
                    return Err(CliError::Parse {
                        path: name.to_string(),
                        line,
                        message: format!("face with {} vertices; only triangles are supported", refs.len()),
                    });
                }
                let mut f = [0; 3];
                for (slot, r) in f.iter_mut().zip(&refs) {
                    *slot = obj_index(r, positions.len(), line, name)?;
                }
                faces.push(f);
            }
            _ => {}
        }
    }
    Ok((positions, faces))
}

/// Converts an OBJ mesh to a surface with edge lengths from vertex positions.
pub fn import_obj(text: &str, name: &str) -> Result<Imported> {
    let (positions, faces) = parse_obj(text, name)?;
    let mut uses: HashMap<(usize, usize), usize> = HashMap::new();
    for f in &faces {
        for s in 0..3 {
            let (a, b) = (f[s], f[(s + 1) % 3]);
            *uses.entry((a.min(b), a.max(b))).or_default() += 1;
        }
    }
    let mut boundary: Vec<_> = uses.iter().filter(|(_, &c)| c == 1).map(|(&k, _)| k).collect();
    boundary.sort_unstable();
    if let Some(&(a, b)) = boundary.first() {
        return Err(CliError::Usage(format!(
            "{name}: mesh has {} boundary edge(s); first is between OBJ vertices {} and {}",
            boundary.len(),
            a + 1,
            b + 1
        )));
    }
    let (surface, metric) = from_positions(&faces, &positions)?;
    let mut non_delaunay = Vec::new();
    for e in 0..surface.num_edges() {
        let cot = delaunay_cot_sum(&surface, &metric, e)?;
        if cot < -DELAUNAY_EPS {
            let (i, j) = surface.edge_endpoints(e);
            non_delaunay.push((e, i, j, cot));
        }
    }
    Ok(Imported { surface, metric, non_delaunay })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::exit;

    const TETRA: &str = "# tetrahedron\nv 1 1 1\nv 1 -1 -1\nv -1 1 -1\nv -1 -1 1\n\
        f 1 2 3\nf 1 4 2\nf 1 3 4\nf 2 4 3\n";

    #[test]
    fn tetrahedron_has_equal_lengths() {
        let m = import_obj(TETRA, "t").unwrap();
        let l0 = m.metric.length(0);
        assert!((l0 - 8f64.sqrt()).abs() < 1e-15);
        assert!(m.metric.lengths().iter().all(|&l| (l - l0).abs() < 1e-15));
        assert!(m.non_delaunay.is_empty());
    }

    #[test]
    fn face_references_with_slashes_and_negatives() {
        let text = TETRA.replace("f 1 2 3", "f -4/1 2//3 3/1/1");
        assert!(import_obj(&text, "t").is_ok());
    }

    #[test]
    fn boundary_is_named() {
        let open = TETRA.replace("f 2 4 3\n", "");
        let e = import_obj(&open, "open").unwrap_err();
        assert_eq!(e.exit_code(), exit::USAGE);
        let msg = e.to_string();
        assert!(msg.contains("boundary") && msg.contains("vertices 2 and 3"), "{msg}");
    }

    #[test]
    fn quads_are_rejected() {
        let e = import_obj("v 0 0 0\nv 1 0 0\nv 1 1 0\nv 0 1 0\nf 1 2 3 4\n", "q").unwrap_err();
        assert!(e.to_string().contains("line 5") && e.to_string().contains("triangles"));
    }

    #[test]
    fn non_delaunay_edges_are_reported() {
        // Flat triangular bipyramid: the apex angles over the equator approach 120 degrees.
        let text = "v 1 0 0\nv -0.5 0.8660254037844386 0\nv -0.5 -0.8660254037844386 0\n\
            v 0 0 0.2\nv 0 0 -0.2\nf 1 2 4\nf 2 3 4\nf 3 1 4\nf 2 1 5\nf 3 2 5\nf 1 3 5\n";
        let m = import_obj(text, "s").unwrap();
        assert_eq!(m.non_delaunay.len(), 3);
    }
}
