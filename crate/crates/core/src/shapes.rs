//! Small reference surfaces.

use crate::conformal::DiscreteMetric;
use crate::error::Result;
use crate::surface::MarkedSurface;

/// Faces of the combinatorial tetrahedron on vertices 0..4.
pub const TETRAHEDRON_FACES: [[usize; 3]; 4] = [[0, 1, 2], [0, 3, 1], [0, 2, 3], [1, 3, 2]];

/// Faces of the octahedron with vertices `+x, -x, +y, -y, +z, -z`.
pub const OCTAHEDRON_FACES: [[usize; 3]; 8] =
    [[0, 2, 4], [2, 1, 4], [1, 3, 4], [3, 0, 4], [2, 0, 5], [1, 2, 5], [3, 1, 5], [0, 3, 5]];

/// Unit vertex positions matching [`OCTAHEDRON_FACES`].
pub const OCTAHEDRON_POSITIONS: [[f64; 3]; 6] =
    [[1.0, 0.0, 0.0], [-1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, -1.0, 0.0], [0.0, 0.0, 1.0], [0.0, 0.0, -1.0]];

/// Positions of a regular tetrahedron with unit edges, matching
/// [`TETRAHEDRON_FACES`] (outward orientation).
pub fn tetrahedron_positions() -> [[f64; 3]; 4] {
    let s = 0.5 / 2f64.sqrt();
    [[s, s, s], [s, -s, -s], [-s, s, -s], [-s, -s, s]]
}

/// Regular tetrahedron with unit edge lengths.
pub fn regular_tetrahedron() -> (MarkedSurface, DiscreteMetric) {
    let s = MarkedSurface::from_faces(4, &TETRAHEDRON_FACES).expect("tetrahedron faces");
    let m = DiscreteMetric::new(&s, vec![1.0; 6]).expect("unit tetrahedron");
    (s, m)
}

/// Regular octahedron with unit edge lengths.
pub fn regular_octahedron() -> (MarkedSurface, DiscreteMetric) {
    let s = MarkedSurface::from_faces(6, &OCTAHEDRON_FACES).expect("octahedron faces");
    let m = DiscreteMetric::new(&s, vec![1.0; s.num_edges()]).expect("unit octahedron");
    (s, m)
}

/// Two unit squares glued along their boundary. The top square is split by the
/// diagonal 0-2, the bottom one by 1-3, so both diagonals sit exactly on the
/// Delaunay boundary (opposite angles pi/2).
pub fn square_pillow() -> (MarkedSurface, DiscreteMetric) {
    let s = MarkedSurface::from_faces(4, &[[0, 1, 2], [0, 2, 3], [1, 0, 3], [1, 3, 2]]).expect("pillow faces");
    let lengths = (0..s.num_edges())
        .map(|e| {
            let (p, q) = s.edge_endpoints(e);
            if (p + 2) % 4 == q || (q + 2) % 4 == p {
                2f64.sqrt()
            } else {
                1.0
            }
        })
        .collect();
    let m = DiscreteMetric::new(&s, lengths).expect("pillow metric");
    (s, m)
}

/// Flat `n x m` grid torus (n, m >= 3) with unit squares split along one
/// diagonal. Vertex `(i, j)` has index `i * m + j`.
pub fn grid_torus(n: usize, m: usize) -> (MarkedSurface, DiscreteMetric) {
    assert!(n >= 3 && m >= 3, "grid torus needs at least 3x3 vertices");
    let idx = |i: usize, j: usize| (i % n) * m + (j % m);
    let mut faces = Vec::with_capacity(2 * n * m);
    for i in 0..n {
        for j in 0..m {
            let (a, b, c, d) = (idx(i, j), idx(i + 1, j), idx(i + 1, j + 1), idx(i, j + 1));
            faces.push([a, b, c]);
            faces.push([a, c, d]);
        }
    }
    let s = MarkedSurface::from_faces(n * m, &faces).expect("grid torus faces");
    let lengths = (0..s.num_edges())
        .map(|e| {
            let (p, q) = s.edge_endpoints(e);
            let (di, dj) = ((p / m).abs_diff(q / m), (p % m).abs_diff(q % m));
            let diagonal = di != 0 && dj != 0;
            if diagonal {
                2f64.sqrt()
            } else {
                1.0
            }
        })
        .collect();
    let metric = DiscreteMetric::new(&s, lengths).expect("grid torus metric");
    (s, metric)
}

/// Builds a surface with edge lengths measured between 3D vertex positions.
pub fn from_positions(faces: &[[usize; 3]], positions: &[[f64; 3]]) -> Result<(MarkedSurface, DiscreteMetric)> {
    let s = MarkedSurface::from_faces(positions.len(), faces)?;
    let lengths = (0..s.num_edges())
        .map(|e| {
            let (p, q) = s.edge_endpoints(e);
            distance(&positions[p], &positions[q])
        })
        .collect();
    let m = DiscreteMetric::new(&s, lengths)?;
    Ok((s, m))
}

pub fn distance(p: &[f64; 3], q: &[f64; 3]) -> f64 {
    let d = [p[0] - q[0], p[1] - q[1], p[2] - q[2]];
    (d[0] * d[0] + d[1] * d[1] + d[2] * d[2]).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_counts() {
        let (t, _) = regular_tetrahedron();
        assert_eq!(t.euler_characteristic(), 2);
        let (o, _) = regular_octahedron();
        assert_eq!((o.num_vertices(), o.num_edges(), o.num_faces()), (6, 12, 8));
        let (p, _) = square_pillow();
        assert_eq!(p.euler_characteristic(), 2);
        let (g, _) = grid_torus(3, 4);
        assert_eq!((g.num_vertices(), g.num_edges(), g.num_faces()), (12, 36, 24));
        assert_eq!(g.euler_characteristic(), 0);
    }

    #[test]
    fn tetrahedron_positions_have_unit_edges() {
        let (_, m) = from_positions(&TETRAHEDRON_FACES, &tetrahedron_positions()).unwrap();
        assert!(m.lengths().iter().all(|&l| (l - 1.0).abs() < 1e-15));
    }

    #[test]
    fn octahedron_positions_match_unit_scaled() {
        let (_, m) = from_positions(&OCTAHEDRON_FACES, &OCTAHEDRON_POSITIONS).unwrap();
        assert!(m.lengths().iter().all(|&l| (l - 2f64.sqrt()).abs() < 1e-15));
    }
}
