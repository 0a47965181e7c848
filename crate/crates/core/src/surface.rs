//! Closed oriented triangulated surfaces with marked points.
//!
//! Half-edges are stored in pairs: edge `e` owns half-edges `2e` and `2e + 1`,
//! so `twin(h) = h ^ 1` and edge ids survive flips. Loops and multi-edges are
//! ordinary edges here; vertex-pair keys never identify an edge.

use std::collections::{HashMap, VecDeque};

use crate::error::{Error, Result};

/// Combinatorics of a closed oriented triangulated surface.
///
/// Immutable through its public API except for [`MarkedSurface::flip_in_place`],
/// which keeps every invariant checked at construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MarkedSurface {
    num_vertices: usize,
    origin: Vec<usize>,
    next: Vec<usize>,
    face: Vec<usize>,
    face_half_edge: Vec<usize>,
}

impl MarkedSurface {
    /// Builds a surface from oriented vertex triples, matching sides that share
    /// an unordered vertex pair. Every pair must occur in exactly two sides.
    ///
    /// Edge ids are assigned in order of first appearance. Use
    /// [`MarkedSurface::from_glued_faces`] when two sides with the same endpoints
    /// must stay distinct edges.
    pub fn from_faces(num_vertices: usize, faces: &[[usize; 3]]) -> Result<Self> {
        if faces.is_empty() {
            return Err(Error::EmptySurface);
        }
        let mut ids: HashMap<(usize, usize), usize> = HashMap::new();
        let mut slots: Vec<usize> = Vec::new();
        let mut face_edges = Vec::with_capacity(faces.len());
        for tri in faces {
            let mut sides = [0; 3];
            for (s, side) in sides.iter_mut().enumerate() {
                let (p, q) = (tri[s], tri[(s + 1) % 3]);
                let key = (p.min(q), p.max(q));
                let next_id = ids.len();
                let id = *ids.entry(key).or_insert(next_id);
                if id == slots.len() {
                    slots.push(0);
                }
                slots[id] += 1;
                *side = id;
            }
            face_edges.push(sides);
        }
        for (&(p, q), &id) in &ids {
            if slots[id] != 2 {
                return Err(Error::NonManifoldEdge { edge: format!("{p}-{q}"), slots: slots[id] });
            }
        }
        Self::from_glued_faces(num_vertices, faces, &face_edges)
    }

    /// Builds a surface from oriented vertex triples and explicit edge ids for
    /// every side. Side `s` of face `f` runs from `faces[f][s]` to
    /// `faces[f][(s + 1) % 3]` and belongs to edge `face_edges[f][s]`.
    ///
    /// Edge ids must be exactly `0..num_edges`, each used by two sides that
    /// traverse it in opposite directions.
    pub fn from_glued_faces(num_vertices: usize, faces: &[[usize; 3]], face_edges: &[[usize; 3]]) -> Result<Self> {
        if faces.is_empty() {
            return Err(Error::EmptySurface);
        }
        if face_edges.len() != faces.len() {
            return Err(Error::LengthMismatch {
                what: "face edge triples",
                expected: faces.len(),
                got: face_edges.len(),
            });
        }
        for &v in faces.iter().flatten() {
            if v >= num_vertices {
                return Err(Error::VertexOutOfRange { vertex: v, count: num_vertices });
            }
        }

        let num_edges = face_edges.iter().flatten().max().map_or(0, |&m| m + 1);
        let mut slots: Vec<Vec<(usize, usize)>> = vec![Vec::new(); num_edges];
        for (f, sides) in face_edges.iter().enumerate() {
            for (s, &e) in sides.iter().enumerate() {
                slots[e].push((f, s));
            }
        }

        let n_half = 2 * num_edges;
        let mut origin = vec![0; n_half];
        let mut next = vec![0; n_half];
        let mut face = vec![0; n_half];
        let mut half = vec![[0usize; 3]; faces.len()];
        for (e, uses) in slots.iter().enumerate() {
            if uses.len() != 2 {
                return Err(Error::NonManifoldEdge { edge: e.to_string(), slots: uses.len() });
            }
            let side = |(f, s): (usize, usize)| (faces[f][s], faces[f][(s + 1) % 3]);
            let (p1, q1) = side(uses[0]);
            let (p2, q2) = side(uses[1]);
            if p1 != q2 || q1 != p2 {
                if p1 == p2 && q1 == q2 {
                    return Err(Error::OrientationMismatch { edge: format!("{e} ({p1}-{q1})") });
                }
                return Err(Error::EdgeEndpointMismatch { edge: e });
            }
            for (k, &(f, s)) in uses.iter().enumerate() {
                half[f][s] = 2 * e + k;
            }
        }
        for (f, tri) in faces.iter().enumerate() {
            for s in 0..3 {
                let h = half[f][s];
                origin[h] = tri[s];
                next[h] = half[f][(s + 1) % 3];
                face[h] = f;
            }
        }

        let surface =
            MarkedSurface { num_vertices, origin, next, face, face_half_edge: half.iter().map(|h| h[0]).collect() };
        surface.check_vertex_links()?;
        surface.check_connected()?;
        Ok(surface)
    }

    /// Every vertex label must correspond to exactly one cycle of corners.
    fn check_vertex_links(&self) -> Result<()> {
        let mut seen = vec![false; self.num_half_edges()];
        let mut cycles = vec![0usize; self.num_vertices];
        for start in 0..self.num_half_edges() {
            if seen[start] {
                continue;
            }
            cycles[self.origin[start]] += 1;
            let mut h = start;
            while !seen[h] {
                seen[h] = true;
                h = self.rotate(h);
            }
        }
        match cycles.iter().position(|&c| c != 1) {
            Some(vertex) => Err(Error::NonManifoldVertex { vertex, cycles: cycles[vertex] }),
            None => Ok(()),
        }
    }

    fn check_connected(&self) -> Result<()> {
        let mut reached = vec![false; self.num_faces()];
        let mut queue = VecDeque::from([0usize]);
        reached[0] = true;
        let mut count = 1;
        while let Some(f) = queue.pop_front() {
            for h in self.face_half_edges(f) {
                let g = self.face[self.twin(h)];
                if !reached[g] {
                    reached[g] = true;
                    count += 1;
                    queue.push_back(g);
                }
            }
        }
        if count == self.num_faces() {
            Ok(())
        } else {
            Err(Error::Disconnected)
        }
    }

    pub fn num_vertices(&self) -> usize {
        self.num_vertices
    }

    pub fn num_edges(&self) -> usize {
        self.origin.len() / 2
    }

    pub fn num_faces(&self) -> usize {
        self.face_half_edge.len()
    }

    pub fn num_half_edges(&self) -> usize {
        self.origin.len()
    }

    /// `|V| - |E| + |F|`.
    pub fn euler_characteristic(&self) -> i64 {
        self.num_vertices as i64 - self.num_edges() as i64 + self.num_faces() as i64
    }

    /// Genus of the (closed, orientable) surface.
    pub fn genus(&self) -> i64 {
        (2 - self.euler_characteristic()) / 2
    }

    #[inline]
    pub fn twin(&self, h: usize) -> usize {
        h ^ 1
    }

    #[inline]
    pub fn next(&self, h: usize) -> usize {
        self.next[h]
    }

    #[inline]
    pub fn prev(&self, h: usize) -> usize {
        self.next[self.next[h]]
    }

    #[inline]
    pub fn origin(&self, h: usize) -> usize {
        self.origin[h]
    }

    #[inline]
    pub fn dest(&self, h: usize) -> usize {
        self.origin[self.next[h]]
    }

    #[inline]
    pub fn face_of(&self, h: usize) -> usize {
        self.face[h]
    }

    #[inline]
    pub fn edge_of(&self, h: usize) -> usize {
        h >> 1
    }

    /// Next outgoing half-edge around `origin(h)`.
    #[inline]
    fn rotate(&self, h: usize) -> usize {
        self.next[self.twin(h)]
    }

    /// Half-edge of edge `e` that was stored first.
    #[inline]
    pub fn edge_half_edge(&self, e: usize) -> usize {
        2 * e
    }

    /// Endpoints of edge `e`, as (origin, destination) of its first half-edge.
    pub fn edge_endpoints(&self, e: usize) -> (usize, usize) {
        let h = 2 * e;
        (self.origin(h), self.dest(h))
    }

    pub fn is_loop(&self, e: usize) -> bool {
        let (p, q) = self.edge_endpoints(e);
        p == q
    }

    /// The three half-edges of face `f` in cyclic order.
    pub fn face_half_edges(&self, f: usize) -> [usize; 3] {
        let h0 = self.face_half_edge[f];
        let h1 = self.next[h0];
        [h0, h1, self.next[h1]]
    }

    /// Corner vertices of face `f`, aligned with [`MarkedSurface::face_half_edges`].
    pub fn face_vertices(&self, f: usize) -> [usize; 3] {
        self.face_half_edges(f).map(|h| self.origin[h])
    }

    /// Edge ids of the sides of face `f`, aligned with [`MarkedSurface::face_half_edges`].
    pub fn face_edges(&self, f: usize) -> [usize; 3] {
        self.face_half_edges(f).map(|h| h >> 1)
    }

    /// Vertex triples of all faces, suitable for [`MarkedSurface::from_glued_faces`].
    pub fn faces(&self) -> Vec<[usize; 3]> {
        (0..self.num_faces()).map(|f| self.face_vertices(f)).collect()
    }

    /// Edge-id triples of all faces.
    pub fn all_face_edges(&self) -> Vec<[usize; 3]> {
        (0..self.num_faces()).map(|f| self.face_edges(f)).collect()
    }

    /// Each face as `(vertex, edge)` pairs rotated to start at its smallest edge
    /// id, sorted. Equal for surfaces that differ only in half-edge bookkeeping.
    pub fn canonical_faces(&self) -> Vec<[(usize, usize); 3]> {
        let mut out: Vec<[(usize, usize); 3]> = (0..self.num_faces())
            .map(|f| {
                let v = self.face_vertices(f);
                let e = self.face_edges(f);
                let start = (0..3).min_by_key(|&s| (e[s], v[s])).unwrap_or(0);
                [0, 1, 2].map(|k| {
                    let s = (start + k) % 3;
                    (v[s], e[s])
                })
            })
            .collect();
        out.sort_unstable();
        out
    }

    /// Returns a copy with edge `e` flipped. See [`MarkedSurface::flip_in_place`].
    pub fn flip_edge(&self, e: usize) -> Result<MarkedSurface> {
        let mut out = self.clone();
        out.flip_in_place(e)?;
        Ok(out)
    }

    /// Replaces the diagonal `ij` of the quadrilateral formed by the faces `ijk`
    /// and `jil` with the diagonal `kl`, keeping the edge id `e`.
    ///
    /// Afterwards the first half-edge of `e` runs `l -> k` in face `lki` and the
    /// second runs `k -> l` in face `klj`.
    pub fn flip_in_place(&mut self, e: usize) -> Result<()> {
        if e >= self.num_edges() {
            return Err(Error::EdgeOutOfRange { edge: e, count: self.num_edges() });
        }
        let h = 2 * e;
        let t = h + 1;
        let (f1, f2) = (self.face[h], self.face[t]);
        if f1 == f2 {
            return Err(Error::DegenerateFlip { edge: e });
        }
        let (hn, tn) = (self.next[h], self.next[t]);
        let (hp, tp) = (self.next[hn], self.next[tn]);
        let k = self.origin[hp];
        let l = self.origin[tp];

        self.origin[h] = l;
        self.origin[t] = k;
        self.next[h] = hp;
        self.next[hp] = tn;
        self.next[tn] = h;
        self.next[t] = tp;
        self.next[tp] = hn;
        self.next[hn] = t;
        self.face[tn] = f1;
        self.face[hn] = f2;
        self.face_half_edge[f1] = h;
        self.face_half_edge[f2] = t;
        Ok(())
    }

    /// Checks all structural invariants. Construction and flips maintain them;
    /// this is exposed for tests and for data produced elsewhere.
    pub fn validate(&self) -> Result<()> {
        let n = self.num_half_edges();
        for h in 0..n {
            let (a, b, c) = (h, self.next[h], self.next[self.next[h]]);
            let closes = self.next[c] == a;
            let same_face = self.face[a] == self.face[b] && self.face[b] == self.face[c];
            if !closes || !same_face || a == b {
                return Err(Error::NonManifoldEdge { edge: (h >> 1).to_string(), slots: 0 });
            }
            if self.origin[self.twin(h)] != self.dest(h) {
                return Err(Error::OrientationMismatch { edge: (h >> 1).to_string() });
            }
        }
        self.check_vertex_links()?;
        self.check_connected()
    }
}
