//! Discrete metrics, conformal scaling and intrinsic Delaunay triangulations.
//!
//! Two flip rules are provided. [`make_delaunay`] uses Euclidean flips, which
//! keep the piecewise flat metric: cone angles, total area and Voronoi cells
//! are unchanged. [`conformal_delaunay`] scales a base metric by a conformal
//! factor and then flips with the Ptolemy relation
//! `l_kl = (l_ik l_jl + l_il l_jk) / l_ij`, which yields the Delaunay
//! triangulation of the scaled metric inside the discrete conformal class. The
//! two rules agree on edges that sit exactly on the Delaunay boundary.

use std::collections::VecDeque;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::geometry::{is_triangle, TriangleLengths};
use crate::surface::MarkedSurface;

/// Tolerance on the cotangent sum below which an edge counts as non-Delaunay.
pub const DELAUNAY_EPS: f64 = 1e-12;

/// Positive edge lengths, indexed by edge id.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteMetric {
    lengths: Vec<f64>,
}

impl DiscreteMetric {
    /// Validates lengths against `s`: one positive finite length per edge and
    /// the sharp triangle inequalities on every face.
    pub fn new(s: &MarkedSurface, lengths: Vec<f64>) -> Result<Self> {
        let m = Self::unchecked(s, lengths)?;
        m.validate(s)?;
        Ok(m)
    }

    /// Checks only the edge count and positivity; faces may be degenerate.
    pub fn unchecked(s: &MarkedSurface, lengths: Vec<f64>) -> Result<Self> {
        if lengths.len() != s.num_edges() {
            return Err(Error::LengthMismatch { what: "edge lengths", expected: s.num_edges(), got: lengths.len() });
        }
        if let Some((edge, &value)) = lengths.iter().enumerate().find(|(_, &l)| !(l.is_finite() && l > 0.0)) {
            return Err(Error::InvalidLength { edge, value });
        }
        Ok(DiscreteMetric { lengths })
    }

    /// Metric from logarithmic lengths `lambda = 2 log l`.
    pub fn from_log_lengths(s: &MarkedSurface, lambda: &[f64]) -> Result<Self> {
        Self::new(s, lambda.iter().map(|&x| (0.5 * x).exp()).collect())
    }

    pub fn lengths(&self) -> &[f64] {
        &self.lengths
    }

    pub fn length(&self, e: usize) -> f64 {
        self.lengths[e]
    }

    pub fn set_length(&mut self, e: usize, value: f64) {
        self.lengths[e] = value;
    }

    /// Logarithmic lengths `lambda_e = 2 log l_e`.
    pub fn log_lengths(&self) -> Vec<f64> {
        self.lengths.iter().map(|l| 2.0 * l.ln()).collect()
    }

    /// Lengths of the sides of face `f`, aligned with `s.face_half_edges(f)`.
    pub fn face_lengths(&self, s: &MarkedSurface, f: usize) -> [f64; 3] {
        s.face_edges(f).map(|e| self.lengths[e])
    }

    pub fn face_triangle(&self, s: &MarkedSurface, f: usize) -> Result<TriangleLengths> {
        let l = self.face_lengths(s, f);
        TriangleLengths::from_array(l).map_err(|_| Error::TriangleInequality { face: f, lengths: l })
    }

    pub fn validate(&self, s: &MarkedSurface) -> Result<()> {
        for f in 0..s.num_faces() {
            self.face_triangle(s, f)?;
        }
        Ok(())
    }

    pub fn is_valid(&self, s: &MarkedSurface) -> bool {
        (0..s.num_faces()).all(|f| {
            let [a, b, c] = self.face_lengths(s, f);
            is_triangle(a, b, c)
        })
    }
}

/// Per-vertex logarithmic scale factors `u`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConformalFactor(pub Vec<f64>);

impl ConformalFactor {
    pub fn zeros(n: usize) -> Self {
        ConformalFactor(vec![0.0; n])
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn max_abs(&self) -> f64 {
        max_abs(&self.0)
    }

    /// Adds `c` to every entry.
    pub fn shifted(&self, c: f64) -> Self {
        ConformalFactor(self.0.iter().map(|x| x + c).collect())
    }
}

impl From<Vec<f64>> for ConformalFactor {
    fn from(v: Vec<f64>) -> Self {
        ConformalFactor(v)
    }
}

pub(crate) fn max_abs(u: &[f64]) -> f64 {
    u.iter().fold(0.0f64, |m, x| m.max(x.abs()))
}

/// Result of [`scale_metric`]. `valid` reports whether every face still
/// satisfies the sharp triangle inequalities.
#[derive(Debug, Clone, PartialEq)]
pub struct ScaledMetric {
    pub metric: DiscreteMetric,
    pub valid: bool,
}

/// `l_ij * exp((u_i + u_j) / 2)` on every edge.
pub fn scale_metric(s: &MarkedSurface, m: &DiscreteMetric, u: &[f64]) -> Result<ScaledMetric> {
    if u.len() != s.num_vertices() {
        return Err(Error::LengthMismatch {
            what: "conformal factor entries",
            expected: s.num_vertices(),
            got: u.len(),
        });
    }
    let lengths = (0..s.num_edges())
        .map(|e| {
            let (p, q) = s.edge_endpoints(e);
            m.length(e) * (0.5 * (u[p] + u[q])).exp()
        })
        .collect();
    let metric = DiscreteMetric::unchecked(s, lengths)?;
    let valid = metric.is_valid(s);
    Ok(ScaledMetric { metric, valid })
}

/// Position of half-edge `h` within its face.
fn side_index(s: &MarkedSurface, h: usize) -> usize {
    let hs = s.face_half_edges(s.face_of(h));
    hs.iter().position(|&x| x == h).expect("half-edge belongs to its face")
}

/// Cotangent of the angle opposite half-edge `h` in its face.
fn opposite_cot(s: &MarkedSurface, m: &DiscreteMetric, h: usize) -> Result<f64> {
    let f = s.face_of(h);
    let t = m.face_triangle(s, f)?;
    Ok(t.cotangents()[side_index(s, h)])
}

/// Law-of-cosines ratio `(b^2 + c^2 - a^2) / (2bc)` for the side `a` carried
/// by `h`; defined for any positive lengths.
fn opposite_cos_ratio(s: &MarkedSurface, m: &DiscreteMetric, h: usize) -> f64 {
    let a = m.length(s.edge_of(h));
    let b = m.length(s.edge_of(s.next(h)));
    let c = m.length(s.edge_of(s.prev(h)));
    (b * b + c * c - a * a) / (2.0 * b * c)
}

/// `cot(alpha_k) + cot(alpha_l)` for the angles opposite edge `e`.
pub fn delaunay_cot_sum(s: &MarkedSurface, m: &DiscreteMetric, e: usize) -> Result<f64> {
    let h = s.edge_half_edge(e);
    Ok(opposite_cot(s, m, h)? + opposite_cot(s, m, s.twin(h))?)
}

/// Whether edge `e` satisfies `cot(alpha_k) + cot(alpha_l) >= -DELAUNAY_EPS`.
pub fn is_delaunay_edge(s: &MarkedSurface, m: &DiscreteMetric, e: usize) -> Result<bool> {
    Ok(delaunay_cot_sum(s, m, e)? >= -DELAUNAY_EPS)
}

/// Whether every edge is Delaunay.
pub fn is_delaunay(s: &MarkedSurface, m: &DiscreteMetric) -> Result<bool> {
    for e in 0..s.num_edges() {
        if !is_delaunay_edge(s, m, e)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// How the length of a flipped edge is obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FlipRule {
    /// Length of the other diagonal of the flat quadrilateral.
    Euclidean,
    /// Ptolemy length; moves within the discrete conformal class.
    Ptolemy,
}

/// Output of the Delaunay flip algorithms.
#[derive(Debug, Clone, PartialEq)]
pub struct Delaunay {
    pub surface: MarkedSurface,
    pub metric: DiscreteMetric,
    pub flips: usize,
}

/// Flip limit used by the flip algorithms: `50 |E| (1 + max |u|)`.
pub fn flip_limit(num_edges: usize, max_abs_u: f64) -> usize {
    let scale = 1.0 + max_abs_u;
    (50.0 * num_edges as f64 * scale).ceil() as usize
}

/// Restores the Delaunay property with Euclidean flips. The piecewise flat
/// metric is unchanged.
pub fn make_delaunay(s: &MarkedSurface, m: &DiscreteMetric) -> Result<Delaunay> {
    m.validate(s)?;
    flip_to_delaunay(s.clone(), m.clone(), FlipRule::Euclidean, flip_limit(s.num_edges(), 0.0))
}

/// Delaunay triangulation of the metric obtained from `(s, base)` by the
/// conformal factor `u`: lengths are scaled on the base triangulation and
/// non-Delaunay edges are flipped with the Ptolemy relation.
///
/// The scaled lengths may violate triangle inequalities on the base
/// triangulation; the flips repair that. The result is rejected if a
/// degenerate face remains.
pub fn conformal_delaunay(s: &MarkedSurface, base: &DiscreteMetric, u: &[f64]) -> Result<Delaunay> {
    let scaled = scale_metric(s, base, u)?;
    let limit = flip_limit(s.num_edges(), max_abs(u));
    let out = flip_to_delaunay(s.clone(), scaled.metric, FlipRule::Ptolemy, limit)?;
    out.metric.validate(&out.surface)?;
    Ok(out)
}

/// Negative when edge `e` must be flipped. Uses cotangents when both faces are
/// proper triangles and the law-of-cosines form otherwise.
fn flip_score(s: &MarkedSurface, m: &DiscreteMetric, e: usize) -> f64 {
    let h = s.edge_half_edge(e);
    let t = s.twin(h);
    let valid = |h: usize| {
        let [a, b, c] = m.face_lengths(s, s.face_of(h));
        is_triangle(a, b, c)
    };
    if valid(h) && valid(t) {
        let cot = |h: usize| {
            let tri = m.face_triangle(s, s.face_of(h)).expect("checked valid");
            tri.cotangents()[side_index(s, h)]
        };
        cot(h) + cot(t)
    } else {
        opposite_cos_ratio(s, m, h) + opposite_cos_ratio(s, m, t)
    }
}

fn flipped_length(s: &MarkedSurface, m: &DiscreteMetric, e: usize, rule: FlipRule) -> f64 {
    let h = s.edge_half_edge(e);
    let t = s.twin(h);
    let l = |h: usize| m.length(s.edge_of(h));
    let ij = l(h);
    let (jk, ki) = (l(s.next(h)), l(s.prev(h)));
    let (il, lj) = (l(s.next(t)), l(s.prev(t)));
    match rule {
        FlipRule::Ptolemy => (ki * lj + il * jk) / ij,
        FlipRule::Euclidean => {
            // Lay out i = (0, 0), j = (ij, 0), k above and l below the x-axis.
            let area = |a: f64, b: f64, c: f64| TriangleLengths { a, b, c }.area();
            let xk = (ij * ij + ki * ki - jk * jk) / (2.0 * ij);
            let yk = 2.0 * area(ij, jk, ki) / ij;
            let xl = (ij * ij + il * il - lj * lj) / (2.0 * ij);
            let yl = 2.0 * area(ij, il, lj) / ij;
            (xk - xl).hypot(yk + yl)
        }
    }
}

fn flip_to_delaunay(mut s: MarkedSurface, mut m: DiscreteMetric, rule: FlipRule, limit: usize) -> Result<Delaunay> {
    let n = s.num_edges();
    let mut queue: VecDeque<usize> = (0..n).collect();
    let mut queued = vec![true; n];
    let mut flips = 0;
    while let Some(e) = queue.pop_front() {
        queued[e] = false;
        if flip_score(&s, &m, e) >= -DELAUNAY_EPS {
            continue;
        }
        let h = s.edge_half_edge(e);
        if s.face_of(h) == s.face_of(s.twin(h)) {
            return Err(Error::DegenerateFlip { edge: e });
        }
        if flips == limit {
            return Err(Error::FlipLimit { limit });
        }
        let new_length = flipped_length(&s, &m, e, rule);
        s.flip_in_place(e)?;
        m.set_length(e, new_length);
        flips += 1;
        let h = s.edge_half_edge(e);
        let t = s.twin(h);
        for g in [s.next(h), s.prev(h), s.next(t), s.prev(t)] {
            let g = s.edge_of(g);
            if !queued[g] {
                queued[g] = true;
                queue.push_back(g);
            }
        }
    }
    Ok(Delaunay { surface: s, metric: m, flips })
}

/// Sum of corner angles at every vertex. Loops contribute both their corners.
pub fn cone_angles(s: &MarkedSurface, m: &DiscreteMetric) -> Result<Vec<f64>> {
    let mut theta = vec![0.0; s.num_vertices()];
    for f in 0..s.num_faces() {
        let ang = m.face_triangle(s, f)?.angles().as_array();
        let hs = s.face_half_edges(f);
        // The angle opposite side k sits at the origin of the side before it.
        for k in 0..3 {
            theta[s.origin(hs[(k + 2) % 3])] += ang[k];
        }
    }
    Ok(theta)
}

/// Angle defects `W_i = 2 pi - (cone angle at i)`.
pub fn angle_defects(s: &MarkedSurface, m: &DiscreteMetric) -> Result<Vec<f64>> {
    Ok(cone_angles(s, m)?.into_iter().map(|t| 2.0 * PI - t).collect())
}

/// Sum of the triangle areas.
pub fn total_area(s: &MarkedSurface, m: &DiscreteMetric) -> Result<f64> {
    let mut sum = 0.0;
    for f in 0..s.num_faces() {
        sum += m.face_triangle(s, f)?.area();
    }
    Ok(sum)
}

/// Voronoi cell areas from the circumcentric corner formula: every side of
/// every face gives `l^2 cot(alpha) / 8` to each of its endpoints.
///
/// Only meaningful on a Delaunay triangulation; other inputs are rejected.
pub fn voronoi_areas(s: &MarkedSurface, m: &DiscreteMetric) -> Result<Vec<f64>> {
    for e in 0..s.num_edges() {
        let cot_sum = delaunay_cot_sum(s, m, e)?;
        if cot_sum < -DELAUNAY_EPS {
            return Err(Error::NotDelaunay { edge: e, cot_sum });
        }
    }
    corner_sums(s, m)
}

/// Circumcentric corner sums without the Delaunay check.
pub(crate) fn corner_sums(s: &MarkedSurface, m: &DiscreteMetric) -> Result<Vec<f64>> {
    let mut areas = vec![0.0; s.num_vertices()];
    for f in 0..s.num_faces() {
        let t = m.face_triangle(s, f)?;
        let cot = t.cotangents();
        let l = t.as_array();
        for (k, h) in s.face_half_edges(f).into_iter().enumerate() {
            let corner = l[k] * l[k] * cot[k] / 8.0;
            areas[s.origin(h)] += corner;
            areas[s.dest(h)] += corner;
        }
    }
    Ok(areas)
}

/// Per-vertex discrete Gaussian curvature together with its ingredients.
#[derive(Debug, Clone, PartialEq)]
pub struct CurvatureReport {
    /// Angle defects `W_i` in radians.
    pub defects: Vec<f64>,
    /// Voronoi cell areas `A_i`.
    pub areas: Vec<f64>,
    /// `K_i = W_i / A_i`.
    pub curvature: Vec<f64>,
    pub total_area: f64,
    pub euler_characteristic: i64,
    /// Flips performed to reach the Delaunay triangulation that was measured.
    pub flips: usize,
}

impl CurvatureReport {
    fn assemble(s: &MarkedSurface, m: &DiscreteMetric, flips: usize) -> Result<Self> {
        let defects = angle_defects(s, m)?;
        let areas = voronoi_areas(s, m)?;
        let curvature = defects.iter().zip(&areas).map(|(w, a)| w / a).collect();
        Ok(CurvatureReport {
            defects,
            areas,
            curvature,
            total_area: total_area(s, m)?,
            euler_characteristic: s.euler_characteristic(),
            flips,
        })
    }

    pub fn sum_defects(&self) -> f64 {
        self.defects.iter().sum()
    }

    /// `max_i |K_i - k|`.
    pub fn max_deviation_from(&self, k: f64) -> f64 {
        self.curvature.iter().fold(0.0f64, |acc, x| acc.max((x - k).abs()))
    }
}

/// Curvature of the piecewise flat metric `(s, m)`, measured on its intrinsic
/// Delaunay triangulation.
pub fn curvature_report(s: &MarkedSurface, m: &DiscreteMetric) -> Result<CurvatureReport> {
    let d = make_delaunay(s, m)?;
    CurvatureReport::assemble(&d.surface, &d.metric, d.flips)
}

/// Curvature of the metric obtained from `(s, base)` by the conformal factor `u`.
pub fn curvature_report_at(s: &MarkedSurface, base: &DiscreteMetric, u: &[f64]) -> Result<CurvatureReport> {
    let d = conformal_delaunay(s, base, u)?;
    CurvatureReport::assemble(&d.surface, &d.metric, d.flips)
}

/// Whether the fixed triangulation `s` stays Delaunay (with proper triangles)
/// after scaling `base` by `u`. Membership is a pointwise test only.
pub fn in_penner_cell(s: &MarkedSurface, base: &DiscreteMetric, u: &[f64]) -> bool {
    let Ok(scaled) = scale_metric(s, base, u) else {
        return false;
    };
    scaled.valid && is_delaunay(s, &scaled.metric).unwrap_or(false)
}
