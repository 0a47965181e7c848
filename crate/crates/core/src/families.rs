//! Two one-parameter families of conformally equivalent metrics in which
//! constant discrete Gaussian curvature is attained more than once.
//!
//! Both start from triangles with sides `(1, b0, c0)` and scale by a conformal
//! factor depending on a single parameter `v`:
//!
//! - the tetrahedron: four triangles, `u(v) = (0, 0, v, v)`;
//! - a genus-2 surface with two marked points built from eight triangles,
//!   `u(v) = (0, v)`.
//!
//! All members are Delaunay for `v` in `S = [-log(b0^2 + c0^2), log(b0^2 + c0^2)]`.
//! Constant curvature is detected by the mismatch `D(v) = W_p A_q - W_q A_p`
//! between one vertex `p` scaled by `0` and one vertex `q` scaled by `v`.

use std::f64::consts::PI;
use std::fmt;

use crate::conformal::{curvature_report, scale_metric, CurvatureReport, DiscreteMetric};
use crate::error::{Error, Result};
use crate::geometry::TriangleLengths;
use crate::shapes::TETRAHEDRON_FACES;
use crate::surface::MarkedSurface;

/// Shape parameters and position in the family.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FamilyConfig {
    pub b0: f64,
    pub c0: f64,
    pub v: f64,
}

impl FamilyConfig {
    pub fn new(b0: f64, c0: f64, v: f64) -> Result<Self> {
        let cfg = FamilyConfig { b0, c0, v };
        cfg.validate()?;
        Ok(cfg)
    }

    /// Checks `b0, c0 >= 1`, `c0^2 <= 1 + b0^2` and `v` in `S`.
    pub fn validate(&self) -> Result<()> {
        validate_shape(self.b0, self.c0)?;
        let (lo, hi) = parameter_interval(self.b0, self.c0)?;
        if !(self.v.is_finite() && lo <= self.v && self.v <= hi) {
            return Err(Error::InvalidFamily(format!("v = {} lies outside [{lo}, {hi}]", self.v)));
        }
        Ok(())
    }

    /// Whether `v` sits at an end of `S`, where Delaunay conditions are tight.
    pub fn on_boundary(&self) -> bool {
        let hi = (self.b0 * self.b0 + self.c0 * self.c0).ln();
        self.v.abs() >= hi - 1e-12
    }
}

/// Checks the shape constraints on `(b0, c0)`.
pub fn validate_shape(b0: f64, c0: f64) -> Result<()> {
    if !(b0.is_finite() && c0.is_finite()) {
        return Err(Error::InvalidFamily(format!("non-finite b0 = {b0}, c0 = {c0}")));
    }
    if b0 < 1.0 || c0 < 1.0 {
        return Err(Error::InvalidFamily(format!("b0 = {b0} and c0 = {c0} must be at least 1")));
    }
    if !crate::geometry::is_triangle(1.0, b0, c0) {
        return Err(Error::InvalidFamily(format!("(1, {b0}, {c0}) is not a triangle")));
    }
    if c0 * c0 > 1.0 + b0 * b0 {
        return Err(Error::InvalidFamily(format!("c0^2 = {} exceeds 1 + b0^2 = {}", c0 * c0, 1.0 + b0 * b0)));
    }
    Ok(())
}

/// The closed interval `S = [-log(b0^2 + c0^2), log(b0^2 + c0^2)]`.
pub fn parameter_interval(b0: f64, c0: f64) -> Result<(f64, f64)> {
    validate_shape(b0, c0)?;
    let hi = (b0 * b0 + c0 * c0).ln();
    Ok((-hi, hi))
}

/// Which family a member belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    Tetrahedron,
    Genus2,
}

impl Family {
    pub fn member(self, cfg: &FamilyConfig) -> Result<FamilyMember> {
        match self {
            Family::Tetrahedron => tetrahedron_family(cfg),
            Family::Genus2 => genus2_family(cfg),
        }
    }

    /// Curvature mismatch `D(v)`; see [`eval_g`] and [`eval_h`].
    pub fn eval(self, cfg: &FamilyConfig) -> Result<f64> {
        match self {
            Family::Tetrahedron => eval_g(cfg),
            Family::Genus2 => eval_h(cfg),
        }
    }

    /// The pair of vertices compared by [`Family::eval`].
    pub fn compared_vertices(self) -> (usize, usize) {
        match self {
            Family::Tetrahedron => (0, 2),
            Family::Genus2 => (0, 1),
        }
    }

    /// Conformal factor of the member at `v`.
    pub fn conformal_factor(self, v: f64) -> Vec<f64> {
        match self {
            Family::Tetrahedron => vec![0.0, 0.0, v, v],
            Family::Genus2 => vec![0.0, v],
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Family::Tetrahedron => "tet",
            Family::Genus2 => "genus2",
        }
    }
}

/// Edge label as drawn on the family pictures.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EdgeLabel {
    A,
    ABar,
    B,
    BBar,
    C,
    CBar,
    /// Genus-2 labels `a^k`, `b^k`, `c^k` with `k` in 1..=4.
    AUpper(u8),
    BUpper(u8),
    CUpper(u8),
}

impl fmt::Display for EdgeLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EdgeLabel::A => f.write_str("a"),
            EdgeLabel::ABar => f.write_str("a_bar"),
            EdgeLabel::B => f.write_str("b"),
            EdgeLabel::BBar => f.write_str("b_bar"),
            EdgeLabel::C => f.write_str("c"),
            EdgeLabel::CBar => f.write_str("c_bar"),
            EdgeLabel::AUpper(k) => write!(f, "a{k}"),
            EdgeLabel::BUpper(k) => write!(f, "b{k}"),
            EdgeLabel::CUpper(k) => write!(f, "c{k}"),
        }
    }
}

/// One member of a family.
#[derive(Debug, Clone, PartialEq)]
pub struct FamilyMember {
    pub surface: MarkedSurface,
    /// Metric at `v = 0`.
    pub base_metric: DiscreteMetric,
    /// Metric at the configured `v`; equals `base_metric` scaled by `u`.
    pub metric: DiscreteMetric,
    pub u: Vec<f64>,
    pub labels: Vec<EdgeLabel>,
}

impl FamilyMember {
    pub fn curvature(&self) -> Result<CurvatureReport> {
        curvature_report(&self.surface, &self.metric)
    }
}

fn build_member(
    surface: MarkedSurface,
    labels: Vec<EdgeLabel>,
    base_length: impl Fn(EdgeLabel) -> f64,
    u: Vec<f64>,
) -> Result<FamilyMember> {
    let base_metric = DiscreteMetric::new(&surface, labels.iter().map(|&l| base_length(l)).collect())?;
    let metric = scale_metric(&surface, &base_metric, &u)?.metric;
    metric.validate(&surface)?;
    Ok(FamilyMember { surface, base_metric, metric, u, labels })
}

/// Tetrahedron with `a = 01`, `a_bar = 23`, `b = 02`, `b_bar = 13`, `c = 12`,
/// `c_bar = 03`. At `v` the lengths are `a = 1`, `a_bar = e^v`,
/// `b = b_bar = b0 e^(v/2)`, `c = c_bar = c0 e^(v/2)`.
pub fn tetrahedron_family(cfg: &FamilyConfig) -> Result<FamilyMember> {
    cfg.validate()?;
    let surface = MarkedSurface::from_faces(4, &TETRAHEDRON_FACES)?;
    let labels = (0..surface.num_edges())
        .map(|e| {
            let (p, q) = surface.edge_endpoints(e);
            match (p.min(q), p.max(q)) {
                (0, 1) => EdgeLabel::A,
                (2, 3) => EdgeLabel::ABar,
                (0, 2) => EdgeLabel::B,
                (1, 3) => EdgeLabel::BBar,
                (1, 2) => EdgeLabel::C,
                (0, 3) => EdgeLabel::CBar,
                _ => unreachable!("tetrahedron has six edges"),
            }
        })
        .collect();
    let (b0, c0) = (cfg.b0, cfg.c0);
    let length = move |l| match l {
        EdgeLabel::B | EdgeLabel::BBar => b0,
        EdgeLabel::C | EdgeLabel::CBar => c0,
        _ => 1.0,
    };
    build_member(surface, labels, length, Family::Tetrahedron.conformal_factor(cfg.v))
}

/// Vertex labels of the eight genus-2 triangles. Vertex 0 carries the loops
/// `a1, a2`, vertex 1 the loops `a3, a4`.
pub const GENUS2_FACES: [[usize; 3]; 8] =
    [[0, 0, 1], [1, 0, 1], [0, 0, 1], [1, 0, 1], [0, 0, 1], [1, 0, 1], [0, 0, 1], [1, 0, 1]];

/// Edge ids per side of [`GENUS2_FACES`]; ids 0..4 are `a1..a4`, 4..8 are
/// `b1..b4` and 8..12 are `c1..c4`. The triangles form a strip
/// `(a1 c1 b1) (c1 b2 a4) (a2 c2 b2) (c2 b3 a3) (a1 c3 b3) (c3 b4 a4) (a2 c4 b4) (c4 b1 a3)`
/// whose ends are joined along `b1` and whose `a` sides are glued in
/// reversed pairs along each boundary chain.
pub const GENUS2_FACE_EDGES: [[usize; 3]; 8] =
    [[0, 8, 4], [8, 5, 3], [1, 9, 5], [9, 6, 2], [0, 10, 6], [10, 7, 3], [1, 11, 7], [11, 4, 2]];

fn genus2_label(e: usize) -> EdgeLabel {
    let k = (e % 4) as u8 + 1;
    match e / 4 {
        0 => EdgeLabel::AUpper(k),
        1 => EdgeLabel::BUpper(k),
        _ => EdgeLabel::CUpper(k),
    }
}

/// Genus-2 surface with two marked points. At `v` the loops at vertex 0 have
/// length 1, those at vertex 1 length `e^v`, and every `b` (`c`) edge joins the
/// two vertices with length `b0 e^(v/2)` (`c0 e^(v/2)`).
pub fn genus2_family(cfg: &FamilyConfig) -> Result<FamilyMember> {
    cfg.validate()?;
    let surface = MarkedSurface::from_glued_faces(2, &GENUS2_FACES, &GENUS2_FACE_EDGES)?;
    let labels = (0..surface.num_edges()).map(genus2_label).collect();
    let (b0, c0) = (cfg.b0, cfg.c0);
    let length = move |l| match l {
        EdgeLabel::BUpper(_) => b0,
        EdgeLabel::CUpper(_) => c0,
        _ => 1.0,
    };
    build_member(surface, labels, length, Family::Genus2.conformal_factor(cfg.v))
}

fn mismatch(member: &FamilyMember, p: usize, q: usize) -> Result<f64> {
    let r = member.curvature()?;
    Ok(r.defects[p] * r.areas[q] - r.defects[q] * r.areas[p])
}

/// `g(v) = W_0 A_2 - W_2 A_0` on the tetrahedron; zero exactly when the
/// member has constant curvature.
pub fn eval_g(cfg: &FamilyConfig) -> Result<f64> {
    mismatch(&tetrahedron_family(cfg)?, 0, 2)
}

/// `h(v) = W_0 A_1 - W_1 A_0` on the genus-2 surface; zero exactly when the
/// member has constant curvature.
pub fn eval_h(cfg: &FamilyConfig) -> Result<f64> {
    mismatch(&genus2_family(cfg)?, 0, 1)
}

/// Quantities of the two triangle types at `v`: the small one `(1, b, c)` and
/// the large one `(e^v, b, c)` with `b = b0 e^(v/2)`, `c = c0 e^(v/2)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrianglePair {
    /// Angle opposite `a` and `a_bar`.
    pub alpha: f64,
    pub alpha_bar: f64,
    /// Triangle areas.
    pub area: f64,
    pub area_bar: f64,
    /// Circumcentric corner areas `l^2 cot(alpha) / 8` at the `a` sides.
    pub corner: f64,
    pub corner_bar: f64,
}

pub fn triangle_pair(cfg: &FamilyConfig) -> Result<TrianglePair> {
    cfg.validate()?;
    let s = (0.5 * cfg.v).exp();
    let (b, c) = (cfg.b0 * s, cfg.c0 * s);
    let small = TriangleLengths::new(1.0, b, c)?;
    let large = TriangleLengths::new(cfg.v.exp(), b, c)?;
    let corner = |t: &TriangleLengths| t.a * t.a * t.cotangents()[0] / 8.0;
    Ok(TrianglePair {
        alpha: small.angles().alpha,
        alpha_bar: large.angles().alpha,
        area: small.area(),
        area_bar: large.area(),
        corner: corner(&small),
        corner_bar: corner(&large),
    })
}

/// Closed form `2 pi (F_bar - F) + (alpha - alpha_bar)(A + A_bar)` for the
/// tetrahedron, with `F` the corner areas. Equals [`eval_g`].
pub fn g_closed_form(cfg: &FamilyConfig) -> Result<f64> {
    let t = triangle_pair(cfg)?;
    Ok(2.0 * PI * (t.corner_bar - t.corner) + (t.alpha - t.alpha_bar) * (t.area + t.area_bar))
}

/// Closed form `pi (F_bar - F) + (alpha_bar - alpha)(A + A_bar)` for the
/// genus-2 surface. Equals `-eval_h / 16`.
pub fn h_closed_form(cfg: &FamilyConfig) -> Result<f64> {
    let t = triangle_pair(cfg)?;
    Ok(PI * (t.corner_bar - t.corner) + (t.alpha_bar - t.alpha) * (t.area + t.area_bar))
}
