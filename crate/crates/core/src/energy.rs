//! The energies whose critical points are constant-curvature metrics.
//!
//! All functions take a base triangulation with a valid metric and a conformal
//! factor `u`. The metric is scaled by `u` and re-triangulated to the Delaunay
//! triangulation `Delta(u)` with Ptolemy flips before anything is evaluated, so
//! the energies are defined on all of `R^V`.
//!
//! - `E(u) = sum_faces (2 f(l~/2 ...) - pi/2 (l~_ij + l~_jk + l~_ki)) + 2 pi sum_i u_i`
//!   with `grad E = W` and Hessian the cotangent Laplacian.
//! - `A_tot(u)`, the total area, with `grad A_tot = 2 A_i`.
//! - `F(u) = E(u) - pi chi log A_tot(u)`, invariant under `u -> u + c`.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};

use crate::conformal::{conformal_delaunay, scale_metric, DiscreteMetric};
use crate::error::{Error, Result};
use crate::geometry::lobachevsky;
use crate::surface::MarkedSurface;

/// Smallest total area accepted before `log A_tot` is taken.
pub const MIN_TOTAL_AREA: f64 = 1e-300;

/// Symmetric matrix stored as a sparse part (pairs `i <= j` that occur as
/// edges, plus the diagonal) and an optional sum of rank-one terms `w g g^T`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Hessian {
    dim: usize,
    sparse: BTreeMap<(usize, usize), f64>,
    rank_one: Vec<(f64, Vec<f64>)>,
}

impl Hessian {
    pub fn zeros(dim: usize) -> Self {
        Hessian { dim, ..Default::default() }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Adds `value` to entry `(i, j)` and, for `i != j`, to `(j, i)`.
    pub fn add(&mut self, i: usize, j: usize, value: f64) {
        *self.sparse.entry((i.min(j), i.max(j))).or_insert(0.0) += value;
    }

    /// Adds the quadratic form `w (x_p - x_q)^2`. Loops contribute nothing.
    fn add_difference_form(&mut self, p: usize, q: usize, w: f64) {
        if p != q {
            self.add(p, p, w);
            self.add(q, q, w);
            self.add(p, q, -w);
        }
    }

    /// Adds the quadratic form `w (x_p + x_q)^2`.
    fn add_sum_form(&mut self, p: usize, q: usize, w: f64) {
        if p == q {
            self.add(p, p, 4.0 * w);
        } else {
            self.add(p, p, w);
            self.add(q, q, w);
            self.add(p, q, w);
        }
    }

    /// Adds `weight * g g^T`.
    pub fn add_rank_one(&mut self, weight: f64, g: Vec<f64>) {
        assert_eq!(g.len(), self.dim, "rank-one term has wrong dimension");
        self.rank_one.push((weight, g));
    }

    /// `a * self + b * other`.
    pub fn linear_combination(&self, a: f64, other: &Hessian, b: f64) -> Hessian {
        assert_eq!(self.dim, other.dim);
        let mut out = Hessian::zeros(self.dim);
        for (&(i, j), &v) in &self.sparse {
            out.add(i, j, a * v);
        }
        for (&(i, j), &v) in &other.sparse {
            out.add(i, j, b * v);
        }
        for (w, g) in &self.rank_one {
            out.rank_one.push((a * w, g.clone()));
        }
        for (w, g) in &other.rank_one {
            out.rank_one.push((b * w, g.clone()));
        }
        out
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        let s = self.sparse.get(&(i.min(j), i.max(j))).copied().unwrap_or(0.0);
        s + self.rank_one.iter().map(|(w, g)| w * g[i] * g[j]).sum::<f64>()
    }

    /// Stored sparse entries `(i, j, value)` with `i <= j`.
    pub fn sparse_entries(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        self.sparse.iter().map(|(&(i, j), &v)| (i, j, v))
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        let mut y = vec![0.0; self.dim];
        for (&(i, j), &v) in &self.sparse {
            y[i] += v * x[j];
            if i != j {
                y[j] += v * x[i];
            }
        }
        for (w, g) in &self.rank_one {
            let dot: f64 = g.iter().zip(x).map(|(a, b)| a * b).sum();
            for (yi, gi) in y.iter_mut().zip(g) {
                *yi += w * dot * gi;
            }
        }
        y
    }

    /// `x^T H x`.
    pub fn quadratic_form(&self, x: &[f64]) -> f64 {
        self.mul_vec(x).iter().zip(x).map(|(a, b)| a * b).sum()
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(self.dim, self.dim);
        for (&(i, j), &v) in &self.sparse {
            m[(i, j)] += v;
            if i != j {
                m[(j, i)] += v;
            }
        }
        for (w, g) in &self.rank_one {
            let g = DVector::from_column_slice(g);
            m += *w * &g * g.transpose();
        }
        m
    }
}

/// Value, gradient and Hessian of an energy at one conformal factor.
#[derive(Debug, Clone, PartialEq)]
pub struct EnergyEval {
    pub value: f64,
    pub gradient: Vec<f64>,
    pub hessian: Hessian,
}

/// Everything the energies need from one triangulation with valid lengths.
struct Pieces {
    /// Face part of E, without the linear `2 pi sum u` term.
    e_faces: f64,
    defects: Vec<f64>,
    h_e: Hessian,
    area: f64,
    /// `2 A_i`.
    area_grad: Vec<f64>,
    h_a: Hessian,
}

fn pieces(s: &MarkedSurface, m: &DiscreteMetric) -> Result<Pieces> {
    let n = s.num_vertices();
    let mut p = Pieces {
        e_faces: 0.0,
        defects: vec![2.0 * PI; n],
        h_e: Hessian::zeros(n),
        area: 0.0,
        area_grad: vec![0.0; n],
        h_a: Hessian::zeros(n),
    };
    for f in 0..s.num_faces() {
        let t = m.face_triangle(s, f)?;
        let l = t.as_array();
        let ang = t.angles().as_array();
        let cot = t.cotangents();
        let r2 = t.circumradius().powi(2);
        p.area += t.area();
        for (k, h) in s.face_half_edges(f).into_iter().enumerate() {
            let (a, b) = (s.origin(h), s.dest(h));
            p.e_faces += (2.0 * ang[k] - PI) * l[k].ln() + 2.0 * lobachevsky(ang[k]);
            // Angle opposite side k sits at the far corner, the origin of prev(h).
            p.defects[s.origin(s.prev(h))] -= ang[k];
            p.h_e.add_difference_form(a, b, 0.5 * cot[k]);
            let corner = l[k] * l[k] * cot[k] / 8.0;
            p.area_grad[a] += 2.0 * corner;
            p.area_grad[b] += 2.0 * corner;
            p.h_a.add_sum_form(a, b, 2.0 * corner);
            p.h_a.add_difference_form(a, b, -0.5 * r2 * cot[k]);
        }
    }
    Ok(p)
}

fn linear_term(u: &[f64]) -> f64 {
    2.0 * PI * u.iter().sum::<f64>()
}

fn e_eval(p: &Pieces, u: &[f64]) -> EnergyEval {
    EnergyEval { value: p.e_faces + linear_term(u), gradient: p.defects.clone(), hessian: p.h_e.clone() }
}

fn a_eval(p: &Pieces) -> Result<EnergyEval> {
    if !(p.area >= MIN_TOTAL_AREA) {
        return Err(Error::AreaUnderflow(p.area));
    }
    Ok(EnergyEval { value: p.area, gradient: p.area_grad.clone(), hessian: p.h_a.clone() })
}

fn f_eval(p: &Pieces, u: &[f64], chi: i64) -> Result<EnergyEval> {
    let e = e_eval(p, u);
    let a = a_eval(p)?;
    let k = PI * chi as f64;
    let value = e.value - k * a.value.ln();
    let gradient = e.gradient.iter().zip(&a.gradient).map(|(w, g)| w - k * g / a.value).collect();
    let mut hessian = e.hessian.linear_combination(1.0, &a.hessian, -k / a.value);
    if chi != 0 {
        hessian.add_rank_one(k / (a.value * a.value), a.gradient);
    }
    Ok(EnergyEval { value, gradient, hessian })
}

fn delaunay_pieces(s: &MarkedSurface, base: &DiscreteMetric, u: &[f64]) -> Result<Pieces> {
    let d = conformal_delaunay(s, base, u)?;
    pieces(&d.surface, &d.metric)
}

fn fixed_pieces(s: &MarkedSurface, base: &DiscreteMetric, u: &[f64]) -> Result<Pieces> {
    let scaled = scale_metric(s, base, u)?;
    scaled.metric.validate(s)?;
    pieces(s, &scaled.metric)
}

/// `E(u)`, evaluated on `Delta(u)`.
pub fn energy_e(s: &MarkedSurface, base: &DiscreteMetric, u: &[f64]) -> Result<EnergyEval> {
    Ok(e_eval(&delaunay_pieces(s, base, u)?, u))
}

/// Total area `A_tot(u)`, evaluated on `Delta(u)`.
pub fn total_area(s: &MarkedSurface, base: &DiscreteMetric, u: &[f64]) -> Result<EnergyEval> {
    a_eval(&delaunay_pieces(s, base, u)?)
}

/// `F(u) = E(u) - pi chi log A_tot(u)`. Equals `E` when `chi = 0`.
pub fn energy_f(s: &MarkedSurface, base: &DiscreteMetric, u: &[f64]) -> Result<EnergyEval> {
    f_eval(&delaunay_pieces(s, base, u)?, u, s.euler_characteristic())
}

/// `E` on the fixed triangulation `s` without flips. Agrees with [`energy_e`]
/// inside the Penner cell of `s`; fails if scaling breaks a triangle.
pub fn energy_e_fixed(s: &MarkedSurface, base: &DiscreteMetric, u: &[f64]) -> Result<EnergyEval> {
    Ok(e_eval(&fixed_pieces(s, base, u)?, u))
}

/// `A_tot` on the fixed triangulation `s` without flips.
pub fn total_area_fixed(s: &MarkedSurface, base: &DiscreteMetric, u: &[f64]) -> Result<EnergyEval> {
    a_eval(&fixed_pieces(s, base, u)?)
}

/// `F` on the fixed triangulation `s` without flips.
pub fn energy_f_fixed(s: &MarkedSurface, base: &DiscreteMetric, u: &[f64]) -> Result<EnergyEval> {
    f_eval(&fixed_pieces(s, base, u)?, u, s.euler_characteristic())
}
