//! Constant-curvature solver and one-parameter scans.
//!
//! [`uniformize`] minimises `F = E - pi chi log A_tot` (or `E` when `chi = 0`)
//! over conformal factors with a Newton method. The global scaling direction
//! `(1, ..., 1)` is removed by a gauge, the reduced Hessian is shifted until
//! it is positive definite, and steps are damped by Armijo backtracking.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use rayon::prelude::*;

use crate::conformal::{conformal_delaunay, make_delaunay, max_abs, ConformalFactor, CurvatureReport, DiscreteMetric};
use crate::energy::{energy_f, total_area};
use crate::error::{Error, Result};
use crate::families::{parameter_interval, Family, FamilyConfig};
use crate::surface::MarkedSurface;

/// How the scaling direction is removed from the Newton system.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Gauge {
    /// Steps are orthogonal to `(1, ..., 1)`.
    #[default]
    SumZero,
    /// `u_0` is held at its initial value.
    PinFirstVertex,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolverOptions {
    /// Convergence threshold on the max-norm of the gradient.
    pub grad_tol: f64,
    pub max_iter: usize,
    pub gauge: Gauge,
    /// Starting conformal factor; zero when absent.
    pub init: Option<ConformalFactor>,
    /// Extra shift added to the reduced Hessian on every step.
    pub trust_damping: f64,
    /// Iterates with `|u|_inf` above this bound abort the solve.
    pub divergence_bound: f64,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            grad_tol: 1e-10,
            max_iter: 200,
            gauge: Gauge::SumZero,
            init: None,
            trust_damping: 0.0,
            divergence_bound: 50.0,
        }
    }
}

impl SolverOptions {
    pub fn validate(&self) -> Result<()> {
        if !(self.grad_tol > 0.0 && self.grad_tol.is_finite()) {
            return Err(Error::InvalidOptions(format!("grad_tol must be positive, got {}", self.grad_tol)));
        }
        if self.max_iter == 0 {
            return Err(Error::InvalidOptions("max_iter must be at least 1".into()));
        }
        if !(self.trust_damping >= 0.0 && self.trust_damping.is_finite()) {
            return Err(Error::InvalidOptions(format!(
                "trust_damping must be non-negative, got {}",
                self.trust_damping
            )));
        }
        if !(self.divergence_bound > 0.0) {
            return Err(Error::InvalidOptions(format!(
                "divergence bound must be positive, got {}",
                self.divergence_bound
            )));
        }
        if let Some(u) = &self.init {
            if u.0.iter().any(|x| !x.is_finite()) {
                return Err(Error::InvalidOptions("initial conformal factor is not finite".into()));
            }
        }
        Ok(())
    }
}

/// Outcome of [`uniformize`].
#[derive(Debug, Clone, PartialEq)]
pub struct SolveResult {
    /// Conformal factor relative to the Delaunay triangulation of the input
    /// metric, shifted so that the total area is 1.
    pub u_star: ConformalFactor,
    /// Curvature of the normalised metric.
    pub report: CurvatureReport,
    /// Delaunay triangulation and metric at `u_star`.
    pub surface: MarkedSurface,
    pub metric: DiscreteMetric,
    pub iterations: usize,
    pub converged: bool,
    /// Objective value at every iterate, starting with the initial one.
    pub objective_trace: Vec<f64>,
    /// Gradient max-norm at the last iterate.
    pub grad_norm: f64,
    /// Bound on `max |K_i - 2 pi chi|` implied by `grad_tol`.
    pub k_tol: f64,
}

const ARMIJO_C1: f64 = 1e-4;
const MAX_HALVINGS: usize = 60;

/// Columns span the gauge subspace.
fn gauge_basis(n: usize, gauge: Gauge) -> DMatrix<f64> {
    match gauge {
        Gauge::PinFirstVertex => DMatrix::from_fn(n, n - 1, |i, j| if i == j + 1 { 1.0 } else { 0.0 }),
        Gauge::SumZero => {
            // Householder reflection taking e_0 to (1, ..., 1) / sqrt(n); its
            // remaining columns are an orthonormal basis of the complement.
            let mut w = DVector::from_element(n, -1.0 / (n as f64).sqrt());
            w[0] += 1.0;
            let norm = w.norm();
            if norm == 0.0 {
                return DMatrix::zeros(n, 0);
            }
            w /= norm;
            let h = DMatrix::identity(n, n) - 2.0 * &w * w.transpose();
            h.columns(1, n - 1).into_owned()
        }
    }
}

/// Newton direction on the gauge subspace with the reduced Hessian shifted to
/// be positive definite.
fn newton_direction(q: &DMatrix<f64>, h: &DMatrix<f64>, g: &DVector<f64>, damping: f64) -> DVector<f64> {
    let hr = q.transpose() * h * q;
    let gr = q.transpose() * g;
    let eig = SymmetricEigen::new(hr);
    let lmin = eig.eigenvalues.min();
    let scale = eig.eigenvalues.amax().max(1.0);
    let delta = 1e-8 * scale;
    let mu = (delta - lmin).max(0.0) + damping;
    let v = &eig.eigenvectors;
    let coeff = (v.transpose() * gr).zip_map(&eig.eigenvalues, |c, l| -c / (l + mu));
    q * (v * coeff)
}

/// Finds a metric of constant discrete Gaussian curvature conformally
/// equivalent to `(s, base)`.
///
/// The input metric is first brought to its Delaunay triangulation with
/// Euclidean flips; conformal factors refer to that triangulation. Reaching the
/// iteration limit is reported as [`Error::IterationLimit`].
pub fn uniformize(s: &MarkedSurface, base: &DiscreteMetric, opts: &SolverOptions) -> Result<SolveResult> {
    opts.validate()?;
    let d = make_delaunay(s, base)?;
    let (s, base) = (d.surface, d.metric);
    let n = s.num_vertices();
    let mut u = match &opts.init {
        Some(init) if init.len() != n => {
            return Err(Error::LengthMismatch {
                what: "initial conformal factor entries",
                expected: n,
                got: init.len(),
            })
        }
        Some(init) => init.0.clone(),
        None => vec![0.0; n],
    };
    let q = gauge_basis(n, opts.gauge);
    let mut eval = energy_f(&s, &base, &u)?;
    let mut trace = vec![eval.value];
    let mut iterations = 0;
    loop {
        let grad_norm = max_abs(&eval.gradient);
        if grad_norm <= opts.grad_tol {
            return finish(&s, &base, u, iterations, trace, grad_norm, opts.grad_tol);
        }
        if iterations == opts.max_iter {
            return Err(Error::IterationLimit { iterations, grad_norm });
        }
        iterations += 1;
        let g = DVector::from_column_slice(&eval.gradient);
        let dir = newton_direction(&q, &eval.hessian.to_dense(), &g, opts.trust_damping);
        let slope = g.dot(&dir);
        if q.ncols() == 0 || !(slope < 0.0) {
            return Err(Error::LineSearch { iteration: iterations });
        }
        let slack = 4.0 * f64::EPSILON * (1.0 + eval.value.abs());
        let mut t = 1.0;
        let mut accepted = None;
        for _ in 0..=MAX_HALVINGS {
            let trial: Vec<f64> = u.iter().zip(dir.iter()).map(|(x, d)| x + t * d).collect();
            if let Ok(e) = energy_f(&s, &base, &trial) {
                if e.value <= eval.value + ARMIJO_C1 * t * slope + slack {
                    accepted = Some((trial, e));
                    break;
                }
            }
            t *= 0.5;
        }
        let Some((next, e)) = accepted else {
            return Err(Error::LineSearch { iteration: iterations });
        };
        let norm = max_abs(&next);
        if norm > opts.divergence_bound {
            return Err(Error::Divergence { bound: opts.divergence_bound, norm });
        }
        u = next;
        eval = e;
        trace.push(eval.value);
    }
}

fn finish(
    s: &MarkedSurface,
    base: &DiscreteMetric,
    u: Vec<f64>,
    iterations: usize,
    objective_trace: Vec<f64>,
    grad_norm: f64,
    grad_tol: f64,
) -> Result<SolveResult> {
    let area = total_area(s, base, &u)?.value;
    let c = -0.5 * area.ln();
    let u_star = ConformalFactor(u).shifted(c);
    let d = conformal_delaunay(s, base, u_star.as_slice())?;
    let report = crate::conformal::curvature_report(&d.surface, &d.metric)?;
    let min_area = report.areas.iter().copied().fold(f64::INFINITY, f64::min);
    Ok(SolveResult {
        u_star,
        report,
        surface: d.surface,
        metric: d.metric,
        iterations,
        converged: true,
        objective_trace,
        grad_norm,
        k_tol: 10.0 * grad_tol / min_area,
    })
}

/// `samples` equally spaced points from `lo` to `hi`, both included. The
/// midpoint of a symmetric interval with an odd sample count is exactly zero.
pub fn uniform_grid(lo: f64, hi: f64, samples: usize) -> Result<Vec<f64>> {
    if samples < 2 {
        return Err(Error::InvalidScan(format!("need at least 2 samples, got {samples}")));
    }
    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
        return Err(Error::InvalidScan(format!("invalid interval [{lo}, {hi}]")));
    }
    let last = (samples - 1) as f64;
    Ok((0..samples)
        .map(|k| {
            let t = k as f64 / last;
            lo * (1.0 - t) + hi * t
        })
        .collect())
}

/// Evaluates `f` on a uniform grid over `interval`. Points are evaluated in
/// parallel and returned in grid order.
pub fn scan_objective<F>(f: F, interval: (f64, f64), samples: usize) -> Result<Vec<(f64, f64)>>
where
    F: Fn(f64) -> Result<f64> + Sync,
{
    let grid = uniform_grid(interval.0, interval.1, samples)?;
    grid.into_par_iter().map(|v| Ok((v, f(v)?))).collect()
}

/// Zeros of `f` on `interval`: exact zeros at grid points plus one root per
/// sign change between neighbours, bisected to width `root_tol`. Zeros where
/// `f` touches 0 without changing sign between grid points are missed.
pub fn find_roots<F>(f: F, interval: (f64, f64), samples: usize, root_tol: f64) -> Result<Vec<f64>>
where
    F: Fn(f64) -> Result<f64> + Sync,
{
    if !(root_tol > 0.0) {
        return Err(Error::InvalidScan(format!("root tolerance must be positive, got {root_tol}")));
    }
    let scan = scan_objective(&f, interval, samples)?;
    let mut roots = Vec::new();
    for (k, &(v, y)) in scan.iter().enumerate() {
        if y == 0.0 {
            roots.push(v);
        }
        let Some(&(w, z)) = scan.get(k + 1) else { break };
        if y * z < 0.0 {
            roots.push(bisect(&f, (v, y), (w, z), root_tol)?);
        }
    }
    roots.sort_by(f64::total_cmp);
    Ok(roots)
}

fn bisect<F>(f: &F, mut a: (f64, f64), mut b: (f64, f64), tol: f64) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    while b.0 - a.0 > tol {
        let mid = 0.5 * (a.0 + b.0);
        if mid <= a.0 || mid >= b.0 {
            break;
        }
        let y = f(mid)?;
        if y == 0.0 {
            return Ok(mid);
        }
        if (y < 0.0) == (a.1 < 0.0) {
            a = (mid, y);
        } else {
            b = (mid, y);
        }
    }
    Ok(0.5 * (a.0 + b.0))
}

/// `(v, D(v))` over the whole parameter interval of a family.
pub fn scan_family(family: Family, b0: f64, c0: f64, samples: usize) -> Result<Vec<(f64, f64)>> {
    let interval = parameter_interval(b0, c0)?;
    scan_objective(|v| family.eval(&FamilyConfig { b0, c0, v }), interval, samples)
}

/// Parameters `v` at which the family member has constant curvature.
pub fn family_roots(family: Family, b0: f64, c0: f64, samples: usize, root_tol: f64) -> Result<Vec<f64>> {
    let interval = parameter_interval(b0, c0)?;
    find_roots(|v| family.eval(&FamilyConfig { b0, c0, v }), interval, samples, root_tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{genus2_family, tetrahedron_family};
    use crate::shapes;
    use approx::assert_relative_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    fn perturbed(s: &MarkedSurface, m: &DiscreteMetric, rng: &mut ChaCha8Rng, eps: f64) -> DiscreteMetric {
        loop {
            let l = m.lengths().iter().map(|l| l * (1.0 + rng.gen_range(-eps..eps))).collect();
            if let Ok(p) = DiscreteMetric::new(s, l) {
                return p;
            }
        }
    }

    fn check_constant(r: &SolveResult, chi: f64) {
        assert!(r.converged);
        assert!((r.report.total_area - 1.0).abs() <= 1e-12);
        assert!(r.report.max_deviation_from(2.0 * PI * chi) <= r.k_tol);
        for w in r.objective_trace.windows(2) {
            assert!(w[1] <= w[0] + 1e-12 * (1.0 + w[0].abs()));
        }
    }

    #[test]
    fn gauge_basis_is_orthonormal_complement() {
        for n in [2, 3, 6] {
            let q = gauge_basis(n, Gauge::SumZero);
            let qtq = q.transpose() * &q;
            assert!((qtq - DMatrix::identity(n - 1, n - 1)).amax() < 1e-14);
            let ones = DVector::from_element(n, 1.0);
            assert!((q.transpose() * ones).amax() < 1e-14);
            let p = gauge_basis(n, Gauge::PinFirstVertex);
            assert!(p.row(0).iter().all(|&x| x == 0.0));
        }
    }

    #[test]
    fn regular_tetrahedron_is_already_uniform() {
        let (s, m) = shapes::regular_tetrahedron();
        let r = uniformize(&s, &m, &SolverOptions::default()).unwrap();
        assert!(r.iterations <= 1);
        check_constant(&r, 2.0);
        let c = r.u_star.0[0];
        assert!(r.u_star.0.iter().all(|x| (x - c).abs() < 1e-14));
        for k in &r.report.curvature {
            assert_relative_eq!(*k, 4.0 * PI, epsilon = 1e-10);
        }
    }

    #[test]
    fn perturbed_tetrahedra_converge() {
        let (s, m) = shapes::regular_tetrahedron();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..10 {
            let p = perturbed(&s, &m, &mut rng, 0.05);
            let r = uniformize(&s, &p, &SolverOptions::default()).unwrap();
            check_constant(&r, 2.0);
            assert!(r.report.max_deviation_from(4.0 * PI) <= 1e-8);
        }
    }

    #[test]
    fn gauges_agree() {
        let (s, m) = shapes::regular_octahedron();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let p = perturbed(&s, &m, &mut rng, 0.1);
        let a = uniformize(&s, &p, &SolverOptions::default()).unwrap();
        let pin = SolverOptions { gauge: Gauge::PinFirstVertex, ..Default::default() };
        let b = uniformize(&s, &p, &pin).unwrap();
        let diff: Vec<f64> = a.u_star.0.iter().zip(&b.u_star.0).map(|(x, y)| x - y).collect();
        let mean = diff.iter().sum::<f64>() / diff.len() as f64;
        assert!(diff.iter().all(|d| (d - mean).abs() <= 1e-8));
        check_constant(&b, 2.0);
    }

    #[test]
    fn tetrahedron_family_converges_to_symmetric_member() {
        let cfg = FamilyConfig::new(1.6, 1.75, 0.0).unwrap();
        let fam = tetrahedron_family(&cfg).unwrap();
        let opts = SolverOptions { init: Some(ConformalFactor(vec![0.0, 0.0, 0.4, 0.4])), ..Default::default() };
        let r = uniformize(&fam.surface, &fam.base_metric, &opts).unwrap();
        check_constant(&r, 2.0);
        let u = &r.u_star.0;
        assert!((u[2] - u[0]).abs() <= 1e-7, "{u:?}");
        assert!((u[3] - u[1]).abs() <= 1e-7);
    }

    #[test]
    fn genus2_family_converges() {
        let cfg = FamilyConfig::new(3.0, 3.15, 0.0).unwrap();
        let fam = genus2_family(&cfg).unwrap();
        let r = uniformize(&fam.surface, &fam.base_metric, &SolverOptions::default()).unwrap();
        check_constant(&r, -2.0);
        for k in &r.report.curvature {
            assert!((k + 4.0 * PI).abs() <= 1e-8);
        }
    }

    #[test]
    fn torus_reaches_zero_defects() {
        let (s, m) = shapes::grid_torus(3, 4);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let p = perturbed(&s, &m, &mut rng, 0.05);
        let r = uniformize(&s, &p, &SolverOptions::default()).unwrap();
        check_constant(&r, 0.0);
        assert!(r.report.defects.iter().all(|w| w.abs() <= 1e-10));
        let sum: f64 = r.report.defects.iter().sum();
        assert!(sum.abs() <= 1e-9);
    }

    #[test]
    fn iteration_limit_is_an_error() {
        let (s, m) = shapes::regular_octahedron();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let p = perturbed(&s, &m, &mut rng, 0.2);
        let opts = SolverOptions { max_iter: 1, grad_tol: 1e-14, ..Default::default() };
        assert!(matches!(uniformize(&s, &p, &opts), Err(Error::IterationLimit { iterations: 1, .. })));
    }

    #[test]
    fn invalid_options_are_rejected() {
        let (s, m) = shapes::regular_tetrahedron();
        for opts in [
            SolverOptions { grad_tol: 0.0, ..Default::default() },
            SolverOptions { max_iter: 0, ..Default::default() },
            SolverOptions { trust_damping: -1.0, ..Default::default() },
        ] {
            assert!(matches!(uniformize(&s, &m, &opts), Err(Error::InvalidOptions(_))));
        }
        let short = SolverOptions { init: Some(ConformalFactor(vec![0.0; 3])), ..Default::default() };
        assert!(matches!(uniformize(&s, &m, &short), Err(Error::LengthMismatch { .. })));
    }

    #[test]
    fn grid_and_scan() {
        let g = uniform_grid(-2.0, 2.0, 5).unwrap();
        assert_eq!(g, vec![-2.0, -1.0, 0.0, 1.0, 2.0]);
        assert!(uniform_grid(0.0, 1.0, 1).is_err());
        assert!(uniform_grid(1.0, 0.0, 3).is_err());
        let s = scan_objective(|x| Ok(x * x), (0.0, 1.0), 3).unwrap();
        assert_eq!(s, vec![(0.0, 0.0), (0.5, 0.25), (1.0, 1.0)]);
        let failing =
            scan_objective(|x| if x > 0.5 { Err(Error::InvalidScan("x".into())) } else { Ok(x) }, (0.0, 1.0), 5);
        assert!(failing.is_err());
    }

    #[test]
    fn roots_of_a_cubic() {
        let r = find_roots(|x| Ok(x * (x - 0.3) * (x + 0.71)), (-1.0, 1.0), 41, 1e-13).unwrap();
        assert_eq!(r.len(), 3);
        assert_eq!(r[1], 0.0);
        assert!((r[0] + 0.71).abs() <= 1e-12);
        assert!((r[2] - 0.3).abs() <= 1e-12);
        // A tangential zero is not bracketed.
        let t = find_roots(|x| Ok((x - 0.123).powi(2) + 1e-3), (-1.0, 1.0), 41, 1e-12).unwrap();
        assert!(t.is_empty());
    }

    #[test]
    fn family_root_counts() {
        let one = family_roots(Family::Tetrahedron, 1.6, 1.75, 401, 1e-12).unwrap();
        assert_eq!(one.len(), 1);
        assert!(one[0].abs() <= 1e-12);
        let three = family_roots(Family::Tetrahedron, 2.2, 2.35, 401, 1e-12).unwrap();
        assert_eq!(three.len(), 3);
        assert!(three[1].abs() <= 1e-12);
        assert!((three[0] + three[2]).abs() <= 1e-10);
        assert!(three[2] > 0.0);
    }

    #[test]
    fn frozen_root_locations() {
        for (b0, c0, v) in [(2.0, 2.15, 0.7785557162495), (2.2, 2.35, 1.1569337787252)] {
            let r = family_roots(Family::Tetrahedron, b0, c0, 401, 1e-12).unwrap();
            assert_eq!(r.len(), 3);
            assert!((r[2] - v).abs() <= 1e-10, "{r:?}");
            assert!((r[0] + v).abs() <= 1e-10, "{r:?}");
        }
        // The genus-2 mismatch changes sign only at v = 0 for these shapes.
        for (b0, c0) in [(2.6, 2.75), (3.0, 3.15), (3.2, 3.35)] {
            let r = family_roots(Family::Genus2, b0, c0, 401, 1e-12).unwrap();
            assert_eq!(r.len(), 1);
            assert!(r[0].abs() <= 1e-12);
        }
    }

    #[test]
    fn roots_are_critical_points() {
        let roots = family_roots(Family::Tetrahedron, 2.2, 2.35, 201, 1e-12).unwrap();
        for v in roots {
            let cfg = FamilyConfig::new(2.2, 2.35, 0.0).unwrap();
            let fam = tetrahedron_family(&cfg).unwrap();
            let opts = SolverOptions {
                init: Some(ConformalFactor(Family::Tetrahedron.conformal_factor(v))),
                grad_tol: 1e-8,
                max_iter: 2,
                ..Default::default()
            };
            let r = uniformize(&fam.surface, &fam.base_metric, &opts).unwrap();
            assert!(r.iterations <= 2);
            assert!(r.grad_norm <= 1e-8);
        }
    }
}
