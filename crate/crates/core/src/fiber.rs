//! Fibers `F^{-1}(a, b)` of polynomial maps, the geometric degree, and image
//! membership.
//!
//! The second variable is eliminated from `P - a = Q - b = 0`, the roots of
//! the univariate eliminant give first coordinates, and the second
//! coordinates come from the specialized equations. Every candidate is
//! polished by Newton's method on the full system and kept only if its
//! residual is small; survivors are deduplicated.
//!
//! The eliminant is formed the cheapest exact way the map allows:
//!
//! * a component free of `Y` is its own eliminant;
//! * a component `c·Y + l(X)` with constant `c` gives `Y = -l(X)/c`, and the
//!   eliminant is the other component at that `Y` (this is the resultant in
//!   that case, up to sign);
//! * otherwise the Sylvester resultant in `Y` is sampled at the `N`-th roots
//!   of unity, `N = deg P · deg Q + 1`, and interpolated by an inverse DFT.
//!
//! Each rule is also tried with the variables swapped.

use std::collections::BTreeMap;
use std::f64::consts::TAU;

use num_complex::Complex64;
use num_traits::Zero;
use rayon::prelude::*;

use crate::dense::{max_modulus, trim_roundoff, CompiledMap, DenseBivar, UniPoly};
use crate::domain::Region;
use crate::error::{Component, FiberError};
use crate::map::PolyMap;
use crate::roots::aberth;
use crate::sampling::{norm2, substream, uniform_ball, Point};
use crate::scalar::Coeff;

/// Scale-relative tolerances of the solver.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerances {
    /// Accept a point when `|F(p) - t| <= residual * (1 + |t|)`, plus the
    /// round-off allowance below.
    pub residual: f64,
    /// Extra residual allowed per unit of evaluation scale
    /// `Σ |c_ij| |x|^i |y|^j`. Preimages far from the origin cannot be
    /// evaluated to an absolute accuracy of `residual` in double precision.
    pub roundoff: f64,
    /// Merge points closer than `cluster * (1 + |p|)`.
    pub cluster: f64,
    /// Declare the eliminant zero below this fraction of its round-off scale.
    pub degenerate: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            residual: 1e-8,
            roundoff: 1e3 * f64::EPSILON,
            cluster: 1e-8,
            degenerate: 1e-10,
        }
    }
}

impl Tolerances {
    /// Residual tolerance for a point whose evaluation scale is `eval_scale`.
    pub fn residual_tol(&self, target: Point, eval_scale: f64) -> f64 {
        self.residual * (1.0 + norm2(target)) + self.roundoff * eval_scale
    }

    pub fn cluster_tol(&self, point: Point) -> f64 {
        self.cluster * (1.0 + norm2(point))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FiberStatus {
    Finite,
    Empty,
    Degenerate,
}

#[derive(Clone, Debug)]
pub struct FiberResult {
    pub target: Point,
    pub points: Vec<Point>,
    pub residuals: Vec<f64>,
    pub status: FiberStatus,
    pub bezout_bound: u64,
}

impl FiberResult {
    pub fn count(&self) -> usize {
        self.points.len()
    }

    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().copied().fold(0.0, f64::max)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Method {
    /// `which` does not depend on the second variable.
    Univariate(Component),
    /// `which` is linear in the second variable with a constant coefficient.
    Substitute(Component),
    Resultant,
}

/// Relative round-off level below which a computed coefficient is noise.
const ROUNDOFF_TRIM: f64 = 1e3 * f64::EPSILON;

/// Eliminant roots closer than this, relative to `1 + |x|`, are treated as
/// one multiple root.
const ROOT_CLUSTER: f64 = 1e-6;

/// Interpolation nodes beyond the Bezout bound in the resultant path.
const RESULTANT_EXTRA_NODES: usize = 8;
/// An eliminant whose largest coefficient is within this factor of the
/// round-off floor is treated as identically zero.
const RESULTANT_SIGNAL_RATIO: f64 = 1e3;

/// A fiber solver bound to one map. Construction does all target-independent
/// work, so reuse one solver for many targets.
#[derive(Clone, Debug)]
pub struct FiberSolver {
    /// The map in the working orientation (variables swapped if `swapped`).
    work: CompiledMap,
    swapped: bool,
    method: Method,
    bezout: u64,
    tol: Tolerances,
    /// `det J` is a nonzero constant. A positive-dimensional fiber is
    /// mapped to a point, so `det J` vanishes along it; such maps therefore
    /// have finite fibers everywhere and skip the degeneracy checks.
    etale: bool,
}

fn classify(p: &DenseBivar, q: &DenseBivar) -> Method {
    let free = |d: &DenseBivar| d.degree_y() == 0;
    let linear = |d: &DenseBivar| d.degree_y() == 1 && d.rows[1].len() == 1 && !d.rows[1][0].is_zero();
    if free(p) {
        Method::Univariate(Component::P)
    } else if free(q) {
        Method::Univariate(Component::Q)
    } else if linear(p) {
        Method::Substitute(Component::P)
    } else if linear(q) {
        Method::Substitute(Component::Q)
    } else {
        Method::Resultant
    }
}

fn rank(m: Method) -> u8 {
    match m {
        Method::Univariate(_) => 0,
        Method::Substitute(_) => 1,
        Method::Resultant => 2,
    }
}

impl FiberSolver {
    pub fn new<C: Coeff>(f: &PolyMap<C>) -> Result<Self, FiberError> {
        Self::with_tolerances(f, Tolerances::default())
    }

    pub fn with_tolerances<C: Coeff>(f: &PolyMap<C>, tol: Tolerances) -> Result<Self, FiberError> {
        if f.p().is_constant() {
            return Err(FiberError::ConstantComponent(Component::P));
        }
        if f.q().is_constant() {
            return Err(FiberError::ConstantComponent(Component::Q));
        }
        let jac = f.jacobian_det();
        let etale = jac.is_constant() && !jac.is_zero();
        let straight = CompiledMap::new(f);
        let swapped_map = CompiledMap::new(&f.swap_variables());
        let m0 = classify(&straight.p, &straight.q);
        let m1 = classify(&swapped_map.p, &swapped_map.q);
        let sylvester = |c: &CompiledMap| c.p.degree_y() + c.q.degree_y();
        let use_swapped = rank(m1) < rank(m0)
            || (m0 == Method::Resultant
                && m1 == Method::Resultant
                && sylvester(&swapped_map) < sylvester(&straight));
        let (work, method) = if use_swapped {
            (swapped_map, m1)
        } else {
            (straight, m0)
        };
        Ok(Self {
            work,
            swapped: use_swapped,
            method,
            bezout: f.bezout_bound(),
            tol,
            etale,
        })
    }

    pub fn tolerances(&self) -> &Tolerances {
        &self.tol
    }

    pub fn bezout_bound(&self) -> u64 {
        self.bezout
    }

    /// Solves `F(x, y) = target`.
    pub fn solve(&self, target: Point) -> FiberResult {
        let (a, b) = target;
        let mut pa = self.work.p.clone();
        *pa.constant_term_mut() -= a;
        let mut qb = self.work.q.clone();
        *qb.constant_term_mut() -= b;

        let candidates = match self.method {
            Method::Univariate(which) => {
                let (u, v, shift) = match which {
                    Component::P => (&pa, &qb, a),
                    Component::Q => (&qb, &pa, b),
                };
                self.univariate_candidates(u, v, shift)
            }
            Method::Substitute(which) => {
                let (l, o) = match which {
                    Component::P => (&pa, &qb),
                    Component::Q => (&qb, &pa),
                };
                self.substitution_candidates(l, o)
            }
            Method::Resultant => self.resultant_candidates(&pa, &qb),
        };
        let candidates = match candidates {
            Some(c) => c,
            None => return self.result(target, Vec::new(), FiberStatus::Degenerate),
        };

        let mut points: Vec<(Point, f64)> = Vec::new();
        for cand in candidates {
            let (p, r) = self.polish(cand, target);
            // A NaN residual is rejected too.
            let accepted = r <= self.tol.residual_tol(target, self.work.eval_scale(p.0, p.1));
            if !accepted {
                continue;
            }
            let tol = self.tol.cluster_tol(p);
            match points.iter_mut().find(|(q, _)| norm2((p.0 - q.0, p.1 - q.1)) <= tol) {
                Some(existing) => {
                    if r < existing.1 {
                        *existing = (p, r);
                    }
                }
                None => points.push((p, r)),
            }
        }
        if self.swapped {
            for (p, _) in &mut points {
                *p = (p.1, p.0);
            }
        }
        points.sort_by(|(p, _), (q, _)| {
            (p.0.re, p.0.im, p.1.re, p.1.im)
                .partial_cmp(&(q.0.re, q.0.im, q.1.re, q.1.im))
                .unwrap_or(std::cmp::Ordering::Equal)
        });
        let status = if points.is_empty() {
            FiberStatus::Empty
        } else {
            FiberStatus::Finite
        };
        self.result(target, points, status)
    }

    fn result(&self, target: Point, points: Vec<(Point, f64)>, status: FiberStatus) -> FiberResult {
        let (points, residuals) = points.into_iter().unzip();
        FiberResult {
            target,
            points,
            residuals,
            status,
            bezout_bound: self.bezout,
        }
    }

    /// `u` depends on the first variable only. `None` flags a degenerate fiber.
    fn univariate_candidates(&self, u: &DenseBivar, v: &DenseBivar, shift: Complex64) -> Option<Vec<Point>> {
        let mut eliminant: UniPoly = u.rows.first().cloned().unwrap_or_default();
        let scale = u.l1_norm() + shift.norm();
        if !self.etale && max_modulus(&eliminant) <= self.tol.degenerate * scale {
            return None;
        }
        trim_roundoff(&mut eliminant, &[], 0.0);
        let mut out = Vec::new();
        for x in aberth(&eliminant).roots {
            let mut cy = v.coeffs_in_y(x);
            let abs_scale: f64 = v.abs_coeffs_in_y(x.norm()).iter().sum();
            if !self.etale && max_modulus(&cy) <= self.tol.degenerate * abs_scale.max(f64::MIN_POSITIVE) {
                return None;
            }
            trim_roundoff(&mut cy, &v.abs_coeffs_in_y(x.norm()), ROUNDOFF_TRIM);
            out.extend(aberth(&cy).roots.into_iter().map(|y| (x, y)));
        }
        Some(out)
    }

    /// `l = c·Y + l0(X)` with constant `c`.
    fn substitution_candidates(&self, l: &DenseBivar, o: &DenseBivar) -> Option<Vec<Point>> {
        let c = l.rows[1][0];
        let y_of_x: UniPoly = l.rows[0].iter().map(|&v| -v / c).collect();
        let mut eliminant = o.substitute_y(&y_of_x);
        // The same expansion with every coefficient replaced by its modulus
        // bounds the round-off in `eliminant`.
        let bound = || -> Vec<f64> {
            let abs_y: UniPoly = y_of_x.iter().map(|c| Complex64::new(c.norm(), 0.0)).collect();
            o.moduli().substitute_y(&abs_y).iter().map(|c| c.re).collect()
        };
        if !self.etale {
            let bound = bound();
            if max_modulus(&eliminant) <= self.tol.degenerate * bound.iter().cloned().fold(0.0, f64::max) {
                return None;
            }
            trim_roundoff(&mut eliminant, &bound, ROUNDOFF_TRIM);
        } else if eliminant.last().is_some_and(|c| c.norm() < 1e-8 * max_modulus(&eliminant)) {
            trim_roundoff(&mut eliminant, &bound(), ROUNDOFF_TRIM);
        }
        Some(
            aberth(&eliminant)
                .roots
                .into_iter()
                .map(|x| {
                    let y = -crate::dense::horner(&l.rows[0], x) / c;
                    (x, y)
                })
                .collect(),
        )
    }

    fn resultant_candidates(&self, a: &DenseBivar, b: &DenseBivar) -> Option<Vec<Point>> {
        // The resultant has degree at most the Bezout bound; the extra nodes
        // make the coefficients above it pure round-off, which measures the
        // noise floor of the interpolated eliminant.
        let degree = self.bezout as usize;
        let nodes = degree + 1 + RESULTANT_EXTRA_NODES;
        let mut values = Vec::with_capacity(nodes);
        let mut hadamard_max = 0.0f64;
        for k in 0..nodes {
            let x = Complex64::from_polar(1.0, TAU * k as f64 / nodes as f64);
            let (det, bound) = sylvester_det(&a.coeffs_in_y(x), &b.coeffs_in_y(x));
            hadamard_max = hadamard_max.max(bound);
            values.push(det);
        }
        if !self.etale && max_modulus(&values) <= self.tol.degenerate * hadamard_max {
            return None;
        }
        // Inverse DFT on the unit circle.
        let mut eliminant: UniPoly = (0..nodes)
            .map(|j| {
                let mut s = Complex64::zero();
                for (k, v) in values.iter().enumerate() {
                    let angle = -TAU * ((j * k) % nodes) as f64 / nodes as f64;
                    s += v * Complex64::from_polar(1.0, angle);
                }
                s / nodes as f64
            })
            .collect();
        let noise = max_modulus(&eliminant[degree + 1..]);
        eliminant.truncate(degree + 1);
        let peak = max_modulus(&eliminant);
        if !self.etale && peak <= RESULTANT_SIGNAL_RATIO * noise {
            return None;
        }
        let cutoff = (16.0 * noise).max(1e-14 * peak);
        while eliminant.last().is_some_and(|c| c.norm() <= cutoff) {
            eliminant.pop();
        }
        // A root of multiplicity k carries at most k common points, so each
        // cluster of eliminant roots keeps its k best candidates.
        let roots = aberth(&eliminant).roots;
        let mut taken = vec![false; roots.len()];
        let mut out = Vec::new();
        for i in 0..roots.len() {
            if taken[i] {
                continue;
            }
            let tol = ROOT_CLUSTER * (1.0 + roots[i].norm());
            let members: Vec<usize> = (i..roots.len())
                .filter(|&j| !taken[j] && (roots[j] - roots[i]).norm() <= tol)
                .collect();
            let x = members.iter().map(|&j| roots[j]).sum::<Complex64>() / members.len() as f64;
            for &j in &members {
                taken[j] = true;
            }
            let mut ca = a.coeffs_in_y(x);
            let mut cb = b.coeffs_in_y(x);
            trim_roundoff(&mut ca, &a.abs_coeffs_in_y(x.norm()), ROUNDOFF_TRIM);
            trim_roundoff(&mut cb, &b.abs_coeffs_in_y(x.norm()), ROUNDOFF_TRIM);
            let usable = |c: &UniPoly| c.len() >= 2;
            let chosen = match (usable(&ca), usable(&cb)) {
                (true, true) if cb.len() < ca.len() => cb,
                (true, _) => ca,
                (false, true) => cb,
                (false, false) => continue,
            };
            let mut ys: Vec<(f64, Complex64)> = aberth(&chosen)
                .roots
                .into_iter()
                .map(|y| (a.eval(x, y).norm_sqr() + b.eval(x, y).norm_sqr(), y))
                .collect();
            ys.sort_by(|l, r| l.0.total_cmp(&r.0));
            out.extend(ys.into_iter().take(members.len()).map(|(_, y)| (x, y)));
        }
        Some(out)
    }

    /// Newton's method on `F(p) = target`, returning the best iterate and its
    /// residual.
    fn polish(&self, start: Point, target: Point) -> (Point, f64) {
        let residual = |p: Point| {
            let (u, v) = self.work.eval(p.0, p.1);
            (u - target.0, v - target.1)
        };
        let mut p = start;
        let mut r = residual(p);
        let mut best = (p, norm2(r));
        for _ in 0..30 {
            if !best.1.is_finite() {
                break;
            }
            let [[a, b], [c, d]] = self.work.jacobian(p.0, p.1);
            let det = a * d - b * c;
            if det.is_zero() {
                break;
            }
            let dx = (d * r.0 - b * r.1) / det;
            let dy = (a * r.1 - c * r.0) / det;
            p = (p.0 - dx, p.1 - dy);
            r = residual(p);
            let rn = norm2(r);
            if !rn.is_finite() {
                break;
            }
            if rn < best.1 {
                best = (p, rn);
            }
            let step = norm2((dx, dy));
            if step <= 4.0 * f64::EPSILON * (1.0 + norm2(p)) || rn == 0.0 {
                break;
            }
        }
        best
    }
}

/// Determinant of the Sylvester matrix of `a` and `b` (ascending
/// coefficients), together with Hadamard's bound on its modulus.
fn sylvester_det(a: &[Complex64], b: &[Complex64]) -> (Complex64, f64) {
    let da = a.len().saturating_sub(1);
    let db = b.len().saturating_sub(1);
    let n = da + db;
    if n == 0 {
        return (Complex64::new(1.0, 0.0), 1.0);
    }
    let mut m = vec![Complex64::zero(); n * n];
    // Row r < db: coefficients of a, descending, shifted right by r.
    for r in 0..db {
        for (k, &c) in a.iter().rev().enumerate() {
            m[r * n + r + k] = c;
        }
    }
    for r in 0..da {
        for (k, &c) in b.iter().rev().enumerate() {
            m[(db + r) * n + r + k] = c;
        }
    }
    let bound: f64 = (0..n)
        .map(|r| m[r * n..(r + 1) * n].iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt())
        .product();
    (lu_det(&mut m, n), bound)
}

fn lu_det(m: &mut [Complex64], n: usize) -> Complex64 {
    let mut det = Complex64::new(1.0, 0.0);
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&i, &j| m[i * n + col].norm().total_cmp(&m[j * n + col].norm()))
            .unwrap_or(col);
        if m[pivot * n + col].is_zero() {
            return Complex64::zero();
        }
        if pivot != col {
            for k in 0..n {
                m.swap(pivot * n + k, col * n + k);
            }
            det = -det;
        }
        let p = m[col * n + col];
        det *= p;
        for r in col + 1..n {
            let factor = m[r * n + col] / p;
            if factor.is_zero() {
                continue;
            }
            for k in col..n {
                let v = m[col * n + k];
                m[r * n + k] -= factor * v;
            }
        }
    }
    det
}

/// Solves one fiber with a throwaway solver.
pub fn solve_fiber<C: Coeff>(f: &PolyMap<C>, target: Point) -> Result<FiberResult, FiberError> {
    Ok(FiberSolver::new(f)?.solve(target))
}

/// Radius of the target ball used by [`geometric_degree`].
pub const TARGET_RADIUS: f64 = 10.0;
pub const DEFAULT_TARGETS: usize = 25;

/// Estimated geometric degree: the largest fiber over random targets.
#[derive(Clone, Debug, PartialEq)]
pub struct DegreeEstimate {
    pub d: usize,
    pub samples: usize,
    /// Fiber size -> number of targets.
    pub histogram: BTreeMap<usize, usize>,
    /// The maximum was attained by at least 80% of the targets.
    pub confident: bool,
}

/// Samples `k_targets` uniform targets in the ball of radius
/// [`TARGET_RADIUS`], target `i` drawn from stream `i` of `seed`.
pub fn geometric_degree<C: Coeff>(f: &PolyMap<C>, k_targets: usize, seed: u64) -> Result<DegreeEstimate, FiberError> {
    if k_targets < 5 {
        return Err(FiberError::TooFewTargets { min: 5, got: k_targets });
    }
    let solver = FiberSolver::new(f)?;
    let sizes: Vec<Result<usize, FiberError>> = (0..k_targets)
        .into_par_iter()
        .map(|i| {
            let target = uniform_ball(&mut substream(seed, i as u64), TARGET_RADIUS);
            let fiber = solver.solve(target);
            match fiber.status {
                FiberStatus::Degenerate => Err(FiberError::Degenerate(
                    target.0.to_string(),
                    target.1.to_string(),
                )),
                _ => Ok(fiber.count()),
            }
        })
        .collect();
    let mut histogram = BTreeMap::new();
    for s in sizes {
        *histogram.entry(s?).or_insert(0) += 1;
    }
    let d = histogram.keys().next_back().copied().unwrap_or(0);
    let at_max = histogram.get(&d).copied().unwrap_or(0);
    Ok(DegreeEstimate {
        d,
        samples: k_targets,
        histogram,
        confident: at_max as f64 >= 0.8 * k_targets as f64,
    })
}

/// Preimages of one target inside a region.
#[derive(Clone, Debug, PartialEq)]
pub struct RegionFiber {
    pub inside: usize,
    /// Some preimage lies within the cluster tolerance of the region boundary.
    pub ambiguous: bool,
    pub status: FiberStatus,
}

pub fn preimages_in<R: Region + ?Sized>(solver: &FiberSolver, w: Point, region: &R) -> RegionFiber {
    let fiber = solver.solve(w);
    let mut inside = 0;
    let mut ambiguous = false;
    for &p in &fiber.points {
        if region.boundary_distance(p) <= solver.tol.cluster_tol(p) {
            ambiguous = true;
        }
        if region.contains(p) {
            inside += 1;
        }
    }
    RegionFiber {
        inside,
        ambiguous,
        status: fiber.status,
    }
}

/// Whether `w` has a preimage in `region`.
pub fn image_contains<R: Region + ?Sized>(solver: &FiberSolver, w: Point, region: &R) -> Result<bool, FiberError> {
    let rf = preimages_in(solver, w, region);
    if rf.status == FiberStatus::Degenerate {
        return Err(FiberError::Degenerate(w.0.to_string(), w.1.to_string()));
    }
    Ok(rf.inside > 0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::map::ExactMap;
    use crate::scalar::GaussianRational;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn q(v: i64) -> GaussianRational {
        GaussianRational::from(v)
    }

    fn close(p: Point, e: Point, tol: f64) -> bool {
        norm2((p.0 - e.0, p.1 - e.1)) < tol
    }

    #[test]
    fn identity_fiber() {
        let t = (c(1.5, -2.0), c(0.25, 3.0));
        let r = solve_fiber(&ExactMap::identity(), t).unwrap();
        assert_eq!(r.status, FiberStatus::Finite);
        assert_eq!(r.points.len(), 1);
        assert!(close(r.points[0], t, 1e-14));
    }

    #[test]
    fn shear_fiber() {
        let f = ExactMap::shear(&[q(0), q(0), q(1)]);
        let (a, b) = (c(1.2, 0.7), c(-3.0, 0.4));
        let r = solve_fiber(&f, (a, b)).unwrap();
        assert_eq!(r.points.len(), 1);
        assert!(close(r.points[0], (a * a - b, a), 1e-12));
    }

    #[test]
    fn power_map_fiber_over_one() {
        let r = solve_fiber(&ExactMap::power(2, 3), (c(1.0, 0.0), c(1.0, 0.0))).unwrap();
        assert_eq!(r.points.len(), 6);
        for &(x, y) in &r.points {
            assert!((x * x - 1.0).norm() < 1e-12);
            assert!((y.powu(3) - 1.0).norm() < 1e-12);
        }
        assert!(r.max_residual() < 1e-12);
    }

    #[test]
    fn resultant_path_on_mixed_map() {
        // (X^2 + Y^2, XY + X) forces the Sylvester route in both orientations.
        let f = ExactMap::new(
            crate::poly::ExactPoly::from_terms([(2, 0, q(1)), (0, 2, q(1))]),
            crate::poly::ExactPoly::from_terms([(1, 1, q(1)), (1, 0, q(1))]),
        );
        let solver = FiberSolver::new(&f).unwrap();
        assert_eq!(solver.method, Method::Resultant);
        let t = (c(2.0, 1.0), c(-0.5, 0.3));
        let r = solver.solve(t);
        assert_eq!(r.status, FiberStatus::Finite);
        assert_eq!(r.points.len(), 4);
        let cf = f.to_float();
        for &(x, y) in &r.points {
            let (u, v) = cf.eval(&x, &y);
            assert!(close((u, v), t, 1e-10));
        }
    }

    #[test]
    fn degenerate_fibers() {
        let xx = ExactMap::new(crate::poly::ExactPoly::x(), crate::poly::ExactPoly::x());
        let r = solve_fiber(&xx, (c(1.0, 0.0), c(1.0, 0.0))).unwrap();
        assert_eq!(r.status, FiberStatus::Degenerate);
        let r = solve_fiber(&xx, (c(1.0, 0.0), c(2.0, 0.0))).unwrap();
        assert_eq!(r.status, FiberStatus::Empty);

        let s = crate::poly::ExactPoly::from_terms([(1, 0, q(1)), (0, 1, q(1))]);
        let diag = ExactMap::new(s.clone(), s);
        let r = solve_fiber(&diag, (c(1.0, 0.0), c(1.0, 0.0))).unwrap();
        assert_eq!(r.status, FiberStatus::Degenerate);
    }

    #[test]
    fn constant_components_rejected() {
        let f = ExactMap::new(crate::poly::ExactPoly::one(), crate::poly::ExactPoly::y());
        assert_eq!(
            FiberSolver::new(&f).unwrap_err(),
            FiberError::ConstantComponent(Component::P)
        );
    }

    #[test]
    fn degree_of_power_maps() {
        let d = geometric_degree(&ExactMap::power(2, 3), 25, 42).unwrap();
        assert_eq!(d.d, 6);
        assert!(d.confident);
        assert_eq!(geometric_degree(&ExactMap::power(4, 9), 25, 42).unwrap().d, 36);
        assert!(geometric_degree(&ExactMap::identity(), 4, 1).is_err());
    }

    #[test]
    fn sylvester_of_linear_pair() {
        // Res(y - 2, y - 5) = -3 in the convention rows(a) then rows(b).
        let (det, _) = sylvester_det(&[c(-2.0, 0.0), c(1.0, 0.0)], &[c(-5.0, 0.0), c(1.0, 0.0)]);
        assert!((det - c(-3.0, 0.0)).norm() < 1e-14);
    }
}
