//! Dense floating-point layouts used on hot numerical paths.

use num_complex::Complex64;
use num_traits::Zero;

use crate::map::PolyMap;
use crate::poly::BivarPoly;
use crate::scalar::Coeff;

/// Ascending coefficient vector of a univariate polynomial.
pub type UniPoly = Vec<Complex64>;

pub fn horner(coeffs: &[Complex64], x: Complex64) -> Complex64 {
    coeffs
        .iter()
        .rev()
        .fold(Complex64::zero(), |acc, &c| acc * x + c)
}

/// Value and first derivative.
pub fn horner_with_derivative(coeffs: &[Complex64], x: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::zero();
    let mut dp = Complex64::zero();
    for &c in coeffs.iter().rev() {
        dp = dp * x + p;
        p = p * x + c;
    }
    (p, dp)
}

pub fn uni_mul(a: &[Complex64], b: &[Complex64]) -> UniPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![Complex64::zero(); a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

pub fn uni_add_assign(acc: &mut UniPoly, b: &[Complex64]) {
    if acc.len() < b.len() {
        acc.resize(b.len(), Complex64::zero());
    }
    for (a, &c) in acc.iter_mut().zip(b) {
        *a += c;
    }
}

/// Largest coefficient modulus, 0 for the empty polynomial.
pub fn max_modulus(coeffs: &[Complex64]) -> f64 {
    coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
}

/// Drops leading coefficients that are indistinguishable from round-off:
/// `|c_k| <= tol * bound[k]`, where `bound[k]` is the sum of the moduli of
/// the terms that produced `c_k`. A small coefficient that is not noise is
/// kept however large the others are, so roots of large modulus survive.
pub fn trim_roundoff(coeffs: &mut UniPoly, bound: &[f64], tol: f64) {
    while let Some(last) = coeffs.last() {
        let k = coeffs.len() - 1;
        if last.is_zero() || last.norm() <= tol * bound.get(k).copied().unwrap_or(0.0) {
            coeffs.pop();
        } else {
            break;
        }
    }
}

/// `rows[j][i]` holds the coefficient of `X^i Y^j`.
#[derive(Clone, Debug, Default)]
pub struct DenseBivar {
    pub rows: Vec<UniPoly>,
}

impl DenseBivar {
    pub fn from_poly<C: Coeff>(p: &BivarPoly<C>) -> Self {
        let (dx, dy) = (p.degree_x() as usize, p.degree_y() as usize);
        if p.is_zero() {
            return Self { rows: Vec::new() };
        }
        let mut rows = vec![vec![Complex64::zero(); dx + 1]; dy + 1];
        for ((i, j), c) in p.terms() {
            rows[j as usize][i as usize] = c.to_complex();
        }
        for row in &mut rows {
            while row.last().is_some_and(|c| c.is_zero()) {
                row.pop();
            }
        }
        Self { rows }
    }

    pub fn eval(&self, x: Complex64, y: Complex64) -> Complex64 {
        self.rows
            .iter()
            .rev()
            .fold(Complex64::zero(), |acc, row| acc * y + horner(row, x))
    }

    /// Degree in `Y` (0 for the zero polynomial).
    pub fn degree_y(&self) -> usize {
        self.rows.len().saturating_sub(1)
    }

    /// Coefficients in `Y` after fixing `X = x`.
    pub fn coeffs_in_y(&self, x: Complex64) -> UniPoly {
        self.rows.iter().map(|row| horner(row, x)).collect()
    }

    /// Coefficients in `Y` of `|P|` at `|x|`, a magnitude scale for round-off.
    pub fn abs_coeffs_in_y(&self, xabs: f64) -> Vec<f64> {
        self.rows
            .iter()
            .map(|row| row.iter().rev().fold(0.0, |acc, c| acc * xabs + c.norm()))
            .collect()
    }

    /// `P(X, y(X))` for a univariate `y(X)`, by Horner in `Y`.
    pub fn substitute_y(&self, y: &[Complex64]) -> UniPoly {
        let mut acc: UniPoly = Vec::new();
        for row in self.rows.iter().rev() {
            acc = uni_mul(&acc, y);
            uni_add_assign(&mut acc, row);
        }
        acc
    }

    /// The same polynomial with every coefficient replaced by its modulus.
    pub fn moduli(&self) -> Self {
        Self {
            rows: self
                .rows
                .iter()
                .map(|r| r.iter().map(|c| Complex64::new(c.norm(), 0.0)).collect())
                .collect(),
        }
    }

    /// Sum of all coefficient moduli.
    pub fn l1_norm(&self) -> f64 {
        self.rows.iter().flatten().map(|c| c.norm()).sum()
    }

    pub fn constant_term_mut(&mut self) -> &mut Complex64 {
        if self.rows.is_empty() {
            self.rows.push(Vec::new());
        }
        if self.rows[0].is_empty() {
            self.rows[0].push(Complex64::zero());
        }
        &mut self.rows[0][0]
    }
}

/// A polynomial map compiled for fast floating-point evaluation, with its
/// partial derivatives and Jacobian determinant. For exact maps the Jacobian
/// is formed symbolically before conversion, so `det J ≡ 1` evaluates to
/// exactly `1.0`.
#[derive(Clone, Debug)]
pub struct CompiledMap {
    pub p: DenseBivar,
    pub q: DenseBivar,
    pub p_x: DenseBivar,
    pub p_y: DenseBivar,
    pub q_x: DenseBivar,
    pub q_y: DenseBivar,
    pub jac: DenseBivar,
    /// `P` and `Q` with every coefficient replaced by its modulus.
    pub p_abs: DenseBivar,
    pub q_abs: DenseBivar,
}

impl CompiledMap {
    pub fn new<C: Coeff>(f: &PolyMap<C>) -> Self {
        Self {
            p: DenseBivar::from_poly(f.p()),
            q: DenseBivar::from_poly(f.q()),
            p_x: DenseBivar::from_poly(&f.p().derivative_x()),
            p_y: DenseBivar::from_poly(&f.p().derivative_y()),
            q_x: DenseBivar::from_poly(&f.q().derivative_x()),
            q_y: DenseBivar::from_poly(&f.q().derivative_y()),
            jac: DenseBivar::from_poly(&f.jacobian_det()),
            p_abs: DenseBivar::from_poly(f.p()).moduli(),
            q_abs: DenseBivar::from_poly(f.q()).moduli(),
        }
    }

    /// `Σ |c_ij| |x|^i |y|^j` over both components: the magnitude that
    /// bounds round-off when evaluating at `(x, y)`.
    pub fn eval_scale(&self, x: Complex64, y: Complex64) -> f64 {
        let (ax, ay) = (Complex64::new(x.norm(), 0.0), Complex64::new(y.norm(), 0.0));
        self.p_abs.eval(ax, ay).re + self.q_abs.eval(ax, ay).re
    }

    pub fn eval(&self, x: Complex64, y: Complex64) -> (Complex64, Complex64) {
        (self.p.eval(x, y), self.q.eval(x, y))
    }

    /// `[[P_X, P_Y], [Q_X, Q_Y]]` at `(x, y)`.
    pub fn jacobian(&self, x: Complex64, y: Complex64) -> [[Complex64; 2]; 2] {
        [
            [self.p_x.eval(x, y), self.p_y.eval(x, y)],
            [self.q_x.eval(x, y), self.q_y.eval(x, y)],
        ]
    }

    pub fn jacobian_det(&self, x: Complex64, y: Complex64) -> Complex64 {
        self.jac.eval(x, y)
    }
}
