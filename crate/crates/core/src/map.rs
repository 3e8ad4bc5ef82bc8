//! Polynomial self-maps of the plane and the normalizations they are tested
//! against.

use num_complex::Complex64;
use num_traits::One;

use crate::error::{Component, MapError};
use crate::poly::BivarPoly;
use crate::scalar::{Coeff, GaussianRational};

/// A polynomial map `(P, Q)`, with total degrees `n = deg P`, `m = deg Q`
/// cached at construction.
#[derive(Clone, Debug)]
pub struct PolyMap<C> {
    p: BivarPoly<C>,
    q: BivarPoly<C>,
    n: u32,
    m: u32,
}

pub type ExactMap = PolyMap<GaussianRational>;
pub type FloatMap = PolyMap<Complex64>;

impl<C: Coeff> PartialEq for PolyMap<C> {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.q == other.q
    }
}

impl<C: Coeff> PolyMap<C> {
    pub fn new(p: BivarPoly<C>, q: BivarPoly<C>) -> Self {
        let n = p.total_degree();
        let m = q.total_degree();
        Self { p, q, n, m }
    }

    pub fn identity() -> Self {
        Self::new(BivarPoly::x(), BivarPoly::y())
    }

    /// The elementary shear `(Y, -X + s(Y))`, where `s` is given by its
    /// coefficients in ascending order.
    pub fn shear(s: &[C]) -> Self {
        let mut q = BivarPoly::monomial(1, 0, -C::one());
        for (j, c) in s.iter().enumerate() {
            q.add_term(0, j as u32, c.clone());
        }
        Self::new(BivarPoly::y(), q)
    }

    /// The triangular map `(X, Y + t(X))`.
    pub fn triangular(t: &[C]) -> Self {
        let mut q = BivarPoly::y();
        for (i, c) in t.iter().enumerate() {
            q.add_term(i as u32, 0, c.clone());
        }
        Self::new(BivarPoly::x(), q)
    }

    /// The affine map `(aX + bY + e, cX + dY + f)`.
    pub fn affine(a: C, b: C, c: C, d: C, e: C, f: C) -> Self {
        Self::new(
            BivarPoly::from_terms([(1, 0, a), (0, 1, b), (0, 0, e)]),
            BivarPoly::from_terms([(1, 0, c), (0, 1, d), (0, 0, f)]),
        )
    }

    /// `(X^a, Y^b)`.
    pub fn power(a: u32, b: u32) -> Self {
        Self::new(
            BivarPoly::monomial(a, 0, C::one()),
            BivarPoly::monomial(0, b, C::one()),
        )
    }

    pub fn p(&self) -> &BivarPoly<C> {
        &self.p
    }

    pub fn q(&self) -> &BivarPoly<C> {
        &self.q
    }

    pub fn component(&self, c: Component) -> &BivarPoly<C> {
        match c {
            Component::P => &self.p,
            Component::Q => &self.q,
        }
    }

    /// `(deg P, deg Q)`.
    pub fn degrees(&self) -> (u32, u32) {
        (self.n, self.m)
    }

    pub fn degree(&self) -> u32 {
        self.n.max(self.m)
    }

    /// The Bezout bound `deg P * deg Q` on the size of a finite fiber.
    pub fn bezout_bound(&self) -> u64 {
        self.n as u64 * self.m as u64
    }

    pub fn eval(&self, x: &C, y: &C) -> (C, C) {
        (self.p.eval(x, y), self.q.eval(x, y))
    }

    /// `self ∘ inner`, i.e. `(x, y) -> self(inner(x, y))`.
    pub fn compose(&self, inner: &Self) -> Self {
        Self::new(
            self.p.substitute(&inner.p, &inner.q),
            self.q.substitute(&inner.p, &inner.q),
        )
    }

    /// `det J = P_X Q_Y - P_Y Q_X`.
    pub fn jacobian_det(&self) -> BivarPoly<C> {
        let a = &self.p.derivative_x() * &self.q.derivative_y();
        let b = &self.p.derivative_y() * &self.q.derivative_x();
        &a - &b
    }

    pub fn swap_variables(&self) -> Self {
        Self::new(self.p.swap_variables(), self.q.swap_variables())
    }

    pub fn to_float(&self) -> FloatMap {
        PolyMap::new(self.p.to_float(), self.q.to_float())
    }

    pub fn equal_exact(&self, other: &Self) -> bool {
        self == other
    }
}

/// Outcome of the membership test for the normalized Keller semigroup.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct KellerReport {
    /// `det J ≡ 1`.
    pub det_one: bool,
    /// `deg_Y P = deg P`.
    pub p_y_degree: bool,
    /// `deg_Y Q = deg Q`.
    pub q_y_degree: bool,
    pub strict: bool,
}

impl KellerReport {
    pub fn passes(&self) -> bool {
        if self.strict {
            self.det_one && self.p_y_degree && self.q_y_degree
        } else {
            self.det_one
        }
    }
}

fn y_degree_is_full<C: Coeff>(p: &BivarPoly<C>) -> bool {
    let (d, dy) = p.degrees();
    d == dy
}

impl ExactMap {
    /// Checks `det J ≡ 1` and, in strict mode, that both components have
    /// Y-degree equal to their total degree.
    pub fn keller_report(&self, strict: bool) -> KellerReport {
        KellerReport {
            det_one: self.jacobian_det() == BivarPoly::one(),
            p_y_degree: y_degree_is_full(&self.p),
            q_y_degree: y_degree_is_full(&self.q),
            strict,
        }
    }

    pub fn is_keller_normalized(&self, strict: bool) -> bool {
        self.keller_report(strict).passes()
    }

    /// Precomposes with `X -> X + tY` for the first `t` in `1, -1, 2, -2, ...`
    /// that gives both components full Y-degree. The substitution has unit
    /// determinant, so `det J` is unchanged. Maps that already satisfy the
    /// degree condition are returned as they are.
    pub fn normalize_by_shear(&self) -> Result<Self, MapError> {
        let det = self.jacobian_det();
        if !det.is_constant() || det.is_zero() {
            return Err(MapError::NonConstantJacobian);
        }
        if y_degree_is_full(&self.p) && y_degree_is_full(&self.q) {
            return Ok(self.clone());
        }
        let tried = 2 * (self.degree() as usize + 1);
        let mut last_failure = Component::P;
        for k in 0..tried {
            let t = shear_parameter(k);
            let sub_x = BivarPoly::from_terms([
                (1, 0, GaussianRational::one()),
                (0, 1, GaussianRational::from(t)),
            ]);
            let candidate = self.compose(&PolyMap::new(sub_x, BivarPoly::y()));
            if !y_degree_is_full(&candidate.p) {
                last_failure = Component::P;
            } else if !y_degree_is_full(&candidate.q) {
                last_failure = Component::Q;
            } else {
                return Ok(candidate);
            }
        }
        Err(MapError::ShearSearchFailed {
            component: last_failure,
            tried,
        })
    }
}

/// `k`-th entry of `1, -1, 2, -2, 3, ...`.
fn shear_parameter(k: usize) -> i64 {
    let m = (k / 2 + 1) as i64;
    if k.is_multiple_of(2) {
        m
    } else {
        -m
    }
}

impl<C: Coeff> Default for PolyMap<C> {
    fn default() -> Self {
        Self::identity()
    }
}
