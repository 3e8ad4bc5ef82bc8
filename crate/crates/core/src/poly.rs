//! Sparse bivariate polynomials in `X`, `Y`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use num_traits::{One, Zero};

use crate::scalar::{Coeff, GaussianRational};

/// Exponent pair `(i, j)` for the monomial `X^i Y^j`.
pub type Exponent = (u32, u32);

/// A polynomial `sum c_ij X^i Y^j` stored as a sorted map from exponent pair
/// to coefficient. Zero coefficients are never stored.
#[derive(Clone, PartialEq, Debug)]
pub struct BivarPoly<C> {
    terms: BTreeMap<Exponent, C>,
}

pub type ExactPoly = BivarPoly<GaussianRational>;
pub type FloatPoly = BivarPoly<Complex64>;

impl<C: Coeff> Default for BivarPoly<C> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<C: Coeff> BivarPoly<C> {
    pub fn zero() -> Self {
        Self {
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(c: C) -> Self {
        Self::monomial(0, 0, c)
    }

    pub fn one() -> Self {
        Self::constant(C::one())
    }

    pub fn x() -> Self {
        Self::monomial(1, 0, C::one())
    }

    pub fn y() -> Self {
        Self::monomial(0, 1, C::one())
    }

    pub fn monomial(i: u32, j: u32, c: C) -> Self {
        let mut p = Self::zero();
        p.add_term(i, j, c);
        p
    }

    /// Builds a polynomial from terms, summing repeated exponents.
    pub fn from_terms<I: IntoIterator<Item = (u32, u32, C)>>(terms: I) -> Self {
        let mut p = Self::zero();
        for (i, j, c) in terms {
            p.add_term(i, j, c);
        }
        p
    }

    /// Adds `c X^i Y^j` in place, pruning the term if it cancels.
    pub fn add_term(&mut self, i: u32, j: u32, c: C) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry((i, j)) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get().clone() + c;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (Exponent, &C)> + '_ {
        self.terms.iter().map(|(e, c)| (*e, c))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, i: u32, j: u32) -> C {
        self.terms.get(&(i, j)).cloned().unwrap_or_else(C::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// True for the zero polynomial and nonzero constants.
    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|&(i, j)| i == 0 && j == 0)
    }

    /// Total degree; the zero polynomial reports 0.
    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|&(i, j)| i + j).max().unwrap_or(0)
    }

    pub fn degree_x(&self) -> u32 {
        self.terms.keys().map(|&(i, _)| i).max().unwrap_or(0)
    }

    pub fn degree_y(&self) -> u32 {
        self.terms.keys().map(|&(_, j)| j).max().unwrap_or(0)
    }

    /// `(total degree, Y-degree)` in one pass.
    pub fn degrees(&self) -> (u32, u32) {
        self.terms
            .keys()
            .fold((0, 0), |(d, dy), &(i, j)| (d.max(i + j), dy.max(j)))
    }

    pub fn scale(&self, c: &C) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self::from_terms(
            self.terms
                .iter()
                .map(|(&(i, j), a)| (i, j, a.clone() * c.clone())),
        )
    }

    pub fn derivative_x(&self) -> Self {
        Self::from_terms(
            self.terms
                .iter()
                .filter(|(&(i, _), _)| i > 0)
                .map(|(&(i, j), c)| (i - 1, j, c.clone() * C::from_i64(i as i64))),
        )
    }

    pub fn derivative_y(&self) -> Self {
        Self::from_terms(
            self.terms
                .iter()
                .filter(|(&(_, j), _)| j > 0)
                .map(|(&(i, j), c)| (i, j - 1, c.clone() * C::from_i64(j as i64))),
        )
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut result = Self::one();
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                result = &result * &base;
            }
            n >>= 1;
            if n > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// Evaluates the polynomial with `X := x`, `Y := y` in any ring `R` that
    /// the coefficients embed into. Runs Horner in `Y` over rows that are
    /// assembled from cached powers of `x`.
    pub fn eval_in<R, F>(&self, x: &R, y: &R, one: R, embed: F) -> R
    where
        R: Clone + Add<Output = R> + Mul<Output = R> + Zero,
        F: Fn(&C) -> R,
    {
        if self.terms.is_empty() {
            return R::zero();
        }
        let dx = self.degree_x() as usize;
        let mut x_pows = Vec::with_capacity(dx + 1);
        x_pows.push(one);
        for k in 1..=dx {
            let next = x_pows[k - 1].clone() * x.clone();
            x_pows.push(next);
        }
        let dy = self.degree_y();
        let mut rows: Vec<Option<R>> = vec![None; dy as usize + 1];
        for (&(i, j), c) in &self.terms {
            let term = embed(c) * x_pows[i as usize].clone();
            let slot = &mut rows[j as usize];
            *slot = Some(match slot.take() {
                Some(acc) => acc + term,
                None => term,
            });
        }
        let mut acc = R::zero();
        for (k, row) in rows.into_iter().enumerate().rev() {
            if k as u32 != dy {
                acc = acc * y.clone();
            }
            if let Some(r) = row {
                acc = acc + r;
            }
        }
        acc
    }

    pub fn eval(&self, x: &C, y: &C) -> C {
        self.eval_in(x, y, C::one(), |c| c.clone())
    }

    /// Substitutes polynomials for `X` and `Y`.
    pub fn substitute(&self, x: &Self, y: &Self) -> Self {
        if let Some(terms) = C::poly_substitute(&self.terms, &x.terms, &y.terms) {
            return Self { terms };
        }
        self.eval_in(x, y, Self::one(), |c| Self::constant(c.clone()))
    }

    /// Swaps the roles of `X` and `Y`.
    pub fn swap_variables(&self) -> Self {
        Self::from_terms(self.terms.iter().map(|(&(i, j), c)| (j, i, c.clone())))
    }

    pub fn map_coeffs<D: Coeff>(&self, f: impl Fn(&C) -> D) -> BivarPoly<D> {
        BivarPoly::from_terms(self.terms.iter().map(|(&(i, j), c)| (i, j, f(c))))
    }

    pub fn to_float(&self) -> FloatPoly {
        self.map_coeffs(|c| c.to_complex())
    }
}

impl<C: Coeff> Zero for BivarPoly<C> {
    fn zero() -> Self {
        BivarPoly::zero()
    }

    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl<C: Coeff> One for BivarPoly<C> {
    fn one() -> Self {
        BivarPoly::one()
    }
}

impl<'a, C: Coeff> Add<&'a BivarPoly<C>> for &'a BivarPoly<C> {
    type Output = BivarPoly<C>;
    fn add(self, rhs: &'a BivarPoly<C>) -> BivarPoly<C> {
        let mut out = self.clone();
        for (&(i, j), c) in &rhs.terms {
            out.add_term(i, j, c.clone());
        }
        out
    }
}

impl<C: Coeff> Add for BivarPoly<C> {
    type Output = BivarPoly<C>;
    fn add(mut self, rhs: BivarPoly<C>) -> BivarPoly<C> {
        for ((i, j), c) in rhs.terms {
            self.add_term(i, j, c);
        }
        self
    }
}

impl<'a, C: Coeff> Sub<&'a BivarPoly<C>> for &'a BivarPoly<C> {
    type Output = BivarPoly<C>;
    fn sub(self, rhs: &'a BivarPoly<C>) -> BivarPoly<C> {
        let mut out = self.clone();
        for (&(i, j), c) in &rhs.terms {
            out.add_term(i, j, -c.clone());
        }
        out
    }
}

impl<C: Coeff> Sub for BivarPoly<C> {
    type Output = BivarPoly<C>;
    fn sub(self, rhs: BivarPoly<C>) -> BivarPoly<C> {
        &self - &rhs
    }
}

impl<C: Coeff> Neg for BivarPoly<C> {
    type Output = BivarPoly<C>;
    fn neg(self) -> BivarPoly<C> {
        BivarPoly {
            terms: self.terms.into_iter().map(|(e, c)| (e, -c)).collect(),
        }
    }
}

impl<'a, C: Coeff> Mul<&'a BivarPoly<C>> for &'a BivarPoly<C> {
    type Output = BivarPoly<C>;
    fn mul(self, rhs: &'a BivarPoly<C>) -> BivarPoly<C> {
        BivarPoly {
            terms: C::poly_mul(&self.terms, &rhs.terms),
        }
    }
}

impl<C: Coeff> Mul for BivarPoly<C> {
    type Output = BivarPoly<C>;
    fn mul(self, rhs: BivarPoly<C>) -> BivarPoly<C> {
        &self * &rhs
    }
}

impl<C: Coeff + fmt::Display> fmt::Display for BivarPoly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (&(i, j), c)) in self.terms.iter().rev().enumerate() {
            if k > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "{c}")?;
            match i {
                0 => {}
                1 => f.write_str("*X")?,
                _ => write!(f, "*X^{i}")?,
            }
            match j {
                0 => {}
                1 => f.write_str("*Y")?,
                _ => write!(f, "*Y^{j}")?,
            }
        }
        Ok(())
    }
}
