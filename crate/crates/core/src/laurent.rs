//! Polynomials in `X, X^-1, Y`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::poly::BivarPoly;
use crate::scalar::Coeff;

/// A Laurent polynomial in `X` with polynomial dependence on `Y`: terms
/// `c X^i Y^j` with `i` signed and `j >= 0`. Zero coefficients are never stored.
#[derive(Clone, PartialEq, Debug)]
pub struct LaurentBivar<C> {
    terms: BTreeMap<(i64, u32), C>,
}

impl<C: Coeff> LaurentBivar<C> {
    pub fn zero() -> Self {
        Self {
            terms: BTreeMap::new(),
        }
    }

    pub fn monomial(i: i64, j: u32, c: C) -> Self {
        let mut p = Self::zero();
        p.add_term(i, j, c);
        p
    }

    pub fn constant(c: C) -> Self {
        Self::monomial(0, 0, c)
    }

    pub fn from_terms<I: IntoIterator<Item = (i64, u32, C)>>(terms: I) -> Self {
        let mut p = Self::zero();
        for (i, j, c) in terms {
            p.add_term(i, j, c);
        }
        p
    }

    pub fn add_term(&mut self, i: i64, j: u32, c: C) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry((i, j)).or_insert_with(C::zero);
        *slot = slot.clone() + c;
        if slot.is_zero() {
            self.terms.remove(&(i, j));
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = ((i64, u32), &C)> + '_ {
        self.terms.iter().map(|(e, c)| (*e, c))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Smallest `X` exponent, `None` for the zero element.
    pub fn min_x_exponent(&self) -> Option<i64> {
        self.terms.keys().map(|&(i, _)| i).min()
    }

    /// True iff no term carries a negative power of `X`.
    pub fn is_polynomial(&self) -> bool {
        self.terms.keys().all(|&(i, _)| i >= 0)
    }

    pub fn to_poly(&self) -> Option<BivarPoly<C>> {
        if !self.is_polynomial() {
            return None;
        }
        Some(BivarPoly::from_terms(
            self.terms.iter().map(|(&(i, j), c)| (i as u32, j, c.clone())),
        ))
    }

    /// Evaluates a polynomial with `X`, `Y` replaced by Laurent elements.
    pub fn substitute_into(p: &BivarPoly<C>, x: &Self, y: &Self) -> Self {
        p.eval_in(x, y, Self::one(), |c| Self::constant(c.clone()))
    }
}

impl<C: Coeff> From<&BivarPoly<C>> for LaurentBivar<C> {
    fn from(p: &BivarPoly<C>) -> Self {
        Self::from_terms(p.terms().map(|((i, j), c)| (i as i64, j, c.clone())))
    }
}

impl<C: Coeff> Zero for LaurentBivar<C> {
    fn zero() -> Self {
        LaurentBivar::zero()
    }

    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl<C: Coeff> One for LaurentBivar<C> {
    fn one() -> Self {
        Self::constant(C::one())
    }
}

impl<C: Coeff> Add for LaurentBivar<C> {
    type Output = Self;
    fn add(mut self, rhs: Self) -> Self {
        for ((i, j), c) in rhs.terms {
            self.add_term(i, j, c);
        }
        self
    }
}

impl<C: Coeff> Sub for LaurentBivar<C> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl<C: Coeff> Neg for LaurentBivar<C> {
    type Output = Self;
    fn neg(self) -> Self {
        Self {
            terms: self.terms.into_iter().map(|(e, c)| (e, -c)).collect(),
        }
    }
}

impl<C: Coeff> Mul for LaurentBivar<C> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let mut out = Self::zero();
        for (&(i1, j1), a) in &self.terms {
            for (&(i2, j2), b) in &rhs.terms {
                out.add_term(i1 + i2, j1 + j2, a.clone() * b.clone());
            }
        }
        out
    }
}

impl<C: Coeff + fmt::Display> fmt::Display for LaurentBivar<C> {
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
                _ => write!(f, "*X^({i})")?,
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

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::GaussianRational;

    type L = LaurentBivar<GaussianRational>;

    #[test]
    fn inverse_powers_cancel() {
        let x = L::monomial(1, 0, 1.into());
        let xinv = L::monomial(-1, 0, 1.into());
        assert_eq!(x * xinv, L::one());
    }

    #[test]
    fn polynomiality() {
        let p = L::from_terms([(2, 1, 1.into()), (0, 0, 3.into())]);
        assert!(p.is_polynomial());
        assert!(p.to_poly().is_some());
        let n = L::from_terms([(-1, 0, 1.into()), (2, 1, 1.into())]);
        assert!(!n.is_polynomial());
        assert_eq!(n.min_x_exponent(), Some(-1));
        assert!(L::zero().is_polynomial());
    }
}
