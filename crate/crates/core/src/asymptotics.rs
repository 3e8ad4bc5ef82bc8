//! Canonical rational maps `R(X, Y) = (X^-α, X^β Y + X^-α Φ(X))` and the
//! Laurent substitution `F ∘ R`.

use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{AsymptoticsError, ParseError};
use crate::laurent::LaurentBivar;
use crate::map::{ExactMap, PolyMap};
use crate::poly::{BivarPoly, ExactPoly};
use crate::sampling::Point;
use crate::scalar::{parse_rational, Coeff, GaussianRational};

type Laurent = LaurentBivar<GaussianRational>;

/// The triple `(α, β, Φ)`. [`CanonicalRational::validate`] enforces both side
/// conditions (`deg Φ < α + β`, gcd of the effective exponents is 1);
/// [`CanonicalRational::unchecked`] only requires `α >= 1`, which is all the
/// substitution itself needs.
#[derive(Clone, Debug, PartialEq)]
pub struct CanonicalRational {
    alpha: u32,
    beta: u32,
    /// Ascending coefficients of Φ, without trailing zeros.
    phi: Vec<GaussianRational>,
}

fn trim(mut phi: Vec<GaussianRational>) -> Vec<GaussianRational> {
    while phi.last().is_some_and(|c| c.is_zero()) {
        phi.pop();
    }
    phi
}

impl CanonicalRational {
    pub fn validate(alpha: u32, beta: u32, phi: Vec<GaussianRational>) -> Result<Self, AsymptoticsError> {
        let r = Self::unchecked(alpha, beta, phi)?;
        let bound = alpha + beta;
        if let Some(d) = r.phi_degree() {
            if d >= bound {
                return Err(AsymptoticsError::PhiDegree { degree: d, bound });
            }
        }
        let exponents = r.effective_exponents();
        let gcd = exponents.iter().fold(0u32, |g, &e| g.gcd(&e));
        if gcd != 1 {
            return Err(AsymptoticsError::ExponentGcd { exponents, gcd });
        }
        Ok(r)
    }

    pub fn unchecked(alpha: u32, beta: u32, phi: Vec<GaussianRational>) -> Result<Self, AsymptoticsError> {
        if alpha == 0 {
            return Err(AsymptoticsError::AlphaNotPositive);
        }
        Ok(Self {
            alpha,
            beta,
            phi: trim(phi),
        })
    }

    /// Takes Φ from a polynomial that must not involve `Y`.
    pub fn phi_from_poly(p: &ExactPoly) -> Result<Vec<GaussianRational>, AsymptoticsError> {
        if p.degree_y() > 0 {
            return Err(AsymptoticsError::PhiNotUnivariate);
        }
        let mut phi = vec![GaussianRational::zero(); p.degree_x() as usize + 1];
        for ((i, _), c) in p.terms() {
            phi[i as usize] = c.clone();
        }
        Ok(trim(phi))
    }

    pub fn alpha(&self) -> u32 {
        self.alpha
    }

    pub fn beta(&self) -> u32 {
        self.beta
    }

    pub fn phi(&self) -> &[GaussianRational] {
        &self.phi
    }

    pub fn phi_degree(&self) -> Option<u32> {
        self.phi.len().checked_sub(1).map(|d| d as u32)
    }

    /// Exponents of `X` appearing in `X^(α+β) Y + Φ(X)`, ascending.
    pub fn effective_exponents(&self) -> Vec<u32> {
        let mut e: Vec<u32> = self
            .phi
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, _)| i as u32)
            .collect();
        e.push(self.alpha + self.beta);
        e.sort_unstable();
        e.dedup();
        e
    }

    pub fn is_canonical(&self) -> bool {
        Self::validate(self.alpha, self.beta, self.phi.clone()).is_ok()
    }

    /// The two components of `R` as Laurent polynomials.
    pub fn components(&self) -> (Laurent, Laurent) {
        let a = -(self.alpha as i64);
        let first = Laurent::monomial(a, 0, GaussianRational::one());
        let mut second = Laurent::monomial(self.beta as i64, 1, GaussianRational::one());
        for (k, c) in self.phi.iter().enumerate() {
            second.add_term(k as i64 + a, 0, c.clone());
        }
        (first, second)
    }
}

/// `(F ∘ R)` as a pair of Laurent polynomials.
#[derive(Clone, Debug, PartialEq)]
pub struct LaurentMapPair {
    pub first: Laurent,
    pub second: Laurent,
}

impl LaurentMapPair {
    pub fn is_polynomial(&self) -> bool {
        self.first.is_polynomial() && self.second.is_polynomial()
    }

    pub fn to_map(&self) -> Option<ExactMap> {
        Some(PolyMap::new(self.first.to_poly()?, self.second.to_poly()?))
    }
}

/// `f(inner)` for a Laurent pair `inner`.
pub fn compose_laurent(f: &ExactMap, inner: &LaurentMapPair) -> LaurentMapPair {
    LaurentMapPair {
        first: Laurent::substitute_into(f.p(), &inner.first, &inner.second),
        second: Laurent::substitute_into(f.q(), &inner.first, &inner.second),
    }
}

/// `f ∘ r`, exact. No `X` exponent can fall below `-α · deg f`.
pub fn substitute(f: &ExactMap, r: &CanonicalRational) -> LaurentMapPair {
    let (first, second) = r.components();
    compose_laurent(f, &LaurentMapPair { first, second })
}

pub fn is_polynomial(pair: &LaurentMapPair) -> bool {
    pair.is_polynomial()
}

/// The `R`-dual `G_R = f ∘ r`, when it is polynomial.
pub fn dual_map(f: &ExactMap, r: &CanonicalRational) -> Result<ExactMap, AsymptoticsError> {
    substitute(f, r).to_map().ok_or(AsymptoticsError::NotPolynomial)
}

/// `G_R(0, y)` at `samples` evenly spaced real `y` in `[-2, 2]`.
pub fn component_parametrization<C: Coeff>(g_r: &PolyMap<C>, samples: usize) -> Vec<Point> {
    let f = g_r.to_float();
    let zero = Complex64::new(0.0, 0.0);
    (0..samples)
        .map(|k| {
            let t = if samples > 1 {
                -2.0 + 4.0 * k as f64 / (samples - 1) as f64
            } else {
                0.0
            };
            f.eval(&zero, &Complex64::new(t, 0.0))
        })
        .collect()
}

/// Whether polynomiality of `g ∘ r` carried over to `(f ∘ g) ∘ r`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BasisReport {
    pub inner_polynomial: bool,
    pub composite_polynomial: bool,
    /// `g ∘ r` polynomial but `(f ∘ g) ∘ r` not.
    pub violation: bool,
}

pub fn check_basis_monotonicity(f: &ExactMap, g: &ExactMap, r: &CanonicalRational) -> BasisReport {
    let inner_polynomial = substitute(g, r).is_polynomial();
    let composite_polynomial = substitute(&f.compose(g), r).is_polynomial();
    BasisReport {
        inner_polynomial,
        composite_polynomial,
        violation: inner_polynomial && !composite_polynomial,
    }
}

/// Parses a polynomial in `X` (and optionally `Y`) with rational
/// coefficients, e.g. `"X"`, `"2X^3 - 1/2*X + 3"`, `"X*Y - Y^2"`.
pub fn parse_poly(expr: &str) -> Result<ExactPoly, ParseError> {
    let err = |reason: &str| ParseError::Expression {
        expr: expr.to_string(),
        reason: reason.to_string(),
    };
    let cleaned: String = expr.chars().filter(|c| !c.is_whitespace()).collect();
    if cleaned.is_empty() {
        return Err(err("empty expression"));
    }
    let mut terms: Vec<(bool, &str)> = Vec::new();
    let mut start = 0;
    let mut negative = false;
    let bytes = cleaned.as_bytes();
    for (i, &b) in bytes.iter().enumerate() {
        if (b == b'+' || b == b'-') && i > 0 && bytes[i - 1] != b'^' {
            terms.push((negative, &cleaned[start..i]));
            negative = b == b'-';
            start = i + 1;
        } else if (b == b'+' || b == b'-') && i == 0 {
            negative = b == b'-';
            start = 1;
        }
    }
    terms.push((negative, &cleaned[start..]));

    let mut out = ExactPoly::zero();
    for (neg, term) in terms {
        if term.is_empty() {
            return Err(err("dangling sign"));
        }
        let mut coeff = GaussianRational::one();
        let (mut i, mut j) = (0u32, 0u32);
        for factor in term.split('*').filter(|f| !f.is_empty()) {
            // A leading numeric prefix may be glued to a variable: "2X^3".
            let split = factor.find(['X', 'Y', 'x', 'y']);
            let (num, var) = match split {
                Some(k) => factor.split_at(k),
                None => (factor, ""),
            };
            if !num.is_empty() {
                coeff = &coeff * &GaussianRational::real(parse_rational(num).map_err(|_| err("bad coefficient"))?);
            }
            if var.is_empty() {
                continue;
            }
            let (name, exp) = match var.split_once('^') {
                Some((n, e)) => (n, e.parse::<u32>().map_err(|_| err("bad exponent"))?),
                None => (var, 1),
            };
            match name {
                "X" | "x" => i += exp,
                "Y" | "y" => j += exp,
                _ => return Err(err("unknown variable")),
            }
        }
        if neg {
            coeff = -coeff;
        }
        out.add_term(i, j, coeff);
    }
    Ok(out)
}

/// Polynomials `h` in `X` and `Y - φ0·X` whose substitution under `r` is
/// polynomial, returned as a pool to build test maps `g` with `g ∘ r`
/// polynomial. `Y - φ0 X` becomes polynomial exactly when `Φ` has no terms of
/// degree strictly between 0 and `α`.
pub fn polynomial_pullback_basis(r: &CanonicalRational, max_degree: u32) -> Vec<ExactPoly> {
    let phi0 = r.phi().first().cloned().unwrap_or_else(GaussianRational::zero);
    let w = &ExactPoly::y() - &ExactPoly::monomial(1, 0, phi0);
    let mut basis = Vec::new();
    for i in 0..=max_degree {
        for j in 0..=(max_degree - i) {
            let h = &ExactPoly::monomial(i, 0, GaussianRational::one()) * &w.pow(j);
            let probe = ExactMap::new(h.clone(), BivarPoly::zero());
            if substitute(&probe, r).first.is_polynomial() {
                basis.push(h);
            }
        }
    }
    basis
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(v: i64) -> GaussianRational {
        GaussianRational::from(v)
    }

    #[test]
    fn validation_examples() {
        assert_eq!(
            CanonicalRational::validate(1, 1, vec![]),
            Err(AsymptoticsError::ExponentGcd {
                exponents: vec![2],
                gcd: 2
            })
        );
        let r = CanonicalRational::validate(2, 0, vec![q(0), q(1)]).unwrap();
        assert_eq!(r.effective_exponents(), vec![1, 2]);
        assert!(CanonicalRational::validate(1, 0, vec![]).is_ok());
        assert_eq!(
            CanonicalRational::validate(1, 0, vec![q(0), q(3)]),
            Err(AsymptoticsError::PhiDegree { degree: 1, bound: 1 })
        );
        assert_eq!(
            CanonicalRational::validate(0, 3, vec![]),
            Err(AsymptoticsError::AlphaNotPositive)
        );
    }

    #[test]
    fn substitution_examples() {
        let r12 = CanonicalRational::unchecked(1, 2, vec![]).unwrap();
        let id = substitute(&ExactMap::identity(), &r12);
        assert_eq!(id.first, Laurent::monomial(-1, 0, q(1)));
        assert_eq!(id.second, Laurent::monomial(2, 1, q(1)));
        assert!(!id.is_polynomial());

        let f = ExactMap::new(ExactPoly::monomial(1, 1, q(1)), ExactPoly::y());
        let s = substitute(&f, &r12);
        assert_eq!(s.first, Laurent::monomial(1, 1, q(1)));
        assert_eq!(s.second, Laurent::monomial(2, 1, q(1)));
        assert!(s.is_polynomial());
        assert_eq!(
            dual_map(&f, &r12).unwrap(),
            ExactMap::new(ExactPoly::monomial(1, 1, q(1)), ExactPoly::monomial(2, 1, q(1)))
        );

        let r20 = CanonicalRational::validate(2, 0, vec![q(0), q(1)]).unwrap();
        let g = ExactMap::new(ExactPoly::x(), ExactPoly::monomial(0, 2, q(1)));
        let s = substitute(&g, &r20);
        assert_eq!(
            s.second,
            Laurent::from_terms([(0, 2, q(1)), (-1, 1, q(2)), (-2, 0, q(1))])
        );
        assert!(!s.is_polynomial());
        assert_eq!(dual_map(&g, &r20), Err(AsymptoticsError::NotPolynomial));
    }

    #[test]
    fn zero_pair_is_polynomial() {
        let z = LaurentMapPair {
            first: Laurent::zero(),
            second: Laurent::zero(),
        };
        assert!(is_polynomial(&z));
    }

    #[test]
    fn parametrizations() {
        let g = ExactMap::new(ExactPoly::monomial(1, 1, q(1)), ExactPoly::monomial(2, 1, q(1)));
        assert!(component_parametrization(&g, 5)
            .iter()
            .all(|p| p.0.norm() == 0.0 && p.1.norm() == 0.0));
        let pts = component_parametrization(&ExactMap::identity(), 5);
        assert_eq!(pts[0], (Complex64::new(0.0, 0.0), Complex64::new(-2.0, 0.0)));
        let par = ExactMap::new(ExactPoly::y(), ExactPoly::monomial(0, 2, q(1)));
        for (a, b) in component_parametrization(&par, 7) {
            assert!((b - a * a).norm() < 1e-15);
        }
    }

    #[test]
    fn monotonicity_examples() {
        let r12 = CanonicalRational::unchecked(1, 2, vec![]).unwrap();
        let g = ExactMap::new(ExactPoly::monomial(1, 1, q(1)), ExactPoly::y());
        let f = ExactMap::shear(&[q(1), q(0), q(-2)]);
        let rep = check_basis_monotonicity(&f, &g, &r12);
        assert!(rep.inner_polynomial && rep.composite_polynomial && !rep.violation);

        let rep = check_basis_monotonicity(&f, &ExactMap::identity(), &r12);
        assert!(!rep.inner_polynomial && !rep.violation);

        let rep = check_basis_monotonicity(&g, &g, &r12);
        assert!(rep.inner_polynomial && rep.composite_polynomial && !rep.violation);
    }

    #[test]
    fn expression_parser() {
        assert_eq!(parse_poly("X").unwrap(), ExactPoly::x());
        assert_eq!(
            parse_poly("2X^3 - 1/2*X + 3").unwrap(),
            ExactPoly::from_terms([(3, 0, q(2)), (1, 0, GaussianRational::ratio(-1, 2)), (0, 0, q(3))])
        );
        assert_eq!(
            parse_poly("-X*Y + y^2").unwrap(),
            ExactPoly::from_terms([(1, 1, q(-1)), (0, 2, q(1))])
        );
        assert!(parse_poly("Z").is_err());
        assert!(parse_poly("X +").is_err());
        assert!(parse_poly("").is_err());
    }

    #[test]
    fn pullback_basis_is_polynomial() {
        let r = CanonicalRational::validate(2, 1, vec![q(1), q(0), q(1)]).unwrap();
        let basis = polynomial_pullback_basis(&r, 3);
        assert!(basis.len() >= 2);
        for h in basis {
            let m = ExactMap::new(h.clone(), h);
            assert!(substitute(&m, &r).is_polynomial());
        }
    }
}
