//! Coefficient fields.
//!
//! Two coefficient types back every polynomial in the crate: [`GaussianRational`]
//! for exact symbolic work and [`Complex64`] for numerical pipelines. Mixing
//! the two is rejected at compile time, since a `BivarPoly<GaussianRational>`
//! and a `BivarPoly<Complex64>` are different types. Converting exact to float
//! is always available; there is no float to exact conversion.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::ParseError;
use crate::poly::Exponent;

/// Operations a polynomial coefficient must support.
pub trait Coeff:
    Clone
    + PartialEq
    + fmt::Debug
    + Send
    + Sync
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    fn from_i64(v: i64) -> Self;

    fn to_complex(&self) -> Complex64;

    /// Whether the value is represented exactly.
    const EXACT: bool;

    /// Product of two sparse polynomials given as term maps.
    fn poly_mul(a: &BTreeMap<Exponent, Self>, b: &BTreeMap<Exponent, Self>) -> BTreeMap<Exponent, Self> {
        let mut acc: BTreeMap<Exponent, Self> = BTreeMap::new();
        for (&(i1, j1), x) in a {
            for (&(i2, j2), y) in b {
                let prod = x.clone() * y.clone();
                match acc.entry((i1 + i2, j1 + j2)) {
                    Entry::Occupied(mut e) => {
                        let sum = e.get().clone() + prod;
                        *e.get_mut() = sum;
                    }
                    Entry::Vacant(e) => {
                        e.insert(prod);
                    }
                }
            }
        }
        acc.retain(|_, c| !c.is_zero());
        acc
    }

    /// Exact substitution `p(x, y)` for coefficient types with a faster route
    /// than generic Horner; `None` selects the generic one.
    fn poly_substitute(
        _p: &BTreeMap<Exponent, Self>,
        _x: &BTreeMap<Exponent, Self>,
        _y: &BTreeMap<Exponent, Self>,
    ) -> Option<BTreeMap<Exponent, Self>> {
        None
    }
}

impl Coeff for Complex64 {
    fn from_i64(v: i64) -> Self {
        Complex64::new(v as f64, 0.0)
    }

    fn to_complex(&self) -> Complex64 {
        *self
    }

    const EXACT: bool = false;
}

/// A complex number whose real and imaginary parts are arbitrary-precision
/// rationals. `BigRational` keeps both parts in lowest terms with a positive
/// denominator.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct GaussianRational {
    pub re: BigRational,
    pub im: BigRational,
}

impl GaussianRational {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        Self { re, im }
    }

    pub fn real(re: BigRational) -> Self {
        Self {
            re,
            im: BigRational::zero(),
        }
    }

    pub fn from_ints(re: i64, im: i64) -> Self {
        Self {
            re: BigRational::from_integer(re.into()),
            im: BigRational::from_integer(im.into()),
        }
    }

    pub fn ratio(num: i64, den: i64) -> Self {
        Self::real(BigRational::new(num.into(), den.into()))
    }

    pub fn i() -> Self {
        Self::from_ints(0, 1)
    }

    pub fn conj(&self) -> Self {
        Self {
            re: self.re.clone(),
            im: -self.im.clone(),
        }
    }

    /// `|z|^2`, exact.
    pub fn norm_sqr(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    /// Multiplicative inverse, `None` for zero.
    pub fn inv(&self) -> Option<Self> {
        let n = self.norm_sqr();
        if n.is_zero() {
            return None;
        }
        Some(Self {
            re: &self.re / &n,
            im: -(&self.im / &n),
        })
    }

    /// Exact value of a finite `f64`. Every finite double is a dyadic
    /// rational, so this is lossless; it exists for geometry that is laid out
    /// on dyadic grids, not as a general float-to-exact conversion.
    pub fn from_dyadic_f64(re: f64, im: f64) -> Option<Self> {
        Some(Self {
            re: BigRational::from_float(re)?,
            im: BigRational::from_float(im)?,
        })
    }
}

pub(crate) fn rational_to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        // Ratio::to_f64 only fails for out-of-range values.
        if r.is_negative() {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        }
    })
}

/// Formats a rational as `num/den`, always with an explicit denominator.
pub fn format_rational(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Parses `num/den` or a bare integer.
pub fn parse_rational(s: &str) -> Result<BigRational, ParseError> {
    let s = s.trim();
    let bad = || ParseError::Rational(s.to_string());
    match s.split_once('/') {
        Some((n, d)) => {
            let n = BigInt::from_str(n.trim()).map_err(|_| bad())?;
            let d = BigInt::from_str(d.trim()).map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(n, d))
        }
        None => Ok(BigRational::from_integer(
            BigInt::from_str(s).map_err(|_| bad())?,
        )),
    }
}

impl Zero for GaussianRational {
    fn zero() -> Self {
        Self {
            re: BigRational::zero(),
            im: BigRational::zero(),
        }
    }

    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
}

impl One for GaussianRational {
    fn one() -> Self {
        Self::from_ints(1, 0)
    }
}

impl Add for GaussianRational {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self {
            re: self.re + rhs.re,
            im: self.im + rhs.im,
        }
    }
}

impl<'a> Add<&'a GaussianRational> for &'a GaussianRational {
    type Output = GaussianRational;
    fn add(self, rhs: Self) -> GaussianRational {
        GaussianRational {
            re: &self.re + &rhs.re,
            im: &self.im + &rhs.im,
        }
    }
}

impl Sub for GaussianRational {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self {
            re: self.re - rhs.re,
            im: self.im - rhs.im,
        }
    }
}

impl<'a> Sub<&'a GaussianRational> for &'a GaussianRational {
    type Output = GaussianRational;
    fn sub(self, rhs: Self) -> GaussianRational {
        GaussianRational {
            re: &self.re - &rhs.re,
            im: &self.im - &rhs.im,
        }
    }
}

impl Mul for GaussianRational {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        &self * &rhs
    }
}

impl<'a> Mul<&'a GaussianRational> for &'a GaussianRational {
    type Output = GaussianRational;
    fn mul(self, rhs: Self) -> GaussianRational {
        if self.im.is_zero() && rhs.im.is_zero() {
            return GaussianRational::real(&self.re * &rhs.re);
        }
        GaussianRational {
            re: &self.re * &rhs.re - &self.im * &rhs.im,
            im: &self.re * &rhs.im + &self.im * &rhs.re,
        }
    }
}

impl Div for GaussianRational {
    type Output = Self;
    /// Panics on division by zero, like the rational types it wraps.
    fn div(self, rhs: Self) -> Self {
        let inv = rhs.inv().expect("division by zero");
        #[allow(clippy::suspicious_arithmetic_impl)]
        let q = &self * &inv;
        q
    }
}

impl Neg for GaussianRational {
    type Output = Self;
    fn neg(self) -> Self {
        Self {
            re: -self.re,
            im: -self.im,
        }
    }
}

impl Coeff for GaussianRational {
    fn from_i64(v: i64) -> Self {
        Self::from_ints(v, 0)
    }

    fn to_complex(&self) -> Complex64 {
        Complex64::new(rational_to_f64(&self.re), rational_to_f64(&self.im))
    }

    const EXACT: bool = true;

    /// Clears denominators and multiplies over the integers, so each output
    /// coefficient is reduced once instead of after every partial sum.
    fn poly_mul(a: &BTreeMap<Exponent, Self>, b: &BTreeMap<Exponent, Self>) -> BTreeMap<Exponent, Self> {
        let (da, ia) = integer_terms(a);
        let (db, ib) = integer_terms(b);
        from_integer_terms(gi_mul(&ia, &ib), &(da * db))
    }

    /// With `x = X'/dx`, `y = Y'/dy` and `c_ij = C'_ij/dc` over a common
    /// denominator, `dc dx^m dy^n P(x, y) = Σ_j dy^(n-j) Y'^j Σ_i C'_ij dx^(m-i) X'^i`,
    /// which is evaluated by Horner in `Y'` entirely over the integers.
    fn poly_substitute(
        p: &BTreeMap<Exponent, Self>,
        x: &BTreeMap<Exponent, Self>,
        y: &BTreeMap<Exponent, Self>,
    ) -> Option<BTreeMap<Exponent, Self>> {
        let (dc, ip) = integer_terms(p);
        let (dx, ix) = integer_terms(x);
        let (dy, iy) = integer_terms(y);
        let m = p.keys().map(|e| e.0).max().unwrap_or(0);
        let n = p.keys().map(|e| e.1).max().unwrap_or(0);
        let dx_pows = powers(&dx, m);
        let dy_pows = powers(&dy, n);
        let mut x_pows: Vec<GaussianIntPoly> = vec![BTreeMap::from([((0, 0), (BigInt::one(), BigInt::zero()))])];
        for k in 1..=m as usize {
            let next = gi_mul(&x_pows[k - 1], &ix);
            x_pows.push(next);
        }
        let mut rows: Vec<GaussianIntPoly> = vec![BTreeMap::new(); n as usize + 1];
        for (&(i, j), c) in &ip {
            let scale = (&c.0 * &dx_pows[(m - i) as usize], &c.1 * &dx_pows[(m - i) as usize]);
            gi_add_scaled(&mut rows[j as usize], &scale, &x_pows[i as usize]);
        }
        let mut acc: GaussianIntPoly = BTreeMap::new();
        for (j, row) in rows.iter().enumerate().rev() {
            acc = gi_mul(&acc, &iy);
            let s = (dy_pows[n as usize - j].clone(), BigInt::zero());
            gi_add_scaled(&mut acc, &s, row);
        }
        Some(from_integer_terms(acc, &(dc * &dx_pows[m as usize] * &dy_pows[n as usize])))
    }
}

/// Polynomial with Gaussian-integer coefficients `(re, im)`.
type GaussianIntPoly = BTreeMap<Exponent, (BigInt, BigInt)>;

/// `(D, D·terms)` with `D` the lcm of every denominator.
fn integer_terms(terms: &BTreeMap<Exponent, GaussianRational>) -> (BigInt, GaussianIntPoly) {
    let den = terms.values().fold(BigInt::one(), |d, c| d.lcm(c.re.denom()).lcm(c.im.denom()));
    let scaled = terms
        .iter()
        .map(|(&e, c)| {
            let lift = |r: &BigRational| r.numer() * (&den / r.denom());
            (e, (lift(&c.re), lift(&c.im)))
        })
        .collect();
    (den, scaled)
}

fn from_integer_terms(terms: GaussianIntPoly, den: &BigInt) -> BTreeMap<Exponent, GaussianRational> {
    terms
        .into_iter()
        .filter(|(_, (re, im))| !(re.is_zero() && im.is_zero()))
        .map(|(e, (re, im))| (e, GaussianRational::new(BigRational::new(re, den.clone()), BigRational::new(im, den.clone()))))
        .collect()
}

fn powers(base: &BigInt, n: u32) -> Vec<BigInt> {
    let mut out = vec![BigInt::one()];
    for k in 1..=n as usize {
        let next = &out[k - 1] * base;
        out.push(next);
    }
    out
}

fn is_real(p: &GaussianIntPoly) -> bool {
    p.values().all(|c| c.1.is_zero())
}

fn gi_mul(a: &GaussianIntPoly, b: &GaussianIntPoly) -> GaussianIntPoly {
    let (real_a, real_b) = (is_real(a), is_real(b));
    let mut acc: GaussianIntPoly = BTreeMap::new();
    for (&(i1, j1), (ar, ai)) in a {
        for (&(i2, j2), (br, bi)) in b {
            let slot = acc.entry((i1 + i2, j1 + j2)).or_insert_with(|| (BigInt::zero(), BigInt::zero()));
            slot.0 += ar * br;
            if !(real_a || real_b) {
                slot.0 -= ai * bi;
            }
            if !real_b {
                slot.1 += ar * bi;
            }
            if !real_a {
                slot.1 += ai * br;
            }
        }
    }
    acc
}

/// `acc += s · p`.
fn gi_add_scaled(acc: &mut GaussianIntPoly, s: &(BigInt, BigInt), p: &GaussianIntPoly) {
    let real = s.1.is_zero();
    for (&e, (pr, pi)) in p {
        let slot = acc.entry(e).or_insert_with(|| (BigInt::zero(), BigInt::zero()));
        slot.0 += &s.0 * pr;
        slot.1 += &s.0 * pi;
        if !real {
            slot.0 -= &s.1 * pi;
            slot.1 += &s.1 * pr;
        }
    }
}

impl From<i64> for GaussianRational {
    fn from(v: i64) -> Self {
        Self::from_ints(v, 0)
    }
}

impl fmt::Display for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.re.is_zero(), self.im.is_zero()) {
            (_, true) => write!(f, "{}", self.re),
            (true, false) => write!(f, "{}i", self.im),
            (false, false) => {
                if self.im.is_negative() {
                    write!(f, "({} - {}i)", self.re, -self.im.clone())
                } else {
                    write!(f, "({} + {}i)", self.re, self.im)
                }
            }
        }
    }
}
