#![allow(dead_code)]

use keller_lab::semigroup::random_shear;
use keller_lab::{ExactMap, ExactPoly, GaussianRational};
use rand::Rng;

pub fn q(v: i64) -> GaussianRational {
    GaussianRational::from(v)
}

pub fn frac(n: i64, d: i64) -> GaussianRational {
    GaussianRational::ratio(n, d)
}

/// A composite of two random shears of degree at most 2.
pub fn base_automorphism<R: Rng + ?Sized>(rng: &mut R) -> ExactMap {
    random_shear(rng, 2).compose(&random_shear(rng, 2))
}

/// `(X + a + bY, Y + c)` with small rational `a, b, c`: a unimodular affine
/// map close to the identity.
pub fn small_affine<R: Rng + ?Sized>(rng: &mut R) -> ExactMap {
    let mut small = || frac(rng.random_range(-4..=4), 20);
    let (a, b, c) = (small(), small(), small());
    ExactMap::affine(q(1), b, q(0), q(1), a, c)
}

/// `G∘T` for a small random affine `T`. Precomposing moves the domain
/// rather than the image, so images of nearby maps overlap substantially.
pub fn perturb<R: Rng + ?Sized>(rng: &mut R, g: &ExactMap) -> ExactMap {
    g.compose(&small_affine(rng))
}

/// `(X + c, Y + t(X))` with `deg t <= 3` and integer coefficients.
pub fn keller_triangular<R: Rng + ?Sized>(rng: &mut R) -> ExactMap {
    let deg = rng.random_range(1..=3);
    let t: Vec<GaussianRational> = (0..=deg).map(|_| q(rng.random_range(-2..=2))).collect();
    let tri = ExactMap::triangular(&t);
    ExactMap::new(tri.p() + &ExactPoly::constant(q(rng.random_range(-2..=2))), tri.q().clone())
}

/// Three automorphisms near a common random base.
pub fn nearby_triple<R: Rng + ?Sized>(rng: &mut R) -> (ExactMap, ExactMap, ExactMap) {
    let g = base_automorphism(rng);
    (perturb(rng, &g), perturb(rng, &g), perturb(rng, &g))
}
