//! Composition-operator experiments, degree multiplicativity, primality by
//! degree, iteration chains and sampled `B_n` sets.

use std::collections::BTreeMap;

use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;

use crate::error::{FiberError, MapError};
use crate::fiber::{geometric_degree, FiberSolver, FiberStatus, DegreeEstimate};
use crate::map::ExactMap;
use crate::poly::ExactPoly;
use crate::sampling::substream;
use crate::scalar::GaussianRational;

/// Largest degree of a generated elementary shear.
pub const MAX_SHEAR_DEGREE: u32 = 4;
/// Coefficients of generated shears are drawn from `-COEFF_RANGE..=COEFF_RANGE`.
pub const COEFF_RANGE: i64 = 3;
pub const DEFAULT_DEGREE_CAP: u128 = 4096;

fn nonzero_coeff<R: Rng + ?Sized>(rng: &mut R) -> i64 {
    let v = rng.random_range(1..=COEFF_RANGE);
    if rng.random_bool(0.5) {
        v
    } else {
        -v
    }
}

/// An elementary shear `(Y, -X + p(Y))` with sparse `p` of degree in
/// `1..=max_degree` and small integer coefficients.
pub fn random_shear<R: Rng + ?Sized>(rng: &mut R, max_degree: u32) -> ExactMap {
    let deg = rng.random_range(1..=max_degree.clamp(1, MAX_SHEAR_DEGREE)) as usize;
    let mut s = vec![GaussianRational::from(0); deg + 1];
    for c in s.iter_mut().take(deg) {
        if rng.random_bool(0.5) {
            *c = nonzero_coeff(rng).into();
        }
    }
    s[deg] = nonzero_coeff(rng).into();
    ExactMap::shear(&s)
}

/// A composite of one to three random shears with total degree at most
/// `max_degree`; always an automorphism with `det J = 1`.
pub fn random_automorphism<R: Rng + ?Sized>(rng: &mut R, max_degree: u32) -> ExactMap {
    let count = rng.random_range(1..=3);
    let mut g = ExactMap::identity();
    let mut degree = 1;
    for _ in 0..count {
        let budget = (max_degree / degree).max(1);
        let s = random_shear(rng, budget);
        degree *= s.degree();
        g = s.compose(&g);
    }
    g
}

fn translate(g: &ExactMap, c: i64) -> ExactMap {
    ExactMap::new(g.p() + &ExactPoly::constant(c.into()), g.q().clone())
}

/// Two distinct automorphisms; half the time they differ only by a constant
/// in the first component.
fn distinct_pair<R: Rng + ?Sized>(rng: &mut R) -> (ExactMap, ExactMap) {
    let g = random_automorphism(rng, MAX_SHEAR_DEGREE);
    let h = if rng.random_bool(0.5) {
        translate(&g, nonzero_coeff(rng))
    } else {
        random_automorphism(rng, MAX_SHEAR_DEGREE)
    };
    if h == g {
        let h = translate(&g, 1);
        (g, h)
    } else {
        (g, h)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    /// `R_F(G) = G∘F`.
    Right,
    /// `L_F(G) = F∘G`.
    Left,
}

#[derive(Clone, Debug, PartialEq)]
pub struct OperatorProbe {
    pub f: ExactMap,
    pub side: Side,
    pub pairs: Vec<(ExactMap, ExactMap)>,
    /// `verdicts[i]` is true iff the composites of pair `i` differ.
    pub verdicts: Vec<bool>,
    /// Points where the two inputs of a colliding pair agree.
    pub coincidences: Vec<(GaussianRational, GaussianRational)>,
}

impl OperatorProbe {
    pub fn collisions(&self) -> usize {
        self.verdicts.iter().filter(|v| !**v).count()
    }
}

/// Exact evaluation points `a + bi` with `a, b` in `-2..=2`.
fn coincidence_grid() -> Vec<GaussianRational> {
    let mut pts = Vec::new();
    for a in -2..=2 {
        for b in -2..=2 {
            pts.push(GaussianRational::from_ints(a, b));
        }
    }
    pts
}

fn probe(f: &ExactMap, side: Side, trials: usize, seed: u64) -> OperatorProbe {
    let grid = coincidence_grid();
    let results: Vec<_> = (0..trials)
        .into_par_iter()
        .map(|i| {
            let mut rng = substream(seed, i as u64);
            let (g, h) = distinct_pair(&mut rng);
            let (a, b) = match side {
                Side::Right => (g.compose(f), h.compose(f)),
                Side::Left => (f.compose(&g), f.compose(&h)),
            };
            let differ = a != b;
            let mut hits = Vec::new();
            if !differ && side == Side::Left {
                for x in &grid {
                    for y in &grid {
                        if g.eval(x, y) == h.eval(x, y) {
                            hits.push((x.clone(), y.clone()));
                        }
                    }
                }
            }
            (g, h, differ, hits)
        })
        .collect();
    let mut out = OperatorProbe {
        f: f.clone(),
        side,
        pairs: Vec::with_capacity(trials),
        verdicts: Vec::with_capacity(trials),
        coincidences: Vec::new(),
    };
    for (g, h, differ, hits) in results {
        out.pairs.push((g, h));
        out.verdicts.push(differ);
        out.coincidences.extend(hits);
    }
    out
}

/// Checks `G∘F != H∘F` on random distinct pairs `(G, H)`.
pub fn right_injectivity_probe(f: &ExactMap, trials: usize, seed: u64) -> OperatorProbe {
    probe(f, Side::Right, trials, seed)
}

/// Checks `F∘G != F∘H` on random distinct pairs `(G, H)`, and for any
/// collision records the grid points where `G` and `H` agree.
pub fn left_injectivity_probe(f: &ExactMap, trials: usize, seed: u64) -> OperatorProbe {
    probe(f, Side::Left, trials, seed)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Classification {
    Unit,
    /// Prime degree: the map cannot be a composite of two non-automorphisms.
    PrimeDegree,
    /// Composite degree: inconclusive.
    CompositeDegree,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PrimalityReport {
    pub d: usize,
    pub classification: Classification,
    pub estimate: DegreeEstimate,
}

pub fn is_prime(n: usize) -> bool {
    n >= 2 && (2..).take_while(|k| k * k <= n).all(|k| !n.is_multiple_of(k))
}

pub fn classify_degree(d: usize) -> Classification {
    if d == 1 {
        Classification::Unit
    } else if is_prime(d) {
        Classification::PrimeDegree
    } else {
        Classification::CompositeDegree
    }
}

pub fn primality_classify(f: &ExactMap, targets: usize, seed: u64) -> Result<PrimalityReport, FiberError> {
    let estimate = geometric_degree(f, targets, seed)?;
    if !estimate.confident {
        return Err(FiberError::LowConfidence {
            d: estimate.d,
            at_max: estimate.histogram.get(&estimate.d).copied().unwrap_or(0),
            samples: estimate.samples,
        });
    }
    Ok(PrimalityReport {
        d: estimate.d,
        classification: classify_degree(estimate.d),
        estimate,
    })
}

/// The `n`-fold composite `f∘…∘f`, refused when `deg(f)^n` exceeds `cap`.
pub fn iterate(f: &ExactMap, n: u32, cap: u128) -> Result<ExactMap, MapError> {
    if n == 0 {
        return Err(MapError::ZeroIterations);
    }
    let required = (f.degree() as u128).checked_pow(n).unwrap_or(u128::MAX);
    if required > cap {
        return Err(MapError::DegreeCapExceeded { required, cap });
    }
    let mut out = f.clone();
    for _ in 1..n {
        out = f.compose(&out);
    }
    Ok(out)
}

/// Half-width of the real coordinate range sampled by [`bn_sampler`].
pub const BN_EXTENT: f64 = 2.0;
/// Minimal share of generic targets required by [`bn_sampler`].
pub const GENERIC_DENSITY: f64 = 0.8;

#[derive(Clone, Debug, PartialEq)]
pub struct BnReport {
    pub targets: usize,
    pub degenerate: usize,
    /// Fiber size -> number of targets.
    pub histogram: BTreeMap<usize, usize>,
    /// `b_counts[k]` is the number of targets with at most `k` preimages.
    pub b_counts: Vec<usize>,
    pub nested: bool,
    /// Largest fiber size observed.
    pub d_f: usize,
    pub generic_fraction: f64,
    pub dense: bool,
}

/// Cell centers of a `grid^4` lattice over `[-BN_EXTENT, BN_EXTENT]^4`, as
/// targets `(a_re + i a_im, b_re + i b_im)`.
pub fn bn_grid(grid: usize) -> Vec<(Complex64, Complex64)> {
    let step = 2.0 * BN_EXTENT / grid as f64;
    let coord = |k: usize| -BN_EXTENT + (k as f64 + 0.5) * step;
    let mut out = Vec::with_capacity(grid.pow(4));
    for a in 0..grid {
        for b in 0..grid {
            for c in 0..grid {
                for d in 0..grid {
                    out.push((
                        Complex64::new(coord(a), coord(b)),
                        Complex64::new(coord(c), coord(d)),
                    ));
                }
            }
        }
    }
    out
}

/// Fiber sizes over a target lattice: the sets `B_k` of targets with at
/// most `k` preimages for `k` up to `max(n, d_F)`, their nesting, and the
/// share of targets attaining the maximal fiber size.
pub fn bn_sampler(f: &ExactMap, n: usize, grid: usize) -> Result<BnReport, FiberError> {
    let solver = FiberSolver::new(f)?;
    let targets = bn_grid(grid);
    let sizes: Vec<Option<usize>> = targets
        .par_iter()
        .map(|&w| {
            let fiber = solver.solve(w);
            (fiber.status != FiberStatus::Degenerate).then(|| fiber.count())
        })
        .collect();
    let mut histogram = BTreeMap::new();
    let mut degenerate = 0;
    for s in &sizes {
        match s {
            Some(k) => *histogram.entry(*k).or_insert(0) += 1,
            None => degenerate += 1,
        }
    }
    let d_f = histogram.keys().next_back().copied().unwrap_or(0);
    let levels = n.max(d_f);
    let b_counts: Vec<usize> = (0..=levels)
        .map(|k| histogram.range(..=k).map(|(_, c)| c).sum())
        .collect();
    let nested = b_counts.windows(2).all(|w| w[0] <= w[1]);
    let solved = targets.len() - degenerate;
    let generic_fraction = if solved == 0 {
        0.0
    } else {
        histogram.get(&d_f).copied().unwrap_or(0) as f64 / solved as f64
    };
    Ok(BnReport {
        targets: targets.len(),
        degenerate,
        histogram,
        b_counts,
        nested,
        d_f,
        generic_fraction,
        dense: generic_fraction >= GENERIC_DENSITY,
    })
}

/// `L∘(X^a, Y^b)∘L⁻¹` with the linear automorphism `L = (X + cY, Y)`; its
/// geometric degree is `a·b`.
pub fn power_family_member(a: u32, b: u32, c: i64) -> ExactMap {
    let l = ExactMap::affine(1.into(), c.into(), 0.into(), 1.into(), 0.into(), 0.into());
    let l_inv = ExactMap::affine(1.into(), (-c).into(), 0.into(), 1.into(), 0.into(), 0.into());
    l.compose(&ExactMap::power(a, b)).compose(&l_inv)
}

/// Two members of the power family sharing the conjugating shear, with
/// exponents in `1..=3`, together with their expected degrees.
pub fn random_power_pair<R: Rng + ?Sized>(rng: &mut R) -> ((ExactMap, usize), (ExactMap, usize)) {
    let c = rng.random_range(-2..=2);
    let mut member = || {
        let (a, b) = (rng.random_range(1..=3), rng.random_range(1..=3));
        (power_family_member(a, b, c), (a * b) as usize)
    };
    (member(), member())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(v: i64) -> GaussianRational {
        GaussianRational::from(v)
    }

    #[test]
    fn generated_maps_are_keller() {
        let mut rng = substream(1, 0);
        for _ in 0..50 {
            let g = random_automorphism(&mut rng, 16);
            assert!(g.degree() <= 16);
            assert!(g.keller_report(false).det_one);
        }
    }

    #[test]
    fn probes_find_no_collisions() {
        let f = ExactMap::shear(&[q(1), q(0), q(2)]);
        for side in [Side::Left, Side::Right] {
            let pr = probe(&f, side, 20, 3);
            assert_eq!(pr.verdicts.len(), 20);
            assert_eq!(pr.collisions(), 0);
            assert!(pr.coincidences.is_empty());
            assert!(pr.pairs.iter().all(|(g, h)| g != h));
        }
    }

    #[test]
    fn probes_are_deterministic() {
        let f = ExactMap::power(2, 1);
        assert_eq!(right_injectivity_probe(&f, 5, 9), right_injectivity_probe(&f, 5, 9));
    }

    #[test]
    fn classification() {
        assert_eq!(classify_degree(1), Classification::Unit);
        assert_eq!(classify_degree(2), Classification::PrimeDegree);
        assert_eq!(classify_degree(6), Classification::CompositeDegree);
        assert_eq!(classify_degree(36), Classification::CompositeDegree);
        assert_eq!(
            primality_classify(&ExactMap::identity(), 25, 1).unwrap().classification,
            Classification::Unit
        );
        let r = primality_classify(&ExactMap::power(2, 3), 25, 1).unwrap();
        assert_eq!((r.d, r.classification), (6, Classification::CompositeDegree));
        let r = primality_classify(&ExactMap::power(2, 1), 25, 1).unwrap();
        assert_eq!((r.d, r.classification), (2, Classification::PrimeDegree));
    }

    #[test]
    fn iteration() {
        assert_eq!(iterate(&ExactMap::identity(), 5, DEFAULT_DEGREE_CAP).unwrap(), ExactMap::identity());
        assert_eq!(
            iterate(&ExactMap::power(2, 3), 2, DEFAULT_DEGREE_CAP).unwrap(),
            ExactMap::power(4, 9)
        );
        assert_eq!(
            iterate(&ExactMap::power(2, 3), 3, 10),
            Err(MapError::DegreeCapExceeded { required: 27, cap: 10 })
        );
        assert_eq!(iterate(&ExactMap::identity(), 0, 10), Err(MapError::ZeroIterations));
    }

    #[test]
    fn iterated_triangular_map_sums_translations() {
        // (X, Y + t(X)) composed three times is (X, Y + 3 t(X)).
        let t = [q(1), q(-2), q(1)];
        let three: Vec<_> = t.iter().map(|c| c.clone() * q(3)).collect();
        assert_eq!(
            iterate(&ExactMap::triangular(&t), 3, DEFAULT_DEGREE_CAP).unwrap(),
            ExactMap::triangular(&three)
        );
    }

    #[test]
    fn bn_sets() {
        let r = bn_sampler(&ExactMap::shear(&[q(0), q(1), q(1)]), 2, 4).unwrap();
        assert_eq!(r.histogram, BTreeMap::from([(1, 256)]));
        assert_eq!(r.b_counts, vec![0, 256, 256]);
        assert!(r.nested && r.dense);

        let r = bn_sampler(&ExactMap::power(2, 3), 6, 4).unwrap();
        assert_eq!(r.d_f, 6);
        assert!(r.nested && r.dense, "{r:?}");
    }

    #[test]
    fn power_family_degrees() {
        let f = power_family_member(2, 3, 1);
        assert_eq!(geometric_degree(&f, 25, 2).unwrap().d, 6);
        let mut rng = substream(4, 0);
        let ((f, df), (g, dg)) = random_power_pair(&mut rng);
        assert_eq!(geometric_degree(&f, 25, 3).unwrap().d, df);
        assert_eq!(geometric_degree(&g, 25, 3).unwrap().d, dg);
    }
}
