//! Multiplicity-weighted volumes and the distance `ρ_D` between maps.
//!
//! For a holomorphic `G` the real Jacobian of `G` viewed on `R^4` is
//! `|det J_G|^2`, so integrating it over `D` counts every point of `G(D)`
//! once per preimage in `D`. The distance is
//!
//! ```text
//! ρ_D(G1, G2) = ∫_D |det J_G1|^2 · 1[G1(z) ∉ G2(D)] + |det J_G2|^2 · 1[G2(z) ∉ G1(D)] dV(z)
//! ```
//!
//! estimated by Monte Carlo over uniform samples of `D`, with image
//! membership decided by the fiber solver. Work is split into fixed-size
//! shards, shard `i` drawing from stream `i`, and the partial sums are
//! reduced in shard order, so estimates are bit-identical for a given seed
//! regardless of thread count.

use num_complex::Complex64;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::dense::CompiledMap;
use crate::domain::Region;
use crate::error::MetricError;
use crate::fiber::{geometric_degree, preimages_in, FiberSolver, FiberStatus, DEFAULT_TARGETS};
use crate::map::{ExactMap, PolyMap};
use crate::sampling::{substream, uniform_polydisk, Point};
use crate::scalar::Coeff;

pub const MIN_SAMPLES: usize = 10_000;
pub const SHARD_SIZE: usize = 4096;
/// Slack, in standard errors, allowed on every stochastic inequality.
pub const SIGMA_SLACK: f64 = 3.0;
/// Largest tolerated fraction of samples lost to degenerate fibers.
pub const MAX_DISCARD_FRACTION: f64 = 0.01;

/// Stream offset separating the target-space pass from the domain pass.
const TARGET_PASS: u64 = 1 << 40;

enum Draw {
    /// Accepted sample, split into two parts whose sum is the integrand.
    Value(f64, f64),
    /// Degenerate fiber: dropped and counted against the discard budget.
    Discard,
    /// Redrawn without penalty (star-set hit or boundary ambiguity).
    Resample,
}

#[derive(Clone, Copy, Debug, Default)]
struct Accum {
    n: usize,
    sum: f64,
    sum_sq: f64,
    sum_a: f64,
    sum_b: f64,
    discarded: usize,
    resampled: usize,
}

impl Accum {
    fn merge(mut self, o: Accum) -> Accum {
        self.n += o.n;
        self.sum += o.sum;
        self.sum_sq += o.sum_sq;
        self.sum_a += o.sum_a;
        self.sum_b += o.sum_b;
        self.discarded += o.discarded;
        self.resampled += o.resampled;
        self
    }

    fn mean(&self) -> f64 {
        self.sum / self.n as f64
    }

    /// Standard error of the mean.
    fn std_error(&self) -> f64 {
        let n = self.n as f64;
        if self.n < 2 {
            return 0.0;
        }
        let mean = self.mean();
        let var = ((self.sum_sq - n * mean * mean) / (n - 1.0)).max(0.0);
        (var / n).sqrt()
    }
}

fn run_shards<F>(samples: usize, seed: u64, stream_base: u64, draw: F) -> Result<Accum, MetricError>
where
    F: Fn(&mut ChaCha8Rng) -> Draw + Sync,
{
    if samples < MIN_SAMPLES {
        return Err(MetricError::TooFewSamples {
            min: MIN_SAMPLES,
            got: samples,
        });
    }
    let shards = samples.div_ceil(SHARD_SIZE);
    let budget = (MAX_DISCARD_FRACTION * samples as f64).floor() as usize;
    let partials: Vec<Result<Accum, MetricError>> = (0..shards)
        .into_par_iter()
        .map(|s| {
            let quota = SHARD_SIZE.min(samples - s * SHARD_SIZE);
            let mut rng = substream(seed, stream_base + s as u64);
            let mut acc = Accum::default();
            while acc.n < quota {
                match draw(&mut rng) {
                    Draw::Value(a, b) => {
                        let v = a + b;
                        acc.n += 1;
                        acc.sum += v;
                        acc.sum_sq += v * v;
                        acc.sum_a += a;
                        acc.sum_b += b;
                    }
                    Draw::Discard => {
                        acc.discarded += 1;
                        if acc.discarded > budget {
                            return Err(MetricError::TooManyDiscarded {
                                discarded: acc.discarded,
                                samples,
                            });
                        }
                    }
                    Draw::Resample => acc.resampled += 1,
                }
            }
            Ok(acc)
        })
        .collect();
    let mut total = Accum::default();
    for p in partials {
        total = total.merge(p?);
    }
    if total.discarded > budget {
        return Err(MetricError::TooManyDiscarded {
            discarded: total.discarded,
            samples,
        });
    }
    Ok(total)
}

/// Monte Carlo value of `ρ_D(G1, G2)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MetricEstimate {
    pub value: f64,
    pub std_error: f64,
    pub samples: usize,
    pub seed: u64,
    /// Volume of `G1(D) - G2(D)` counted with the multiplicity of `G1`.
    pub g1_side: f64,
    /// Volume of `G2(D) - G1(D)` counted with the multiplicity of `G2`.
    pub g2_side: f64,
    pub discarded: usize,
    pub resampled: usize,
}

/// Combined standard error of a difference of independent-looking estimates.
pub fn combined_sigma(a: f64, b: f64) -> f64 {
    (a * a + b * b).sqrt()
}

struct Member<'a> {
    map: CompiledMap,
    solver: FiberSolver,
    _marker: std::marker::PhantomData<&'a ()>,
}

impl<'a> Member<'a> {
    fn new<C: Coeff>(g: &PolyMap<C>) -> Result<Self, MetricError> {
        Ok(Self {
            map: CompiledMap::new(g),
            solver: FiberSolver::new(g)?,
            _marker: std::marker::PhantomData,
        })
    }
}

enum Membership {
    Inside,
    Outside,
    Ambiguous,
    Degenerate,
}

fn membership<R: Region>(m: &Member<'_>, w: Point, region: &R) -> Membership {
    let rf = preimages_in(&m.solver, w, region);
    if rf.status == FiberStatus::Degenerate {
        Membership::Degenerate
    } else if rf.ambiguous {
        Membership::Ambiguous
    } else if rf.inside > 0 {
        Membership::Inside
    } else {
        Membership::Outside
    }
}

pub fn rho<C: Coeff, R: Region>(
    g1: &PolyMap<C>,
    g2: &PolyMap<C>,
    d: &R,
    samples: usize,
    seed: u64,
) -> Result<MetricEstimate, MetricError> {
    let m1 = Member::new(g1)?;
    let m2 = Member::new(g2)?;
    let acc = run_shards(samples, seed, 0, |rng| {
        let z = d.sample_bounding(rng);
        if !d.contains(z) {
            return Draw::Resample;
        }
        let w1 = m1.map.eval(z.0, z.1);
        let w2 = m2.map.eval(z.0, z.1);
        // z itself witnesses w1 ∈ G2(D) when both maps agree there.
        let (in2, in1) = if w1 == w2 {
            (Membership::Inside, Membership::Inside)
        } else {
            (membership(&m2, w1, d), membership(&m1, w2, d))
        };
        let side = |mem: Membership, jac: Complex64| match mem {
            Membership::Inside => Ok(0.0),
            Membership::Outside => Ok(jac.norm_sqr()),
            Membership::Ambiguous => Err(Draw::Resample),
            Membership::Degenerate => Err(Draw::Discard),
        };
        let a = side(in2, m1.map.jacobian_det(z.0, z.1));
        let b = side(in1, m2.map.jacobian_det(z.0, z.1));
        match (a, b) {
            (Ok(a), Ok(b)) => Draw::Value(a, b),
            (Err(Draw::Discard), _) | (_, Err(Draw::Discard)) => Draw::Discard,
            _ => Draw::Resample,
        }
    })?;
    let vol = d.volume();
    let n = acc.n as f64;
    Ok(MetricEstimate {
        value: vol * acc.mean(),
        std_error: vol * acc.std_error(),
        samples: acc.n,
        seed,
        g1_side: vol * acc.sum_a / n,
        g2_side: vol * acc.sum_b / n,
        discarded: acc.discarded,
        resampled: acc.resampled,
    })
}

/// Geometric and multiplicity-weighted volumes of `G(D)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct VolumeReport {
    pub geometric_vol: f64,
    pub geometric_std_error: f64,
    pub mult_vol: f64,
    pub mult_std_error: f64,
    /// `mult_vol - geometric_vol`; can dip below 0 by Monte Carlo noise.
    pub excess: f64,
    pub samples: usize,
    pub discarded: usize,
    pub resampled: usize,
}

/// Radii of a polydisk containing `G(region)`, from `|P| <= Σ |c_ij| r^(i+j)`.
pub fn image_bounds<C: Coeff, R: Region>(g: &PolyMap<C>, region: &R) -> (f64, f64) {
    let r = region.coordinate_bound();
    let bound = |p: &crate::poly::BivarPoly<C>| {
        p.terms()
            .map(|((i, j), c)| c.to_complex().norm() * r.powi((i + j) as i32))
            .sum::<f64>()
    };
    (bound(g.p()), bound(g.q()))
}

fn polydisk_volume(r1: f64, r2: f64) -> f64 {
    std::f64::consts::PI.powi(2) * r1 * r1 * r2 * r2
}

/// `∫_D |det J_G|^2 dV`, as `(value, std_error, accumulator)`.
fn jacobian_integral<C: Coeff, R: Region>(g: &PolyMap<C>, d: &R, samples: usize, seed: u64) -> Result<(f64, f64, Accum), MetricError> {
    let cm = CompiledMap::new(g);
    let acc = run_shards(samples, seed, 0, |rng| {
        let z = d.sample_bounding(rng);
        if !d.contains(z) {
            return Draw::Resample;
        }
        Draw::Value(cm.jacobian_det(z.0, z.1).norm_sqr(), 0.0)
    })?;
    let vol = d.volume();
    Ok((vol * acc.mean(), vol * acc.std_error(), acc))
}

/// Samples targets uniformly in a polydisk containing `G(D)` and integrates
/// `weight(#preimages in D)` over it.
fn target_integral<C: Coeff, R: Region>(
    g: &PolyMap<C>,
    d: &R,
    samples: usize,
    seed: u64,
    weight: fn(usize) -> f64,
) -> Result<(f64, f64, Accum), MetricError> {
    let m = Member::new(g)?;
    let (b1, b2) = image_bounds(g, d);
    let acc = run_shards(samples, seed, TARGET_PASS, |rng| {
        let w = uniform_polydisk(rng, b1, b2);
        let rf = preimages_in(&m.solver, w, d);
        if rf.status == FiberStatus::Degenerate {
            Draw::Discard
        } else if rf.ambiguous {
            Draw::Resample
        } else {
            Draw::Value(weight(rf.inside), 0.0)
        }
    })?;
    let vol = polydisk_volume(b1, b2);
    Ok((vol * acc.mean(), vol * acc.std_error(), acc))
}

/// Geometric volume of `G(D)`: target-space sampling with membership by
/// fiber solving.
pub fn image_volume<C: Coeff, R: Region>(g: &PolyMap<C>, d: &R, samples: usize, seed: u64) -> Result<(f64, f64), MetricError> {
    let (v, s, _) = target_integral(g, d, samples, seed, |k| if k > 0 { 1.0 } else { 0.0 })?;
    Ok((v, s))
}

/// `∫ N(w; G, D) dV(w)` with `N` the number of preimages in `D`: the
/// multiplicity-weighted volume computed in target space.
pub fn mult_volume_by_counting<C: Coeff, R: Region>(g: &PolyMap<C>, d: &R, samples: usize, seed: u64) -> Result<(f64, f64), MetricError> {
    let (v, s, _) = target_integral(g, d, samples, seed, |k| k as f64)?;
    Ok((v, s))
}

pub fn mult_volume<C: Coeff, R: Region>(g: &PolyMap<C>, d: &R, samples: usize, seed: u64) -> Result<VolumeReport, MetricError> {
    let (mult_vol, mult_std_error, a1) = jacobian_integral(g, d, samples, seed)?;
    let (geometric_vol, geometric_std_error, a2) = target_integral(g, d, samples, seed, |k| if k > 0 { 1.0 } else { 0.0 })?;
    Ok(VolumeReport {
        geometric_vol,
        geometric_std_error,
        mult_vol,
        mult_std_error,
        excess: mult_vol - geometric_vol,
        samples,
        discarded: a1.discarded + a2.discarded,
        resampled: a1.resampled + a2.resampled,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct ContractionReport {
    /// `ρ_D(G1, G2)`.
    pub before: MetricEstimate,
    /// `ρ_D(F∘G1, F∘G2)`.
    pub after: MetricEstimate,
    pub ratio: f64,
    pub combined_sigma: f64,
    /// `after <= before + 3σ`.
    pub holds: bool,
    pub d_f: usize,
}

pub fn contraction_experiment<R: Region>(
    f: &ExactMap,
    g1: &ExactMap,
    g2: &ExactMap,
    d: &R,
    samples: usize,
    seed: u64,
) -> Result<ContractionReport, MetricError> {
    let before = rho(g1, g2, d, samples, seed)?;
    let after = rho(&f.compose(g1), &f.compose(g2), d, samples, seed)?;
    let d_f = geometric_degree(f, DEFAULT_TARGETS, seed)?.d;
    let sigma = combined_sigma(before.std_error, after.std_error);
    Ok(ContractionReport {
        ratio: ratio(after.value, before.value),
        holds: after.value <= before.value + SIGMA_SLACK * sigma,
        combined_sigma: sigma,
        before,
        after,
        d_f,
    })
}

fn ratio(after: f64, before: f64) -> f64 {
    if before == 0.0 && after == 0.0 {
        1.0
    } else {
        after / before
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct IsometryReport {
    pub before: MetricEstimate,
    pub after: MetricEstimate,
    pub ratio: f64,
    pub difference: f64,
    pub combined_sigma: f64,
    /// `|after - before| <= 3σ`.
    pub holds: bool,
}

/// Compares `ρ_D(F∘G1, F∘G2)` with `ρ_D(G1, G2)` for an automorphism `F`.
pub fn isometry_experiment<R: Region>(
    f: &ExactMap,
    g1: &ExactMap,
    g2: &ExactMap,
    d: &R,
    samples: usize,
    seed: u64,
) -> Result<IsometryReport, MetricError> {
    let before = rho(g1, g2, d, samples, seed)?;
    let after = rho(&f.compose(g1), &f.compose(g2), d, samples, seed)?;
    let sigma = combined_sigma(before.std_error, after.std_error);
    let difference = after.value - before.value;
    Ok(IsometryReport {
        ratio: ratio(after.value, before.value),
        difference,
        combined_sigma: sigma,
        holds: difference.abs() <= SIGMA_SLACK * sigma,
        before,
        after,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct BoundsReport {
    pub region_vol: f64,
    pub image_vol: f64,
    pub image_std_error: f64,
    pub d_f: usize,
    /// `vol F(A) <= vol A` within 3σ.
    pub upper_holds: bool,
    /// `vol A <= d_F · vol F(A)` within 3σ.
    pub lower_holds: bool,
}

/// Squeezes `vol F(A)` between `vol A / d_F` and `vol A` for `det J_F ≡ 1`.
pub fn volume_bounds_check<R: Region>(f: &ExactMap, region: &R, samples: usize, seed: u64) -> Result<BoundsReport, MetricError> {
    if !f.keller_report(false).det_one {
        return Err(MetricError::Precondition("det J_F is not identically 1".into()));
    }
    let region_vol = region.volume();
    let (image_vol, image_std_error) = image_volume(f, region, samples, seed)?;
    let d_f = geometric_degree(f, DEFAULT_TARGETS, seed)?.d;
    let slack = SIGMA_SLACK * image_std_error;
    Ok(BoundsReport {
        region_vol,
        image_vol,
        image_std_error,
        d_f,
        upper_holds: image_vol <= region_vol + slack,
        lower_holds: region_vol <= d_f as f64 * (image_vol + slack),
    })
}

/// `ρ(a, c) <= ρ(a, b) + ρ(b, c) + 3σ` with σ combining all three errors.
pub fn triangle_holds(ac: &MetricEstimate, ab: &MetricEstimate, bc: &MetricEstimate) -> bool {
    let sigma = (ac.std_error.powi(2) + ab.std_error.powi(2) + bc.std_error.powi(2)).sqrt();
    ac.value <= ab.value + bc.value + SIGMA_SLACK * sigma
}
