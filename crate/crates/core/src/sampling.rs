//! Seeded random streams and uniform samplers on regions of `C^2`.
//!
//! Every parallel task draws from its own ChaCha stream `(seed, stream)`, so
//! results never depend on how work is spread across threads.

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

pub type Point = (Complex64, Complex64);

/// Environment variable consulted when no seed is given explicitly.
pub const SEED_ENV: &str = "KELLER_LAB_SEED";

pub fn substream(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Uniform point of the open Euclidean ball of `R^4 = C^2`: a normalized
/// Gaussian direction scaled by `radius * U^(1/4)`.
pub fn uniform_ball<R: Rng + ?Sized>(rng: &mut R, radius: f64) -> Point {
    let g: [f64; 4] = std::array::from_fn(|_| rng.sample(StandardNormal));
    let norm = g.iter().map(|v| v * v).sum::<f64>().sqrt();
    let u: f64 = rng.random();
    let r = radius * u.powf(0.25) / norm;
    (
        Complex64::new(g[0] * r, g[1] * r),
        Complex64::new(g[2] * r, g[3] * r),
    )
}

pub fn uniform_disk<R: Rng + ?Sized>(rng: &mut R, radius: f64) -> Complex64 {
    let u: f64 = rng.random();
    let theta: f64 = rng.random::<f64>() * std::f64::consts::TAU;
    Complex64::from_polar(radius * u.sqrt(), theta)
}

pub fn uniform_polydisk<R: Rng + ?Sized>(rng: &mut R, r1: f64, r2: f64) -> Point {
    (uniform_disk(rng, r1), uniform_disk(rng, r2))
}

/// Euclidean norm on `C^2`.
pub fn norm2(p: Point) -> f64 {
    (p.0.norm_sqr() + p.1.norm_sqr()).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn streams_are_reproducible_and_distinct() {
        let a: u64 = substream(7, 3).random();
        let b: u64 = substream(7, 3).random();
        let c: u64 = substream(7, 4).random();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn ball_samples_stay_inside() {
        let mut rng = substream(1, 0);
        for _ in 0..1000 {
            assert!(norm2(uniform_ball(&mut rng, 2.5)) < 2.5);
        }
    }

    #[test]
    fn ball_radial_law() {
        // P(|z| < R/2) = (1/2)^4 for the uniform 4-ball.
        let mut rng = substream(2, 0);
        let n = 200_000;
        let inner = (0..n)
            .filter(|_| norm2(uniform_ball(&mut rng, 1.0)) < 0.5)
            .count() as f64
            / n as f64;
        let p = 1.0 / 16.0;
        let sigma = (p * (1.0 - p) / n as f64).sqrt();
        assert!((inner - p).abs() < 4.0 * sigma, "{inner}");
    }
}
