//! All roots of a univariate complex polynomial by the Aberth–Ehrlich
//! simultaneous iteration.

use std::f64::consts::PI;

use num_complex::Complex64;
use num_traits::Zero;

use crate::dense::horner_with_derivative;

pub const MAX_ITERATIONS: usize = 200;
pub const RELATIVE_TOLERANCE: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StopReason {
    Converged(usize),
    MaxIterations,
}

#[derive(Clone, Debug)]
pub struct Roots {
    pub roots: Vec<Complex64>,
    pub stop: StopReason,
}

/// Roots of `sum coeffs[k] x^k`. Leading exact zeros are ignored; exact
/// trailing zeros are returned as roots at the origin. The zero polynomial
/// and nonzero constants have no roots.
pub fn aberth(coeffs: &[Complex64]) -> Roots {
    let mut hi = coeffs.len();
    while hi > 0 && coeffs[hi - 1].is_zero() {
        hi -= 1;
    }
    let mut lo = 0;
    while lo < hi && coeffs[lo].is_zero() {
        lo += 1;
    }
    let mut roots = vec![Complex64::zero(); lo];
    if hi <= lo + 1 {
        return Roots {
            roots,
            stop: StopReason::Converged(0),
        };
    }
    let poly = &coeffs[lo..hi];
    let degree = poly.len() - 1;
    if degree == 1 {
        roots.push(-poly[0] / poly[1]);
        return Roots {
            roots,
            stop: StopReason::Converged(0),
        };
    }

    let mut z = initial_guesses(poly);
    let mut done = vec![false; degree];
    let mut stop = StopReason::MaxIterations;
    for iter in 1..=MAX_ITERATIONS {
        let mut max_rel = 0.0f64;
        for i in 0..degree {
            if done[i] {
                continue;
            }
            let (p, dp) = horner_with_derivative(poly, z[i]);
            if p.is_zero() {
                done[i] = true;
                continue;
            }
            let ratio = p / dp;
            let mut sum = Complex64::zero();
            for (j, &zj) in z.iter().enumerate() {
                if j != i {
                    sum += (z[i] - zj).inv();
                }
            }
            let w = ratio / (Complex64::new(1.0, 0.0) - ratio * sum);
            if !w.re.is_finite() || !w.im.is_finite() {
                continue;
            }
            z[i] -= w;
            let rel = w.norm() / z[i].norm().max(1.0);
            if rel < RELATIVE_TOLERANCE {
                done[i] = true;
            }
            max_rel = max_rel.max(rel);
        }
        if max_rel < RELATIVE_TOLERANCE || done.iter().all(|&d| d) {
            stop = StopReason::Converged(iter);
            break;
        }
    }
    roots.extend(z);
    Roots { roots, stop }
}

/// Points on a circle whose radius is the geometric mean of the root moduli,
/// rotated off the real axis to avoid symmetric stalls.
fn initial_guesses(poly: &[Complex64]) -> Vec<Complex64> {
    let n = poly.len() - 1;
    let lead = poly[n].norm();
    let radius = (poly[0].norm() / lead).powf(1.0 / n as f64);
    let radius = if radius.is_finite() && radius > 0.0 {
        radius
    } else {
        1.0
    };
    (0..n)
        .map(|k| Complex64::from_polar(radius, 2.0 * PI * k as f64 / n as f64 + 0.4))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn sorted_by_re(mut v: Vec<Complex64>) -> Vec<Complex64> {
        v.sort_by(|a, b| a.re.partial_cmp(&b.re).unwrap().then(a.im.partial_cmp(&b.im).unwrap()));
        v
    }

    #[test]
    fn real_cubic() {
        // (x-1)(x-2)(x+3) = x^3 - 7x + 6
        let r = aberth(&[c(6.0), c(-7.0), c(0.0), c(1.0)]);
        assert!(matches!(r.stop, StopReason::Converged(_)));
        let got = sorted_by_re(r.roots);
        for (g, e) in got.iter().zip([-3.0, 1.0, 2.0]) {
            assert!((g - c(e)).norm() < 1e-12, "{g} vs {e}");
        }
    }

    #[test]
    fn roots_of_unity() {
        let r = aberth(&[c(-1.0), c(0.0), c(0.0), c(0.0), c(0.0), c(1.0)]);
        assert_eq!(r.roots.len(), 5);
        for z in &r.roots {
            assert!((z.powu(5) - c(1.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn zero_roots_and_degenerate_inputs() {
        let r = aberth(&[c(0.0), c(0.0), c(-4.0), c(1.0), c(0.0)]);
        let got = sorted_by_re(r.roots);
        assert_eq!(got.len(), 3);
        assert_eq!(got[0], c(0.0));
        assert_eq!(got[1], c(0.0));
        assert!((got[2] - c(4.0)).norm() < 1e-14);
        assert!(aberth(&[]).roots.is_empty());
        assert!(aberth(&[c(3.0)]).roots.is_empty());
        assert!(aberth(&[c(0.0), c(0.0)]).roots.is_empty());
    }

    #[test]
    fn wide_dynamic_range() {
        // (x - 1e-3)(x - 1)(x - 1e3)
        let r = aberth(&[c(-1.0), c(1001.001), c(-1001.001), c(1.0)]);
        let got = sorted_by_re(r.roots);
        for (g, e) in got.iter().zip([1e-3, 1.0, 1e3]) {
            assert!((g - c(e)).norm() < 1e-9 * e.max(1.0), "{g} vs {e}");
        }
    }
}
