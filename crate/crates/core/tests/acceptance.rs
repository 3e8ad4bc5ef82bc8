//! Acceptance suite: one PASS/FAIL line per criterion.

mod common;

use std::f64::consts::PI;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use common::{base_automorphism, frac, keller_triangular, nearby_triple, perturb, q};
use keller_lab::asymptotics::{check_basis_monotonicity, polynomial_pullback_basis, substitute, CanonicalRational};
use keller_lab::domain::{BallNorm, CharacteristicDomain, Region};
use keller_lab::fiber::{geometric_degree, solve_fiber, FiberStatus, DEFAULT_TARGETS};
use keller_lab::laurent::LaurentBivar;
use keller_lab::metric::{
    contraction_experiment, image_bounds, isometry_experiment, mult_volume, mult_volume_by_counting, rho, triangle_holds,
    SIGMA_SLACK,
};
use keller_lab::sampling::{substream, uniform_ball};
use keller_lab::semigroup::{left_injectivity_probe, random_automorphism, random_power_pair, random_shear, right_injectivity_probe};
use keller_lab::{AsymptoticsError, ExactMap, ExactPoly, GaussianRational};
use num_complex::Complex64;
use rand::Rng;

const SEED: u64 = 20_240_601;

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: impl Into<String>) -> Verdict {
    Verdict {
        pass,
        detail: detail.into(),
    }
}

fn secs(d: Duration) -> String {
    format!("{:.1}s", d.as_secs_f64())
}

/// `(∂/∂X, ∂/∂Y)` of both components.
fn jacobian_matrix(f: &ExactMap) -> [[ExactPoly; 2]; 2] {
    [
        [f.p().derivative_x(), f.p().derivative_y()],
        [f.q().derivative_x(), f.q().derivative_y()],
    ]
}

/// `J(f∘g) = J_f(g) · J_g`, entry by entry.
fn chain_rule_holds(f: &ExactMap, g: &ExactMap) -> bool {
    let lhs = jacobian_matrix(&f.compose(g));
    let jf = jacobian_matrix(f);
    let jg = jacobian_matrix(g);
    (0..2).all(|r| {
        (0..2).all(|c| {
            let at_g = |p: &ExactPoly| p.substitute(g.p(), g.q());
            let rhs = &(&at_g(&jf[r][0]) * &jg[0][c]) + &(&at_g(&jf[r][1]) * &jg[1][c]);
            lhs[r][c] == rhs
        })
    })
}

fn criterion_1() -> Verdict {
    let start = Instant::now();
    let mut rng = substream(SEED, 1);
    let (mut chain, mut assoc, mut det) = (0, 0, 0);
    let one = ExactPoly::one();
    for _ in 0..200 {
        let f = random_automorphism(&mut rng, 16);
        let budget = (64 / f.degree()).max(1);
        let g = random_automorphism(&mut rng, budget.min(4));
        let h = random_automorphism(&mut rng, (budget / g.degree()).max(1));
        if f.jacobian_det() != one || f.degree() > 16 {
            det += 1;
        }
        if f.compose(&g).jacobian_det() != one {
            det += 1;
        }
        if !chain_rule_holds(&f, &g) {
            chain += 1;
        }
        if f.compose(&g).compose(&h) != f.compose(&g.compose(&h)) {
            assoc += 1;
        }
    }
    let elapsed = start.elapsed();
    verdict(
        chain == 0 && assoc == 0 && det == 0 && elapsed < Duration::from_secs(30),
        format!("chain-rule failures {chain}, associativity failures {assoc}, det failures {det}, {}", secs(elapsed)),
    )
}

fn criterion_2() -> Verdict {
    let start = Instant::now();
    let f = ExactMap::power(2, 3);
    let d = geometric_degree(&f, DEFAULT_TARGETS, SEED).map(|e| e.d);
    let dd = geometric_degree(&f.compose(&f), DEFAULT_TARGETS, SEED).map(|e| e.d);
    let mut rng = substream(SEED, 2);
    let mut mismatches = 0;
    for i in 0..10 {
        let ((a, da), (b, db)) = random_power_pair(&mut rng);
        let seed = SEED + i;
        let ga = geometric_degree(&a, DEFAULT_TARGETS, seed).map(|e| e.d);
        let gb = geometric_degree(&b, DEFAULT_TARGETS, seed).map(|e| e.d);
        let gab = geometric_degree(&a.compose(&b), DEFAULT_TARGETS, seed).map(|e| e.d);
        match (ga, gb, gab) {
            (Ok(x), Ok(y), Ok(z)) if x == da && y == db && z == x * y => {}
            _ => mismatches += 1,
        }
    }
    let elapsed = start.elapsed();
    let pass = d == Ok(6) && dd == Ok(36) && mismatches == 0 && elapsed < Duration::from_secs(60);
    verdict(pass, format!("d = {d:?}, d(f∘f) = {dd:?}, power-pair mismatches {mismatches}/10, {}", secs(elapsed)))
}

/// A map with random small integer coefficients and total degree at most 3.
fn random_poly_map<R: Rng + ?Sized>(rng: &mut R) -> ExactMap {
    let mut comp = || {
        let mut p = ExactPoly::zero();
        for i in 0..=3u32 {
            for j in 0..=(3 - i) {
                if rng.random_bool(0.4) {
                    p.add_term(i, j, q(rng.random_range(-3..=3)));
                }
            }
        }
        if p.total_degree() == 0 {
            p.add_term(1, 1, q(1));
        }
        p
    };
    let p = comp();
    ExactMap::new(p, comp())
}

fn criterion_3() -> Verdict {
    let mut rng = substream(SEED, 3);
    let (mut violations, mut degenerate, mut errors) = (0, 0, 0);
    for i in 0..500 {
        let f = match i % 3 {
            0 => random_automorphism(&mut rng, 4),
            1 => random_power_pair(&mut rng).0 .0,
            _ => random_poly_map(&mut rng),
        };
        let w = uniform_ball(&mut rng, 3.0);
        match solve_fiber(&f, w) {
            Ok(r) if r.status == FiberStatus::Degenerate => degenerate += 1,
            Ok(r) => {
                if r.count() as u64 > f.bezout_bound() {
                    violations += 1;
                }
            }
            Err(_) => errors += 1,
        }
    }
    verdict(
        violations == 0,
        format!("500 pairs, {violations} violations, {degenerate} degenerate fibers, {errors} rejected maps"),
    )
}

fn criterion_4() -> Verdict {
    let start = Instant::now();
    let d = match CharacteristicDomain::build(1.0, 3, 10, BallNorm::Sup) {
        Ok(d) => d,
        Err(e) => return verdict(false, format!("domain: {e}")),
    };
    let f = ExactMap::power(2, 1);
    let n = 1_000_000;
    let (report, counting) = match (mult_volume(&f, &d, n, SEED), mult_volume_by_counting(&f, &d, n, SEED)) {
        (Ok(r), Ok(c)) => (r, c),
        (r, c) => return verdict(false, format!("estimation failed: {:?} {:?}", r.err(), c.err())),
    };
    let exact = 2.0 * PI * PI;
    let rel = (report.mult_vol - exact).abs() / exact;
    let sigma = (report.mult_std_error.powi(2) + counting.1.powi(2)).sqrt();
    let agree = (report.mult_vol - counting.0).abs() <= SIGMA_SLACK * sigma;
    let elapsed = start.elapsed();
    verdict(
        rel <= 0.01 && agree && elapsed < Duration::from_secs(300),
        format!(
            "mult_vol {:.5} vs 2π² {:.5} (rel {:.2e}), counting {:.5} ± {:.1e}, {}",
            report.mult_vol,
            exact,
            rel,
            counting.0,
            counting.1,
            secs(elapsed)
        ),
    )
}

fn criterion_5() -> Verdict {
    let d = match CharacteristicDomain::build(1.0, 3, 10, BallNorm::Euclidean) {
        Ok(d) => d,
        Err(e) => return verdict(false, format!("domain: {e}")),
    };
    let mut rng = substream(SEED, 5);
    let mut maps: Vec<ExactMap> = (0..5).map(|_| random_automorphism(&mut rng, 8)).collect();
    maps.push(ExactMap::identity());
    maps.push(keller_triangular(&mut rng));
    let mut failures = 0;
    for (i, f) in maps.iter().enumerate() {
        match mult_volume(f, &d, 20_000, SEED + i as u64) {
            Ok(r) if r.mult_vol == d.volume() && r.mult_std_error == 0.0 => {}
            _ => failures += 1,
        }
    }
    verdict(failures == 0, format!("{} Keller maps, {failures} inexact volumes", maps.len()))
}

fn default_domain() -> CharacteristicDomain {
    CharacteristicDomain::build(1.0, 3, 10, BallNorm::Euclidean).expect("default domain")
}

fn criterion_6() -> Verdict {
    let d = default_domain();
    let mut rng = substream(SEED, 6);
    let n = 100_000;
    let (mut zero, mut sym, mut tri, mut errors) = (0, 0, 0, 0);
    for i in 0..50u64 {
        let (g1, g2, g3) = nearby_triple(&mut rng);
        let seed = SEED + i;
        let all = (|| {
            Ok::<_, keller_lab::MetricError>((
                rho(&g1, &g1, &d, n, seed)?,
                rho(&g1, &g2, &d, n, seed)?,
                rho(&g2, &g1, &d, n, seed)?,
                rho(&g2, &g3, &d, n, seed)?,
                rho(&g1, &g3, &d, n, seed)?,
            ))
        })();
        match all {
            Ok((r11, r12, r21, r23, r13)) => {
                if r11.value != 0.0 {
                    zero += 1;
                }
                if r12.value != r21.value || r12.std_error != r21.std_error {
                    sym += 1;
                }
                if !triangle_holds(&r13, &r12, &r23) {
                    tri += 1;
                }
            }
            Err(_) => errors += 1,
        }
    }
    verdict(
        zero + sym + tri + errors == 0,
        format!("50 triples: identity failures {zero}, symmetry failures {sym}, triangle failures {tri}, errors {errors}"),
    )
}

fn criterion_7() -> Verdict {
    let start = Instant::now();
    let d = default_domain();
    let mut rng = substream(SEED, 7);
    let (mut failures, mut errors, mut worst) = (0, 0, 0.0f64);
    for i in 0..20u64 {
        let g = base_automorphism(&mut rng);
        let (g1, g2) = (perturb(&mut rng, &g), perturb(&mut rng, &g));
        let f = keller_triangular(&mut rng);
        match isometry_experiment(&f, &g1, &g2, &d, 100_000, SEED + i) {
            Ok(r) => {
                if !r.holds {
                    failures += 1;
                }
                if r.combined_sigma > 0.0 {
                    worst = worst.max(r.difference.abs() / r.combined_sigma);
                }
            }
            Err(_) => errors += 1,
        }
    }
    let elapsed = start.elapsed();
    verdict(
        failures == 0 && errors == 0 && elapsed < Duration::from_secs(600),
        format!("20 triples, {failures} failures, {errors} errors, worst |Δ|/σ {worst:.2}, {}", secs(elapsed)),
    )
}

/// `(X, c Y^k)` with `c` a power of two chosen so `|det J| <= 1` on the
/// polydisk that bounds every image.
fn damped_power(k: u32, y_bound: f64) -> ExactMap {
    let needed = k as f64 * y_bound.max(1.0).powi(k as i32 - 1);
    let shift = needed.log2().ceil() as i64;
    let c = frac(1, 1i64 << shift.clamp(0, 60));
    ExactMap::new(ExactPoly::x(), ExactPoly::monomial(0, k, c))
}

fn criterion_8() -> Verdict {
    let d = default_domain();
    let mut rng = substream(SEED, 8);
    let (mut failures, mut errors, mut non_keller) = (0, 0, 0);
    for i in 0..20u64 {
        let g = base_automorphism(&mut rng);
        let (g1, g2) = (perturb(&mut rng, &g), perturb(&mut rng, &g));
        let f = match i % 4 {
            0 => keller_triangular(&mut rng),
            1 => ExactMap::new(ExactPoly::x(), ExactPoly::monomial(0, 1, frac(1, 2))),
            k => {
                let y_bound = image_bounds(&g1, &d).1.max(image_bounds(&g2, &d).1);
                damped_power(k as u32, y_bound)
            }
        };
        if !f.keller_report(false).det_one {
            non_keller += 1;
        }
        match contraction_experiment(&f, &g1, &g2, &d, 100_000, SEED + i) {
            Ok(r) if r.holds => {}
            Ok(_) => failures += 1,
            Err(_) => errors += 1,
        }
    }
    verdict(
        failures == 0 && errors == 0 && non_keller > 0,
        format!("20 triples ({non_keller} with non-Keller f), {failures} failures, {errors} errors"),
    )
}

fn criterion_9() -> Verdict {
    let mut rng = substream(SEED, 9);
    let keller = [
        ExactMap::shear(&[q(0), q(0), q(1)]),
        keller_triangular(&mut rng),
        random_automorphism(&mut rng, 4),
        random_shear(&mut rng, 3),
    ];
    let dominant = [ExactMap::power(2, 3), ExactMap::new(ExactPoly::x(), ExactPoly::monomial(0, 2, q(2)))];
    let mut collisions = 0;
    let mut probes = 0;
    for (i, f) in keller.iter().enumerate() {
        collisions += right_injectivity_probe(f, 100, SEED + i as u64).collisions();
        collisions += left_injectivity_probe(f, 100, SEED + i as u64).collisions();
        probes += 2;
    }
    for (i, f) in dominant.iter().enumerate() {
        collisions += right_injectivity_probe(f, 100, SEED + 100 + i as u64).collisions();
        probes += 1;
    }
    verdict(collisions == 0, format!("{probes} probes of 100 pairs, {collisions} collisions"))
}

#[derive(Clone, Copy, Debug, PartialEq)]
enum Expect {
    Ok,
    Alpha,
    Degree,
    Gcd,
}

/// `(α, β, degrees of the unit terms of Φ, expected verdict)`.
const VALIDATE_TABLE: [(u32, u32, &[u32], Expect); 50] = [
    (1, 1, &[], Expect::Gcd),
    (2, 0, &[1], Expect::Ok),
    (1, 0, &[], Expect::Ok),
    (1, 0, &[1], Expect::Degree),
    (0, 3, &[], Expect::Alpha),
    (0, 0, &[], Expect::Alpha),
    (1, 2, &[], Expect::Gcd),
    (2, 2, &[], Expect::Gcd),
    (2, 2, &[1], Expect::Ok),
    (2, 2, &[2], Expect::Gcd),
    (2, 2, &[0, 2], Expect::Gcd),
    (2, 2, &[3], Expect::Ok),
    (2, 2, &[4], Expect::Degree),
    (3, 0, &[], Expect::Gcd),
    (3, 0, &[1], Expect::Ok),
    (3, 0, &[2], Expect::Ok),
    (3, 3, &[], Expect::Gcd),
    (3, 3, &[2], Expect::Gcd),
    (3, 3, &[3], Expect::Gcd),
    (3, 3, &[2, 3], Expect::Ok),
    (3, 3, &[4], Expect::Gcd),
    (3, 3, &[5], Expect::Ok),
    (3, 3, &[6], Expect::Degree),
    (3, 3, &[0, 4], Expect::Gcd),
    (1, 4, &[], Expect::Gcd),
    (1, 4, &[2], Expect::Ok),
    (1, 4, &[4], Expect::Ok),
    (1, 4, &[5], Expect::Degree),
    (4, 0, &[2], Expect::Gcd),
    (4, 0, &[3], Expect::Ok),
    (4, 0, &[0], Expect::Gcd),
    (4, 2, &[2, 4], Expect::Gcd),
    (4, 2, &[3], Expect::Gcd),
    (4, 2, &[3, 4], Expect::Ok),
    (4, 2, &[5], Expect::Ok),
    (4, 2, &[7], Expect::Degree),
    (5, 0, &[], Expect::Gcd),
    (5, 0, &[4], Expect::Ok),
    (2, 1, &[], Expect::Gcd),
    (2, 1, &[1], Expect::Ok),
    (2, 1, &[0], Expect::Gcd),
    (2, 1, &[2], Expect::Ok),
    (2, 1, &[3], Expect::Degree),
    (1, 1, &[1], Expect::Ok),
    (1, 1, &[0], Expect::Gcd),
    (1, 1, &[0, 1], Expect::Ok),
    (6, 0, &[2, 3], Expect::Ok),
    (6, 0, &[4], Expect::Gcd),
    (6, 0, &[4, 3], Expect::Ok),
    (2, 3, &[0, 5], Expect::Degree),
];

fn unit_phi(degrees: &[u32]) -> Vec<GaussianRational> {
    let len = degrees.iter().max().map_or(0, |&d| d as usize + 1);
    let mut phi = vec![q(0); len];
    for &d in degrees {
        phi[d as usize] = q(1);
    }
    phi
}

/// `g` with both components drawn from the polynomial pullback pool of `r`.
fn pullback_map<R: Rng + ?Sized>(rng: &mut R, r: &CanonicalRational) -> Option<ExactMap> {
    let pool = polynomial_pullback_basis(r, 3);
    if pool.is_empty() {
        return None;
    }
    let mut comp = || {
        let mut p = ExactPoly::zero();
        for _ in 0..rng.random_range(1..=3) {
            let h = &pool[rng.random_range(0..pool.len())];
            p = &p + &h.scale(&q(rng.random_range(1..=3)));
        }
        p
    };
    let p = comp();
    Some(ExactMap::new(p, comp()))
}

fn random_canonical<R: Rng + ?Sized>(rng: &mut R) -> CanonicalRational {
    loop {
        let alpha = rng.random_range(1..=3);
        let beta = rng.random_range(0..=2);
        let len = rng.random_range(0..(alpha + beta) as usize + 1);
        let phi: Vec<GaussianRational> = (0..len).map(|_| q(rng.random_range(-2..=2))).collect();
        if let Ok(r) = CanonicalRational::validate(alpha, beta, phi) {
            return r;
        }
    }
}

fn criterion_10() -> Verdict {
    let mut table_failures = Vec::new();
    for (k, &(alpha, beta, degrees, expect)) in VALIDATE_TABLE.iter().enumerate() {
        let got = match CanonicalRational::validate(alpha, beta, unit_phi(degrees)) {
            Ok(_) => Expect::Ok,
            Err(AsymptoticsError::AlphaNotPositive) => Expect::Alpha,
            Err(AsymptoticsError::PhiDegree { .. }) => Expect::Degree,
            Err(AsymptoticsError::ExponentGcd { .. }) => Expect::Gcd,
            Err(_) => {
                table_failures.push(k);
                continue;
            }
        };
        if got != expect {
            table_failures.push(k);
        }
    }

    let mut examples = 0;
    let r12 = CanonicalRational::unchecked(1, 2, vec![]).expect("alpha positive");
    let id = substitute(&ExactMap::identity(), &r12);
    if id.first == LaurentBivar::monomial(-1, 0, q(1)) && id.second == LaurentBivar::monomial(2, 1, q(1)) && !id.is_polynomial() {
        examples += 1;
    }
    let xy = ExactMap::new(ExactPoly::monomial(1, 1, q(1)), ExactPoly::y());
    let s = substitute(&xy, &r12);
    if s.first == LaurentBivar::monomial(1, 1, q(1)) && s.second == LaurentBivar::monomial(2, 1, q(1)) && s.is_polynomial() {
        examples += 1;
    }
    let r20 = CanonicalRational::validate(2, 0, vec![q(0), q(1)]).expect("canonical");
    let sq = ExactMap::new(ExactPoly::x(), ExactPoly::monomial(0, 2, q(1)));
    let s = substitute(&sq, &r20);
    if s.second == LaurentBivar::from_terms([(0, 2, q(1)), (-1, 1, q(2)), (-2, 0, q(1))]) && !s.is_polynomial() {
        examples += 1;
    }

    let mut rng = substream(SEED, 10);
    let (mut violations, mut instances, mut vacuous) = (0, 0, 0);
    while instances < 100 {
        let r = random_canonical(&mut rng);
        let Some(g) = pullback_map(&mut rng, &r) else { continue };
        let f = match instances % 3 {
            0 => random_automorphism(&mut rng, 4),
            1 => random_power_pair(&mut rng).0 .0,
            _ => random_poly_map(&mut rng),
        };
        let rep = check_basis_monotonicity(&f, &g, &r);
        if !rep.inner_polynomial {
            vacuous += 1;
        }
        if rep.violation {
            violations += 1;
        }
        instances += 1;
    }
    verdict(
        table_failures.is_empty() && examples == 3 && violations == 0 && vacuous == 0,
        format!(
            "table mismatches {table_failures:?}, Laurent examples {examples}/3, monotonicity violations {violations}/100 ({vacuous} vacuous)"
        ),
    )
}

fn criterion_11() -> Verdict {
    let mut build_failures = Vec::new();
    for slices in 1..=5 {
        for stars in 1..=25 {
            for norm in [BallNorm::Euclidean, BallNorm::Sup] {
                match CharacteristicDomain::build(1.0, slices, stars, norm) {
                    Ok(d) if d.verify().is_ok() => {}
                    _ => build_failures.push((slices, stars, norm)),
                }
            }
        }
    }
    let radius = 1.5;
    let d = match CharacteristicDomain::build(radius, 5, 25, BallNorm::Euclidean) {
        Ok(d) => d,
        Err(e) => return verdict(false, format!("domain: {e}")),
    };
    // Hit-or-miss in the cube [-R, R]^4, independent of the ball sampler.
    let n = 1_000_000;
    let mut rng = substream(SEED, 11);
    let mut coord = || rng.random_range(-radius..radius);
    let hits = (0..n)
        .filter(|_| {
            let p = (Complex64::new(coord(), coord()), Complex64::new(coord(), coord()));
            d.contains(p)
        })
        .count();
    let estimate = (2.0 * radius).powi(4) * hits as f64 / n as f64;
    let exact = PI * PI * radius.powi(4) / 2.0;
    let rel = (estimate - exact).abs() / exact;
    verdict(
        build_failures.is_empty() && rel <= 0.01,
        format!("build failures {build_failures:?}, MC vol {estimate:.5} vs π²R⁴/2 {exact:.5} (rel {rel:.2e})"),
    )
}

/// `g` plus one extra monomial of degree at most 8.
fn monomial_twist<R: Rng + ?Sized>(rng: &mut R, g: &ExactMap) -> ExactMap {
    let i = rng.random_range(0..=8u32);
    let j = rng.random_range(0..=(8 - i));
    let c = frac(rng.random_range(1..=5), rng.random_range(1..=7));
    if rng.random_bool(0.5) {
        ExactMap::new(g.p() + &ExactPoly::monomial(i, j, c), g.q().clone())
    } else {
        ExactMap::new(g.p().clone(), g.q() + &ExactPoly::monomial(i, j, c))
    }
}

fn criterion_12() -> Verdict {
    let d = match CharacteristicDomain::build(1.0, 9, 10, BallNorm::Euclidean) {
        Ok(d) => d,
        Err(e) => return verdict(false, format!("domain: {e}")),
    };
    let mut rng = substream(SEED, 12);
    let (mut missed, mut false_alarms, mut errors) = (0, 0, 0);
    for k in 0..100 {
        let g = random_automorphism(&mut rng, 8);
        let h = if k % 2 == 0 {
            monomial_twist(&mut rng, &g)
        } else {
            random_automorphism(&mut rng, 8)
        };
        if g == h {
            continue;
        }
        match d.equality_witness(&g, &h, 8) {
            Ok(false) => {}
            Ok(true) => missed += 1,
            Err(_) => errors += 1,
        }
        let same = ExactMap::identity().compose(&g);
        match d.equality_witness(&g, &same, 8) {
            Ok(true) => {}
            Ok(false) => false_alarms += 1,
            Err(_) => errors += 1,
        }
    }
    verdict(
        missed + false_alarms + errors == 0,
        format!("undistinguished pairs {missed}, equal maps rejected {false_alarms}, errors {errors}"),
    )
}

type Criterion = (&'static str, fn() -> Verdict);

fn main() {
    let criteria: [Criterion; 12] = [
        ("exact semigroup algebra", criterion_1),
        ("degree multiplicativity", criterion_2),
        ("Bezout bound", criterion_3),
        ("analytic volume oracle", criterion_4),
        ("Keller volume exactness", criterion_5),
        ("metric axioms", criterion_6),
        ("isometry", criterion_7),
        ("contraction", criterion_8),
        ("injectivity probes", criterion_9),
        ("asymptotics engine", criterion_10),
        ("domain construction", criterion_11),
        ("equality witness", criterion_12),
    ];
    let only: Option<usize> = std::env::args().skip(1).find_map(|a| a.parse().ok());
    let mut failed = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let id = k + 1;
        if only.is_some_and(|o| o != id) {
            continue;
        }
        let start = Instant::now();
        let v = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|_| verdict(false, "panicked"));
        let tag = if v.pass { "PASS" } else { "FAIL" };
        println!("{tag} criterion {id:>2} ({name}): {} [{}]", v.detail, secs(start.elapsed()));
        if !v.pass {
            failed += 1;
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
