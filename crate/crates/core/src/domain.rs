//! Characteristic domains `D = B(0, R) - E`.
//!
//! `E` is a finite union of slices `{z_k} × l_k`, where each `l_k` is a
//! segment of the fiber line decorated with thick stars. Slice coordinates
//! `z_k` and star centers are dyadic multiples of the radius, so membership in
//! `E` can be tested exactly. Stars are grouped in bundles of five and every
//! bundle's rays are a tenth as long as the previous bundle's.
//!
//! `E` is closed with empty interior, so `D` has no slits and shares the
//! volume of the ball.

use std::collections::BTreeSet;
use std::f64::consts::PI;

use num_complex::Complex64;
use num_rational::BigRational;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{DomainError, ParseError};
use crate::map::ExactMap;
use crate::sampling::{norm2, uniform_ball, uniform_polydisk, Point};
use crate::scalar::{format_rational, GaussianRational};

pub const BUNDLE_SIZE: usize = 5;
pub const BUNDLE_DECAY: f64 = 10.0;

/// A bounded open region of `C^2` that can be sampled uniformly.
pub trait Region: Sync {
    fn contains(&self, p: Point) -> bool;

    /// Distance from `p` to the outer boundary (0 on it).
    fn boundary_distance(&self, p: Point) -> f64;

    fn volume(&self) -> f64;

    /// Every point of the region satisfies `|x|, |y| <= coordinate_bound()`.
    fn coordinate_bound(&self) -> f64;

    /// A uniform sample of the bounding ball; callers reject points that
    /// fail [`Region::contains`].
    fn sample_bounding<R: Rng + ?Sized>(&self, rng: &mut R) -> Point;
}

/// Norm defining the ball `B(0, R)`: Euclidean on `R^4`, or the max of the
/// two coordinate moduli (a polydisk).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BallNorm {
    Euclidean,
    Sup,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Ball {
    pub radius: f64,
    pub norm: BallNorm,
}

impl Ball {
    pub fn new(radius: f64, norm: BallNorm) -> Result<Self, DomainError> {
        if !(radius.is_finite() && radius > 0.0) {
            return Err(DomainError::BadRadius(radius));
        }
        Ok(Self { radius, norm })
    }

    pub fn norm_of(&self, p: Point) -> f64 {
        match self.norm {
            BallNorm::Euclidean => norm2(p),
            BallNorm::Sup => p.0.norm().max(p.1.norm()),
        }
    }
}

impl Region for Ball {
    fn contains(&self, p: Point) -> bool {
        self.norm_of(p) < self.radius
    }

    fn boundary_distance(&self, p: Point) -> f64 {
        match self.norm {
            BallNorm::Euclidean => (norm2(p) - self.radius).abs(),
            // Distance to the boundary of the polydisk is at most the
            // distance to either cylinder |x| = R, |y| = R.
            BallNorm::Sup => {
                (p.0.norm() - self.radius).abs().min((p.1.norm() - self.radius).abs())
            }
        }
    }

    fn volume(&self) -> f64 {
        let r4 = self.radius.powi(4);
        match self.norm {
            BallNorm::Euclidean => PI * PI * r4 / 2.0,
            BallNorm::Sup => PI * PI * r4,
        }
    }

    fn coordinate_bound(&self) -> f64 {
        self.radius
    }

    fn sample_bounding<R: Rng + ?Sized>(&self, rng: &mut R) -> Point {
        match self.norm {
            BallNorm::Euclidean => uniform_ball(rng, self.radius),
            BallNorm::Sup => uniform_polydisk(rng, self.radius, self.radius),
        }
    }
}

/// `2m` congruent isosceles triangles with a common apex, meeting pairwise
/// only at that apex.
#[derive(Clone, Debug, PartialEq)]
pub struct ThickStar {
    pub center: Complex64,
    pub valence: u32,
    pub triangles: Vec<[Complex64; 3]>,
    pub max_ray_length: f64,
    pub angle_offset: f64,
}

impl ThickStar {
    /// Apex angle of each triangle. The triangles sit in sectors of angle
    /// `pi/m`, so an apex angle below that keeps them apart, and capping it
    /// at `pi/4` keeps every base shorter than the ray.
    pub fn apex_angle(m: u32) -> f64 {
        (PI / (2.0 * m as f64)).min(PI / 4.0)
    }

    pub fn build(center: Complex64, m: u32, ray_length: f64, angle_offset: f64) -> Result<Self, DomainError> {
        if m == 0 {
            return Err(DomainError::ZeroValence);
        }
        if !(ray_length.is_finite() && ray_length > 0.0) {
            return Err(DomainError::BadRayLength(ray_length));
        }
        let theta = Self::apex_angle(m);
        let triangles = (0..2 * m)
            .map(|k| {
                let start = angle_offset + k as f64 * PI / m as f64;
                [
                    center,
                    center + Complex64::from_polar(ray_length, start),
                    center + Complex64::from_polar(ray_length, start + theta),
                ]
            })
            .collect();
        let star = Self {
            center,
            valence: m,
            triangles,
            max_ray_length: ray_length,
            angle_offset,
        };
        star.check()?;
        Ok(star)
    }

    fn check(&self) -> Result<(), DomainError> {
        let m = self.valence;
        if self.triangles.len() != 2 * m as usize {
            return Err(DomainError::Invariant(format!(
                "star at {} has {} triangles, expected {}",
                self.center,
                self.triangles.len(),
                2 * m
            )));
        }
        // Angular sectors [k*pi/m, k*pi/m + theta] are disjoint iff theta < pi/m.
        if Self::apex_angle(m) >= PI / m as f64 {
            return Err(DomainError::Invariant("triangle sectors overlap".into()));
        }
        // Vertices are stored relative to the origin, so their differences
        // carry round-off on the scale of the center.
        let slack = 1e-12 * self.max_ray_length + 16.0 * f64::EPSILON * (self.center.norm() + self.max_ray_length);
        for t in &self.triangles {
            let diam = (t[0] - t[1])
                .norm()
                .max((t[0] - t[2]).norm())
                .max((t[1] - t[2]).norm());
            if diam > self.max_ray_length + slack {
                return Err(DomainError::Invariant(format!(
                    "triangle diameter {diam} exceeds ray length {}",
                    self.max_ray_length
                )));
            }
        }
        Ok(())
    }

    /// Closed membership in the union of triangles.
    pub fn contains(&self, w: Complex64) -> bool {
        if (w - self.center).norm() > self.max_ray_length {
            return false;
        }
        self.triangles.iter().any(|t| in_triangle(w, t))
    }
}

fn cross(a: Complex64, b: Complex64, p: Complex64) -> f64 {
    (b - a).re * (p - a).im - (b - a).im * (p - a).re
}

fn in_triangle(p: Complex64, t: &[Complex64; 3]) -> bool {
    let d1 = cross(t[0], t[1], p);
    let d2 = cross(t[1], t[2], p);
    let d3 = cross(t[2], t[0], p);
    let neg = d1 < 0.0 || d2 < 0.0 || d3 < 0.0;
    let pos = d1 > 0.0 || d2 > 0.0 || d3 > 0.0;
    !(neg && pos)
}

/// `k`-th point (k >= 1) of the base-2 van der Corput sequence as
/// `(numerator, log2 denominator)`: 1/2, 1/4, 3/4, 1/8, 3/8, ...
pub fn dyadic_point(k: u64) -> (u64, u32) {
    let mut num = 0u64;
    let mut bits = 0u32;
    let mut n = k;
    while n > 0 {
        num = (num << 1) | (n & 1);
        n >>= 1;
        bits += 1;
    }
    let (mut num, mut bits) = (num, bits);
    while num % 2 == 0 && bits > 0 {
        num /= 2;
        bits -= 1;
    }
    (num, bits)
}

fn dyadic_value((num, bits): (u64, u32)) -> f64 {
    num as f64 / (1u64 << bits) as f64
}

/// The segment `l` with its stars, lying over one slice coordinate.
#[derive(Clone, Debug, PartialEq)]
pub struct StaredSegment {
    pub z: f64,
    pub segment: (Complex64, Complex64),
    /// Dyadic parameter of each star center along the segment.
    pub params: Vec<(u64, u32)>,
    pub stars: Vec<ThickStar>,
}

impl StaredSegment {
    pub fn valences(&self) -> Vec<u32> {
        self.stars.iter().map(|s| s.valence).collect()
    }

    pub fn bundles(&self) -> impl Iterator<Item = &[ThickStar]> {
        self.stars.chunks(BUNDLE_SIZE)
    }

    fn on_segment(&self, w: Complex64) -> bool {
        let (a, b) = self.segment;
        w.im == 0.0 && a.im == 0.0 && b.im == 0.0 && w.re >= a.re.min(b.re) && w.re <= a.re.max(b.re)
    }

    pub fn contains(&self, w: Complex64) -> bool {
        self.on_segment(w) || self.stars.iter().any(|s| s.contains(w))
    }
}

/// `D = B(0, R) - E` with a finite truncation of the star construction.
#[derive(Clone, Debug, PartialEq)]
pub struct CharacteristicDomain {
    pub ball: Ball,
    /// Limit point of the slice coordinates.
    pub limit_point: f64,
    pub slices: Vec<StaredSegment>,
    /// Stars realized per slice.
    pub stars_per_slice: usize,
}

impl CharacteristicDomain {
    /// Lays out `num_slices` slices with `stars` thick stars each, scaled to
    /// the radius:
    ///
    /// * slice `k` sits over `z_k = R (1/2 + 2^-(k+2))`, converging to `R/2`;
    /// * every segment runs from `0` to `R/2` on the real axis of the fiber;
    /// * star `j` is centered at the `(j+1)`-th van der Corput point of the
    ///   segment and has valence `S·j + k + 1` (`S` slices), so valences are
    ///   increasing within a slice and disjoint across slices;
    /// * bundle `b` has ray length `L0 / 10^b`, with `L0` below a half of the
    ///   smallest gap between centers.
    ///
    /// All invariants are verified before returning.
    pub fn build(radius: f64, num_slices: usize, stars: usize, norm: BallNorm) -> Result<Self, DomainError> {
        let ball = Ball::new(radius, norm)?;
        if num_slices == 0 || stars == 0 {
            return Err(DomainError::EmptyConstruction);
        }
        let seg_len = radius / 2.0;
        // The first `stars` van der Corput points are spaced at least 2^-L apart.
        let level = (usize::BITS - stars.leading_zeros()) as i32;
        let gap = seg_len * 2f64.powi(-level);
        let base_ray = 0.4 * gap;

        let mut slices = Vec::with_capacity(num_slices);
        for k in 0..num_slices {
            let z = radius * (0.5 + 2f64.powi(-(k as i32 + 2)));
            let mut params = Vec::with_capacity(stars);
            let mut star_list = Vec::with_capacity(stars);
            let mut ray = base_ray;
            for j in 0..stars {
                if j > 0 && j % BUNDLE_SIZE == 0 {
                    ray /= BUNDLE_DECAY;
                }
                let t = dyadic_point(j as u64 + 1);
                let center = Complex64::new(seg_len * dyadic_value(t), 0.0);
                let valence = (num_slices * j + k + 1) as u32;
                star_list.push(ThickStar::build(center, valence, ray, 0.0)?);
                params.push(t);
            }
            slices.push(StaredSegment {
                z,
                segment: (Complex64::new(0.0, 0.0), Complex64::new(seg_len, 0.0)),
                params,
                stars: star_list,
            });
        }
        let domain = Self {
            ball,
            limit_point: radius / 2.0,
            slices,
            stars_per_slice: stars,
        };
        domain.verify()?;
        Ok(domain)
    }

    /// Checks disjointness, bundle decay, valence partition and `E ⊂ B(0,R)`.
    pub fn verify(&self) -> Result<(), DomainError> {
        let fail = |msg: String| Err(DomainError::Invariant(msg));
        let zs: BTreeSet<u64> = self.slices.iter().map(|s| s.z.to_bits()).collect();
        if zs.len() != self.slices.len() {
            return fail("slice coordinates are not distinct".into());
        }
        let mut seen_valences = BTreeSet::new();
        for (k, slice) in self.slices.iter().enumerate() {
            let vals = slice.valences();
            if vals.windows(2).any(|w| w[0] >= w[1]) {
                return fail(format!("valences of slice {k} are not strictly increasing"));
            }
            for v in vals {
                if !seen_valences.insert(v) {
                    return fail(format!("valence {v} appears in two slices"));
                }
            }
            for (a, s) in slice.stars.iter().enumerate() {
                s.check()?;
                if s.center.im != 0.0 || !slice.on_segment(s.center) {
                    return fail(format!("star {a} of slice {k} is off its segment"));
                }
                for t in slice.stars.iter().skip(a + 1) {
                    if (s.center - t.center).norm() <= s.max_ray_length + t.max_ray_length {
                        return fail(format!("stars of slice {k} at {} and {} may touch", s.center, t.center));
                    }
                }
                let reach = s.center.norm() + s.max_ray_length;
                let far = (Complex64::new(slice.z, 0.0), Complex64::new(reach, 0.0));
                if self.ball.norm_of(far) >= self.ball.radius {
                    return fail(format!("star {a} of slice {k} leaves the ball"));
                }
            }
            let bundle_max: Vec<f64> = slice
                .bundles()
                .map(|b| b.iter().map(|s| s.max_ray_length).fold(0.0, f64::max))
                .collect();
            if bundle_max.windows(2).any(|w| w[1] > w[0] / BUNDLE_DECAY) {
                return fail(format!("bundle rays of slice {k} do not decay by 10"));
            }
            let end = (Complex64::new(slice.z, 0.0), slice.segment.1);
            if self.ball.norm_of(end) >= self.ball.radius {
                return fail(format!("segment of slice {k} leaves the ball"));
            }
        }
        Ok(())
    }

    pub fn radius(&self) -> f64 {
        self.ball.radius
    }

    /// Membership in `E`: the first coordinate must equal a slice coordinate
    /// exactly, and the second must lie on that slice's stared segment.
    pub fn in_star_set(&self, p: Point) -> bool {
        if p.0.im != 0.0 {
            return false;
        }
        self.slices
            .iter()
            .filter(|s| s.z == p.0.re)
            .any(|s| s.contains(p.1))
    }

    /// `d` tensor-grid nodes on each axis: slice coordinates and dyadic points
    /// on the segment, both exact.
    pub fn interpolation_grid(&self, nodes: usize) -> Result<(Vec<GaussianRational>, Vec<GaussianRational>), DomainError> {
        if self.slices.len() < nodes {
            return Err(DomainError::InsufficientGrid {
                needed: nodes,
                available: self.slices.len(),
            });
        }
        let exact = |v: f64| GaussianRational::from_dyadic_f64(v, 0.0).expect("finite coordinate");
        let zs = self.slices[..nodes].iter().map(|s| exact(s.z)).collect();
        let seg_len = self.slices[0].segment.1.re;
        let ws = (1..=nodes as u64)
            .map(|k| exact(seg_len * dyadic_value(dyadic_point(k))))
            .collect();
        Ok((zs, ws))
    }

    /// Decides `f1 = f2` for maps of degree at most `degree_bound` from
    /// their values on a `(degree_bound+1)^2` grid in the slices of `E`.
    /// Two polynomials of degree `<= d` in each variable that agree on a
    /// `(d+1) x (d+1)` tensor grid are equal.
    pub fn equality_witness(&self, f1: &ExactMap, f2: &ExactMap, degree_bound: u32) -> Result<bool, DomainError> {
        for f in [f1, f2] {
            if f.degree() > degree_bound {
                return Err(DomainError::DegreeBoundViolated {
                    degree: f.degree(),
                    bound: degree_bound,
                });
            }
        }
        let (zs, ws) = self.interpolation_grid(degree_bound as usize + 1)?;
        for z in &zs {
            for w in &ws {
                if f1.eval(z, w) != f2.eval(z, w) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    pub fn to_file(&self) -> DomainFile {
        let exact = |v: f64| format_rational(&BigRational::from_float(v).expect("finite coordinate"));
        DomainFile {
            radius: self.ball.radius,
            norm: self.ball.norm,
            slices: self.slices.len(),
            stars: self.stars_per_slice,
            limit_point: exact(self.limit_point),
            slice_data: self
                .slices
                .iter()
                .map(|s| SliceRecord {
                    z: exact(s.z),
                    segment: [exact(s.segment.0.re), exact(s.segment.1.re)],
                    stars: s
                        .stars
                        .iter()
                        .zip(&s.params)
                        .map(|(star, &(num, bits))| StarRecord {
                            param: format!("{num}/{}", 1u64 << bits),
                            center: exact(star.center.re),
                            valence: star.valence,
                            ray_length: star.max_ray_length,
                            angle_offset: star.angle_offset,
                        })
                        .collect(),
                })
                .collect(),
        }
    }

    /// Rebuilds the domain from the file's parameters and checks that the
    /// stored geometry matches.
    pub fn from_file(file: &DomainFile) -> Result<Self, ParseError> {
        let d = Self::build(file.radius, file.slices, file.stars, file.norm)
            .map_err(|e| ParseError::DomainFile(e.to_string()))?;
        if d.to_file() != *file {
            return Err(ParseError::DomainFile(
                "stored geometry does not match its construction parameters".into(),
            ));
        }
        Ok(d)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_file()).expect("domain serializes")
    }

    pub fn from_json(s: &str) -> Result<Self, ParseError> {
        Self::from_file(&serde_json::from_str(s)?)
    }
}

impl Region for CharacteristicDomain {
    fn contains(&self, p: Point) -> bool {
        self.ball.contains(p) && !self.in_star_set(p)
    }

    fn boundary_distance(&self, p: Point) -> f64 {
        self.ball.boundary_distance(p)
    }

    fn volume(&self) -> f64 {
        self.ball.volume()
    }

    fn coordinate_bound(&self) -> f64 {
        self.ball.radius
    }

    fn sample_bounding<R: Rng + ?Sized>(&self, rng: &mut R) -> Point {
        self.ball.sample_bounding(rng)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DomainFile {
    pub radius: f64,
    pub norm: BallNorm,
    pub slices: usize,
    pub stars: usize,
    pub limit_point: String,
    pub slice_data: Vec<SliceRecord>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SliceRecord {
    pub z: String,
    pub segment: [String; 2],
    pub stars: Vec<StarRecord>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StarRecord {
    pub param: String,
    pub center: String,
    pub valence: u32,
    pub ray_length: f64,
    pub angle_offset: f64,
}
