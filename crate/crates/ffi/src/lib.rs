//! C ABI for `keller-lab`.
//!
//! Maps and domains cross the boundary as opaque handles that the caller
//! frees with the matching `*_free` function. Every fallible call returns a
//! [`KlStatus`]; on failure a description is available from
//! [`kl_last_error_message`] on the same thread. Panics never unwind into C.

use std::cell::RefCell;
use std::ffi::{c_char, CStr};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use keller_lab::domain::{BallNorm, CharacteristicDomain};
use keller_lab::fiber::{geometric_degree, solve_fiber, FiberStatus};
use keller_lab::io::{map_from_json, map_to_json};
use keller_lab::metric;
use keller_lab::{ExactMap, RunError};
use num_complex::Complex64;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum KlStatus {
    Ok = 0,
    NullPointer = 1,
    Parse = 2,
    Precondition = 3,
    Degenerate = 5,
    BufferTooSmall = 6,
    InvalidUtf8 = 7,
    Panic = 8,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum KlNorm {
    Euclidean = 0,
    Sup = 1,
}

/// Opaque polynomial map with exact Gaussian-rational coefficients.
pub struct KlMap {
    inner: ExactMap,
}

/// Opaque characteristic domain.
pub struct KlDomain {
    inner: CharacteristicDomain,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct KlMetricEstimate {
    pub value: f64,
    pub std_error: f64,
    pub samples: usize,
    pub discarded: usize,
    pub seed: u64,
    pub g1_side: f64,
    pub g2_side: f64,
}

thread_local! {
    static LAST_ERROR: RefCell<String> = const { RefCell::new(String::new()) };
}

fn set_error(msg: String) {
    LAST_ERROR.with(|e| *e.borrow_mut() = msg);
}

fn fail(status: KlStatus, msg: impl Into<String>) -> KlStatus {
    set_error(msg.into());
    status
}

fn from_run_error(e: RunError) -> KlStatus {
    let status = match e.exit_code() {
        RunError::PARSE => KlStatus::Parse,
        RunError::DEGENERATE => KlStatus::Degenerate,
        _ => KlStatus::Precondition,
    };
    fail(status, e.to_string())
}

fn guard<F: FnOnce() -> KlStatus>(f: F) -> KlStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => s,
        Err(_) => fail(KlStatus::Panic, "internal panic"),
    }
}

/// Copies `text` plus a NUL into `buf`, reporting the required size in
/// `needed` (including the NUL) whether or not it fits.
unsafe fn copy_out(text: &str, buf: *mut c_char, capacity: usize, needed: *mut usize) -> KlStatus {
    let len = text.len() + 1;
    if !needed.is_null() {
        *needed = len;
    }
    if buf.is_null() || capacity < len {
        return fail(KlStatus::BufferTooSmall, format!("buffer of {capacity} bytes, need {len}"));
    }
    ptr::copy_nonoverlapping(text.as_ptr(), buf as *mut u8, text.len());
    *buf.add(text.len()) = 0;
    KlStatus::Ok
}

/// Copies the last error message of this thread into `buf`.
///
/// # Safety
/// `buf` must be null or valid for `capacity` bytes; `needed` must be null
/// or writable.
#[no_mangle]
pub unsafe extern "C" fn kl_last_error_message(buf: *mut c_char, capacity: usize, needed: *mut usize) -> KlStatus {
    let msg = LAST_ERROR.with(|e| e.borrow().clone());
    copy_out(&msg, buf, capacity, needed)
}

/// Parses a map from the JSON map-definition format.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn kl_map_from_json(json: *const c_char, out: *mut *mut KlMap) -> KlStatus {
    guard(|| {
        if json.is_null() || out.is_null() {
            return fail(KlStatus::NullPointer, "null argument");
        }
        let Ok(text) = CStr::from_ptr(json).to_str() else {
            return fail(KlStatus::InvalidUtf8, "map text is not UTF-8");
        };
        match map_from_json(text) {
            Ok(inner) => {
                *out = Box::into_raw(Box::new(KlMap { inner }));
                KlStatus::Ok
            }
            Err(e) => from_run_error(e.into()),
        }
    })
}

/// Writes the canonical JSON of `map` into `buf`.
///
/// # Safety
/// `map` must come from this library; `buf` must be null or valid for
/// `capacity` bytes; `needed` must be null or writable.
#[no_mangle]
pub unsafe extern "C" fn kl_map_to_json(map: *const KlMap, buf: *mut c_char, capacity: usize, needed: *mut usize) -> KlStatus {
    guard(|| match map.as_ref() {
        None => fail(KlStatus::NullPointer, "null map"),
        Some(m) => copy_out(&map_to_json(&m.inner), buf, capacity, needed),
    })
}

/// # Safety
/// `map` must be null or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn kl_map_free(map: *mut KlMap) {
    if !map.is_null() {
        drop(Box::from_raw(map));
    }
}

/// `*out = f∘g`.
///
/// # Safety
/// `f` and `g` must be valid handles and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn kl_map_compose(f: *const KlMap, g: *const KlMap, out: *mut *mut KlMap) -> KlStatus {
    guard(|| match (f.as_ref(), g.as_ref()) {
        (Some(f), Some(g)) if !out.is_null() => {
            *out = Box::into_raw(Box::new(KlMap {
                inner: f.inner.compose(&g.inner),
            }));
            KlStatus::Ok
        }
        _ => fail(KlStatus::NullPointer, "null argument"),
    })
}

/// Sets `*passes` to whether `det J ≡ 1` and, when `strict`, both
/// components have Y-degree equal to their total degree.
///
/// # Safety
/// `map` must be a valid handle and `passes` writable.
#[no_mangle]
pub unsafe extern "C" fn kl_map_keller_check(map: *const KlMap, strict: bool, passes: *mut bool) -> KlStatus {
    guard(|| match map.as_ref() {
        Some(m) if !passes.is_null() => {
            *passes = m.inner.keller_report(strict).passes();
            KlStatus::Ok
        }
        _ => fail(KlStatus::NullPointer, "null argument"),
    })
}

/// Solves `F(x, y) = (a, b)` with `target = [a_re, a_im, b_re, b_im]`.
/// Points are written as consecutive `[x_re, x_im, y_re, y_im]` quadruples;
/// `*count` receives the fiber size even when `capacity` points do not fit.
///
/// # Safety
/// `target` must hold 4 doubles, `points` must be null or hold
/// `4 * capacity` doubles, and `count` must be writable.
#[no_mangle]
pub unsafe extern "C" fn kl_fiber_solve(
    map: *const KlMap,
    target: *const f64,
    points: *mut f64,
    capacity: usize,
    count: *mut usize,
) -> KlStatus {
    guard(|| {
        let Some(m) = map.as_ref() else {
            return fail(KlStatus::NullPointer, "null map");
        };
        if target.is_null() || count.is_null() {
            return fail(KlStatus::NullPointer, "null argument");
        }
        let t = std::slice::from_raw_parts(target, 4);
        let w = (Complex64::new(t[0], t[1]), Complex64::new(t[2], t[3]));
        let fiber = match solve_fiber(&m.inner, w) {
            Ok(f) => f,
            Err(e) => return from_run_error(e.into()),
        };
        if fiber.status == FiberStatus::Degenerate {
            return fail(KlStatus::Degenerate, "fiber looks positive-dimensional");
        }
        *count = fiber.count();
        if points.is_null() || capacity < fiber.count() {
            return fail(KlStatus::BufferTooSmall, format!("room for {capacity} points, need {}", fiber.count()));
        }
        let out = std::slice::from_raw_parts_mut(points, 4 * fiber.count());
        for (k, p) in fiber.points.iter().enumerate() {
            out[4 * k..4 * k + 4].copy_from_slice(&[p.0.re, p.0.im, p.1.re, p.1.im]);
        }
        KlStatus::Ok
    })
}

/// Largest fiber size over `targets` random targets.
///
/// # Safety
/// `map` must be a valid handle and `degree` writable.
#[no_mangle]
pub unsafe extern "C" fn kl_geometric_degree(map: *const KlMap, targets: usize, seed: u64, degree: *mut usize) -> KlStatus {
    guard(|| match map.as_ref() {
        Some(m) if !degree.is_null() => match geometric_degree(&m.inner, targets, seed) {
            Ok(est) => {
                *degree = est.d;
                KlStatus::Ok
            }
            Err(e) => from_run_error(e.into()),
        },
        _ => fail(KlStatus::NullPointer, "null argument"),
    })
}

/// Builds a characteristic domain.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn kl_domain_build(radius: f64, slices: usize, stars: usize, norm: KlNorm, out: *mut *mut KlDomain) -> KlStatus {
    guard(|| {
        if out.is_null() {
            return fail(KlStatus::NullPointer, "null argument");
        }
        let norm = match norm {
            KlNorm::Euclidean => BallNorm::Euclidean,
            KlNorm::Sup => BallNorm::Sup,
        };
        match CharacteristicDomain::build(radius, slices, stars, norm) {
            Ok(inner) => {
                *out = Box::into_raw(Box::new(KlDomain { inner }));
                KlStatus::Ok
            }
            Err(e) => from_run_error(e.into()),
        }
    })
}

/// # Safety
/// `domain` must be null or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn kl_domain_free(domain: *mut KlDomain) {
    if !domain.is_null() {
        drop(Box::from_raw(domain));
    }
}

/// Monte Carlo estimate of `ρ_D(g1, g2)`.
///
/// # Safety
/// All handles must be valid and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn kl_rho(
    g1: *const KlMap,
    g2: *const KlMap,
    domain: *const KlDomain,
    samples: usize,
    seed: u64,
    out: *mut KlMetricEstimate,
) -> KlStatus {
    guard(|| match (g1.as_ref(), g2.as_ref(), domain.as_ref()) {
        (Some(a), Some(b), Some(d)) if !out.is_null() => match metric::rho(&a.inner, &b.inner, &d.inner, samples, seed) {
            Ok(e) => {
                *out = KlMetricEstimate {
                    value: e.value,
                    std_error: e.std_error,
                    samples: e.samples,
                    discarded: e.discarded,
                    seed: e.seed,
                    g1_side: e.g1_side,
                    g2_side: e.g2_side,
                };
                KlStatus::Ok
            }
            Err(e) => from_run_error(e.into()),
        },
        _ => fail(KlStatus::NullPointer, "null argument"),
    })
}
