//! C ABI for the planners, symmetric-square cohomology and bounds engine.
//!
//! Conventions:
//! - every fallible call returns a `TcbStatus`; on failure the message is
//!   available from `tcb_last_error` on the same thread;
//! - handles are opaque and released with their `*_free` function;
//! - strings returned through `char **` are owned by the caller and released
//!   with `tcb_string_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use tcb_core::bounds::{parse_space, BoundsEngine, BoundsError, Flavor};
use tcb_core::cohomology::{cup_length, nakaoka_sp2, GradedRing};
use tcb_core::geometry::UnitPoint;
use tcb_core::planners::{plan_pair, Plan, PlanError, WaypointTuple};
use tcb_core::verify::{plan_any, run_suite, VerifyError};

/// Result of every fallible call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TcbStatus {
    Ok = 0,
    NullPointer = 1,
    /// Malformed input: space string, flavor, UTF-8, sizes.
    InvalidArgument = 2,
    /// Well-formed input the library cannot handle (planner or ring error).
    Domain = 3,
    /// A verification suite reported failures.
    Verification = 4,
    /// Internal error; the library caught a panic.
    Internal = 5,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TcbFlavor {
    Tc = 0,
    Beta = 1,
    Sigma = 2,
}

impl From<TcbFlavor> for Flavor {
    fn from(f: TcbFlavor) -> Flavor {
        match f {
            TcbFlavor::Tc => Flavor::TC,
            TcbFlavor::Beta => Flavor::TCbeta,
            TcbFlavor::Sigma => Flavor::TCsigma,
        }
    }
}

/// A planned path with its metadata.
pub struct TcbPath {
    plan: Plan,
}

/// A graded mod-2 cohomology ring.
pub struct TcbRing {
    ring: GradedRing,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

struct Failure(TcbStatus, String);

impl From<PlanError> for Failure {
    fn from(e: PlanError) -> Self {
        Failure(TcbStatus::Domain, e.to_string())
    }
}

impl From<BoundsError> for Failure {
    fn from(e: BoundsError) -> Self {
        let status = match e {
            BoundsError::Parse(_) | BoundsError::InvalidN(_) => TcbStatus::InvalidArgument,
            _ => TcbStatus::Domain,
        };
        Failure(status, e.to_string())
    }
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).expect("no interior NUL");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

/// Runs `f`, records any failure and converts panics into `Internal`.
fn guard(f: impl FnOnce() -> Result<(), Failure>) -> TcbStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            TcbStatus::Ok
        }
        Ok(Err(Failure(status, msg))) => {
            set_error(&msg);
            status
        }
        Err(_) => {
            set_error("internal error");
            TcbStatus::Internal
        }
    }
}

fn null(what: &str) -> Failure {
    Failure(TcbStatus::NullPointer, format!("{what} is NULL"))
}

unsafe fn str_arg<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Failure(TcbStatus::InvalidArgument, format!("{what} is not UTF-8")))
}

unsafe fn put<T>(out: *mut T, value: T, what: &str) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null(what));
    }
    out.write(value);
    Ok(())
}

fn owned_string(s: String) -> *mut c_char {
    CString::new(s).expect("JSON has no NUL").into_raw()
}

/// Message for the last failed call on this thread, or NULL.
/// The pointer stays valid until the next call on this thread.
#[no_mangle]
pub extern "C" fn tcb_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Releases a string returned by this library. NULL is ignored.
///
/// # Safety
/// `s` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn tcb_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Plans a path through `n_points` waypoints on S^`m`.
///
/// `coords` holds `n_points * (m + 1)` doubles, point after point. Two points
/// use the pair planner; more points use the waypoint planner (odd `m` only).
///
/// # Safety
/// `coords` must point to `n_points * (m + 1)` readable doubles.
#[no_mangle]
pub unsafe extern "C" fn tcb_plan(
    coords: *const f64,
    n_points: usize,
    m: usize,
    out: *mut *mut TcbPath,
) -> TcbStatus {
    guard(|| {
        if coords.is_null() {
            return Err(null("coords"));
        }
        if out.is_null() {
            return Err(null("out"));
        }
        let width = m + 1;
        let len = n_points
            .checked_mul(width)
            .ok_or_else(|| Failure(TcbStatus::InvalidArgument, "size overflow".into()))?;
        let flat = std::slice::from_raw_parts(coords, len);
        let points = flat
            .chunks(width)
            .map(|c| UnitPoint::new(c.to_vec()))
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| Failure(TcbStatus::InvalidArgument, e.to_string()))?;
        let w = WaypointTuple::new(points)?;
        let plan = if w.len() == 2 {
            plan_pair(&w.points()[0], &w.points()[1])?
        } else {
            plan_any(&w)?
        };
        out.write(Box::into_raw(Box::new(TcbPath { plan })));
        Ok(())
    })
}

/// Sphere dimension m of the path (points have m + 1 coordinates).
///
/// # Safety
/// `path` must be a live handle or NULL.
#[no_mangle]
pub unsafe extern "C" fn tcb_path_dim(path: *const TcbPath) -> usize {
    path.as_ref().map_or(0, |p| p.plan.path.dim())
}

/// Writes the point at time `t` in `[0, 1]` into `out[0..=m]`.
///
/// # Safety
/// `path` must be a live handle; `out` must hold `out_len` doubles.
#[no_mangle]
pub unsafe extern "C" fn tcb_path_evaluate(
    path: *const TcbPath,
    t: f64,
    out: *mut f64,
    out_len: usize,
) -> TcbStatus {
    guard(|| {
        let p = path.as_ref().ok_or_else(|| null("path"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        let x = p
            .plan
            .path
            .evaluate(t)
            .map_err(|e| Failure(TcbStatus::InvalidArgument, e.to_string()))?;
        if out_len < x.coords().len() {
            return Err(Failure(
                TcbStatus::InvalidArgument,
                format!("output holds {out_len} doubles, need {}", x.coords().len()),
            ));
        }
        ptr::copy_nonoverlapping(x.coords().as_ptr(), out, x.coords().len());
        Ok(())
    })
}

/// The plan (segments, breakpoints, domain, rules, flags) as JSON.
///
/// # Safety
/// `path` must be a live handle; free the result with `tcb_string_free`.
#[no_mangle]
pub unsafe extern "C" fn tcb_path_to_json(path: *const TcbPath, out: *mut *mut c_char) -> TcbStatus {
    guard(|| {
        let p = path.as_ref().ok_or_else(|| null("path"))?;
        let text = serde_json::to_string(&p.plan).expect("plans serialize");
        put(out, owned_string(text), "out")
    })
}

/// # Safety
/// `path` must come from `tcb_plan` and not be freed twice. NULL is ignored.
#[no_mangle]
pub unsafe extern "C" fn tcb_path_free(path: *mut TcbPath) {
    if !path.is_null() {
        drop(Box::from_raw(path));
    }
}

/// Cohomology ring of a space such as `RP(4)` or `Power(S(2),2)`.
///
/// # Safety
/// `space` must be a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn tcb_ring_from_space(space: *const c_char, out: *mut *mut TcbRing) -> TcbStatus {
    guard(|| {
        let spec = parse_space(str_arg(space, "space")?).map_err(BoundsError::from)?;
        let ring = spec
            .ring()
            .ok_or_else(|| Failure(TcbStatus::Domain, format!("no cohomology ring is built for {spec}")))?;
        put(out, Box::into_raw(Box::new(TcbRing { ring })), "out")
    })
}

/// Cohomology of the symmetric square.
///
/// # Safety
/// `ring` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn tcb_ring_sp2(ring: *const TcbRing, out: *mut *mut TcbRing) -> TcbStatus {
    guard(|| {
        let r = ring.as_ref().ok_or_else(|| null("ring"))?;
        let sq = nakaoka_sp2(&r.ring).map_err(|e| Failure(TcbStatus::Domain, e.to_string()))?;
        put(out, Box::into_raw(Box::new(TcbRing { ring: sq })), "out")
    })
}

/// Number of basis elements; 0 for NULL.
///
/// # Safety
/// `ring` must be a live handle or NULL.
#[no_mangle]
pub unsafe extern "C" fn tcb_ring_dim(ring: *const TcbRing) -> usize {
    ring.as_ref().map_or(0, |r| r.ring.dim())
}

/// # Safety
/// `ring` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn tcb_ring_cup_length(ring: *const TcbRing, out: *mut usize) -> TcbStatus {
    guard(|| {
        let r = ring.as_ref().ok_or_else(|| null("ring"))?;
        put(out, cup_length(&r.ring), "out")
    })
}

/// Poincaré polynomial, e.g. `1 + t^2 + t^4`.
///
/// # Safety
/// `ring` must be a live handle; free the result with `tcb_string_free`.
#[no_mangle]
pub unsafe extern "C" fn tcb_ring_poincare(ring: *const TcbRing, out: *mut *mut c_char) -> TcbStatus {
    guard(|| {
        let r = ring.as_ref().ok_or_else(|| null("ring"))?;
        put(out, owned_string(r.ring.poincare_polynomial()), "out")
    })
}

/// # Safety
/// `ring` must come from this library and not be freed twice. NULL is ignored.
#[no_mangle]
pub unsafe extern "C" fn tcb_ring_free(ring: *mut TcbRing) {
    if !ring.is_null() {
        drop(Box::from_raw(ring));
    }
}

/// Closed interval `[lower, upper]` for the given flavor.
///
/// # Safety
/// `space` must be a NUL-terminated string; `lower` and `upper` writable.
#[no_mangle]
pub unsafe extern "C" fn tcb_bounds(
    space: *const c_char,
    n: usize,
    flavor: TcbFlavor,
    lower: *mut u64,
    upper: *mut u64,
) -> TcbStatus {
    guard(|| {
        if lower.is_null() || upper.is_null() {
            return Err(null("lower/upper"));
        }
        let spec = parse_space(str_arg(space, "space")?).map_err(BoundsError::from)?;
        let b = BoundsEngine::new().compute_bounds(&spec, n, flavor.into())?;
        lower.write(b.lower);
        upper.write(b.upper);
        Ok(())
    })
}

/// The interval with its derivations as JSON.
///
/// # Safety
/// `space` must be a NUL-terminated string; free the result with `tcb_string_free`.
#[no_mangle]
pub unsafe extern "C" fn tcb_bounds_json(
    space: *const c_char,
    n: usize,
    flavor: TcbFlavor,
    out: *mut *mut c_char,
) -> TcbStatus {
    guard(|| {
        let spec = parse_space(str_arg(space, "space")?).map_err(BoundsError::from)?;
        let b = BoundsEngine::new().compute_bounds(&spec, n, flavor.into())?;
        put(out, owned_string(serde_json::to_string(&b).expect("intervals serialize")), "out")
    })
}

/// Runs one verification suite and returns its report as JSON.
/// Returns `TCB_STATUS_VERIFICATION` (with the report still written) on failures.
///
/// # Safety
/// `suite` must be a NUL-terminated string; free the result with `tcb_string_free`.
#[no_mangle]
pub unsafe extern "C" fn tcb_verify(
    suite: *const c_char,
    trials: usize,
    seed: u64,
    out: *mut *mut c_char,
) -> TcbStatus {
    guard(|| {
        let name = str_arg(suite, "suite")?;
        if out.is_null() {
            return Err(null("out"));
        }
        let report = run_suite(name, trials, seed)
            .map_err(|e: VerifyError| Failure(TcbStatus::InvalidArgument, e.to_string()))?;
        out.write(owned_string(serde_json::to_string(&report).expect("reports serialize")));
        if report.passed() {
            Ok(())
        } else {
            Err(Failure(
                TcbStatus::Verification,
                format!("{} failures in suite {name}", report.failure_count),
            ))
        }
    })
}
