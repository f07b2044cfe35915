//! C ABI over `mink-centers`.
//!
//! Objects are opaque handles created by `*_new`/`mink_norm_*` constructors
//! and released by the matching `*_free`. Every fallible call returns a
//! [`MinkStatus`]; on failure, [`mink_last_error_message`] describes the
//! error on the calling thread. Coordinates are passed as row-major
//! `double` arrays, one row per point.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::slice;

use mink_centers::centers::full_report;
use mink_centers::circumcenter::{solve_circumcenter_with, SolverOptions};
use mink_centers::instance::{run_centers, InstanceFile};
use mink_centers::norms::eval_norm;
use mink_centers::polygon::verify_polygon_theorems;
use mink_centers::{CentersReport, CyclicPolygon, GeomError, NormSpec, Point, Simplex, Tolerances};

/// Result code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MinkStatus {
    Ok = 0,
    /// Invalid input: bad norm, degenerate simplex, dimension mismatch.
    InvalidInput = 1,
    /// No circumcenter was located at tolerance.
    NotFound = 2,
    NullPointer = 3,
    BufferTooSmall = 4,
    /// A Rust panic was caught at the boundary.
    Internal = 5,
}

/// Point selector for [`mink_report_point`].
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MinkCenter {
    Circumcenter = 0,
    Centroid = 1,
    MongePoint = 2,
    ComplementaryPoint = 3,
    FeuerbachCenter = 4,
}

pub struct MinkNorm(NormSpec);

pub struct MinkSimplex(Simplex);

pub struct MinkReport(CentersReport);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: String) {
    let c = CString::new(message.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

struct Fail(MinkStatus, String);

impl From<GeomError> for Fail {
    fn from(e: GeomError) -> Self {
        let status = match e {
            GeomError::CircumcenterNotFound { .. } => MinkStatus::NotFound,
            _ => MinkStatus::InvalidInput,
        };
        Fail(status, e.to_string())
    }
}

fn null(what: &str) -> Fail {
    Fail(MinkStatus::NullPointer, format!("{what} is null"))
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> MinkStatus {
    clear_error();
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => MinkStatus::Ok,
        Ok(Err(Fail(status, message))) => {
            set_error(message);
            status
        }
        Err(_) => {
            set_error("internal error".into());
            MinkStatus::Internal
        }
    }
}

unsafe fn rows(coords: *const f64, n: usize, dim: usize) -> Result<Vec<Point>, Fail> {
    if coords.is_null() {
        return Err(null("coords"));
    }
    let len = n
        .checked_mul(dim)
        .ok_or_else(|| Fail(MinkStatus::InvalidInput, "coordinate count overflows".into()))?;
    let data: &[f64] = slice::from_raw_parts(coords, len);
    Ok(data.chunks(dim.max(1)).take(n).map(Point::from_column_slice).collect())
}

unsafe fn out_slice<'a>(out: *mut f64, len: usize, need: usize) -> Result<&'a mut [f64], Fail> {
    if out.is_null() {
        return Err(null("output buffer"));
    }
    if len < need {
        return Err(Fail(
            MinkStatus::BufferTooSmall,
            format!("buffer holds {len} values, {need} needed"),
        ));
    }
    Ok(slice::from_raw_parts_mut(out, need))
}

fn tolerances(eps_geom: f64) -> Result<Tolerances, Fail> {
    let base = Tolerances::default();
    if eps_geom > 0.0 {
        Ok(base.with_eps_geom(eps_geom)?)
    } else {
        Ok(base)
    }
}

unsafe fn put<T>(out: *mut *mut T, value: T) -> Result<(), Fail> {
    if out.is_null() {
        return Err(null("out"));
    }
    *out = Box::into_raw(Box::new(value));
    Ok(())
}

fn into_c_string(s: String) -> *mut c_char {
    CString::new(s).map(CString::into_raw).unwrap_or(ptr::null_mut())
}

/// Message of the last failed call on this thread, or NULL. Valid until the
/// next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn mink_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// # Safety
/// `out` must be a valid pointer to a handle slot.
#[no_mangle]
pub unsafe extern "C" fn mink_norm_euclidean(out: *mut *mut MinkNorm) -> MinkStatus {
    guard(|| put(out, MinkNorm(NormSpec::Euclidean)))
}

/// `l_p` norm for `p >= 1`; pass `INFINITY` for the maximum norm.
///
/// # Safety
/// `out` must be a valid pointer to a handle slot.
#[no_mangle]
pub unsafe extern "C" fn mink_norm_lp(p: f64, out: *mut *mut MinkNorm) -> MinkStatus {
    guard(|| put(out, MinkNorm(NormSpec::lp(p)?)))
}

/// Polyhedral norm from the vertices of a centrally symmetric unit ball.
///
/// # Safety
/// `coords` must hold `n_vertices * dim` doubles; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn mink_norm_polyhedral(
    coords: *const f64,
    n_vertices: usize,
    dim: usize,
    out: *mut *mut MinkNorm,
) -> MinkStatus {
    guard(|| {
        let vs = rows(coords, n_vertices, dim)?;
        put(out, MinkNorm(NormSpec::polyhedral(vs)?))
    })
}

/// # Safety
/// `norm` must come from a constructor above and `v` hold `dim` doubles.
#[no_mangle]
pub unsafe extern "C" fn mink_norm_eval(norm: *const MinkNorm, v: *const f64, dim: usize, out: *mut f64) -> MinkStatus {
    guard(|| {
        let norm = norm.as_ref().ok_or_else(|| null("norm"))?;
        let v = rows(v, 1, dim)?.pop().unwrap_or_else(|| Point::zeros(0));
        let value = eval_norm(&norm.0, &v)?;
        *out_slice(out, 1, 1)?.first_mut().expect("one slot") = value;
        Ok(())
    })
}

/// # Safety
/// `norm` must be NULL or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn mink_norm_free(norm: *mut MinkNorm) {
    if !norm.is_null() {
        drop(Box::from_raw(norm));
    }
}

/// Simplex from `dim + 1` points of dimension `dim`. `eps_geom <= 0` uses
/// the default tolerance.
///
/// # Safety
/// `coords` must hold `n_vertices * dim` doubles; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn mink_simplex_new(
    coords: *const f64,
    n_vertices: usize,
    dim: usize,
    eps_geom: f64,
    out: *mut *mut MinkSimplex,
) -> MinkStatus {
    guard(|| {
        let tol = tolerances(eps_geom)?;
        let vs = rows(coords, n_vertices, dim)?;
        put(out, MinkSimplex(Simplex::new(vs, &tol)?))
    })
}

/// Dimension `d` of the simplex, or 0 for NULL.
///
/// # Safety
/// `simplex` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn mink_simplex_dim(simplex: *const MinkSimplex) -> usize {
    simplex.as_ref().map_or(0, |s| s.0.dim())
}

/// # Safety
/// `simplex` must be NULL or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn mink_simplex_free(simplex: *mut MinkSimplex) {
    if !simplex.is_null() {
        drop(Box::from_raw(simplex));
    }
}

/// Locates a circumcenter. Writes `dim` coordinates to `center` and the
/// radius to `radius`; returns `MINK_STATUS_NOT_FOUND` when none is located.
///
/// # Safety
/// Handles must be live; `center` must hold `center_len` doubles.
#[no_mangle]
pub unsafe extern "C" fn mink_solve_circumcenter(
    norm: *const MinkNorm,
    simplex: *const MinkSimplex,
    eps_geom: f64,
    seed: u64,
    center: *mut f64,
    center_len: usize,
    radius: *mut f64,
) -> MinkStatus {
    guard(|| {
        let norm = norm.as_ref().ok_or_else(|| null("norm"))?;
        let t = simplex.as_ref().ok_or_else(|| null("simplex"))?;
        if radius.is_null() {
            return Err(null("radius"));
        }
        let tol = tolerances(eps_geom)?;
        let opts = SolverOptions { starts: None, seed };
        let res = solve_circumcenter_with(&norm.0, &t.0, &tol, &opts)?;
        let m = res
            .center_point()
            .filter(|_| res.is_found())
            .ok_or(GeomError::CircumcenterNotFound { residual: res.residual })?;
        out_slice(center, center_len, m.len())?.copy_from_slice(m.as_slice());
        *radius = res.radius.unwrap_or(f64::NAN);
        Ok(())
    })
}

/// Computes every center. `center` may be NULL to run the solver, or point
/// to `dim` coordinates of a circumcenter, which is then certified.
///
/// # Safety
/// Handles must be live; `center` is NULL or holds `dim` doubles.
#[no_mangle]
pub unsafe extern "C" fn mink_report_compute(
    norm: *const MinkNorm,
    simplex: *const MinkSimplex,
    center: *const f64,
    eps_geom: f64,
    out: *mut *mut MinkReport,
) -> MinkStatus {
    guard(|| {
        let norm = norm.as_ref().ok_or_else(|| null("norm"))?;
        let t = simplex.as_ref().ok_or_else(|| null("simplex"))?;
        let tol = tolerances(eps_geom)?;
        let m = if center.is_null() {
            None
        } else {
            rows(center, 1, t.0.dim())?.pop()
        };
        let rep = full_report(&norm.0, &t.0, m.as_ref(), &tol, &SolverOptions::default())?;
        put(out, MinkReport(rep))
    })
}

/// Copies one center of the report into `out` (`len >= dim`).
///
/// # Safety
/// `report` must be live and `out` hold `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn mink_report_point(
    report: *const MinkReport,
    which: MinkCenter,
    out: *mut f64,
    len: usize,
) -> MinkStatus {
    guard(|| {
        let r = &report.as_ref().ok_or_else(|| null("report"))?.0;
        let p = match which {
            MinkCenter::Circumcenter => &r.center,
            MinkCenter::Centroid => &r.centroid,
            MinkCenter::MongePoint => &r.monge_point,
            MinkCenter::ComplementaryPoint => &r.complementary_point,
            MinkCenter::FeuerbachCenter => &r.feuerbach_center,
        };
        out_slice(out, len, p.len())?.copy_from_slice(p);
        Ok(())
    })
}

/// Circumradius, or NaN for NULL.
///
/// # Safety
/// `report` must be NULL or live.
#[no_mangle]
pub unsafe extern "C" fn mink_report_radius(report: *const MinkReport) -> f64 {
    report.as_ref().map_or(f64::NAN, |r| r.0.radius)
}

/// Feuerbach radius `R / d`, or NaN for NULL.
///
/// # Safety
/// `report` must be NULL or live.
#[no_mangle]
pub unsafe extern "C" fn mink_report_feuerbach_radius(report: *const MinkReport) -> f64 {
    report.as_ref().map_or(f64::NAN, |r| r.0.feuerbach_radius)
}

/// 1 when all centers coincide, 0 otherwise or for NULL.
///
/// # Safety
/// `report` must be NULL or live.
#[no_mangle]
pub unsafe extern "C" fn mink_report_collapsed(report: *const MinkReport) -> i32 {
    report.as_ref().map_or(0, |r| i32::from(r.0.collapsed))
}

/// 1 when every checked identity held at tolerance.
///
/// # Safety
/// `report` must be NULL or live.
#[no_mangle]
pub unsafe extern "C" fn mink_report_all_passed(report: *const MinkReport) -> i32 {
    report.as_ref().map_or(0, |r| i32::from(r.0.all_passed()))
}

/// Report as JSON; free the string with [`mink_string_free`].
///
/// # Safety
/// `report` must be live and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn mink_report_to_json(report: *const MinkReport, out: *mut *mut c_char) -> MinkStatus {
    guard(|| {
        let r = report.as_ref().ok_or_else(|| null("report"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        *out = into_c_string(serde_json::to_string_pretty(&r.0).expect("report serialises"));
        Ok(())
    })
}

/// # Safety
/// `report` must be NULL or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn mink_report_free(report: *mut MinkReport) {
    if !report.is_null() {
        drop(Box::from_raw(report));
    }
}

/// Checks the cyclic polygon identities on `n_vertices` planar points on
/// `S(center, radius)`. Sets `all_passed` and, when `json` is not NULL,
/// the claim table as JSON.
///
/// # Safety
/// `coords` holds `2 n_vertices` doubles, `center` two; outputs are valid or NULL.
#[no_mangle]
pub unsafe extern "C" fn mink_polygon_verify(
    norm: *const MinkNorm,
    coords: *const f64,
    n_vertices: usize,
    center: *const f64,
    radius: f64,
    eps_geom: f64,
    all_passed: *mut i32,
    json: *mut *mut c_char,
) -> MinkStatus {
    guard(|| {
        let norm = norm.as_ref().ok_or_else(|| null("norm"))?;
        if all_passed.is_null() {
            return Err(null("all_passed"));
        }
        let tol = tolerances(eps_geom)?;
        let vs = rows(coords, n_vertices, 2)?;
        let c = rows(center, 1, 2)?.pop().expect("one row");
        let p = CyclicPolygon::new(vs, c, radius, norm.0.clone(), &tol)?;
        let v = verify_polygon_theorems(&p, &tol)?;
        *all_passed = i32::from(v.all_passed());
        if !json.is_null() {
            *json = into_c_string(serde_json::to_string_pretty(&v).expect("claims serialise"));
        }
        Ok(())
    })
}

/// Runs a JSON instance file end to end, as `mink-centers centers` does,
/// and returns the report JSON.
///
/// # Safety
/// `instance_json` must be a NUL-terminated string and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn mink_run_instance_json(instance_json: *const c_char, out: *mut *mut c_char) -> MinkStatus {
    guard(|| {
        if instance_json.is_null() {
            return Err(null("instance_json"));
        }
        if out.is_null() {
            return Err(null("out"));
        }
        let text = CStr::from_ptr(instance_json)
            .to_str()
            .map_err(|_| Fail(MinkStatus::InvalidInput, "instance is not UTF-8".into()))?;
        let inst = InstanceFile::from_json(text)?;
        let rep = run_centers(&inst, Tolerances::from_env()?, None)?;
        *out = into_c_string(rep.to_json());
        Ok(())
    })
}

/// Frees a string returned by this library.
///
/// # Safety
/// `s` must be NULL or a string from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn mink_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
