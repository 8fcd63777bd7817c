//! C interface to rigidbound.
//!
//! Every function returns an [`RbStatus`]; results go through out-pointers.
//! Graphs and reports are opaque handles released with their `_free`
//! function. On failure the message is kept per thread and can be read with
//! [`rb_last_error_message`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use rigidbound::bounds::{analyze, AnalyzeOptions, BoundReport};
use rigidbound::{classify, is_laman_pebble, mv_inclusion_exclusion, mv_mixed_cells, Error, Graph, GraphClass, NewtonPolytope};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RbStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidInput = 2,
    NotLaman = 3,
    MvDisagreement = 4,
    Internal = 5,
    Panic = 6,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RbClass {
    H1 = 1,
    H2 = 2,
}

pub struct RbGraph(Graph);

pub struct RbReport(BoundReport);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> RbStatus {
    match e {
        Error::InvalidGraph(_) | Error::Parse { .. } | Error::Dimension(_) | Error::Precondition(_) => RbStatus::InvalidInput,
        Error::MixedVolumeDisagreement { .. } => RbStatus::MvDisagreement,
        _ => RbStatus::Internal,
    }
}

// Runs `f`, recording any error or panic.
fn guard(f: impl FnOnce() -> Result<(), (RbStatus, String)>) -> RbStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => RbStatus::Ok,
        Ok(Err((status, msg))) => {
            set_error(&msg);
            status
        }
        Err(_) => {
            set_error("panic inside rigidbound");
            RbStatus::Panic
        }
    }
}

fn lift(e: Error) -> (RbStatus, String) {
    (status_of(&e), e.to_string())
}

fn null(what: &str) -> (RbStatus, String) {
    (RbStatus::NullPointer, format!("{what} is null"))
}

/// Parses an edge list ("n <count>" header, then one "u v" pair per line).
///
/// # Safety
/// `text` must be a valid NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn rb_graph_from_edge_list(text: *const c_char, out: *mut *mut RbGraph) -> RbStatus {
    guard(|| {
        if text.is_null() || out.is_null() {
            return Err(null("argument"));
        }
        let s = CStr::from_ptr(text)
            .to_str()
            .map_err(|_| (RbStatus::InvalidInput, "edge list is not UTF-8".to_string()))?;
        let g: Graph = s.parse().map_err(lift)?;
        *out = Box::into_raw(Box::new(RbGraph(g)));
        Ok(())
    })
}

/// Builds a graph on vertices `1..=n` from `m` edges stored as `2m`
/// consecutive endpoints.
///
/// # Safety
/// `edges` must point to `2 * m` readable values (may be null when `m` is 0)
/// and `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn rb_graph_new(n: usize, edges: *const usize, m: usize, out: *mut *mut RbGraph) -> RbStatus {
    guard(|| {
        if out.is_null() || (edges.is_null() && m > 0) {
            return Err(null("argument"));
        }
        let flat = if m == 0 { &[][..] } else { std::slice::from_raw_parts(edges, 2 * m) };
        let g = Graph::new(n, flat.chunks(2).map(|p| (p[0], p[1]))).map_err(lift)?;
        *out = Box::into_raw(Box::new(RbGraph(g)));
        Ok(())
    })
}

/// # Safety
/// `g` must come from a graph constructor and not be freed already.
#[no_mangle]
pub unsafe extern "C" fn rb_graph_free(g: *mut RbGraph) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// # Safety
/// `g` must be a live graph handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn rb_is_laman(g: *const RbGraph, out: *mut bool) -> RbStatus {
    guard(|| {
        let (Some(g), false) = (g.as_ref(), out.is_null()) else {
            return Err(null("argument"));
        };
        *out = is_laman_pebble(&g.0).map_err(lift)?;
        Ok(())
    })
}

/// H1 if the graph has a construction using vertex additions only.
/// Returns `RB_STATUS_NOT_LAMAN` for non-Laman graphs.
///
/// # Safety
/// `g` must be a live graph handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn rb_classify(g: *const RbGraph, out: *mut RbClass) -> RbStatus {
    guard(|| {
        let (Some(g), false) = (g.as_ref(), out.is_null()) else {
            return Err(null("argument"));
        };
        if !is_laman_pebble(&g.0).map_err(lift)? {
            return Err((RbStatus::NotLaman, "graph is not Laman".into()));
        }
        *out = match classify(&g.0).map_err(lift)? {
            GraphClass::H1 => RbClass::H1,
            GraphClass::H2 => RbClass::H2,
        };
        Ok(())
    })
}

/// Full analysis. A non-Laman graph still yields a report, without a bound.
///
/// # Safety
/// `g` must be a live graph handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn rb_analyze(
    g: *const RbGraph,
    seed: u64,
    verify: bool,
    allow_n2_conjecture: bool,
    out: *mut *mut RbReport,
) -> RbStatus {
    guard(|| {
        let (Some(g), false) = (g.as_ref(), out.is_null()) else {
            return Err(null("argument"));
        };
        let options = AnalyzeOptions {
            seed,
            verify,
            allow_n2_conjecture,
            ..AnalyzeOptions::default()
        };
        let report = analyze(&g.0, &options).map_err(lift)?;
        *out = Box::into_raw(Box::new(RbReport(report)));
        Ok(())
    })
}

fn report_field(r: &RbReport, value: Option<u64>, what: &str) -> Result<u64, (RbStatus, String)> {
    if !r.0.laman {
        return Err((RbStatus::NotLaman, "graph is not Laman".into()));
    }
    value.ok_or_else(|| (RbStatus::InvalidInput, format!("report has no {what}")))
}

/// Bound on the number of embeddings modulo rigid motions.
///
/// # Safety
/// `r` must be a live report handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn rb_report_bound(r: *const RbReport, out: *mut u64) -> RbStatus {
    guard(|| {
        let (Some(r), false) = (r.as_ref(), out.is_null()) else {
            return Err(null("argument"));
        };
        *out = report_field(r, r.0.bound_mod_rigid, "bound")?;
        Ok(())
    })
}

/// Mixed volume of the chosen system; absent for H1 graphs unless cross
/// checked.
///
/// # Safety
/// `r` must be a live report handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn rb_report_mv(r: *const RbReport, out: *mut u64) -> RbStatus {
    guard(|| {
        let (Some(r), false) = (r.as_ref(), out.is_null()) else {
            return Err(null("argument"));
        };
        *out = report_field(r, r.0.mv, "mixed volume")?;
        Ok(())
    })
}

/// The report as JSON; release the string with [`rb_string_free`].
///
/// # Safety
/// `r` must be a live report handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn rb_report_to_json(r: *const RbReport, out: *mut *mut c_char) -> RbStatus {
    guard(|| {
        let (Some(r), false) = (r.as_ref(), out.is_null()) else {
            return Err(null("argument"));
        };
        let s = serde_json::to_string(&r.0).map_err(|e| (RbStatus::Internal, e.to_string()))?;
        *out = CString::new(s).map_err(|e| (RbStatus::Internal, e.to_string()))?.into_raw();
        Ok(())
    })
}

/// # Safety
/// `r` must come from [`rb_analyze`] and not be freed already.
#[no_mangle]
pub unsafe extern "C" fn rb_report_free(r: *mut RbReport) {
    if !r.is_null() {
        drop(Box::from_raw(r));
    }
}

/// # Safety
/// `s` must come from this library and not be freed already.
#[no_mangle]
pub unsafe extern "C" fn rb_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Message of the last failure on this thread, or null. Valid until the
/// next failing call on the same thread.
#[no_mangle]
pub extern "C" fn rb_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Mixed volume of `dim` lattice polytopes in dimension `dim`. Polytope `i`
/// has `counts[i]` points; all coordinates are stored row by row in
/// `points`. Both algorithms run and must agree.
///
/// # Safety
/// `counts` must hold `dim` values, `points` must hold `dim * sum(counts)`
/// values and `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn rb_mixed_volume(
    dim: usize,
    counts: *const usize,
    points: *const i64,
    seed: u64,
    out: *mut u64,
) -> RbStatus {
    guard(|| {
        if counts.is_null() || points.is_null() || out.is_null() {
            return Err(null("argument"));
        }
        if dim == 0 {
            return Err((RbStatus::InvalidInput, "dimension must be positive".into()));
        }
        let counts = std::slice::from_raw_parts(counts, dim);
        let total: usize = counts.iter().sum();
        let coords = std::slice::from_raw_parts(points, total * dim);
        let mut polys = Vec::with_capacity(dim);
        let mut rows = coords.chunks(dim);
        for &k in counts {
            let pts: Vec<Vec<i64>> = rows.by_ref().take(k).map(<[i64]>::to_vec).collect();
            polys.push(NewtonPolytope::new(dim, pts).map_err(lift)?);
        }
        let ie = mv_inclusion_exclusion(&polys).map_err(lift)?.value;
        let mc = mv_mixed_cells(&polys, seed).map_err(lift)?.value;
        if ie != mc {
            return Err(lift(Error::MixedVolumeDisagreement {
                inclusion_exclusion: ie,
                mixed_cells: mc,
            }));
        }
        *out = ie;
        Ok(())
    })
}
