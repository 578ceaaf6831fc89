//! C ABI for the quantum-walk transport library.
//!
//! Conventions: graphs are opaque handles created/freed by this library;
//! every fallible call returns a [`QwtStatus`] and writes results through out
//! pointers, which are only valid when the status is `QWT_STATUS_OK`. All
//! entry points catch panics and report them as `QWT_STATUS_PANIC` rather
//! than unwinding across the boundary.

use std::ffi::{c_char, c_int, CStr};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use qwt::cli::Method;
use qwt::dynamics::{efficiency_numeric, HorizonOptions};
use qwt::graph::{parse_edge_list, parse_family_spec, Graph};
use qwt::hamiltonian::{complete_hamiltonian, InitialStateSpec, TransportProblem};
use qwt::krylov::{efficiency_overlap, krylov_basis, KRYLOV_TOL};
use qwt::linalg::CVector;
use qwt::nulleff::{is_null_state, is_stationary};
use qwt::{C64, Error};

/// Status code returned by every fallible call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QwtStatus {
    Ok = 0,
    /// A required pointer argument was null.
    NullPointer,
    /// Argument string was not valid UTF-8.
    InvalidUtf8,
    /// Sizes out of range for the requested family.
    SizeError,
    /// The named vertex pair is not an edge.
    TopologyError,
    /// Vertex index out of range.
    IndexError,
    /// Dimension mismatch between inputs.
    DimensionError,
    /// Invalid parameter value.
    ValueError,
    /// Non-finite numbers encountered.
    NonFinite,
    /// State norm outside tolerance.
    NormError,
    /// Dynamics horizon reached without convergence.
    HorizonError,
    /// Flux/survival bookkeeping disagreed (integration fault).
    BookkeepingError,
    /// Scenario outside the closed-form catalog.
    Uncataloged,
    /// Unparseable input text.
    ParseError,
    /// Filesystem failure.
    IoError,
    /// A panic was caught at the boundary.
    Panic,
}

fn status_of(err: &Error) -> QwtStatus {
    match err {
        Error::Size(_) => QwtStatus::SizeError,
        Error::Topology(_, _) => QwtStatus::TopologyError,
        Error::Index { .. } => QwtStatus::IndexError,
        Error::Dimension(_) => QwtStatus::DimensionError,
        Error::Value(_) => QwtStatus::ValueError,
        Error::NonFinite(_) => QwtStatus::NonFinite,
        Error::NormViolation { .. } => QwtStatus::NormError,
        Error::Horizon { .. } => QwtStatus::HorizonError,
        Error::Bookkeeping(_) => QwtStatus::BookkeepingError,
        Error::Uncataloged(_) => QwtStatus::Uncataloged,
        Error::Parse(_) => QwtStatus::ParseError,
        Error::Io(_) => QwtStatus::IoError,
    }
}

/// Opaque graph handle.
pub struct QwtGraph {
    inner: Graph,
}

/// Result record for `qwt_efficiency`.
#[repr(C)]
#[derive(Clone, Copy, Debug)]
pub struct QwtReport {
    /// Efficiency by Krylov-subspace overlap (always computed).
    pub eta_overlap: f64,
    /// Efficiency by trapped-flux integration; valid iff `has_numeric`.
    pub eta_numeric: f64,
    /// Integration horizon actually used; valid iff `has_numeric`.
    pub horizon: f64,
    /// Instantaneous flux at the horizon; valid iff `has_numeric`.
    pub flux_tail: f64,
    /// Krylov subspace dimension.
    pub krylov_dim: usize,
    /// Dynamics ran and converged.
    pub has_numeric: bool,
}

/// Result record for `qwt_null_check`.
#[repr(C)]
#[derive(Clone, Copy, Debug)]
pub struct QwtNullReport {
    pub is_null: bool,
    pub is_stationary: bool,
    pub eigenvalue_re: f64,
    pub eigenvalue_im: f64,
    pub krylov_dim: usize,
}

fn guard<F: FnOnce() -> QwtStatus>(f: F) -> QwtStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(status) => status,
        Err(_) => QwtStatus::Panic,
    }
}

unsafe fn cstr<'a>(ptr: *const c_char) -> Result<&'a str, QwtStatus> {
    if ptr.is_null() {
        return Err(QwtStatus::NullPointer);
    }
    CStr::from_ptr(ptr).to_str().map_err(|_| QwtStatus::InvalidUtf8)
}

/// Build a graph from the family mini-language: `complete:N`, `cbg:N1,N2`,
/// `star:N`, `star:N:outer`. On success writes a heap handle to `out`.
///
/// # Safety
/// `spec` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qwt_graph_parse(spec: *const c_char, out: *mut *mut QwtGraph) -> QwtStatus {
    guard(|| {
        if out.is_null() {
            return QwtStatus::NullPointer;
        }
        let text = match cstr(spec) {
            Ok(t) => t,
            Err(s) => return s,
        };
        match parse_family_spec(text).and_then(qwt::graph::build_family) {
            Ok(g) => {
                *out = Box::into_raw(Box::new(QwtGraph { inner: g }));
                QwtStatus::Ok
            }
            Err(e) => status_of(&e),
        }
    })
}

/// Build a graph from edge-list text: one `r s [lambda theta]` per line,
/// `#` comments ignored.
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qwt_graph_from_edge_list(
    text: *const c_char,
    out: *mut *mut QwtGraph,
) -> QwtStatus {
    guard(|| {
        if out.is_null() {
            return QwtStatus::NullPointer;
        }
        let text = match cstr(text) {
            Ok(t) => t,
            Err(s) => return s,
        };
        match parse_edge_list(text) {
            Ok(g) => {
                *out = Box::into_raw(Box::new(QwtGraph { inner: g }));
                QwtStatus::Ok
            }
            Err(e) => status_of(&e),
        }
    })
}

/// Release a graph handle. Null is ignored.
///
/// # Safety
/// `graph` must have come from this library and not been freed before.
#[no_mangle]
pub unsafe extern "C" fn qwt_graph_free(graph: *mut QwtGraph) {
    if !graph.is_null() {
        drop(Box::from_raw(graph));
    }
}

/// Number of vertices, or 0 for a null handle.
///
/// # Safety
/// `graph` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn qwt_graph_vertex_count(graph: *const QwtGraph) -> usize {
    if graph.is_null() {
        0
    } else {
        (*graph).inner.n()
    }
}

/// Number of edges, or 0 for a null handle.
///
/// # Safety
/// `graph` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn qwt_graph_edge_count(graph: *const QwtGraph) -> usize {
    if graph.is_null() {
        0
    } else {
        (*graph).inner.edge_count()
    }
}

/// Record the extra weight `lambda*e^{i*theta}` on the ordered pair `(r,s)`
/// (the Hamiltonian element `(r,s)` receives the weight, `(s,r)` its
/// conjugate). `lambda = 0` removes any record on that edge.
///
/// # Safety
/// `graph` must be a live, exclusively owned handle.
#[no_mangle]
pub unsafe extern "C" fn qwt_graph_perturb_edge(
    graph: *mut QwtGraph,
    r: usize,
    s: usize,
    lambda: f64,
    theta: f64,
) -> QwtStatus {
    guard(|| {
        if graph.is_null() {
            return QwtStatus::NullPointer;
        }
        let handle = &mut *graph;
        match handle.inner.perturb_edge(r, s, lambda, theta) {
            Ok(g) => {
                handle.inner = g;
                QwtStatus::Ok
            }
            Err(e) => status_of(&e),
        }
    })
}

fn initial_from(kind: c_int, l: usize, k: usize, gamma: f64) -> Result<InitialStateSpec, QwtStatus> {
    match kind {
        0 => Ok(InitialStateSpec::Localized { l }),
        1 => Ok(InitialStateSpec::Superposition { l, k, gamma }),
        _ => Err(QwtStatus::ValueError),
    }
}

/// Transport efficiency of a scenario on `graph`.
///
/// `initial_kind`: 0 localized at `l` (`k`, `gamma` ignored); 1 superposition
/// `(|l> + e^{i gamma}|k>)/sqrt(2)`. `method`: 0 overlap only, 1 dynamics,
/// 2 both. A horizon failure returns `QWT_STATUS_HORIZON_ERROR` and leaves
/// the overlap fields of `out` valid with `has_numeric = false`.
///
/// # Safety
/// `graph` must be a live handle; `out` must point to writable memory.
#[no_mangle]
pub unsafe extern "C" fn qwt_efficiency(
    graph: *const QwtGraph,
    trap: usize,
    kappa: f64,
    initial_kind: c_int,
    l: usize,
    k: usize,
    gamma: f64,
    method: c_int,
    out: *mut QwtReport,
) -> QwtStatus {
    guard(|| {
        if graph.is_null() || out.is_null() {
            return QwtStatus::NullPointer;
        }
        let initial = match initial_from(initial_kind, l, k, gamma) {
            Ok(i) => i,
            Err(s) => return s,
        };
        let method = match method {
            0 => Method::Overlap,
            1 => Method::Dynamics,
            2 => Method::Both,
            _ => return QwtStatus::ValueError,
        };
        let g = &(*graph).inner;
        match efficiency_on_graph(g, trap, kappa, initial, method) {
            Ok((report, horizon_hit)) => {
                ptr::write(out, report);
                if horizon_hit {
                    QwtStatus::HorizonError
                } else {
                    QwtStatus::Ok
                }
            }
            Err(e) => status_of(&e),
        }
    })
}

fn efficiency_on_graph(
    g: &Graph,
    trap: usize,
    kappa: f64,
    initial: InitialStateSpec,
    method: Method,
) -> Result<(QwtReport, bool), Error> {
    let problem = TransportProblem::new(g.clone(), trap, kappa, initial)?;
    let h = problem.hamiltonian()?;
    let psi0 = problem.initial_vector()?;
    let basis = krylov_basis(&h, trap, KRYLOV_TOL)?;
    let eta_overlap = efficiency_overlap(&basis, &psi0)?;

    let mut report = QwtReport {
        eta_overlap,
        eta_numeric: f64::NAN,
        horizon: f64::NAN,
        flux_tail: f64::NAN,
        krylov_dim: basis.dim(),
        has_numeric: false,
    };
    let mut horizon_hit = false;
    if matches!(method, Method::Dynamics | Method::Both) {
        match efficiency_numeric(&h, &psi0, trap, kappa, &HorizonOptions::default()) {
            Ok(res) => {
                report.eta_numeric = res.eta;
                report.horizon = res.horizon;
                report.flux_tail = res.flux_tail;
                report.has_numeric = true;
            }
            Err(Error::Horizon { best_eta, horizon, flux_tail }) => {
                report.eta_numeric = best_eta;
                report.horizon = horizon;
                report.flux_tail = flux_tail;
                horizon_hit = true;
            }
            Err(e) => return Err(e),
        }
    }
    Ok((report, horizon_hit))
}

/// Null-efficiency check of a caller-supplied state (separate real and
/// imaginary arrays of length `len`, which must equal the vertex count and
/// describe a unit-norm state).
///
/// # Safety
/// `graph` must be a live handle; `re`/`im` must point to `len` doubles;
/// `out` must point to writable memory.
#[no_mangle]
pub unsafe extern "C" fn qwt_null_check(
    graph: *const QwtGraph,
    trap: usize,
    kappa: f64,
    re: *const f64,
    im: *const f64,
    len: usize,
    out: *mut QwtNullReport,
) -> QwtStatus {
    guard(|| {
        if graph.is_null() || re.is_null() || im.is_null() || out.is_null() {
            return QwtStatus::NullPointer;
        }
        let g = &(*graph).inner;
        if len != g.n() {
            return QwtStatus::DimensionError;
        }
        let res = std::slice::from_raw_parts(re, len);
        let ims = std::slice::from_raw_parts(im, len);
        let psi = CVector(res.iter().zip(ims).map(|(&a, &b)| C64::new(a, b)).collect());
        let inner_run = || -> Result<QwtNullReport, Error> {
            let h = complete_hamiltonian(g, trap, kappa)?;
            let basis = krylov_basis(&h, trap, KRYLOV_TOL)?;
            let null = is_null_state(&basis, &psi, 1e-10)?;
            let (stationary, eps) = is_stationary(&h, &psi, 1e-9)?;
            Ok(QwtNullReport {
                is_null: null,
                is_stationary: stationary,
                eigenvalue_re: eps.re,
                eigenvalue_im: eps.im,
                krylov_dim: basis.dim(),
            })
        };
        match inner_run() {
            Ok(report) => {
                ptr::write(out, report);
                QwtStatus::Ok
            }
            Err(e) => status_of(&e),
        }
    })
}

/// Static description of a status code.
#[no_mangle]
pub extern "C" fn qwt_status_message(status: QwtStatus) -> *const c_char {
    let msg: &'static [u8] = match status {
        QwtStatus::Ok => b"ok\0",
        QwtStatus::NullPointer => b"null pointer argument\0",
        QwtStatus::InvalidUtf8 => b"argument string is not valid UTF-8\0",
        QwtStatus::SizeError => b"invalid graph size\0",
        QwtStatus::TopologyError => b"vertex pair is not an edge\0",
        QwtStatus::IndexError => b"vertex index out of range\0",
        QwtStatus::DimensionError => b"dimension mismatch\0",
        QwtStatus::ValueError => b"invalid parameter value\0",
        QwtStatus::NonFinite => b"non-finite numbers encountered\0",
        QwtStatus::NormError => b"state norm outside tolerance\0",
        QwtStatus::HorizonError => b"dynamics horizon reached without convergence\0",
        QwtStatus::BookkeepingError => b"flux/survival bookkeeping disagreement\0",
        QwtStatus::Uncataloged => b"scenario outside the closed-form catalog\0",
        QwtStatus::ParseError => b"unparseable input\0",
        QwtStatus::IoError => b"filesystem failure\0",
        QwtStatus::Panic => b"internal panic\0",
    };
    msg.as_ptr().cast()
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn qwt_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}
