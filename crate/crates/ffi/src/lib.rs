//! C interface to `plateau-core`.
//!
//! Every function returns a [`PlateauStatus`]. On failure the message is kept
//! per thread and can be read with [`plateau_last_error`]. Handles are opaque
//! and must be released with the matching `_free` function.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::ptr;

use plateau_core::area::{h_area_domain, h_area_surface};
use plateau_core::config::load_config;
use plateau_core::graph::{left_graph, GraphFunction};
use plateau_core::ruling::{self, RuledSurface};
use plateau_core::{BoundaryDatum, Error, Gate, LenticularDomain, ScalarFn1D};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlateauStatus {
    Ok = 0,
    Error = 1,
    /// The smallness parameter does not pass the gate the call needs.
    Gate = 2,
    InvalidArgument = 3,
    OutsideDomain = 4,
    NoConvergence = 5,
    Io = 6,
    Panic = 7,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlateauGate {
    Interp = 0,
    Left = 1,
    Right = 2,
}

impl From<PlateauGate> for Gate {
    fn from(g: PlateauGate) -> Self {
        match g {
            PlateauGate::Interp => Gate::Interp,
            PlateauGate::Left => Gate::Left,
            PlateauGate::Right => Gate::Right,
        }
    }
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct PlateauZeta {
    pub gamma_sup: f64,
    pub gamma_lip: f64,
    pub phi_sup: f64,
    pub phi_lip: f64,
    pub zeta: f64,
    pub gate_interp: bool,
    pub gate_left: bool,
    pub gate_right: bool,
}

/// Preimage of a point of the left projection: `u` is the graph value and
/// `(s, h)` the ruling parameters.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct PlateauInversion {
    pub u: f64,
    pub s: f64,
    pub h: f64,
    pub residual: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct PlateauArea {
    pub lebesgue: f64,
    pub domain_route: f64,
    pub surface_route: f64,
}

/// A boundary problem: domain, datum and its `ζ` report.
pub struct PlateauProblem(ruling::PlateauProblem);

/// A left graph sampled on a mapped grid.
pub struct PlateauGraph(GraphFunction);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_last_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(err: &Error) -> PlateauStatus {
    match err {
        Error::GateViolated { .. } => PlateauStatus::Gate,
        Error::OutOfDomain { .. } | Error::OutsideSliceRange { .. } | Error::PointOutsideDomain { .. } => {
            PlateauStatus::OutsideDomain
        }
        Error::NoConvergence { .. } | Error::BracketFailure { .. } => PlateauStatus::NoConvergence,
        Error::InvalidFunction(_) | Error::Validation(_) | Error::Precondition(_) => PlateauStatus::InvalidArgument,
        Error::Io { .. } | Error::Parse { .. } | Error::ParseErrors(_) => PlateauStatus::Io,
        _ => PlateauStatus::Error,
    }
}

fn guard(f: impl FnOnce() -> Result<(), (PlateauStatus, String)>) -> PlateauStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => PlateauStatus::Ok,
        Ok(Err((status, msg))) => {
            set_last_error(&msg);
            status
        }
        Err(_) => {
            set_last_error("internal panic");
            PlateauStatus::Panic
        }
    }
}

fn core<T>(r: plateau_core::Result<T>) -> Result<T, (PlateauStatus, String)> {
    r.map_err(|e| (status_of(&e), e.to_string()))
}

fn invalid(msg: &str) -> (PlateauStatus, String) {
    (PlateauStatus::InvalidArgument, msg.to_string())
}

unsafe fn deref<'a, T>(p: *const T, what: &str) -> Result<&'a T, (PlateauStatus, String)> {
    p.as_ref().ok_or_else(|| invalid(&format!("{what} is null")))
}

unsafe fn write_out<T>(out: *mut T, value: T) -> Result<(), (PlateauStatus, String)> {
    if out.is_null() {
        return Err(invalid("output pointer is null"));
    }
    out.write(value);
    Ok(())
}

unsafe fn coeffs(p: *const f64, len: usize, t_bar: f64, what: &str) -> Result<ScalarFn1D, (PlateauStatus, String)> {
    if len == 0 {
        return core(ScalarFn1D::zero(t_bar));
    }
    if p.is_null() {
        return Err(invalid(&format!("{what} is null")));
    }
    core(ScalarFn1D::polynomial(std::slice::from_raw_parts(p, len).to_vec(), t_bar))
}

/// Message of the last failed call on this thread. The pointer stays valid
/// until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn plateau_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Strict upper bound on `ζ` for `gate`.
#[no_mangle]
pub extern "C" fn plateau_gate_threshold(gate: PlateauGate) -> f64 {
    Gate::from(gate).threshold()
}

/// Closed form of the gate, e.g. `zeta < (sqrt(721) - 25)/48`. Static storage.
#[no_mangle]
pub extern "C" fn plateau_gate_closed_form(gate: PlateauGate) -> *const c_char {
    let s: &'static CStr = match gate {
        PlateauGate::Interp => c"zeta < 1",
        PlateauGate::Left => c"zeta < (sqrt(129) - 11)/4",
        PlateauGate::Right => c"zeta < (sqrt(721) - 25)/48",
    };
    debug_assert_eq!(s.to_str().unwrap(), Gate::from(gate).closed_form());
    s.as_ptr()
}

/// Builds a problem from polynomial coefficients `c0..cn` on `[0, t_bar]`.
/// A coefficient list of length 0 stands for the zero function.
///
/// # Safety
/// Each non-empty coefficient pointer must reference `len` readable doubles.
#[no_mangle]
#[allow(clippy::too_many_arguments)]
pub unsafe extern "C" fn plateau_problem_new(
    t_bar: f64,
    gamma1: *const f64,
    gamma1_len: usize,
    gamma2: *const f64,
    gamma2_len: usize,
    phi1: *const f64,
    phi1_len: usize,
    phi2: *const f64,
    phi2_len: usize,
    out: *mut *mut PlateauProblem,
) -> PlateauStatus {
    guard(|| {
        let g1 = coeffs(gamma1, gamma1_len, t_bar, "gamma1")?;
        let g2 = coeffs(gamma2, gamma2_len, t_bar, "gamma2")?;
        let p1 = coeffs(phi1, phi1_len, t_bar, "phi1")?;
        let p2 = coeffs(phi2, phi2_len, t_bar, "phi2")?;
        let domain = core(LenticularDomain::new(t_bar, g1, g2))?;
        let problem = core(ruling::PlateauProblem::new(domain, BoundaryDatum::new(p1, p2)))?;
        write_out(out, Box::into_raw(Box::new(PlateauProblem(problem))))
    })
}

/// Builds a problem from a case file.
///
/// # Safety
/// `path` must be a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn plateau_problem_from_config(
    path: *const c_char,
    out: *mut *mut PlateauProblem,
) -> PlateauStatus {
    guard(|| {
        if path.is_null() {
            return Err(invalid("path is null"));
        }
        let path = CStr::from_ptr(path).to_str().map_err(|_| invalid("path is not UTF-8"))?;
        let problem = core(load_config(Path::new(path)).and_then(|c| c.problem()))?;
        write_out(out, Box::into_raw(Box::new(PlateauProblem(problem))))
    })
}

/// # Safety
/// `problem` must come from a constructor above and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn plateau_problem_free(problem: *mut PlateauProblem) {
    if !problem.is_null() {
        drop(Box::from_raw(problem));
    }
}

/// # Safety
/// `problem` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn plateau_problem_zeta(problem: *const PlateauProblem, out: *mut PlateauZeta) -> PlateauStatus {
    guard(|| {
        let z = deref(problem, "problem")?.0.zeta();
        write_out(
            out,
            PlateauZeta {
                gamma_sup: z.gamma_sup,
                gamma_lip: z.gamma_lip,
                phi_sup: z.phi_sup,
                phi_lip: z.phi_lip,
                zeta: z.zeta,
                gate_interp: z.gate_interp,
                gate_left: z.gate_left,
                gate_right: z.gate_right,
            },
        )
    })
}

/// Ruling map `λ(s)`.
///
/// # Safety
/// `problem` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn plateau_lambda(problem: *const PlateauProblem, s: f64, out: *mut f64) -> PlateauStatus {
    guard(|| {
        let lam = core(deref(problem, "problem")?.0.solve_lambda_at(s))?;
        write_out(out, lam)
    })
}

/// `λ` on the uniform grid of `n` nodes over `[0, t_bar]`, written to `values[0..n]`.
///
/// # Safety
/// `problem` must be a live handle and `values` must hold `n` doubles.
#[no_mangle]
pub unsafe extern "C" fn plateau_lambda_map(
    problem: *const PlateauProblem,
    n: usize,
    values: *mut f64,
) -> PlateauStatus {
    guard(|| {
        let map = core(deref(problem, "problem")?.0.build_lambda_map(n))?;
        if values.is_null() {
            return Err(invalid("values is null"));
        }
        ptr::copy_nonoverlapping(map.values.as_ptr(), values, map.values.len());
        Ok(())
    })
}

/// Point `ρ(h, s)` of the ruled surface as `(x, y, t)` in `xyt[0..3]`.
///
/// # Safety
/// `problem` must be a live handle and `xyt` must hold 3 doubles.
#[no_mangle]
pub unsafe extern "C" fn plateau_rho(problem: *const PlateauProblem, h: f64, s: f64, xyt: *mut f64) -> PlateauStatus {
    guard(|| {
        let p = core(deref(problem, "problem")?.0.rho(h, s))?;
        if xyt.is_null() {
            return Err(invalid("xyt is null"));
        }
        ptr::copy_nonoverlapping([p.x, p.y, p.t].as_ptr(), xyt, 3);
        Ok(())
    })
}

/// Left graph value at `(y, t)` in `D`, with its ruling parameters.
///
/// # Safety
/// `problem` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn plateau_invert_left(
    problem: *const PlateauProblem,
    y: f64,
    t: f64,
    out: *mut PlateauInversion,
) -> PlateauStatus {
    guard(|| {
        let inv = core(deref(problem, "problem")?.0.invert_left(y, t))?;
        write_out(out, PlateauInversion { u: inv.u, s: inv.s, h: inv.h, residual: inv.residual })
    })
}

/// Left-graph value of the point of the right projection `(eta, tau)`.
///
/// # Safety
/// `problem` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn plateau_invert_right(
    problem: *const PlateauProblem,
    eta: f64,
    tau: f64,
    out: *mut PlateauInversion,
) -> PlateauStatus {
    guard(|| {
        let inv = core(deref(problem, "problem")?.0.invert_right(eta, tau))?;
        write_out(out, PlateauInversion { u: inv.u, s: inv.s, h: inv.h, residual: inv.residual })
    })
}

/// Samples the left graph on an `n_y × n_t` mapped grid.
///
/// # Safety
/// `problem` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn plateau_left_graph(
    problem: *const PlateauProblem,
    n_y: usize,
    n_t: usize,
    out: *mut *mut PlateauGraph,
) -> PlateauStatus {
    guard(|| {
        let g = core(left_graph(&deref(problem, "problem")?.0, n_y, n_t))?;
        write_out(out, Box::into_raw(Box::new(PlateauGraph(g))))
    })
}

/// # Safety
/// `graph` must come from [`plateau_left_graph`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn plateau_graph_free(graph: *mut PlateauGraph) {
    if !graph.is_null() {
        drop(Box::from_raw(graph));
    }
}

/// Interpolated graph value at `(y, t)`.
///
/// # Safety
/// `graph` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn plateau_graph_eval(
    graph: *const PlateauGraph,
    y: f64,
    t: f64,
    out: *mut f64,
) -> PlateauStatus {
    guard(|| {
        let v = deref(graph, "graph")?.0.interpolate(y, t).ok_or_else(|| {
            (PlateauStatus::OutsideDomain, format!("point ({y}, {t}) lies outside the sampled domain"))
        })?;
        write_out(out, v)
    })
}

/// # Safety
/// `graph` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn plateau_graph_sup_norm(graph: *const PlateauGraph, out: *mut f64) -> PlateauStatus {
    guard(|| write_out(out, deref(graph, "graph")?.0.sup_norm()))
}

/// Sub-Riemannian area of the solution by both routes at resolution `n`.
///
/// # Safety
/// `problem` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn plateau_area(
    problem: *const PlateauProblem,
    n: usize,
    out: *mut PlateauArea,
) -> PlateauStatus {
    guard(|| {
        let p = &deref(problem, "problem")?.0;
        let u = core(left_graph(p, n, n))?;
        let dom = core(h_area_domain(p.domain(), &u))?;
        let surf = h_area_surface(p.domain(), &core(RuledSurface::build(p, n, n))?);
        write_out(out, PlateauArea { lebesgue: dom.lebesgue, domain_route: dom.area, surface_route: surf.area })
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn last_error() -> String {
        unsafe { CStr::from_ptr(plateau_last_error()) }.to_string_lossy().into_owned()
    }

    fn problem(a: f64) -> *mut PlateauProblem {
        let g1 = [0.0, -0.5, 0.25];
        let g2 = [0.0, 0.5, -0.25];
        let p1 = [0.0, 2.0 * a, -a];
        let mut out = ptr::null_mut();
        let st = unsafe {
            plateau_problem_new(2.0, g1.as_ptr(), 3, g2.as_ptr(), 3, p1.as_ptr(), 3, ptr::null(), 0, &mut out)
        };
        assert_eq!(st, PlateauStatus::Ok, "{}", last_error());
        out
    }

    #[test]
    fn closed_forms_match_core() {
        for g in [PlateauGate::Interp, PlateauGate::Left, PlateauGate::Right] {
            let s = unsafe { CStr::from_ptr(plateau_gate_closed_form(g)) };
            assert_eq!(s.to_str().unwrap(), Gate::from(g).closed_form());
            assert_eq!(plateau_gate_threshold(g), Gate::from(g).threshold());
        }
    }

    #[test]
    fn null_arguments_are_rejected() {
        let mut z = PlateauZeta::default();
        assert_eq!(unsafe { plateau_problem_zeta(ptr::null(), &mut z) }, PlateauStatus::InvalidArgument);
        assert!(last_error().contains("problem is null"));
        let p = problem(0.003);
        assert_eq!(unsafe { plateau_problem_zeta(p, ptr::null_mut()) }, PlateauStatus::InvalidArgument);
        unsafe { plateau_problem_free(p) };
        unsafe { plateau_problem_free(ptr::null_mut()) };
    }

    #[test]
    fn status_mapping() {
        let gate = Error::GateViolated { gate: Gate::Left, zeta: 0.5 };
        assert_eq!(status_of(&gate), PlateauStatus::Gate);
        assert_eq!(status_of(&Error::PointOutsideDomain { y: 1.0, t: 0.0 }), PlateauStatus::OutsideDomain);
        assert_eq!(status_of(&Error::Consistency("x".into())), PlateauStatus::Error);
    }

    #[test]
    fn invalid_function_is_reported() {
        let g = [f64::NAN];
        let mut out = ptr::null_mut();
        let st =
            unsafe { plateau_problem_new(2.0, g.as_ptr(), 1, g.as_ptr(), 1, ptr::null(), 0, ptr::null(), 0, &mut out) };
        assert_ne!(st, PlateauStatus::Ok);
        assert!(out.is_null());
        assert!(!last_error().is_empty());
    }
}
