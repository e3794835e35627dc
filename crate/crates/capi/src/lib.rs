//! C ABI for the quasumb library: opaque surface handles, status codes, and
//! flat structs, so other languages can bind the classification pipeline.
//!
//! Conventions:
//! - every fallible call returns a [`QsmStatus`]; `QSM_STATUS_OK` is zero;
//! - on failure, [`qsm_last_error`] returns a thread-local message;
//! - strings returned through `char **` are owned by the caller and must be
//!   released with [`qsm_string_free`];
//! - surface handles must be released with [`qsm_surface_free`].

use quasumb::loci::{classify_surface, umbilic_locus, GridRange};
use quasumb::surface::{point_report, shape_at, BuiltinSurface, PointClass, SurfaceSpec};
use quasumb::{Error, MVec3, NullFrame};
use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

/// Status codes returned by every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QsmStatus {
    Ok = 0,
    NullPointer = 1,
    Utf8 = 2,
    Parse = 3,
    Domain = 4,
    NotTimelike = 5,
    NotRegular = 6,
    Degenerate = 7,
    Integration = 8,
    Unsupported = 9,
    InvalidArgument = 10,
    Internal = 11,
}

/// Algebraic type of the shape operator at a point.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QsmPointClass {
    Umbilic = 0,
    QuasiUmbilic = 1,
    RealDiagonalizable = 2,
    ComplexDiagonalizable = 3,
}

/// Curvatures and classification at one parameter point.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct QsmPointReport {
    /// Gauss curvature K.
    pub gauss: f64,
    /// Mean curvature H.
    pub mean: f64,
    /// Discriminant H^2 - K.
    pub disc: f64,
    pub class: QsmPointClass,
    /// Repeated eigenvalue; meaningful only when `has_lambda` is true.
    pub lambda: f64,
    pub has_lambda: bool,
}

/// Entries of the shape operator in the coordinate basis; column j holds
/// the image of the j-th basis vector.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct QsmShapeMatrix {
    pub s11: f64,
    pub s12: f64,
    pub s21: f64,
    pub s22: f64,
}

/// Opaque surface handle.
pub struct QsmSurface {
    spec: SurfaceSpec,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::new("").expect("empty"));
}

fn set_error(msg: &str) {
    let sanitized: String = msg.chars().map(|c| if c == '\0' { ' ' } else { c }).collect();
    LAST_ERROR.with(|slot| {
        *slot.borrow_mut() = CString::new(sanitized).expect("nul bytes removed");
    });
}

fn status_of(e: &Error) -> QsmStatus {
    match e {
        Error::Syntax { .. } | Error::UnknownFunction { .. } | Error::Arity { .. } => {
            QsmStatus::Parse
        }
        Error::Domain { .. } | Error::QuadratureFailure { .. } | Error::UnboundVariable(_) => {
            QsmStatus::Domain
        }
        Error::NotTimelike(_) => QsmStatus::NotTimelike,
        Error::NotRegular { .. } => QsmStatus::NotRegular,
        Error::ZeroVector
        | Error::InvalidFrame(..)
        | Error::DegenerateSpec(_)
        | Error::DegenerateFrame { .. }
        | Error::SingularMetric(_)
        | Error::NoRootInRange { .. } => QsmStatus::Degenerate,
        Error::IntegrationBlowup(_) => QsmStatus::Integration,
        Error::UnsupportedSpec(_) => QsmStatus::Unsupported,
        Error::InvalidInput(_) | Error::Io(_) => QsmStatus::InvalidArgument,
    }
}

fn fail(e: &Error) -> QsmStatus {
    set_error(&e.to_string());
    status_of(e)
}

/// Run a fallible body, translating errors and panics into status codes.
fn guarded(body: impl FnOnce() -> Result<QsmStatus, Error>) -> QsmStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(s)) => s,
        Ok(Err(e)) => fail(&e),
        Err(_) => {
            set_error("internal panic");
            QsmStatus::Internal
        }
    }
}

unsafe fn read_str<'a>(ptr: *const c_char) -> Result<&'a str, QsmStatus> {
    if ptr.is_null() {
        set_error("null string argument");
        return Err(QsmStatus::NullPointer);
    }
    CStr::from_ptr(ptr).to_str().map_err(|_| {
        set_error("argument is not valid UTF-8");
        QsmStatus::Utf8
    })
}

unsafe fn hand_out(out: *mut *mut QsmSurface, spec: SurfaceSpec) -> QsmStatus {
    if out.is_null() {
        set_error("null output pointer");
        return QsmStatus::NullPointer;
    }
    *out = Box::into_raw(Box::new(QsmSurface { spec }));
    QsmStatus::Ok
}

/// Library version string; static storage, do not free.
#[no_mangle]
pub extern "C" fn qsm_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Message for the most recent failure on this thread. The pointer stays
/// valid until the next failing call on the same thread. Do not free.
#[no_mangle]
pub extern "C" fn qsm_last_error() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

/// Create a builtin example surface: "ex1", "ex2", "ex3", "ex4",
/// "hyperboloid", or "timelike-plane".
///
/// # Safety
/// `id` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qsm_surface_builtin(
    id: *const c_char,
    out: *mut *mut QsmSurface,
) -> QsmStatus {
    let id = match read_str(id) {
        Ok(s) => s,
        Err(st) => return st,
    };
    match id.parse::<BuiltinSurface>() {
        Ok(b) => hand_out(out, SurfaceSpec::Builtin(b)),
        Err(e) => fail(&e),
    }
}

/// Create a surface from three component expressions in u and v.
///
/// # Safety
/// All strings must be NUL-terminated; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qsm_surface_exprs(
    x0: *const c_char,
    x1: *const c_char,
    x2: *const c_char,
    out: *mut *mut QsmSurface,
) -> QsmStatus {
    let (x0, x1, x2) = match (read_str(x0), read_str(x1), read_str(x2)) {
        (Ok(a), Ok(b), Ok(c)) => (a, b, c),
        (Err(s), ..) | (_, Err(s), _) | (.., Err(s)) => return s,
    };
    let build = || -> Result<SurfaceSpec, Error> {
        SurfaceSpec::from_exprs(
            quasumb::parse_expr(x0)?,
            quasumb::parse_expr(x1)?,
            quasumb::parse_expr(x2)?,
        )
    };
    match build() {
        Ok(spec) => hand_out(out, spec),
        Err(e) => fail(&e),
    }
}

/// Create a null ruled surface from two direction angles theta1(u),
/// theta2(u); the base curve starts at (base0, base1, base2).
///
/// # Safety
/// Strings must be NUL-terminated; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qsm_surface_ruled(
    theta1: *const c_char,
    theta2: *const c_char,
    base0: f64,
    base1: f64,
    base2: f64,
    out: *mut *mut QsmSurface,
) -> QsmStatus {
    let (t1, t2) = match (read_str(theta1), read_str(theta2)) {
        (Ok(a), Ok(b)) => (a, b),
        (Err(s), _) | (_, Err(s)) => return s,
    };
    let build = || -> Result<SurfaceSpec, Error> {
        let spec = quasumb::generators::ThetaSpec::parse(t1, t2)?;
        quasumb::generators::ruled_null_surface_on(
            &spec,
            quasumb::generators::DEFAULT_INTERVAL.0,
            quasumb::generators::DEFAULT_INTERVAL.1,
            MVec3::new(base0, base1, base2),
        )
    };
    match build() {
        Ok(spec) => hand_out(out, spec),
        Err(e) => fail(&e),
    }
}

/// Create a flat cylinder from a profile function f(u), with the standard
/// initial frame at the origin.
///
/// # Safety
/// `profile` must be NUL-terminated; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qsm_surface_case1(
    profile: *const c_char,
    out: *mut *mut QsmSurface,
) -> QsmStatus {
    let p = match read_str(profile) {
        Ok(s) => s,
        Err(st) => return st,
    };
    let build = || -> Result<SurfaceSpec, Error> {
        quasumb::generators::case1_cylinder(
            quasumb::parse_expr(p)?,
            NullFrame::standard(),
            MVec3::ZERO,
        )
    };
    match build() {
        Ok(spec) => hand_out(out, spec),
        Err(e) => fail(&e),
    }
}

/// Release a surface handle. Passing NULL is a no-op.
///
/// # Safety
/// `s` must be a pointer from one of the constructors, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn qsm_surface_free(s: *mut QsmSurface) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}

/// Position of the surface at (u, v), written to `out[0..3]`.
///
/// # Safety
/// `s` must be a live handle; `out` must point to three doubles.
#[no_mangle]
pub unsafe extern "C" fn qsm_surface_point(
    s: *const QsmSurface,
    u: f64,
    v: f64,
    out: *mut f64,
) -> QsmStatus {
    if s.is_null() || out.is_null() {
        set_error("null pointer argument");
        return QsmStatus::NullPointer;
    }
    let spec = &(*s).spec;
    guarded(|| {
        let p = quasumb::surface::surface_point(spec, u, v)?;
        *out.add(0) = p.x0;
        *out.add(1) = p.x1;
        *out.add(2) = p.x2;
        Ok(QsmStatus::Ok)
    })
}

/// Curvatures and pointwise classification at (u, v) with relative
/// tolerance `tol` (pass 0 for the default).
///
/// # Safety
/// `s` must be a live handle; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qsm_point_report(
    s: *const QsmSurface,
    u: f64,
    v: f64,
    tol: f64,
    out: *mut QsmPointReport,
) -> QsmStatus {
    if s.is_null() || out.is_null() {
        set_error("null pointer argument");
        return QsmStatus::NullPointer;
    }
    let spec = &(*s).spec;
    let tol = if tol > 0.0 {
        tol
    } else {
        quasumb::surface::CLASS_TOL
    };
    guarded(|| {
        let r = point_report(spec, u, v, tol)?;
        *out = QsmPointReport {
            gauss: r.k,
            mean: r.h,
            disc: r.disc,
            class: match r.class {
                PointClass::Umbilic => QsmPointClass::Umbilic,
                PointClass::QuasiUmbilic => QsmPointClass::QuasiUmbilic,
                PointClass::RealDiagonalizable => QsmPointClass::RealDiagonalizable,
                PointClass::ComplexDiagonalizable => QsmPointClass::ComplexDiagonalizable,
            },
            lambda: r.lambda.unwrap_or(0.0),
            has_lambda: r.lambda.is_some(),
        };
        Ok(QsmStatus::Ok)
    })
}

/// Shape-operator matrix in the coordinate basis at (u, v).
///
/// # Safety
/// `s` must be a live handle; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qsm_shape_matrix(
    s: *const QsmSurface,
    u: f64,
    v: f64,
    out: *mut QsmShapeMatrix,
) -> QsmStatus {
    if s.is_null() || out.is_null() {
        set_error("null pointer argument");
        return QsmStatus::NullPointer;
    }
    let spec = &(*s).spec;
    guarded(|| {
        let m = shape_at(spec, u, v)?;
        *out = QsmShapeMatrix {
            s11: m.s11,
            s12: m.s12,
            s21: m.s21,
            s22: m.s22,
        };
        Ok(QsmStatus::Ok)
    })
}

/// Classify the surface over an evenly sampled grid and return the report
/// as a JSON string (free with `qsm_string_free`).
///
/// # Safety
/// `s` must be a live handle; `out_json` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qsm_classify_json(
    s: *const QsmSurface,
    u_lo: f64,
    u_hi: f64,
    nu: usize,
    v_lo: f64,
    v_hi: f64,
    nv: usize,
    tol: f64,
    out_json: *mut *mut c_char,
) -> QsmStatus {
    if s.is_null() || out_json.is_null() {
        set_error("null pointer argument");
        return QsmStatus::NullPointer;
    }
    let spec = &(*s).spec;
    let tol = if tol > 0.0 {
        tol
    } else {
        quasumb::surface::CLASS_TOL
    };
    guarded(|| {
        let ur = GridRange::new(u_lo, u_hi, nu)?;
        let vr = GridRange::new(v_lo, v_hi, nv)?;
        let report = classify_surface(spec, ur, vr, tol);
        let json = quasumb::export::report_json(&report);
        let cstring = CString::new(json).map_err(|_| Error::Io("nul byte in JSON".into()))?;
        *out_json = cstring.into_raw();
        Ok(QsmStatus::Ok)
    })
}

/// Find umbilic points by bisection along v for `nu` u-samples; writes up
/// to `cap` (u, v) pairs into `out_uv` and the total found into `found`.
///
/// # Safety
/// `s` must be a live handle; `out_uv` must have room for `2 * cap`
/// doubles; `found` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qsm_umbilic_locus(
    s: *const QsmSurface,
    u_lo: f64,
    u_hi: f64,
    nu: usize,
    v_lo: f64,
    v_hi: f64,
    tol: f64,
    out_uv: *mut f64,
    cap: usize,
    found: *mut usize,
) -> QsmStatus {
    if s.is_null() || found.is_null() || (out_uv.is_null() && cap > 0) {
        set_error("null pointer argument");
        return QsmStatus::NullPointer;
    }
    let spec = &(*s).spec;
    let tol = if tol > 0.0 {
        tol
    } else {
        quasumb::surface::CLASS_TOL
    };
    guarded(|| {
        let ur = GridRange::new(u_lo, u_hi, nu)?;
        let vr = GridRange::new(v_lo, v_hi, 2)?;
        let samples = umbilic_locus(spec, ur, vr, tol)?;
        *found = samples.len();
        for (i, (u, v)) in samples.iter().take(cap).enumerate() {
            *out_uv.add(2 * i) = *u;
            *out_uv.add(2 * i + 1) = *v;
        }
        Ok(QsmStatus::Ok)
    })
}

/// Release a string returned by this library. Passing NULL is a no-op.
///
/// # Safety
/// `s` must come from a `char **` output of this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn qsm_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::ptr;

    fn make(id: &str) -> *mut QsmSurface {
        let cid = CString::new(id).unwrap();
        let mut handle: *mut QsmSurface = ptr::null_mut();
        let st = unsafe { qsm_surface_builtin(cid.as_ptr(), &mut handle) };
        assert_eq!(st, QsmStatus::Ok);
        assert!(!handle.is_null());
        handle
    }

    fn blank_report() -> QsmPointReport {
        QsmPointReport {
            gauss: 0.0,
            mean: 0.0,
            disc: 0.0,
            class: QsmPointClass::Umbilic,
            lambda: 0.0,
            has_lambda: false,
        }
    }

    #[test]
    fn builtin_point_report_round_trip() {
        let h = make("ex2");
        let mut rep = blank_report();
        let st = unsafe { qsm_point_report(h, 0.3, -0.4, 0.0, &mut rep) };
        assert_eq!(st, QsmStatus::Ok);
        assert!((rep.gauss - 0.25).abs() < 1e-12);
        assert!((rep.mean - 0.5).abs() < 1e-12);
        assert_eq!(rep.class, QsmPointClass::QuasiUmbilic);
        assert!(rep.has_lambda);
        assert!((rep.lambda - 0.5).abs() < 1e-12);
        unsafe { qsm_surface_free(h) };
    }

    #[test]
    fn shape_matrix_entries() {
        let h = make("ex2");
        let mut m = QsmShapeMatrix {
            s11: 0.0,
            s12: 0.0,
            s21: 0.0,
            s22: 0.0,
        };
        let st = unsafe { qsm_shape_matrix(h, 1.1, 0.2, &mut m) };
        assert_eq!(st, QsmStatus::Ok);
        assert!((m.s11 - 0.5).abs() < 1e-12);
        assert!((m.s21 + 0.5).abs() < 1e-12);
        unsafe { qsm_surface_free(h) };
    }

    #[test]
    fn classify_json_returns_verdict() {
        let h = make("hyperboloid");
        let mut json: *mut c_char = ptr::null_mut();
        let st = unsafe { qsm_classify_json(h, -1.0, 1.0, 8, -1.0, 1.0, 8, 0.0, &mut json) };
        assert_eq!(st, QsmStatus::Ok);
        let text = unsafe { CStr::from_ptr(json) }.to_str().unwrap().to_string();
        assert!(text.contains("totally_umbilic"), "{text}");
        unsafe { qsm_string_free(json) };
        unsafe { qsm_surface_free(h) };
    }

    #[test]
    fn expression_surface_and_errors() {
        let x0 = CString::new("u").unwrap();
        let x1 = CString::new("v").unwrap();
        let x2 = CString::new("0").unwrap();
        let mut h: *mut QsmSurface = ptr::null_mut();
        let st = unsafe { qsm_surface_exprs(x0.as_ptr(), x1.as_ptr(), x2.as_ptr(), &mut h) };
        assert_eq!(st, QsmStatus::Ok);
        unsafe { qsm_surface_free(h) };

        let bad = CString::new("sin(").unwrap();
        let mut h2: *mut QsmSurface = ptr::null_mut();
        let st = unsafe { qsm_surface_exprs(bad.as_ptr(), x1.as_ptr(), x2.as_ptr(), &mut h2) };
        assert_eq!(st, QsmStatus::Parse);
        let msg = unsafe { CStr::from_ptr(qsm_last_error()) }.to_str().unwrap();
        assert!(msg.contains("syntax error"), "{msg}");
        assert!(h2.is_null());
    }

    #[test]
    fn not_timelike_status() {
        let x0 = CString::new("0").unwrap();
        let x1 = CString::new("u").unwrap();
        let x2 = CString::new("v").unwrap();
        let mut h: *mut QsmSurface = ptr::null_mut();
        unsafe { qsm_surface_exprs(x0.as_ptr(), x1.as_ptr(), x2.as_ptr(), &mut h) };
        let mut rep = blank_report();
        let st = unsafe { qsm_point_report(h, 0.5, 0.5, 0.0, &mut rep) };
        assert_eq!(st, QsmStatus::NotTimelike);
        unsafe { qsm_surface_free(h) };
    }

    #[test]
    fn ruled_and_case1_constructors() {
        let t1 = CString::new("u").unwrap();
        let t2 = CString::new("u+pi").unwrap();
        let mut h: *mut QsmSurface = ptr::null_mut();
        let st = unsafe { qsm_surface_ruled(t1.as_ptr(), t2.as_ptr(), 0.0, 0.0, -1.0, &mut h) };
        assert_eq!(st, QsmStatus::Ok);
        let mut p = [0.0_f64; 3];
        let st = unsafe { qsm_surface_point(h, 0.0, 0.0, p.as_mut_ptr()) };
        assert_eq!(st, QsmStatus::Ok);
        assert!((p[2] + 1.0).abs() < 1e-12);
        unsafe { qsm_surface_free(h) };

        let prof = CString::new("0").unwrap();
        let mut h2: *mut QsmSurface = ptr::null_mut();
        let st = unsafe { qsm_surface_case1(prof.as_ptr(), &mut h2) };
        assert_eq!(st, QsmStatus::Ok);
        let mut rep = blank_report();
        let st = unsafe { qsm_point_report(h2, 0.5, 0.5, 0.0, &mut rep) };
        assert_eq!(st, QsmStatus::Ok);
        assert!(rep.gauss.abs() < 1e-9 && rep.mean.abs() < 1e-9);
        unsafe { qsm_surface_free(h2) };
    }

    #[test]
    fn locus_through_the_abi() {
        let h = make("ex3");
        let mut buf = [0.0_f64; 64];
        let mut found = 0usize;
        let st = unsafe {
            qsm_umbilic_locus(h, 1.0, 1.0, 1, 0.0, 2.0, 0.0, buf.as_mut_ptr(), 32, &mut found)
        };
        assert_eq!(st, QsmStatus::Ok);
        assert!(found >= 1);
        assert!((buf[0] - 1.0).abs() < 1e-12);
        assert!((buf[1] - 2.0 / 3.0).abs() < 1e-9);
        unsafe { qsm_surface_free(h) };
    }

    #[test]
    fn version_and_null_handling() {
        let v = unsafe { CStr::from_ptr(qsm_version()) }.to_str().unwrap();
        assert_eq!(v, env!("CARGO_PKG_VERSION"));
        assert_eq!(
            unsafe { qsm_surface_builtin(ptr::null(), ptr::null_mut()) },
            QsmStatus::NullPointer
        );
        unsafe { qsm_surface_free(ptr::null_mut()) };
        unsafe { qsm_string_free(ptr::null_mut()) };
    }
}
