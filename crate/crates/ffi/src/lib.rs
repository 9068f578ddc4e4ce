//! C ABI for `schcalc`.
//!
//! Every function returns a [`SchStatus`]; results come back through out
//! pointers. On failure the message is available from
//! [`sch_last_error_message`] on the same thread. Handles are opaque and
//! must be released with the matching `*_free` function.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::slice;

use schcalc::calculus::{
    frac_deriv_poisson_spectral, heat_apply, poisson_spectral, spectrum_for, FractionalOrder, GridFunction, Spectral,
};
use schcalc::cli::{verdict_code, RunConfig};
use schcalc::lattice::{build_operator, critical_radius, PeriodicGrid, Potential, SchrodingerOperator};
use schcalc::regularity::holder_seminorm;
use schcalc::verifier::{run_suites, Context};
use schcalc::Error;

/// Result of every call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SchStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Config = 3,
    Numerical = 4,
    BufferTooSmall = 5,
    Panic = 6,
    Io = 7,
}

/// A grid, potential and assembled operator.
pub struct SchOperator {
    grid: PeriodicGrid,
    potential: Potential,
    op: SchrodingerOperator,
}

/// Eigenpairs of an operator.
pub struct SchSpectrum {
    inner: Box<dyn Spectral>,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("interior nul removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> SchStatus {
    match e {
        e if e.is_numerical() => SchStatus::Numerical,
        Error::Config(_) | Error::UnsupportedDimension(_) => SchStatus::Config,
        Error::Io(_) | Error::Json(_) => SchStatus::Io,
        _ => SchStatus::InvalidArgument,
    }
}

enum Fail {
    Null(&'static str),
    Small { need: usize, got: usize },
    Lib(Error),
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail::Lib(e)
    }
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> SchStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            SchStatus::Ok
        }
        Ok(Err(Fail::Null(name))) => {
            set_error(format!("{name} is null"));
            SchStatus::NullPointer
        }
        Ok(Err(Fail::Small { need, got })) => {
            set_error(format!("buffer holds {got} values, {need} needed"));
            SchStatus::BufferTooSmall
        }
        Ok(Err(Fail::Lib(e))) => {
            set_error(e.to_string());
            status_of(&e)
        }
        Err(_) => {
            set_error("internal panic".into());
            SchStatus::Panic
        }
    }
}

unsafe fn nonnull<'a, T>(p: *const T, name: &'static str) -> Result<&'a T, Fail> {
    p.as_ref().ok_or(Fail::Null(name))
}

unsafe fn out<'a, T>(p: *mut T, name: &'static str) -> Result<&'a mut T, Fail> {
    p.as_mut().ok_or(Fail::Null(name))
}

unsafe fn c_str<'a>(p: *const c_char, name: &'static str) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(Fail::Null(name));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Fail::Lib(Error::InvalidArgument(format!("{name} is not UTF-8"))))
}

unsafe fn input<'a>(p: *const f64, len: usize, need: usize, name: &'static str) -> Result<&'a [f64], Fail> {
    if p.is_null() {
        return Err(Fail::Null(name));
    }
    if len != need {
        return Err(Fail::Lib(Error::SizeMismatch {
            expected: need,
            found: len,
        }));
    }
    Ok(slice::from_raw_parts(p, len))
}

unsafe fn output<'a>(p: *mut f64, len: usize, need: usize, name: &'static str) -> Result<&'a mut [f64], Fail> {
    if p.is_null() {
        return Err(Fail::Null(name));
    }
    if len < need {
        return Err(Fail::Small { need, got: len });
    }
    Ok(slice::from_raw_parts_mut(p, need))
}

/// The message of the last failed call on this thread, or null. The pointer
/// stays valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn sch_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Builds `L = -Δ + V` on `n` points of period `period`. `potential` is a
/// spec string such as `"quadratic"`, `"constant:1"` or `"well:4,0.5"`.
///
/// # Safety
/// `potential` must be a nul-terminated string and `out_op` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sch_operator_new(
    n: usize,
    period: f64,
    potential: *const c_char,
    out_op: *mut *mut SchOperator,
) -> SchStatus {
    guard(|| {
        let spec = c_str(potential, "potential")?;
        let slot = out(out_op, "out_op")?;
        let grid = PeriodicGrid::new(n, period)?;
        let potential = Potential::from_spec(&grid, spec)?;
        let op = build_operator(&grid, &potential)?;
        *slot = Box::into_raw(Box::new(SchOperator { grid, potential, op }));
        Ok(())
    })
}

/// # Safety
/// `op` must come from [`sch_operator_new`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn sch_operator_free(op: *mut SchOperator) {
    if !op.is_null() {
        drop(Box::from_raw(op));
    }
}

/// Number of grid points.
///
/// # Safety
/// `op` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn sch_operator_len(op: *const SchOperator, out_len: *mut usize) -> SchStatus {
    guard(|| {
        *out(out_len, "out_len")? = nonnull(op, "op")?.grid.len();
        Ok(())
    })
}

/// Critical radius `ρ` at grid node `index`.
///
/// # Safety
/// `op` must be a live handle and `out_rho` valid.
#[no_mangle]
pub unsafe extern "C" fn sch_critical_radius(op: *const SchOperator, index: usize, out_rho: *mut f64) -> SchStatus {
    guard(|| {
        let op = nonnull(op, "op")?;
        *out(out_rho, "out_rho")? = critical_radius(&op.grid, &op.potential, index, 1)?;
        Ok(())
    })
}

/// Diagonalizes the operator.
///
/// # Safety
/// `op` must be a live handle and `out_spec` valid.
#[no_mangle]
pub unsafe extern "C" fn sch_spectrum_new(op: *const SchOperator, out_spec: *mut *mut SchSpectrum) -> SchStatus {
    guard(|| {
        let op = nonnull(op, "op")?;
        let slot = out(out_spec, "out_spec")?;
        let inner = spectrum_for(&op.op)?;
        *slot = Box::into_raw(Box::new(SchSpectrum { inner }));
        Ok(())
    })
}

/// # Safety
/// `spec` must come from [`sch_spectrum_new`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn sch_spectrum_free(spec: *mut SchSpectrum) {
    if !spec.is_null() {
        drop(Box::from_raw(spec));
    }
}

/// Copies the ascending eigenvalues into `buf`, which must hold `len >= n`.
///
/// # Safety
/// `buf` must point to `len` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn sch_spectrum_eigenvalues(spec: *const SchSpectrum, buf: *mut f64, len: usize) -> SchStatus {
    guard(|| {
        let ev = nonnull(spec, "spec")?.inner.eigenvalues();
        output(buf, len, ev.len(), "buf")?.copy_from_slice(ev);
        Ok(())
    })
}

unsafe fn apply_real(
    spec: *const SchSpectrum,
    f: *const f64,
    out_buf: *mut f64,
    len: usize,
    map: impl FnOnce(&dyn Spectral, &GridFunction) -> schcalc::Result<GridFunction>,
) -> SchStatus {
    guard(|| {
        let s = nonnull(spec, "spec")?.inner.as_ref();
        let n = s.len();
        let g = GridFunction::from_real(s.grid(), input(f, len, n, "f")?)?;
        let r = map(s, &g)?;
        for (o, z) in output(out_buf, len, n, "out")?.iter_mut().zip(r.samples()) {
            *o = z.re;
        }
        Ok(())
    })
}

/// `out = e^{-tL} f` for real `f` of length `n`.
///
/// # Safety
/// `f` and `out` must each point to `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn sch_heat_apply(
    spec: *const SchSpectrum,
    t: f64,
    f: *const f64,
    out: *mut f64,
    len: usize,
) -> SchStatus {
    apply_real(spec, f, out, len, |s, g| heat_apply(s, t, g))
}

/// `out = e^{-t√L} f` for real `f` of length `n`.
///
/// # Safety
/// `f` and `out` must each point to `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn sch_poisson_apply(
    spec: *const SchSpectrum,
    t: f64,
    f: *const f64,
    out: *mut f64,
    len: usize,
) -> SchStatus {
    apply_real(spec, f, out, len, |s, g| poisson_spectral(s, t, g))
}

/// `∂_t^β e^{-t√L} f` for real `f`; the result is complex for non-integer
/// `β` and is split into `out_re` and `out_im`.
///
/// # Safety
/// `f`, `out_re` and `out_im` must each point to `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn sch_frac_deriv_apply(
    spec: *const SchSpectrum,
    beta: f64,
    t: f64,
    f: *const f64,
    out_re: *mut f64,
    out_im: *mut f64,
    len: usize,
) -> SchStatus {
    guard(|| {
        let s = nonnull(spec, "spec")?.inner.as_ref();
        let n = s.len();
        let g = GridFunction::from_real(s.grid(), input(f, len, n, "f")?)?;
        let r = frac_deriv_poisson_spectral(s, &FractionalOrder::new(beta)?, t, &g)?;
        let re = output(out_re, len, n, "out_re")?;
        let im = output(out_im, len, n, "out_im")?;
        for (i, z) in r.samples().iter().enumerate() {
            re[i] = z.re;
            im[i] = z.im;
        }
        Ok(())
    })
}

/// Periodic `α`-Hölder seminorm of real samples on `n` points of period
/// `period`.
///
/// # Safety
/// `f` must point to `n` doubles.
#[no_mangle]
pub unsafe extern "C" fn sch_holder_seminorm(
    f: *const f64,
    n: usize,
    period: f64,
    alpha: f64,
    out_value: *mut f64,
) -> SchStatus {
    guard(|| {
        let grid = PeriodicGrid::new(n, period)?;
        let g = GridFunction::from_real(&grid, input(f, n, n, "f")?)?;
        *out(out_value, "out_value")? = holder_seminorm(&g, alpha)?;
        Ok(())
    })
}

/// Runs the suites named in a key-value configuration (the same format as
/// the `schcalc` config file, `suites = ...` required). On success
/// `out_json` receives a JSON array of reports, to be released with
/// [`sch_string_free`], and `out_exit` the status the CLI would exit with.
///
/// # Safety
/// `config` must be a nul-terminated string; out pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn sch_run_suites(
    config: *const c_char,
    out_json: *mut *mut c_char,
    out_exit: *mut i32,
) -> SchStatus {
    guard(|| {
        let text = c_str(config, "config")?;
        let json_slot = out(out_json, "out_json")?;
        let exit_slot = out(out_exit, "out_exit")?;
        let rc = RunConfig::parse(text)?;
        rc.validate(true)?;
        let ctx = Context::new(rc.suite.clone())?;
        let reports = run_suites(&ctx, &rc.suites)?;
        let json = serde_json::to_string_pretty(&reports).map_err(Error::from)?;
        *json_slot = CString::new(json)
            .map_err(|_| Fail::Lib(Error::InvalidArgument("report contains nul".into())))?
            .into_raw();
        *exit_slot = verdict_code(&reports);
        Ok(())
    })
}

/// # Safety
/// `s` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn sch_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
