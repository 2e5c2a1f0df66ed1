//! C ABI over the hyperbasis library.
//!
//! Every fallible call returns a `u32` status (`HB_OK` on success) and
//! writes results through out-pointers. The message of the last failure on
//! the calling thread is available from `hb_last_error`. Strings handed out
//! by this library must be released with `hb_string_free`; handles with
//! their own `_free` function.

use hyperbasis::bases::{evaluate, native_chart, Basis, Parity, Quantum, SpectralParams};
use hyperbasis::contraction::{contract, ContractionCurve, FlatParams, Setup};
use hyperbasis::geometry::{Chart, ChartPoint, EquidistantPoint, HorocyclicPoint, PseudoSphericalPoint};
use hyperbasis::interbasis::{coeff_u, coeff_u_integral, coeff_v_nu_integral, coeff_v_phi_integral, coeff_v_series, coeff_w};
use hyperbasis::specfun::{SeriesAccuracy, C64};
use hyperbasis::verify::identities::{reports_to_jsonl, run_suite, suite_size};
use hyperbasis::verify::quad::Tolerance;
use hyperbasis::Error;
use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

pub const HB_OK: u32 = 0;
/// A required pointer argument was null.
pub const HB_ERR_NULL: u32 = 1;
/// Bad configuration: unknown name, invalid UTF-8, out-of-range option.
pub const HB_ERR_CONFIG: u32 = 2;
/// Argument outside the mathematical domain.
pub const HB_ERR_DOMAIN: u32 = 3;
/// Series, quadrature or special-function failure.
pub const HB_ERR_NUMERICAL: u32 = 4;
/// Internal error or caught panic.
pub const HB_ERR_INTERNAL: u32 = 5;

pub const HB_PARITY_EVEN: i32 = 0;
pub const HB_PARITY_ODD: i32 = 1;

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn code_of(e: &Error) -> u32 {
    match e {
        Error::Config(_) => HB_ERR_CONFIG,
        Error::Domain(_) => HB_ERR_DOMAIN,
        Error::Internal(_) => HB_ERR_INTERNAL,
        _ => HB_ERR_NUMERICAL,
    }
}

/// Runs `f`, mapping errors and panics to status codes.
fn guard<F: FnOnce() -> Result<(), (u32, String)>>(f: F) -> u32 {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => HB_OK,
        Ok(Err((code, msg))) => {
            set_error(msg);
            code
        }
        Err(_) => {
            set_error("panic inside hyperbasis".into());
            HB_ERR_INTERNAL
        }
    }
}

trait IntoStatus<T> {
    fn st(self) -> Result<T, (u32, String)>;
}

impl<T> IntoStatus<T> for hyperbasis::Result<T> {
    fn st(self) -> Result<T, (u32, String)> {
        self.map_err(|e| (code_of(&e), e.to_string()))
    }
}

fn null(what: &str) -> (u32, String) {
    (HB_ERR_NULL, format!("{what} is null"))
}

unsafe fn str_arg<'a>(p: *const c_char, what: &str) -> Result<&'a str, (u32, String)> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p).to_str().map_err(|_| (HB_ERR_CONFIG, format!("{what} is not valid UTF-8")))
}

unsafe fn write_c64(v: C64, re: *mut f64, im: *mut f64) -> Result<(), (u32, String)> {
    if re.is_null() || im.is_null() {
        return Err(null("output pointer"));
    }
    *re = v.re;
    *im = v.im;
    Ok(())
}

fn parity(p: i32) -> Result<Parity, (u32, String)> {
    match p {
        HB_PARITY_EVEN => Ok(Parity::Even),
        HB_PARITY_ODD => Ok(Parity::Odd),
        _ => Err((HB_ERR_CONFIG, format!("parity must be {HB_PARITY_EVEN} or {HB_PARITY_ODD}, got {p}"))),
    }
}

/// Message of the last failure on this thread, or null if there was none.
/// The caller owns the string.
#[no_mangle]
pub extern "C" fn hb_last_error() -> *mut c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null_mut(), |c| c.clone().into_raw()))
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and must not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn hb_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Library version; the caller owns the string.
#[no_mangle]
pub extern "C" fn hb_version() -> *mut c_char {
    CString::new(env!("CARGO_PKG_VERSION")).unwrap_or_default().into_raw()
}

/// One basis at fixed spectral parameters.
pub struct HbWavefunction {
    basis: Basis,
    params: SpectralParams,
}

/// Creates a wavefunction handle. `basis` is one of "ho", "ps", "eq+",
/// "eq-", "eq1", "eq2"; `label` is s, m or ν accordingly (m must be an
/// integer).
///
/// # Safety
/// `basis` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn hb_wavefunction_new(
    basis: *const c_char,
    radius: f64,
    rho: f64,
    label: f64,
    out: *mut *mut HbWavefunction,
) -> u32 {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let b = Basis::parse(str_arg(basis, "basis")?).st()?;
        let q = match b {
            Basis::Ho => Quantum::S(label),
            Basis::Ps => {
                if label.fract() != 0.0 || !label.is_finite() || label.abs() > 1e9 {
                    return Err((HB_ERR_DOMAIN, format!("m must be an integer, got {label}")));
                }
                Quantum::M(label as i64)
            }
            _ => Quantum::Nu(label),
        };
        let params = SpectralParams::new(radius, rho, q).st()?;
        *out = Box::into_raw(Box::new(HbWavefunction { basis: b, params }));
        Ok(())
    })
}

/// Evaluates at chart coordinates: (x̃, ỹ) for ho, (τ, φ) for ps, (τ₁, τ₂)
/// for the equidistant families.
///
/// # Safety
/// `h` must be a live handle; `re`, `im` valid pointers.
#[no_mangle]
pub unsafe extern "C" fn hb_wavefunction_eval(h: *const HbWavefunction, c1: f64, c2: f64, re: *mut f64, im: *mut f64) -> u32 {
    guard(|| {
        let w = h.as_ref().ok_or_else(|| null("handle"))?;
        let p = match native_chart(w.basis) {
            Chart::Horocyclic => ChartPoint::Horocyclic(HorocyclicPoint { x_t: c1, y_t: c2 }),
            Chart::PseudoSpherical => ChartPoint::PseudoSpherical(PseudoSphericalPoint { tau: c1, phi: c2 }),
            _ => ChartPoint::Equidistant(EquidistantPoint { tau1: c1, tau2: c2 }),
        };
        p.validate().st()?;
        write_c64(evaluate(w.basis, &w.params, &p).st()?.value, re, im)
    })
}

/// # Safety
/// `h` must come from `hb_wavefunction_new` (or be null) and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn hb_wavefunction_free(h: *mut HbWavefunction) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

/// 𝒲^{ν(±)}_{ρs}.
///
/// # Safety
/// `re`, `im` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn hb_coeff_w(rho: f64, s: f64, nu: f64, par: i32, re: *mut f64, im: *mut f64) -> u32 {
    guard(|| write_c64(coeff_w(rho, s, nu, parity(par)?).st()?.value, re, im))
}

/// 𝒰^{m(±)}_{ρν}; `route` is "wilson" (null selects it) or "mu_integral".
///
/// # Safety
/// `route` null or a NUL-terminated string; `re`, `im` valid pointers.
#[no_mangle]
pub unsafe extern "C" fn hb_coeff_u(rho: f64, nu: f64, m: i64, par: i32, route: *const c_char, re: *mut f64, im: *mut f64) -> u32 {
    guard(|| {
        let p = parity(par)?;
        let r = if route.is_null() { "wilson" } else { str_arg(route, "route")? };
        let v = match r {
            "wilson" => coeff_u(rho, nu, m, p),
            "mu_integral" => coeff_u_integral(rho, nu, m, p, Tolerance::default()),
            other => return Err((HB_ERR_CONFIG, format!("unknown U route '{other}'"))),
        };
        write_c64(v.st()?.value, re, im)
    })
}

/// 𝒱^m_{ρs}; `route` is "laguerre_series" (null selects it), "nu_integral"
/// or "phi_integral".
///
/// # Safety
/// `route` null or a NUL-terminated string; `re`, `im` valid pointers.
#[no_mangle]
pub unsafe extern "C" fn hb_coeff_v(rho: f64, s: f64, m: i64, route: *const c_char, re: *mut f64, im: *mut f64) -> u32 {
    guard(|| {
        let r = if route.is_null() { "laguerre_series" } else { str_arg(route, "route")? };
        let v = match r {
            "laguerre_series" => coeff_v_series(rho, s, m, SeriesAccuracy::default()),
            "nu_integral" => coeff_v_nu_integral(rho, s, m, Tolerance::default()),
            "phi_integral" => coeff_v_phi_integral(rho, s, m, 0.5, Tolerance::new(1e-14, 1e-10)),
            other => return Err((HB_ERR_CONFIG, format!("unknown V route '{other}'"))),
        };
        write_c64(v.st()?.value, re, im)
    })
}

/// Runs the identity suite for `filter` ("*" or a comma list of families or
/// ids). Writes the report count and the number of failures, and, if
/// `jsonl` is non-null, the reports as JSON lines (caller frees).
///
/// # Safety
/// `filter` must be a NUL-terminated string; out-pointers valid or null
/// where documented.
#[no_mangle]
pub unsafe extern "C" fn hb_verify(filter: *const c_char, total: *mut u32, failed: *mut u32, jsonl: *mut *mut c_char) -> u32 {
    guard(|| {
        if total.is_null() || failed.is_null() {
            return Err(null("count pointer"));
        }
        let f = str_arg(filter, "filter")?;
        if suite_size(f) == 0 {
            return Err((HB_ERR_CONFIG, format!("filter '{f}' matches no checks")));
        }
        let reports = run_suite(f);
        *total = reports.len() as u32;
        *failed = reports.iter().filter(|r| !r.passed).count() as u32;
        if !jsonl.is_null() {
            *jsonl = CString::new(reports_to_jsonl(&reports)).map_err(|e| (HB_ERR_INTERNAL, e.to_string()))?.into_raw();
        }
        Ok(())
    })
}

/// A finished contraction sweep.
pub struct HbCurve {
    curve: ContractionCurve,
}

/// Runs a contraction sweep over `r_values` (at least 4, ascending) with
/// the default probe grids. `target` is "ps", "eq+", "eq-", "ho", "u+",
/// "u-", "w" or "v". Parameters by target: ps uses (k, m); eq± uses (k,
/// a = k₁); ho uses (k, a = k₂); u± uses (k, m); w uses (k, a = k₁,
/// b = k₂'); v uses (k, a = k₂, m).
///
/// # Safety
/// `target` NUL-terminated, `r_values` valid for `n` reads, `out` valid.
#[no_mangle]
pub unsafe extern "C" fn hb_contract(
    target: *const c_char,
    k: f64,
    a: f64,
    b: f64,
    m: i64,
    r_values: *const f64,
    n: usize,
    out: *mut *mut HbCurve,
) -> u32 {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        if r_values.is_null() {
            return Err(null("r_values"));
        }
        let rs = std::slice::from_raw_parts(r_values, n).to_vec();
        let grid = |lo: f64, hi: f64, n: usize| -> Vec<f64> { (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect() };
        let setup = match str_arg(target, "target")? {
            "ps" => Setup::Ps {
                fp: FlatParams::from_angle(k, 0.0).st()?,
                m,
                points: grid(0.0, 10.0, 41).into_iter().map(|r| (r, 0.0)).collect(),
            },
            t @ ("eq+" | "eq-") => Setup::Eq {
                fp: FlatParams::from_k_k1(k, a).st()?,
                parity: if t == "eq+" { Parity::Even } else { Parity::Odd },
                points: grid(-6.0, 6.0, 25).into_iter().map(|y| (0.0, y)).collect(),
            },
            "ho" => Setup::Ho {
                fp: FlatParams::from_k_k2(k, a).st()?,
                points: grid(-2.0, 2.0, 9).into_iter().map(|x| (x, 0.0)).collect(),
            },
            t @ ("u+" | "u-") => Setup::U {
                k,
                m,
                parity: if t == "u+" { Parity::Even } else { Parity::Odd },
                alphas: grid(0.4, 2.47, 10),
            },
            "w" => Setup::W { k, k1: a, k2p: b },
            "v" => Setup::V { k, k2: a, m, band: true },
            other => return Err((HB_ERR_CONFIG, format!("unknown contraction target '{other}'"))),
        };
        let curve = contract(&setup, &rs).st()?;
        *out = Box::into_raw(Box::new(HbCurve { curve }));
        Ok(())
    })
}

/// Number of R values in the curve (0 for a null handle).
///
/// # Safety
/// `h` null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn hb_curve_len(h: *const HbCurve) -> usize {
    h.as_ref().map_or(0, |c| c.curve.r_values.len())
}

/// R value and error at index `i`.
///
/// # Safety
/// `h` a live handle; `r`, `err` valid pointers.
#[no_mangle]
pub unsafe extern "C" fn hb_curve_point(h: *const HbCurve, i: usize, r: *mut f64, err: *mut f64) -> u32 {
    guard(|| {
        let c = &h.as_ref().ok_or_else(|| null("handle"))?.curve;
        if r.is_null() || err.is_null() {
            return Err(null("output pointer"));
        }
        if i >= c.r_values.len() {
            return Err((HB_ERR_CONFIG, format!("index {i} out of range ({} points)", c.r_values.len())));
        }
        *r = c.r_values[i];
        *err = c.errors[i];
        Ok(())
    })
}

/// Fitted exponent and prefactor of error ≈ prefactor·R^exponent.
///
/// # Safety
/// `h` a live handle; out-pointers valid.
#[no_mangle]
pub unsafe extern "C" fn hb_curve_fit(h: *const HbCurve, exponent: *mut f64, prefactor: *mut f64) -> u32 {
    guard(|| {
        let c = &h.as_ref().ok_or_else(|| null("handle"))?.curve;
        if exponent.is_null() || prefactor.is_null() {
            return Err(null("output pointer"));
        }
        *exponent = c.fitted_exponent;
        *prefactor = c.fitted_prefactor;
        Ok(())
    })
}

/// # Safety
/// `h` must come from `hb_contract` (or be null) and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn hb_curve_free(h: *mut HbCurve) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}
