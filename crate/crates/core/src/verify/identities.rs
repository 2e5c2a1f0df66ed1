//! Identity checks. Every check evaluates the two sides of a relation by
//! independent routes (closed form against quadrature, or two quadratures)
//! and reports the discrepancy against a fixed tolerance.

use super::quad::{integrate_decay, integrate_pieces, QuadratureResult, Tolerance};
use crate::bases::{ln_norm_eq, ln_norm_eq12, psi_eq12_radial, psi_eq_radial, Basis, Parity};
use crate::interbasis::{coeff_u, coeff_v_phi_integral, coeff_v_series, coeff_w};
use crate::specfun::{
    abs_gamma_ln, conical_legendre, gauss_2f1, ln_cosh, ln_sinh, log_gamma, macdonald_imag, wilson_poly,
    SeriesAccuracy, C64,
};
use crate::{Error, Result};
use rayon::prelude::*;
use serde::Serialize;
use std::cell::RefCell;
use std::collections::BTreeMap;
use std::f64::consts::{LN_2, PI};
use std::fmt;

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum ParamValue {
    Int(i64),
    Num(f64),
    Text(String),
}

impl fmt::Display for ParamValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParamValue::Int(v) => write!(f, "{v}"),
            ParamValue::Num(v) => write!(f, "{v}"),
            ParamValue::Text(v) => write!(f, "{v}"),
        }
    }
}

impl From<f64> for ParamValue {
    fn from(v: f64) -> Self {
        ParamValue::Num(v)
    }
}
impl From<i64> for ParamValue {
    fn from(v: i64) -> Self {
        ParamValue::Int(v)
    }
}
impl From<u32> for ParamValue {
    fn from(v: u32) -> Self {
        ParamValue::Int(v as i64)
    }
}
impl From<&str> for ParamValue {
    fn from(v: &str) -> Self {
        ParamValue::Text(v.to_string())
    }
}
impl From<Parity> for ParamValue {
    fn from(p: Parity) -> Self {
        ParamValue::Text(parity_name(p).into())
    }
}

pub type Params = BTreeMap<String, ParamValue>;

fn params(kv: Vec<(&str, ParamValue)>) -> Params {
    kv.into_iter().map(|(k, v)| (k.to_string(), v)).collect()
}

fn parity_name(p: Parity) -> &'static str {
    match p {
        Parity::Even => "+",
        Parity::Odd => "-",
    }
}

/// One verified relation. `passed` holds exactly when abs_err ≤ tol or
/// rel_err ≤ tol. `err_budget` is the sum of the quadrature error estimates
/// and truncation bounds of both sides.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IdentityReport {
    pub id: String,
    pub family: String,
    pub lhs: C64,
    pub rhs: C64,
    pub abs_err: f64,
    pub rel_err: f64,
    pub tol: f64,
    pub passed: bool,
    pub err_budget: f64,
    pub params: Params,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl IdentityReport {
    pub fn new(id: &str, family: &str, lhs: C64, rhs: C64, tol: f64, err_budget: f64, params: Params) -> Self {
        let abs_err = (lhs - rhs).norm();
        let scale = lhs.norm().max(rhs.norm());
        let rel_err = if scale > 0.0 { abs_err / scale } else { 0.0 };
        let finite = abs_err.is_finite();
        IdentityReport {
            id: id.to_string(),
            family: family.to_string(),
            lhs,
            rhs,
            abs_err,
            rel_err,
            tol,
            passed: finite && (abs_err <= tol || rel_err <= tol),
            err_budget,
            params,
            error: None,
        }
    }

    /// A check that could not be evaluated.
    pub fn failed(id: &str, family: &str, tol: f64, params: Params, err: &Error) -> Self {
        let nan = C64::new(f64::NAN, f64::NAN);
        IdentityReport {
            id: id.to_string(),
            family: family.to_string(),
            lhs: nan,
            rhs: nan,
            abs_err: f64::INFINITY,
            rel_err: f64::INFINITY,
            tol,
            passed: false,
            err_budget: f64::INFINITY,
            params,
            error: Some(err.to_string()),
        }
    }

    /// Single JSON object, no trailing newline.
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report serialization")
    }

    pub fn params_string(&self) -> String {
        self.params.iter().map(|(k, v)| format!("{k}={v}")).collect::<Vec<_>>().join(",")
    }
}

/// Line-delimited JSON, one report per line.
pub fn reports_to_jsonl(reports: &[IdentityReport]) -> String {
    let mut out = String::new();
    for r in reports {
        out.push_str(&r.to_json());
        out.push('\n');
    }
    out
}

/// Fixed-width summary table with a totals line.
pub fn reports_table(reports: &[IdentityReport]) -> String {
    let mut out = format!(
        "{:<6} {:<8} {:<26} {:>11} {:>11} {:>9}  {}\n",
        "status", "family", "id", "abs_err", "rel_err", "tol", "params"
    );
    for r in reports {
        out.push_str(&format!(
            "{:<6} {:<8} {:<26} {:>11.3e} {:>11.3e} {:>9.1e}  {}\n",
            if r.passed { "PASS" } else { "FAIL" },
            r.family,
            r.id,
            r.abs_err,
            r.rel_err,
            r.tol,
            r.params_string()
        ));
    }
    let passed = reports.iter().filter(|r| r.passed).count();
    out.push_str(&format!("{passed}/{} passed\n", reports.len()));
    out
}

/// Holds the first error raised inside an integrand so the report carries the
/// real cause instead of a generic non-finite failure.
struct Guard {
    err: RefCell<Option<Error>>,
}

impl Guard {
    fn new() -> Self {
        Guard { err: RefCell::new(None) }
    }

    fn val(&self, r: Result<C64>) -> C64 {
        match r {
            Ok(v) => v,
            Err(e) => {
                self.err.borrow_mut().get_or_insert(e);
                C64::new(f64::NAN, f64::NAN)
            }
        }
    }

    fn done(&self, q: Result<QuadratureResult>) -> Result<QuadratureResult> {
        match (q, self.err.borrow_mut().take()) {
            (_, Some(e)) => Err(e),
            (q, None) => q,
        }
    }
}

fn acc() -> SeriesAccuracy {
    SeriesAccuracy::default()
}

fn k_imag(rho: f64, x: f64) -> Result<f64> {
    macdonald_imag(rho, x, acc())
}

fn cexp_lg(a: C64, b: C64) -> Result<C64> {
    Ok((log_gamma(a)? + log_gamma(b)?).exp())
}

fn breaks_step(a: f64, b: f64, step: f64) -> Vec<f64> {
    let n = ((b - a) / step).ceil().max(1.0) as usize;
    (0..=n).map(|j| a + (b - a) * j as f64 / n as f64).collect()
}

fn delta(a: bool) -> f64 {
    if a {
        1.0
    } else {
        0.0
    }
}

pub const FAMILY_K: &str = "K";
pub const FAMILY_HOEQ: &str = "HO-EQ";
pub const FAMILY_U: &str = "U";
pub const FAMILY_V: &str = "V";
pub const FAMILY_MB: &str = "MB";
pub const FAMILY_P: &str = "P";
pub const FAMILY_SUM: &str = "SUM";
pub const FAMILY_WILSON: &str = "WILSON";
pub const FAMILY_DELTA: &str = "DELTA";
pub const FAMILY_W: &str = "W";

/// π²/(4√ỹ cosh πρ)·P_{−1/2+iρ}((x̃²+ỹ²+1)/(2ỹ)) against
/// ∫₀^∞ K_{iρ}(s)K_{iρ}(sỹ)cos(sx̃) ds.
pub fn check_macdonald_product(rho: f64, xt: f64, yt: f64) -> Result<IdentityReport> {
    if !(yt > 0.0) {
        return Err(Error::Domain("macdonald product needs y > 0".into()));
    }
    let z = (xt * xt + yt * yt + 1.0) / (2.0 * yt);
    let tau = (z + ((z - 1.0) * (z + 1.0)).sqrt()).ln();
    let p = conical_legendre(0, rho, tau, acc())?;
    let lhs = p * (2.0 * PI.ln() - 2.0 * LN_2 - 0.5 * yt.ln() - ln_cosh(PI * rho)).exp();
    // s = e^u; the integrand vanishes like e^u below and like e^{-(1+ỹ)s} above
    let g = Guard::new();
    let f = |u: f64| {
        let s = u.exp();
        g.val((|| -> Result<C64> { Ok(C64::new(s * k_imag(rho, s)? * k_imag(rho, s * yt)? * (s * xt).cos(), 0.0)) })())
    };
    let hi = (45.0 / (1.0 + yt)).ln();
    let q = g.done(integrate_pieces(f, &breaks_step(-37.0, hi, 1.0), Tolerance::new(1e-14, 1e-12)))?;
    let ps = params(vec![("rho", rho.into()), ("xt", xt.into()), ("yt", yt.into())]);
    Ok(IdentityReport::new("macdonald_product", FAMILY_K, C64::new(lhs, 0.0), q.value, 1e-8, q.err_est, ps))
}

/// Pointwise expansion of the horocyclic s-dependence over the equidistant
/// ν-continuum: the cosine part for even parity, the sine part for odd.
pub fn check_ho_in_eq_expansion(rho: f64, s: f64, xt: f64, yt: f64, parity: Parity) -> Result<IdentityReport> {
    if s == 0.0 || !(yt > 0.0) {
        return Err(Error::Domain("expansion needs s != 0 and y > 0".into()));
    }
    let a = s.abs();
    let k = k_imag(rho, a * yt)?;
    let root = (2.0 * a * yt).sqrt();
    let (c0, cc, lhs) = match parity {
        Parity::Even => (0.25, 0.5, 4.0 * PI * root * k * (s * xt).cos()),
        Parity::Odd => (0.75, 1.5, 2.0 * PI * s.signum() * root * k * (s * xt).sin()),
    };
    let lnq = (a * (xt * xt + yt * yt) / (2.0 * yt)).ln();
    let z = -(xt * xt) / (yt * yt);
    let factor = if parity == Parity::Odd { xt / yt } else { 1.0 };
    let g = Guard::new();
    let f = |nu: f64| {
        g.val((|| -> Result<C64> {
            let gg = cexp_lg(C64::new(c0, 0.5 * (rho - nu)), C64::new(c0, -0.5 * (rho + nu)))?;
            let h = gauss_2f1(C64::new(c0, -0.5 * (rho - nu)), C64::new(c0, 0.5 * (rho + nu)), C64::new(cc, 0.0), z, acc())?;
            Ok(gg * h * C64::from_polar(factor, nu * lnq))
        })())
    };
    // Γ·Γ decays like e^{−π|ν|/2} while the 2F1 grows at most like e^{|ν|·atan(|x̃|/ỹ)}
    let rate = 0.5 * PI - (xt.abs() / yt).atan();
    let w = rho + 36.0 / rate;
    let q = g.done(integrate_pieces(f, &breaks_step(-w, w, 1.0), Tolerance::new(1e-12, 1e-11)))?;
    let id = match parity {
        Parity::Even => "ho_eq_expansion_cos",
        Parity::Odd => "ho_eq_expansion_sin",
    };
    let ps = params(vec![
        ("rho", rho.into()),
        ("s", s.into()),
        ("xt", xt.into()),
        ("yt", yt.into()),
        ("parity", parity.into()),
    ]);
    Ok(IdentityReport::new(id, FAMILY_HOEQ, C64::new(lhs, 0.0), q.value, 1e-6, q.err_est, ps))
}

/// The ν = 0 members of the expansion: s-integrals of K_{iρ}(sỹ) against
/// cos(sx̃)/√s and sin(sx̃)/(x̃√s) equal |Γ|²·2F1 closed forms.
pub fn check_ho_in_eq_part(rho: f64, xt: f64, yt: f64, parity: Parity) -> Result<IdentityReport> {
    if !(yt > 0.0) {
        return Err(Error::Domain("s-integral needs y > 0".into()));
    }
    let z = -(xt * xt) / (yt * yt);
    let (c0, cc, pre) = match parity {
        Parity::Even => (0.25, 0.5, (8.0 * yt).sqrt()),
        Parity::Odd => (0.75, 1.5, (2.0 * yt.powi(3)).sqrt()),
    };
    let rhs = gauss_2f1(C64::new(c0, -0.5 * rho), C64::new(c0, 0.5 * rho), C64::new(cc, 0.0), z, acc())?
        * (2.0 * abs_gamma_ln(C64::new(c0, 0.5 * rho))?).exp();
    let g = Guard::new();
    let f = |u: f64| {
        let s = u.exp();
        let osc = match parity {
            Parity::Even => (s * xt).cos(),
            Parity::Odd if xt == 0.0 => s,
            Parity::Odd => (s * xt).sin() / xt,
        };
        g.val(k_imag(rho, s * yt).map(|k| C64::new((0.5 * u).exp() * k * osc, 0.0)))
    };
    let q = g.done(integrate_pieces(f, &breaks_step(-75.0, (40.0 / yt).ln(), 1.0), Tolerance::new(1e-14, 1e-12)))?;
    let id = match parity {
        Parity::Even => "ho_eq_s_integral_cos",
        Parity::Odd => "ho_eq_s_integral_sin",
    };
    let ps = params(vec![("rho", rho.into()), ("xt", xt.into()), ("yt", yt.into()), ("parity", parity.into())]);
    Ok(IdentityReport::new(id, FAMILY_HOEQ, q.value * pre, rhs, 1e-6, q.err_est * pre, ps))
}

/// Half-width of a ν-window outside which 𝒰-type integrands (envelope
/// e^{−π|ν|/2}·|ν|^{power}) stay below e^{−35}.
fn u_window(rho: f64, power: f64) -> f64 {
    rho + (2.0 / PI) * (35.0 + power * (rho + 10.0).ln())
}

/// ∫𝒰^{m(±)}_{ρν} conj(𝒰^{m'(±)}_{ρν}) dν = (δ_{mm'} ± δ_{m,−m'})/2.
pub fn check_u_orthogonality(rho: f64, m: i64, mp: i64, parity: Parity) -> Result<IdentityReport> {
    let g = Guard::new();
    let f = |nu: f64| g.val((|| -> Result<C64> { Ok(coeff_u(rho, nu, m, parity)?.value * coeff_u(rho, nu, mp, parity)?.value.conj()) })());
    let w = u_window(rho, (m.unsigned_abs() + mp.unsigned_abs() + 2) as f64);
    let q = g.done(integrate_pieces(f, &breaks_step(-w, w, (w / 24.0).max(1.0)), Tolerance::new(1e-13, 1e-11)))?;
    let target = 0.5 * (delta(m == mp) + parity.sign() * delta(m == -mp));
    let ps = params(vec![("rho", rho.into()), ("m", m.into()), ("mp", mp.into()), ("parity", parity.into())]);
    Ok(IdentityReport::new("u_orthogonality", FAMILY_U, q.value, C64::new(target, 0.0), 1e-7, q.err_est, ps))
}

/// Above this |s| the Laguerre series loses digits to cancellation (terms
/// grow like e^{|s|}|s|^{|m|} while 𝒱 decays like e^{−|s|}).
const V_SERIES_MAX_S: f64 = 4.0;

/// 𝒱^m_{ρs}: the Laguerre series near the origin, the circle projection
/// (radius 1/2) further out.
fn v_value(rho: f64, s: f64, m: i64) -> Result<C64> {
    if s.abs() <= V_SERIES_MAX_S {
        Ok(coeff_v_series(rho, s, m, acc())?.value)
    } else {
        Ok(coeff_v_phi_integral(rho, s, m, 0.5, Tolerance::new(1e-14, 1e-10))?.value)
    }
}

/// 𝒱^m decays like |s|^{|m|}e^{−|s|}; the upper cut keeps |𝒱|²|s| below ~e^{−37}.
fn v_breaks(mmax: u64) -> Vec<f64> {
    let top = 18.0 + 4.0 * mmax as f64;
    let mut b = breaks_step(-36.0, V_SERIES_MAX_S.ln(), 1.0);
    b.extend(breaks_step(V_SERIES_MAX_S.ln(), top.ln(), 0.25).into_iter().skip(1));
    b
}

/// ∫𝒱^m_{ρs} conj(𝒱^{m'}_{ρs}) ds = δ_{mm'}, split at s = 0 and integrated in
/// ln|s|; 𝒱 is bounded at the origin and decays like e^{−|s|}.
pub fn check_v_orthogonality(rho: f64, m: i64, mp: i64) -> Result<IdentityReport> {
    let g = Guard::new();
    let f = |u: f64| {
        let a = u.exp();
        g.val((|| -> Result<C64> {
            let mut sum = C64::new(0.0, 0.0);
            for s in [a, -a] {
                sum += v_value(rho, s, m)? * v_value(rho, s, mp)?.conj();
            }
            Ok(sum * a)
        })())
    };
    let q = g.done(integrate_pieces(f, &&v_breaks(m.unsigned_abs().max(mp.unsigned_abs())), Tolerance::new(1e-13, 1e-11)))?;
    let ps = params(vec![("rho", rho.into()), ("m", m.into()), ("mp", mp.into())]);
    Ok(IdentityReport::new("v_orthogonality", FAMILY_V, q.value, C64::new(delta(m == mp), 0.0), 1e-7, q.err_est, ps))
}

fn mb_weight(rho: f64, nu: f64) -> Result<f64> {
    Ok((2.0 * (abs_gamma_ln(C64::new(0.25, 0.5 * (rho - nu)))? + abs_gamma_ln(C64::new(0.25, 0.5 * (rho + nu)))?)).exp())
}

/// ∫|Γ(1/4+i(ρ−ν)/2)Γ(1/4+i(ρ+ν)/2)|² dν = 4π²|Γ(1/2+iρ)|².
pub fn check_mellin_barnes(rho: f64) -> Result<IdentityReport> {
    let g = Guard::new();
    let f = |nu: f64| g.val(mb_weight(rho, nu).map(|v| C64::new(v, 0.0)));
    let w = rho.abs() + 14.0;
    let q = g.done(integrate_pieces(f, &breaks_step(-w, w, 1.0), Tolerance::new(1e-14, 1e-12)))?;
    let rhs = (2.0 * (2.0 * PI).ln() + 2.0 * abs_gamma_ln(C64::new(0.5, rho))?).exp();
    let ps = params(vec![("rho", rho.into())]);
    Ok(IdentityReport::new("mellin_barnes", FAMILY_MB, q.value, C64::new(rhs, 0.0), 1e-8, q.err_est, ps))
}

/// P_{−1/2+iρ}(cosh τ₂) = (1/4π²)∫|Γ(1/4+i(ρ−ν)/2)Γ(1/4+i(ρ+ν)/2)|²/|Γ(1/2+iρ)|² e^{iντ₂} dν.
pub fn check_legendre_fourier(rho: f64, tau2: f64) -> Result<IdentityReport> {
    let lhs = conical_legendre(0, rho, tau2.abs(), acc())?;
    let ln_g = 2.0 * abs_gamma_ln(C64::new(0.5, rho))?;
    let g = Guard::new();
    let f = |nu: f64| g.val(mb_weight(rho, nu).map(|v| C64::from_polar(v, nu * tau2)));
    let w = rho.abs() + 14.0;
    let q = g.done(integrate_pieces(f, &breaks_step(-w, w, 0.5), Tolerance::new(1e-14, 1e-12)))?;
    let scale = (-ln_g).exp() / (4.0 * PI * PI);
    let ps = params(vec![("rho", rho.into()), ("tau2", tau2.into())]);
    Ok(IdentityReport::new("legendre_fourier", FAMILY_MB, C64::new(lhs, 0.0), q.value * scale, 1e-8, q.err_est * scale, ps))
}

/// Closed form of ∫₁^∞ P^{|m|}P^{|m'|} dz/(z²−1) for conical functions.
pub fn legendre_measure_closed(rho: f64, m: i64, mp: i64) -> Result<C64> {
    let (a, b) = (m.unsigned_abs() as f64, mp.unsigned_abs() as f64);
    if a == 0.0 || b == 0.0 {
        return Err(Error::Domain("legendre measure needs |m|, |m'| >= 1".into()));
    }
    if a == b {
        // the boundary term of the Wronskian at z → ∞ contributes the digamma sum
        let sum: f64 = (1..=a as u32).map(|j| 1.0 / ((j as f64 - 0.5).powi(2) + rho * rho)).sum();
        let lead = 0.5 * (PI.ln() - ln_cosh(PI * rho)).exp();
        let digamma = if rho == 0.0 { 0.0 } else { rho * (-ln_sinh(PI * rho)).exp() * sum };
        let v = (lead - digamma) * (-a.ln() - 2.0 * abs_gamma_ln(C64::new(0.5 - a, rho))?).exp();
        return Ok(C64::new(v, 0.0));
    }
    let sg = |k: f64| if (k as i64) % 2 == 0 { 1.0 } else { -1.0 };
    let t1 = (log_gamma(C64::new(0.5 + a, -rho))? - log_gamma(C64::new(0.5 - b, -rho))?).exp() * sg(a);
    let t2 = (log_gamma(C64::new(0.5 + b, -rho))? - log_gamma(C64::new(0.5 - a, -rho))?).exp() * sg(b);
    let coth = 1.0 / (PI * rho).tanh();
    Ok(C64::new(0.0, coth / PI / (a * a - b * b)) * (t1 - t2))
}

/// Conical functions of equal degree and different order integrated with the
/// measure dz/(z²−1).
pub fn check_legendre_measure(rho: f64, m: i64, mp: i64) -> Result<IdentityReport> {
    let rhs = legendre_measure_closed(rho, m, mp)?;
    let (a, b) = (m.unsigned_abs() as u32, mp.unsigned_abs() as u32);
    let g = Guard::new();
    let f = |t: f64| {
        g.val((|| -> Result<C64> { Ok(C64::new(conical_legendre(a, rho, t, acc())? * conical_legendre(b, rho, t, acc())? / t.sinh(), 0.0)) })())
    };
    let br = [0.0, 0.25, 0.5, 1.0, 1.5, 2.0, 3.0, 4.0, 5.5, 7.5, 10.0, 14.0, 19.0, 26.0, 40.0];
    let q = g.done(integrate_pieces(f, &br, Tolerance::new(1e-14, 1e-12)))?;
    let ps = params(vec![("rho", rho.into()), ("m", m.into()), ("mp", mp.into())]);
    let id = if a == b { "legendre_measure_diagonal" } else { "legendre_measure" };
    Ok(IdentityReport::new(id, FAMILY_P, q.value, rhs, 1e-7, q.err_est, ps))
}

/// Number of terms kept in the ν = 0 sum rules.
pub const SUM_RULE_TERMS: usize = 20;

/// ν = 0 sum rules at φ = π/2: the equidistant ν = 0 radial function
/// expanded over conical functions of even (parity +) or odd (parity −) order.
pub fn check_sum_rule(rho: f64, tau: f64, parity: Parity) -> Result<IdentityReport> {
    let z = -tau.sinh().powi(2);
    let terms: Vec<f64> = match parity {
        Parity::Even => (0..SUM_RULE_TERMS)
            .map(|n| {
                let nf = n as f64;
                let w = if n == 0 { 1.0 } else { 2.0 };
                let sg = if n % 2 == 0 { 1.0 } else { -1.0 };
                let lg = 2.0 * abs_gamma_ln(C64::new(0.25 - nf, 0.5 * rho))? - 2.0 * nf * LN_2;
                Ok(w * sg * lg.exp() * conical_legendre(2 * n as u32, rho, tau, acc())?)
            })
            .collect::<Result<_>>()?,
        Parity::Odd => (0..SUM_RULE_TERMS)
            .map(|n| {
                let nf = n as f64;
                let sg = if n % 2 == 0 { -1.0 } else { 1.0 };
                let lg = 2.0 * abs_gamma_ln(C64::new(-0.25 - nf, 0.5 * rho))? - 2.0 * nf * LN_2 - LN_2;
                Ok(sg * lg.exp() * conical_legendre(2 * n as u32 + 1, rho, tau, acc())?)
            })
            .collect::<Result<_>>()?,
    };
    let rhs: f64 = terms.iter().sum();
    let lhs = match parity {
        Parity::Even => {
            gauss_2f1(C64::new(0.25, -0.5 * rho), C64::new(0.25, 0.5 * rho), C64::new(0.5, 0.0), z, acc())?
                * (2.0 * abs_gamma_ln(C64::new(0.25, 0.5 * rho))?).exp()
        }
        Parity::Odd => {
            gauss_2f1(C64::new(0.75, -0.5 * rho), C64::new(0.75, 0.5 * rho), C64::new(1.5, 0.0), z, acc())?
                * (2.0 * abs_gamma_ln(C64::new(0.75, 0.5 * rho))?).exp()
                * tau.sinh()
        }
    };
    // geometric tail from the ratio of the last two terms
    let n = terms.len();
    let (t1, t0) = (terms[n - 1].abs(), terms[n - 2].abs());
    let r = if t0 > 0.0 { t1 / t0 } else { 0.0 };
    let tail = if r < 1.0 { t1 * r / (1.0 - r) } else { f64::INFINITY };
    let id = match parity {
        Parity::Even => "sum_rule_even",
        Parity::Odd => "sum_rule_odd",
    };
    let mut ps = params(vec![("rho", rho.into()), ("tau", tau.into()), ("terms", (n as i64).into())]);
    ps.insert("tail_bound".into(), tail.into());
    Ok(IdentityReport::new(id, FAMILY_SUM, lhs, C64::new(rhs, 0.0), 1e-6, tail, ps))
}

/// Closed-form squared norm h_n of Wilson polynomials for the weight
/// (1/2π)|Γ(α+ix)Γ(β+ix)Γ(γ+ix)Γ(δ+ix)/Γ(2ix)|² on x > 0.
pub fn wilson_norm(n: u32, a: C64, b: C64, c: C64, d: C64) -> Result<C64> {
    let nf = n as f64;
    let s = a + b + c + d;
    let mut poch = C64::new(1.0, 0.0);
    for k in 0..n {
        poch *= s + nf - 1.0 + k as f64;
    }
    let mut ln = C64::new(crate::specfun::ln_gamma_real(nf + 1.0)?, 0.0);
    for p in [a + b, a + c, a + d, b + c, b + d, c + d] {
        ln += log_gamma(p + nf)?;
    }
    ln -= log_gamma(s + 2.0 * nf)?;
    Ok(poch * ln.exp())
}

fn wilson_ln_weight(x: f64, a: C64, b: C64, c: C64, d: C64) -> Result<f64> {
    let ix = |p: C64| C64::new(p.re, p.im + x);
    let mut ln = 2.0 * (abs_gamma_ln(ix(a))? + abs_gamma_ln(ix(b))? + abs_gamma_ln(ix(c))?);
    if d == C64::new(0.0, 0.0) {
        // |Γ(ix)/Γ(2ix)|² = 4 cosh πx
        ln += (4.0f64).ln() + ln_cosh(PI * x);
    } else {
        // 1/|Γ(2ix)|² = 2x sinh(2πx)/π
        ln += 2.0 * abs_gamma_ln(ix(d))? + (2.0 * x).ln() + ln_sinh(2.0 * PI * x) - PI.ln();
    }
    Ok(ln)
}

/// Normalized Wilson inner product ⟨W_n, W_n'⟩/√(h_n h_n') against δ_{nn'}.
pub fn check_wilson_orthogonality(n: u32, np: u32, a: C64, b: C64, c: C64, d: C64) -> Result<IdentityReport> {
    let hn = wilson_norm(n, a, b, c, d)?;
    let hp = wilson_norm(np, a, b, c, d)?;
    let g = Guard::new();
    let f = |x: f64| {
        g.val((|| -> Result<C64> {
            let x2 = x * x;
            let w = wilson_ln_weight(x, a, b, c, d)?.exp();
            Ok(wilson_poly(n, x2, a, b, c, d)? * wilson_poly(np, x2, a, b, c, d)? * w)
        })())
    };
    let q = g.done(integrate_decay(f, 0.0, 2.0, Tolerance::new(1e-13, 1e-12)))?;
    let norm = (hn * hp).sqrt();
    let lhs = q.value / (2.0 * PI) / norm;
    let ps = params(vec![
        ("n", n.into()),
        ("np", np.into()),
        ("alpha_re", a.re.into()),
        ("rho", (2.0 * a.im).into()),
        ("gamma", c.re.into()),
        ("delta", d.re.into()),
        ("h_n", hn.re.into()),
    ]);
    let err = q.err_est / (2.0 * PI) / norm.norm();
    Ok(IdentityReport::new("wilson_orthogonality", FAMILY_WILSON, lhs, C64::new(delta(n == np), 0.0), 1e-8, err, ps))
}

/// Wilson parameters (α, β, γ, δ) housing 𝒰^{m(±)}: the Gaussian factor
/// c = 1/4 or 3/4 with δ = 0 or 1.
pub fn wilson_family(rho: f64, parity: Parity, even_m: bool) -> (C64, C64, C64, C64) {
    let c = match parity {
        Parity::Even => 0.25,
        Parity::Odd => 0.75,
    };
    let d = match (parity, even_m) {
        (Parity::Even, true) | (Parity::Odd, false) => 0.0,
        _ => 1.0,
    };
    let a = C64::new(c, 0.5 * rho);
    (a, a.conj(), C64::new(0.5, 0.0), C64::new(d, 0.0))
}

/// Gaussian window used for every smeared delta check.
fn window(x: f64, x0: f64, w: f64) -> f64 {
    let d = (x - x0) / w;
    (-0.5 * d * d).exp()
}

/// Half-width of the spectral window, in units of the Gaussian width.
const SMEAR_HALF: f64 = 7.0;

struct Smeared {
    value: C64,
    err: f64,
    tail: f64,
}

/// ∫dt μ(t) Σ_p fixed_p(t) conj(∫dx' g(x') moving_p(x', t)).
/// With `half_line` the first break is a true endpoint rather than a cut.
///
/// The inner spectral integral localizes the outer integrand to a Gaussian
/// envelope of width ~1/w in t, so the outer range is finite; `freq(t)` is the
/// oscillation rate of `moving` in x' at fixed t and sets the inner panel size.
fn smeared_overlap<FX, FM, FQ, FF>(
    x0: f64,
    w: f64,
    fixed: FX,
    moving: FM,
    measure: FQ,
    freq: FF,
    breaks: &[f64],
    half_line: bool,
) -> Result<Smeared>
where
    FX: Fn(f64) -> Result<[C64; 2]>,
    FM: Fn(f64, f64) -> Result<[C64; 2]>,
    FQ: Fn(f64) -> f64,
    FF: Fn(f64) -> f64,
{
    let lo = x0 - SMEAR_HALF * w;
    let hi = x0 + SMEAR_HALF * w;
    let outer_g = Guard::new();
    let h = |t: f64| -> Result<C64> {
        let fx = fixed(t)?;
        let inner_g = Guard::new();
        let inner = |xp: f64| {
            inner_g.val(moving(xp, t).map(|mv| (fx[0].conj() * mv[0] + fx[1].conj() * mv[1]) * window(xp, x0, w)))
        };
        let pieces = ((hi - lo) * (freq(t) + 1.0) / PI).ceil().max(1.0);
        let br = breaks_step(lo, hi, (hi - lo) / pieces);
        let q = inner_g.done(integrate_pieces(inner, &br, Tolerance::new(1e-12, 1e-9)))?;
        Ok(q.value.conj() * measure(t))
    };
    let f = |t: f64| outer_g.val(h(t));
    let q = outer_g.done(integrate_pieces(f, breaks, Tolerance::new(1e-9, 1e-8)))?;
    // Gaussian tail past each end: ∫_L^∞ e^{−w²t²/2} ≤ e^{−w²L²/2}/(w²L)
    let mut tail = 0.0;
    let ends = if half_line { &breaks[breaks.len() - 1..] } else { &[breaks[0], breaks[breaks.len() - 1]][..] };
    for &t in ends {
        let v = h(t).map(|v| v.norm()).unwrap_or(f64::INFINITY);
        tail += v / (w * w * t.abs().max(1.0));
    }
    Ok(Smeared { value: q.value, err: q.err_est, tail })
}

fn check_smeared_args(rho0: f64, width: f64) -> Result<()> {
    if !(0.05..=0.5).contains(&width) {
        return Err(Error::Domain(format!("smearing width {width} outside [0.05, 0.5]")));
    }
    if !(rho0 >= 3.0 * width) {
        return Err(Error::Domain(format!("rho0 = {rho0} must be at least three widths")));
    }
    Ok(())
}

/// Outer range for a smeared check: Gaussian envelope below e^{−32}.
fn smear_reach(width: f64) -> f64 {
    8.0 / width + 5.0
}

/// The equidistant quantum number used by the smeared equidistant checks.
pub const SMEAR_NU: f64 = 1.0;

/// Weak-sense continuum normalization. The basis selects the family:
/// horocyclic → Macdonald functions K_{iρ}(y) with dy/y; pseudo-spherical →
/// conical functions of order 0 (parity +) or 1 (parity −) with dz; the
/// even/odd equidistant families with cosh τ₁ dτ₁ at ν = 1; and for the (1,2)
/// family the mutual overlap of ψ^{(1)} and ψ^{(2)}, whose target is zero.
pub fn check_smeared_delta(basis: Basis, parity: Parity, rho0: f64, width: f64) -> Result<IdentityReport> {
    check_smeared_args(rho0, width)?;
    let reach = smear_reach(width);
    let zero2 = C64::new(0.0, 0.0);
    let (id, sm, target) = match basis {
        Basis::Ho => {
            let f = |rho: f64, u: f64| -> Result<[C64; 2]> {
                let n = (0.5 * (LN_2 + rho.ln() + ln_sinh(PI * rho)) - PI.ln()).exp();
                Ok([C64::new(n * k_imag(rho, u.exp())?, 0.0), zero2])
            };
            let br = breaks_step(-reach, 40f64.ln(), 1.0);
            let sm = smeared_overlap(rho0, width, |u| f(rho0, u), f, |_| 1.0, |u| u.abs() + 2.0, &br, false)?;
            ("smeared_macdonald", sm, 1.0)
        }
        Basis::Ps => {
            let m: u32 = if parity == Parity::Even { 0 } else { 1 };
            let f = move |rho: f64, t: f64| -> Result<[C64; 2]> {
                let ln_n = abs_gamma_ln(C64::new(0.5 - m as f64, rho))? + 0.5 * (rho.ln() + ln_sinh(PI * rho) - PI.ln());
                Ok([C64::new(ln_n.exp() * conical_legendre(m, rho, t, acc())?, 0.0), zero2])
            };
            let br = breaks_step(0.0, reach, 1.0);
            let sm = smeared_overlap(rho0, width, |t| f(rho0, t), f, |t: f64| t.sinh(), |t| t + 2.0, &br, true)?;
            ("smeared_mehler", sm, 1.0)
        }
        Basis::EqEven | Basis::EqOdd => {
            let p = if basis == Basis::EqEven { Parity::Even } else { Parity::Odd };
            let f = move |rho: f64, t: f64| -> Result<[C64; 2]> {
                let n = ln_norm_eq(1.0, rho, SMEAR_NU, p)?.exp();
                Ok([psi_eq_radial(rho, SMEAR_NU, p, t)? * n, zero2])
            };
            let br = breaks_step(0.0, reach, 1.0);
            // the integrand is even in τ₁: twice the half line
            let sm = smeared_overlap(rho0, width, |t| f(rho0, t), f, |t: f64| 2.0 * t.cosh(), |t| t + 2.0, &br, true)?;
            let id = if p == Parity::Even { "smeared_eq_even" } else { "smeared_eq_odd" };
            (id, sm, 1.0)
        }
        Basis::Eq1 | Basis::Eq2 => {
            let (a, b) = if basis == Basis::Eq1 { (1u8, 2u8) } else { (2u8, 1u8) };
            let f = move |which: u8, rho: f64, t: f64| -> Result<[C64; 2]> {
                let n = ln_norm_eq12(1.0, rho, SMEAR_NU).exp();
                Ok([psi_eq12_radial(rho, SMEAR_NU, which, t)? * n, zero2])
            };
            let br = breaks_step(-reach, reach, 1.0);
            let sm = smeared_overlap(
                rho0,
                width,
                |t| f(a, rho0, t),
                |r, t| f(b, r, t),
                |t: f64| t.cosh(),
                |t| t.abs() + 2.0,
                &br,
                false,
            )?;
            ("eq12_mutual", sm, 0.0)
        }
    };
    let mut ps = params(vec![
        ("basis", basis.name().into()),
        ("parity", parity.into()),
        ("rho0", rho0.into()),
        ("width", width.into()),
    ]);
    ps.insert("tail_bound".into(), sm.tail.into());
    Ok(IdentityReport::new(id, FAMILY_DELTA, sm.value, C64::new(target, 0.0), 1e-2, sm.err + sm.tail, ps))
}

/// 𝒲-orthogonality in s, smeared over ν': ∫ds 𝒲^{ν₀(p)}_{ρs} conj(𝒲^{ν'(q)}_{ρs})
/// against δ_{pq}·δ(ν₀−ν').
pub fn check_w_orthogonality(rho: f64, nu0: f64, p: Parity, q: Parity, width: f64) -> Result<IdentityReport> {
    if !(0.05..=0.5).contains(&width) {
        return Err(Error::Domain(format!("smearing width {width} outside [0.05, 0.5]")));
    }
    let f = |nu: f64, par: Parity, u: f64| -> Result<[C64; 2]> {
        let a = u.exp();
        let j = (0.5 * u).exp();
        Ok([coeff_w(rho, a, nu, par)?.value * j, coeff_w(rho, -a, nu, par)?.value * j])
    };
    let reach = smear_reach(width);
    let br = breaks_step(LN_2 - reach, LN_2 + reach, 1.0);
    let sm = smeared_overlap(nu0, width, |u| f(nu0, p, u), |nu, u| f(nu, q, u), |_| 1.0, |u| (u - LN_2).abs() + 3.0, &br, false)?;
    let id = if p == q { "w_orthogonality_s" } else { "w_cross_s" };
    let mut ps = params(vec![
        ("rho", rho.into()),
        ("nu0", nu0.into()),
        ("parity", p.into()),
        ("parity_p", q.into()),
        ("width", width.into()),
    ]);
    ps.insert("tail_bound".into(), sm.tail.into());
    let target = delta(p == q);
    Ok(IdentityReport::new(id, FAMILY_W, sm.value, C64::new(target, 0.0), 1e-2, sm.err + sm.tail, ps))
}

/// 𝒲-completeness in ν, smeared over s':
/// ∫dν Σ_± 𝒲^{ν(±)}_{ρs₀} conj(𝒲^{ν(±)}_{ρs'}) against δ(s₀−s').
pub fn check_w_completeness(rho: f64, s0: f64, width: f64) -> Result<IdentityReport> {
    if !(0.05..=0.5).contains(&width) || !(s0.abs() >= 3.0 * width) {
        return Err(Error::Domain("completeness check needs |s0| >= 3 widths and width in [0.05, 0.5]".into()));
    }
    let f = |s: f64, nu: f64| -> Result<[C64; 2]> {
        Ok([coeff_w(rho, s, nu, Parity::Even)?.value, coeff_w(rho, s, nu, Parity::Odd)?.value])
    };
    let reach = smear_reach(width) * s0.abs();
    let br = breaks_step(-reach, reach, 1.0);
    let sm = smeared_overlap(s0, width, |nu| f(s0, nu), f, |_| 1.0, |nu| nu.abs() / (s0.abs() - SMEAR_HALF * width) + 1.0, &br, false)?;
    let mut ps = params(vec![("rho", rho.into()), ("s0", s0.into()), ("width", width.into())]);
    ps.insert("tail_bound".into(), sm.tail.into());
    Ok(IdentityReport::new("w_completeness_nu", FAMILY_W, sm.value, C64::new(1.0, 0.0), 1e-2, sm.err + sm.tail, ps))
}

/// The canonical parameter grid.
pub const GRID_RHO: [f64; 3] = [0.5, 1.0, 2.0];
pub const GRID_S: [f64; 6] = [-2.0, -1.0, -0.5, 0.5, 1.0, 2.0];
pub const GRID_NU: [f64; 5] = [-2.5, -1.0, 0.0, 1.0, 2.5];
pub const GRID_M: [i64; 7] = [-2, -1, 0, 1, 2, 3, 4];
pub const SMEAR_WIDTH: f64 = 0.1;

type Job = Box<dyn Fn() -> Result<IdentityReport> + Send + Sync>;

struct Entry {
    id: &'static str,
    family: &'static str,
    tol: f64,
    params: Params,
    run: Job,
}

fn entry(id: &'static str, family: &'static str, tol: f64, params: Params, run: Job) -> Entry {
    Entry { id, family, tol, params, run }
}

fn registry() -> Vec<Entry> {
    let mut v = Vec::new();
    let parities = [Parity::Even, Parity::Odd];
    for &rho in &GRID_RHO {
        for (xt, yt) in [(0.0, 1.0), (0.5, 1.0), (1.0, 2.0)] {
            let ps = params(vec![("rho", rho.into()), ("xt", xt.into()), ("yt", yt.into())]);
            v.push(entry("macdonald_product", FAMILY_K, 1e-8, ps, Box::new(move || check_macdonald_product(rho, xt, yt))));
        }
    }
    for &rho in &GRID_RHO {
        for &s in &GRID_S {
            for p in parities {
                let id = if p == Parity::Even { "ho_eq_expansion_cos" } else { "ho_eq_expansion_sin" };
                let ps = params(vec![("rho", rho.into()), ("s", s.into()), ("parity", p.into())]);
                v.push(entry(id, FAMILY_HOEQ, 1e-6, ps, Box::new(move || check_ho_in_eq_expansion(rho, s, 0.5, 1.0, p))));
            }
        }
        for (xt, yt) in [(0.5, 1.0), (1.0, 2.0)] {
            for p in parities {
                let id = if p == Parity::Even { "ho_eq_s_integral_cos" } else { "ho_eq_s_integral_sin" };
                let ps = params(vec![("rho", rho.into()), ("xt", xt.into()), ("yt", yt.into()), ("parity", p.into())]);
                v.push(entry(id, FAMILY_HOEQ, 1e-6, ps, Box::new(move || check_ho_in_eq_part(rho, xt, yt, p))));
            }
        }
    }
    let u_pairs = [(0, 0), (1, 1), (1, -1), (2, 2), (2, -2), (1, 3), (1, 2), (3, 4), (4, 4), (0, 4), (-1, 3)];
    for &rho in &GRID_RHO {
        for (m, mp) in u_pairs {
            for p in parities {
                let ps = params(vec![("rho", rho.into()), ("m", m.into()), ("mp", mp.into()), ("parity", p.into())]);
                v.push(entry("u_orthogonality", FAMILY_U, 1e-7, ps, Box::new(move || check_u_orthogonality(rho, m, mp, p))));
            }
        }
    }
    let v_pairs = [(0, 0), (1, 1), (1, -1), (2, 2), (-2, -2), (0, 2), (1, 3), (3, 3), (4, 4)];
    for &rho in &GRID_RHO {
        for (m, mp) in v_pairs {
            let ps = params(vec![("rho", rho.into()), ("m", m.into()), ("mp", mp.into())]);
            v.push(entry("v_orthogonality", FAMILY_V, 1e-7, ps, Box::new(move || check_v_orthogonality(rho, m, mp))));
        }
    }
    for rho in [0.0, 0.5, 1.0, 2.0] {
        let ps = params(vec![("rho", rho.into())]);
        v.push(entry("mellin_barnes", FAMILY_MB, 1e-8, ps, Box::new(move || check_mellin_barnes(rho))));
    }
    for &rho in &GRID_RHO {
        for tau2 in [0.0, 0.5, 1.5] {
            let ps = params(vec![("rho", rho.into()), ("tau2", tau2.into())]);
            v.push(entry("legendre_fourier", FAMILY_MB, 1e-8, ps, Box::new(move || check_legendre_fourier(rho, tau2))));
        }
    }
    for &rho in &GRID_RHO {
        for (m, mp) in [(1, 1), (2, 2), (3, 3), (1, 3), (1, 2), (2, 4), (3, 1)] {
            let id = if m == mp { "legendre_measure_diagonal" } else { "legendre_measure" };
            let ps = params(vec![("rho", rho.into()), ("m", m.into()), ("mp", mp.into())]);
            v.push(entry(id, FAMILY_P, 1e-7, ps, Box::new(move || check_legendre_measure(rho, m, mp))));
        }
    }
    for &rho in &GRID_RHO {
        for tau in [0.3, 0.8, 1.5] {
            for p in parities {
                let id = if p == Parity::Even { "sum_rule_even" } else { "sum_rule_odd" };
                let ps = params(vec![("rho", rho.into()), ("tau", tau.into()), ("terms", (SUM_RULE_TERMS as i64).into())]);
                v.push(entry(id, FAMILY_SUM, 1e-6, ps, Box::new(move || check_sum_rule(rho, tau, p))));
            }
        }
    }
    for rho in [0.5, 2.0] {
        for p in parities {
            for even_m in [true, false] {
                let (a, b, c, d) = wilson_family(rho, p, even_m);
                for (n, np) in [(0u32, 1u32), (1, 1), (1, 2), (2, 2)] {
                    let ps = params(vec![
                        ("n", n.into()),
                        ("np", np.into()),
                        ("alpha_re", a.re.into()),
                        ("rho", rho.into()),
                        ("gamma", c.re.into()),
                        ("delta", d.re.into()),
                    ]);
                    v.push(entry(
                        "wilson_orthogonality",
                        FAMILY_WILSON,
                        1e-8,
                        ps,
                        Box::new(move || check_wilson_orthogonality(n, np, a, b, c, d)),
                    ));
                }
            }
        }
    }
    for rho0 in [1.0, 2.0] {
        for (basis, p) in [
            (Basis::Ho, Parity::Even),
            (Basis::Ps, Parity::Even),
            (Basis::Ps, Parity::Odd),
            (Basis::EqEven, Parity::Even),
            (Basis::EqOdd, Parity::Odd),
            (Basis::Eq1, Parity::Even),
        ] {
            let id = match basis {
                Basis::Ho => "smeared_macdonald",
                Basis::Ps => "smeared_mehler",
                Basis::EqEven => "smeared_eq_even",
                Basis::EqOdd => "smeared_eq_odd",
                _ => "eq12_mutual",
            };
            let ps = params(vec![
                ("basis", basis.name().into()),
                ("parity", p.into()),
                ("rho0", rho0.into()),
                ("width", SMEAR_WIDTH.into()),
            ]);
            v.push(entry(id, FAMILY_DELTA, 1e-2, ps, Box::new(move || check_smeared_delta(basis, p, rho0, SMEAR_WIDTH))));
        }
    }
    for (p, q) in [(Parity::Even, Parity::Even), (Parity::Odd, Parity::Odd), (Parity::Even, Parity::Odd), (Parity::Odd, Parity::Even)] {
        let id = if p == q { "w_orthogonality_s" } else { "w_cross_s" };
        let ps = params(vec![("rho", 1.0.into()), ("nu0", 1.0.into()), ("parity", p.into()), ("parity_p", q.into())]);
        v.push(entry(id, FAMILY_W, 1e-2, ps, Box::new(move || check_w_orthogonality(1.0, 1.0, p, q, SMEAR_WIDTH))));
    }
    for s0 in [-1.0, 1.0] {
        let ps = params(vec![("rho", 1.0.into()), ("s0", s0.into())]);
        v.push(entry("w_completeness_nu", FAMILY_W, 1e-2, ps, Box::new(move || check_w_completeness(1.0, s0, SMEAR_WIDTH))));
    }
    v
}

/// Family names known to the suite, in registration order.
pub fn families() -> Vec<&'static str> {
    vec![FAMILY_K, FAMILY_HOEQ, FAMILY_U, FAMILY_V, FAMILY_MB, FAMILY_P, FAMILY_SUM, FAMILY_WILSON, FAMILY_DELTA, FAMILY_W]
}

/// A filter is `*` (everything) or a comma-separated list of family names
/// or check ids.
pub fn filter_matches(filter: &str, family: &str, id: &str) -> bool {
    filter
        .split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .any(|t| t == "*" || t == family || t == id)
}

/// Run every registered check that matches `filter` over the canonical grid.
/// Checks run concurrently; the result is ordered by id, then by grid
/// position, and is bit-identical between runs.
pub fn run_suite(filter: &str) -> Vec<IdentityReport> {
    let jobs: Vec<Entry> = registry().into_iter().filter(|e| filter_matches(filter, e.family, e.id)).collect();
    let mut out: Vec<IdentityReport> = jobs
        .par_iter()
        .map(|e| match (e.run)() {
            Ok(r) => r,
            Err(err) => IdentityReport::failed(e.id, e.family, e.tol, e.params.clone(), &err),
        })
        .collect();
    out.sort_by(|a, b| a.id.cmp(&b.id));
    out
}

/// Number of checks `run_suite(filter)` would execute.
pub fn suite_size(filter: &str) -> usize {
    registry().iter().filter(|e| filter_matches(filter, e.family, e.id)).count()
}
