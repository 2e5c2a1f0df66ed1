//! Interbasis expansion coefficients: 𝒲 (horocyclic ↔ equidistant),
//! 𝒰 (equidistant ↔ pseudo-spherical) and 𝒱 (horocyclic ↔ pseudo-spherical),
//! with the unimodular phases F and G.

use crate::bases::Parity;
use crate::geometry::{ho_from_ps, PseudoSphericalPoint};
use crate::specfun::{
    abs_gamma_ln, arg_gamma, conical_legendre, laguerre_complex, ln_gamma_real, ln_sinh, log_gamma,
    macdonald_imag_scaled, wilson_poly, SeriesAccuracy, C64,
};
use crate::verify::quad::{integrate_decay, integrate_periodic, integrate_pieces, Tolerance};
use crate::{Error, Result};
use serde::{Deserialize, Serialize};
use std::f64::consts::{LN_2, PI};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Route {
    ClosedForm,
    Wilson,
    MuIntegral,
    LaguerreSeries,
    NuIntegral,
    PhiIntegral,
}

impl Route {
    pub fn name(&self) -> &'static str {
        match self {
            Route::ClosedForm => "closed_form",
            Route::Wilson => "wilson",
            Route::MuIntegral => "mu_integral",
            Route::LaguerreSeries => "laguerre_series",
            Route::NuIntegral => "nu_integral",
            Route::PhiIntegral => "phi_integral",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CoefficientValue {
    pub value: C64,
    pub route: Route,
    pub err_est: f64,
}

fn closed(value: C64, route: Route) -> CoefficientValue {
    CoefficientValue { value, route, err_est: 64.0 * f64::EPSILON * value.norm() }
}

fn c_of(parity: Parity) -> f64 {
    match parity {
        Parity::Even => 0.25,
        Parity::Odd => 0.75,
    }
}

/// F^{(±)}_{ρν}: unimodular, assembled from log-gamma imaginary parts.
pub fn phase_f(parity: Parity, rho: f64, nu: f64) -> Result<C64> {
    let c = c_of(parity);
    let ph = arg_gamma(C64::new(c, 0.5 * (rho - nu)))? + arg_gamma(C64::new(c, -0.5 * (rho + nu)))?;
    Ok(C64::from_polar(1.0, ph))
}

/// G^{(±)}_{ρν}: unimodular, same construction.
pub fn phase_g(parity: Parity, rho: f64, nu: f64) -> Result<C64> {
    let c = c_of(parity);
    let ph = arg_gamma(C64::new(c, -0.5 * (rho - nu)))? + arg_gamma(C64::new(c, -0.5 * (rho + nu)))?;
    Ok(C64::from_polar(1.0, ph))
}

/// 𝒲^{ν(±)}_{ρs}.
pub fn coeff_w(rho: f64, s: f64, nu: f64, parity: Parity) -> Result<CoefficientValue> {
    if s == 0.0 || !s.is_finite() {
        return Err(Error::Domain("W coefficient needs s != 0".into()));
    }
    let a = s.abs();
    let base = C64::from_polar(1.0 / (2.0 * (PI * a).sqrt()), nu * (0.5 * a).ln());
    let v = match parity {
        Parity::Even => base * phase_f(Parity::Even, rho, nu)?,
        Parity::Odd => C64::new(0.0, s.signum()) * base * phase_f(Parity::Odd, rho, nu)?,
    };
    Ok(closed(v, Route::ClosedForm))
}

/// 𝒰^{m(±)}_{ρν} through Wilson polynomials (production route).
pub fn coeff_u(rho: f64, nu: f64, m: i64, parity: Parity) -> Result<CoefficientValue> {
    let am = m.unsigned_abs();
    let amf = am as f64;
    let x2 = 0.25 * nu * nu;
    let c = c_of(parity);
    let half = C64::new(0.5, 0.0);
    let ln_g = abs_gamma_ln(C64::new(0.5 - amf, rho))?
        + abs_gamma_ln(C64::new(c, 0.5 * (nu - rho)))?
        + abs_gamma_ln(C64::new(c, 0.5 * (nu + rho)))?
        - 2.0 * abs_gamma_ln(C64::new(0.5, rho))?
        + amf * LN_2
        - 0.5 * PI.ln();
    let a = C64::new(c, 0.5 * rho);
    let b = a.conj();
    let even_m = am % 2 == 0;
    let mf = m as f64;
    let v = match (parity, even_m) {
        (Parity::Even, true) => {
            let w = wilson_poly((am / 2) as u32, x2, a, b, half, C64::new(0.0, 0.0))?;
            w * (ln_g - LN_2 - ln_gamma_real(0.5 + 0.5 * amf)?).exp()
        }
        (Parity::Even, false) => {
            let w = wilson_poly(((am - 1) / 2) as u32, x2, a, b, half, C64::new(1.0, 0.0))?;
            w * C64::new(0.0, -nu) * (ln_g - 2.0 * LN_2 - ln_gamma_real(0.5 * amf)?).exp()
        }
        (Parity::Odd, true) => {
            if am == 0 {
                C64::new(0.0, 0.0)
            } else {
                let w = wilson_poly((am / 2 - 1) as u32, x2, a, b, half, C64::new(1.0, 0.0))?;
                w * (mf * nu) * (ln_g - 3.0 * LN_2 - ln_gamma_real(0.5 + 0.5 * amf)?).exp()
            }
        }
        (Parity::Odd, false) => {
            let w = wilson_poly(((am - 1) / 2) as u32, x2, a, b, half, C64::new(0.0, 0.0))?;
            w * C64::new(0.0, mf) * (ln_g - 2.0 * LN_2 - ln_gamma_real(1.0 + 0.5 * amf)?).exp()
        }
    };
    let v = snap_conjugacy(v, am);
    Ok(closed(v, Route::Wilson))
}

/// Even m gives real 𝒰, odd m purely imaginary; rounding residue in the
/// other component is removed.
fn snap_conjugacy(v: C64, am: u64) -> C64 {
    if am % 2 == 0 {
        C64::new(v.re, 0.0)
    } else {
        C64::new(0.0, v.im)
    }
}

/// 𝒰^{0(+)}_{ρν} = |Γ(1/4+i(ν−ρ)/2)Γ(1/4+i(ν+ρ)/2)|·√(cosh πρ/(4π³)).
pub fn coeff_u_m0(rho: f64, nu: f64) -> Result<CoefficientValue> {
    let ln = abs_gamma_ln(C64::new(0.25, 0.5 * (nu - rho)))? + abs_gamma_ln(C64::new(0.25, 0.5 * (nu + rho)))?
        + 0.5 * (crate::specfun::ln_cosh(PI * rho) - 2.0 * LN_2 - 3.0 * PI.ln());
    Ok(closed(C64::new(ln.exp(), 0.0), Route::ClosedForm))
}

/// 𝒰^{m(±)}_{ρ,0} from the Saalschütz summation (nonzero parity/m pairs only).
pub fn coeff_u_nu0(rho: f64, m: i64, parity: Parity) -> Result<CoefficientValue> {
    let am = m.unsigned_abs() as f64;
    let ratio = (abs_gamma_ln(C64::new(0.25 - 0.5 * am, 0.5 * rho))? - abs_gamma_ln(C64::new(0.75 - 0.5 * am, 0.5 * rho))?)
        .exp()
        / (2.0 * PI).sqrt();
    let even_m = m % 2 == 0;
    let v = match (parity, even_m) {
        (Parity::Even, true) => C64::new(ratio, 0.0),
        (Parity::Odd, false) => C64::new(0.0, (m as f64).signum() * ratio),
        _ => C64::new(0.0, 0.0),
    };
    Ok(closed(v, Route::ClosedForm))
}

/// 𝒰^{m(±)}_{ρν} from its μ-integral representation.
pub fn coeff_u_integral(rho: f64, nu: f64, m: i64, parity: Parity, tol: Tolerance) -> Result<CoefficientValue> {
    let am = m.unsigned_abs() as f64;
    let sg = (m as f64).signum();
    let c = c_of(parity);
    let sq_phase = log_gamma(C64::new(0.5 - am, rho))?.im;
    let g_phase = log_gamma(C64::new(c, -0.5 * (rho - nu)))?.im + log_gamma(C64::new(c, -0.5 * (rho + nu)))?.im;
    // G·sq/(π 2^{iρ−1/2})
    let pref = C64::from_polar((0.5 * LN_2).exp() / PI, g_phase + sq_phase - rho * LN_2);
    let even_m = m % 2 == 0;
    let (kind, unit) = match (parity, even_m) {
        (Parity::Even, true) => (0u8, C64::new(1.0, 0.0)),
        (Parity::Even, false) => (1, C64::new(0.0, 1.0)),
        (Parity::Odd, true) => (2, C64::new(sg, 0.0)),
        (Parity::Odd, false) => (3, C64::new(0.0, -sg)),
    };
    if kind == 2 && m == 0 {
        return Ok(CoefficientValue { value: C64::new(0.0, 0.0), route: Route::MuIntegral, err_est: 0.0 });
    }
    let f = |mu: f64| {
        // arccos(tanh μ) = 2 arctan(e^{−μ})
        let theta = am * 2.0 * (-mu).exp().atan();
        let lc = crate::specfun::ln_cosh(mu);
        let env = (C64::new(-0.5, -rho) * lc).exp();
        let t = match kind {
            0 => theta.cos() * (nu * mu).cos(),
            1 => theta.cos() * (nu * mu).sin(),
            2 => theta.sin() * (nu * mu).sin(),
            _ => theta.sin() * (nu * mu).cos(),
        };
        env * t
    };
    let q = integrate_decay(f, 0.0, 4.0, tol)?;
    let v = snap_conjugacy(pref * unit * q.value, m.unsigned_abs());
    Ok(CoefficientValue { value: v, route: Route::MuIntegral, err_est: q.err_est * pref.norm() })
}

/// 𝒱^0_{ρs} = √(2/π) K_{iρ}(|s|)/|Γ(1/2+iρ)|.
pub fn coeff_v_m0(rho: f64, s: f64) -> Result<CoefficientValue> {
    if s == 0.0 {
        return Err(Error::Domain("V coefficient needs s != 0".into()));
    }
    let (mant, ln_scale) = macdonald_imag_scaled(rho, s.abs(), SeriesAccuracy::default())?;
    let v = mant * (ln_scale + 0.5 * (2.0 / PI).ln() - abs_gamma_ln(C64::new(0.5, rho))?).exp();
    Ok(closed(C64::new(v, 0.0), Route::ClosedForm))
}

/// 𝒱^m_{ρs} by the double Laguerre series.
pub fn coeff_v_series(rho: f64, s: f64, m: i64, acc: SeriesAccuracy) -> Result<CoefficientValue> {
    if s == 0.0 || !s.is_finite() {
        return Err(Error::Domain("V coefficient needs s != 0".into()));
    }
    if rho < 1e-3 {
        return Err(Error::Domain(format!(
            "Laguerre series for V is not used below rho = 1e-3 (got {rho}); use the phi-integral route"
        )));
    }
    let am = m.unsigned_abs();
    let n = u32::try_from(am).map_err(|_| Error::Domain("|m| too large".into()))?;
    let x = if m >= 0 { -s } else { s };
    let lh = (0.5 * s.abs()).ln();
    // branch +iρ; the −iρ branch is its complex conjugate
    let mut sum = C64::new(0.0, 0.0);
    let mut quiet = 0;
    let mut last_term = 0.0;
    for l in 0..acc.max_terms {
        let lf = l as f64;
        let ln_t = C64::new(2.0 * lf * lh, rho * lh) - log_gamma(C64::new(1.0 + lf, rho))? - ln_gamma_real(lf + 1.0)?;
        let lag = laguerre_complex(n, C64::new(-0.5 + 2.0 * lf, rho), x)?;
        let t = ln_t.exp() * lag;
        sum += t;
        last_term = t.norm();
        if last_term <= acc.rel_tol * sum.norm() || (sum.norm() == 0.0 && last_term == 0.0) {
            quiet += 1;
            if quiet >= 3 && lf > 2.0 * lh.exp() * lh.exp() {
                break;
            }
        } else {
            quiet = 0;
        }
        if l + 1 == acc.max_terms {
            return Err(Error::Accuracy("Laguerre series for V did not converge".into()));
        }
    }
    let sign = if am % 2 == 0 { 1.0 } else { -1.0 };
    let ln_pre = ln_gamma_real(am as f64 + 1.0)? - ln_sinh(PI * rho) + 0.5 * (0.5 * PI).ln()
        + abs_gamma_ln(C64::new(0.5 - am as f64, rho))?
        - 2.0 * abs_gamma_ln(C64::new(0.5, rho))?;
    // i·(S − S*) = −2 Im S
    let v = -2.0 * sign * sum.im * ln_pre.exp();
    let err = 2.0 * ln_pre.exp() * (last_term + 16.0 * f64::EPSILON * sum.norm());
    Ok(CoefficientValue { value: C64::new(v, 0.0), route: Route::LaguerreSeries, err_est: err })
}

/// Half-width of the ν window for the 𝒲·𝒰 integral: the product decays like
/// e^{−π(|ν|−ρ)/2}, and the window follows the conservative rule
/// ρ + (40/π)·ln(1/tol).
pub fn nu_window(rho: f64, tol: f64) -> f64 {
    rho + 40.0 / PI * (1.0 / tol).ln()
}

/// 𝒱^m_{ρs} = ∫(𝒲^{(+)}𝒰^{(+)} + 𝒲^{(−)}𝒰^{(−)}) dν.
pub fn coeff_v_nu_integral(rho: f64, s: f64, m: i64, tol: Tolerance) -> Result<CoefficientValue> {
    if s == 0.0 || !s.is_finite() {
        return Err(Error::Domain("V coefficient needs s != 0".into()));
    }
    let f = |nu: f64| -> C64 {
        let a = coeff_w(rho, s, nu, Parity::Even).and_then(|w| Ok(w.value * coeff_u(rho, nu, m, Parity::Even)?.value));
        let b = coeff_w(rho, s, nu, Parity::Odd).and_then(|w| Ok(w.value * coeff_u(rho, nu, m, Parity::Odd)?.value));
        match (a, b) {
            (Ok(a), Ok(b)) => a + b,
            _ => C64::new(f64::NAN, f64::NAN),
        }
    };
    // the integrand underflows well inside the conservative window; cut where
    // the envelope e^{−π(|ν|−ρ)/2}·|ν|^{|m|} is below tol
    let wmax = nu_window(rho, tol.abs.max(1e-300));
    let decay = rho + (2.0 / PI) * ((1.0 / tol.abs.max(1e-300)).ln() + (m.unsigned_abs() as f64 + 2.0) * (rho + 10.0).ln());
    let w = decay.min(wmax);
    let mut breaks = vec![-w];
    let step = (w / 24.0).max(1.0);
    let mut x = -w + step;
    while x < w - 0.5 * step {
        breaks.push(x);
        x += step;
    }
    breaks.push(w);
    let q = integrate_pieces(f, &breaks, tol)?;
    Ok(CoefficientValue { value: q.value, route: Route::NuIntegral, err_est: q.err_est })
}

/// 𝒱^m_{ρs} by projecting Ψ^HO onto e^{imφ} on the circle τ = τ_probe.
pub fn coeff_v_phi_integral(rho: f64, s: f64, m: i64, tau_probe: f64, tol: Tolerance) -> Result<CoefficientValue> {
    if s == 0.0 || !s.is_finite() {
        return Err(Error::Domain("V coefficient needs s != 0".into()));
    }
    if !(tau_probe > 0.0) {
        return Err(Error::Domain("probe radius must be positive".into()));
    }
    let am = u32::try_from(m.unsigned_abs()).map_err(|_| Error::Domain("|m| too large".into()))?;
    let acc = SeriesAccuracy::default();
    let p = conical_legendre(am, rho, tau_probe, acc)?;
    let ln_g = abs_gamma_ln(C64::new(0.5 - am as f64, rho))?;
    // scale by the largest |P| seen along ρ-normalization so the threshold is meaningful
    if p.abs() < 1e-8 {
        return Err(Error::ProbeDegenerate(tau_probe));
    }
    let mf = m as f64;
    let f = |phi: f64| -> C64 {
        let h = match ho_from_ps(&PseudoSphericalPoint { tau: tau_probe, phi }) {
            Ok(h) => h,
            Err(_) => return C64::new(f64::NAN, f64::NAN),
        };
        match macdonald_imag_scaled(rho, s.abs() * h.y_t, acc) {
            Ok((mant, ln_scale)) => {
                let amp = mant * (ln_scale - ln_g + 0.5 * h.y_t.ln()).exp();
                C64::from_polar(amp, s * h.x_t - mf * phi)
            }
            Err(_) => C64::new(f64::NAN, f64::NAN),
        }
    };
    let q = integrate_periodic(f, tol)?;
    let den = (2.0 * PI.powi(3)).sqrt() * p;
    let v = q.value / den;
    Ok(CoefficientValue { value: C64::new(v.re, v.im), route: Route::PhiIntegral, err_est: q.err_est / den.abs() })
}
