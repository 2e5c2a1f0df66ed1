use super::gamma::log_gamma;
use super::hyper::{gauss_2f1, gauss_2f1_near_one};
use super::{ln_cosh, SeriesAccuracy, C64};
use crate::{Error, Result};
use std::f64::consts::PI;

/// Switch point sinh(τ/2) = 1.
const TAU_SWITCH: f64 = 1.762_747_174_039_086;

/// Conical function P^m_{-1/2+iρ}(cosh τ), real for real ρ.
pub fn conical_legendre(m: u32, rho: f64, tau: f64, acc: SeriesAccuracy) -> Result<f64> {
    if !(tau >= 0.0) || !tau.is_finite() || !rho.is_finite() {
        return Err(Error::Domain(format!("conical_legendre needs finite tau >= 0, got {tau}")));
    }
    if tau == 0.0 {
        return Ok(if m == 0 { 1.0 } else { 0.0 });
    }
    let rho = rho.abs();
    // the origin series cancels like exp(2ρ tanh(τ/2)); the large-argument
    // series only needs sech²τ comfortably below one
    let use_large = rho >= 1e-3 && (tau >= TAU_SWITCH || (tau > 0.35 && 2.0 * rho * (0.5 * tau).tanh() > 6.0));
    if use_large {
        large_tau(m, rho, tau, acc)
    } else {
        small_tau(m, rho, tau, acc)
    }
}

/// Γ(1/2+iρ+m)/Γ(1/2+iρ-m), real.
fn gamma_ratio(m: u32, rho: f64) -> f64 {
    let mut r = 1.0;
    for j in 1..=m {
        let h = j as f64 - 0.5;
        r *= -(rho * rho + h * h);
    }
    r
}

pub(crate) fn small_tau(m: u32, rho: f64, tau: f64, acc: SeriesAccuracy) -> Result<f64> {
    let mf = m as f64;
    let s2 = (0.5 * tau).sinh();
    let f = gauss_2f1(
        C64::new(0.5 + mf, rho),
        C64::new(0.5 + mf, -rho),
        C64::new(1.0 + mf, 0.0),
        -s2 * s2,
        acc,
    )?;
    let mut pre = gamma_ratio(m, rho);
    let sh = tau.sinh();
    for k in 1..=m {
        pre *= sh / (2.0 * k as f64);
    }
    Ok(pre * f.re)
}

pub(crate) fn large_tau(m: u32, rho: f64, tau: f64, acc: SeriesAccuracy) -> Result<f64> {
    let mf = m as f64;
    let e2 = (-2.0 * tau).exp();
    let ln_coth = e2.ln_1p() - (-e2).ln_1p();
    let sech2 = 4.0 * e2 / ((1.0 + e2) * (1.0 + e2));
    let nu = C64::new(-0.5, rho);
    let ln_pre = nu * std::f64::consts::LN_2 + log_gamma(C64::new(0.0, rho))? - 0.5 * PI.ln()
        - log_gamma(C64::new(0.5 - mf, rho))?
        + nu * ln_cosh(tau)
        + mf * ln_coth;
    let f = gauss_2f1(
        C64::new(0.5 * (0.5 - mf), -0.5 * rho),
        C64::new(0.5 * (1.5 - mf), -0.5 * rho),
        C64::new(1.0, -rho),
        sech2,
        acc,
    )?;
    Ok(2.0 * (ln_pre.exp() * f).re)
}

/// Ferrers function P^μ_ν(x) on the cut -1 < x < 1, with 1 - x and 1 + x
/// supplied separately so that |x| → 1 keeps full accuracy.
pub fn ferrers_p_cut(mu: C64, nu: C64, one_minus_x: f64, one_plus_x: f64, acc: SeriesAccuracy) -> Result<C64> {
    if !(one_minus_x > 0.0 && one_plus_x > 0.0) {
        return Err(Error::Domain("ferrers_p_cut needs -1 < x < 1".into()));
    }
    // renormalize so that w + (1 − w) = 1 exactly; the smaller side stays exact
    let sum = one_minus_x + one_plus_x;
    let (w, omw) = if one_minus_x <= one_plus_x {
        let w = one_minus_x / sum;
        (w, 1.0 - w)
    } else {
        let omw = one_plus_x / sum;
        (1.0 - omw, omw)
    };
    let one = C64::new(1.0, 0.0);
    let f = gauss_2f1_near_one(-nu, nu + 1.0, one - mu, w, omw, acc)?;
    let ln_pre = 0.5 * mu * (one_plus_x.ln() - one_minus_x.ln()) - log_gamma(one - mu)?;
    Ok(ln_pre.exp() * f)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn apex_values() {
        let a = SeriesAccuracy::default();
        assert_eq!(conical_legendre(0, 1.0, 0.0, a).unwrap(), 1.0);
        assert_eq!(conical_legendre(2, 1.0, 0.0, a).unwrap(), 0.0);
    }

    #[test]
    fn both_regions_agree_at_switch() {
        let a = SeriesAccuracy::default();
        for m in 0..4 {
            for rho in [0.5, 1.0, 3.0] {
                for tau in [1.5, 1.8, 2.2] {
                    let s = small_tau(m, rho, tau, a).unwrap();
                    let l = large_tau(m, rho, tau, a).unwrap();
                    assert!((s - l).abs() < 1e-11 * s.abs().max(1.0), "m={m} rho={rho} tau={tau}: {s} {l}");
                }
            }
        }
    }
}
