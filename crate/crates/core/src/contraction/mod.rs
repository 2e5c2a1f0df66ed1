//! Contraction R → ∞ to the Euclidean plane: curved wavefunctions and
//! interbasis coefficients against their flat limits, with log-log rate fits.

use crate::bases::{psi_eq, psi_ho, psi_s, Parity, Quantum, SpectralParams};
use crate::geometry::{EquidistantPoint, HorocyclicPoint, PseudoSphericalPoint};
use crate::interbasis::{coeff_u, coeff_v_phi_integral, coeff_w};
use crate::specfun::{bessel_j, C64};
use crate::verify::identities::{IdentityReport, ParamValue, Params};
use crate::verify::quad::{integrate, Tolerance};
use crate::{Error, Result};
use rayon::prelude::*;
use serde::Serialize;
use std::f64::consts::PI;

const FRAC_1_SQRT_2PI: f64 = 0.398_942_280_401_432_7;

/// Flat-plane labels: wave number k and its components k₁ = k cos α, k₂ = k sin α.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FlatParams {
    pub k: f64,
    pub k1: f64,
    pub k2: f64,
    pub alpha: f64,
}

impl FlatParams {
    /// α is reduced to [−π, π).
    pub fn from_angle(k: f64, alpha: f64) -> Result<Self> {
        check_k(k)?;
        if !alpha.is_finite() {
            return Err(Error::Domain("alpha must be finite".into()));
        }
        let a = (alpha + PI).rem_euclid(2.0 * PI) - PI;
        Ok(FlatParams { k, k1: k * a.cos(), k2: k * a.sin(), alpha: a })
    }

    pub fn from_components(k1: f64, k2: f64) -> Result<Self> {
        if !(k1.is_finite() && k2.is_finite()) {
            return Err(Error::Domain("k1, k2 must be finite".into()));
        }
        let k = k1.hypot(k2);
        check_k(k)?;
        Ok(FlatParams { k, k1, k2, alpha: k2.atan2(k1) })
    }

    /// Components from k and k₁ with k₂ ≥ 0.
    pub fn from_k_k1(k: f64, k1: f64) -> Result<Self> {
        check_k(k)?;
        if !(k1.abs() <= k) {
            return Err(Error::Domain(format!("|k1| = {} exceeds k = {k}", k1.abs())));
        }
        Self::from_components(k1, (k * k - k1 * k1).sqrt())
    }

    /// Components from k and k₂ with k₁ ≥ 0.
    pub fn from_k_k2(k: f64, k2: f64) -> Result<Self> {
        check_k(k)?;
        if !(k2.abs() <= k) {
            return Err(Error::Domain(format!("|k2| = {} exceeds k = {k}", k2.abs())));
        }
        Self::from_components((k * k - k2 * k2).sqrt(), k2)
    }

    pub fn is_consistent(&self) -> bool {
        (self.k1 * self.k1 + self.k2 * self.k2 - self.k * self.k).abs() <= 1e-12 * self.k * self.k.max(1.0)
    }
}

fn check_k(k: f64) -> Result<()> {
    if k > 0.0 && k.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!("k must be positive, got {k}")))
    }
}

/// The horocyclic contraction phase M = π/4 + kR·arcosh(k/|k₂|) − |k₁|R.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PhaseM {
    pub m: f64,
}

impl PhaseM {
    pub fn new(k: f64, k2: f64, r: f64) -> Result<Self> {
        check_k(k)?;
        let a = k2.abs();
        if !(a > 0.0 && a < k) {
            return Err(Error::Domain(format!("phase M needs k > |k2| > 0, got k = {k}, k2 = {k2}")));
        }
        let k1 = (k - a).sqrt() * (k + a).sqrt();
        Ok(PhaseM { m: 0.25 * PI + k * r * (k / a).acosh() - k1 * r })
    }
}

/// One evaluated point of a sweep: curved value and its flat target.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CurveSample {
    pub r_big: f64,
    pub probe: Vec<f64>,
    pub value: C64,
    pub target: C64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ContractionCurve {
    pub target: String,
    pub r_values: Vec<f64>,
    pub errors: Vec<f64>,
    pub fitted_exponent: f64,
    pub fitted_prefactor: f64,
    pub samples: Vec<CurveSample>,
}

impl ContractionCurve {
    fn build(target: &str, r_values: &[f64], per_r: Vec<(f64, Vec<CurveSample>)>) -> Result<Self> {
        let errors: Vec<f64> = per_r.iter().map(|(e, _)| *e).collect();
        let (fitted_exponent, fitted_prefactor) = fit_power_law(r_values, &errors)?;
        Ok(ContractionCurve {
            target: target.to_string(),
            r_values: r_values.to_vec(),
            errors,
            fitted_exponent,
            fitted_prefactor,
            samples: per_r.into_iter().flat_map(|(_, s)| s).collect(),
        })
    }

    pub fn strictly_decreasing(&self) -> bool {
        self.errors.windows(2).all(|w| w[1] < w[0])
    }

    /// ln(error) minus the fitted line, per R.
    pub fn fit_residuals(&self) -> Vec<f64> {
        self.r_values
            .iter()
            .zip(&self.errors)
            .map(|(r, e)| e.ln() - (self.fitted_prefactor.ln() + self.fitted_exponent * r.ln()))
            .collect()
    }
}

/// Least-squares line through (ln R, ln error): returns (slope, e^{intercept}).
pub fn fit_power_law(r_values: &[f64], errors: &[f64]) -> Result<(f64, f64)> {
    if r_values.len() != errors.len() || r_values.len() < 2 {
        return Err(Error::Domain("power-law fit needs matching lists of length >= 2".into()));
    }
    if r_values.iter().any(|r| !(*r > 0.0)) || errors.iter().any(|e| !(*e > 0.0 && e.is_finite())) {
        return Err(Error::Accuracy("power-law fit needs positive finite R and errors".into()));
    }
    let n = r_values.len() as f64;
    let xs: Vec<f64> = r_values.iter().map(|r| r.ln()).collect();
    let ys: Vec<f64> = errors.iter().map(|e| e.ln()).collect();
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    if sxx == 0.0 {
        return Err(Error::Domain("power-law fit needs distinct R values".into()));
    }
    let slope = sxy / sxx;
    Ok((slope, (my - slope * mx).exp()))
}

fn check_r_list(r_values: &[f64], min_len: usize) -> Result<()> {
    if r_values.len() < min_len {
        return Err(Error::Domain(format!("a contraction sweep needs at least {min_len} values of R")));
    }
    if r_values.iter().any(|r| !(*r > 0.0 && r.is_finite())) || r_values.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Domain("R values must be positive and strictly ascending".into()));
    }
    Ok(())
}

/// Flat polar target (−1)^{|m|}√k J_{|m|}(kr) e^{imφ}/√(2π).
pub fn polar_target(k: f64, m: i64, r: f64, phi: f64) -> C64 {
    let am = m.unsigned_abs();
    let sign = if am % 2 == 0 { 1.0 } else { -1.0 };
    C64::from_polar(sign * k.sqrt() * bessel_j(am as u32, k * r) * FRAC_1_SQRT_2PI, m as f64 * phi)
}

/// √R·Ψ^S_{kR,m}(r/R, φ).
pub fn ps_scaled(k: f64, m: i64, r_big: f64, r: f64, phi: f64) -> Result<C64> {
    let sp = SpectralParams::new(r_big, k * r_big, Quantum::M(m))?;
    Ok(psi_s(&sp, &PseudoSphericalPoint { tau: r / r_big, phi })?.value * r_big.sqrt())
}

/// Sup over `points` (r, φ) of |√R Ψ^S − polar target| at one R.
pub fn ps_sup_gap(k: f64, m: i64, r_big: f64, points: &[(f64, f64)]) -> Result<f64> {
    let mut e = 0.0f64;
    for &(r, phi) in points {
        e = e.max((ps_scaled(k, m, r_big, r, phi)? - polar_target(k, m, r, phi)).norm());
    }
    Ok(e)
}

/// Flat Cartesian target √(2k/|k₂|)·e^{ik₁x}{cos, sin}(|k₂|y)/(2π).
pub fn cartesian_target(fp: &FlatParams, parity: Parity, x: f64, y: f64) -> C64 {
    let a = fp.k2.abs();
    let t = match parity {
        Parity::Even => (a * y).cos(),
        Parity::Odd => (a * y).sin(),
    };
    C64::from_polar((2.0 * fp.k / a).sqrt() * t / (2.0 * PI), fp.k1 * x)
}

/// R·Ψ^{EQ(±)}_{kR,k₁R}(y/R, x/R).
pub fn eq_scaled(fp: &FlatParams, parity: Parity, r_big: f64, x: f64, y: f64) -> Result<C64> {
    let sp = SpectralParams::new(r_big, fp.k * r_big, Quantum::Nu(fp.k1 * r_big))?;
    Ok(psi_eq(&sp, parity, &EquidistantPoint { tau1: y / r_big, tau2: x / r_big })?.value * r_big)
}

/// Horocyclic target (√k/π)·sin(M − |k₁|x)/√|k₁|·e^{ik₂y}.
pub fn horocyclic_target(fp: &FlatParams, r_big: f64, x: f64, y: f64) -> Result<C64> {
    let m = PhaseM::new(fp.k, fp.k2, r_big)?.m;
    let a1 = fp.k1.abs();
    Ok(C64::from_polar(fp.k.sqrt() / PI * (m - a1 * x).sin() / a1.sqrt(), fp.k2 * y))
}

/// R·Ψ^HO_{kR,k₂R}(x̃ = y/R, ỹ = 1 + x/R).
pub fn ho_scaled(fp: &FlatParams, r_big: f64, x: f64, y: f64) -> Result<C64> {
    let sp = SpectralParams::new(r_big, fp.k * r_big, Quantum::S(fp.k2 * r_big))?;
    Ok(psi_ho(&sp, &HorocyclicPoint { x_t: y / r_big, y_t: 1.0 + x / r_big })?.value * r_big)
}

/// Flat limit of √R·𝒰^{m(±)}: ±(−i)^{|m|}{cos, sin}(mα)/√(π|k₂|) (minus sign for the odd family).
pub fn u_target(fp: &FlatParams, m: i64, parity: Parity) -> C64 {
    let ph = C64::new(0.0, -1.0).powu(m.unsigned_abs() as u32);
    let a = fp.alpha * m as f64;
    let t = match parity {
        Parity::Even => a.cos(),
        Parity::Odd => -a.sin(),
    };
    ph * t / (PI * fp.k2.abs()).sqrt()
}

/// Stationary-phase form of 𝒲^{k₁R(+)}_{kR,k₂'R}.
pub fn w_target(k: f64, k1: f64, k2p: f64, r_big: f64) -> C64 {
    let k2 = (k - k1.abs()).sqrt() * (k + k1.abs()).sqrt();
    let ph = r_big * k1 + r_big * k1 * (k2p.abs() / k2).ln() + 0.5 * r_big * k * ((k - k1) / (k + k1)).abs().ln();
    C64::from_polar(1.0 / (2.0 * (PI * k2p.abs() * r_big).sqrt()), ph)
}

/// Trigonometric asymptote of 𝒱^m_{kR,k₂R} (the cos α > 0 branch unless k₁ < 0).
pub fn v_target(fp: &FlatParams, m: i64, r_big: f64) -> Result<f64> {
    let ph = PhaseM::new(fp.k, fp.k2, r_big)?.m;
    let amp = (2.0 / (PI * fp.k1.abs() * r_big)).sqrt();
    let mf = m as f64;
    let fwd = fp.k1 > 0.0;
    let a = if fwd { ph + mf * fp.alpha } else { ph - mf * fp.alpha };
    let l = m.div_euclid(2);
    let sl = if l % 2 == 0 { 1.0 } else { -1.0 };
    Ok(if m % 2 == 0 {
        sl * amp * a.sin()
    } else {
        let sg = if fwd { 1.0 } else { -1.0 };
        sl * (m as f64).signum() * sg * amp * a.cos()
    })
}

/// Relative width of the k₂ band scanned for 𝒱.
pub const V_BAND: (f64, f64) = (0.64, 1.2);
/// Points in the k₂ band.
pub const V_BAND_POINTS: usize = 9;

/// 𝒱 at (kR, k₂R) from the circle projection; the probe radius keeps kR·τ
/// near 1.5, away from the first Bessel zero.
pub fn v_contracted_value(k: f64, k2: f64, m: i64, r_big: f64) -> Result<f64> {
    let rho = k * r_big;
    let tau = (1.5 / rho).min(0.5);
    Ok(coeff_v_phi_integral(rho, k2 * r_big, m, tau, Tolerance::new(1e-15, 1e-11))?.value.re)
}

/// One contraction experiment. Probe points are (r, φ) for `Ps` and (x, y)
/// for `Eq` and `Ho`; `U` scans angles α.
#[derive(Debug, Clone, PartialEq)]
pub enum Setup {
    Ps { fp: FlatParams, m: i64, points: Vec<(f64, f64)> },
    Eq { fp: FlatParams, parity: Parity, points: Vec<(f64, f64)> },
    Ho { fp: FlatParams, points: Vec<(f64, f64)> },
    U { k: f64, m: i64, parity: Parity, alphas: Vec<f64> },
    W { k: f64, k1: f64, k2p: f64 },
    /// `band` scans k₂·[0.64, 1.2] instead of the single k₂.
    V { k: f64, k2: f64, m: i64, band: bool },
}

impl Setup {
    pub fn name(&self) -> &'static str {
        match self {
            Setup::Ps { .. } => "ps",
            Setup::Eq { parity: Parity::Even, .. } => "eq+",
            Setup::Eq { .. } => "eq-",
            Setup::Ho { .. } => "ho",
            Setup::U { parity: Parity::Even, .. } => "u+",
            Setup::U { .. } => "u-",
            Setup::W { .. } => "w",
            Setup::V { .. } => "v",
        }
    }

    /// Preconditions that do not depend on R (plus the HO domain, which
    /// needs the smallest R).
    pub fn validate(&self, r_min: f64) -> Result<()> {
        match self {
            Setup::Ps { points, .. } => {
                if points.is_empty() || points.iter().any(|p| !(p.0 >= 0.0)) {
                    return Err(Error::Domain("pseudo-spherical contraction needs probe radii r >= 0".into()));
                }
            }
            Setup::Eq { fp, points, .. } => {
                if fp.k2 == 0.0 || points.is_empty() {
                    return Err(Error::Domain("equidistant contraction needs k2 != 0 and probe points".into()));
                }
            }
            Setup::Ho { fp, points } => {
                let a2 = fp.k2.abs();
                if !(fp.k > a2 && a2 > 0.0) || fp.k1 == 0.0 {
                    return Err(Error::Domain(format!(
                        "horocyclic contraction needs k > |k2| > 0 and k1 != 0 (k = {}, k2 = {})",
                        fp.k, fp.k2
                    )));
                }
                if points.is_empty() {
                    return Err(Error::Domain("horocyclic contraction needs probe points".into()));
                }
                // the Macdonald asymptotics behind the target need kR > |k₂|(R + x)
                let x_max = r_min * (fp.k / a2 - 1.0);
                if let Some(p) = points.iter().find(|p| !(p.0 < x_max && p.0 > -r_min)) {
                    return Err(Error::Domain(format!("probe x = {} outside (-R, {x_max}) where the limit applies", p.0)));
                }
            }
            Setup::U { k, alphas, .. } => {
                check_k(*k)?;
                if alphas.is_empty() {
                    return Err(Error::Domain("U contraction needs angles".into()));
                }
                for &a in alphas {
                    if FlatParams::from_angle(*k, a)?.k2.abs() < 1e-12 * k {
                        return Err(Error::Domain("U contraction needs angles away from 0 and ±pi".into()));
                    }
                }
            }
            Setup::W { k, k1, k2p } => {
                check_k(*k)?;
                if *k2p == 0.0 || !(k1.abs() < *k) {
                    return Err(Error::Domain(format!("W contraction needs k2' != 0 and |k1| < k (k = {k}, k1 = {k1}, k2' = {k2p})")));
                }
            }
            Setup::V { k, k2, .. } => {
                check_k(*k)?;
                if !(k2.abs() > 0.0 && k2.abs() < *k) {
                    return Err(Error::Domain(format!("V contraction needs 0 < |k2| < k (k = {k}, k2 = {k2})")));
                }
            }
        }
        Ok(())
    }

    /// Error normalization: the coefficient limits decay like R^{−1/2}
    /// themselves, so their gaps are reported times √R.
    fn scale(&self, r_big: f64) -> f64 {
        match self {
            Setup::W { .. } | Setup::V { .. } => r_big.sqrt(),
            _ => 1.0,
        }
    }

    /// Curved values and flat targets at one R.
    pub fn samples(&self, rb: f64) -> Result<Vec<CurveSample>> {
        let sample = |probe: Vec<f64>, value: C64, target: C64| CurveSample { r_big: rb, probe, value, target };
        match self {
            Setup::Ps { fp, m, points } => points
                .iter()
                .map(|&(r, phi)| Ok(sample(vec![r, phi], ps_scaled(fp.k, *m, rb, r, phi)?, polar_target(fp.k, *m, r, phi))))
                .collect(),
            Setup::Eq { fp, parity, points } => points
                .iter()
                .map(|&(x, y)| Ok(sample(vec![x, y], eq_scaled(fp, *parity, rb, x, y)?, cartesian_target(fp, *parity, x, y))))
                .collect(),
            Setup::Ho { fp, points } => points
                .iter()
                .map(|&(x, y)| Ok(sample(vec![x, y], ho_scaled(fp, rb, x, y)?, horocyclic_target(fp, rb, x, y)?)))
                .collect(),
            Setup::U { k, m, parity, alphas } => alphas
                .iter()
                .map(|&a| {
                    let f = FlatParams::from_angle(*k, a)?;
                    let v = coeff_u(f.k * rb, f.k1 * rb, *m, *parity)?.value * rb.sqrt();
                    Ok(sample(vec![f.alpha], v, u_target(&f, *m, *parity)))
                })
                .collect(),
            Setup::W { k, k1, k2p } => {
                let (rho, s, nu) = (k * rb, k2p * rb, k1 * rb);
                let wp = coeff_w(rho, s, nu, Parity::Even)?.value;
                let wm = coeff_w(rho, s, nu, Parity::Odd)?.value;
                // probe +1: 𝒲^{(+)} against its asymptote; −1: 𝒲^{(−)} against (ik₂'/|k₂'|)𝒲^{(+)}
                Ok(vec![
                    sample(vec![1.0], wp, w_target(*k, *k1, *k2p, rb)),
                    sample(vec![-1.0], wm, C64::new(0.0, k2p.signum()) * wp),
                ])
            }
            Setup::V { k, k2, m, band } => {
                let qs: Vec<f64> = if *band {
                    let n = V_BAND_POINTS;
                    (0..n).map(|j| k2 * (V_BAND.0 + (V_BAND.1 - V_BAND.0) * j as f64 / (n - 1) as f64)).collect()
                } else {
                    vec![*k2]
                };
                qs.into_iter()
                    .filter(|q| !*band || q.abs() < 0.98 * k)
                    .map(|q| {
                        let fp = FlatParams::from_k_k2(*k, q)?;
                        let v = v_contracted_value(*k, q, *m, rb)?;
                        Ok(sample(vec![q], C64::new(v, 0.0), C64::new(v_target(&fp, *m, rb)?, 0.0)))
                    })
                    .collect()
            }
        }
    }
}

/// Samples and sup-gap for every R (any number of R values, evaluated in
/// parallel, returned in input order).
pub fn sample_sweep(setup: &Setup, r_values: &[f64]) -> Result<Vec<(f64, Vec<CurveSample>)>> {
    check_r_list(r_values, 1)?;
    setup.validate(r_values[0])?;
    r_values
        .par_iter()
        .map(|&r| {
            let samples = setup.samples(r)?;
            let e = samples.iter().map(|s| (s.value - s.target).norm()).fold(0.0, f64::max) * setup.scale(r);
            Ok((e, samples))
        })
        .collect()
}

/// Full contraction curve with the log-log fit; needs at least 4 R values.
pub fn contract(setup: &Setup, r_values: &[f64]) -> Result<ContractionCurve> {
    check_r_list(r_values, 4)?;
    let per_r = sample_sweep(setup, r_values)?;
    ContractionCurve::build(setup.name(), r_values, per_r)
}

/// Pseudo-spherical → polar Bessel; `points` are (r, φ).
pub fn contract_ps(fp: &FlatParams, m: i64, points: &[(f64, f64)], r_values: &[f64]) -> Result<ContractionCurve> {
    contract(&Setup::Ps { fp: *fp, m, points: points.to_vec() }, r_values)
}

/// Equidistant → Cartesian; `points` are (x, y).
pub fn contract_eq(fp: &FlatParams, parity: Parity, points: &[(f64, f64)], r_values: &[f64]) -> Result<ContractionCurve> {
    contract(&Setup::Eq { fp: *fp, parity, points: points.to_vec() }, r_values)
}

/// Horocyclic → phase-shifted Cartesian; `points` are (x, y) with
/// x < R_min·(k/|k₂| − 1).
pub fn contract_ho(fp: &FlatParams, points: &[(f64, f64)], r_values: &[f64]) -> Result<ContractionCurve> {
    contract(&Setup::Ho { fp: *fp, points: points.to_vec() }, r_values)
}

/// 𝒰 → cos/sin(mα) with ρ = kR, ν = kR cos α; sup over the α grid.
pub fn contract_u(k: f64, m: i64, parity: Parity, alphas: &[f64], r_values: &[f64]) -> Result<ContractionCurve> {
    contract(&Setup::U { k, m, parity, alphas: alphas.to_vec() }, r_values)
}

/// 𝒲 → stationary-phase asymptote, √R-normalized, together with the
/// 𝒲^{(−)} ≈ (ik₂'/|k₂'|)𝒲^{(+)} relation.
pub fn contract_w(k: f64, k1: f64, k2p: f64, r_values: &[f64]) -> Result<ContractionCurve> {
    contract(&Setup::W { k, k1, k2p }, r_values)
}

/// 𝒱 → trigonometric asymptote, √R-normalized. At a single k₂ the gap
/// follows sin(M + mα), whose phase M ∝ R sweeps through zeros, so the error
/// is the sup over the band k₂·[0.64, 1.2] (clipped below k).
pub fn contract_v(k: f64, k2: f64, m: i64, r_values: &[f64]) -> Result<ContractionCurve> {
    contract(&Setup::V { k, k2, m, band: true }, r_values)
}

fn report(id: &str, lhs: C64, rhs: C64, tol: f64, budget: f64, ps: Vec<(&str, ParamValue)>) -> IdentityReport {
    let params: Params = ps.into_iter().map(|(k, v)| (k.to_string(), v)).collect();
    IdentityReport::new(id, "CONTRACTION", lhs, rhs, tol, budget, params)
}

/// Truncated plane-wave expansion Σ_{|m|≤M} e^{−imα} i^m J_m(kr) e^{imφ}
/// against e^{ikr cos(φ−α)}.
pub fn jacobi_anger_check(k: f64, r: f64, phi: f64, alpha: f64, m_trunc: u32) -> Result<IdentityReport> {
    if !(r >= 0.0) || !(k > 0.0) {
        return Err(Error::Domain("jacobi_anger_check needs k > 0 and r >= 0".into()));
    }
    if (m_trunc as f64) < k * r + 20.0 {
        return Err(Error::Domain(format!("truncation {m_trunc} is below kr + 20")));
    }
    let z = k * r;
    let mut sum = C64::new(bessel_j(0, z), 0.0);
    for m in 1..=m_trunc {
        let j = bessel_j(m, z);
        let mf = m as f64;
        let i_m = C64::new(0.0, 1.0).powu(m);
        // J_{−m} = (−1)^m J_m and i^{−m} = (−i)^m, so the −m term is conj-like
        let jm = if m % 2 == 0 { j } else { -j };
        sum += i_m * j * C64::from_polar(1.0, mf * (phi - alpha));
        sum += C64::new(0.0, -1.0).powu(m) * jm * C64::from_polar(1.0, -mf * (phi - alpha));
    }
    let rhs = C64::from_polar(1.0, z * (phi - alpha).cos());
    let ps = vec![("k", k.into()), ("r", r.into()), ("phi", phi.into()), ("alpha", alpha.into()), ("m_trunc", (m_trunc as i64).into())];
    Ok(report("jacobi_anger", sum, rhs, 1e-10, 0.0, ps))
}

/// (1/π)∫₀^π cos(x sin α − mα) dα against J_m(x).
pub fn bessel_integral_check(m: u32, x: f64) -> Result<IdentityReport> {
    if !x.is_finite() {
        return Err(Error::Domain("x must be finite".into()));
    }
    let mf = m as f64;
    let q = integrate(|a: f64| C64::new((x * a.sin() - mf * a).cos(), 0.0), 0.0, PI, Tolerance::new(1e-14, 1e-13))?;
    let ps = vec![("m", (m as i64).into()), ("x", x.into())];
    Ok(report("bessel_integral", q.value / PI, C64::new(bessel_j(m, x), 0.0), 1e-10, q.err_est / PI, ps))
}

/// The R values used by the rate fits.
pub const R_SWEEP: [f64; 5] = [10.0, 20.0, 40.0, 80.0, 160.0];

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fit_recovers_power_law() {
        let rs = [10.0, 20.0, 40.0, 80.0];
        let es: Vec<f64> = rs.iter().map(|r: &f64| 3.0 * r.powf(-1.25)).collect();
        let (p, c) = fit_power_law(&rs, &es).unwrap();
        assert!((p + 1.25).abs() < 1e-12 && (c - 3.0).abs() < 1e-10);
    }

    #[test]
    fn flat_params_consistent() {
        let f = FlatParams::from_angle(1.3, 4.0).unwrap();
        assert!(f.is_consistent() && f.alpha < PI && f.alpha >= -PI);
        assert!(FlatParams::from_k_k1(1.0, 1.5).is_err());
    }

    #[test]
    fn phase_m_domain() {
        assert!(PhaseM::new(1.0, 1.0, 10.0).is_err());
        assert!(PhaseM::new(1.0, 0.0, 10.0).is_err());
        let m = PhaseM::new(1.0, 0.5, 0.0).unwrap().m;
        assert!((m - 0.25 * PI).abs() < 1e-15);
    }

    #[test]
    fn jacobi_anger_at_origin_is_one() {
        let r = jacobi_anger_check(1.0, 0.0, 0.3, 0.2, 20).unwrap();
        assert!(r.passed && (r.lhs - C64::new(1.0, 0.0)).norm() < 1e-15);
        assert!(jacobi_anger_check(1.0, 3.0, 1.0, 0.4, 10).is_err());
    }

    #[test]
    fn jacobi_anger_sample() {
        let r = jacobi_anger_check(1.0, 3.0, 1.0, 0.4, 40).unwrap();
        assert!(r.passed, "{r:?}");
    }

    #[test]
    fn bessel_integral_sample() {
        for (m, x) in [(0, 1.0), (2, 3.5), (5, 12.0)] {
            let r = bessel_integral_check(m, x).unwrap();
            assert!(r.passed, "{r:?}");
        }
    }

    #[test]
    fn short_sweep_rejected() {
        let fp = FlatParams::from_angle(1.0, 1.0).unwrap();
        assert!(contract_ps(&fp, 2, &[(1.0, 0.0)], &[10.0, 20.0]).is_err());
        assert!(contract_ps(&fp, 2, &[(1.0, 0.0)], &[10.0, 40.0, 20.0, 80.0]).is_err());
    }

    #[test]
    fn u_target_zero_for_odd_m0() {
        let fp = FlatParams::from_angle(1.0, 1.0).unwrap();
        assert_eq!(u_target(&fp, 0, Parity::Odd).norm(), 0.0);
    }
}
