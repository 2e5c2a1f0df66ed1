//! Normalized wavefunctions of the horocyclic, pseudo-spherical and
//! equidistant bases (even/odd and the (1,2) family).

use crate::geometry::{
    laplace_beltrami_fd, Chart, ChartPoint, EquidistantPoint, HorocyclicPoint, PseudoSphericalPoint,
};
use crate::specfun::{
    abs_gamma_ln, conical_legendre, ferrers_p_cut, gauss_2f1_near_one, gauss_2f1_parts, ln_cosh, ln_sinh,
    log_gamma, macdonald_imag_scaled, sum_parts, SeriesAccuracy, C64,
};
use crate::{Error, Result};
use serde::{Deserialize, Serialize};
use std::f64::consts::{LN_2, PI};

const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Quantum {
    S(f64),
    M(i64),
    Nu(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectralParams {
    pub r: f64,
    pub rho: f64,
    pub quantum: Quantum,
}

impl SpectralParams {
    pub fn new(r: f64, rho: f64, quantum: Quantum) -> Result<Self> {
        if !(r > 0.0 && r.is_finite()) {
            return Err(Error::Domain(format!("R must be positive, got {r}")));
        }
        if !(rho >= 0.0 && rho.is_finite()) {
            return Err(Error::Domain(format!("rho must be >= 0, got {rho}")));
        }
        match quantum {
            Quantum::S(s) if s == 0.0 || !s.is_finite() => {
                return Err(Error::Domain("horocyclic label s must be finite and nonzero".into()))
            }
            Quantum::Nu(nu) if !nu.is_finite() => return Err(Error::Domain("nu must be finite".into())),
            _ => {}
        }
        Ok(SpectralParams { r, rho, quantum })
    }

    fn s(&self) -> Result<f64> {
        match self.quantum {
            Quantum::S(s) => Ok(s),
            _ => Err(Error::Domain("horocyclic function needs the label s".into())),
        }
    }

    fn m(&self) -> Result<i64> {
        match self.quantum {
            Quantum::M(m) => Ok(m),
            _ => Err(Error::Domain("pseudo-spherical function needs the label m".into())),
        }
    }

    fn nu(&self) -> Result<f64> {
        match self.quantum {
            Quantum::Nu(nu) => Ok(nu),
            _ => Err(Error::Domain("equidistant function needs the label nu".into())),
        }
    }
}

/// Basis tag, with the parity for the equidistant families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Basis {
    Ho,
    Ps,
    EqEven,
    EqOdd,
    Eq1,
    Eq2,
}

impl Basis {
    pub fn name(&self) -> &'static str {
        match self {
            Basis::Ho => "ho",
            Basis::Ps => "ps",
            Basis::EqEven => "eq+",
            Basis::EqOdd => "eq-",
            Basis::Eq1 => "eq1",
            Basis::Eq2 => "eq2",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        Ok(match s {
            "ho" => Basis::Ho,
            "ps" => Basis::Ps,
            "eq+" => Basis::EqEven,
            "eq-" => Basis::EqOdd,
            "eq1" => Basis::Eq1,
            "eq2" => Basis::Eq2,
            _ => return Err(Error::Config(format!("unknown basis '{s}'"))),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn sign(self) -> f64 {
        match self {
            Parity::Even => 1.0,
            Parity::Odd => -1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WaveValue {
    pub value: C64,
    pub basis: Basis,
}

/// Energy (ρ² + 1/4)/(2R²).
pub fn energy(r: f64, rho: f64) -> f64 {
    (rho * rho + 0.25) / (2.0 * r * r)
}

/// ln(ρ sinh πρ), continuous at ρ = 0 only as a limit; callers use ρ > 0.
fn ln_rho_sinh(rho: f64) -> f64 {
    rho.ln() + ln_sinh(PI * rho)
}

/// ln N_{ρs} = ln[(1/(Rπ))√(2ρ sinh πρ/|s|)].
pub fn ln_norm_ho(r: f64, rho: f64, s: f64) -> f64 {
    -(r * PI).ln() + 0.5 * (LN_2 + ln_rho_sinh(rho) - s.abs().ln())
}

/// ln N_{ρm} = ln[√(ρ sinh πρ/(πR²))·|Γ(1/2 − |m| + iρ)|].
pub fn ln_norm_ps(r: f64, rho: f64, m: i64) -> Result<f64> {
    let g = abs_gamma_ln(C64::new(0.5 - m.unsigned_abs() as f64, rho))?;
    Ok(0.5 * (ln_rho_sinh(rho) - PI.ln()) - r.ln() + g)
}

/// ln N^{(±)}_{ρν}.
pub fn ln_norm_eq(r: f64, rho: f64, nu: f64, parity: Parity) -> Result<f64> {
    let c = match parity {
        Parity::Even => 0.25,
        Parity::Odd => 0.75,
    };
    let g = abs_gamma_ln(C64::new(c, 0.5 * (rho + nu)))? + abs_gamma_ln(C64::new(c, 0.5 * (rho - nu)))?;
    let two = if parity == Parity::Even { LN_2 } else { 0.0 };
    Ok(g - two - 1.5 * PI.ln() - r.ln() + 0.5 * ln_rho_sinh(rho))
}

/// ln of the (1,2)-family constant (1/(R√2))√(ρ sinh πρ/(sinh²πρ + cosh²πν)).
pub fn ln_norm_eq12(r: f64, rho: f64, nu: f64) -> f64 {
    // sinh²a + cosh²b = cosh(a+b) cosh(a−b)
    let den = ln_cosh(PI * (rho + nu)) + ln_cosh(PI * (rho - nu));
    -r.ln() - 0.5 * LN_2 + 0.5 * (ln_rho_sinh(rho) - den)
}

fn check_rho_positive(rho: f64) -> Result<()> {
    if rho > 0.0 {
        Ok(())
    } else {
        Err(Error::Domain("normalized continuum functions need rho > 0".into()))
    }
}

/// Horocyclic function Ψ^HO_{ρs}(x̃, ỹ).
pub fn psi_ho(sp: &SpectralParams, p: &HorocyclicPoint) -> Result<WaveValue> {
    let s = sp.s()?;
    check_rho_positive(sp.rho)?;
    if !(p.y_t > 0.0) {
        return Err(Error::Domain("horocyclic point needs y > 0".into()));
    }
    let z = s.abs() * p.y_t;
    let (mant, ln_scale) = macdonald_imag_scaled(sp.rho, z, SeriesAccuracy::default())?;
    let ln_mod = ln_norm_ho(sp.r, sp.rho, s) + 0.5 * z.ln() + ln_scale - LN_SQRT_2PI;
    let value = C64::from_polar(mant * ln_mod.exp(), s * p.x_t);
    Ok(WaveValue { value, basis: Basis::Ho })
}

/// Pseudo-spherical function Ψ^S_{ρm}(τ, φ).
pub fn psi_s(sp: &SpectralParams, p: &PseudoSphericalPoint) -> Result<WaveValue> {
    let m = sp.m()?;
    check_rho_positive(sp.rho)?;
    let am = u32::try_from(m.unsigned_abs()).map_err(|_| Error::Domain("|m| too large".into()))?;
    let pl = conical_legendre(am, sp.rho, p.tau, SeriesAccuracy::default())?;
    let amp = pl * (ln_norm_ps(sp.r, sp.rho, m)? - LN_SQRT_2PI).exp();
    Ok(WaveValue { value: C64::from_polar(amp, m as f64 * p.phi), basis: Basis::Ps })
}

/// Radial equidistant solution ψ^{(±)}_{ρν}(τ1) without normalization.
pub fn psi_eq_radial(rho: f64, nu: f64, parity: Parity, tau1: f64) -> Result<C64> {
    let acc = SeriesAccuracy::default();
    let (c0, cc) = match parity {
        Parity::Even => (0.25, 0.5),
        Parity::Odd => (0.75, 1.5),
    };
    let th = tau1.tanh();
    let t2 = th * th;
    let lc = ln_cosh(tau1);
    let odd = |v: C64, f: f64| if parity == Parity::Odd { v * f } else { v };
    if t2 <= 0.5 {
        // cosh^{−1/2−iρ} F(c0 + i(ρ−ν)/2, c0 + i(ρ+ν)/2; cc; tanh²)
        let a = C64::new(c0, 0.5 * (rho - nu));
        let b = C64::new(c0, 0.5 * (rho + nu));
        let sech2 = (-2.0 * lc).exp();
        let f = gauss_2f1_near_one(a, b, C64::new(cc, 0.0), t2, sech2, acc)?;
        let pre = (C64::new(-0.5, -rho) * lc).exp();
        Ok(odd(pre * f, th))
    } else {
        // cosh^{iν} F(c0 − i(ρ−ν)/2, c0 + i(ρ+ν)/2; cc; −sinh²)
        let a = C64::new(c0, -0.5 * (rho - nu));
        let b = C64::new(c0, 0.5 * (rho + nu));
        let sh = tau1.sinh();
        let parts = gauss_2f1_parts(a, b, C64::new(cc, 0.0), -sh * sh, acc)?;
        let v = sum_parts(&parts, C64::new(0.0, nu * lc));
        Ok(odd(v, sh))
    }
}

/// Even/odd equidistant function Ψ^{EQ(±)}_{ρν}(τ1, τ2).
pub fn psi_eq(sp: &SpectralParams, parity: Parity, p: &EquidistantPoint) -> Result<WaveValue> {
    let nu = sp.nu()?;
    check_rho_positive(sp.rho)?;
    let rad = psi_eq_radial(sp.rho, nu, parity, p.tau1)?;
    let n = (ln_norm_eq(sp.r, sp.rho, nu, parity)? - LN_SQRT_2PI).exp();
    let basis = if parity == Parity::Even { Basis::EqEven } else { Basis::EqOdd };
    Ok(WaveValue { value: rad * n * C64::from_polar(1.0, nu * p.tau2), basis })
}

/// The constants C^{(±)}_{ρν} combining ψ^{(±)} into the (1,2) family.
pub fn c_plus_minus(rho: f64, nu: f64) -> Result<(C64, C64)> {
    let half_ln_pi = 0.5 * PI.ln();
    let base = C64::new(half_ln_pi, -rho * LN_2);
    let lp = base - log_gamma(C64::new(0.75, 0.5 * (rho + nu)))? - log_gamma(C64::new(0.75, 0.5 * (rho - nu)))?;
    let lm = base + LN_2 - log_gamma(C64::new(0.25, 0.5 * (rho + nu)))? - log_gamma(C64::new(0.25, 0.5 * (rho - nu)))?;
    Ok((lp.exp(), lm.exp()))
}

fn which_sign(which: u8) -> Result<f64> {
    match which {
        1 => Ok(1.0),
        2 => Ok(-1.0),
        _ => Err(Error::Domain(format!("(1,2) family index must be 1 or 2, got {which}"))),
    }
}

/// ψ^{(1,2)}(τ1) = P^{−iρ}_{−1/2+iν}(∓tanh τ1)/√cosh τ1, evaluated on the cut.
pub fn psi_eq12_radial(rho: f64, nu: f64, which: u8, tau1: f64) -> Result<C64> {
    let sg = which_sign(which)?;
    // x = ∓tanh τ1; 1 − x and 1 + x from e^{±τ1}/cosh τ1
    let t = sg * tau1;
    let lc = ln_cosh(tau1);
    let one_minus_x = (t - lc).exp();
    let one_plus_x = (-t - lc).exp();
    let p = ferrers_p_cut(C64::new(0.0, -rho), C64::new(-0.5, nu), one_minus_x, one_plus_x, SeriesAccuracy::default())?;
    Ok(p * (-0.5 * lc).exp())
}

/// Same function built as C^{(+)}ψ^{(+)} ± C^{(−)}ψ^{(−)}.
pub fn psi_eq12_radial_combination(rho: f64, nu: f64, which: u8, tau1: f64) -> Result<C64> {
    let sg = which_sign(which)?;
    let (cp, cm) = c_plus_minus(rho, nu)?;
    Ok(cp * psi_eq_radial(rho, nu, Parity::Even, tau1)? + sg * cm * psi_eq_radial(rho, nu, Parity::Odd, tau1)?)
}

/// (1,2)-family equidistant function Ψ^{EQ(1,2)}_{ρν}(τ1, τ2).
pub fn psi_eq12(sp: &SpectralParams, which: u8, p: &EquidistantPoint) -> Result<WaveValue> {
    let nu = sp.nu()?;
    check_rho_positive(sp.rho)?;
    let rad = psi_eq12_radial(sp.rho, nu, which, p.tau1)?;
    let n = (ln_norm_eq12(sp.r, sp.rho, nu) - LN_SQRT_2PI).exp();
    let basis = if which == 1 { Basis::Eq1 } else { Basis::Eq2 };
    Ok(WaveValue { value: rad * n * C64::from_polar(1.0, nu * p.tau2), basis })
}

/// Evaluate any basis at a point given in that basis's own chart.
pub fn evaluate(basis: Basis, sp: &SpectralParams, p: &ChartPoint) -> Result<WaveValue> {
    match (basis, p) {
        (Basis::Ho, ChartPoint::Horocyclic(h)) => psi_ho(sp, h),
        (Basis::Ps, ChartPoint::PseudoSpherical(s)) => psi_s(sp, s),
        (Basis::EqEven, ChartPoint::Equidistant(e)) => psi_eq(sp, Parity::Even, e),
        (Basis::EqOdd, ChartPoint::Equidistant(e)) => psi_eq(sp, Parity::Odd, e),
        (Basis::Eq1, ChartPoint::Equidistant(e)) => psi_eq12(sp, 1, e),
        (Basis::Eq2, ChartPoint::Equidistant(e)) => psi_eq12(sp, 2, e),
        _ => Err(Error::Domain(format!("basis {} is not evaluated in chart {:?}", basis.name(), p.chart()))),
    }
}

pub fn native_chart(basis: Basis) -> Chart {
    match basis {
        Basis::Ho => Chart::Horocyclic,
        Basis::Ps => Chart::PseudoSpherical,
        _ => Chart::Equidistant,
    }
}

/// Relative residual of Δ_LB Ψ + (ρ²+1/4)Ψ/R² at `p` (5-point differences,
/// step `h`), measured against (ρ²+1/4)|Ψ|/R².
pub fn pde_residual(basis: Basis, sp: &SpectralParams, p: &ChartPoint, h: f64) -> Result<f64> {
    let lap = laplace_beltrami_fd(p, sp.r, h, |q| Ok(evaluate(basis, sp, q)?.value))?;
    let psi = evaluate(basis, sp, p)?.value;
    let e = (sp.rho * sp.rho + 0.25) / (sp.r * sp.r);
    let scale = e * psi.norm().max(lap.norm() / e);
    Ok((lap + e * psi).norm() / scale)
}
