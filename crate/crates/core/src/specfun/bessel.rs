use super::gamma::{ln_gamma_real, log_gamma};
use super::{SeriesAccuracy, C64};
use crate::{Error, Result};
use std::f64::consts::PI;

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// J_m(x) for integer m ≥ 0 and real x.
pub fn bessel_j(m: u32, x: f64) -> f64 {
    if x == 0.0 {
        return if m == 0 { 1.0 } else { 0.0 };
    }
    let sign = if x < 0.0 && m % 2 == 1 { -1.0 } else { 1.0 };
    let ax = x.abs();
    let v = if ax < 8.0 || ax * ax < 4.0 * (m as f64 + 1.0) {
        bessel_j_series(m, ax)
    } else {
        bessel_j_miller(m, ax)
    };
    sign * v
}

fn bessel_j_series(m: u32, x: f64) -> f64 {
    let q = 0.25 * x * x;
    let ln_t0 = m as f64 * (0.5 * x).ln() - ln_gamma_real(m as f64 + 1.0).unwrap_or(0.0);
    let mut t = ln_t0.exp();
    let mut sum = t;
    for k in 1..500 {
        t *= -q / (k as f64 * (k as f64 + m as f64));
        sum += t;
        if t.abs() <= 1e-17 * sum.abs() {
            break;
        }
    }
    sum
}

fn bessel_j_miller(m: u32, x: f64) -> f64 {
    let top = (m as f64).max(x);
    let mut n = (top + 30.0 + (40.0 * top).sqrt()) as usize;
    n += n % 2;
    let mut jp1 = 0.0f64;
    let mut j = 1e-30f64;
    let mut norm = 0.0f64;
    let mut jm = 0.0f64;
    for k in (1..=n).rev() {
        // j holds J_k, compute J_{k-1}
        let jm1 = 2.0 * k as f64 / x * j - jp1;
        jp1 = j;
        j = jm1;
        let idx = k - 1;
        if idx == m as usize {
            jm = j;
        }
        if idx % 2 == 0 && idx > 0 {
            norm += 2.0 * j;
        }
        if j.abs() > 1e250 {
            j *= 1e-250;
            jp1 *= 1e-250;
            norm *= 1e-250;
            jm *= 1e-250;
        }
    }
    if m as usize == n {
        jm = 1e-30;
    }
    norm += j;
    jm / norm
}

/// Increasing-power series through I_{±iρ}; returns (mantissa, ln scale).
pub fn macdonald_imag_series(rho: f64, x: f64, acc: SeriesAccuracy) -> Result<(f64, f64)> {
    if !(x > 0.0) {
        return Err(Error::Domain(format!("x = {x} must be positive")));
    }
    let rho = rho.abs();
    if rho == 0.0 {
        return Ok((k0_series(x, acc)?, 0.0));
    }
    let lg = log_gamma(C64::new(1.0, rho))?;
    // t0 = (x/2)^{iρ} / Γ(1+iρ), pull |1/Γ(1+iρ)| out as scale
    let scale = -lg.re;
    let phase = rho * (0.5 * x).ln() - lg.im;
    let mut t = C64::from_polar(1.0, phase);
    let mut sum = t;
    let q = 0.25 * x * x;
    let mut converged = false;
    for l in 1..acc.max_terms {
        let lf = l as f64;
        t *= q / (lf * C64::new(lf, rho));
        sum += t;
        if t.norm() <= 0.1 * acc.rel_tol * sum.norm() && lf > q.sqrt() {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::Accuracy(format!("K series rho={rho} x={x}")));
    }
    Ok((-PI * sum.im, scale - super::ln_sinh(PI * rho)))
}

fn k0_series(x: f64, acc: SeriesAccuracy) -> Result<f64> {
    let q = 0.25 * x * x;
    let mut t = 1.0;
    let mut h = 0.0;
    let mut i0 = 1.0;
    let mut tail = 0.0;
    for k in 1..acc.max_terms {
        let kf = k as f64;
        t *= q / (kf * kf);
        h += 1.0 / kf;
        i0 += t;
        tail += t * h;
        if t * h <= 0.1 * acc.rel_tol * tail.abs() && t <= 0.1 * acc.rel_tol * i0 {
            return Ok(-((0.5 * x).ln() + EULER_GAMMA) * i0 + tail);
        }
    }
    Err(Error::Accuracy(format!("K0 series x={x}")))
}

/// Decreasing-power asymptotic 2F0 series truncated at its smallest term.
pub fn macdonald_imag_asymptotic(rho: f64, x: f64, acc: SeriesAccuracy) -> Result<(f64, f64)> {
    if !(x > 0.0) {
        return Err(Error::Domain(format!("x = {x} must be positive")));
    }
    let r2 = rho * rho;
    let mut t = 1.0f64;
    let mut sum = 1.0f64;
    for k in 0..acc.max_terms {
        let kf = k as f64;
        let next = -t * ((kf + 0.5) * (kf + 0.5) + r2) / (2.0 * x * (kf + 1.0));
        if next.abs() > t.abs() {
            break;
        }
        t = next;
        sum += t;
        if t.abs() <= 0.1 * acc.rel_tol * sum.abs() {
            return Ok((sum * (PI / (2.0 * x)).sqrt(), -x));
        }
    }
    Err(Error::Accuracy(format!("K asymptotic rho={rho} x={x}")))
}

/// Trapezoid rule along a shifted line of the integral
/// K_{iρ}(x) = ∫₀^∞ exp(-x cosh t) cos(ρ t) dt, t = u + iθ.
/// θ = 0 gives the plain cosine transform.
fn trapezoid_line(rho: f64, x: f64, theta: f64, acc: SeriesAccuracy) -> Result<(f64, f64)> {
    let (st, ct) = theta.sin_cos();
    let xc = x * ct;
    let scale = -rho * theta - xc;
    let f = |u: f64| -> (f64, f64) {
        let env = (-xc * (u.cosh() - 1.0)).exp();
        (env * (rho * u - x * u.sinh() * st).cos(), env)
    };
    let umax = (1.0 + 45.0 / xc.max(1e-300)).acosh();
    let mut h = 0.25f64.min(umax / 8.0);
    let n0 = (umax / h).ceil() as usize;
    let mut sum = 0.5 * f(0.0).0;
    let mut abs_sum = 0.5 * f(0.0).1;
    for k in 1..=n0 {
        let (v, e) = f(k as f64 * h);
        sum += v;
        abs_sum += e;
    }
    let mut est = h * sum;
    let mut n = n0;
    for _level in 0..16 {
        let mut add = 0.0;
        let mut add_abs = 0.0;
        for k in 0..n {
            let (v, e) = f((k as f64 + 0.5) * h);
            add += v;
            add_abs += e;
        }
        sum += add;
        abs_sum += add_abs;
        h *= 0.5;
        n *= 2;
        let new = h * sum;
        let amp = h * abs_sum;
        let diff = (new - est).abs();
        est = new;
        if diff <= acc.rel_tol * new.abs().max(1e-3 * amp) && n >= 32 {
            return Ok((est, scale));
        }
    }
    Err(Error::Accuracy(format!("K trapezoid rho={rho} x={x} theta={theta}")))
}

fn contour_angle(rho: f64, x: f64) -> f64 {
    let eps = (1.0 / ((rho - x).abs() + 2.0)).clamp(0.02, 0.5);
    let th = if rho < x { (rho / x).asin() } else { 0.5 * PI };
    if rho >= 0.9 * x {
        th.min(0.5 * PI - eps)
    } else {
        th
    }
}

/// Shifted-contour trapezoid evaluation; returns (mantissa, ln scale).
pub fn macdonald_imag_contour(rho: f64, x: f64, acc: SeriesAccuracy) -> Result<(f64, f64)> {
    if !(x > 0.0) {
        return Err(Error::Domain(format!("x = {x} must be positive")));
    }
    let rho = rho.abs();
    trapezoid_line(rho, x, contour_angle(rho, x), acc)
}

/// The cosine transform ∫₀^∞ e^{-x cosh t} cos(ρ t) dt on the real line.
/// Accurate when ρ is not large compared with x; used as a cross-check.
pub fn macdonald_imag_cosine(rho: f64, x: f64, acc: SeriesAccuracy) -> Result<f64> {
    if !(x > 0.0) {
        return Err(Error::Domain(format!("x = {x} must be positive")));
    }
    let (m, s) = trapezoid_line(rho.abs(), x, 0.0, acc)?;
    Ok(m * s.exp())
}

/// K_{iρ}(x) as (mantissa, ln scale) so that very small values survive.
pub fn macdonald_imag_scaled(rho: f64, x: f64, acc: SeriesAccuracy) -> Result<(f64, f64)> {
    if !(x > 0.0) || !x.is_finite() || !rho.is_finite() {
        return Err(Error::Domain(format!("K_{{i rho}}(x) needs finite rho and x > 0, got rho={rho} x={x}")));
    }
    let rho = rho.abs();
    if rho == 0.0 && x <= 2.0 {
        return Ok((k0_series(x, acc)?, 0.0));
    }
    if x >= 17.0 && x > 2.0 * rho + 10.0 {
        if let Ok(v) = macdonald_imag_asymptotic(rho, x, acc) {
            return Ok(v);
        }
    }
    if x <= 3.0 && rho >= 1e-4 {
        if let Ok(v) = macdonald_imag_series(rho, x, acc) {
            return Ok(v);
        }
    }
    macdonald_imag_contour(rho, x, acc)
}

/// K_{iρ}(x) for real ρ and x > 0; real-valued and even in ρ.
pub fn macdonald_imag(rho: f64, x: f64, acc: SeriesAccuracy) -> Result<f64> {
    let (m, s) = macdonald_imag_scaled(rho, x, acc)?;
    Ok(m * s.exp())
}
