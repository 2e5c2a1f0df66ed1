use super::C64;
use crate::{Error, Result};
use std::f64::consts::PI;

// B_{2k} / (2k (2k-1)), k = 1..10
const STIRLING: [f64; 10] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360360.0,
    1.0 / 156.0,
    -3617.0 / 122400.0,
    43867.0 / 244188.0,
    -174611.0 / 125400.0,
];

const HALF_LN_2PI: f64 = 0.918_938_533_204_672_8;
const SHIFT_RADIUS: f64 = 12.0;

fn is_pole(z: C64) -> bool {
    z.im == 0.0 && z.re <= 0.0 && z.re == z.re.round()
}

fn stirling(z: C64) -> C64 {
    let zi = z.inv();
    let zi2 = zi * zi;
    let mut acc = C64::new(0.0, 0.0);
    let mut p = zi;
    for coef in STIRLING {
        acc += p * coef;
        p *= zi2;
    }
    (z - 0.5) * z.ln() - z + HALF_LN_2PI + acc
}

/// Analytic continuation of ln Γ(z) (the log-gamma function, not the
/// principal log of Γ). Continuous across the real axis away from the poles;
/// on the negative real axis the imaginary part follows the limit from above.
pub fn log_gamma(z: C64) -> Result<C64> {
    if !z.re.is_finite() || !z.im.is_finite() {
        return Err(Error::Domain(format!("log_gamma of non-finite {z}")));
    }
    if is_pole(z) {
        return Err(Error::Pole(format!("{}", z.re)));
    }
    let target = if z.im.abs() >= SHIFT_RADIUS { 0.5 } else { SHIFT_RADIUS };
    let n = if z.re < target { (target - z.re).ceil() as usize } else { 0 };
    let mut shift = C64::new(0.0, 0.0);
    for k in 0..n {
        let w = z + k as f64;
        // principal log, with the negative real axis mapped to +iπ
        shift += if w.im == 0.0 && w.re < 0.0 {
            C64::new((-w.re).ln(), PI)
        } else {
            w.ln()
        };
    }
    Ok(stirling(z + n as f64) - shift)
}

/// arg Γ(z) taken as Im ln Γ(z), continuous in z.
pub fn arg_gamma(z: C64) -> Result<f64> {
    Ok(log_gamma(z)?.im)
}

/// ln |Γ(z)|.
pub fn abs_gamma_ln(z: C64) -> Result<f64> {
    Ok(log_gamma(z)?.re)
}

/// ln |Γ(x)| for real x.
pub fn ln_gamma_real(x: f64) -> Result<f64> {
    abs_gamma_ln(C64::new(x, 0.0))
}

/// Γ(x) for real x.
pub fn gamma_real(x: f64) -> Result<f64> {
    if is_pole(C64::new(x, 0.0)) {
        return Err(Error::Pole(format!("{x}")));
    }
    if x > 0.0 && x <= 20.0 && x == x.round() {
        let mut f = 1.0;
        for k in 2..(x as u64) {
            f *= k as f64;
        }
        return Ok(f);
    }
    let lg = log_gamma(C64::new(x, 0.0))?;
    // imaginary part is a multiple of π: its parity gives the sign
    let sign = if ((lg.im / PI).round() as i64) % 2 == 0 { 1.0 } else { -1.0 };
    Ok(sign * lg.re.exp())
}

/// 1/Γ(z), entire; zero at the poles of Γ.
pub fn rgamma(z: C64) -> C64 {
    if is_pole(z) {
        return C64::new(0.0, 0.0);
    }
    match log_gamma(z) {
        Ok(l) => (-l).exp(),
        Err(_) => C64::new(0.0, 0.0),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trivial_values() {
        assert!(log_gamma(C64::new(1.0, 0.0)).unwrap().norm() < 1e-14);
        let h = log_gamma(C64::new(0.5, 0.0)).unwrap();
        assert!((h.re - 0.572_364_942_924_700_1).abs() < 1e-14);
        let g = log_gamma(C64::new(0.5, 1.0)).unwrap();
        let mod2 = (2.0 * g.re).exp();
        assert!((mod2 - PI / PI.cosh()).abs() < 1e-14);
    }

    #[test]
    fn poles_rejected() {
        for n in 0..5 {
            assert!(matches!(log_gamma(C64::new(-(n as f64), 0.0)), Err(Error::Pole(_))));
        }
    }

    #[test]
    fn factorials() {
        let mut f = 1.0f64;
        for n in 1..30u32 {
            if n > 1 {
                f *= (n - 1) as f64;
            }
            let v = ln_gamma_real(n as f64).unwrap();
            assert!((v - f.ln()).abs() <= 1e-14 * f.ln().abs().max(1.0), "n={n}");
        }
        assert_eq!(gamma_real(5.0).unwrap(), 24.0);
        assert!((gamma_real(-0.5).unwrap() + 2.0 * PI.sqrt()).abs() < 1e-13);
        assert!((gamma_real(-1.5).unwrap() - 4.0 / 3.0 * PI.sqrt()).abs() < 1e-13);
    }

    #[test]
    fn reference_values() {
        // mpmath.loggamma at 30 digits
        let cases = [
            ((2.5, 3.0), (-1.470_954_610_348_841_7, 2.822_615_638_260_799_5)),
            ((-3.7, 0.2), (-1.636_433_092_562_456_4, -12.663_282_679_635_772)),
            ((0.25, -40.0), (-62.835_129_518_830_187, -107.162_739_501_899_1)),
            ((30.0, 7.5), (70.313_748_799_983_704, 25.462_539_724_711_677)),
            ((-2.5, 0.0), (-0.056_243_716_497_674_05, -9.424_777_960_769_38)),
        ];
        for ((x, y), (re, im)) in cases {
            let v = log_gamma(C64::new(x, y)).unwrap();
            assert!((v.re - re).abs() < 2e-13 * re.abs().max(1.0), "{x}+{y}i re {} vs {re}", v.re);
            assert!((v.im - im).abs() < 2e-13 * im.abs().max(1.0), "{x}+{y}i im {} vs {im}", v.im);
        }
    }

    #[test]
    fn rgamma_zero_at_poles() {
        assert_eq!(rgamma(C64::new(-3.0, 0.0)), C64::new(0.0, 0.0));
        assert!((rgamma(C64::new(3.0, 0.0)).re - 0.5).abs() < 1e-14);
    }
}
