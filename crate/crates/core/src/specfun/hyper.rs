use super::gamma::log_gamma;
use super::{SeriesAccuracy, C64};
use crate::{Error, Result};

const SNAP: f64 = 1e-9;

fn near_nonpositive_int(z: C64) -> Option<i64> {
    if z.im.abs() < SNAP && z.re < SNAP && (z.re - z.re.round()).abs() < SNAP {
        Some(-(z.re.round() as i64))
    } else {
        None
    }
}

fn exact_nonpositive_int(z: C64) -> bool {
    z.im == 0.0 && z.re <= 0.0 && z.re == z.re.round()
}

/// Plain power series of 2F1 about the origin.
fn series(a: C64, b: C64, c: C64, z: f64, acc: SeriesAccuracy) -> Result<C64> {
    let mut t = C64::new(1.0, 0.0);
    let mut sum = t;
    let mut small = 0;
    for n in 0..acc.max_terms {
        let nf = n as f64;
        let den = (c + nf) * (nf + 1.0);
        if den.norm() == 0.0 {
            return Err(Error::Pole(format!("2F1 bottom parameter {c}")));
        }
        t *= (a + nf) * (b + nf) / den * z;
        sum += t;
        if t.norm() == 0.0 {
            return Ok(sum);
        }
        if t.norm() <= 0.1 * acc.rel_tol * sum.norm() {
            small += 1;
            if small >= 2 {
                return Ok(sum);
            }
        } else {
            small = 0;
        }
    }
    Err(Error::Accuracy(format!("2F1 series a={a} b={b} c={c} z={z}")))
}

/// Terms (ln prefactor, series value) whose exponentiated sum is F(a,b;c;w),
/// for 0 ≤ w < 1 with 1 - w supplied separately to keep it exact.
fn parts_w(a: C64, b: C64, c: C64, w: f64, omw: f64, acc: SeriesAccuracy) -> Result<Vec<(C64, C64)>> {
    let zero = C64::new(0.0, 0.0);
    if w <= 0.75 {
        return Ok(vec![(zero, series(a, b, c, w, acc)?)]);
    }
    let d = c - a - b;
    let degenerate = d.im.abs() < 1e-3 && (d.re - d.re.round()).abs() < 1e-3;
    if degenerate {
        return Ok(vec![(zero, series(a, b, c, w, acc)?)]);
    }
    let lnc = log_gamma(c)?;
    let mut out = Vec::with_capacity(2);
    if !exact_nonpositive_int(c - a) && !exact_nonpositive_int(c - b) {
        let lp = lnc + log_gamma(d)? - log_gamma(c - a)? - log_gamma(c - b)?;
        out.push((lp, series(a, b, C64::new(1.0, 0.0) - d, omw, acc)?));
    }
    if !exact_nonpositive_int(a) && !exact_nonpositive_int(b) {
        let lp = lnc + log_gamma(-d)? - log_gamma(a)? - log_gamma(b)? + d * omw.ln();
        out.push((lp, series(c - a, c - b, d + 1.0, omw, acc)?));
    }
    Ok(out)
}

/// Terms (ln prefactor, series value) summing to F(a,b;c;z) for real z < 1.
pub(crate) fn gauss_2f1_parts(a: C64, b: C64, c: C64, z: f64, acc: SeriesAccuracy) -> Result<Vec<(C64, C64)>> {
    if exact_nonpositive_int(c) {
        return Err(Error::Pole(format!("2F1 with c = {c}")));
    }
    if !z.is_finite() || z >= 1.0 {
        return Err(Error::Domain(format!("2F1 argument z = {z} must be < 1")));
    }
    if z == 0.0 {
        return Ok(vec![(C64::new(0.0, 0.0), C64::new(1.0, 0.0))]);
    }
    if z >= -0.5 {
        return parts_w(a, b, c, z, 1.0 - z, acc);
    }
    // Pfaff: F(a,b;c;z) = (1-z)^{-a} F(a, c-b; c; z/(z-1))
    let omz = 1.0 - z;
    let w = -z / omz;
    let omw = 1.0 / omz;
    let pre = -a * omz.ln();
    Ok(parts_w(a, c - b, c, w, omw, acc)?
        .into_iter()
        .map(|(l, s)| (l + pre, s))
        .collect())
}

pub(crate) fn sum_parts(parts: &[(C64, C64)], extra_ln: C64) -> C64 {
    parts.iter().map(|(l, s)| (l + extra_ln).exp() * s).sum()
}

/// Gauss hypergeometric function 2F1(a,b;c;z) for complex parameters and
/// real z < 1.
pub fn gauss_2f1(a: C64, b: C64, c: C64, z: f64, acc: SeriesAccuracy) -> Result<C64> {
    let v = sum_parts(&gauss_2f1_parts(a, b, c, z, acc)?, C64::new(0.0, 0.0));
    if !v.re.is_finite() || !v.im.is_finite() {
        return Err(Error::Accuracy(format!("2F1 overflow a={a} b={b} c={c} z={z}")));
    }
    Ok(v)
}

/// 2F1(a,b;c;w) for 0 ≤ w < 1 given w and 1 - w separately, so that values
/// with w rounding to 1 remain accurate.
pub fn gauss_2f1_near_one(a: C64, b: C64, c: C64, w: f64, omw: f64, acc: SeriesAccuracy) -> Result<C64> {
    if exact_nonpositive_int(c) {
        return Err(Error::Pole(format!("2F1 with c = {c}")));
    }
    // w may round to 1 while 1 − w is still resolved; the series then runs in 1 − w
    if !(0.0..=1.0).contains(&w) || !(omw > 0.0) || (w == 1.0 && omw > 0.25) {
        return Err(Error::Domain(format!("near-one 2F1 needs 0 <= w < 1, got w={w}, 1-w={omw}")));
    }
    Ok(sum_parts(&parts_w(a, b, c, w, omw, acc)?, C64::new(0.0, 0.0)))
}

/// Terminating balanced-type 4F3 at unit argument.
pub fn hyp4f3_terminating(top: [C64; 4], bottom: [C64; 3]) -> Result<C64> {
    let mut n: Option<(usize, i64)> = None;
    for (i, p) in top.iter().enumerate() {
        if let Some(k) = near_nonpositive_int(*p) {
            if n.map_or(true, |(_, m)| k < m) {
                n = Some((i, k));
            }
        }
    }
    let (idx, n) = n.ok_or(Error::NonTerminating)?;
    for b in bottom {
        if let Some(k) = near_nonpositive_int(b) {
            if k < n {
                return Err(Error::BottomPole(format!("{b}")));
            }
        }
    }
    let mut top = top;
    top[idx] = C64::new(-(n as f64), 0.0);
    let mut t = C64::new(1.0, 0.0);
    let mut sum = t;
    for j in 0..n {
        let jf = j as f64;
        let num: C64 = top.iter().map(|p| p + jf).product();
        let den: C64 = bottom.iter().map(|p| p + jf).product::<C64>() * (jf + 1.0);
        t *= num / den;
        sum += t;
    }
    Ok(sum)
}

fn poch(a: C64, n: usize) -> C64 {
    (0..n).map(|k| a + k as f64).product()
}

/// Wilson polynomial W_n(x²; α, β, γ, δ).
pub fn wilson_poly(n: u32, x2: f64, alpha: C64, beta: C64, gamma: C64, delta: C64) -> Result<C64> {
    let n = n as usize;
    let x = if x2 >= 0.0 { C64::new(x2.sqrt(), 0.0) } else { C64::new(0.0, (-x2).sqrt()) };
    let ix = C64::new(-x.im, x.re);
    let pre = poch(alpha + beta, n) * poch(alpha + gamma, n) * poch(alpha + delta, n);
    if n == 0 {
        return Ok(pre);
    }
    let s = alpha + beta + gamma + delta;
    let f = hyp4f3_terminating(
        [C64::new(-(n as f64), 0.0), s + (n as f64 - 1.0), alpha - ix, alpha + ix],
        [alpha + beta, alpha + gamma, alpha + delta],
    )?;
    Ok(pre * f)
}

/// Laguerre polynomial L_n^α(x) with complex α, summed in a pole-free
/// form Σ_k (-x)^k/k! · binom(n+α, n-k).
pub fn laguerre_complex(n: u32, alpha: C64, x: f64) -> Result<C64> {
    let n = n as usize;
    // binom(n+α, n-k) for k = n down to 0
    let mut binom = C64::new(1.0, 0.0);
    let mut terms = vec![C64::new(0.0, 0.0); n + 1];
    terms[n] = binom;
    for k in (0..n).rev() {
        binom = binom * (alpha + (k + 1) as f64) / ((n - k) as f64);
        terms[k] = binom;
    }
    let mut pw = 1.0;
    let mut sum = C64::new(0.0, 0.0);
    for (k, b) in terms.iter().enumerate() {
        if k > 0 {
            pw *= -x / k as f64;
        }
        sum += b * pw;
    }
    Ok(sum)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::c;

    fn acc() -> SeriesAccuracy {
        SeriesAccuracy::default()
    }

    #[test]
    fn trivial_2f1() {
        let v = gauss_2f1(c(0.3, 1.0), c(-0.2, 0.5), c(1.5, 0.0), 0.0, acc()).unwrap();
        assert_eq!(v, c(1.0, 0.0));
        let b = c(0.7, -1.3);
        let cc = c(2.5, 0.4);
        for z in [-3.0, -0.7, 0.2, 0.9] {
            let v = gauss_2f1(c(-1.0, 0.0), b, cc, z, acc()).unwrap();
            let expect = C64::new(1.0, 0.0) - b / cc * z;
            assert!((v - expect).norm() < 1e-13 * expect.norm().max(1.0), "z={z}");
        }
    }

    #[test]
    fn pole_in_c() {
        assert!(matches!(gauss_2f1(c(1.0, 0.0), c(1.0, 0.0), c(-2.0, 0.0), 0.3, acc()), Err(Error::Pole(_))));
    }

    #[test]
    fn laguerre_closed_forms() {
        let a = c(0.5, 2.0);
        assert_eq!(laguerre_complex(0, a, 1.3).unwrap(), c(1.0, 0.0));
        let v = laguerre_complex(1, a, 1.3).unwrap();
        assert!((v - (a + 1.0 - 1.3)).norm() < 1e-15);
    }

    #[test]
    fn terminating_errors() {
        let one = c(1.0, 0.0);
        assert!(matches!(hyp4f3_terminating([c(0.5, 0.1), one, one, one], [one, one, one]), Err(Error::NonTerminating)));
        assert!(matches!(
            hyp4f3_terminating([c(-3.0, 0.0), one, one, one], [c(-1.0, 0.0), one, one]),
            Err(Error::BottomPole(_))
        ));
        assert_eq!(hyp4f3_terminating([c(0.0, 0.0), one, one, one], [one, one, one]).unwrap(), one);
    }
}
