use crate::{Error, Result};
use serde::{Deserialize, Serialize};
use std::f64::consts::TAU;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AmbientPoint {
    pub u0: f64,
    pub u1: f64,
    pub u2: f64,
}

/// Horocyclic chart (x̃, ỹ), ỹ > 0.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HorocyclicPoint {
    pub y_t: f64,
    pub x_t: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PseudoSphericalPoint {
    pub tau: f64,
    pub phi: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EquidistantPoint {
    pub tau1: f64,
    pub tau2: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Chart {
    Ambient,
    Horocyclic,
    PseudoSpherical,
    Equidistant,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum ChartPoint {
    Ambient(AmbientPoint),
    Horocyclic(HorocyclicPoint),
    PseudoSpherical(PseudoSphericalPoint),
    Equidistant(EquidistantPoint),
}

impl ChartPoint {
    pub fn chart(&self) -> Chart {
        match self {
            ChartPoint::Ambient(_) => Chart::Ambient,
            ChartPoint::Horocyclic(_) => Chart::Horocyclic,
            ChartPoint::PseudoSpherical(_) => Chart::PseudoSpherical,
            ChartPoint::Equidistant(_) => Chart::Equidistant,
        }
    }

    /// The two chart coordinates in their natural order (ξ¹, ξ²).
    pub fn coords(&self) -> [f64; 2] {
        match *self {
            ChartPoint::Ambient(a) => [a.u1, a.u2],
            ChartPoint::Horocyclic(p) => [p.y_t, p.x_t],
            ChartPoint::PseudoSpherical(p) => [p.tau, p.phi],
            ChartPoint::Equidistant(p) => [p.tau1, p.tau2],
        }
    }

    pub fn from_coords(chart: Chart, c: [f64; 2], r: f64) -> ChartPoint {
        match chart {
            Chart::Ambient => {
                let u0 = (r * r + c[0] * c[0] + c[1] * c[1]).sqrt();
                ChartPoint::Ambient(AmbientPoint { u0, u1: c[0], u2: c[1] })
            }
            Chart::Horocyclic => ChartPoint::Horocyclic(HorocyclicPoint { y_t: c[0], x_t: c[1] }),
            Chart::PseudoSpherical => ChartPoint::PseudoSpherical(PseudoSphericalPoint { tau: c[0], phi: c[1] }),
            Chart::Equidistant => ChartPoint::Equidistant(EquidistantPoint { tau1: c[0], tau2: c[1] }),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let ok = match *self {
            ChartPoint::Ambient(a) => a.u0.is_finite() && a.u1.is_finite() && a.u2.is_finite() && a.u0 > 0.0,
            ChartPoint::Horocyclic(p) => p.y_t > 0.0 && p.y_t.is_finite() && p.x_t.is_finite(),
            ChartPoint::PseudoSpherical(p) => p.tau >= 0.0 && p.tau.is_finite() && p.phi.is_finite(),
            ChartPoint::Equidistant(p) => p.tau1.is_finite() && p.tau2.is_finite(),
        };
        if ok {
            Ok(())
        } else {
            Err(Error::Domain(format!("point outside chart domain: {self:?}")))
        }
    }
}

fn check_r(r: f64) -> Result<()> {
    if r > 0.0 && r.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!("curvature radius must be positive, got {r}")))
    }
}

pub fn to_ambient(p: &ChartPoint, r: f64) -> Result<AmbientPoint> {
    check_r(r)?;
    p.validate()?;
    Ok(match *p {
        ChartPoint::Ambient(a) => {
            let defect = (a.u0 * a.u0 - a.u1 * a.u1 - a.u2 * a.u2 - r * r).abs();
            if defect > 1e-10 * (r * r).max(a.u0 * a.u0) || a.u0 < r * (1.0 - 1e-12) {
                return Err(Error::Domain(format!("ambient point off the hyperboloid (defect {defect:e})")));
            }
            a
        }
        ChartPoint::Horocyclic(h) => {
            let (x, y) = (h.x_t, h.y_t);
            let q = x * x + y * y;
            AmbientPoint { u0: r * (q + 1.0) / (2.0 * y), u1: r * (q - 1.0) / (2.0 * y), u2: r * x / y }
        }
        ChartPoint::PseudoSpherical(s) => {
            let sh = s.tau.sinh();
            AmbientPoint { u0: r * s.tau.cosh(), u1: r * sh * s.phi.cos(), u2: r * sh * s.phi.sin() }
        }
        ChartPoint::Equidistant(e) => {
            let c1 = e.tau1.cosh();
            AmbientPoint { u0: r * c1 * e.tau2.cosh(), u1: r * c1 * e.tau2.sinh(), u2: r * e.tau1.sinh() }
        }
    })
}

/// Inverse of `to_ambient` into the requested chart.
pub fn from_ambient(a: &AmbientPoint, r: f64, chart: Chart) -> Result<ChartPoint> {
    check_r(r)?;
    let a = to_ambient(&ChartPoint::Ambient(*a), r)?;
    let (u1, u2) = (a.u1 / r, a.u2 / r);
    Ok(match chart {
        Chart::Ambient => ChartPoint::Ambient(a),
        Chart::Horocyclic => {
            // u0 - u1 = R/ỹ
            let u0_minus_u1 = (1.0 + u2 * u2) / (a.u0 / r + u1);
            let y_t = 1.0 / u0_minus_u1;
            ChartPoint::Horocyclic(HorocyclicPoint { y_t, x_t: u2 * y_t })
        }
        Chart::PseudoSpherical => {
            let rho = u1.hypot(u2);
            if rho == 0.0 {
                return Err(Error::Domain("azimuth undefined at the apex".into()));
            }
            ChartPoint::PseudoSpherical(PseudoSphericalPoint { tau: rho.asinh(), phi: wrap_phi(u2.atan2(u1)) })
        }
        Chart::Equidistant => {
            let tau1 = u2.asinh();
            let tau2 = (u1 / tau1.cosh()).asinh();
            ChartPoint::Equidistant(EquidistantPoint { tau1, tau2 })
        }
    })
}

fn wrap_phi(phi: f64) -> f64 {
    let w = phi.rem_euclid(TAU);
    if w >= TAU {
        0.0
    } else {
        w
    }
}

pub fn ho_from_eq(p: &EquidistantPoint) -> HorocyclicPoint {
    let e = p.tau2.exp();
    HorocyclicPoint { y_t: e / p.tau1.cosh(), x_t: e * p.tau1.tanh() }
}

pub fn eq_from_ho(p: &HorocyclicPoint) -> Result<EquidistantPoint> {
    ChartPoint::Horocyclic(*p).validate()?;
    let q = p.x_t.hypot(p.y_t);
    Ok(EquidistantPoint { tau1: (p.x_t / p.y_t).asinh(), tau2: q.ln() })
}

pub fn eq_from_ps(p: &PseudoSphericalPoint) -> Result<EquidistantPoint> {
    ChartPoint::PseudoSpherical(*p).validate()?;
    let sh = p.tau.sinh();
    let tau1 = (sh * p.phi.sin()).asinh();
    // u1 = R cosh τ1 sinh τ2
    let tau2 = (sh * p.phi.cos() / tau1.cosh()).asinh();
    Ok(EquidistantPoint { tau1, tau2 })
}

pub fn ps_from_eq(p: &EquidistantPoint) -> Result<PseudoSphericalPoint> {
    ChartPoint::Equidistant(*p).validate()?;
    let u1 = p.tau1.cosh() * p.tau2.sinh();
    let u2 = p.tau1.sinh();
    let rho = u1.hypot(u2);
    if rho == 0.0 {
        return Err(Error::Domain("azimuth undefined at the apex".into()));
    }
    Ok(PseudoSphericalPoint { tau: rho.asinh(), phi: wrap_phi(p.tau1.tanh().atan2(p.tau2.sinh())) })
}

pub fn ho_from_ps(p: &PseudoSphericalPoint) -> Result<HorocyclicPoint> {
    ChartPoint::PseudoSpherical(*p).validate()?;
    let sh = p.tau.sinh();
    let half = (0.5 * p.phi).sin();
    // cosh τ − sinh τ cos φ written without cancellation
    let den = (-p.tau).exp() + 2.0 * sh * half * half;
    Ok(HorocyclicPoint { y_t: 1.0 / den, x_t: sh * p.phi.sin() / den })
}

pub fn ps_from_ho(p: &HorocyclicPoint) -> Result<PseudoSphericalPoint> {
    ChartPoint::Horocyclic(*p).validate()?;
    let (x, y) = (p.x_t, p.y_t);
    let d2 = x * x + (y - 1.0) * (y - 1.0);
    if d2 == 0.0 {
        return Err(Error::Domain("azimuth undefined at the apex".into()));
    }
    let tau = 2.0 * (d2 / (4.0 * y)).sqrt().asinh();
    let phi = wrap_phi((2.0 * x).atan2(x * x + y * y - 1.0));
    Ok(PseudoSphericalPoint { tau, phi })
}

/// Area density of the chart: dS = area_weight · dξ¹ dξ².
pub fn area_weight(p: &ChartPoint, r: f64) -> Result<f64> {
    check_r(r)?;
    p.validate()?;
    let r2 = r * r;
    Ok(match *p {
        ChartPoint::Ambient(a) => {
            // (u1, u2) chart: dS = R dU1 dU2 / u0
            r / to_ambient(&ChartPoint::Ambient(a), r)?.u0
        }
        ChartPoint::Horocyclic(h) => r2 / (h.y_t * h.y_t),
        ChartPoint::PseudoSpherical(s) => r2 * s.tau.sinh(),
        ChartPoint::Equidistant(e) => r2 * e.tau1.cosh(),
    })
}

/// Beltrami (gnomonic) coordinates x_μ = R u_μ / u0.
pub fn beltrami(a: &AmbientPoint, r: f64) -> Result<(f64, f64)> {
    let a = to_ambient(&ChartPoint::Ambient(*a), r)?;
    Ok((r * a.u1 / a.u0, r * a.u2 / a.u0))
}

/// Laplace–Beltrami operator of the chart applied to `f` at `p` by 5-point
/// central differences with step `h`.
pub fn laplace_beltrami_fd<F>(p: &ChartPoint, r: f64, h: f64, f: F) -> Result<num_complex::Complex64>
where
    F: Fn(&ChartPoint) -> Result<num_complex::Complex64>,
{
    check_r(r)?;
    p.validate()?;
    let chart = p.chart();
    let c = p.coords();
    let at = |d0: f64, d1: f64| f(&ChartPoint::from_coords(chart, [c[0] + d0, c[1] + d1], r));
    let f0 = at(0.0, 0.0)?;
    let d2 = |axis: usize| -> Result<num_complex::Complex64> {
        let s = |k: f64| if axis == 0 { at(k * h, 0.0) } else { at(0.0, k * h) };
        Ok((-s(2.0)? + 16.0 * s(1.0)? - 30.0 * f0 + 16.0 * s(-1.0)? - s(-2.0)?) / (12.0 * h * h))
    };
    let d1 = |axis: usize| -> Result<num_complex::Complex64> {
        let s = |k: f64| if axis == 0 { at(k * h, 0.0) } else { at(0.0, k * h) };
        Ok((-s(2.0)? + 8.0 * s(1.0)? - 8.0 * s(-1.0)? + s(-2.0)?) / (12.0 * h))
    };
    let r2 = r * r;
    Ok(match chart {
        Chart::Horocyclic => c[0] * c[0] / r2 * (d2(0)? + d2(1)?),
        Chart::PseudoSpherical => {
            let (sh, ch) = (c[0].sinh(), c[0].cosh());
            (d2(0)? + ch / sh * d1(0)? + d2(1)? / (sh * sh)) / r2
        }
        Chart::Equidistant => {
            let (sh, ch) = (c[0].sinh(), c[0].cosh());
            (d2(0)? + sh / ch * d1(0)? + d2(1)? / (ch * ch)) / r2
        }
        Chart::Ambient => return Err(Error::Domain("Laplace–Beltrami FD form is provided for the curvilinear charts".into())),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * (1.0 + b.abs())
    }

    #[test]
    fn apex_and_examples() {
        let a = to_ambient(&ChartPoint::Horocyclic(HorocyclicPoint { y_t: 1.0, x_t: 0.0 }), 1.0).unwrap();
        assert_eq!((a.u0, a.u1, a.u2), (1.0, 0.0, 0.0));
        let a = to_ambient(&ChartPoint::PseudoSpherical(PseudoSphericalPoint { tau: 0.0, phi: 1.3 }), 2.0).unwrap();
        assert_eq!((a.u0, a.u1, a.u2), (2.0, 0.0, 0.0));
        let a = to_ambient(&ChartPoint::Equidistant(EquidistantPoint { tau1: 0.3, tau2: -0.7 }), 1.0).unwrap();
        assert!(close(a.u0, 0.3f64.cosh() * 0.7f64.cosh(), 1e-15));
        assert!(close(a.u1, -(0.3f64.cosh()) * 0.7f64.sinh(), 1e-15));
        assert!(close(a.u2, 0.3f64.sinh(), 1e-15));
    }

    #[test]
    fn ho_eq_example() {
        let e = eq_from_ho(&HorocyclicPoint { y_t: 2.0, x_t: 1.0 }).unwrap();
        assert!(close(e.tau1.sinh(), 0.5, 1e-14));
        let s5 = 5f64.sqrt();
        assert!(close(e.tau2.sinh(), 0.5 * (s5 - 1.0 / s5), 1e-14));
        let h = ho_from_eq(&EquidistantPoint { tau1: 0.0, tau2: 0.0 });
        assert_eq!((h.y_t, h.x_t), (1.0, 0.0));
    }

    #[test]
    fn apex_rejected_for_azimuth() {
        assert!(ps_from_eq(&EquidistantPoint { tau1: 0.0, tau2: 0.0 }).is_err());
        assert!(ps_from_ho(&HorocyclicPoint { y_t: 1.0, x_t: 0.0 }).is_err());
        assert!(to_ambient(&ChartPoint::Horocyclic(HorocyclicPoint { y_t: -1.0, x_t: 0.0 }), 1.0).is_err());
    }

    #[test]
    fn weights_and_beltrami() {
        let w = area_weight(&ChartPoint::PseudoSpherical(PseudoSphericalPoint { tau: 0.0, phi: 0.0 }), 1.0).unwrap();
        assert_eq!(w, 0.0);
        let w = area_weight(&ChartPoint::Equidistant(EquidistantPoint { tau1: 0.0, tau2: 0.4 }), 3.0).unwrap();
        assert_eq!(w, 9.0);
        let w = area_weight(&ChartPoint::Horocyclic(HorocyclicPoint { y_t: 2.0, x_t: 0.4 }), 1.0).unwrap();
        assert_eq!(w, 0.25);
        let r = 1.7;
        let (x1, x2) = beltrami(&AmbientPoint { u0: 2f64.sqrt() * r, u1: r, u2: 0.0 }, r).unwrap();
        assert!(close(x1, r / 2f64.sqrt(), 1e-15) && x2 == 0.0);
    }
}
