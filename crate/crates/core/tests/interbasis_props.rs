use hyperbasis::bases::Parity;
use hyperbasis::interbasis::*;
use hyperbasis::specfun::{arg_gamma, SeriesAccuracy, C64};
use hyperbasis::verify::Tolerance;
use proptest::prelude::*;
use serde_json::Value;

fn table() -> Value {
    serde_json::from_str(include_str!("data/interbasis_oracle.json")).unwrap()
}

fn f(v: &Value) -> f64 {
    v.as_f64().unwrap()
}

fn cx(v: &Value) -> C64 {
    C64::new(f(&v[0]), f(&v[1]))
}

fn par(p: i64) -> Parity {
    if p > 0 {
        Parity::Even
    } else {
        Parity::Odd
    }
}

#[test]
fn u_matches_reference_both_routes() {
    for r in table()["u"].as_array().unwrap() {
        let (rho, nu, m, p) = (f(&r[0]), f(&r[1]), r[2].as_i64().unwrap(), par(r[3].as_i64().unwrap()));
        let want = cx(&r[4]);
        let w = coeff_u(rho, nu, m, p).unwrap().value;
        assert!((w - want).norm() < 1e-12, "Wilson {r}: {w}");
        let q = coeff_u_integral(rho, nu, m, p, Tolerance::new(1e-13, 1e-12)).unwrap().value;
        assert!((q - want).norm() < 1e-10, "mu-integral {r}: {q}");
    }
}

#[test]
fn v_matches_reference_all_routes() {
    let tol = Tolerance::new(1e-12, 1e-11);
    for r in table()["v"].as_array().unwrap() {
        let (rho, s, m) = (f(&r[0]), f(&r[1]), r[2].as_i64().unwrap());
        let want = cx(&r[3]);
        let a = coeff_v_series(rho, s, m, SeriesAccuracy::default()).unwrap().value;
        let b = coeff_v_nu_integral(rho, s, m, tol).unwrap().value;
        let c = coeff_v_phi_integral(rho, s, m, 0.7, tol).unwrap().value;
        for (name, v) in [("series", a), ("nu", b), ("phi", c)] {
            assert!((v - want).norm() < 1e-9, "{name} {r}: {v}");
        }
    }
}

#[test]
fn phi_route_probe_independent() {
    let tol = Tolerance::new(1e-12, 1e-11);
    for m in [-1i64, 1] {
        let a = coeff_v_phi_integral(1.0, 1.0, m, 0.5, tol).unwrap().value;
        let b = coeff_v_phi_integral(1.0, 1.0, m, 1.0, tol).unwrap().value;
        assert!((a - b).norm() < 1e-7);
    }
}

#[test]
fn w_modulus_and_m0_limits() {
    let tol = Tolerance::new(1e-12, 1e-11);
    let v = coeff_v_phi_integral(1.3, 0.8, 0, 1e-3, tol).unwrap().value;
    let c = coeff_v_m0(1.3, 0.8).unwrap().value;
    assert!((v - c).norm() < 1e-8);
}

#[test]
fn kernel_integral_representation() {
    // K_{iρ}(|s|) = (1/(4π√(2|s|)))∫Γ(1/4+i(ρ−ν)/2)Γ(1/4−i(ρ+ν)/2)(|s|/2)^{iν}dν at ρ = 1, s = 2
    let (rho, s) = (1.0f64, 2.0f64);
    let f = |nu: f64| {
        let ph = arg_gamma(C64::new(0.25, 0.5 * (rho - nu))).unwrap() + arg_gamma(C64::new(0.25, -0.5 * (rho + nu))).unwrap();
        let md = (hyperbasis::specfun::abs_gamma_ln(C64::new(0.25, 0.5 * (rho - nu))).unwrap()
            + hyperbasis::specfun::abs_gamma_ln(C64::new(0.25, -0.5 * (rho + nu))).unwrap())
        .exp();
        C64::from_polar(md, ph + nu * (0.5 * s).ln())
    };
    let q = hyperbasis::verify::integrate(f, -80.0, 80.0, Tolerance::new(1e-12, 1e-12)).unwrap();
    // the constant follows from composing 𝒲^{(+)} with the m = 0 closed form of 𝒰
    let k = q.value / (4.0 * std::f64::consts::PI * (2.0 * s).sqrt());
    let want = hyperbasis::specfun::macdonald_imag(rho, s, SeriesAccuracy::default()).unwrap();
    assert!((k - C64::new(want, 0.0)).norm() < 1e-7, "{k} vs {want}");
}

proptest! {
    #[test]
    fn unimodular_phases(rho in 0.0f64..20.0, nu in -30.0f64..30.0) {
        for p in [Parity::Even, Parity::Odd] {
            let fv = phase_f(p, rho, nu).unwrap();
            let gv = phase_g(p, rho, nu).unwrap();
            prop_assert!((fv.norm() - 1.0).abs() < 1e-12);
            prop_assert!((gv.norm() - 1.0).abs() < 1e-12);
            prop_assert!((gv * gv.conj() - 1.0).norm() < 1e-12);
            prop_assert!((phase_f(p, rho, -nu).unwrap() - fv.conj()).norm() < 1e-12);
            let c = if p == Parity::Even { 0.25 } else { 0.75 };
            let link = C64::from_polar(1.0, 2.0 * arg_gamma(C64::new(c, -0.5 * (rho + nu))).unwrap());
            prop_assert!((fv * gv - link).norm() < 1e-10);
        }
        prop_assert!((phase_f(Parity::Even, rho, 0.0).unwrap() - 1.0).norm() < 1e-14);
    }

    #[test]
    fn w_properties(rho in 0.0f64..20.0, nu in -30.0f64..30.0, s in prop_oneof![-8.0f64..-0.01, 0.01f64..8.0]) {
        for p in [Parity::Even, Parity::Odd] {
            let w = coeff_w(rho, s, nu, p).unwrap().value;
            let want = 1.0 / (4.0 * std::f64::consts::PI * s.abs());
            prop_assert!((w.norm_sqr() - want).abs() <= 1e-10 * want);
            let flip = coeff_w(rho, -s, nu, p).unwrap().value;
            prop_assert!((flip - p.sign() * w).norm() < 1e-13 * w.norm());
            let neg = coeff_w(rho, s, -nu, p).unwrap().value;
            prop_assert!((neg - p.sign() * w.conj()).norm() < 1e-12 * w.norm());
        }
    }

    #[test]
    fn u_symmetries_and_reality(rho in 0.1f64..6.0, nu in -6.0f64..6.0, m in -7i64..8) {
        for p in [Parity::Even, Parity::Odd] {
            let u = coeff_u(rho, nu, m, p).unwrap().value;
            let scale = u.norm().max(1e-300);
            let um = coeff_u(rho, nu, -m, p).unwrap().value;
            prop_assert!((um - p.sign() * u).norm() <= 1e-12 * scale);
            let nsign = if m % 2 == 0 { p.sign() } else { -p.sign() };
            let un = coeff_u(rho, -nu, m, p).unwrap().value;
            prop_assert!((un - nsign * u).norm() <= 1e-12 * scale);
        }
    }
}
