//! Functional identities of the special functions over random arguments.

use hyperbasis::specfun::*;
use hyperbasis::verify::quad::{integrate_pieces, Tolerance};
use proptest::prelude::*;

fn acc() -> SeriesAccuracy {
    SeriesAccuracy::default()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn log_gamma_recurrence(re in 0.05f64..25.0, im in -40.0f64..40.0) {
        let z = C64::new(re, im);
        let ratio = (log_gamma(z + 1.0).unwrap() - log_gamma(z).unwrap()).exp() / z;
        prop_assert!((ratio - 1.0).norm() < 1e-12, "{z}: {ratio}");
    }

    // K_{i rho}(x) = int_0^inf exp(-x cosh t) cos(rho t) dt
    #[test]
    fn macdonald_cosine_integral(rho in 0.0f64..6.0, x in 0.2f64..12.0) {
        let top = (45.0 / x + 1.0).acosh();
        let breaks: Vec<f64> = (0..=40).map(|i| top * i as f64 / 40.0).collect();
        let q = integrate_pieces(|t| C64::new((-x * t.cosh()).exp() * (rho * t).cos(), 0.0), &breaks, Tolerance::new(1e-15, 1e-13))
            .unwrap();
        let k = macdonald_imag(rho, x, acc()).unwrap();
        // the cosine cancels most of K_0, so compare on the scale of K_0
        let scale = macdonald_imag(0.0, x, acc()).unwrap();
        prop_assert!((q.value.re - k).abs() <= 1e-10 * scale, "rho={rho} x={x}: {} vs {k}", q.value.re);
    }

    // c(c-1)(z-1)F(c-1) + c[c-1-(2c-a-b-1)z]F(c) + (c-a)(c-b)zF(c+1) = 0
    #[test]
    fn gauss_contiguous_relation(c0 in 0.1f64..0.9, rho in 0.0f64..4.0, c in 1.2f64..3.5, z in -6.0f64..0.6) {
        let a = C64::new(c0, 0.5 * rho);
        let b = a.conj();
        let cc = |v: f64| C64::new(v, 0.0);
        let f = |v: f64| gauss_2f1(a, b, cc(v), z, acc()).unwrap();
        let t1 = cc(c * (c - 1.0) * (z - 1.0)) * f(c - 1.0);
        let t2 = (cc(c * (c - 1.0)) - c * (2.0 * c - a - b - 1.0) * z) * f(c);
        let t3 = (c - a) * (c - b) * z * f(c + 1.0);
        let size = t1.norm() + t2.norm() + t3.norm();
        prop_assert!((t1 + t2 + t3).norm() <= 1e-11 * size);
    }

    // conjugate alpha, beta and real gamma, delta give real polynomials in x^2,
    // symmetric under alpha <-> beta and gamma <-> delta
    #[test]
    fn wilson_reality_and_symmetry(n in 0u32..6, c0 in 0.1f64..1.0, rho in 0.0f64..5.0, g in 0.1f64..1.5, d in 0.0f64..1.5, x in 0.0f64..6.0) {
        let a = C64::new(c0, 0.5 * rho);
        let (gc, dc) = (C64::new(g, 0.0), C64::new(d, 0.0));
        let w = wilson_poly(n, x * x, a, a.conj(), gc, dc).unwrap();
        let scale = wilson_poly(n, 0.0, a, a.conj(), gc, dc).unwrap().norm().max(w.norm()).max(1.0);
        prop_assert!(w.im.abs() <= 1e-11 * scale, "{w}");
        let swapped = wilson_poly(n, x * x, a.conj(), a, dc, gc).unwrap();
        prop_assert!((w - swapped).norm() <= 1e-11 * scale);
    }
}
