use hyperbasis::geometry::*;
use num_complex::Complex64;
use proptest::prelude::*;

fn amb(p: ChartPoint, r: f64) -> AmbientPoint {
    to_ambient(&p, r).unwrap()
}

fn same_ambient(a: AmbientPoint, b: AmbientPoint, tol: f64) -> bool {
    let s = a.u0.abs().max(1.0);
    (a.u0 - b.u0).abs() <= tol * s && (a.u1 - b.u1).abs() <= tol * s && (a.u2 - b.u2).abs() <= tol * s
}

proptest! {
    #[test]
    fn hyperboloid_constraint(t1 in -3.0f64..3.0, t2 in -3.0f64..3.0, r in 0.1f64..20.0) {
        let a = amb(ChartPoint::Equidistant(EquidistantPoint { tau1: t1, tau2: t2 }), r);
        let defect = (a.u0 * a.u0 - a.u1 * a.u1 - a.u2 * a.u2 - r * r).abs();
        prop_assert!(defect <= 1e-10 * a.u0 * a.u0);
        prop_assert!(a.u0 >= r);
    }

    #[test]
    fn transforms_preserve_ambient(t1 in -2.5f64..2.5, t2 in -2.5f64..2.5, r in 0.5f64..5.0) {
        let e = EquidistantPoint { tau1: t1, tau2: t2 };
        prop_assume!(t1.abs() + t2.abs() > 1e-3);
        let a = amb(ChartPoint::Equidistant(e), r);
        let h = ho_from_eq(&e);
        let s = ps_from_eq(&e).unwrap();
        prop_assert!(same_ambient(a, amb(ChartPoint::Horocyclic(h), r), 1e-11));
        prop_assert!(same_ambient(a, amb(ChartPoint::PseudoSpherical(s), r), 1e-11));
        prop_assert!(same_ambient(a, amb(ChartPoint::PseudoSpherical(ps_from_ho(&h).unwrap()), r), 1e-11));
    }

    #[test]
    fn three_chart_cycle(y in 0.05f64..8.0, x in -5.0f64..5.0) {
        let h = HorocyclicPoint { y_t: y, x_t: x };
        prop_assume!(x * x + (y - 1.0) * (y - 1.0) > 1e-4);
        let e = eq_from_ho(&h).unwrap();
        let p = ps_from_eq(&e).unwrap();
        let back = ho_from_ps(&p).unwrap();
        prop_assert!((back.y_t - y).abs() <= 1e-12 * y.max(1.0));
        prop_assert!((back.x_t - x).abs() <= 1e-12 * x.abs().max(1.0));
        let e2 = eq_from_ps(&ps_from_ho(&h).unwrap()).unwrap();
        prop_assert!((e2.tau1 - e.tau1).abs() < 1e-12 && (e2.tau2 - e.tau2).abs() < 1e-12);
    }

    #[test]
    fn beltrami_inside_disc(t in 0.0f64..6.0, phi in 0.0f64..6.28, r in 0.5f64..10.0) {
        let a = amb(ChartPoint::PseudoSpherical(PseudoSphericalPoint { tau: t, phi }), r);
        let (x1, x2) = beltrami(&a, r).unwrap();
        prop_assert!(x1 * x1 + x2 * x2 < r * r);
    }
}

fn jacobian(f: impl Fn([f64; 2]) -> [f64; 2], p: [f64; 2]) -> f64 {
    let h = 1e-6;
    let mut j = [[0.0; 2]; 2];
    for k in 0..2 {
        let mut a = p;
        let mut b = p;
        a[k] += h;
        b[k] -= h;
        let (fa, fb) = (f(a), f(b));
        for i in 0..2 {
            j[i][k] = (fa[i] - fb[i]) / (2.0 * h);
        }
    }
    (j[0][0] * j[1][1] - j[0][1] * j[1][0]).abs()
}

#[test]
fn area_weights_transform_with_jacobian() {
    let r = 1.3;
    for &(t1, t2) in &[(0.3, -0.7), (1.2, 0.4), (-0.8, 1.5), (0.05, 0.02)] {
        let e = EquidistantPoint { tau1: t1, tau2: t2 };
        let w_eq = area_weight(&ChartPoint::Equidistant(e), r).unwrap();
        let to_ho = |c: [f64; 2]| {
            let h = ho_from_eq(&EquidistantPoint { tau1: c[0], tau2: c[1] });
            [h.y_t, h.x_t]
        };
        let to_ps = |c: [f64; 2]| {
            let p = ps_from_eq(&EquidistantPoint { tau1: c[0], tau2: c[1] }).unwrap();
            [p.tau, p.phi]
        };
        let h = ho_from_eq(&e);
        let w_ho = area_weight(&ChartPoint::Horocyclic(h), r).unwrap() * jacobian(to_ho, [t1, t2]);
        let p = ps_from_eq(&e).unwrap();
        let w_ps = area_weight(&ChartPoint::PseudoSpherical(p), r).unwrap() * jacobian(to_ps, [t1, t2]);
        assert!((w_ho - w_eq).abs() <= 1e-9 * w_eq, "HO {w_ho} vs EQ {w_eq}");
        assert!((w_ps - w_eq).abs() <= 1e-9 * w_eq, "PS {w_ps} vs EQ {w_eq}");
    }
}

#[test]
fn casimir_matches_laplace_beltrami() {
    let r = 1.7;
    let points = [
        ChartPoint::Horocyclic(HorocyclicPoint { y_t: 1.4, x_t: -0.3 }),
        ChartPoint::PseudoSpherical(PseudoSphericalPoint { tau: 0.9, phi: 2.1 }),
        ChartPoint::Equidistant(EquidistantPoint { tau1: -0.4, tau2: 0.6 }),
    ];
    for i in 0..3 {
        let mono = Poly::var(3, i);
        let cas = casimir_apply(&mono);
        for p in &points {
            let f = |q: &ChartPoint| {
                let a = to_ambient(q, r)?;
                Ok(Complex64::new(mono.eval(&[a.u0, a.u1, a.u2]), 0.0))
            };
            let lb = laplace_beltrami_fd(p, r, 1e-3, f).unwrap().re * r * r;
            let a = to_ambient(p, r).unwrap();
            let want = cas.eval(&[a.u0, a.u1, a.u2]);
            assert!((lb - want).abs() <= 1e-6 * want.abs().max(r), "u{i} at {p:?}: {lb} vs {want}");
        }
    }
}
