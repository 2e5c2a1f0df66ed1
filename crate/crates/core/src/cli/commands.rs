use super::grid::{parse_grid, parse_int_grid};
use super::output::{Cell, Provenance, Table};
use super::{CoeffArgs, Cli, Command, ContractArgs, EvalArgs, Outcome, PotentialArgs, TolArgs, VerifyArgs};
use crate::bases::{evaluate, native_chart, Basis, Parity, Quantum, SpectralParams};
use crate::contraction::{fit_power_law, sample_sweep, FlatParams, Setup};
use crate::geometry::{Chart, ChartPoint, EquidistantPoint, HorocyclicPoint, PseudoSphericalPoint};
use crate::interbasis::{
    coeff_u, coeff_u_integral, coeff_v_nu_integral, coeff_v_phi_integral, coeff_v_series, coeff_w, CoefficientValue,
};
use crate::specfun::{SeriesAccuracy, C64};
use crate::verify::identities::{families, run_suite, suite_size};
use crate::verify::quad::Tolerance;
use crate::{Error, Result};
use rayon::prelude::*;
use std::f64::consts::FRAC_1_SQRT_2;

pub(super) fn dispatch(cli: &Cli) -> Result<Outcome> {
    let config = serde_json::to_value(cli).map_err(|e| Error::Internal(e.to_string()))?;
    let (table, quantity, failed) = match &cli.command {
        Command::Eval(a) => eval(a)?,
        Command::Coeff(a) => coeff(a)?,
        Command::Verify(a) => verify(a)?,
        Command::Contract(a) => contract(a)?,
        Command::Potential(a) => potential(a)?,
        Command::Figure(_) => return Err(Error::Internal("figure is not a table command".into())),
    };
    Ok(Outcome { table, provenance: Provenance { quantity, config }, failed })
}

type Built = (Table, String, bool);

fn finite(v: f64, name: &str) -> Result<f64> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::Config(format!("{name} must be finite, got {v}")))
    }
}

/// Flags that were given although the selected mode does not use them.
fn reject(mode: &str, flags: &[(&str, bool)]) -> Result<()> {
    let extra: Vec<&str> = flags.iter().filter(|(_, set)| *set).map(|(n, _)| *n).collect();
    if extra.is_empty() {
        Ok(())
    } else {
        Err(Error::Config(format!("{mode} does not take {}", extra.join(", "))))
    }
}

fn required<'a>(v: &'a Option<String>, flag: &str, mode: &str) -> Result<&'a str> {
    v.as_deref().ok_or_else(|| Error::Config(format!("{mode} needs {flag}")))
}

fn grid_or(v: &Option<String>, default: &str) -> Result<Vec<f64>> {
    parse_grid(v.as_deref().unwrap_or(default))
}

fn parse_parity(p: Option<&str>) -> Result<Vec<Parity>> {
    match p.unwrap_or("both") {
        "even" | "+" => Ok(vec![Parity::Even]),
        "odd" | "-" => Ok(vec![Parity::Odd]),
        "both" => Ok(vec![Parity::Even, Parity::Odd]),
        other => Err(Error::Config(format!("parity must be even, odd or both, got '{other}'"))),
    }
}

fn parity_tag(p: Parity) -> &'static str {
    match p {
        Parity::Even => "+",
        Parity::Odd => "-",
    }
}

fn eval(a: &EvalArgs) -> Result<Built> {
    let basis = Basis::parse(&a.basis)?;
    let r = finite(a.radius, "radius")?;
    let rhos = parse_grid(&a.rho)?;
    let mode = format!("eval {}", basis.name());
    let (qname, qs): (&str, Vec<Quantum>) = match basis {
        Basis::Ho => {
            reject(&mode, &[("--m", a.m.is_some()), ("--nu", a.nu.is_some())])?;
            ("s", parse_grid(required(&a.s, "--s", &mode)?)?.into_iter().map(Quantum::S).collect())
        }
        Basis::Ps => {
            reject(&mode, &[("--s", a.s.is_some()), ("--nu", a.nu.is_some())])?;
            ("m", parse_int_grid(required(&a.m, "--m", &mode)?)?.into_iter().map(Quantum::M).collect())
        }
        _ => {
            reject(&mode, &[("--s", a.s.is_some()), ("--m", a.m.is_some())])?;
            ("nu", parse_grid(required(&a.nu, "--nu", &mode)?)?.into_iter().map(Quantum::Nu).collect())
        }
    };
    let chart = native_chart(basis);
    let ho_set = [("--xt", a.xt.is_some()), ("--yt", a.yt.is_some())];
    let ps_set = [("--tau", a.tau.is_some()), ("--phi", a.phi.is_some())];
    let eq_set = [("--tau1", a.tau1.is_some()), ("--tau2", a.tau2.is_some())];
    let (names, g1, g2) = match chart {
        Chart::Horocyclic => {
            reject(&mode, &[ps_set, eq_set].concat())?;
            (["xt", "yt"], grid_or(&a.xt, "0")?, grid_or(&a.yt, "1")?)
        }
        Chart::PseudoSpherical => {
            reject(&mode, &[ho_set, eq_set].concat())?;
            (["tau", "phi"], grid_or(&a.tau, "1")?, grid_or(&a.phi, "0")?)
        }
        _ => {
            reject(&mode, &[ho_set, ps_set].concat())?;
            (["tau1", "tau2"], grid_or(&a.tau1, "0")?, grid_or(&a.tau2, "0")?)
        }
    };
    let mut jobs = Vec::new();
    for &rho in &rhos {
        for &q in &qs {
            for &c1 in &g1 {
                for &c2 in &g2 {
                    jobs.push((rho, q, c1, c2));
                }
            }
        }
    }
    let vals: Vec<C64> = jobs
        .par_iter()
        .map(|&(rho, q, c1, c2)| {
            let sp = SpectralParams::new(r, rho, q)?;
            let p = match chart {
                Chart::Horocyclic => ChartPoint::Horocyclic(HorocyclicPoint { x_t: c1, y_t: c2 }),
                Chart::PseudoSpherical => ChartPoint::PseudoSpherical(PseudoSphericalPoint { tau: c1, phi: c2 }),
                _ => ChartPoint::Equidistant(EquidistantPoint { tau1: c1, tau2: c2 }),
            };
            p.validate()?;
            Ok(evaluate(basis, &sp, &p)?.value)
        })
        .collect::<Result<_>>()?;
    let mut t = Table::new(&["basis", "R", "rho", qname, names[0], names[1], "re", "im"]);
    for (&(rho, q, c1, c2), v) in jobs.iter().zip(vals) {
        let qc: Cell = match q {
            Quantum::S(s) => s.into(),
            Quantum::M(m) => m.into(),
            Quantum::Nu(nu) => nu.into(),
        };
        t.push(vec![basis.name().into(), r.into(), rho.into(), qc, c1.into(), c2.into(), v.re.into(), v.im.into()]);
    }
    Ok((t, format!("normalized {} wavefunction", basis.name()), false))
}

#[derive(Clone, Copy)]
enum Family {
    W(Parity),
    U(Parity),
    V,
}

fn tolerances(t: &TolArgs, default: Tolerance) -> Result<Tolerance> {
    let mut tol = default;
    if let Some(a) = t.quad_abs {
        tol.abs = positive(a, "--quad-abs")?;
    }
    if let Some(r) = t.quad_rel {
        tol.rel = positive(r, "--quad-rel")?;
    }
    Ok(tol)
}

fn positive(v: f64, name: &str) -> Result<f64> {
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(Error::Config(format!("{name} must be positive and finite, got {v}")))
    }
}

fn coeff(a: &CoeffArgs) -> Result<Built> {
    let fam = match a.family.as_str() {
        "W+" | "w+" => Family::W(Parity::Even),
        "W-" | "w-" => Family::W(Parity::Odd),
        "U+" | "u+" => Family::U(Parity::Even),
        "U-" | "u-" => Family::U(Parity::Odd),
        "V" | "v" => Family::V,
        other => return Err(Error::Config(format!("unknown coefficient family '{other}' (W+, W-, U+, U-, V)"))),
    };
    let rhos = parse_grid(&a.rho)?;
    let mode = format!("coeff {}", a.family);
    let routes: Vec<&str> = match (fam, a.route.as_str()) {
        (Family::W(_), "default" | "all" | "closed_form") => vec!["closed_form"],
        (Family::U(_), "default" | "wilson") => vec!["wilson"],
        (Family::U(_), "mu_integral") => vec!["mu_integral"],
        (Family::U(_), "all") => vec!["wilson", "mu_integral"],
        (Family::V, "default" | "laguerre_series") => vec!["laguerre_series"],
        (Family::V, "nu_integral") => vec!["nu_integral"],
        (Family::V, "phi_integral") => vec!["phi_integral"],
        (Family::V, "all") => vec!["laguerre_series", "nu_integral", "phi_integral"],
        (_, r) => return Err(Error::Config(format!("route '{r}' is not available for {}", a.family))),
    };
    let quad = tolerances(&a.tol, Tolerance::default())?;
    let phi_tol = tolerances(&a.tol, Tolerance::new(1e-14, 1e-10))?;
    let mut acc = SeriesAccuracy::default();
    if let Some(r) = a.tol.series_rel {
        acc = SeriesAccuracy::new(r, acc.max_terms)?;
    }
    if let Some(n) = a.tol.series_max_terms {
        acc = SeriesAccuracy::new(acc.rel_tol, n)?;
    }
    let tau = positive(a.tol.tau_probe.unwrap_or(0.5), "--tau-probe")?;

    // (first label, second label) columns per family
    let (cols, g1, g2): ([&str; 2], Vec<f64>, Vec<f64>) = match fam {
        Family::W(_) => {
            reject(&mode, &[("--m", a.m.is_some())])?;
            (["s", "nu"], parse_grid(required(&a.s, "--s", &mode)?)?, parse_grid(required(&a.nu, "--nu", &mode)?)?)
        }
        Family::U(_) => {
            reject(&mode, &[("--s", a.s.is_some())])?;
            let ms = parse_int_grid(required(&a.m, "--m", &mode)?)?;
            (["m", "nu"], ms.iter().map(|&m| m as f64).collect(), parse_grid(required(&a.nu, "--nu", &mode)?)?)
        }
        Family::V => {
            reject(&mode, &[("--nu", a.nu.is_some())])?;
            let ms = parse_int_grid(required(&a.m, "--m", &mode)?)?;
            (["m", "s"], ms.iter().map(|&m| m as f64).collect(), parse_grid(required(&a.s, "--s", &mode)?)?)
        }
    };
    let mut jobs = Vec::new();
    for &rho in &rhos {
        for &p1 in &g1 {
            for &p2 in &g2 {
                jobs.push((rho, p1, p2));
            }
        }
    }
    let one = |route: &str, rho: f64, p1: f64, p2: f64| -> Result<CoefficientValue> {
        match fam {
            Family::W(par) => coeff_w(rho, p1, p2, par),
            Family::U(par) if route == "wilson" => coeff_u(rho, p2, p1 as i64, par),
            Family::U(par) => coeff_u_integral(rho, p2, p1 as i64, par, quad),
            Family::V => match route {
                "laguerre_series" => coeff_v_series(rho, p2, p1 as i64, acc),
                "nu_integral" => coeff_v_nu_integral(rho, p2, p1 as i64, quad),
                _ => coeff_v_phi_integral(rho, p2, p1 as i64, tau, phi_tol),
            },
        }
    };
    let vals: Vec<Vec<CoefficientValue>> = jobs
        .par_iter()
        .map(|&(rho, p1, p2)| routes.iter().map(|r| one(r, rho, p1, p2)).collect::<Result<Vec<_>>>())
        .collect::<Result<_>>()?;

    let all = routes.len() > 1;
    let mut cols_v = vec!["family", "rho", cols[0], cols[1], "route", "re", "im", "err_est"];
    if all {
        cols_v.push("route_gap");
    }
    let mut t = Table::new(&cols_v);
    let is_int = !matches!(fam, Family::W(_));
    for (&(rho, p1, p2), vs) in jobs.iter().zip(&vals) {
        let mut gap = 0.0f64;
        for i in 0..vs.len() {
            for j in i + 1..vs.len() {
                gap = gap.max((vs[i].value - vs[j].value).norm());
            }
        }
        for v in vs {
            let c1: Cell = if is_int { (p1 as i64).into() } else { p1.into() };
            let mut row = vec![
                a.family.to_uppercase().into(),
                rho.into(),
                c1,
                p2.into(),
                v.route.name().into(),
                v.value.re.into(),
                v.value.im.into(),
                v.err_est.into(),
            ];
            if all {
                row.push(gap.into());
            }
            t.push(row);
        }
    }
    Ok((t, format!("interbasis coefficient {}", a.family.to_uppercase()), false))
}

fn verify(a: &VerifyArgs) -> Result<Built> {
    if a.list {
        let mut t = Table::new(&["family", "checks"]);
        for f in families() {
            t.push(vec![f.into(), (suite_size(f) as i64).into()]);
        }
        return Ok((t, "identity suite families".into(), false));
    }
    if suite_size(&a.filter) == 0 {
        return Err(Error::Config(format!("filter '{}' matches no checks", a.filter)));
    }
    let reports = run_suite(&a.filter);
    let mut t = Table::new(&[
        "id", "family", "passed", "lhs_re", "lhs_im", "rhs_re", "rhs_im", "abs_err", "rel_err", "tol", "err_budget", "params",
        "error",
    ]);
    let mut failed = 0;
    for r in &reports {
        if !r.passed {
            failed += 1;
            eprintln!("FAIL {} [{}] {} abs_err={:.3e} {}", r.id, r.family, r.params_string(), r.abs_err, r.error.as_deref().unwrap_or(""));
        }
        t.push(vec![
            r.id.as_str().into(),
            r.family.as_str().into(),
            r.passed.into(),
            r.lhs.re.into(),
            r.lhs.im.into(),
            r.rhs.re.into(),
            r.rhs.im.into(),
            r.abs_err.into(),
            r.rel_err.into(),
            r.tol.into(),
            r.err_budget.into(),
            r.params_string().into(),
            r.error.clone().unwrap_or_default().into(),
        ]);
    }
    eprintln!("verify: {}/{} identities passed", reports.len() - failed, reports.len());
    Ok((t, "identity reports".into(), failed > 0))
}

fn contract(a: &ContractArgs) -> Result<Built> {
    let k = finite(a.k, "--k")?;
    for (v, n) in [(a.k1, "--k1"), (a.k2, "--k2"), (a.k2p, "--k2p")] {
        if let Some(v) = v {
            finite(v, n)?;
        }
    }
    let rs = parse_grid(&a.r_list)?;
    let target = a.target.to_lowercase();
    let mode = format!("contract {target}");
    let no_band = ("--single-k2", a.single_k2);
    let mut setups: Vec<(String, Setup)> = Vec::new();
    let probe_cols: Vec<&str>;
    match target.as_str() {
        "ps" => {
            reject(&mode, &[("--k1", a.k1.is_some()), ("--k2", a.k2.is_some()), ("--k2p", a.k2p.is_some()), ("--parity", a.parity.is_some()), ("--x", a.x.is_some()), ("--y", a.y.is_some()), ("--alpha", a.alpha.is_some()), no_band])?;
            let fp = FlatParams::from_angle(k, 0.0)?;
            let rg = grid_or(&a.r, "0:10:41")?;
            let pg = grid_or(&a.phi, "0")?;
            let pts: Vec<(f64, f64)> = rg.iter().flat_map(|&r| pg.iter().map(move |&p| (r, p))).collect();
            for m in parse_int_grid(a.m.as_deref().unwrap_or("2"))? {
                setups.push((format!("m={m}"), Setup::Ps { fp, m, points: pts.clone() }));
            }
            probe_cols = vec!["r", "phi"];
        }
        "eq" => {
            reject(&mode, &[("--m", a.m.is_some()), ("--k2", a.k2.is_some()), ("--k2p", a.k2p.is_some()), ("--r", a.r.is_some()), ("--phi", a.phi.is_some()), ("--alpha", a.alpha.is_some()), no_band])?;
            let fp = FlatParams::from_k_k1(k, a.k1.unwrap_or(0.2))?;
            let pts = xy_points(a, "0", "-6:6:25")?;
            for p in parse_parity(a.parity.as_deref())? {
                setups.push((format!("parity={}", parity_tag(p)), Setup::Eq { fp, parity: p, points: pts.clone() }));
            }
            probe_cols = vec!["x", "y"];
        }
        "ho" => {
            reject(&mode, &[("--m", a.m.is_some()), ("--k1", a.k1.is_some()), ("--k2p", a.k2p.is_some()), ("--parity", a.parity.is_some()), ("--r", a.r.is_some()), ("--phi", a.phi.is_some()), ("--alpha", a.alpha.is_some()), no_band])?;
            let k2 = a.k2.unwrap_or(FRAC_1_SQRT_2 * k);
            if !(k2.abs() < k && k2 != 0.0) {
                return Err(Error::Domain(format!("horocyclic contraction needs k > |k2| > 0 (k = {k}, k2 = {k2})")));
            }
            let fp = FlatParams::from_k_k2(k, k2)?;
            setups.push((format!("k2={k2}"), Setup::Ho { fp, points: xy_points(a, "-2:2:9", "0")? }));
            probe_cols = vec!["x", "y"];
        }
        "u" => {
            reject(&mode, &[("--k1", a.k1.is_some()), ("--k2", a.k2.is_some()), ("--k2p", a.k2p.is_some()), ("--r", a.r.is_some()), ("--phi", a.phi.is_some()), ("--x", a.x.is_some()), ("--y", a.y.is_some()), no_band])?;
            let alphas = grid_or(&a.alpha, "0.4:2.47:10")?;
            for m in parse_int_grid(a.m.as_deref().unwrap_or("2"))? {
                for p in parse_parity(a.parity.as_deref())? {
                    setups.push((format!("m={m},parity={}", parity_tag(p)), Setup::U { k, m, parity: p, alphas: alphas.clone() }));
                }
            }
            probe_cols = vec!["alpha"];
        }
        "w" => {
            reject(&mode, &[("--m", a.m.is_some()), ("--k2", a.k2.is_some()), ("--parity", a.parity.is_some()), ("--r", a.r.is_some()), ("--phi", a.phi.is_some()), ("--x", a.x.is_some()), ("--y", a.y.is_some()), ("--alpha", a.alpha.is_some()), no_band])?;
            let k1 = a.k1.unwrap_or(FRAC_1_SQRT_2 * k);
            let k2p = a.k2p.unwrap_or(FRAC_1_SQRT_2 * k);
            setups.push((format!("k1={k1},k2p={k2p}"), Setup::W { k, k1, k2p }));
            // +1: W+ against its asymptote, -1: W- against i·sign(k2')·W+
            probe_cols = vec!["branch"];
        }
        "v" => {
            reject(&mode, &[("--k1", a.k1.is_some()), ("--k2p", a.k2p.is_some()), ("--parity", a.parity.is_some()), ("--r", a.r.is_some()), ("--phi", a.phi.is_some()), ("--x", a.x.is_some()), ("--y", a.y.is_some()), ("--alpha", a.alpha.is_some())])?;
            let k2 = a.k2.unwrap_or(FRAC_1_SQRT_2 * k);
            for m in parse_int_grid(a.m.as_deref().unwrap_or("1,2"))? {
                setups.push((format!("m={m}"), Setup::V { k, k2, m, band: !a.single_k2 }));
            }
            probe_cols = vec!["k2"];
        }
        other => return Err(Error::Config(format!("unknown contraction target '{other}' (ps, eq, ho, U, W, V)"))),
    }

    let mut t = if a.samples {
        let mut c = vec!["target", "series", "R"];
        c.extend(&probe_cols);
        c.extend(["value_re", "value_im", "target_re", "target_im", "abs_gap"]);
        Table::new(&c)
    } else {
        Table::new(&["target", "series", "R", "error", "fit_residual", "fitted_exponent", "fitted_prefactor", "strictly_decreasing"])
    };
    for (series, setup) in &setups {
        let per_r = sample_sweep(setup, &rs)?;
        let name = setup.name();
        if a.samples {
            for (_, samples) in &per_r {
                for s in samples {
                    let mut row: Vec<Cell> = vec![name.into(), series.as_str().into(), s.r_big.into()];
                    row.extend(s.probe.iter().map(|&p| Cell::from(p)));
                    row.extend([s.value.re, s.value.im, s.target.re, s.target.im, (s.value - s.target).norm()].map(Cell::from));
                    t.push(row);
                }
            }
        } else {
            let errors: Vec<f64> = per_r.iter().map(|(e, _)| *e).collect();
            let fit = if rs.len() >= 2 { fit_power_law(&rs, &errors).ok() } else { None };
            let (slope, pref) = fit.unwrap_or((f64::NAN, f64::NAN));
            let decreasing = errors.windows(2).all(|w| w[1] < w[0]);
            for (r, e) in rs.iter().zip(&errors) {
                let resid = e.ln() - (pref.ln() + slope * r.ln());
                t.push(vec![
                    name.into(),
                    series.as_str().into(),
                    (*r).into(),
                    (*e).into(),
                    resid.into(),
                    slope.into(),
                    pref.into(),
                    decreasing.into(),
                ]);
            }
        }
    }
    let what = if a.samples { "samples" } else { "error curve" };
    Ok((t, format!("contraction {target} {what}"), false))
}

fn xy_points(a: &ContractArgs, dx: &str, dy: &str) -> Result<Vec<(f64, f64)>> {
    let xs = grid_or(&a.x, dx)?;
    let ys = grid_or(&a.y, dy)?;
    Ok(xs.iter().flat_map(|&x| ys.iter().map(move |&y| (x, y))).collect())
}

fn potential(a: &PotentialArgs) -> Result<Built> {
    let mut t;
    match a.chart.as_str() {
        "ps" => {
            reject("potential ps", &[("--nu", a.nu.is_some())])?;
            let taus = grid_or(&a.tau, "0.05:3:300")?;
            if taus.iter().any(|&x| x <= 0.0) {
                return Err(Error::Domain("the pseudo-spherical potential needs tau > 0".into()));
            }
            t = Table::new(&["chart", "m", "tau", "V"]);
            for m in parse_int_grid(required(&a.m, "--m", "potential ps")?)? {
                for &x in &taus {
                    let s = x.sinh();
                    t.push(vec!["ps".into(), m.into(), x.into(), (((m * m) as f64 - 0.25) / (2.0 * s * s)).into()]);
                }
            }
        }
        "eq" => {
            reject("potential eq", &[("--m", a.m.is_some())])?;
            let taus = grid_or(&a.tau, "-4:4:401")?;
            t = Table::new(&["chart", "nu", "tau1", "V"]);
            for nu in parse_grid(required(&a.nu, "--nu", "potential eq")?)? {
                for &x in &taus {
                    let c = x.cosh();
                    t.push(vec!["eq".into(), nu.into(), x.into(), ((nu * nu + 0.25) / (2.0 * c * c)).into()]);
                }
            }
        }
        other => return Err(Error::Config(format!("unknown potential chart '{other}' (ps or eq)"))),
    }
    Ok((t, format!("effective potential ({})", a.chart), false))
}
