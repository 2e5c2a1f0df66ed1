//! Exact first-order differential operators with integer polynomial
//! coefficients, enough to check Lie-algebra commutators symbolically.

use crate::{Error, Result};
use std::collections::BTreeMap;
use std::fmt;

/// Multivariate polynomial with integer coefficients. Keys are exponent vectors.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Poly {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, i64>,
}

impl Poly {
    pub fn zero(nvars: usize) -> Self {
        Poly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: i64) -> Self {
        let mut p = Poly::zero(nvars);
        p.add_term(vec![0; nvars], c);
        p
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        let mut p = Poly::zero(nvars);
        p.add_term(e, 1);
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    fn add_term(&mut self, e: Vec<u32>, c: i64) {
        if c == 0 {
            return;
        }
        let slot = self.terms.entry(e).or_insert(0);
        *slot += c;
        if *slot == 0 {
            self.terms.retain(|_, v| *v != 0);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &i64)> {
        self.terms.iter()
    }

    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|e| e.iter().sum()).max().unwrap_or(0)
    }

    pub fn add(&self, o: &Poly) -> Poly {
        let mut r = self.clone();
        for (e, c) in &o.terms {
            r.add_term(e.clone(), *c);
        }
        r
    }

    pub fn scale(&self, k: i64) -> Poly {
        let mut r = Poly::zero(self.nvars);
        for (e, c) in &self.terms {
            r.add_term(e.clone(), c * k);
        }
        r
    }

    pub fn sub(&self, o: &Poly) -> Poly {
        self.add(&o.scale(-1))
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        let mut r = Poly::zero(self.nvars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &o.terms {
                let e: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                r.add_term(e, c1 * c2);
            }
        }
        r
    }

    pub fn diff(&self, i: usize) -> Poly {
        let mut r = Poly::zero(self.nvars);
        for (e, c) in &self.terms {
            if e[i] > 0 {
                let mut e2 = e.clone();
                e2[i] -= 1;
                r.add_term(e2, c * e[i] as i64);
            }
        }
        r
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|(e, c)| *c as f64 * e.iter().zip(x).map(|(k, v)| v.powi(*k as i32)).product::<f64>())
            .sum()
    }
}

/// Σ_i c_i(vars) ∂/∂vars_i over the first `ndiff` variables; the remaining
/// variables are constant parameters (e.g. 1/R²).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiffOperator {
    names: Vec<String>,
    ndiff: usize,
    coeffs: Vec<Poly>,
}

impl DiffOperator {
    pub fn new(names: &[&str], ndiff: usize, coeffs: Vec<Poly>) -> Result<Self> {
        if coeffs.len() != ndiff || ndiff > names.len() || coeffs.iter().any(|p| p.nvars() != names.len()) {
            return Err(Error::Internal("operator shape mismatch".into()));
        }
        Ok(DiffOperator { names: names.iter().map(|s| s.to_string()).collect(), ndiff, coeffs })
    }

    pub fn zero_like(&self) -> Self {
        DiffOperator { names: self.names.clone(), ndiff: self.ndiff, coeffs: vec![Poly::zero(self.names.len()); self.ndiff] }
    }

    pub fn coeffs(&self) -> &[Poly] {
        &self.coeffs
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Poly::is_zero)
    }

    pub fn max_degree(&self) -> u32 {
        self.coeffs.iter().map(Poly::degree).max().unwrap_or(0)
    }

    fn same_space(&self, o: &Self) -> Result<()> {
        if self.names == o.names && self.ndiff == o.ndiff {
            Ok(())
        } else {
            Err(Error::Internal("operators live on different variable sets".into()))
        }
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        self.same_space(o)?;
        let coeffs = self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a.add(b)).collect();
        Ok(DiffOperator { coeffs, ..self.clone() })
    }

    pub fn sub(&self, o: &Self) -> Result<Self> {
        self.add(&o.scale(-1))
    }

    pub fn scale(&self, k: i64) -> Self {
        DiffOperator { coeffs: self.coeffs.iter().map(|p| p.scale(k)).collect(), ..self.clone() }
    }

    /// Left multiplication by a polynomial.
    pub fn mul_poly(&self, p: &Poly) -> Self {
        DiffOperator { coeffs: self.coeffs.iter().map(|c| p.mul(c)).collect(), ..self.clone() }
    }

    pub fn apply(&self, f: &Poly) -> Poly {
        let mut r = Poly::zero(self.names.len());
        for (i, c) in self.coeffs.iter().enumerate() {
            r = r.add(&c.mul(&f.diff(i)));
        }
        r
    }

    /// [A, B] = AB − BA. The second-order parts of AB and BA are formed
    /// explicitly and must cancel.
    pub fn commutator(&self, o: &Self) -> Result<Self> {
        self.same_space(o)?;
        let n = self.ndiff;
        let nv = self.names.len();
        let mut second: BTreeMap<(usize, usize), Poly> = BTreeMap::new();
        for i in 0..n {
            for j in 0..n {
                let key = (i.min(j), i.max(j));
                let ab = self.coeffs[i].mul(&o.coeffs[j]);
                let ba = o.coeffs[i].mul(&self.coeffs[j]);
                let e = second.entry(key).or_insert_with(|| Poly::zero(nv));
                *e = e.add(&ab).sub(&ba);
            }
        }
        if let Some(((i, j), _)) = second.iter().find(|(_, p)| !p.is_zero()) {
            return Err(Error::Internal(format!("second-order term d{i}d{j} survives the commutator")));
        }
        let mut coeffs = vec![Poly::zero(nv); n];
        for (j, cj) in coeffs.iter_mut().enumerate() {
            for i in 0..n {
                *cj = cj.add(&self.coeffs[i].mul(&o.coeffs[j].diff(i))).sub(&o.coeffs[i].mul(&self.coeffs[j].diff(i)));
            }
        }
        Ok(DiffOperator { coeffs, ..self.clone() })
    }

    /// Coefficient-wise sup norm after substituting numeric values for the
    /// parameter (non-differentiated) variables; monomials in the
    /// differentiated variables stay distinct.
    pub fn param_norm(&self, params: &[f64]) -> f64 {
        let mut best = 0.0f64;
        for c in &self.coeffs {
            let mut grouped: BTreeMap<Vec<u32>, f64> = BTreeMap::new();
            for (e, k) in c.terms() {
                let w: f64 = e[self.ndiff..].iter().zip(params).map(|(p, v)| v.powi(*p as i32)).product();
                *grouped.entry(e[..self.ndiff].to_vec()).or_insert(0.0) += *k as f64 * w;
            }
            best = grouped.values().fold(best, |m, v| m.max(v.abs()));
        }
        best
    }
}

impl fmt::Display for DiffOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            for (e, k) in c.terms() {
                let sign = if *k < 0 { "-" } else { "+" };
                if first {
                    if *k < 0 {
                        write!(f, "-")?;
                    }
                } else {
                    write!(f, " {sign} ")?;
                }
                first = false;
                let mut parts: Vec<String> = Vec::new();
                if k.abs() != 1 {
                    parts.push(k.abs().to_string());
                }
                for (v, p) in e.iter().enumerate() {
                    match p {
                        0 => {}
                        1 => parts.push(self.names[v].clone()),
                        _ => parts.push(format!("{}^{p}", self.names[v])),
                    }
                }
                parts.push(format!("d/d{}", self.names[i]));
                write!(f, "{}", parts.join("*"))?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// so(2,1) generators (K1, K2, M) acting on functions of (u0, u1, u2).
pub fn so21_generators() -> (DiffOperator, DiffOperator, DiffOperator) {
    let names = ["u0", "u1", "u2"];
    let v = |i| Poly::var(3, i);
    let z = || Poly::zero(3);
    let k1 = DiffOperator::new(&names, 3, vec![v(2).scale(-1), z(), v(0).scale(-1)]).unwrap();
    let k2 = DiffOperator::new(&names, 3, vec![v(1).scale(-1), v(0).scale(-1), z()]).unwrap();
    let m = DiffOperator::new(&names, 3, vec![z(), v(2).scale(-1), v(1)]).unwrap();
    (k1, k2, m)
}

/// Beltrami-coordinate generators (π1, π2, M) on (x1, x2) with the
/// parameter `eps` = 1/R².
pub fn beltrami_generators() -> (DiffOperator, DiffOperator, DiffOperator) {
    let names = ["x1", "x2", "eps"];
    let v = |i| Poly::var(3, i);
    let one = Poly::constant(3, 1);
    let eps = v(2);
    let pi1 = DiffOperator::new(
        &names,
        2,
        vec![one.sub(&eps.mul(&v(0)).mul(&v(0))), eps.mul(&v(0)).mul(&v(1)).scale(-1)],
    )
    .unwrap();
    let pi2 = DiffOperator::new(
        &names,
        2,
        vec![eps.mul(&v(1)).mul(&v(0)).scale(-1), one.sub(&eps.mul(&v(1)).mul(&v(1)))],
    )
    .unwrap();
    let m = DiffOperator::new(&names, 2, vec![v(1).scale(-1), v(0)]).unwrap();
    (pi1, pi2, m)
}

/// Euclidean generators (P1, P2, L3) on (x, y).
pub fn e2_generators() -> (DiffOperator, DiffOperator, DiffOperator) {
    let names = ["x", "y"];
    let v = |i| Poly::var(2, i);
    let one = Poly::constant(2, 1);
    let z = || Poly::zero(2);
    let p1 = DiffOperator::new(&names, 2, vec![one.clone(), z()]).unwrap();
    let p2 = DiffOperator::new(&names, 2, vec![z(), one]).unwrap();
    let l3 = DiffOperator::new(&names, 2, vec![v(1).scale(-1), v(0)]).unwrap();
    (p1, p2, l3)
}

/// Casimir K1² + K2² − M² applied to a polynomial in (u0, u1, u2).
pub fn casimir_apply(f: &Poly) -> Poly {
    let (k1, k2, m) = so21_generators();
    k1.apply(&k1.apply(f)).add(&k2.apply(&k2.apply(f))).sub(&m.apply(&m.apply(f)))
}

/// One checked commutator identity [A, B] = c·C.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct CommutatorCheck {
    pub id: String,
    pub lhs: String,
    pub rhs: String,
    pub exact: bool,
}

fn check(id: &str, a: &DiffOperator, b: &DiffOperator, rhs: &DiffOperator) -> Result<CommutatorCheck> {
    let lhs = a.commutator(b)?;
    Ok(CommutatorCheck { id: id.into(), exact: lhs == *rhs, lhs: lhs.to_string(), rhs: rhs.to_string() })
}

/// The nine commutator identities of so(2,1) in ambient and Beltrami form
/// and of e(2), each evaluated with integer arithmetic.
pub fn commutator_identities() -> Result<Vec<CommutatorCheck>> {
    let (k1, k2, m) = so21_generators();
    let (pi1, pi2, mb) = beltrami_generators();
    let (p1, p2, l3) = e2_generators();
    let eps = Poly::var(3, 2);
    Ok(vec![
        check("[K1,K2]=-M", &k1, &k2, &m.scale(-1))?,
        check("[K2,M]=K1", &k2, &m, &k1)?,
        check("[M,K1]=K2", &m, &k1, &k2)?,
        check("[pi1,pi2]=M/R^2", &pi1, &pi2, &mb.mul_poly(&eps))?,
        check("[pi1,M]=pi2", &pi1, &mb, &pi2)?,
        check("[M,pi2]=pi1", &mb, &pi2, &pi1)?,
        check("[P1,P2]=0", &p1, &p2, &p1.zero_like())?,
        check("[P1,L3]=P2", &p1, &l3, &p2)?,
        check("[L3,P2]=P1", &l3, &p2, &p1)?,
    ])
}

/// Numerical view of the so(2,1) → e(2) contraction at a given R.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct GeneratorContraction {
    pub r: f64,
    /// [π1,π2] − M/R² vanishes identically (symbolic R).
    pub exact_identity: bool,
    /// [π1,M] = π2 and [M,π2] = π1 hold for symbolic R.
    pub rotation_identities: bool,
    /// Coefficient-wise sup norm of [π1,π2] at this R (→ 0 like 1/R²).
    pub residual_norm: f64,
    /// Same norm for M, the scale the residual is measured against.
    pub m_norm: f64,
}

pub fn contract_generators(r: f64) -> Result<GeneratorContraction> {
    if !(r > 0.0 && r.is_finite()) {
        return Err(Error::Domain(format!("R must be positive, got {r}")));
    }
    let (pi1, pi2, m) = beltrami_generators();
    let eps = Poly::var(3, 2);
    let c12 = pi1.commutator(&pi2)?;
    let exact_identity = c12.sub(&m.mul_poly(&eps))?.is_zero();
    let rotation_identities = pi1.commutator(&m)? == pi2 && m.commutator(&pi2)? == pi1;
    let e = 1.0 / (r * r);
    Ok(GeneratorContraction {
        r,
        exact_identity,
        rotation_identities,
        residual_norm: c12.param_norm(&[e]),
        m_norm: m.param_norm(&[e]),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_nine_identities_exact() {
        let checks = commutator_identities().unwrap();
        assert_eq!(checks.len(), 9);
        for c in checks {
            assert!(c.exact, "{}: got {} expected {}", c.id, c.lhs, c.rhs);
        }
    }

    #[test]
    fn contraction_residual_scales() {
        let g = contract_generators(10.0).unwrap();
        assert!(g.exact_identity && g.rotation_identities);
        assert!((g.residual_norm - 1e-2 * g.m_norm).abs() < 1e-15);
    }

    #[test]
    fn casimir_on_linear_functions() {
        for i in 0..3 {
            let u = Poly::var(3, i);
            assert_eq!(casimir_apply(&u), u.scale(2));
        }
    }

    #[test]
    fn commutator_degree_bound() {
        let (pi1, pi2, _) = beltrami_generators();
        assert!(pi1.commutator(&pi2).unwrap().max_degree() <= 4);
    }

    #[test]
    fn display_is_readable() {
        let (k1, _, _) = so21_generators();
        assert_eq!(k1.to_string(), "-u2*d/du0 - u0*d/du2");
    }
}
