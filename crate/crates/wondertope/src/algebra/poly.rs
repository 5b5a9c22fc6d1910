//! Sparse multivariate polynomials over the rationals.
//!
//! Monomials are ordered graded-lexicographically with the first variable largest.
//! The gcd is computed recursively: contents with respect to the leading variable,
//! then a subresultant remainder sequence on the primitive parts. Most gcds met in
//! practice are trivial, so a cheap specialization test certifies coprimality first.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_traits::{One, Signed, Zero};

use super::Rat;

pub type Vars = Arc<[String]>;

pub fn vars<S: AsRef<str>>(names: &[S]) -> Vars {
    names.iter().map(|s| s.as_ref().to_string()).collect::<Vec<_>>().into()
}

/// Exponent vector ordered graded-lexicographically.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Mono(pub Vec<u32>);

impl Mono {
    pub fn one(n: usize) -> Self {
        Mono(vec![0; n])
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    fn mul(&self, other: &Mono) -> Mono {
        Mono(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    fn div(&self, other: &Mono) -> Option<Mono> {
        let mut out = Vec::with_capacity(self.0.len());
        for (a, b) in self.0.iter().zip(&other.0) {
            if a < b {
                return None;
            }
            out.push(a - b);
        }
        Some(Mono(out))
    }
}

impl Ord for Mono {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Mono {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Clone, PartialEq, Eq)]
pub struct MPoly {
    vars: Vars,
    terms: BTreeMap<Mono, Rat>,
}

impl MPoly {
    pub fn zero(vars: Vars) -> Self {
        MPoly { vars, terms: BTreeMap::new() }
    }

    pub fn constant(vars: Vars, c: Rat) -> Self {
        let mut p = MPoly::zero(vars);
        if !c.is_zero() {
            let n = p.vars.len();
            p.terms.insert(Mono::one(n), c);
        }
        p
    }

    pub fn one(vars: Vars) -> Self {
        MPoly::constant(vars, Rat::one())
    }

    /// The variable at position `i`.
    pub fn var(vars: Vars, i: usize) -> Self {
        let mut e = vec![0; vars.len()];
        e[i] = 1;
        MPoly::monomial(vars, Mono(e), Rat::one())
    }

    pub fn var_named(vars: Vars, name: &str) -> Option<Self> {
        let i = vars.iter().position(|v| v == name)?;
        Some(MPoly::var(vars, i))
    }

    pub fn monomial(vars: Vars, m: Mono, c: Rat) -> Self {
        assert_eq!(m.0.len(), vars.len());
        let mut p = MPoly::zero(vars);
        if !c.is_zero() {
            p.terms.insert(m, c);
        }
        p
    }

    /// `c0 + c1*x1 + ... + cn*xn`.
    pub fn affine(vars: Vars, coeffs: &[Rat]) -> Self {
        assert_eq!(coeffs.len(), vars.len() + 1);
        let mut p = MPoly::constant(vars.clone(), coeffs[0].clone());
        for (i, c) in coeffs[1..].iter().enumerate() {
            if !c.is_zero() {
                let mut e = vec![0; vars.len()];
                e[i] = 1;
                p.terms.insert(Mono(e), c.clone());
            }
        }
        p
    }

    pub fn from_terms(vars: Vars, terms: impl IntoIterator<Item = (Mono, Rat)>) -> Self {
        let mut p = MPoly::zero(vars);
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Mono, &Rat)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.degree() == 0)
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.constant_term().is_one()
    }

    pub fn constant_term(&self) -> Rat {
        let n = self.vars.len();
        self.terms.get(&Mono::one(n)).cloned().unwrap_or_else(Rat::zero)
    }

    /// Coefficient of `x_i` (degree-one part).
    pub fn linear_coeff(&self, i: usize) -> Rat {
        let mut e = vec![0; self.vars.len()];
        e[i] = 1;
        self.terms.get(&Mono(e)).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn total_degree(&self) -> i64 {
        self.terms.keys().map(|m| m.degree() as i64).max().unwrap_or(-1)
    }

    pub fn degree_in(&self, i: usize) -> i64 {
        self.terms.keys().map(|m| m.0[i] as i64).max().unwrap_or(-1)
    }

    pub fn is_affine_linear(&self) -> bool {
        self.total_degree() <= 1
    }

    /// Leading term under graded-lex.
    pub fn leading(&self) -> Option<(&Mono, &Rat)> {
        self.terms.iter().next_back()
    }

    pub fn leading_coeff(&self) -> Rat {
        self.leading().map(|(_, c)| c.clone()).unwrap_or_else(Rat::zero)
    }

    fn add_term(&mut self, m: Mono, c: Rat) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let s = e.get() + &c;
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    fn check_vars(&self, other: &MPoly) {
        assert!(
            Arc::ptr_eq(&self.vars, &other.vars) || self.vars == other.vars,
            "polynomials over different variables: {:?} vs {:?}",
            self.vars,
            other.vars
        );
    }

    pub fn add(&self, other: &MPoly) -> MPoly {
        self.check_vars(other);
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &MPoly) -> MPoly {
        self.check_vars(other);
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }

    pub fn neg(&self) -> MPoly {
        MPoly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect(),
        }
    }

    pub fn scale(&self, s: &Rat) -> MPoly {
        if s.is_zero() {
            return MPoly::zero(self.vars.clone());
        }
        MPoly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c * s)).collect(),
        }
    }

    pub fn mul(&self, other: &MPoly) -> MPoly {
        self.check_vars(other);
        let mut out = MPoly::zero(self.vars.clone());
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> MPoly {
        let mut acc = MPoly::one(self.vars.clone());
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    pub fn eval(&self, point: &[Rat]) -> Rat {
        assert_eq!(point.len(), self.vars.len());
        let mut total = Rat::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (x, &e) in point.iter().zip(&m.0) {
                if e > 0 {
                    t *= num_traits::pow(x.clone(), e as usize);
                }
            }
            total += t;
        }
        total
    }

    pub fn derivative(&self, i: usize) -> MPoly {
        let mut out = MPoly::zero(self.vars.clone());
        for (m, c) in &self.terms {
            let e = m.0[i];
            if e > 0 {
                let mut m2 = m.clone();
                m2.0[i] -= 1;
                out.add_term(m2, c * Rat::from_integer(e.into()));
            }
        }
        out
    }

    /// Re-expresses the polynomial over `new_vars`, which must contain every variable that occurs.
    pub fn embed(&self, new_vars: &Vars) -> Option<MPoly> {
        let mut map = Vec::with_capacity(self.vars.len());
        for (i, v) in self.vars.iter().enumerate() {
            match new_vars.iter().position(|w| w == v) {
                Some(j) => map.push(Some(j)),
                None => {
                    if self.degree_in(i) > 0 {
                        return None;
                    }
                    map.push(None);
                }
            }
        }
        let mut out = MPoly::zero(new_vars.clone());
        for (m, c) in &self.terms {
            let mut e = vec![0; new_vars.len()];
            for (i, &k) in m.0.iter().enumerate() {
                if let Some(j) = map[i] {
                    e[j] += k;
                }
            }
            out.add_term(Mono(e), c.clone());
        }
        Some(out)
    }

    /// Renames variables positionally.
    pub fn with_vars(&self, new_vars: Vars) -> MPoly {
        assert_eq!(new_vars.len(), self.vars.len());
        MPoly { vars: new_vars, terms: self.terms.clone() }
    }

    pub fn make_monic(&self) -> MPoly {
        match self.leading() {
            None => self.clone(),
            Some((_, c)) => self.scale(&(Rat::one() / c)),
        }
    }

    /// Exact quotient `self / d`, or `None` if `d` does not divide `self`.
    pub fn div_exact(&self, d: &MPoly) -> Option<MPoly> {
        self.check_vars(d);
        let (ld_m, ld_c) = d.leading()?;
        let (ld_m, ld_c) = (ld_m.clone(), ld_c.clone());
        if d.terms.len() == 1 {
            let mut out = MPoly::zero(self.vars.clone());
            for (m, c) in &self.terms {
                out.terms.insert(m.div(&ld_m)?, c / &ld_c);
            }
            return Some(out);
        }
        let mut rem = self.clone();
        let mut q = MPoly::zero(self.vars.clone());
        loop {
            let (lm, lc) = match rem.leading() {
                None => break,
                Some((m, c)) => (m.clone(), c.clone()),
            };
            let qm = lm.div(&ld_m)?;
            let qc = lc / &ld_c;
            for (m, c) in &d.terms {
                rem.add_term(m.mul(&qm), -(c * &qc));
            }
            q.add_term(qm, qc);
        }
        Some(q)
    }

    /// Number of times `f` divides `self` (`self` must be nonzero).
    pub fn multiplicity(&self, f: &MPoly) -> u32 {
        if self.is_zero() || f.is_constant() {
            return 0;
        }
        let mut k = 0;
        let mut p = self.clone();
        while let Some(q) = p.div_exact(f) {
            p = q;
            k += 1;
        }
        k
    }

    /// Coefficients with respect to variable `i`: entry `d` multiplies `x_i^d`.
    fn coeffs_in(&self, i: usize) -> Vec<MPoly> {
        let deg = self.degree_in(i);
        if deg < 0 {
            return vec![];
        }
        let mut out = vec![MPoly::zero(self.vars.clone()); deg as usize + 1];
        for (m, c) in &self.terms {
            let d = m.0[i] as usize;
            let mut m2 = m.clone();
            m2.0[i] = 0;
            out[d].add_term(m2, c.clone());
        }
        out
    }

    fn lead_coeff_in(&self, i: usize) -> MPoly {
        self.coeffs_in(i).pop().unwrap_or_else(|| MPoly::zero(self.vars.clone()))
    }

    /// Monic gcd (zero only when both inputs are zero).
    pub fn gcd(&self, other: &MPoly) -> MPoly {
        self.check_vars(other);
        gcd_rec(self, other)
    }

    fn monomial_content(&self) -> Mono {
        let n = self.vars.len();
        let mut e: Option<Vec<u32>> = None;
        for m in self.terms.keys() {
            e = Some(match e {
                None => m.0.clone(),
                Some(v) => v.iter().zip(&m.0).map(|(a, b)| *a.min(b)).collect(),
            });
        }
        Mono(e.unwrap_or_else(|| vec![0; n]))
    }
}

fn gcd_rec(a: &MPoly, b: &MPoly) -> MPoly {
    if a.is_zero() {
        return b.make_monic();
    }
    if b.is_zero() {
        return a.make_monic();
    }
    if a.is_constant() || b.is_constant() {
        return MPoly::one(a.vars.clone());
    }
    if a.terms.len() == 1 || b.terms.len() == 1 {
        let (ma, mb) = (a.monomial_content(), b.monomial_content());
        let e = Mono(ma.0.iter().zip(&mb.0).map(|(x, y)| *x.min(y)).collect());
        return MPoly::monomial(a.vars.clone(), e, Rat::one());
    }
    if certainly_coprime(a, b) {
        return MPoly::one(a.vars.clone());
    }
    if a.div_exact(b).is_some() {
        return b.make_monic();
    }
    if b.div_exact(a).is_some() {
        return a.make_monic();
    }
    let n = a.vars.len();
    let v = (0..n).find(|&i| a.degree_in(i) > 0 || b.degree_in(i) > 0).expect("nonconstant");
    let (da, db) = (a.degree_in(v), b.degree_in(v));
    if da == 0 {
        return b.coeffs_in(v).iter().fold(a.make_monic(), |g, c| gcd_rec(&g, c));
    }
    if db == 0 {
        return a.coeffs_in(v).iter().fold(b.make_monic(), |g, c| gcd_rec(&g, c));
    }
    let ca = content_in(a, v);
    let cb = content_in(b, v);
    let pa = a.div_exact(&ca).expect("content divides");
    let pb = b.div_exact(&cb).expect("content divides");
    let g = if da >= db { subresultant(&pa, &pb, v) } else { subresultant(&pb, &pa, v) };
    let g = primitive_in(&g, v);
    gcd_rec(&ca, &cb).mul(&g).make_monic()
}

/// Sound but incomplete coprimality test. If `g = gcd(a, b)` has positive degree in `v`,
/// then at any point where the leading coefficient of `a` in `v` survives, the
/// specialization of `g` keeps that degree and divides both specializations.
/// So a constant univariate gcd at such a point shows `deg_v g = 0`.
fn certainly_coprime(a: &MPoly, b: &MPoly) -> bool {
    const POINTS: [i64; 8] = [2, -3, 5, 7, -11, 13, 17, -19];
    let n = a.vars.len();
    (0..n).all(|v| {
        if a.degree_in(v) <= 0 || b.degree_in(v) <= 0 {
            return true;
        }
        (0..2).any(|shift| {
            let pt: Vec<Rat> = (0..n).map(|i| Rat::from_integer(POINTS[(i + shift * 3) % POINTS.len()].into())).collect();
            let (ua, ub) = (specialize(a, v, &pt), specialize(b, v, &pt));
            ua.len() as i64 == a.degree_in(v) + 1 && ub.len() as i64 == b.degree_in(v) + 1 && univariate_gcd_degree(ua, ub) == 0
        })
    })
}

/// Coefficients in `x_v` after substituting `pt` for every other variable, trailing zeros trimmed.
fn specialize(p: &MPoly, v: usize, pt: &[Rat]) -> Vec<Rat> {
    let mut out = vec![Rat::zero(); p.degree_in(v).max(0) as usize + 1];
    for (m, c) in &p.terms {
        let mut t = c.clone();
        for (i, &e) in m.0.iter().enumerate() {
            if i != v && e > 0 {
                t *= num_traits::pow(pt[i].clone(), e as usize);
            }
        }
        out[m.0[v] as usize] += t;
    }
    while out.last().is_some_and(Zero::is_zero) {
        out.pop();
    }
    out
}

fn univariate_gcd_degree(mut a: Vec<Rat>, mut b: Vec<Rat>) -> usize {
    while !b.is_empty() {
        let lb = b.last().unwrap().clone();
        while a.len() >= b.len() {
            let q = a.last().unwrap().clone() / &lb;
            let off = a.len() - b.len();
            for (i, c) in b.iter().enumerate() {
                a[off + i] -= &q * c;
            }
            a.pop();
            while a.last().is_some_and(Zero::is_zero) {
                a.pop();
            }
        }
        std::mem::swap(&mut a, &mut b);
    }
    a.len().saturating_sub(1)
}

fn content_in(p: &MPoly, v: usize) -> MPoly {
    let mut g = MPoly::zero(p.vars.clone());
    for c in p.coeffs_in(v) {
        if !c.is_zero() {
            g = gcd_rec(&g, &c);
            if g.is_one() {
                break;
            }
        }
    }
    g
}

fn primitive_in(p: &MPoly, v: usize) -> MPoly {
    if p.degree_in(v) <= 0 {
        return MPoly::one(p.vars.clone());
    }
    let c = content_in(p, v);
    p.div_exact(&c).expect("content divides")
}

/// Pseudo-remainder of `a` by `b` in variable `v`.
fn prem(a: &MPoly, b: &MPoly, v: usize) -> MPoly {
    let db = b.degree_in(v);
    let lb = b.lead_coeff_in(v);
    let mut r = a.clone();
    let mut steps = a.degree_in(v) - db + 1;
    let xv = MPoly::var(a.vars.clone(), v);
    while !r.is_zero() && r.degree_in(v) >= db {
        let dr = r.degree_in(v);
        let lr = r.lead_coeff_in(v);
        let shift = xv.pow((dr - db) as u32);
        r = r.mul(&lb).sub(&lr.mul(&shift).mul(b));
        steps -= 1;
    }
    if steps > 0 {
        r = r.mul(&lb.pow(steps as u32));
    }
    r
}

/// Last nonzero element of the subresultant remainder sequence (`deg a >= deg b`).
fn subresultant(a: &MPoly, b: &MPoly, v: usize) -> MPoly {
    let vars = a.vars.clone();
    let mut a = a.clone();
    let mut b = b.clone();
    let mut g = MPoly::one(vars.clone());
    let mut h = MPoly::one(vars.clone());
    loop {
        let delta = a.degree_in(v) - b.degree_in(v);
        let r = prem(&a, &b, v);
        if r.is_zero() {
            return b;
        }
        if r.degree_in(v) == 0 {
            return MPoly::one(vars);
        }
        let divisor = g.mul(&h.pow(delta as u32));
        a = b;
        b = r.div_exact(&divisor).expect("subresultant division is exact");
        g = a.lead_coeff_in(v);
        h = if delta == 0 {
            h
        } else {
            g.pow(delta as u32).div_exact(&h.pow((delta - 1) as u32)).expect("exact")
        };
    }
}

pub(crate) fn fmt_rat(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl MPoly {
    fn fmt_mono(&self, m: &Mono) -> String {
        let mut parts = Vec::new();
        for (v, &e) in self.vars.iter().zip(&m.0) {
            match e {
                0 => {}
                1 => parts.push(v.clone()),
                _ => parts.push(format!("{v}^{e}")),
            }
        }
        parts.join("*")
    }
}

impl fmt::Display for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            if k == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            let mono = self.fmt_mono(m);
            if mono.is_empty() {
                write!(f, "{}", fmt_rat(&a))?;
            } else if a.is_one() {
                write!(f, "{mono}")?;
            } else {
                write!(f, "{}*{mono}", fmt_rat(&a))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MPoly[{}]({})", self.vars.join(","), self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat;

    fn xy() -> Vars {
        vars(&["x", "y"])
    }

    #[test]
    fn grlex_leading_term() {
        let v = xy();
        let p = MPoly::from_terms(
            v.clone(),
            [(Mono(vec![0, 2]), rat(1)), (Mono(vec![1, 1]), rat(2)), (Mono(vec![1, 0]), rat(5))],
        );
        assert_eq!(p.leading().unwrap().0, &Mono(vec![1, 1]));
        assert_eq!(p.to_string(), "2*x*y + y^2 + 5*x");
    }

    #[test]
    fn gcd_of_products() {
        let v = xy();
        let x = MPoly::var(v.clone(), 0);
        let y = MPoly::var(v.clone(), 1);
        let one = MPoly::one(v.clone());
        let f = x.sub(&y).mul(&x.add(&one));
        let g = x.sub(&y).mul(&y.sub(&one)).scale(&rat(3));
        assert_eq!(f.gcd(&g), x.sub(&y));
        assert!(f.gcd(&x.add(&y)).is_one());
    }

    #[test]
    fn coprimality_certificate_is_sound() {
        let v = vars(&["x", "y", "z"]);
        let x = MPoly::var(v.clone(), 0);
        let y = MPoly::var(v.clone(), 1);
        let z = MPoly::var(v.clone(), 2);
        let shared = x.mul(&y).sub(&z);
        let f = shared.mul(&x.add(&z));
        let g = shared.mul(&y.sub(&MPoly::one(v.clone())));
        assert!(!certainly_coprime(&f, &g));
        assert!(certainly_coprime(&x.add(&z), &y.sub(&MPoly::one(v))));
        // a common factor in z alone: every specialization in x or y stays coprime, z does not
        assert!(!certainly_coprime(&z.mul(&x), &z.mul(&y)));
    }

    #[test]
    fn gcd_trivariate() {
        let v = vars(&["a", "b", "c"]);
        let a = MPoly::var(v.clone(), 0);
        let b = MPoly::var(v.clone(), 1);
        let c = MPoly::var(v.clone(), 2);
        let common = a.mul(&b).sub(&c.pow(2)).add(&MPoly::one(v.clone()));
        let f = common.mul(&a.add(&c)).mul(&b);
        let g = common.mul(&b.sub(&c).pow(2));
        assert_eq!(f.gcd(&g), common.make_monic());
    }

    #[test]
    fn exact_division_and_multiplicity() {
        let v = xy();
        let x = MPoly::var(v.clone(), 0);
        let f = x.sub(&MPoly::one(v.clone()));
        let p = f.pow(3).mul(&x);
        assert_eq!(p.multiplicity(&f), 3);
        assert!(p.div_exact(&x.add(&MPoly::var(v, 1))).is_none());
    }
}
