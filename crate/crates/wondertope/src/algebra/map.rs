//! Rational maps between charts, given by one component per target variable.

use std::fmt;

use super::form::TopForm;
use super::poly::{MPoly, Vars};
use super::ratfunc::RatFunc;
use super::Rat;
use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq)]
pub struct PolyMap {
    source: Vars,
    target: Vars,
    components: Vec<RatFunc>,
}

impl PolyMap {
    pub fn new(source: Vars, target: Vars, components: Vec<RatFunc>) -> Result<Self> {
        if components.len() != target.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} components for {} target variables",
                components.len(),
                target.len()
            )));
        }
        let components = components
            .into_iter()
            .map(|c| {
                c.embed(&source).ok_or_else(|| {
                    Error::DimensionMismatch(format!("component {c} is not in the source variables"))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(PolyMap { source, target, components })
    }

    pub fn from_polys(source: Vars, target: Vars, components: Vec<MPoly>) -> Result<Self> {
        PolyMap::new(source, target, components.into_iter().map(RatFunc::from_poly).collect())
    }

    pub fn identity(vars: Vars) -> Self {
        let components = (0..vars.len()).map(|i| RatFunc::var(vars.clone(), i)).collect();
        PolyMap { source: vars.clone(), target: vars, components }
    }

    pub fn source(&self) -> &Vars {
        &self.source
    }

    pub fn target(&self) -> &Vars {
        &self.target
    }

    pub fn components(&self) -> &[RatFunc] {
        &self.components
    }

    /// `f ∘ self`, expressed in the source variables.
    pub fn substitute(&self, f: &RatFunc) -> Result<RatFunc> {
        let f = f.embed(&self.target).ok_or_else(|| {
            Error::DimensionMismatch(format!(
                "{f} is not a function of [{}]",
                self.target.join(", ")
            ))
        })?;
        let (nn, nd) = self.substitute_poly(f.num());
        let (dn, dd) = self.substitute_poly(f.den());
        if dn.is_zero() {
            return Err(Error::ImageInPoleLocus);
        }
        RatFunc::new(nn.mul(&dd), nd.mul(&dn))
    }

    /// `p ∘ self` as an unreduced quotient of polynomials.
    pub fn substitute_poly(&self, p: &MPoly) -> (MPoly, MPoly) {
        let n = self.target.len();
        let degs: Vec<u32> = (0..n).map(|i| p.degree_in(i).max(0) as u32).collect();
        let one = MPoly::one(self.source.clone());
        let mut num_pows: Vec<Vec<MPoly>> = Vec::with_capacity(n);
        let mut den_pows: Vec<Vec<MPoly>> = Vec::with_capacity(n);
        for (i, c) in self.components.iter().enumerate() {
            let mut np = vec![one.clone()];
            let mut dp = vec![one.clone()];
            for _ in 0..degs[i] {
                np.push(np.last().unwrap().mul(c.num()));
                dp.push(dp.last().unwrap().mul(c.den()));
            }
            num_pows.push(np);
            den_pows.push(dp);
        }
        let mut num = MPoly::zero(self.source.clone());
        for (m, c) in p.terms() {
            let mut t = MPoly::constant(self.source.clone(), c.clone());
            for i in 0..n {
                let e = m.0[i] as usize;
                let d = degs[i] as usize;
                if e > 0 {
                    t = t.mul(&num_pows[i][e]);
                }
                if d > e {
                    t = t.mul(&den_pows[i][d - e]);
                }
            }
            num = num.add(&t);
        }
        let mut den = one;
        for i in 0..n {
            den = den.mul(&den_pows[i][degs[i] as usize]);
        }
        (num, den)
    }

    /// `self ∘ inner`: first `inner`, then `self`.
    pub fn compose(&self, inner: &PolyMap) -> Result<PolyMap> {
        if inner.target != self.source {
            return Err(Error::DimensionMismatch(format!(
                "cannot compose: [{}] vs [{}]",
                inner.target.join(", "),
                self.source.join(", ")
            )));
        }
        let components =
            self.components.iter().map(|c| inner.substitute(c)).collect::<Result<Vec<_>>>()?;
        Ok(PolyMap { source: inner.source.clone(), target: self.target.clone(), components })
    }

    pub fn jacobian_det(&self) -> Result<RatFunc> {
        let n = self.source.len();
        if n != self.target.len() {
            return Err(Error::DimensionMismatch(format!(
                "jacobian of a map from {} to {} variables",
                n,
                self.target.len()
            )));
        }
        let m: Vec<Vec<RatFunc>> = self
            .components
            .iter()
            .map(|c| (0..n).map(|j| c.derivative(j)).collect())
            .collect();
        Ok(det(&m, &self.source))
    }

    /// Pullback of a top-form along the map.
    pub fn pullback(&self, w: &TopForm) -> Result<TopForm> {
        if w.chart() != &self.target {
            return Err(Error::DimensionMismatch(format!(
                "form on [{}] pulled back along a map into [{}]",
                w.chart().join(", "),
                self.target.join(", ")
            )));
        }
        let jac = self.jacobian_det()?;
        // a non-dominant map kills every top form, even one whose poles contain the image
        if jac.is_zero() {
            return Ok(TopForm::zero(self.source.clone()));
        }
        let coef = self.substitute(w.coef())?.mul(&jac);
        TopForm::new(coef)
    }

    /// Image of a point, `None` if it lies on a pole of some component.
    pub fn eval(&self, point: &[Rat]) -> Option<Vec<Rat>> {
        self.components.iter().map(|c| c.eval(point)).collect()
    }
}

/// Determinant by cofactor expansion along the first row, skipping zero entries.
fn det(m: &[Vec<RatFunc>], vars: &Vars) -> RatFunc {
    let n = m.len();
    if n == 0 {
        return RatFunc::one(vars.clone());
    }
    if n == 1 {
        return m[0][0].clone();
    }
    let mut acc = RatFunc::zero(vars.clone());
    for j in 0..n {
        if m[0][j].is_zero() {
            continue;
        }
        let minor: Vec<Vec<RatFunc>> = m[1..]
            .iter()
            .map(|row| row.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, x)| x.clone()).collect())
            .collect();
        let term = m[0][j].mul(&det(&minor, vars));
        acc = if j % 2 == 0 { acc.add(&term) } else { acc.sub(&term) };
    }
    acc
}

impl fmt::Display for PolyMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> =
            self.target.iter().zip(&self.components).map(|(t, c)| format!("{t} = {c}")).collect();
        write!(f, "({}) -> {{{}}}", self.source.join(", "), parts.join(", "))
    }
}

impl fmt::Debug for PolyMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PolyMap{self}")
    }
}
