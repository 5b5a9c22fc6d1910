//! Rational top-degree forms `coef · dx_1 ∧ … ∧ dx_n` on an affine chart.

use std::collections::HashSet;
use std::fmt;

use num_traits::{One, Signed, Zero};

use super::poly::{MPoly, Vars};
use super::ratfunc::RatFunc;
use super::Rat;
use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq)]
pub struct TopForm {
    chart: Vars,
    coef: RatFunc,
}

/// Output of [`TopForm::residue_linear`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Residue {
    pub form: TopForm,
    /// The eliminated chart variable.
    pub pivot: String,
    /// `+1` if the remaining chart order is the boundary orientation induced from the
    /// standard orientation of the region, `-1` otherwise.
    pub induced_sign: i32,
}

impl TopForm {
    /// The form `coef · dx_1 ∧ … ∧ dx_n` over the variables of `coef`.
    pub fn new(coef: RatFunc) -> Result<Self> {
        let chart = coef.vars().clone();
        let mut seen = HashSet::new();
        for v in chart.iter() {
            if !seen.insert(v) {
                return Err(Error::Degenerate(format!("repeated chart variable {v}")));
            }
        }
        Ok(TopForm { chart, coef })
    }

    /// The 0-form `c` on the empty chart.
    pub fn point(c: Rat) -> Self {
        let v: Vars = Vec::<String>::new().into();
        TopForm { chart: v.clone(), coef: RatFunc::constant(v, c) }
    }

    pub fn zero(chart: Vars) -> Self {
        TopForm { coef: RatFunc::zero(chart.clone()), chart }
    }

    pub fn chart(&self) -> &Vars {
        &self.chart
    }

    pub fn coef(&self) -> &RatFunc {
        &self.coef
    }

    pub fn dim(&self) -> usize {
        self.chart.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coef.is_zero()
    }

    pub fn neg(&self) -> TopForm {
        TopForm { chart: self.chart.clone(), coef: self.coef.neg() }
    }

    pub fn scale(&self, s: &Rat) -> TopForm {
        TopForm { chart: self.chart.clone(), coef: self.coef.scale(s) }
    }

    pub fn add(&self, other: &TopForm) -> Result<TopForm> {
        if self.chart != other.chart {
            return Err(Error::DimensionMismatch(format!(
                "adding forms on charts [{}] and [{}]",
                self.chart.join(", "),
                other.chart.join(", ")
            )));
        }
        Ok(TopForm { chart: self.chart.clone(), coef: self.coef.add(&other.coef) })
    }

    /// `a ∧ b` on the concatenated chart.
    pub fn wedge(&self, other: &TopForm) -> Result<TopForm> {
        let mine: HashSet<&String> = self.chart.iter().collect();
        let shared: Vec<&str> =
            other.chart.iter().filter(|v| mine.contains(v)).map(|s| s.as_str()).collect();
        if !shared.is_empty() {
            return Err(Error::OverlappingCharts(shared.join(", ")));
        }
        let chart: Vars = self.chart.iter().chain(other.chart.iter()).cloned().collect::<Vec<_>>().into();
        let a = self.coef.embed(&chart).expect("superset chart");
        let b = other.coef.embed(&chart).expect("superset chart");
        Ok(TopForm { chart, coef: a.mul(&b) })
    }

    /// Order of the pole along `{f = 0}`; negative values are vanishing orders.
    pub fn pole_order(&self, f: &MPoly) -> Result<i64> {
        let f = self.chart_poly(f)?;
        if f.is_constant() {
            return Err(Error::ConstantDivisor);
        }
        if !f.is_affine_linear() {
            return Err(Error::NotLinear(f.to_string()));
        }
        Ok(self.coef.order_along(&f))
    }

    /// Residue along the affine-linear hypersurface `{f = 0}`.
    ///
    /// The pivot is the highest-index chart variable occurring in `f`; writing the form as
    /// `α ∧ df/f`, the result is `α` restricted to `f = 0` on the remaining variables.
    /// `positive_side` states whether the region lies in `{f ≥ 0}`; it only affects
    /// `induced_sign`, since `df/f` does not see the sign of `f`.
    pub fn residue_linear(&self, f: &MPoly, positive_side: bool) -> Result<Residue> {
        let f = self.chart_poly(f)?;
        if f.is_constant() {
            return Err(Error::ConstantDivisor);
        }
        if !f.is_affine_linear() {
            return Err(Error::NotLinear(f.to_string()));
        }
        let n = self.chart.len();
        let k = (0..n).rev().find(|&i| !f.linear_coeff(i).is_zero()).expect("nonconstant");
        let a_k = f.linear_coeff(k);
        let h = self.coef.mul_poly(&f);
        if h.den().multiplicity(&f) > 0 {
            return Err(Error::NonSimplePole);
        }
        let rest: Vars = self
            .chart
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != k)
            .map(|(_, v)| v.clone())
            .collect::<Vec<_>>()
            .into();
        // x_k = -(c0 + Σ_{i≠k} a_i x_i) / a_k
        let mut solved = vec![-f.constant_term() / &a_k];
        for i in (0..n).filter(|&i| i != k) {
            solved.push(-f.linear_coeff(i) / &a_k);
        }
        let xk = MPoly::affine(rest.clone(), &solved);
        let num = eliminate(h.num(), k, &xk, &rest);
        let den = eliminate(h.den(), k, &xk, &rest);
        let sign = if (n - 1 - k).is_multiple_of(2) { Rat::one() } else { -Rat::one() };
        let coef = RatFunc::new(num, den)?.scale(&(sign.clone() / &a_k));
        let mut induced = if (sign * &a_k).is_positive() { 1 } else { -1 };
        if !positive_side {
            induced = -induced;
        }
        Ok(Residue { form: TopForm { chart: rest, coef }, pivot: self.chart[k].clone(), induced_sign: induced })
    }

    /// `Some(s)` with `self = s · other`, `s = ±1`, when the two agree up to sign.
    pub fn up_to_sign(&self, other: &TopForm) -> Option<i32> {
        if self == other {
            Some(1)
        } else if *self == other.neg() {
            Some(-1)
        } else {
            None
        }
    }

    /// Coefficient value at a point of the chart, `None` on the pole locus.
    pub fn eval(&self, point: &[Rat]) -> Option<Rat> {
        self.coef.eval(point)
    }

    /// Renames the chart variables positionally.
    pub fn with_chart(&self, chart: Vars) -> TopForm {
        TopForm { coef: self.coef.with_vars(chart.clone()), chart }
    }

    /// Interprets a polynomial, given over any variables occurring in the chart, on this chart.
    pub fn chart_poly(&self, f: &MPoly) -> Result<MPoly> {
        f.embed(&self.chart).ok_or_else(|| {
            Error::DimensionMismatch(format!(
                "{f} is not a function on the chart [{}]",
                self.chart.join(", ")
            ))
        })
    }
}

/// Substitutes `x_k := xk` in `p`, returning a polynomial over `rest` (the chart without `x_k`).
fn eliminate(p: &MPoly, k: usize, xk: &MPoly, rest: &Vars) -> MPoly {
    let mut out = MPoly::zero(rest.clone());
    let mut powers = vec![MPoly::one(rest.clone())];
    for (m, c) in p.terms() {
        let e = m.0[k] as usize;
        while powers.len() <= e {
            let next = powers.last().unwrap().mul(xk);
            powers.push(next);
        }
        let mut exps = m.0.clone();
        exps.remove(k);
        let mono = MPoly::monomial(rest.clone(), super::Mono(exps), c.clone());
        out = out.add(&mono.mul(&powers[e]));
    }
    out
}

impl fmt::Display for TopForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] {}", self.chart.join(", "), self.coef)
    }
}

impl fmt::Debug for TopForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TopForm({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{rat, vars};

    fn dlog2() -> (Vars, TopForm) {
        let v = vars(&["x1", "x2"]);
        let d = MPoly::var(v.clone(), 0).mul(&MPoly::var(v.clone(), 1));
        (v.clone(), TopForm::new(RatFunc::new(MPoly::one(v), d).unwrap()).unwrap())
    }

    #[test]
    fn residue_last_and_first_coordinate() {
        let (v, w) = dlog2();
        let r2 = w.residue_linear(&MPoly::var(v.clone(), 1), true).unwrap();
        assert_eq!(r2.form.to_string(), "[x1] (1)/(x1)");
        assert_eq!(r2.induced_sign, 1);
        let r1 = w.residue_linear(&MPoly::var(v, 0), true).unwrap();
        assert_eq!(r1.form.to_string(), "[x2] (-1)/(x2)");
        assert_eq!(r1.induced_sign, -1);
    }

    #[test]
    fn residue_at_one_of_segment_form() {
        let v = vars(&["x"]);
        let x = MPoly::var(v.clone(), 0);
        let one = MPoly::one(v.clone());
        let w = TopForm::new(RatFunc::new(one.clone(), x.mul(&one.sub(&x))).unwrap()).unwrap();
        let r = w.residue_linear(&x.sub(&one), true).unwrap();
        assert_eq!(r.form, TopForm::point(rat(-1)));
        // the pivot direction is opposite to the segment's outward side at 1
        assert_eq!(w.residue_linear(&one.sub(&x), true).unwrap().induced_sign, -1);
    }

    #[test]
    fn double_pole_rejected() {
        let v = vars(&["x", "y"]);
        let x = MPoly::var(v.clone(), 0);
        let w = TopForm::new(RatFunc::new(MPoly::one(v), x.pow(2)).unwrap()).unwrap();
        assert_eq!(w.pole_order(&x), Ok(2));
        assert_eq!(w.residue_linear(&x, true), Err(Error::NonSimplePole));
    }

    #[test]
    fn wedge_rejects_shared_variables() {
        let (_, w) = dlog2();
        assert!(matches!(w.wedge(&w), Err(Error::OverlappingCharts(_))));
        assert_eq!(TopForm::point(rat(-1)).wedge(&w).unwrap(), w.neg());
    }
}
