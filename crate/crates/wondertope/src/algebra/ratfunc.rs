use std::fmt;

use num_traits::{One, Zero};

use super::poly::{MPoly, Vars};
use super::Rat;
use crate::error::{Error, Result};

/// A quotient of polynomials in lowest terms with a monic denominator.
#[derive(Clone, PartialEq, Eq)]
pub struct RatFunc {
    num: MPoly,
    den: MPoly,
}

impl RatFunc {
    /// Builds `num/den` and reduces it to canonical form.
    pub fn new(num: MPoly, den: MPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(normalize_parts(num, den))
    }

    pub fn from_poly(p: MPoly) -> Self {
        let one = MPoly::one(p.vars().clone());
        RatFunc { num: p, den: one }
    }

    pub fn zero(vars: Vars) -> Self {
        RatFunc::from_poly(MPoly::zero(vars))
    }

    pub fn one(vars: Vars) -> Self {
        RatFunc::from_poly(MPoly::one(vars))
    }

    pub fn constant(vars: Vars, c: Rat) -> Self {
        RatFunc::from_poly(MPoly::constant(vars, c))
    }

    pub fn var(vars: Vars, i: usize) -> Self {
        RatFunc::from_poly(MPoly::var(vars, i))
    }

    pub fn num(&self) -> &MPoly {
        &self.num
    }

    pub fn den(&self) -> &MPoly {
        &self.den
    }

    pub fn vars(&self) -> &Vars {
        self.num.vars()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_constant()
    }

    pub fn is_constant(&self) -> bool {
        self.den.is_constant() && self.num.is_constant()
    }

    /// The value if this is a constant function.
    pub fn as_constant(&self) -> Option<Rat> {
        if self.is_constant() {
            Some(self.num.constant_term() / self.den.constant_term())
        } else {
            None
        }
    }

    /// The polynomial if the denominator is constant.
    pub fn as_polynomial(&self) -> Option<MPoly> {
        if self.den.is_constant() {
            Some(self.num.scale(&(Rat::one() / self.den.constant_term())))
        } else {
            None
        }
    }

    pub fn add(&self, other: &RatFunc) -> RatFunc {
        if self.den == other.den {
            return normalize_parts(self.num.add(&other.num), self.den.clone());
        }
        let g = self.den.gcd(&other.den);
        let a = other.den.div_exact(&g).expect("gcd divides");
        let b = self.den.div_exact(&g).expect("gcd divides");
        normalize_parts(self.num.mul(&a).add(&other.num.mul(&b)), self.den.mul(&a))
    }

    pub fn sub(&self, other: &RatFunc) -> RatFunc {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> RatFunc {
        RatFunc { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn scale(&self, s: &Rat) -> RatFunc {
        if s.is_zero() {
            return RatFunc::zero(self.vars().clone());
        }
        RatFunc { num: self.num.scale(s), den: self.den.clone() }
    }

    pub fn mul(&self, other: &RatFunc) -> RatFunc {
        let g1 = self.num.gcd(&other.den);
        let g2 = other.num.gcd(&self.den);
        let n1 = self.num.div_exact(&g1).expect("gcd divides");
        let d2 = other.den.div_exact(&g1).expect("gcd divides");
        let n2 = other.num.div_exact(&g2).expect("gcd divides");
        let d1 = self.den.div_exact(&g2).expect("gcd divides");
        let num = n1.mul(&n2);
        let den = d1.mul(&d2);
        let lc = den.leading_coeff();
        RatFunc { num: num.scale(&(Rat::one() / &lc)), den: den.scale(&(Rat::one() / lc)) }
    }

    pub fn mul_poly(&self, p: &MPoly) -> RatFunc {
        self.mul(&RatFunc::from_poly(p.clone()))
    }

    pub fn inv(&self) -> Result<RatFunc> {
        RatFunc::new(self.den.clone(), self.num.clone())
    }

    pub fn div(&self, other: &RatFunc) -> Result<RatFunc> {
        Ok(self.mul(&other.inv()?))
    }

    pub fn pow(&self, e: i32) -> Result<RatFunc> {
        if e >= 0 {
            Ok(RatFunc { num: self.num.pow(e as u32), den: self.den.pow(e as u32) })
        } else {
            self.inv()?.pow(-e)
        }
    }

    /// Partial derivative with respect to the variable at position `i`.
    pub fn derivative(&self, i: usize) -> RatFunc {
        let n = self.num.derivative(i).mul(&self.den).sub(&self.num.mul(&self.den.derivative(i)));
        normalize_parts(n, self.den.mul(&self.den))
    }

    /// Value at a point, or `None` on the pole locus.
    pub fn eval(&self, point: &[Rat]) -> Option<Rat> {
        let d = self.den.eval(point);
        if d.is_zero() {
            None
        } else {
            Some(self.num.eval(point) / d)
        }
    }

    pub fn embed(&self, new_vars: &Vars) -> Option<RatFunc> {
        Some(RatFunc { num: self.num.embed(new_vars)?, den: self.den.embed(new_vars)? })
    }

    pub fn with_vars(&self, new_vars: Vars) -> RatFunc {
        RatFunc { num: self.num.with_vars(new_vars.clone()), den: self.den.with_vars(new_vars) }
    }

    /// Multiplicity of `f` in the denominator minus its multiplicity in the numerator.
    pub fn order_along(&self, f: &MPoly) -> i64 {
        if self.num.is_zero() {
            return i64::MIN;
        }
        self.den.multiplicity(f) as i64 - self.num.multiplicity(f) as i64
    }
}

/// Canonical form: gcd removed, denominator monic under graded-lex.
pub fn normalize(f: &RatFunc) -> Result<RatFunc> {
    RatFunc::new(f.num.clone(), f.den.clone())
}

fn normalize_parts(num: MPoly, den: MPoly) -> RatFunc {
    if num.is_zero() {
        let vars = den.vars().clone();
        return RatFunc { num, den: MPoly::one(vars) };
    }
    let g = num.gcd(&den);
    let (num, den) = if g.is_one() {
        (num, den)
    } else {
        (num.div_exact(&g).expect("gcd divides"), den.div_exact(&g).expect("gcd divides"))
    };
    let lc = den.leading_coeff();
    if lc.is_one() {
        return RatFunc { num, den };
    }
    let inv = Rat::one() / lc;
    RatFunc { num: num.scale(&inv), den: den.scale(&inv) }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

impl fmt::Debug for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RatFunc[{}]({})", self.vars().join(","), self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{poly::vars, rat};

    fn x() -> (Vars, MPoly) {
        let v = vars(&["x"]);
        (v.clone(), MPoly::var(v, 0))
    }

    #[test]
    fn content_removal() {
        let (v, x) = x();
        let f = RatFunc::new(x.scale(&rat(2)), MPoly::constant(v, rat(2))).unwrap();
        assert_eq!(f.to_string(), "x");
    }

    #[test]
    fn gcd_cancellation() {
        let (v, x) = x();
        let one = MPoly::one(v);
        let f = RatFunc::new(x.pow(2).sub(&one), x.sub(&one)).unwrap();
        assert_eq!(f.to_string(), "x + 1");
    }

    #[test]
    fn sign_normalization() {
        let (v, x) = x();
        let one = MPoly::one(v);
        let f = RatFunc::new(x.sub(&one), one.sub(&x)).unwrap();
        assert_eq!(f.as_constant(), Some(rat(-1)));
    }

    #[test]
    fn zero_denominator_rejected() {
        let (v, x) = x();
        assert_eq!(RatFunc::new(x, MPoly::zero(v)), Err(Error::DivisionByZero));
    }

    #[test]
    fn order_along_linear_factor() {
        let (v, x) = x();
        let f = RatFunc::new(MPoly::one(v.clone()), x.pow(2)).unwrap();
        assert_eq!(f.order_along(&x), 2);
        assert_eq!(RatFunc::from_poly(x.clone()).order_along(&x), -1);
    }
}
