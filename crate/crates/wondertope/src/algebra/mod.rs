//! Exact arithmetic: rationals, polynomials, rational functions, top-forms and maps.

pub mod form;
pub mod map;
pub mod poly;
pub mod ratfunc;
pub mod text;

pub use form::TopForm;
pub use map::PolyMap;
pub use poly::{vars, MPoly, Mono, Vars};
pub use ratfunc::RatFunc;

pub type Rat = num_rational::BigRational;

pub fn rat(n: i64) -> Rat {
    Rat::from_integer(n.into())
}

/// `p/q` as an exact rational.
pub fn ratio(p: i64, q: i64) -> Rat {
    Rat::new(p.into(), q.into())
}
