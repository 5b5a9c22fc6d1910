//! Seeded property checks shared by the property tests and the acceptance target.

#![allow(dead_code)]

use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestCaseError, TestRng, TestRunner};

use wondertope::algebra::ratfunc::normalize;
use wondertope::algebra::{vars, MPoly, Mono, PolyMap, Rat, RatFunc, TopForm, Vars};
use wondertope::linalg;

pub const CASES: u32 = 500;
pub const SEED: u64 = 0;

fn runner(cases: u32, seed: u64) -> TestRunner {
    let mut bytes = [0u8; 32];
    bytes[..8].copy_from_slice(&seed.to_le_bytes());
    let config = Config { cases, failure_persistence: None, max_global_rejects: cases * 20, ..Config::default() };
    TestRunner::new_with_rng(config, TestRng::from_seed(RngAlgorithm::ChaCha, &bytes))
}

fn r(k: i64) -> Rat {
    Rat::from_integer(k.into())
}

type Terms = Vec<(Vec<u32>, i64)>;

fn poly_terms(n: usize, max_terms: usize, max_exp: u32) -> impl Strategy<Value = Terms> {
    prop::collection::vec((prop::collection::vec(0..=max_exp, n), -3i64..=3), 1..=max_terms)
}

fn poly(vs: &Vars, t: &Terms) -> MPoly {
    MPoly::from_terms(vs.clone(), t.iter().map(|(e, c)| (Mono(e.clone()), r(*c))))
}

fn affine_rows(rows: usize, n: usize) -> impl Strategy<Value = Vec<Vec<i64>>> {
    prop::collection::vec(prop::collection::vec(-3i64..=3, n + 1), rows)
}

fn affine(vs: &Vars, row: &[i64]) -> MPoly {
    MPoly::affine(vs.clone(), &row.iter().map(|&c| r(c)).collect::<Vec<_>>())
}

fn product(vs: &Vars, rows: &[Vec<i64>]) -> MPoly {
    rows.iter().fold(MPoly::one(vs.clone()), |acc, row| acc.mul(&affine(vs, row)))
}

fn point(coords: &[(i64, i64)]) -> Vec<Rat> {
    coords.iter().map(|&(p, q)| Rat::new(p.into(), q.into())).collect()
}

/// Outcome of one seeded property: number of accepted cases, or the first failure.
pub type PropResult = Result<u32, String>;

fn finish(res: Result<(), proptest::test_runner::TestError<impl std::fmt::Debug>>, cases: u32) -> PropResult {
    res.map(|_| cases).map_err(|e| e.to_string())
}

/// Normalization is idempotent, cancels common factors, and preserves values.
pub fn normalize_idempotence(cases: u32, seed: u64) -> PropResult {
    let vs = vars(&["x", "y", "z"]);
    let strat = (poly_terms(3, 4, 2), poly_terms(3, 4, 2), poly_terms(3, 3, 1), prop::collection::vec((-9i64..=9, 1i64..=5), 3));
    let res = runner(cases, seed).run(&strat, |(nt, dt, gt, pt)| {
        let (num, den, g) = (poly(&vs, &nt), poly(&vs, &dt), poly(&vs, &gt));
        if den.is_zero() || g.is_zero() {
            return Err(TestCaseError::reject("zero denominator"));
        }
        let f = RatFunc::new(num.clone(), den.clone()).map_err(|e| TestCaseError::fail(e.to_string()))?;
        let once = normalize(&f).map_err(|e| TestCaseError::fail(e.to_string()))?;
        let twice = normalize(&once).map_err(|e| TestCaseError::fail(e.to_string()))?;
        prop_assert_eq!(&once, &twice);
        let scaled = RatFunc::new(num.mul(&g), den.mul(&g)).map_err(|e| TestCaseError::fail(e.to_string()))?;
        prop_assert_eq!(&scaled, &once, "common factor {} not cancelled", g);
        if !num.is_zero() {
            prop_assert!(once.den().leading_coeff() == r(1), "denominator not monic: {}", once);
        }
        let p = point(&pt);
        let d = den.eval(&p);
        if d != r(0) && g.eval(&p) != r(0) {
            prop_assert_eq!(once.eval(&p), Some(num.eval(&p) / d));
        }
        Ok(())
    });
    finish(res, cases)
}

/// `(f ∘ g)^* ω = g^* (f^* ω)` for multilinear maps `A → B → C`.
pub fn pullback_functoriality(cases: u32, seed: u64) -> PropResult {
    let (a, b, c) = (vars(&["a1", "a2"]), vars(&["b1", "b2"]), vars(&["c1", "c2"]));
    let strat = (
        prop::collection::vec(poly_terms(2, 3, 1), 2),
        prop::collection::vec(poly_terms(2, 3, 1), 2),
        poly_terms(2, 3, 1),
        affine_rows(2, 2),
    );
    let res = runner(cases, seed).run(&strat, |(gt, ft, wt, wd)| {
        let g = PolyMap::from_polys(a.clone(), b.clone(), gt.iter().map(|t| poly(&a, t)).collect()).unwrap();
        let f = PolyMap::from_polys(b.clone(), c.clone(), ft.iter().map(|t| poly(&b, t)).collect()).unwrap();
        let den = product(&c, &wd);
        if den.is_zero() {
            return Err(TestCaseError::reject("zero denominator"));
        }
        let w = TopForm::new(RatFunc::new(poly(&c, &wt), den).unwrap()).unwrap();
        let lhs = f.compose(&g).and_then(|fg| fg.pullback(&w));
        let rhs = f.pullback(&w).and_then(|fw| g.pullback(&fw));
        match (lhs, rhs) {
            (Ok(l), Ok(r)) => prop_assert_eq!(l, r),
            (Err(_), Err(_)) => return Err(TestCaseError::reject("image in the pole locus")),
            (l, r) => return Err(TestCaseError::fail(format!("one side failed: {l:?} vs {r:?}"))),
        }
        Ok(())
    });
    finish(res, cases)
}

/// `Res_f(aω₁ + bω₂) = a Res_f ω₁ + b Res_f ω₂` for forms with at most simple poles on `f = 0`.
pub fn residue_linearity(cases: u32, seed: u64) -> PropResult {
    let vs = vars(&["x", "y", "z"]);
    let strat = (
        affine_rows(1, 3),
        poly_terms(3, 3, 1),
        poly_terms(3, 3, 1),
        affine_rows(2, 3),
        affine_rows(2, 3),
        (-4i64..=4, 1i64..=3, -4i64..=4, 1i64..=3),
    );
    let res = runner(cases, seed).run(&strat, |(ft, p1, p2, h1, h2, (an, ad, bn, bd))| {
        let f = affine(&vs, &ft[0]);
        if f.is_constant() {
            return Err(TestCaseError::reject("constant divisor"));
        }
        let make = |p: &Terms, h: &[Vec<i64>]| -> Option<TopForm> {
            let den = f.mul(&product(&vs, h));
            if den.is_zero() {
                return None;
            }
            TopForm::new(RatFunc::new(poly(&vs, p), den).ok()?).ok()
        };
        let (Some(w1), Some(w2)) = (make(&p1, &h1), make(&p2, &h2)) else {
            return Err(TestCaseError::reject("zero denominator"));
        };
        let (a, b) = (Rat::new(an.into(), ad.into()), Rat::new(bn.into(), bd.into()));
        let (Ok(r1), Ok(r2)) = (w1.residue_linear(&f, true), w2.residue_linear(&f, true)) else {
            return Err(TestCaseError::reject("pole of higher order"));
        };
        let sum = w1.scale(&a).add(&w2.scale(&b)).unwrap();
        let rs = sum.residue_linear(&f, true).map_err(|e| TestCaseError::fail(format!("sum has no residue: {e}")))?;
        let expected = r1.form.scale(&a).add(&r2.form.scale(&b)).unwrap();
        prop_assert_eq!(rs.form, expected);
        Ok(())
    });
    finish(res, cases)
}

/// `(φ^* ω)(p) = ω(φ(p)) · det Dφ` for affine `φ`, with the determinant computed directly.
pub fn pullback_evaluation_oracle(cases: u32, seed: u64) -> PropResult {
    let (s, t) = (vars(&["s1", "s2", "s3"]), vars(&["t1", "t2", "t3"]));
    let strat = (affine_rows(3, 3), poly_terms(3, 3, 2), affine_rows(3, 3), prop::collection::vec((-9i64..=9, 1i64..=7), 3));
    let res = runner(cases, seed).run(&strat, |(phi, wt, wd, pt)| {
        let map = PolyMap::from_polys(s.clone(), t.clone(), phi.iter().map(|row| affine(&s, row)).collect()).unwrap();
        let den = product(&t, &wd);
        if den.is_zero() {
            return Err(TestCaseError::reject("zero denominator"));
        }
        let w = TopForm::new(RatFunc::new(poly(&t, &wt), den).unwrap()).unwrap();
        let Ok(pulled) = map.pullback(&w) else {
            return Err(TestCaseError::reject("image in the pole locus"));
        };
        let p = point(&pt);
        let jac: Vec<Vec<Rat>> = phi.iter().map(|row| row[1..].iter().map(|&c| r(c)).collect()).collect();
        let det = linalg::det(&jac);
        let image: Vec<Rat> = phi
            .iter()
            .map(|row| row[1..].iter().zip(&p).fold(r(row[0]), |acc, (&c, x)| acc + r(c) * x))
            .collect();
        match w.eval(&image) {
            Some(v) => prop_assert_eq!(pulled.eval(&p), Some(v * det)),
            None => return Err(TestCaseError::reject("point on the pole locus")),
        }
        Ok(())
    });
    finish(res, cases)
}
