//! Canonical forms of simplices, polytopes and polyhedral cones, facet residues, and the
//! recursive residue check.
//!
//! Every form is normalized to be positive on the interior of its region with respect to
//! the standard orientation of the chart variables. For a projective simplex with
//! homogeneous vertices `Z_0, …, Z_m` and dual rows `W = Z⁻¹`, the form in the chart
//! `Y_j = 1` is `± det(W) / Π_i ⟨W_i, Y⟩`; the sign is fixed by evaluating at an interior
//! point.

use std::collections::{HashMap, HashSet};

use num_traits::{One, Signed, Zero};
use serde_json::json;

use crate::algebra::form::Residue;
use crate::algebra::{MPoly, Rat, RatFunc, TopForm, Vars};
use crate::error::{Error, Result};
use crate::linalg::{self, Matrix};
use crate::polytope::{homogenize, Point, PointedCone, Polytope, Simplex};
use crate::report::VerificationReport;

/// Canonical form of the projective simplex spanned by the homogeneous vectors `z`, in
/// the chart `Y_j = 1` whose coordinates are the remaining `Y_i` named by `chart`.
pub fn projective_simplex_form(z: &[Vec<Rat>], j: usize, chart: &Vars) -> Result<TopForm> {
    let m = chart.len();
    if z.len() != m + 1 || z.iter().any(|v| v.len() != m + 1) {
        return Err(Error::DimensionMismatch(format!(
            "{} homogeneous vertices for a chart of dimension {m}",
            z.len()
        )));
    }
    let cols = linalg::transpose(z);
    let w = linalg::inverse(&cols).ok_or_else(|| Error::Degenerate("simplex vertices are dependent".into()))?;
    let mut den = MPoly::one(chart.clone());
    for row in &w {
        den = den.mul(&chart_linear(row, j, chart));
    }
    let interior = interior_chart_point(z, j).expect("a simplex has interior points off any hyperplane");
    let mut coef = RatFunc::new(MPoly::constant(chart.clone(), linalg::det(&w)), den)?;
    let val = coef.eval(&interior).expect("interior point avoids the facets");
    if val.is_negative() {
        coef = coef.neg();
    }
    TopForm::new(coef)
}

/// The linear form `⟨row, Y⟩` restricted to `Y_j = 1`.
fn chart_linear(row: &[Rat], j: usize, chart: &Vars) -> MPoly {
    let mut aff = vec![row[j].clone()];
    aff.extend(row.iter().enumerate().filter(|&(i, _)| i != j).map(|(_, c)| c.clone()));
    MPoly::affine(chart.clone(), &aff)
}

/// Chart coordinates of a positive combination of `z` with nonzero `j`-th coordinate.
fn interior_chart_point(z: &[Vec<Rat>], j: usize) -> Option<Vec<Rat>> {
    let m1 = z.len();
    for shift in 0..=m1 as i64 {
        let mut y = vec![Rat::zero(); m1];
        for (k, v) in z.iter().enumerate() {
            let weight = Rat::from_integer((1 + (k as i64 * shift) % (m1 as i64 + 1)).into());
            for (a, b) in y.iter_mut().zip(v) {
                *a += &weight * b;
            }
        }
        if !y[j].is_zero() {
            let s = y[j].clone();
            return Some(y.iter().enumerate().filter(|&(i, _)| i != j).map(|(_, x)| x / &s).collect());
        }
    }
    None
}

/// Canonical form of a full-dimensional simplex of the affine chart.
pub fn simplex_form(t: &Simplex, chart: &Vars) -> Result<TopForm> {
    if t.vertices.is_empty() {
        return Err(Error::Degenerate("empty simplex".into()));
    }
    if t.vertices.len() == 1 && chart.is_empty() {
        return Ok(TopForm::point(Rat::one()));
    }
    let z: Matrix = t.vertices.iter().map(|v| homogenize(v)).collect();
    projective_simplex_form(&z, 0, chart)
}

/// `Ω(ℙⁿ, Δⁿ) = Π dx_i/x_i`, the simplex whose last facet is the hyperplane at infinity.
pub fn standard_simplex_form(chart: &Vars) -> TopForm {
    let n = chart.len();
    let mut den = MPoly::one(chart.clone());
    for i in 0..n {
        den = den.mul(&MPoly::var(chart.clone(), i));
    }
    TopForm::new(RatFunc::new(MPoly::one(chart.clone()), den).expect("nonzero")).expect("distinct vars")
}

/// Canonical form of a full-dimensional polytope: the sum over its pulling triangulation.
pub fn polytope_form(p: &Polytope) -> Result<TopForm> {
    let order: Vec<usize> = (0..p.vertices().len()).collect();
    polytope_form_with_order(p, &order)
}

/// As [`polytope_form`], triangulating with a different pulling order.
pub fn polytope_form_with_order(p: &Polytope, order: &[usize]) -> Result<TopForm> {
    if !p.is_full_dim() {
        return Err(Error::Degenerate(format!(
            "polytope of dimension {} in a chart of dimension {}",
            p.dim(),
            p.ambient_dim()
        )));
    }
    if p.dim() == 0 {
        return Ok(TopForm::point(Rat::one()));
    }
    let tri = p.triangulate_with_order(order)?;
    let mut acc = TopForm::zero(p.vars().clone());
    for s in &tri.simplices {
        acc = acc.add(&simplex_form(s, p.vars())?)?;
    }
    Ok(acc)
}

/// Canonical form of the projectivization of a full-dimensional pointed cone in `ℝ^{m+1}`,
/// in the chart `Y_j = 1`.
pub fn cone_form(cone: &PointedCone, j: usize, chart: &Vars) -> Result<TopForm> {
    if cone.ambient_dim() != chart.len() + 1 {
        return Err(Error::DimensionMismatch("cone and chart dimensions differ".into()));
    }
    if !cone.is_full_dim() {
        return Err(Error::Degenerate("cone is not full-dimensional".into()));
    }
    if chart.is_empty() {
        return Ok(TopForm::point(Rat::one()));
    }
    let section = cone.section()?;
    let tri = section.triangulate()?;
    let mut acc = TopForm::zero(chart.clone());
    for s in &tri.simplices {
        acc = acc.add(&projective_simplex_form(&s.vertices, j, chart)?)?;
    }
    Ok(acc)
}

/// Residue of the canonical form along facet `i`, next to the expected facet form.
#[derive(Clone, Debug)]
pub struct FacetResidue {
    pub residue: Residue,
    /// The facet polytope in the chart left after eliminating the pivot.
    pub facet: Polytope,
    /// `induced_sign · Ω(facet)`.
    pub expected: TopForm,
}

impl FacetResidue {
    pub fn matches(&self) -> bool {
        self.residue.form == self.expected
    }
}

/// The facet of `p` cut out by inequality `i`, projected to the chart without `pivot`.
pub fn facet_in_chart(p: &Polytope, i: usize, pivot: usize) -> Result<Polytope> {
    let mask = p.facet_mask(i);
    let rest: Vec<String> =
        p.vars().iter().enumerate().filter(|&(k, _)| k != pivot).map(|(_, v)| v.clone()).collect();
    let pts: Vec<Point> = crate::polytope::mask_indices(mask)
        .into_iter()
        .map(|k| {
            p.vertices()[k].iter().enumerate().filter(|&(c, _)| c != pivot).map(|(_, x)| x.clone()).collect()
        })
        .collect();
    Polytope::from_vertices(crate::algebra::vars(&rest), &pts)
}

pub fn facet_residue_of(form: &TopForm, p: &Polytope, i: usize) -> Result<FacetResidue> {
    let f = p.facet_poly(i);
    let residue = form.residue_linear(&f, true)?;
    let pivot = p.vars().iter().position(|v| *v == residue.pivot).expect("pivot is a chart variable");
    let facet = facet_in_chart(p, i, pivot)?;
    let expected = polytope_form(&facet)?.scale(&Rat::from_integer(residue.induced_sign.into()));
    Ok(FacetResidue { residue, facet, expected })
}

/// Residue of `Ω(P)` along the facet hyperplane `f`, which must be one of the facets.
pub fn facet_residue(p: &Polytope, f: &MPoly) -> Result<FacetResidue> {
    let i = facet_index(p, f).ok_or_else(|| Error::Precondition(format!("{f} is not a facet of the polytope")))?;
    facet_residue_of(&polytope_form(p)?, p, i)
}

/// Index of the facet whose hyperplane is `{f = 0}`.
pub fn facet_index(p: &Polytope, f: &MPoly) -> Option<usize> {
    let f = f.embed(p.vars())?;
    (0..p.inequalities().len()).find(|&i| {
        let g = p.facet_poly(i);
        f.make_monic() == g.make_monic()
    })
}

/// Recursive residue check for `Ω(P)`: simple poles exactly along the facet hyperplanes,
/// residues equal to the facet forms with induced orientation, and `±1` at every vertex.
/// One check is reported per face (keyed by its vertex set), plus one per failure.
pub fn verify_recursion(p: &Polytope) -> Result<VerificationReport> {
    let mut report = VerificationReport::new(format!("residue recursion for {p}"));
    let form = polytope_form(p)?;
    let ids: Vec<usize> = (0..p.vertices().len()).collect();
    let mut state = Recursion { seen: HashSet::new(), strata: HashMap::new(), report: &mut report };
    state.visit(&form, 1, p, &ids)?;
    let mut strata: Vec<(Vec<usize>, (i64, bool, String))> = state.strata.into_iter().collect();
    strata.sort_by_key(|(k, (d, _, _))| (-d, k.clone()));
    for (key, (dim, ok, detail)) in strata {
        report.check(
            format!("stratum {key:?} (dim {dim})"),
            ok,
            json!({"dim": dim, "vertices": key, "detail": detail}),
        );
    }
    Ok(report)
}

struct Recursion<'a> {
    seen: HashSet<(Vec<usize>, Vec<String>)>,
    strata: HashMap<Vec<usize>, (i64, bool, String)>,
    report: &'a mut VerificationReport,
}

impl Recursion<'_> {
    fn record(&mut self, key: &[usize], dim: i64, ok: bool, detail: String) {
        let e = self.strata.entry(key.to_vec()).or_insert((dim, true, String::new()));
        if !ok {
            e.1 = false;
            e.2 = detail;
        } else if e.2.is_empty() {
            e.2 = detail;
        }
    }

    /// `form` is `sign · Ω(p)` on the chart of `p`; `ids` maps vertices of `p` to the original ones.
    fn visit(&mut self, form: &TopForm, sign: i32, p: &Polytope, ids: &[usize]) -> Result<()> {
        let mut key = ids.to_vec();
        key.sort();
        if !self.seen.insert((key.clone(), p.vars().to_vec())) {
            return Ok(());
        }
        if p.dim() == 0 {
            let c = form.coef().as_constant();
            let ok = matches!(&c, Some(v) if v.abs().is_one());
            let detail = format!("vertex residue {}", form.coef());
            if !ok {
                self.report.check(format!("vertex {key:?} residue is ±1"), false, json!(detail));
            }
            self.record(&key, 0, ok, detail);
            return Ok(());
        }
        let facets = p.facet_polys();
        let product = facets.iter().fold(MPoly::one(p.vars().clone()), |acc, f| acc.mul(f));
        let poles: Vec<i64> = facets.iter().map(|f| form.pole_order(f)).collect::<Result<_>>()?;
        let den_ok = form.coef().den() == &product.make_monic();
        let poles_ok = poles.iter().all(|&k| k == 1) && den_ok;
        let mut ok = poles_ok;
        let mut detail = format!("poles {poles:?}, denominator {}", form.coef().den());
        if !poles_ok {
            self.report.check(
                format!("face {key:?}: simple poles exactly on facets"),
                false,
                json!({"pole_orders": poles, "denominator": form.coef().den().to_string(), "facets": product.to_string()}),
            );
        }
        #[allow(clippy::needless_range_loop)]
        for i in 0..facets.len() {
            let fr = facet_residue_of(form, p, i)?;
            let facet_ids: Vec<usize> = fr
                .facet
                .vertices()
                .iter()
                .map(|v| {
                    let pos = crate::polytope::mask_indices(p.facet_mask(i))
                        .into_iter()
                        .find(|&k| {
                            let proj: Point = p.vertices()[k]
                                .iter()
                                .enumerate()
                                .filter(|&(c, _)| p.vars()[c] != fr.residue.pivot)
                                .map(|(_, x)| x.clone())
                                .collect();
                            &proj == v
                        })
                        .expect("facet vertex comes from the polytope");
                    ids[pos]
                })
                .collect();
            let expected = fr.expected.scale(&Rat::from_integer(sign.into()));
            if fr.residue.form != expected {
                ok = false;
                detail = format!("residue along {} is {}, expected {}", facets[i], fr.residue.form, expected);
                self.report.check(
                    format!("face {key:?}: residue along {}", facets[i]),
                    false,
                    json!({"residue": fr.residue.form.to_string(), "expected": expected.to_string(), "pivot": fr.residue.pivot}),
                );
            }
            self.visit(&fr.residue.form, sign * fr.residue.induced_sign, &fr.facet, &facet_ids)?;
        }
        self.record(&key, p.dim(), ok, detail);
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::text::parse_topform;
    use crate::algebra::vars;
    use crate::polytope::{ipoint, shapes};

    #[test]
    fn triangle_form() {
        let w = polytope_form(&shapes::triangle()).unwrap();
        assert_eq!(w, parse_topform("[x, y] 1/(x*y*(1 - x - y))").unwrap());
    }

    #[test]
    fn point_form_is_one() {
        let s = Simplex::new(vec![vec![]]);
        assert_eq!(simplex_form(&s, &vars::<&str>(&[])).unwrap(), TopForm::point(Rat::one()));
    }

    #[test]
    fn segment_form() {
        let seg = Polytope::from_vertices(vars(&["x"]), &[ipoint(&[0]), ipoint(&[1])]).unwrap();
        assert_eq!(polytope_form(&seg).unwrap(), parse_topform("[x] 1/(x*(1 - x))").unwrap());
    }

    #[test]
    fn standard_simplex_residues() {
        let w = standard_simplex_form(&vars(&["x1", "x2", "x3"]));
        let x = |i| MPoly::var(w.chart().clone(), i);
        let r3 = w.residue_linear(&x(2), true).unwrap();
        assert_eq!(r3.form, parse_topform("[x1, x2] 1/(x1*x2)").unwrap());
        let r2 = w.residue_linear(&x(1), true).unwrap();
        assert_eq!(r2.form, parse_topform("[x1, x3] -1/(x1*x3)").unwrap());
    }

    #[test]
    fn square_facet_residue() {
        let sq = shapes::unit_cube(2);
        let y = MPoly::var(sq.vars().clone(), 1);
        let fr = facet_residue(&sq, &y).unwrap();
        assert_eq!(fr.residue.form, parse_topform("[x] 1/(x*(1 - x))").unwrap());
        assert!(fr.matches());
    }

    #[test]
    fn quadrant_cone_form() {
        let c = PointedCone::new(2, &[ipoint(&[1, 0]), ipoint(&[0, 1])]).unwrap();
        let w = cone_form(&c, 0, &vars(&["u"])).unwrap();
        assert_eq!(w, parse_topform("[u] 1/u").unwrap());
    }

    #[test]
    fn simplex_recursion_counts() {
        let r = verify_recursion(&shapes::standard_simplex(3)).unwrap();
        assert!(r.passed(), "{r}");
        assert_eq!(r.checks.len(), 15);
    }

    #[test]
    fn square_form_two_ways() {
        let sq = shapes::unit_cube(2);
        let w = polytope_form(&sq).unwrap();
        assert_eq!(w, parse_topform("[x, y] 1/(x*y*(1 - x)*(1 - y))").unwrap());
        let a = parse_topform("[x, y] 1/(x*y*(1 - x - y))").unwrap();
        let b = parse_topform("[x, y] 1/((1 - x)*(1 - y)*(x + y - 1))").unwrap();
        assert_eq!(w, a.add(&b).unwrap());
    }

    #[test]
    fn triangulation_independence() {
        for p in [shapes::unit_cube(2), shapes::pentagon(), shapes::unit_cube(3)] {
            let nv = p.vertices().len();
            let base = polytope_form(&p).unwrap();
            let first = p.triangulate().unwrap().index_sets();
            let mut distinct = 0;
            for shift in 1..nv {
                let order: Vec<usize> = (0..nv).map(|i| (i + shift) % nv).collect();
                if p.triangulate_with_order(&order).unwrap().index_sets() != first {
                    distinct += 1;
                }
                assert_eq!(polytope_form_with_order(&p, &order).unwrap(), base);
            }
            assert!(distinct > 0);
        }
    }

    #[test]
    fn cube_forms_are_wedges_of_segments() {
        for n in 1..=3 {
            let c = shapes::unit_cube(n);
            let mut acc = TopForm::point(Rat::one());
            for v in c.vars().iter() {
                let seg = parse_topform(&format!("[{v}] 1/({v}*(1 - {v}))")).unwrap();
                acc = acc.wedge(&seg).unwrap();
            }
            assert_eq!(polytope_form(&c).unwrap(), acc);
        }
    }

    #[test]
    fn no_poles_off_facets() {
        let c = shapes::unit_cube(3);
        let w = polytope_form(&c).unwrap();
        for f in c.facet_polys() {
            assert_eq!(w.pole_order(&f).unwrap(), 1);
        }
        // supporting hyperplanes through an edge or a vertex, and a cutting plane
        for text in ["x + y", "x + y + z", "2 - x - y", "x - y", "1 - 2*z"] {
            let f = crate::algebra::text::parse_poly(text, c.vars()).unwrap();
            assert_eq!(w.pole_order(&f).unwrap(), 0, "{text}");
        }
    }

    #[test]
    fn simplex_vertex_residues_are_units() {
        let t = Simplex::new(vec![ipoint(&[0, 0]), ipoint(&[3, 1]), ipoint(&[1, 2])]);
        let chart = vars(&["x", "y"]);
        let w = simplex_form(&t, &chart).unwrap();
        let p = t.as_polytope(&Polytope::empty(chart)).unwrap();
        let r = verify_recursion(&p).unwrap();
        assert!(r.passed(), "{r}");
        assert!(w.up_to_sign(&polytope_form(&p).unwrap()).is_some());
    }

    #[test]
    fn recursion_on_small_polytopes() {
        for p in [shapes::unit_cube(3), shapes::pentagon(), shapes::square_pyramid()] {
            let r = verify_recursion(&p).unwrap();
            assert!(r.passed(), "{r}");
            let faces = p.face_lattice().iter().filter(|f| f.dim >= 0).count();
            assert_eq!(r.checks.len(), faces);
        }
    }
}
