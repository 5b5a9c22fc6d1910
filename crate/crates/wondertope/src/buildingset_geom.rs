//! Building sets of projective linear subspaces and their compatibility with a polytope.
//!
//! Subspaces live in ℙⁿ with the affine chart `X_0 = 1`. The empty subspace is allowed as
//! an element and has codimension `n + 1`.

use std::fmt;

use serde_json::json;

use crate::error::{Error, Result};
use crate::linalg::{self, Matrix};
use crate::polytope::{fmt_point, mask_indices, LinearSubspace, Polytope};
use crate::report::VerificationReport;

/// An ordered family of proper subspaces of ℙⁿ, sorted so that `F_i ⊆ F_j` implies `i ≤ j`.
#[derive(Clone, PartialEq, Eq)]
pub struct GeomBuildingSet {
    n: usize,
    subspaces: Vec<LinearSubspace>,
    labels: Vec<String>,
}

impl GeomBuildingSet {
    /// Labels default to `F1, F2, …` in input order.
    pub fn new(n: usize, subspaces: Vec<LinearSubspace>) -> Result<Self> {
        let labels = (1..=subspaces.len()).map(|i| format!("F{i}")).collect();
        GeomBuildingSet::with_labels(n, subspaces, labels)
    }

    pub fn with_labels(n: usize, subspaces: Vec<LinearSubspace>, labels: Vec<String>) -> Result<Self> {
        if labels.len() != subspaces.len() {
            return Err(Error::DimensionMismatch("one label per subspace".into()));
        }
        for (i, s) in subspaces.iter().enumerate() {
            if s.ambient_dim() != n {
                return Err(Error::DimensionMismatch(format!("{} lives in P^{}, not P^{n}", labels[i], s.ambient_dim())));
            }
            if s.codim() == 0 {
                return Err(Error::Precondition(format!("{} is not a proper subspace", labels[i])));
            }
            if subspaces[..i].contains(s) {
                return Err(Error::Precondition(format!("{} is listed twice", labels[i])));
            }
        }
        // a stable sort by dimension is a linear extension of inclusion
        let mut order: Vec<usize> = (0..subspaces.len()).collect();
        order.sort_by_key(|&i| subspaces[i].dim());
        Ok(GeomBuildingSet {
            n,
            subspaces: order.iter().map(|&i| subspaces[i].clone()).collect(),
            labels: order.iter().map(|&i| labels[i].clone()).collect(),
        })
    }

    pub fn ambient_dim(&self) -> usize {
        self.n
    }

    pub fn subspaces(&self) -> &[LinearSubspace] {
        &self.subspaces
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.subspaces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.subspaces.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&String, &LinearSubspace)> {
        self.labels.iter().zip(&self.subspaces)
    }

    pub fn position(&self, s: &LinearSubspace) -> Option<usize> {
        self.subspaces.iter().position(|f| f == s)
    }

    /// `B_W = {F ∩ ℙW : F ⊉ ℙW}` in the free coordinates of `W`, duplicates merged.
    /// Intersections that are empty stay in the family as the empty subspace.
    pub fn restrict_to(&self, w: &LinearSubspace) -> Result<GeomBuildingSet> {
        let param = w
            .parametrize()
            .ok_or_else(|| Error::Precondition(format!("{w} does not meet the affine chart")))?;
        let d = param.dim();
        let mut subs: Vec<LinearSubspace> = Vec::new();
        let mut labels = Vec::new();
        for (label, f) in self.iter() {
            if w.is_contained_in(f) {
                continue;
            }
            let rows: Matrix = f.equations().iter().map(|r| param.pull_form(r)).collect();
            let s = LinearSubspace::new(d, &rows);
            if s.codim() == 0 {
                continue;
            }
            if let Some(k) = subs.iter().position(|x| *x == s) {
                labels[k] = format!("{}={label}", labels[k]);
            } else {
                subs.push(s);
                labels.push(label.clone());
            }
        }
        GeomBuildingSet::with_labels(d, subs, labels)
    }

    /// `B^W = {ℙ(W'/W) : W' ∈ B, W' ⊇ W}` in the coordinates of
    /// [`LinearSubspace::normal_forms`] on `V/W`.
    pub fn quotient_by(&self, w: &LinearSubspace) -> Result<GeomBuildingSet> {
        let c = w.codim();
        if c == 0 {
            return Err(Error::Precondition("quotient by the whole space".into()));
        }
        let nf = w.normal_forms();
        let mut subs = Vec::new();
        let mut labels = Vec::new();
        for (label, f) in self.iter() {
            if !w.is_contained_in(f) {
                continue;
            }
            let images: Matrix = f.basis().iter().map(|v| linalg::mat_vec(&nf, v)).collect();
            let s = LinearSubspace::span_of_vectors(c - 1, &images);
            if s.codim() > 0 && !subs.contains(&s) {
                subs.push(s);
                labels.push(label.clone());
            }
        }
        GeomBuildingSet::with_labels(c - 1, subs, labels)
    }
}

impl fmt::Display for GeomBuildingSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.iter().map(|(l, s)| format!("{l} = {s}")).collect();
        write!(f, "[{}] in P^{}", parts.join("; "), self.n)
    }
}

impl fmt::Debug for GeomBuildingSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GeomBuildingSet{self}")
    }
}

/// Every `F ∩ P` must be a face of `P`; failures carry a witness point.
pub fn check_face_condition(p: &Polytope, b: &GeomBuildingSet) -> VerificationReport {
    let mut r = VerificationReport::new(format!("face condition for {b}"));
    for (label, f) in b.iter() {
        let t = p.is_face_of(f);
        let witness = match &t.witness {
            Some(w) => json!({"subspace": f.to_string(), "witness": fmt_point(w)}),
            None => json!({"subspace": f.to_string(), "face": mask_indices(t.face)}),
        };
        r.check(format!("{label} meets P in a face"), t.is_face, witness);
    }
    r
}

/// Whether every facet hyperplane of `P` belongs to `B`.
pub fn check_facet_hyperplanes(p: &Polytope, b: &GeomBuildingSet) -> bool {
    (0..p.inequalities().len()).all(|i| b.position(&p.facet_hyperplane(i)).is_some())
}

/// All intersections of nonempty subfamilies of `B`.
pub fn intersections(b: &GeomBuildingSet) -> Vec<LinearSubspace> {
    let mut out: Vec<LinearSubspace> = Vec::new();
    for s in b.subspaces() {
        if !out.contains(s) {
            out.push(s.clone());
        }
    }
    let mut i = 0;
    while i < out.len() {
        for f in b.subspaces() {
            let l = out[i].intersect(f);
            if !out.contains(&l) {
                out.push(l);
            }
        }
        i += 1;
    }
    out
}

/// Indices of the minimal elements of `B` containing `l`.
pub fn factors(b: &GeomBuildingSet, l: &LinearSubspace) -> Vec<usize> {
    let above: Vec<usize> = (0..b.len()).filter(|&i| l.is_contained_in(&b.subspaces()[i])).collect();
    above
        .iter()
        .copied()
        .filter(|&i| {
            let f = &b.subspaces()[i];
            !above.iter().any(|&j| j != i && b.subspaces()[j].is_contained_in(f))
        })
        .collect()
}

/// The codimension condition at every intersection `L`: the minimal elements of `B`
/// containing `L` have codimensions summing to `codim L`.
pub fn check_building_set(b: &GeomBuildingSet) -> VerificationReport {
    let mut r = VerificationReport::new(format!("building set condition for {b}"));
    for l in intersections(b) {
        let fs = factors(b, &l);
        let codims: Vec<usize> = fs.iter().map(|&i| b.subspaces()[i].codim()).collect();
        let sum: usize = codims.iter().sum();
        let sum_text = codims.iter().map(|c| c.to_string()).collect::<Vec<_>>().join("+");
        let relation = if sum == l.codim() { "=" } else { "≠" };
        r.check(
            format!("intersection {l}"),
            sum == l.codim(),
            json!({
                "intersection": l.to_string(),
                "codim": l.codim(),
                "factors": fs.iter().map(|&i| b.labels()[i].clone()).collect::<Vec<_>>(),
                "factor_codims": codims,
                "relation": format!("{sum_text} {relation} {}", l.codim()),
            }),
        );
    }
    r
}

/// Recursive well-adaptedness: for every facet hyperplane `H`, `B_H` is a building set in
/// `ℙH` and well-adapted to the facet. Projective lines pass unconditionally.
pub fn check_well_adapted(p: &Polytope, b: &GeomBuildingSet) -> VerificationReport {
    let mut r = VerificationReport::new(format!("well-adaptedness of {b}"));
    well_adapted_rec(p, b, "", &mut r);
    if r.checks.is_empty() {
        r.check("base case: projective line", true, json!(null));
    }
    r
}

fn well_adapted_rec(p: &Polytope, b: &GeomBuildingSet, path: &str, r: &mut VerificationReport) -> bool {
    if b.ambient_dim() <= 1 {
        return true;
    }
    let mut ok = true;
    for i in 0..p.inequalities().len() {
        let h = p.facet_hyperplane(i);
        let name = format!("{path}H{}", i + 1);
        let (bh, facet) = match (b.restrict_to(&h), p.face_relative(&h)) {
            (Ok(bh), Ok(facet)) => (bh, facet),
            (Err(e), _) | (_, Err(e)) => {
                r.check(format!("{name}: restriction"), false, json!({"hyperplane": h.to_string(), "error": e.to_string()}));
                ok = false;
                continue;
            }
        };
        let bs = check_building_set(&bh);
        let witness = match bs.failures().next() {
            Some(c) => json!({"hyperplane": h.to_string(), "restriction": bh.to_string(), "failure": c.witness}),
            None => json!({"hyperplane": h.to_string(), "restriction": bh.to_string()}),
        };
        let here = r.check(format!("{name}: B_H is a building set"), bs.passed(), witness);
        ok &= here;
        if here {
            ok &= well_adapted_rec(&facet, &bh, &format!("{name}/"), r);
        }
    }
    ok
}

/// A boundary divisor of the blown-up polytope.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Divisor {
    /// Exceptional divisor over the element of `B` with this index.
    Exceptional(usize),
    /// Strict transform of the facet hyperplane with this inequality index.
    Facet(usize),
}

/// `{E_F : dim(P ∩ F) = dim F}` together with the facet hyperplanes of `P` not in `B`.
/// A facet hyperplane in `B` is its own exceptional divisor and is listed as such.
pub fn predicted_boundary(p: &Polytope, b: &GeomBuildingSet) -> Vec<Divisor> {
    let mut out = Vec::new();
    for (i, f) in b.subspaces().iter().enumerate() {
        if f.is_empty() {
            continue;
        }
        let q = p.intersection_vertices(f);
        let dim = if q.is_empty() { -1 } else { linalg::rank(&q.iter().map(|v| crate::polytope::homogenize(v)).collect::<Vec<_>>()) as i64 - 1 };
        if dim == f.dim() {
            out.push(Divisor::Exceptional(i));
        }
    }
    for i in 0..p.inequalities().len() {
        if b.position(&p.facet_hyperplane(i)).is_none() {
            out.push(Divisor::Facet(i));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::ratio;
    use crate::polytope::{ipoint, shapes};

    fn point(n: usize, p: &[i64]) -> LinearSubspace {
        LinearSubspace::span_of_points(n, &[ipoint(p)])
    }

    #[test]
    fn edge_interior_point_is_not_a_face() {
        let t = shapes::triangle();
        let mid = LinearSubspace::span_of_points(2, &[vec![ratio(1, 2), ratio(0, 1)]]);
        let b = GeomBuildingSet::new(2, vec![mid]).unwrap();
        let r = check_face_condition(&t, &b);
        assert!(!r.passed());
        assert_eq!(r.checks[0].witness["witness"], "(1/2, 0)");
    }

    #[test]
    fn pyramid_lines_fail_codimension_count() {
        let p = shapes::square_pyramid();
        let apex = ipoint(&[0, 0, 1]);
        let y = LinearSubspace::span_of_points(3, &[apex.clone(), ipoint(&[0, 1, 0])]);
        let y2 = LinearSubspace::span_of_points(3, &[apex, ipoint(&[1, 0, 0])]);
        let b = GeomBuildingSet::new(3, vec![y, y2]).unwrap();
        assert!(check_face_condition(&p, &b).passed());
        let r = check_building_set(&b);
        let bad: Vec<_> = r.failures().collect();
        assert_eq!(bad.len(), 1);
        assert_eq!(bad[0].witness["relation"], "2+2 ≠ 3");
    }

    #[test]
    fn intersection_closed_families_pass() {
        let x = LinearSubspace::from_ints(3, &[&[0, 0, 1, 0], &[0, 0, 0, 1]]);
        let y = LinearSubspace::from_ints(3, &[&[0, 1, 0, 0], &[0, 0, 0, 1]]);
        let o = point(3, &[0, 0, 0]);
        let b = GeomBuildingSet::new(3, vec![x.clone(), y.clone(), o]).unwrap();
        assert!(check_building_set(&b).passed());
        let single = GeomBuildingSet::new(3, vec![x]).unwrap();
        assert!(check_building_set(&single).passed());
    }

    #[test]
    fn facet_hyperplane_condition() {
        let c = shapes::unit_cube(3);
        let edge = LinearSubspace::from_ints(3, &[&[0, 0, 1, 0], &[0, 0, 0, 1]]);
        let only = GeomBuildingSet::new(3, vec![edge.clone()]).unwrap();
        assert!(!check_facet_hyperplanes(&c, &only));
        let mut all: Vec<LinearSubspace> = (0..6).map(|i| c.facet_hyperplane(i)).collect();
        all.push(edge);
        let full = GeomBuildingSet::new(3, all).unwrap();
        assert!(check_facet_hyperplanes(&c, &full));
        assert_eq!(full.subspaces()[0].dim(), 1);
    }

    #[test]
    fn restriction_to_a_cube_facet() {
        let c = shapes::unit_cube(3);
        let edge = LinearSubspace::from_ints(3, &[&[0, 0, 1, 0], &[0, 0, 0, 1]]);
        let b = GeomBuildingSet::new(3, vec![edge]).unwrap();
        let z0 = LinearSubspace::from_ints(3, &[&[0, 0, 0, 1]]);
        let bh = b.restrict_to(&z0).unwrap();
        // the x-axis lies in {z = 0}: in the coordinates (x, y) of that plane it is {y = 0}
        assert_eq!(bh.subspaces(), &[LinearSubspace::from_ints(2, &[&[0, 0, 1]])]);
        let far = point(3, &[0, 0, 5]);
        let b2 = GeomBuildingSet::new(3, vec![far]).unwrap();
        assert!(b2.restrict_to(&z0).unwrap().subspaces()[0].is_empty());
        assert!(check_well_adapted(&c, &b).passed());
    }

    #[test]
    fn schlegel_building_set_is_not_well_adapted() {
        let p = shapes::schlegel_polytope();
        let f1 = LinearSubspace::span_of_points(4, &[ipoint(&[0, 1, 0, 0]), ipoint(&[0, 0, 1, 0]), ipoint(&[0, 0, 0, 1])]);
        let f2 = LinearSubspace::span_of_points(4, &[ipoint(&[1, 0, 0, 0]), ipoint(&[0, 0, 1, 0]), ipoint(&[1, 0, 0, 1])]);
        let b = GeomBuildingSet::new(4, vec![f1, f2]).unwrap();
        assert!(check_face_condition(&p, &b).passed());
        assert!(check_building_set(&b).passed());
        let r = check_well_adapted(&p, &b);
        assert!(!r.passed());
        let h = LinearSubspace::from_ints(4, &[&[0, 0, 0, 0, 1]]);
        let top: Vec<_> = r.failures().filter(|c| !c.name.contains('/')).collect();
        assert_eq!(top.len(), 1, "{r}");
        assert_eq!(top[0].witness["hyperplane"], h.to_string());
        assert_eq!(top[0].witness["failure"]["relation"], "2+2 ≠ 3");
    }

    #[test]
    fn quotient_family() {
        let o = point(3, &[0, 0, 0]);
        let x = LinearSubspace::from_ints(3, &[&[0, 0, 1, 0], &[0, 0, 0, 1]]);
        let b = GeomBuildingSet::new(3, vec![o.clone(), x]).unwrap();
        let q = b.quotient_by(&o).unwrap();
        assert_eq!(q.ambient_dim(), 2);
        // W itself contributes the empty subspace of ℙ(V/W)
        assert_eq!(q.len(), 2);
        assert!(q.subspaces()[0].is_empty());
        assert_eq!(q.subspaces()[1].dim(), 0);
    }

    #[test]
    fn predicted_boundary_of_cube_with_edge() {
        let c = shapes::unit_cube(3);
        let edge = LinearSubspace::from_ints(3, &[&[0, 0, 1, 0], &[0, 0, 0, 1]]);
        let b = GeomBuildingSet::new(3, vec![edge]).unwrap();
        let d = predicted_boundary(&c, &b);
        assert_eq!(d.len(), 7);
        assert_eq!(d[0], Divisor::Exceptional(0));
        let vertex_line = LinearSubspace::span_of_points(3, &[ipoint(&[0, 0, 0]), ipoint(&[1, -1, 0])]);
        let b2 = GeomBuildingSet::new(3, vec![vertex_line]).unwrap();
        assert_eq!(predicted_boundary(&c, &b2).len(), 6);
    }
}
