//! Exact polytopes in the affine chart `X_0 = 1` of ℙⁿ.
//!
//! A polytope keeps both representations: its vertices and its facet inequalities
//! `c_0 + c·x ≥ 0` (primitive integer rows), plus the equations of its affine hull when it
//! is not full-dimensional. Vertex/facet conversion is brute force over tight sets, which
//! is adequate for the desk-scale inputs this crate targets.

mod cone;
pub mod shapes;
mod subspace;
mod triangulation;

use std::collections::HashSet;
use std::fmt;

use itertools::Itertools;
use num_traits::{Signed, Zero};

pub use cone::PointedCone;
pub use subspace::{homogenize, AffineParam, LinearSubspace};
pub use triangulation::{Simplex, Triangulation};

use crate::algebra::{vars, MPoly, Rat, Vars};
use crate::error::{Error, Result};
use crate::linalg::{self, Matrix};

pub type Point = Vec<Rat>;

#[derive(Clone, PartialEq, Eq)]
pub struct Polytope {
    vars: Vars,
    vertices: Vec<Point>,
    inequalities: Matrix,
    equations: Matrix,
    dim: i64,
}

/// A face given by its vertex set (bit `i` is vertex `i`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Face {
    pub vertices: u64,
    /// Indices of the facet inequalities tight on the face.
    pub tight: Vec<usize>,
    pub dim: i64,
}

impl Face {
    pub fn vertex_indices(&self) -> Vec<usize> {
        mask_indices(self.vertices)
    }
}

/// Outcome of [`Polytope::is_face_of`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FaceTest {
    pub is_face: bool,
    /// Vertex mask of the smallest face containing the relative interior of `P ∩ S`.
    pub face: u64,
    /// Vertices of `P ∩ S`.
    pub intersection: Vec<Point>,
    /// A point of `P ∩ S` whose carrier face leaves `S`.
    pub witness: Option<Point>,
}

pub(crate) fn mask_indices(mask: u64) -> Vec<usize> {
    (0..64).filter(|i| mask >> i & 1 == 1).collect()
}

impl Polytope {
    pub fn empty(vars: Vars) -> Self {
        Polytope { vars, vertices: vec![], inequalities: vec![], equations: vec![], dim: -1 }
    }

    /// Convex hull of the given points; vertex order follows first occurrence.
    pub fn from_vertices(vars: Vars, points: &[Point]) -> Result<Self> {
        let n = vars.len();
        if let Some(p) = points.iter().find(|p| p.len() != n) {
            return Err(Error::DimensionMismatch(format!(
                "point with {} coordinates in a chart of dimension {n}",
                p.len()
            )));
        }
        let mut pts: Vec<Point> = Vec::new();
        for p in points {
            if !pts.contains(p) {
                pts.push(p.clone());
            }
        }
        if pts.len() > 64 {
            return Err(Error::Degenerate("more than 64 points".into()));
        }
        if pts.is_empty() {
            return Ok(Polytope::empty(vars));
        }
        let hom: Matrix = pts.iter().map(|p| homogenize(p)).collect();
        let hull = linalg::nullspace(&hom, n + 1);
        let param = AffineParam::from_equations(n, &hull).expect("points lie on their hull");
        let d = param.dim();
        let local: Vec<Point> = pts.iter().map(|p| param.coords(p)).collect();
        let facets = full_dim_facets(&local, d);
        let vertices: Vec<Point> = pts
            .iter()
            .zip(&local)
            .filter(|(_, t)| {
                let tight: Matrix = facets
                    .iter()
                    .filter(|f| eval_affine(f, t).is_zero())
                    .map(|f| f[1..].to_vec())
                    .collect();
                linalg::rank(&tight) == d
            })
            .map(|(p, _)| p.clone())
            .collect();
        let inequalities = facets
            .iter()
            .map(|f| {
                let mut row = vec![Rat::zero(); n + 1];
                row[0] = f[0].clone();
                for (j, &c) in param.free.iter().enumerate() {
                    row[c + 1] = f[j + 1].clone();
                }
                row
            })
            .collect();
        let equations = linalg::rref(&hull).0.into_iter().map(|r| linalg::primitive(&r)).collect();
        Ok(Polytope { vars, vertices, inequalities, equations, dim: d as i64 })
    }

    /// `{x : f(x) ≥ 0 for all rows f = [c_0, c]}`; vertices are sorted lexicographically.
    pub fn from_inequalities(vars: Vars, inequalities: &[Vec<Rat>]) -> Result<Self> {
        let n = vars.len();
        if inequalities.iter().any(|r| r.len() != n + 1) {
            return Err(Error::DimensionMismatch(format!("inequality rows must have {} entries", n + 1)));
        }
        let mut verts = vertices_of_system(n, inequalities, &[])?;
        verts.sort();
        Polytope::from_vertices(vars, &verts)
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    pub fn ambient_dim(&self) -> usize {
        self.vars.len()
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    /// Facet inequalities `[c_0, c]` meaning `c_0 + c·x ≥ 0`.
    pub fn inequalities(&self) -> &Matrix {
        &self.inequalities
    }

    /// Equations of the affine hull (empty when full-dimensional).
    pub fn equations(&self) -> &Matrix {
        &self.equations
    }

    pub fn dim(&self) -> i64 {
        self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.dim < 0
    }

    pub fn is_full_dim(&self) -> bool {
        self.dim == self.vars.len() as i64
    }

    pub fn facet_poly(&self, i: usize) -> MPoly {
        MPoly::affine(self.vars.clone(), &self.inequalities[i])
    }

    pub fn facet_polys(&self) -> Vec<MPoly> {
        (0..self.inequalities.len()).map(|i| self.facet_poly(i)).collect()
    }

    pub fn facet_hyperplane(&self, i: usize) -> LinearSubspace {
        LinearSubspace::hyperplane(self.ambient_dim(), &self.inequalities[i])
    }

    /// Average of the vertices, a point of the relative interior.
    pub fn centroid(&self) -> Option<Point> {
        centroid(&self.vertices)
    }

    /// Seeded points of the relative interior: vertex averages with weights in `1..=16`.
    pub fn interior_samples(&self, count: usize, seed: u64) -> Vec<Point> {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let n = self.ambient_dim();
        (0..count)
            .filter_map(|_| {
                if self.vertices.is_empty() {
                    return None;
                }
                let mut total = Rat::zero();
                let mut x = vec![Rat::zero(); n];
                for v in &self.vertices {
                    let w = Rat::from_integer(rng.gen_range(1i64..=16).into());
                    for (a, b) in x.iter_mut().zip(v) {
                        *a += &w * b;
                    }
                    total += w;
                }
                Some(x.into_iter().map(|a| a / &total).collect())
            })
            .collect()
    }

    pub fn contains(&self, p: &[Rat]) -> bool {
        !self.is_empty()
            && self.inequalities.iter().all(|f| !eval_affine(f, p).is_negative())
            && self.equations.iter().all(|f| eval_affine(f, p).is_zero())
    }

    /// Mask of vertices on which facet `i` is tight.
    pub fn facet_mask(&self, i: usize) -> u64 {
        let f = &self.inequalities[i];
        self.vertices
            .iter()
            .enumerate()
            .filter(|(_, v)| eval_affine(f, v).is_zero())
            .fold(0, |m, (j, _)| m | 1 << j)
    }

    pub fn all_vertices_mask(&self) -> u64 {
        if self.vertices.len() == 64 { u64::MAX } else { (1u64 << self.vertices.len()) - 1 }
    }

    /// Affine dimension of the convex hull of a vertex subset.
    pub fn mask_dim(&self, mask: u64) -> i64 {
        let rows: Matrix = mask_indices(mask).iter().map(|&i| homogenize(&self.vertices[i])).collect();
        linalg::rank(&rows) as i64 - 1
    }

    /// Every face including the empty face and `P`, sorted by dimension then vertex mask.
    pub fn face_lattice(&self) -> Vec<Face> {
        if self.is_empty() {
            return vec![Face { vertices: 0, tight: vec![], dim: -1 }];
        }
        let facet_masks: Vec<u64> = (0..self.inequalities.len()).map(|i| self.facet_mask(i)).collect();
        let mut seen: HashSet<u64> = HashSet::new();
        let mut queue = vec![self.all_vertices_mask()];
        seen.insert(self.all_vertices_mask());
        while let Some(f) = queue.pop() {
            for &m in &facet_masks {
                let g = f & m;
                if seen.insert(g) {
                    queue.push(g);
                }
            }
        }
        seen.insert(0);
        let mut faces: Vec<Face> = seen
            .into_iter()
            .map(|mask| Face {
                vertices: mask,
                tight: (0..facet_masks.len()).filter(|&i| mask & facet_masks[i] == mask).collect(),
                dim: self.mask_dim(mask),
            })
            .collect();
        faces.sort_by_key(|f| (f.dim, f.vertices));
        faces
    }

    /// f-vector `(f_0, …, f_{dim})`.
    pub fn f_vector(&self) -> Vec<usize> {
        let faces = self.face_lattice();
        (0..=self.dim.max(-1)).map(|d| faces.iter().filter(|f| f.dim == d).count()).collect()
    }

    /// Vertices of `P ∩ S`.
    pub fn intersection_vertices(&self, s: &LinearSubspace) -> Vec<Point> {
        let mut eqs = self.equations.clone();
        eqs.extend(s.equations().iter().cloned());
        vertices_of_system(self.ambient_dim(), &self.inequalities, &eqs)
            .expect("a subset of a bounded polytope is bounded")
    }

    /// Whether `P ∩ S` is a face of `P`.
    ///
    /// The carrier of the centroid of `P ∩ S` is the smallest face containing the
    /// intersection; `P ∩ S` is a face exactly when that carrier lies in `S`.
    pub fn is_face_of(&self, s: &LinearSubspace) -> FaceTest {
        let q = self.intersection_vertices(s);
        let Some(c) = centroid(&q) else {
            return FaceTest { is_face: true, face: 0, intersection: q, witness: None };
        };
        let carrier = (0..self.inequalities.len())
            .filter(|&i| eval_affine(&self.inequalities[i], &c).is_zero())
            .fold(self.all_vertices_mask(), |m, i| m & self.facet_mask(i));
        let inside = mask_indices(carrier).into_iter().all(|i| s.contains_point(&self.vertices[i]));
        FaceTest {
            is_face: inside,
            face: carrier,
            intersection: q,
            witness: if inside { None } else { Some(c) },
        }
    }

    fn require_face(&self, w: &LinearSubspace) -> Result<FaceTest> {
        let t = self.is_face_of(w);
        if !t.is_face {
            let c = t.witness.as_ref().expect("failing test has a witness");
            return Err(Error::NotAFace(format!("{w} meets the polytope at {}", fmt_point(c))));
        }
        Ok(t)
    }

    /// `P_W = P ∩ ℙW` in the free coordinates of `W`.
    pub fn face_relative(&self, w: &LinearSubspace) -> Result<Polytope> {
        let t = self.require_face(w)?;
        let Some(param) = w.parametrize() else {
            return Ok(Polytope::empty(vars::<String>(&[])));
        };
        let names: Vec<String> = param.free.iter().map(|&i| self.vars[i].clone()).collect();
        let pts: Vec<Point> = t.intersection.iter().map(|p| param.coords(p)).collect();
        Polytope::from_vertices(vars(&names), &pts)
    }

    /// The cone `P^W`: image of the cone over `P` in `ℝ^{n+1}/W`, with `ℝ^{n+1}/W ≅ ℝ^c`
    /// through the equations of `W`. `None` when `P ∩ ℙW` is empty.
    pub fn normal_cone(&self, w: &LinearSubspace) -> Result<Option<PointedCone>> {
        let t = self.require_face(w)?;
        if t.intersection.is_empty() {
            return Ok(None);
        }
        let gens: Matrix = self.vertices.iter().map(|v| normal_image(w, v)).collect();
        PointedCone::new(w.codim(), &gens).map(Some)
    }

    /// The normal polytope `P^W`: the section of [`Polytope::normal_cone`] by its positive
    /// functional, empty when `P ∩ ℙW` is empty.
    pub fn normal_polytope(&self, w: &LinearSubspace) -> Result<Polytope> {
        match self.normal_cone(w)? {
            Some(c) => c.section(),
            None => Ok(Polytope::empty(vars::<String>(&[]))),
        }
    }

    /// Pulling triangulation, pulling the lowest-index vertex of every face.
    pub fn triangulate(&self) -> Result<Triangulation> {
        let order: Vec<usize> = (0..self.vertices.len()).collect();
        self.triangulate_with_order(&order)
    }

    /// Pulling triangulation, pulling the vertex that comes first in `order`.
    pub fn triangulate_with_order(&self, order: &[usize]) -> Result<Triangulation> {
        triangulation::pulling(self, order)
    }

    /// Euclidean volume in the free coordinates of the affine hull.
    pub fn volume(&self) -> Result<Rat> {
        Ok(self.triangulate()?.simplices.iter().map(|s| s.volume()).sum())
    }

    /// The same polytope described in other chart variables.
    pub fn with_vars(&self, vars: Vars) -> Polytope {
        assert_eq!(vars.len(), self.vars.len());
        Polytope { vars, ..self.clone() }
    }

    /// Free coordinates of the affine hull, used to view a lower-dimensional polytope as
    /// full-dimensional.
    pub fn hull_param(&self) -> Option<AffineParam> {
        AffineParam::from_equations(self.ambient_dim(), &self.equations)
    }
}

/// Image of a point in `ℝ^{n+1}/W`, in the coordinates given by [`LinearSubspace::normal_forms`].
pub fn normal_image(w: &LinearSubspace, v: &[Rat]) -> Vec<Rat> {
    linalg::mat_vec(&w.normal_forms(), &homogenize(v))
}

pub fn eval_affine(f: &[Rat], x: &[Rat]) -> Rat {
    &f[0] + linalg::dot(&f[1..], x)
}

pub fn centroid(pts: &[Point]) -> Option<Point> {
    let first = pts.first()?;
    let k = Rat::from_integer((pts.len() as i64).into());
    let mut c = vec![Rat::zero(); first.len()];
    for p in pts {
        for (ci, pi) in c.iter_mut().zip(p) {
            *ci += pi;
        }
    }
    Some(c.into_iter().map(|x| x / &k).collect())
}

pub fn fmt_point(p: &[Rat]) -> String {
    let parts: Vec<String> = p.iter().map(crate::algebra::poly::fmt_rat).collect();
    format!("({})", parts.join(", "))
}

/// Facets of the convex hull of points spanning `ℝ^d`, as primitive rows `[c_0, c]`.
fn full_dim_facets(pts: &[Point], d: usize) -> Matrix {
    let mut out: Matrix = Vec::new();
    if d == 0 {
        return out;
    }
    let hom: Matrix = pts.iter().map(|p| homogenize(p)).collect();
    for combo in (0..pts.len()).combinations(d) {
        let rows: Matrix = combo.iter().map(|&i| hom[i].clone()).collect();
        let ns = linalg::nullspace(&rows, d + 1);
        if ns.len() != 1 {
            continue;
        }
        let h = &ns[0];
        let vals: Vec<Rat> = hom.iter().map(|p| linalg::dot(h, p)).collect();
        let pos = vals.iter().any(|v| v.is_positive());
        let neg = vals.iter().any(|v| v.is_negative());
        if pos && neg {
            continue;
        }
        let h: Vec<Rat> = if neg { h.iter().map(|x| -x).collect() } else { h.clone() };
        let h = linalg::primitive(&h);
        if !out.contains(&h) {
            out.push(h);
        }
    }
    out
}

/// Vertices of `{f ≥ 0 for f in ineqs, g = 0 for g in eqs}` (rows `[c_0, c]` in `ℝⁿ`).
///
/// Fails with [`Error::Unbounded`] if the set is nonempty and unbounded.
pub fn vertices_of_system(n: usize, ineqs: &[Vec<Rat>], eqs: &[Vec<Rat>]) -> Result<Vec<Point>> {
    let Some(param) = AffineParam::from_equations(n, eqs) else { return Ok(vec![]) };
    let d = param.dim();
    let mut rows: Matrix = Vec::new();
    for f in ineqs {
        let g = param.pull_form(f);
        if linalg::is_zero_vec(&g[1..]) {
            if g[0].is_negative() {
                return Ok(vec![]);
            }
        } else {
            rows.push(g);
        }
    }
    let normals: Matrix = rows.iter().map(|r| r[1..].to_vec()).collect();
    let r = linalg::rank(&normals);
    let lineality = linalg::nullspace(&normals, d);
    let mut found: Vec<Point> = Vec::new();
    for combo in (0..rows.len()).combinations(r) {
        let mut a: Matrix = combo.iter().map(|&i| normals[i].clone()).collect();
        let mut b: Vec<Rat> = combo.iter().map(|&i| -rows[i][0].clone()).collect();
        for l in &lineality {
            a.push(l.clone());
            b.push(Rat::zero());
        }
        if linalg::rank(&a) < d {
            continue;
        }
        let t = if d == 0 { vec![] } else { linalg::solve(&a, &b).expect("full rank square system") };
        if rows.iter().all(|f| !eval_affine(f, &t).is_negative()) && !found.contains(&t) {
            found.push(t);
        }
    }
    if found.is_empty() {
        return Ok(found);
    }
    if !lineality.is_empty() {
        return Err(Error::Unbounded);
    }
    for combo in (0..rows.len()).combinations(d.saturating_sub(1)).filter(|_| d > 0) {
        let a: Matrix = combo.iter().map(|&i| normals[i].clone()).collect();
        let ns = linalg::nullspace(&a, d);
        if ns.len() != 1 {
            continue;
        }
        let k = &ns[0];
        let vals: Vec<Rat> = normals.iter().map(|nrm| linalg::dot(nrm, k)).collect();
        if vals.iter().all(|v| !v.is_negative()) || vals.iter().all(|v| !v.is_positive()) {
            return Err(Error::Unbounded);
        }
    }
    Ok(found.into_iter().map(|t| param.point(&t)).collect())
}

impl fmt::Display for Polytope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let vs: Vec<String> = self.vertices.iter().map(|v| fmt_point(v)).collect();
        write!(f, "polytope[{}] dim {} with vertices {}", self.vars.join(", "), self.dim, vs.join(" "))
    }
}

impl fmt::Debug for Polytope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// `Rat` helper for building vertex lists from integers.
pub fn ipoint(coords: &[i64]) -> Point {
    coords.iter().map(|&c| Rat::from_integer(c.into())).collect()
}

/// Whether two point lists describe the same set.
pub fn same_points(a: &[Point], b: &[Point]) -> bool {
    a.len() == b.len() && a.iter().all(|p| b.contains(p))
}

#[cfg(test)]
mod tests {
    use super::shapes;
    use super::*;
    use crate::algebra::rat;

    fn ineq(rows: &[&[i64]]) -> Matrix {
        rows.iter().map(|r| ipoint(r)).collect()
    }

    #[test]
    fn square_inequalities() {
        let sq = shapes::unit_cube(2);
        let expected = ineq(&[&[0, 1, 0], &[0, 0, 1], &[1, -1, 0], &[1, 0, -1]]);
        assert_eq!(sq.inequalities().len(), 4);
        for e in &expected {
            assert!(sq.inequalities().contains(e), "missing {e:?}");
        }
    }

    #[test]
    fn triangle_from_inequalities() {
        let t = Polytope::from_inequalities(vars(&["x", "y"]), &ineq(&[&[0, 1, 0], &[0, 0, 1], &[1, -1, -1]]))
            .unwrap();
        assert!(same_points(t.vertices(), &[ipoint(&[0, 0]), ipoint(&[1, 0]), ipoint(&[0, 1])]));
    }

    #[test]
    fn cube_counts() {
        let c = shapes::unit_cube(3);
        assert_eq!(c.vertices().len(), 8);
        assert_eq!(c.inequalities().len(), 6);
        assert_eq!(c.f_vector(), vec![8, 12, 6, 1]);
    }

    #[test]
    fn face_lattice_counts() {
        let sq = shapes::unit_cube(2);
        let faces = sq.face_lattice();
        let by_dim: Vec<usize> = (-1..=2).map(|d| faces.iter().filter(|f| f.dim == d).count()).collect();
        assert_eq!(by_dim, vec![1, 4, 4, 1]);
        assert_eq!(shapes::standard_simplex(3).f_vector(), vec![4, 6, 4, 1]);
    }

    #[test]
    fn unbounded_rejected() {
        let r = Polytope::from_inequalities(vars(&["x", "y"]), &ineq(&[&[0, 1, 0], &[0, 0, 1]]));
        assert_eq!(r, Err(Error::Unbounded));
        let strip = Polytope::from_inequalities(vars(&["x", "y"]), &ineq(&[&[0, 1, 0], &[1, -1, 0]]));
        assert_eq!(strip, Err(Error::Unbounded));
    }

    #[test]
    fn infeasible_is_empty() {
        let e = Polytope::from_inequalities(vars(&["x"]), &ineq(&[&[-1, 1], &[0, -1]])).unwrap();
        assert!(e.is_empty());
    }

    #[test]
    fn point_inside_edge_is_not_a_face() {
        let t = shapes::triangle();
        let p = LinearSubspace::span_of_points(2, &[vec![rat(1) / rat(2), rat(0)]]);
        let test = t.is_face_of(&p);
        assert!(!test.is_face);
        assert_eq!(test.witness, Some(vec![rat(1) / rat(2), rat(0)]));
    }

    #[test]
    fn cube_edge_face() {
        let c = shapes::unit_cube(3);
        let axis = LinearSubspace::from_ints(3, &[&[0, 0, 1, 0], &[0, 0, 0, 1]]);
        let t = c.is_face_of(&axis);
        assert!(t.is_face);
        assert_eq!(c.mask_dim(t.face), 1);
        let seg = c.face_relative(&axis).unwrap();
        assert_eq!(seg.vars().to_vec(), vec!["x".to_string()]);
        assert!(same_points(seg.vertices(), &[ipoint(&[0]), ipoint(&[1])]));
        let disjoint = LinearSubspace::from_ints(2, &[&[-2, 1, 0]]);
        assert!(shapes::unit_cube(2).is_face_of(&disjoint).is_face);
        assert!(shapes::unit_cube(2).face_relative(&disjoint).unwrap().is_empty());
    }

    #[test]
    fn pyramid_apex_line() {
        let p = shapes::square_pyramid();
        assert_eq!(p.f_vector(), vec![5, 8, 5, 1]);
        let q = ipoint(&[1, -1, 1]);
        let line = LinearSubspace::span_of_points(3, &[ipoint(&[0, 0, 1]), q]);
        let pw = p.face_relative(&line).unwrap();
        assert_eq!(pw.dim(), 0);
        let apex = LinearSubspace::span_of_points(3, &[ipoint(&[0, 0, 1])]);
        let cone = p.normal_cone(&apex).unwrap().unwrap();
        assert_eq!(cone.rays().len(), 4);
        assert_eq!(cone.dim(), 3);
    }

    #[test]
    fn cube_normal_cone_is_quadrant() {
        let c = shapes::unit_cube(3);
        let axis = LinearSubspace::from_ints(3, &[&[0, 0, 1, 0], &[0, 0, 0, 1]]);
        let cone = c.normal_cone(&axis).unwrap().unwrap();
        assert!(same_points(cone.rays(), &[ipoint(&[1, 0]), ipoint(&[0, 1])]));
        let far = LinearSubspace::from_ints(3, &[&[-5, 1, 0, 0], &[0, 0, 1, 0]]);
        assert_eq!(c.normal_cone(&far).unwrap(), None);
    }
}
