//! Pulling triangulations and their validity checks.

use std::collections::HashMap;

use num_traits::Signed;

use super::{homogenize, mask_indices, vertices_of_system, Face, LinearSubspace, Point, Polytope};
use crate::algebra::Rat;
use crate::error::{Error, Result};
use crate::linalg::{self, Matrix};

/// A simplex of a triangulation: vertex indices into the polytope and their coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Simplex {
    pub indices: Vec<usize>,
    pub vertices: Vec<Point>,
}

impl Simplex {
    pub fn new(vertices: Vec<Point>) -> Self {
        Simplex { indices: (0..vertices.len()).collect(), vertices }
    }

    pub fn dim(&self) -> i64 {
        self.vertices.len() as i64 - 1
    }

    pub fn is_degenerate(&self) -> bool {
        let rows: Matrix = self.vertices.iter().map(|v| homogenize(v)).collect();
        linalg::rank(&rows) < self.vertices.len()
    }

    /// Determinant of the edge vectors `v_i - v_0` (full-dimensional simplices only).
    pub fn orientation_det(&self) -> Rat {
        let v0 = &self.vertices[0];
        let rows: Matrix = self.vertices[1..]
            .iter()
            .map(|v| v.iter().zip(v0).map(|(a, b)| a - b).collect())
            .collect();
        linalg::det(&rows)
    }

    /// Euclidean volume of a full-dimensional simplex.
    pub fn volume(&self) -> Rat {
        let d = self.vertices.len() - 1;
        let fact: i64 = (1..=d as i64).product();
        self.orientation_det().abs() / Rat::from_integer(fact.into())
    }

    pub fn as_polytope(&self, like: &Polytope) -> Result<Polytope> {
        Polytope::from_vertices(like.vars().clone(), &self.vertices)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Triangulation {
    pub simplices: Vec<Simplex>,
}

impl Triangulation {
    pub fn len(&self) -> usize {
        self.simplices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.simplices.is_empty()
    }

    /// Index sets of the simplices, each sorted.
    pub fn index_sets(&self) -> Vec<Vec<usize>> {
        self.simplices
            .iter()
            .map(|s| {
                let mut v = s.indices.clone();
                v.sort();
                v
            })
            .collect()
    }

    /// Checks that the simplices have full dimension, that their volumes add up to the
    /// volume of `p`, and that any two meet in a common face.
    pub fn validate(&self, p: &Polytope, expected_volume: Option<&Rat>) -> std::result::Result<(), String> {
        let param = p.hull_param().ok_or("empty polytope")?;
        let local: Vec<Simplex> = self
            .simplices
            .iter()
            .map(|s| Simplex { indices: s.indices.clone(), vertices: s.vertices.iter().map(|v| param.coords(v)).collect() })
            .collect();
        let d = p.dim();
        for s in &local {
            if s.dim() != d || s.is_degenerate() {
                return Err(format!("simplex {:?} is not {d}-dimensional", s.indices));
            }
        }
        let total: Rat = local.iter().map(Simplex::volume).sum();
        if let Some(v) = expected_volume {
            if &total != v {
                return Err(format!("volumes sum to {total}, expected {v}"));
            }
        }
        for (i, a) in local.iter().enumerate() {
            for b in &local[i + 1..] {
                check_common_face(a, b)?;
            }
        }
        Ok(())
    }
}

impl Triangulation {
    /// `𝒯_W`: the faces `T ∩ ℙW` of dimension `dim P_W`, in the coordinates of
    /// [`Polytope::face_relative`]. Each `T ∩ ℙW` is the face of `T` spanned by its vertices
    /// in `W`, since `P ∩ ℙW` is a face of `P`.
    pub fn induced_face(&self, p: &Polytope, w: &LinearSubspace) -> Result<Triangulation> {
        let face = p.face_relative(w)?;
        if face.is_empty() {
            return Ok(Triangulation { simplices: vec![] });
        }
        let param = w.parametrize().expect("a nonempty face meets the chart");
        let mut simplices: Vec<Simplex> = Vec::new();
        for t in &self.simplices {
            let (indices, vertices): (Vec<usize>, Vec<Point>) = t
                .indices
                .iter()
                .zip(&t.vertices)
                .filter(|(_, v)| w.contains_point(v))
                .map(|(&i, v)| (i, param.coords(v)))
                .unzip();
            let s = Simplex { indices, vertices };
            if s.dim() == face.dim() && !simplices.contains(&s) {
                simplices.push(s);
            }
        }
        Ok(Triangulation { simplices })
    }

    /// `𝒯^{W,F}`: the normal simplices `T^W` of the simplices with `T_W = F`, in the
    /// coordinates of [`Polytope::normal_polytope`]. `f` is given by its vertex indices.
    pub fn induced_normal(&self, p: &Polytope, w: &LinearSubspace, f: &[usize]) -> Result<Triangulation> {
        let face = p.face_relative(w)?;
        if face.dim() != w.dim() {
            return Err(Error::NormalTriangulationUndefined);
        }
        let cone = p.normal_cone(w)?.expect("a full-dimensional face is nonempty");
        let l = cone.positive_functional();
        let mut key = f.to_vec();
        key.sort();
        let mut simplices = Vec::new();
        for t in &self.simplices {
            let mut inside: Vec<usize> =
                t.indices.iter().zip(&t.vertices).filter(|(_, v)| w.contains_point(v)).map(|(&i, _)| i).collect();
            inside.sort();
            if inside != key {
                continue;
            }
            let (indices, vertices): (Vec<usize>, Vec<Point>) = t
                .indices
                .iter()
                .zip(&t.vertices)
                .filter(|(_, v)| !w.contains_point(v))
                .map(|(&i, v)| {
                    let g = super::normal_image(w, v);
                    let s = linalg::dot(&l, &g);
                    (i, g.iter().map(|x| x / &s).collect())
                })
                .unzip();
            simplices.push(Simplex { indices, vertices });
        }
        Ok(Triangulation { simplices })
    }
}

/// `a ∩ b` must be the convex hull of their shared vertices.
fn check_common_face(a: &Simplex, b: &Simplex) -> std::result::Result<(), String> {
    let d = a.vertices[0].len();
    let names: Vec<String> = (0..d).map(|i| format!("t{i}")).collect();
    let vars = crate::algebra::vars(&names);
    let pa = Polytope::from_vertices(vars.clone(), &a.vertices).map_err(|e| e.to_string())?;
    let pb = Polytope::from_vertices(vars, &b.vertices).map_err(|e| e.to_string())?;
    let mut ineqs = pa.inequalities().clone();
    ineqs.extend(pb.inequalities().iter().cloned());
    let meet = vertices_of_system(d, &ineqs, &[]).map_err(|e| e.to_string())?;
    let shared: Vec<&Point> = a.vertices.iter().filter(|v| b.vertices.contains(v)).collect();
    let ok = meet.len() == shared.len() && meet.iter().all(|m| shared.contains(&m));
    if ok {
        Ok(())
    } else {
        Err(format!("simplices {:?} and {:?} do not meet in a common face", a.indices, b.indices))
    }
}

/// Pulling triangulation: cone the first vertex (in `order`) of each face over the
/// triangulations of the facets of that face not containing it.
pub(super) fn pulling(p: &Polytope, order: &[usize]) -> Result<Triangulation> {
    if p.is_empty() {
        return Ok(Triangulation { simplices: vec![] });
    }
    let nv = p.vertices().len();
    let mut sorted = order.to_vec();
    sorted.sort();
    if sorted != (0..nv).collect::<Vec<_>>() {
        return Err(Error::Degenerate("vertex order must be a permutation".into()));
    }
    let faces = p.face_lattice();
    let mut rank = vec![0; nv];
    for (k, &v) in order.iter().enumerate() {
        rank[v] = k;
    }
    let mut memo: HashMap<u64, Vec<Vec<usize>>> = HashMap::new();
    let top = faces.last().expect("nonempty lattice").clone();
    let sets = pull_face(&top, &faces, &rank, &mut memo);
    let simplices = sets
        .into_iter()
        .map(|idx| Simplex { vertices: idx.iter().map(|&i| p.vertices()[i].clone()).collect(), indices: idx })
        .collect();
    Ok(Triangulation { simplices })
}

fn pull_face(face: &Face, faces: &[Face], rank: &[usize], memo: &mut HashMap<u64, Vec<Vec<usize>>>) -> Vec<Vec<usize>> {
    if let Some(r) = memo.get(&face.vertices) {
        return r.clone();
    }
    let verts = mask_indices(face.vertices);
    let apex = *verts.iter().min_by_key(|&&v| rank[v]).expect("nonempty face");
    let out = if face.dim == 0 {
        vec![vec![apex]]
    } else {
        let mut out = Vec::new();
        for g in faces {
            let proper_facet = g.dim == face.dim - 1 && g.vertices & face.vertices == g.vertices;
            if proper_facet && g.vertices >> apex & 1 == 0 {
                for mut s in pull_face(g, faces, rank, memo) {
                    s.insert(0, apex);
                    out.push(s);
                }
            }
        }
        out
    };
    memo.insert(face.vertices, out.clone());
    out
}
