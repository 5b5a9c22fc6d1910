//! Pointed polyhedral cones given by generators.

use itertools::Itertools;
use num_traits::{Signed, Zero};

use super::{Point, Polytope};
use crate::algebra::{vars, Rat};
use crate::error::{Error, Result};
use crate::linalg::{self, Matrix};

/// A pointed cone in `ℝ^c`, stored by its extreme rays (primitive integer vectors).
///
/// Facets are computed inside the linear span of the cone, whose coordinates are the
/// pivot columns of the echelon basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointedCone {
    ambient: usize,
    rays: Matrix,
    pivots: Vec<usize>,
    facets: Matrix,
}

impl PointedCone {
    pub fn new(ambient: usize, generators: &[Vec<Rat>]) -> Result<Self> {
        let mut gens: Matrix = Vec::new();
        for g in generators {
            if g.len() != ambient {
                return Err(Error::DimensionMismatch("cone generator length".into()));
            }
            if linalg::is_zero_vec(g) {
                continue;
            }
            let p = linalg::primitive(g);
            if !gens.contains(&p) {
                gens.push(p);
            }
        }
        let (_, pivots) = linalg::rref(&gens);
        let d = pivots.len();
        let local: Matrix = gens.iter().map(|g| pivots.iter().map(|&i| g[i].clone()).collect()).collect();
        let mut facets: Matrix = Vec::new();
        if d > 0 {
            for combo in (0..gens.len()).combinations(d - 1) {
                let rows: Matrix = combo.iter().map(|&i| local[i].clone()).collect();
                let ns = linalg::nullspace(&rows, d);
                if ns.len() != 1 {
                    continue;
                }
                let vals: Vec<Rat> = local.iter().map(|g| linalg::dot(&ns[0], g)).collect();
                let pos = vals.iter().any(|v| v.is_positive());
                let neg = vals.iter().any(|v| v.is_negative());
                if pos && neg {
                    continue;
                }
                let h: Vec<Rat> = if neg { ns[0].iter().map(|x| -x).collect() } else { ns[0].clone() };
                let h = linalg::primitive(&h);
                if !facets.contains(&h) {
                    facets.push(h);
                }
            }
            if linalg::rank(&facets) < d {
                return Err(Error::Degenerate("cone is not pointed".into()));
            }
        }
        let rays: Matrix = gens
            .iter()
            .zip(&local)
            .filter(|(_, g)| {
                let tight: Matrix = facets.iter().filter(|f| linalg::dot(f, g).is_zero()).cloned().collect();
                linalg::rank(&tight) + 1 == d
            })
            .map(|(g, _)| g.clone())
            .collect();
        Ok(PointedCone { ambient, rays, pivots, facets })
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn rays(&self) -> &[Point] {
        &self.rays
    }

    /// Linear dimension of the cone; the projectivized cone has dimension one less.
    pub fn dim(&self) -> usize {
        self.pivots.len()
    }

    pub fn is_full_dim(&self) -> bool {
        self.dim() == self.ambient
    }

    /// Facet normals in ambient coordinates (`ℓ(v) = Σ ℓ_i v_{pivot_i}` on the span).
    pub fn facet_normals(&self) -> Matrix {
        self.facets.iter().map(|f| self.lift(f)).collect()
    }

    fn lift(&self, f: &[Rat]) -> Vec<Rat> {
        let mut out = vec![Rat::zero(); self.ambient];
        for (&p, c) in self.pivots.iter().zip(f) {
            out[p] = c.clone();
        }
        out
    }

    /// A linear functional positive on every nonzero point of the cone: the sum of the
    /// facet normals.
    pub fn positive_functional(&self) -> Vec<Rat> {
        let mut s = vec![Rat::zero(); self.ambient];
        for f in self.facet_normals() {
            for (a, b) in s.iter_mut().zip(&f) {
                *a += b;
            }
        }
        s
    }

    /// The section `{ℓ = 1}` as a polytope in `ℝ^c`; vertex `i` lies on ray `i`.
    pub fn section(&self) -> Result<Polytope> {
        let l = self.positive_functional();
        let pts: Vec<Point> = self
            .rays
            .iter()
            .map(|r| {
                let s = linalg::dot(&l, r);
                r.iter().map(|x| x / &s).collect()
            })
            .collect();
        let names: Vec<String> = (0..self.ambient).map(|i| format!("y{i}")).collect();
        Polytope::from_vertices(vars(&names), &pts)
    }

    /// Whether `v` lies in the cone.
    pub fn contains(&self, v: &[Rat]) -> bool {
        let local: Vec<Rat> = self.pivots.iter().map(|&i| v[i].clone()).collect();
        if self.span_vector(&local) != v {
            return false;
        }
        self.facets.iter().all(|f| !linalg::dot(f, &local).is_negative())
    }

    /// The vector of the span with the given pivot coordinates.
    fn span_vector(&self, local: &[Rat]) -> Vec<Rat> {
        let (basis, _) = linalg::rref(&self.rays);
        let mut v = vec![Rat::zero(); self.ambient];
        for (row, c) in basis.iter().zip(local) {
            for (a, b) in v.iter_mut().zip(row) {
                *a += c * b;
            }
        }
        v
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polytope::ipoint;

    #[test]
    fn redundant_generator_dropped() {
        let c = PointedCone::new(2, &[ipoint(&[1, 0]), ipoint(&[1, 1]), ipoint(&[0, 2])]).unwrap();
        assert_eq!(c.rays(), &[ipoint(&[1, 0]), ipoint(&[0, 1])]);
        assert!(c.contains(&ipoint(&[3, 1])));
        assert!(!c.contains(&ipoint(&[-1, 1])));
    }

    #[test]
    fn line_is_not_pointed() {
        assert!(PointedCone::new(2, &[ipoint(&[1, 0]), ipoint(&[-1, 0])]).is_err());
    }

    #[test]
    fn section_of_square_cone() {
        let c = PointedCone::new(
            3,
            &[ipoint(&[1, 0, 0]), ipoint(&[1, 1, 0]), ipoint(&[1, 1, 1]), ipoint(&[1, 0, 1])],
        )
        .unwrap();
        assert_eq!(c.rays().len(), 4);
        assert_eq!(c.section().unwrap().dim(), 2);
    }
}
