//! Projective linear subspaces of ℙⁿ, written in the affine chart `X_0 = 1`.

use std::fmt;

use num_traits::{One, Zero};

use crate::algebra::{MPoly, Rat, Vars};
use crate::linalg::{self, Matrix};

/// `{[X_0 : x] : c_0 X_0 + c·x = 0 for every row}` with rows in reduced echelon form.
///
/// Rank `n + 1` is the empty subspace; rank 0 is all of ℙⁿ.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LinearSubspace {
    n: usize,
    rows: Matrix,
}

impl LinearSubspace {
    /// From homogeneous rows `[c_0, c_1, …, c_n]`.
    pub fn new(n: usize, equations: &[Vec<Rat>]) -> Self {
        assert!(equations.iter().all(|r| r.len() == n + 1), "equation rows must have n+1 entries");
        let (rows, _) = linalg::rref(equations);
        LinearSubspace { n, rows }
    }

    pub fn from_ints(n: usize, equations: &[&[i64]]) -> Self {
        let rows: Matrix = equations
            .iter()
            .map(|r| r.iter().map(|&x| Rat::from_integer(x.into())).collect())
            .collect();
        LinearSubspace::new(n, &rows)
    }

    pub fn whole(n: usize) -> Self {
        LinearSubspace { n, rows: vec![] }
    }

    pub fn empty(n: usize) -> Self {
        let rows = (0..=n)
            .map(|i| (0..=n).map(|j| if i == j { Rat::one() } else { Rat::zero() }).collect())
            .collect();
        LinearSubspace { n, rows }
    }

    /// The hyperplane at infinity `X_0 = 0`.
    pub fn at_infinity(n: usize) -> Self {
        let mut row = vec![Rat::zero(); n + 1];
        row[0] = Rat::one();
        LinearSubspace::new(n, &[row])
    }

    pub fn hyperplane(n: usize, f: &[Rat]) -> Self {
        LinearSubspace::new(n, &[f.to_vec()])
    }

    /// Projective span of affine points.
    pub fn span_of_points(n: usize, points: &[Vec<Rat>]) -> Self {
        let m: Matrix = points.iter().map(|p| homogenize(p)).collect();
        LinearSubspace::new(n, &linalg::nullspace(&m, n + 1))
    }

    /// Projective span of homogeneous vectors.
    pub fn span_of_vectors(n: usize, vectors: &[Vec<Rat>]) -> Self {
        LinearSubspace::new(n, &linalg::nullspace(vectors, n + 1))
    }

    pub fn ambient_dim(&self) -> usize {
        self.n
    }

    pub fn equations(&self) -> &Matrix {
        &self.rows
    }

    pub fn codim(&self) -> usize {
        self.rows.len()
    }

    /// Projective dimension, `-1` for the empty subspace.
    pub fn dim(&self) -> i64 {
        self.n as i64 - self.rows.len() as i64
    }

    pub fn is_empty(&self) -> bool {
        self.rows.len() == self.n + 1
    }

    pub fn is_hyperplane(&self) -> bool {
        self.rows.len() == 1
    }

    /// Whether the subspace has points with `X_0 ≠ 0`.
    pub fn meets_chart(&self) -> bool {
        let mut e0 = vec![Rat::zero(); self.n + 1];
        e0[0] = Rat::one();
        !linalg::in_row_space(&self.rows, &e0)
    }

    /// `self ⊆ other`.
    pub fn is_contained_in(&self, other: &LinearSubspace) -> bool {
        other.rows.iter().all(|r| linalg::in_row_space(&self.rows, r))
    }

    pub fn intersect(&self, other: &LinearSubspace) -> LinearSubspace {
        let mut rows = self.rows.clone();
        rows.extend(other.rows.iter().cloned());
        LinearSubspace::new(self.n, &rows)
    }

    /// Homogeneous basis vectors of the underlying linear space in `ℝ^{n+1}`.
    pub fn basis(&self) -> Matrix {
        linalg::nullspace(&self.rows, self.n + 1)
    }

    pub fn contains_point(&self, p: &[Rat]) -> bool {
        let h = homogenize(p);
        self.rows.iter().all(|r| linalg::dot(r, &h).is_zero())
    }

    pub fn contains_vector(&self, v: &[Rat]) -> bool {
        self.rows.iter().all(|r| linalg::dot(r, v).is_zero())
    }

    /// Chart variables usable as coordinates on the affine part: the non-pivot columns.
    pub fn free_vars(&self) -> Vec<usize> {
        let (_, pivots, _) = affine_rref(self.n, &self.rows);
        (0..self.n).filter(|c| !pivots.contains(c)).collect()
    }

    /// Equations `[c_0, c]` normalized to the identity on the pivot coordinates when the
    /// subspace meets the chart; the echelon rows otherwise. These serve as coordinates on
    /// the normal space `ℝ^{n+1}/W`.
    pub fn normal_forms(&self) -> Matrix {
        let (r, pivots, consistent) = affine_rref(self.n, &self.rows);
        if !consistent || pivots.len() != self.rows.len() {
            return self.rows.clone();
        }
        r.iter()
            .map(|row| {
                let mut out = vec![row[self.n].clone()];
                out.extend(row[..self.n].iter().cloned());
                out
            })
            .collect()
    }

    /// Affine equations as polynomials on the chart.
    pub fn polys(&self, vars: &Vars) -> Vec<MPoly> {
        self.rows.iter().map(|r| MPoly::affine(vars.clone(), r)).collect()
    }

    /// Affine parametrization `x = base + Σ t_j dirs_j` by the free variables.
    pub fn parametrize(&self) -> Option<AffineParam> {
        if !self.meets_chart() {
            return None;
        }
        AffineParam::from_equations(self.n, &self.rows)
    }
}

/// Row reduction of affine rows `[c_0, c]` with the constant column moved last, so pivots
/// are chart coordinates. Returns rows as `[c, c_0]`, the pivot coordinates, and whether
/// the system `c_0 + c·x = 0` is consistent.
fn affine_rref(n: usize, rows: &[Vec<Rat>]) -> (Matrix, Vec<usize>, bool) {
    let moved: Matrix = rows
        .iter()
        .map(|r| {
            let mut m = r[1..].to_vec();
            m.push(r[0].clone());
            m
        })
        .collect();
    let (r, pivots) = linalg::rref(&moved);
    let consistent = pivots.last() != Some(&n);
    let pivots = pivots.into_iter().filter(|&p| p < n).collect();
    (r, pivots, consistent)
}

pub fn homogenize(p: &[Rat]) -> Vec<Rat> {
    let mut h = Vec::with_capacity(p.len() + 1);
    h.push(Rat::one());
    h.extend(p.iter().cloned());
    h
}

/// An affine subspace of `ℝⁿ` parametrized by a subset of the coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineParam {
    pub base: Vec<Rat>,
    /// One direction per free coordinate.
    pub dirs: Matrix,
    pub free: Vec<usize>,
}

impl AffineParam {
    /// Solves `c_0 + c·x = 0` for the pivot coordinates; `None` if inconsistent.
    pub fn from_equations(n: usize, rows: &[Vec<Rat>]) -> Option<Self> {
        let (r, pivots, consistent) = affine_rref(n, rows);
        if !consistent {
            return None;
        }
        let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
        let mut base = vec![Rat::zero(); n];
        for (row, &p) in r.iter().zip(&pivots) {
            base[p] = -row[n].clone();
        }
        let dirs = free
            .iter()
            .map(|&f| {
                let mut d = vec![Rat::zero(); n];
                d[f] = Rat::one();
                for (row, &p) in r.iter().zip(&pivots) {
                    d[p] = -row[f].clone();
                }
                d
            })
            .collect();
        Some(AffineParam { base, dirs, free })
    }

    pub fn dim(&self) -> usize {
        self.free.len()
    }

    pub fn point(&self, t: &[Rat]) -> Vec<Rat> {
        let mut x = self.base.clone();
        for (tj, d) in t.iter().zip(&self.dirs) {
            for (xi, di) in x.iter_mut().zip(d) {
                *xi += tj * di;
            }
        }
        x
    }

    /// Coordinates of a point of the subspace.
    pub fn coords(&self, x: &[Rat]) -> Vec<Rat> {
        self.free.iter().map(|&f| x[f].clone()).collect()
    }

    /// Pulls an affine form `[c_0, c]` on `ℝⁿ` back to the parameter space.
    pub fn pull_form(&self, f: &[Rat]) -> Vec<Rat> {
        let mut out = vec![&f[0] + linalg::dot(&f[1..], &self.base)];
        for d in &self.dirs {
            out.push(linalg::dot(&f[1..], d));
        }
        out
    }
}

impl fmt::Display for LinearSubspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.rows.is_empty() {
            return write!(f, "P^{}", self.n);
        }
        if self.is_empty() {
            return write!(f, "empty");
        }
        let mut names = vec!["X0".to_string()];
        names.extend((1..=self.n).map(|i| format!("x{i}")));
        let parts: Vec<String> = if self.meets_chart() {
            let v = crate::algebra::vars(&names[1..]);
            self.rows.iter().map(|r| format!("{} = 0", MPoly::affine(v.clone(), r))).collect()
        } else {
            let v = crate::algebra::vars(&names);
            let mut zero = vec![Rat::zero()];
            self.rows
                .iter()
                .map(|r| {
                    zero.truncate(1);
                    zero.extend(r.iter().cloned());
                    format!("{} = 0", MPoly::affine(v.clone(), &zero))
                })
                .collect()
        };
        write!(f, "{{{}}}", parts.join(", "))
    }
}

impl fmt::Debug for LinearSubspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LinearSubspace{self}")
    }
}
