//! Standard polytopes used throughout the examples and tests.

use super::{ipoint, Point, Polytope};
use crate::algebra::{vars, Vars};

/// `x, y, z` up to dimension 3, `x1, …, xn` beyond.
pub fn chart_vars(n: usize) -> Vars {
    if n <= 3 {
        vars(&["x", "y", "z"][..n])
    } else {
        let names: Vec<String> = (1..=n).map(|i| format!("x{i}")).collect();
        vars(&names)
    }
}

/// `x1, …, xn`.
pub fn indexed_vars(n: usize) -> Vars {
    let names: Vec<String> = (1..=n).map(|i| format!("x{i}")).collect();
    vars(&names)
}

fn build(vs: Vars, pts: &[Point]) -> Polytope {
    Polytope::from_vertices(vs, pts).expect("fixed shape")
}

/// `[0,1]ⁿ`, vertex `i` has coordinate `j` equal to bit `j` of `i`.
pub fn unit_cube(n: usize) -> Polytope {
    let pts: Vec<Point> = (0..1u32 << n)
        .map(|i| ipoint(&(0..n).map(|j| (i >> j & 1) as i64).collect::<Vec<_>>()))
        .collect();
    build(chart_vars(n), &pts)
}

/// `conv(0, e_1, …, e_n) = {x_i ≥ 0, Σ x_i ≤ 1}` on the variables `x1, …, xn`.
pub fn standard_simplex(n: usize) -> Polytope {
    let mut pts = vec![ipoint(&vec![0; n])];
    for i in 0..n {
        let mut e = vec![0; n];
        e[i] = 1;
        pts.push(ipoint(&e));
    }
    build(indexed_vars(n), &pts)
}

/// The triangle `(0,0), (1,0), (0,1)` on `x, y`.
pub fn triangle() -> Polytope {
    build(chart_vars(2), &[ipoint(&[0, 0]), ipoint(&[1, 0]), ipoint(&[0, 1])])
}

pub fn pentagon() -> Polytope {
    build(
        chart_vars(2),
        &[ipoint(&[0, 0]), ipoint(&[1, 0]), ipoint(&[2, 1]), ipoint(&[1, 2]), ipoint(&[0, 1])],
    )
}

/// Square base `[0,1]² × {0}` with apex `p = (0,0,1)` above the vertex at the origin.
pub fn square_pyramid() -> Polytope {
    build(
        chart_vars(3),
        &[ipoint(&[0, 0, 0]), ipoint(&[1, 0, 0]), ipoint(&[0, 1, 0]), ipoint(&[1, 1, 0]), ipoint(&[0, 0, 1])],
    )
}

/// The 4-polytope with vertices `0000, 1000, 0100, 1100, 0010, 0001, 1001`; its
/// intersection with `x4 = 0` is [`square_pyramid`].
pub fn schlegel_polytope() -> Polytope {
    let pts: Vec<Point> = [
        [0, 0, 0, 0],
        [1, 0, 0, 0],
        [0, 1, 0, 0],
        [1, 1, 0, 0],
        [0, 0, 1, 0],
        [0, 0, 0, 1],
        [1, 0, 0, 1],
    ]
    .iter()
    .map(|p| ipoint(p))
    .collect();
    build(indexed_vars(4), &pts)
}
