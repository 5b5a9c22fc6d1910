//! The braid arrangement and the positive part of `M̄_{0,n+1}`.
//!
//! Points `z_0, …, z_{n-1}` with `z_0 = 0`, `z_{n-1} = 1` and the last point at infinity;
//! the chart coordinates are `z_1, …, z_{n-2}`. The region `0 < z_1 < … < z_{n-2} < 1`
//! becomes the standard simplex under `x_1 = z_1`, `x_i = z_i − z_{i-1}`.
//!
//! Flat labels come from [`FlatLattice::label`], so point `k` of a partition label is
//! `z_{k-1}`.

use num_traits::One;
use serde_json::json;

use crate::algebra::{vars, MPoly, PolyMap, Rat, TopForm, Vars};
use crate::blowup::verify_wondertope_seeded;
use crate::buildingset_geom::{check_building_set, GeomBuildingSet};
use crate::canonical_form::polytope_form;
use crate::error::{Error, Result};
use crate::matroid::{braid_normals, is_building_set, minimal_building_set, nested_set_complex, FlatLattice, MatroidBuildingSet};
use crate::polytope::{shapes, LinearSubspace, Polytope};
use crate::report::VerificationReport;

#[derive(Clone, Debug)]
pub struct BraidData {
    pub n: usize,
    /// `e_i − e_j` for `i < j`; they vanish on `(1, …, 1)`.
    pub normals: Vec<Vec<Rat>>,
    pub lattice: FlatLattice,
    /// Partitions with exactly one block of size at least two.
    pub minimal: MatroidBuildingSet,
}

fn need(n: usize, lo: usize, hi: usize) -> Result<()> {
    if n < lo || n > hi {
        return Err(Error::Precondition(format!("n = {n} is outside {lo}..={hi}")));
    }
    Ok(())
}

pub fn braid_data(n: usize) -> Result<BraidData> {
    need(n, 3, 7)?;
    let lattice = FlatLattice::partition(n)?;
    let minimal = minimal_building_set(&lattice);
    Ok(BraidData { n, normals: braid_normals(n), lattice, minimal })
}

/// `z1, …, z_{n-2}`.
pub fn z_vars(n: usize) -> Vars {
    let names: Vec<String> = (1..n - 1).map(|i| format!("z{i}")).collect();
    vars(&names)
}

/// The simplex `{x_i ≥ 0, Σ x_i ≤ 1}` on `x1, …, x_{n-2}`.
pub fn simplex_region(n: usize) -> Result<Polytope> {
    need(n, 3, 64)?;
    Ok(shapes::standard_simplex(n - 2))
}

/// `z ↦ x`: `x_1 = z_1`, `x_i = z_i − z_{i-1}`.
pub fn z_to_x(n: usize) -> Result<PolyMap> {
    need(n, 3, 64)?;
    let (z, x) = (z_vars(n), shapes::indexed_vars(n - 2));
    let comps = (0..n - 2)
        .map(|i| {
            let zi = MPoly::var(z.clone(), i);
            if i == 0 {
                zi
            } else {
                zi.sub(&MPoly::var(z.clone(), i - 1))
            }
        })
        .collect();
    PolyMap::from_polys(z, x, comps)
}

/// `x ↦ z`: `z_k = x_1 + … + x_k`.
pub fn x_to_z(n: usize) -> Result<PolyMap> {
    need(n, 3, 64)?;
    let (z, x) = (z_vars(n), shapes::indexed_vars(n - 2));
    let comps = (0..n - 2)
        .map(|k| (0..=k).fold(MPoly::zero(x.clone()), |acc, i| acc.add(&MPoly::var(x.clone(), i))))
        .collect();
    PolyMap::from_polys(x, z, comps)
}

/// `z_k` as a polynomial on the chart, with `z_0 = 0` and `z_{n-1} = 1`.
fn z_point(n: usize, k: usize) -> MPoly {
    let z = z_vars(n);
    match k {
        0 => MPoly::zero(z),
        k if k == n - 1 => MPoly::one(z),
        k => MPoly::var(z, k - 1),
    }
}

/// `dz_1 ∧ … ∧ dz_{n-2} / ∏ (z_k − z_{k-1})`, with sign `+1` in the chart orientation.
pub fn parke_taylor(n: usize) -> Result<TopForm> {
    need(n, 3, 64)?;
    let z = z_vars(n);
    let den = (1..n).fold(MPoly::one(z.clone()), |acc, k| acc.mul(&z_point(n, k).sub(&z_point(n, k - 1))));
    TopForm::new(crate::algebra::RatFunc::new(MPoly::one(z), den)?)
}

/// `1/(x_1 ⋯ x_m (1 − x_1 − … − x_m))`, the closed form on the bounded simplex.
pub fn bounded_simplex_form(x: &Vars) -> Result<TopForm> {
    let one = MPoly::one(x.clone());
    let sum = (0..x.len()).fold(MPoly::zero(x.clone()), |acc, i| acc.add(&MPoly::var(x.clone(), i)));
    let den = (0..x.len()).fold(one.sub(&sum), |acc, i| acc.mul(&MPoly::var(x.clone(), i)));
    TopForm::new(crate::algebra::RatFunc::new(one, den)?)
}

/// Pulls the simplex form back along `z ↦ x` and the Parke–Taylor form back along `x ↦ z`,
/// and checks the boundary recursion of the Parke–Taylor form.
pub fn verify_parke_taylor(n: usize) -> Result<VerificationReport> {
    need(n, 3, 6)?;
    let mut r = VerificationReport::new(format!("Parke–Taylor form for n = {n}"));
    let pt = parke_taylor(n)?;
    let forward = z_to_x(n)?;
    let backward = x_to_z(n)?;
    let x = shapes::indexed_vars(n - 2);

    let jac = forward.jacobian_det()?;
    r.check(
        "the change of coordinates is unimodular",
        jac.as_constant() == Some(Rat::one()),
        json!({"jacobian": jac.to_string(), "map": forward.to_string()}),
    );
    let composed = forward.compose(&backward)?;
    r.check(
        "the two coordinate changes are inverse",
        composed == PolyMap::identity(x.clone()),
        json!({"composite": composed.to_string()}),
    );

    let region = polytope_form(&simplex_region(n)?)?;
    let standard = bounded_simplex_form(&x)?;
    r.check(
        "canonical form of the region is 1/(x1⋯x_{n-2}(1 − Σx))",
        region == standard,
        json!({"triangulated": region.to_string(), "closed form": standard.to_string()}),
    );
    let pulled = forward.pullback(&region)?;
    r.check(
        "simplex form pulled back to z is the Parke–Taylor form",
        pulled == pt,
        json!({"pullback": pulled.to_string(), "parke_taylor": pt.to_string(), "sign": pulled.up_to_sign(&pt)}),
    );
    let pushed = backward.pullback(&pt)?;
    r.check(
        "Parke–Taylor form pulled back to x is the simplex form",
        pushed == region,
        json!({"pullback": pushed.to_string(), "simplex": region.to_string()}),
    );

    if n > 3 {
        let lower = parke_taylor(n - 1)?;
        for k in 1..n {
            let f = z_point(n, k).sub(&z_point(n, k - 1));
            let res = pt.residue_linear(&f, true)?;
            let renamed = lower.with_chart(res.form.chart().clone());
            let sign = res.form.up_to_sign(&renamed);
            r.check(
                format!("residue along z{k} = z{} is a Parke–Taylor form for n = {}", k - 1, n - 1),
                sign.is_some(),
                json!({"divisor": f.to_string(), "residue": res.form.to_string(), "sign": sign}),
            );
        }
    } else {
        let segment = [(z_point(n, 1), 1), (z_point(n, 2).sub(&z_point(n, 1)), -1)];
        for (f, expected) in segment {
            let res = pt.residue_linear(&f, true)?;
            let v = res.form.coef().as_constant();
            r.check(
                format!("residue along {f} = 0 is ±1"),
                v.as_ref().is_some_and(|c| *c == Rat::one() || *c == -Rat::one()),
                json!({"residue": res.form.to_string(), "expected sign": expected}),
            );
        }
    }
    Ok(r)
}

/// Homogeneous row of `Z_a − Z_b` on `ℙ^{n-2}` with coordinates `[X_0 : x_1 : …]`.
fn difference_row(n: usize, a: usize, b: usize) -> Vec<Rat> {
    let z_row = |k: usize| -> Vec<Rat> {
        let mut row = vec![Rat::from_integer(0.into()); n - 1];
        if k == n - 1 {
            row[0] = Rat::one();
        } else {
            // z_k = x_1 + … + x_k
            for c in row.iter_mut().take(k + 1).skip(1) {
                *c = Rat::one();
            }
        }
        row
    };
    z_row(a).iter().zip(z_row(b)).map(|(p, q)| p - q).collect()
}

/// The subspace of `ℙ^{n-2}` (in the `x` chart) where the points in each block coincide.
pub fn flat_subspace(l: &FlatLattice, x: usize) -> Result<LinearSubspace> {
    let blocks = l.partition_blocks(x).ok_or_else(|| Error::Precondition("not a partition lattice".into()))?;
    let n: usize = blocks.iter().map(|b| b.len()).sum();
    let rows: Vec<Vec<Rat>> = blocks
        .iter()
        .flat_map(|b| b.windows(2).map(|w| difference_row(n, w[0] - 1, w[1] - 1)).collect::<Vec<_>>())
        .collect();
    Ok(LinearSubspace::new(n - 2, &rows))
}

/// The subspaces of the flats of `b`, labelled by their partitions.
pub fn geometric_building_set(l: &FlatLattice, b: &MatroidBuildingSet) -> Result<GeomBuildingSet> {
    let n = match l.kind() {
        crate::matroid::LatticeKind::Partition(n) => n,
        _ => return Err(Error::Precondition("geometric building sets need a partition lattice".into())),
    };
    let subspaces = b.members.iter().map(|&x| flat_subspace(l, x)).collect::<Result<Vec<_>>>()?;
    GeomBuildingSet::with_labels(n - 2, subspaces, b.labels(l))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DivisorCount {
    pub n: usize,
    /// `|B^min| − 1`: the top flat is the empty subspace.
    pub count: usize,
    pub formula: usize,
    pub nested_vertices: usize,
}

impl DivisorCount {
    pub fn agrees(&self) -> bool {
        self.count == self.formula && self.count == self.nested_vertices
    }
}

pub fn divisor_count(n: usize) -> Result<DivisorCount> {
    let data = braid_data(n)?;
    let nested = nested_set_complex(&data.lattice, &data.minimal)?;
    Ok(DivisorCount {
        n,
        count: data.minimal.len() - 1,
        formula: (1usize << n) - n - 2,
        nested_vertices: nested.vertices.len(),
    })
}

/// The wondertope of the triangle for `B^min(Π_4)`: six lines (one at infinity), four
/// triple points (two at infinity) and the empty top flat.
pub fn verify_m05_pentagon() -> Result<VerificationReport> {
    let data = braid_data(4)?;
    let region = simplex_region(4)?;
    let b = geometric_building_set(&data.lattice, &data.minimal)?;
    let mut r = VerificationReport::new("wondertope of the triangle for the minimal braid building set");
    let w = verify_wondertope_seeded(&region, &b, 0)?;
    let census = w.find("boundary census").map(|c| c.witness.clone());
    let count = census.as_ref().and_then(|c| c["count"].as_u64());
    r.merge("wondertope", w);
    r.check("exactly 5 boundary divisors", count == Some(5), census.unwrap_or(json!(null)));

    let pt = parke_taylor(4)?;
    let pulled = z_to_x(4)?.pullback(&polytope_form(&region)?)?;
    r.check(
        "canonical form in z coordinates is the Parke–Taylor form",
        pulled == pt,
        json!({"pullback": pulled.to_string(), "parke_taylor": pt.to_string()}),
    );
    Ok(r)
}

/// Outcome of running the lattice and the geometric building-set tests on the same
/// candidate families of `Π_n`.
#[derive(Clone, Debug)]
pub struct BuildingSetComparison {
    pub n: usize,
    pub candidates: usize,
    /// `(labels, lattice verdict, geometric verdict)`.
    pub disagreements: Vec<(Vec<String>, bool, bool)>,
}

/// Runs both tests on every subset of the nonzero flats of `Π_n`; with `pruned`, only on
/// subsets containing every atom, which the lattice test requires anyway. The empty
/// family is skipped.
pub fn compare_building_set_tests(n: usize, pruned: bool) -> Result<BuildingSetComparison> {
    need(n, 3, 4)?;
    let l = FlatLattice::partition(n)?;
    let atoms = l.atoms();
    let free: Vec<usize> = (1..l.len()).filter(|x| !pruned || !atoms.contains(x)).collect();
    let fixed: Vec<usize> = if pruned { atoms } else { vec![] };
    let mut out = BuildingSetComparison { n, candidates: 0, disagreements: vec![] };
    for mask in 0u32..1 << free.len() {
        let members: Vec<usize> =
            fixed.iter().copied().chain((0..free.len()).filter(|&i| mask >> i & 1 == 1).map(|i| free[i])).collect();
        if members.is_empty() {
            continue;
        }
        out.candidates += 1;
        let b = MatroidBuildingSet::new(&l, members)?;
        let lattice = is_building_set(&l, &b).0;
        let geometric = check_building_set(&geometric_building_set(&l, &b)?).passed();
        if lattice != geometric {
            out.disagreements.push((b.labels(&l), lattice, geometric));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::text::parse_topform;
    use crate::matroid::maximal_building_set;

    #[test]
    fn braid_data_sizes() {
        let d = braid_data(4).unwrap();
        assert_eq!(d.normals.len(), 6);
        assert_eq!(d.minimal.len(), 11);
        let d = braid_data(3).unwrap();
        assert_eq!(d.normals.len(), 3);
        assert_eq!(d.minimal.len(), (1 << 3) - 3 - 1);
        assert!(braid_data(2).is_err());
        // the arrangement's own intersection lattice is the partition lattice
        let from_normals = FlatLattice::from_arrangement(&braid_normals(4)).unwrap();
        let labels = |l: &FlatLattice| (0..l.len()).map(|x| l.label(x)).collect::<Vec<_>>();
        assert_eq!(labels(&from_normals), labels(&braid_data(4).unwrap().lattice));
    }

    #[test]
    fn region_and_forms() {
        let t = simplex_region(4).unwrap();
        assert_eq!(t.vertices().len(), 3);
        assert_eq!(simplex_region(3).unwrap().vertices().len(), 2);
        assert_eq!(parke_taylor(4).unwrap(), parse_topform("[z1, z2] 1/(z1*(z2-z1)*(1-z2))").unwrap());
        assert_eq!(parke_taylor(3).unwrap(), parse_topform("[z1] 1/(z1*(1-z1))").unwrap());
        assert_eq!(parke_taylor(5).unwrap(), parse_topform("[z1, z2, z3] 1/(z1*(z2-z1)*(z3-z2)*(1-z3))").unwrap());
    }

    #[test]
    fn parke_taylor_batteries() {
        for n in 3..=6 {
            let r = verify_parke_taylor(n).unwrap();
            assert!(r.passed(), "{r}");
        }
        assert!(verify_parke_taylor(7).is_err());
    }

    #[test]
    fn pullback_agrees_with_substitution_at_points() {
        // independent oracle: the coefficient at z equals the simplex coefficient at x(z)
        let n = 5;
        let pt = parke_taylor(n).unwrap();
        let simplex = bounded_simplex_form(&shapes::indexed_vars(n - 2)).unwrap();
        let map = z_to_x(n).unwrap();
        for z in [[1, 2, 3], [1, 3, 7], [2, 5, 6]] {
            let z: Vec<Rat> = z.iter().map(|&k| Rat::new(k.into(), 8.into())).collect();
            let x = map.eval(&z).unwrap();
            assert_eq!(pt.eval(&z), simplex.eval(&x));
        }
    }

    #[test]
    fn divisor_counts() {
        for n in 3..=6 {
            let c = divisor_count(n).unwrap();
            assert!(c.agrees(), "{c:?}");
        }
        assert_eq!(divisor_count(4).unwrap().count, 10);
        assert_eq!(divisor_count(5).unwrap().count, 25);
        assert_eq!(divisor_count(3).unwrap().count, 3);
    }

    #[test]
    fn flats_as_subspaces() {
        let l = FlatLattice::partition(4).unwrap();
        let at = |s: &str| flat_subspace(&l, l.parse_flat(s).unwrap()).unwrap();
        // z1 = z2 = 0: the origin of the x chart
        assert_eq!(at("123|4"), LinearSubspace::from_ints(2, &[&[0, 1, 0], &[0, 0, 1]]));
        // z1 = z2 = 1
        assert_eq!(at("1|234"), LinearSubspace::from_ints(2, &[&[1, -1, 0], &[0, 0, 1]]));
        // z0 = z3 is the line at infinity
        assert_eq!(at("14|2|3"), LinearSubspace::at_infinity(2));
        assert!(at("1234").is_empty());
        assert!(!at("134|2").meets_chart());
        let b = geometric_building_set(&l, &minimal_building_set(&l)).unwrap();
        assert!(check_building_set(&b).passed());
        let bmax = geometric_building_set(&l, &maximal_building_set(&l)).unwrap();
        assert!(check_building_set(&bmax).passed());
    }

    #[test]
    fn m05_pentagon() {
        let r = verify_m05_pentagon().unwrap();
        assert!(r.passed(), "{r}");
    }

    #[test]
    fn lattice_and_geometric_tests_agree_with_all_atoms() {
        let a2 = compare_building_set_tests(3, true).unwrap();
        assert_eq!(a2.candidates, 2);
        assert!(a2.disagreements.is_empty(), "{:?}", a2.disagreements);
        let a3 = compare_building_set_tests(4, true).unwrap();
        assert_eq!(a3.candidates, 256);
        assert!(a3.disagreements.is_empty(), "{:?}", a3.disagreements);
    }

    #[test]
    fn without_atoms_the_tests_differ() {
        // {top} alone: the lattice test fails at every atom; geometrically the empty
        // subspace is its own only intersection
        let a2 = compare_building_set_tests(3, false).unwrap();
        assert_eq!(a2.candidates, 15);
        assert!(a2.disagreements.iter().any(|(b, lat, geo)| b == &vec!["123".to_string()] && !lat && *geo));
        assert!(a2.disagreements.iter().all(|(_, lat, geo)| !lat && *geo));
    }
}
