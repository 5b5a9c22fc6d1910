//! Blow-ups of the affine chart along linear centers, in explicit coordinate charts, and
//! the verifiers built on them.
//!
//! A center `W` of codimension `c` is cut out by affine forms `h_0, …, h_{c-1}`. Chart `j`
//! of the blow-up has coordinates `(x_free, u_i, t)` where `x_free` are the free
//! coordinates of `W`, `u_i = h_i/h_j` for `i ≠ j` and `t = h_j`; the exceptional divisor
//! is `{t = 0}` and `π` is the unique affine solution of `h_j = t`, `h_i = u_i t`.

use std::collections::{BTreeSet, HashSet};

use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use serde_json::json;

use crate::algebra::{vars, MPoly, PolyMap, Rat, RatFunc, TopForm, Vars};
use crate::buildingset_geom::{check_building_set, check_face_condition, check_well_adapted, predicted_boundary, Divisor, GeomBuildingSet};
use crate::canonical_form::{cone_form, facet_residue_of, polytope_form};
use crate::error::{Error, Result};
use crate::linalg::{self, Matrix};
use crate::polytope::{fmt_point, homogenize, LinearSubspace, Point, PointedCone, Polytope};
use crate::report::VerificationReport;

/// Names of the new chart coordinates: one ratio prefix and the exceptional coordinate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChartNames {
    pub ratio: String,
    pub exceptional: String,
}

impl Default for ChartNames {
    fn default() -> Self {
        ChartNames { ratio: "u".into(), exceptional: "t".into() }
    }
}

impl ChartNames {
    /// `u{k}` and `t{k}`, for step `k` of a sequence.
    pub fn step(k: usize) -> Self {
        ChartNames { ratio: format!("u{k}"), exceptional: format!("t{k}") }
    }

    fn ratio_names(&self, count: usize) -> Vec<String> {
        if count == 1 {
            return vec![self.ratio.clone()];
        }
        let sep = if self.ratio.ends_with(|c: char| c.is_ascii_digit()) { "_" } else { "" };
        (1..=count).map(|i| format!("{}{sep}{i}", self.ratio)).collect()
    }
}

/// One chart of the blow-up of an affine chart along a linear center meeting it.
#[derive(Clone, Debug)]
pub struct BlowupChart {
    center: LinearSubspace,
    free: Vec<usize>,
    normal: Matrix,
    chart_index: usize,
    map: PolyMap,
    inverse: PolyMap,
    adapted: bool,
}

impl BlowupChart {
    /// Chart `chart_index` built from [`LinearSubspace::normal_forms`].
    pub fn new(center: &LinearSubspace, target: &Vars, chart_index: usize) -> Result<Self> {
        Self::with_normal(center, target, center.normal_forms(), chart_index, &ChartNames::default())
    }

    /// Chart built from explicit affine forms `[c_0, c]` cutting out the center. If the
    /// Jacobian comes out negative the first ratio form is negated, so the chart is
    /// always orientation-preserving away from `t < 0`.
    pub fn with_normal(
        center: &LinearSubspace,
        target: &Vars,
        normal: Matrix,
        chart_index: usize,
        names: &ChartNames,
    ) -> Result<Self> {
        let chart = Self::build(center, target, &normal, chart_index, names)?;
        if chart.jacobian_sign()? > 0 {
            return Ok(chart);
        }
        let mut normal = normal;
        let i = (0..normal.len()).find(|&i| i != chart_index).expect("codimension at least 2");
        normal[i] = normal[i].iter().map(|x| -x).collect();
        Self::build(center, target, &normal, chart_index, names)
    }

    /// A chart on which `t ≥ 0` over `p`, when one exists: the last coordinate `h_j` of
    /// constant sign on the vertices, else the positive functional of the normal cone.
    /// Falls back to the standard last chart, marked as not adapted.
    pub fn adapted(p: &Polytope, center: &LinearSubspace, names: &ChartNames) -> Result<Self> {
        let target = p.vars();
        let normal = center.normal_forms();
        let c = normal.len();
        let imgs: Matrix = p.vertices().iter().map(|v| linalg::mat_vec(&normal, &homogenize(v))).collect();
        let semidefinite = |j: usize, s: i32| {
            imgs.iter().all(|y| y[j].is_zero() || signum(&y[j]) == s) && imgs.iter().any(|y| signum(&y[j]) == s)
        };
        for j in (0..c).rev() {
            for s in [1, -1] {
                if semidefinite(j, s) {
                    let mut nm = normal.clone();
                    if s < 0 {
                        nm[j] = nm[j].iter().map(|x| -x).collect();
                    }
                    let mut chart = Self::with_normal(center, target, nm, j, names)?;
                    chart.adapted = true;
                    return Ok(chart);
                }
            }
        }
        if let Ok(cone) = PointedCone::new(c, &imgs) {
            let l = cone.positive_functional();
            let positive = imgs.iter().all(|y| !linalg::dot(&l, y).is_negative())
                && imgs.iter().any(|y| linalg::dot(&l, y).is_positive());
            if let (true, Some(k)) = (positive, (0..c).rev().find(|&k| !l[k].is_zero())) {
                let mut nm = normal.clone();
                nm[k] = vec![Rat::zero(); normal[0].len()];
                for (li, row) in l.iter().zip(&normal) {
                    for (a, b) in nm[k].iter_mut().zip(row) {
                        *a += li * b;
                    }
                }
                let mut chart = Self::with_normal(center, target, nm, k, names)?;
                chart.adapted = true;
                return Ok(chart);
            }
        }
        Self::with_normal(center, target, normal, c - 1, names)
    }

    fn build(center: &LinearSubspace, target: &Vars, normal: &Matrix, j: usize, names: &ChartNames) -> Result<Self> {
        let n = target.len();
        if center.ambient_dim() != n {
            return Err(Error::DimensionMismatch(format!(
                "center in P^{} blown up in a chart of dimension {n}",
                center.ambient_dim()
            )));
        }
        if center.is_empty() {
            return Err(Error::Precondition("the center is empty".into()));
        }
        let c = center.codim();
        if c <= 1 {
            return Err(Error::BlowupIsIsomorphism);
        }
        if !center.meets_chart() {
            return Err(Error::Precondition(format!("the center {center} lies at infinity; switch charts first")));
        }
        if j >= c {
            return Err(Error::Precondition(format!("chart index {j} out of range for codimension {c}")));
        }
        if normal.len() != c || normal.iter().any(|r| r.len() != n + 1) || LinearSubspace::new(n, normal) != *center {
            return Err(Error::Precondition("the normal forms do not cut out the center".into()));
        }
        let free = center.free_vars();
        let mut a: Matrix = Vec::with_capacity(n);
        let mut b: Vec<Rat> = Vec::with_capacity(n);
        for &f in &free {
            let mut row = vec![Rat::zero(); n];
            row[f] = Rat::one();
            a.push(row);
            b.push(Rat::zero());
        }
        for h in normal {
            a.push(h[1..].to_vec());
            b.push(h[0].clone());
        }
        let ainv = linalg::inverse(&a)
            .ok_or_else(|| Error::Degenerate("normal forms do not complete the free coordinates".into()))?;

        let mut src: Vec<String> = free.iter().map(|&f| target[f].clone()).collect();
        src.extend(names.ratio_names(c - 1));
        src.push(names.exceptional.clone());
        let mut seen = HashSet::new();
        if let Some(d) = src.iter().find(|s| !seen.insert(s.as_str())) {
            return Err(Error::OverlappingCharts(d.clone()));
        }
        let source = vars(&src);
        let t = MPoly::var(source.clone(), n - 1);
        let mut z: Vec<MPoly> = (0..free.len()).map(|k| MPoly::var(source.clone(), k)).collect();
        let mut r = free.len();
        for i in 0..c {
            if i == j {
                z.push(t.clone());
            } else {
                z.push(MPoly::var(source.clone(), r).mul(&t));
                r += 1;
            }
        }
        // x = A⁻¹ (z − b)
        let comps: Vec<MPoly> = ainv
            .iter()
            .map(|row| {
                row.iter().zip(z.iter().zip(&b)).fold(MPoly::zero(source.clone()), |acc, (a, (zk, bk))| {
                    if a.is_zero() {
                        acc
                    } else {
                        acc.add(&zk.sub(&MPoly::constant(source.clone(), bk.clone())).scale(a))
                    }
                })
            })
            .collect();
        let map = PolyMap::from_polys(source.clone(), target.clone(), comps)?;

        let hj = RatFunc::from_poly(MPoly::affine(target.clone(), &normal[j]));
        let mut inv: Vec<RatFunc> = free.iter().map(|&f| RatFunc::var(target.clone(), f)).collect();
        for (i, h) in normal.iter().enumerate() {
            if i != j {
                inv.push(RatFunc::from_poly(MPoly::affine(target.clone(), h)).div(&hj)?);
            }
        }
        inv.push(hj);
        let inverse = PolyMap::new(target.clone(), source, inv)?;
        Ok(BlowupChart { center: center.clone(), free, normal: normal.clone(), chart_index: j, map, inverse, adapted: false })
    }

    pub fn center(&self) -> &LinearSubspace {
        &self.center
    }

    /// `π`, from the chart coordinates to the blown-up chart.
    pub fn map(&self) -> &PolyMap {
        &self.map
    }

    /// `π⁻¹` as rational functions, defined off `{h_j = 0}`.
    pub fn inverse(&self) -> &PolyMap {
        &self.inverse
    }

    pub fn source(&self) -> &Vars {
        self.map.source()
    }

    pub fn target(&self) -> &Vars {
        self.map.target()
    }

    pub fn chart_index(&self) -> usize {
        self.chart_index
    }

    pub fn codim(&self) -> usize {
        self.normal.len()
    }

    /// The affine forms `h_i` used by this chart, after any sign changes.
    pub fn normal_forms(&self) -> &Matrix {
        &self.normal
    }

    /// Indices of the target coordinates kept as free coordinates.
    pub fn free(&self) -> &[usize] {
        &self.free
    }

    pub fn is_adapted(&self) -> bool {
        self.adapted
    }

    pub fn exceptional_var(&self) -> &str {
        self.source().last().expect("nonempty chart")
    }

    pub fn exceptional_poly(&self) -> MPoly {
        MPoly::var(self.source().clone(), self.source().len() - 1)
    }

    /// Coordinates on the exceptional divisor: the free then the ratio coordinates.
    pub fn exceptional_chart(&self) -> Vars {
        let s = self.source();
        s[..s.len() - 1].to_vec().into()
    }

    /// The ratio coordinates, a chart of the projectivized normal space.
    pub fn ratio_chart(&self) -> Vars {
        let s = self.source();
        s[self.free.len()..s.len() - 1].to_vec().into()
    }

    /// `Jac(π) = s · t^{c-1}` with `s` constant; `None` if the Jacobian has another shape.
    pub fn jacobian_constant(&self) -> Result<Option<Rat>> {
        let jac = self.map.jacobian_det()?;
        let Some(p) = jac.as_polynomial() else { return Ok(None) };
        let tp = self.exceptional_poly().pow(self.codim() as u32 - 1);
        Ok(p.div_exact(&tp).filter(|q| q.is_constant()).map(|q| q.constant_term()).filter(|s| !s.is_zero()))
    }

    fn jacobian_sign(&self) -> Result<i32> {
        match self.jacobian_constant()? {
            Some(s) => Ok(signum(&s)),
            None => Err(Error::Degenerate("the Jacobian is not a monomial in the exceptional coordinate".into())),
        }
    }

    pub fn pullback(&self, w: &TopForm) -> Result<TopForm> {
        self.map.pullback(w)
    }

    /// `π⁻¹(x)`, `None` on `{h_j = 0}`.
    pub fn lift(&self, x: &[Rat]) -> Option<Vec<Rat>> {
        self.inverse.eval(x)
    }

    /// `h(x)`, the image of a point in the normal coordinates of this chart.
    pub fn normal_image(&self, x: &[Rat]) -> Vec<Rat> {
        linalg::mat_vec(&self.normal, &homogenize(x))
    }

    /// `π*f = t^m · f̃` with `t ∤ f̃`; returns `(f̃, m)`.
    pub fn strict_transform(&self, f: &MPoly) -> Result<(MPoly, u32)> {
        let f = f.embed(self.target()).ok_or_else(|| {
            Error::DimensionMismatch(format!("{f} is not a function of [{}]", self.target().join(", ")))
        })?;
        let (num, _) = self.map.substitute_poly(&f);
        if num.is_zero() {
            return Err(Error::ImageInPoleLocus);
        }
        let t = self.exceptional_poly();
        let m = num.multiplicity(&t);
        let g = num.div_exact(&t.pow(m)).expect("multiplicity divides");
        Ok((g, m))
    }
}

fn signum(x: &Rat) -> i32 {
    if x.is_positive() {
        1
    } else if x.is_negative() {
        -1
    } else {
        0
    }
}

/// The chart `X_k = 1` of ℙⁿ as a map into the chart `X_0 = 1`. Its coordinates are
/// `X_0/X_k` (named `name0`) followed by the `X_i/X_k`, `i ∉ {0, k}`.
pub fn switch_chart(chart: &Vars, k: usize, name0: &str) -> Result<PolyMap> {
    let n = chart.len();
    if k == 0 || k > n {
        return Err(Error::Precondition(format!("no chart X_{k} = 1 in P^{n}")));
    }
    let mut names = vec![name0.to_string()];
    names.extend(chart.iter().enumerate().filter(|&(i, _)| i + 1 != k).map(|(_, v)| v.clone()));
    let mut seen = HashSet::new();
    if let Some(d) = names.iter().find(|s| !seen.insert(s.as_str())) {
        return Err(Error::OverlappingCharts(d.clone()));
    }
    let source = vars(&names);
    let s0 = RatFunc::var(source.clone(), 0);
    let mut comps = Vec::with_capacity(n);
    let mut pos = 1;
    for i in 0..n {
        if i + 1 == k {
            comps.push(s0.inv()?);
        } else {
            comps.push(RatFunc::var(source.clone(), pos).div(&s0)?);
            pos += 1;
        }
    }
    PolyMap::new(source, chart.clone(), comps)
}

/// `w` in the homogeneous coordinates `(X_k, X_0, X_1, …, X̂_k, …, X_n)` of [`switch_chart`].
pub fn switch_subspace(w: &LinearSubspace, k: usize) -> LinearSubspace {
    let rows: Matrix = w
        .equations()
        .iter()
        .map(|r| {
            let mut out = vec![r[k].clone(), r[0].clone()];
            out.extend(r.iter().enumerate().skip(1).filter(|&(i, _)| i != k).map(|(_, c)| c.clone()));
            out
        })
        .collect();
    LinearSubspace::new(w.ambient_dim(), &rows)
}

fn fresh_name(chart: &Vars, base: &str) -> String {
    let mut name = base.to_string();
    while chart.contains(&name) {
        name.push('_');
    }
    name
}

/// Pole order of `omega` along a hyperplane of ℙⁿ, including the hyperplane at infinity.
pub fn hyperplane_pole_order(omega: &TopForm, h: &LinearSubspace) -> Result<i64> {
    if !h.is_hyperplane() {
        return Err(Error::Precondition(format!("{h} is not a hyperplane")));
    }
    if h.meets_chart() {
        return omega.pole_order(&MPoly::affine(omega.chart().clone(), &h.equations()[0]));
    }
    let name = fresh_name(omega.chart(), "s0");
    let switch = switch_chart(omega.chart(), 1, &name)?;
    let pulled = switch.pullback(omega)?;
    pulled.pole_order(&MPoly::var(switch.source().clone(), 0))
}

/// The blow-up of `Ω(P)` along one center: the chart used, the pulled-back form, and the
/// checks of the fundamental computation.
#[derive(Clone, Debug)]
pub struct Fundamental {
    pub chart: BlowupChart,
    /// Chart change applied first, for centers at infinity.
    pub switch: Option<PolyMap>,
    pub pullback: TopForm,
    pub pole_order: i64,
    pub residue: Option<TopForm>,
    pub expected: Option<TopForm>,
    pub report: VerificationReport,
}

/// Blows up `Ω(P)` along `w` and checks the Jacobian law, the pole order along `E`, the
/// residue factorization `Ω(P_W) ∧ Ω(P^W)` and positivity on `π⁻¹` of interior samples.
pub fn fundamental(p: &Polytope, w: &LinearSubspace, seed: u64) -> Result<Fundamental> {
    fundamental_with_form(p, &polytope_form(p)?, w, seed)
}

pub fn verify_fundamental(p: &Polytope, w: &LinearSubspace) -> Result<VerificationReport> {
    Ok(fundamental(p, w, 0)?.report)
}

fn fundamental_with_form(p: &Polytope, omega: &TopForm, w: &LinearSubspace, seed: u64) -> Result<Fundamental> {
    let n = p.ambient_dim();
    if w.ambient_dim() != n {
        return Err(Error::DimensionMismatch(format!("center in P^{} for a polytope in P^{n}", w.ambient_dim())));
    }
    if w.is_empty() {
        return Err(Error::Precondition("the center is empty".into()));
    }
    if w.codim() <= 1 {
        return Err(Error::BlowupIsIsomorphism);
    }
    let pw = p.face_relative(w)?;
    let full = pw.dim() == w.dim();
    let mut r = VerificationReport::new(format!("blow-up of {p} along {w}"));
    r.check("P ∩ W is a face", true, json!({"dim P∩W": pw.dim(), "dim W": w.dim()}));

    let (chart, switch, omega) = if w.meets_chart() {
        (BlowupChart::adapted(p, w, &ChartNames::default())?, None, omega.clone())
    } else {
        let k = (1..=n)
            .find(|&k| {
                let mut e = vec![Rat::zero(); n + 1];
                e[k] = Rat::one();
                !linalg::in_row_space(w.equations(), &e)
            })
            .expect("a nonempty subspace avoids some coordinate hyperplane");
        let switch = switch_chart(p.vars(), k, &fresh_name(p.vars(), "s0"))?;
        let w2 = switch_subspace(w, k);
        let pulled = switch.pullback(omega)?;
        let chart = BlowupChart::with_normal(&w2, switch.source(), w2.normal_forms(), w2.codim() - 1, &ChartNames::default())?;
        (chart, Some(switch), pulled)
    };

    let c = chart.codim();
    let s = chart.jacobian_constant()?;
    r.check(
        "jacobian is a positive constant times t^(c-1)",
        matches!(&s, Some(s) if s.is_positive()),
        json!({"jacobian": chart.map().jacobian_det()?.to_string(), "c": c}),
    );

    let pull = chart.pullback(&omega)?;
    let t = chart.exceptional_poly();
    let order = pull.coef().order_along(&t);
    r.check(
        "pole order along E",
        if full { order == 1 } else { order <= 0 },
        json!({"order": order, "expected": if full { "1" } else { "<= 0" }}),
    );

    let (residue, expected) = if full && order == 1 {
        let res = pull.residue_linear(&t, true)?;
        let omega_w = polytope_form(&pw)?;
        let gens: Matrix = p.vertices().iter().map(|v| chart.normal_image(v)).collect();
        let cone = PointedCone::new(c, &gens)?;
        let omega_n = cone_form(&cone, chart.chart_index(), &chart.ratio_chart())?;
        let expected = omega_w.wedge(&omega_n)?;
        r.check(
            "residue along E is Ω(P_W) ∧ Ω(P^W)",
            res.form == expected && res.induced_sign == 1,
            json!({"residue": res.form.to_string(), "expected": expected.to_string()}),
        );
        (Some(res.form), Some(expected))
    } else {
        r.skip("residue along E is Ω(P_W) ∧ Ω(P^W)", "E is not a boundary component");
        (None, None)
    };

    if chart.is_adapted() && switch.is_none() {
        let samples = p.interior_samples(10, seed);
        let mut failures = vec![];
        for x in &samples {
            let ok = chart.lift(x).is_some_and(|y| {
                y.last().is_some_and(|t| t.is_positive())
                    && chart.map().eval(&y).as_deref() == Some(&x[..])
                    && pull.eval(&y).is_some_and(|v| v.is_positive())
            });
            if !ok {
                failures.push(fmt_point(x));
            }
        }
        r.check(
            "positive on lifted interior samples",
            failures.is_empty(),
            json!({"samples": samples.len(), "seed": seed, "failures": failures}),
        );
    } else {
        r.skip("positive on lifted interior samples", "no chart with t ≥ 0 over the polytope");
    }

    Ok(Fundamental { chart, switch, pullback: pull, pole_order: order, residue, expected, report: r })
}

/// One blow-up of a sequence.
#[derive(Clone, Debug)]
pub struct SequenceStep {
    /// Index of the center in the building set.
    pub index: usize,
    pub label: String,
    /// Strict transform of the center in the chart being blown up.
    pub center: LinearSubspace,
    pub chart: BlowupChart,
}

/// Iterated blow-up of the affine chart along the elements of a building set.
#[derive(Clone, Debug)]
pub struct BlowupSequence {
    pub steps: Vec<SequenceStep>,
    /// Elements not blown up in this chart, with the reason.
    pub skipped: Vec<(String, String)>,
    /// From the final chart to the original one.
    pub composed: PolyMap,
}

enum Choice<'a> {
    Path(&'a [usize]),
    Adapted(&'a Polytope),
}

/// Blows up the elements of `b` in order, using chart `chart_path[k]` at step `k` (the
/// last chart when the path is exhausted). Empty elements, hyperplanes and centers whose
/// strict transform misses the current chart are skipped: the blow-up is an isomorphism
/// over the chart in each of those cases.
pub fn sequential_blowup(b: &GeomBuildingSet, chart: &Vars, chart_path: &[usize], seed: u64) -> Result<BlowupSequence> {
    run_sequence(b, chart, Choice::Path(chart_path), seed)
}

/// As [`sequential_blowup`], choosing at each step the chart that contains the strict
/// transform of the interior of `p`.
pub fn sequential_blowup_adapted(p: &Polytope, b: &GeomBuildingSet, seed: u64) -> Result<BlowupSequence> {
    run_sequence(b, p.vars(), Choice::Adapted(p), seed)
}

fn run_sequence(b: &GeomBuildingSet, chart: &Vars, choice: Choice<'_>, seed: u64) -> Result<BlowupSequence> {
    let n = chart.len();
    if b.ambient_dim() != n {
        return Err(Error::DimensionMismatch(format!("building set in P^{} for a chart of dimension {n}", b.ambient_dim())));
    }
    let mut composed = PolyMap::identity(chart.clone());
    let mut inverses: Vec<PolyMap> = vec![];
    let mut steps: Vec<SequenceStep> = vec![];
    let mut skipped = vec![];
    let mut interior: Vec<Point> = match choice {
        Choice::Adapted(p) => p.interior_samples(8, seed),
        Choice::Path(_) => vec![],
    };
    for (index, (label, f)) in b.iter().enumerate() {
        let reason = if f.is_empty() {
            Some("empty")
        } else if f.codim() < 2 {
            Some("a hyperplane")
        } else if !f.meets_chart() {
            Some("at infinity")
        } else {
            None
        };
        if let Some(reason) = reason {
            skipped.push((label.clone(), reason.to_string()));
            continue;
        }
        let Some(center) = strict_center(label, f, &inverses, composed.source(), seed)? else {
            skipped.push((label.clone(), "strict transform misses the chart".to_string()));
            continue;
        };
        let names = ChartNames::step(steps.len() + 1);
        let current = composed.source().clone();
        let step_chart = match choice {
            Choice::Path(path) => {
                let j = path.get(steps.len()).copied().unwrap_or(center.codim() - 1);
                BlowupChart::with_normal(&center, &current, center.normal_forms(), j, &names)?
            }
            Choice::Adapted(_) => adapted_on_samples(&center, &current, &interior, &names)?,
        };
        interior = interior.iter().filter_map(|x| step_chart.lift(x)).collect();
        inverses.push(step_chart.inverse().clone());
        composed = composed.compose(step_chart.map())?;
        steps.push(SequenceStep { index, label: label.clone(), center, chart: step_chart });
    }
    Ok(BlowupSequence { steps, skipped, composed })
}

/// Chart in which the lifted interior samples have `t > 0`.
fn adapted_on_samples(center: &LinearSubspace, chart: &Vars, samples: &[Point], names: &ChartNames) -> Result<BlowupChart> {
    let normal = center.normal_forms();
    let c = normal.len();
    let imgs: Matrix = samples.iter().map(|x| linalg::mat_vec(&normal, &homogenize(x))).collect();
    for j in (0..c).rev() {
        for s in [1, -1] {
            if !imgs.is_empty() && imgs.iter().all(|y| signum(&y[j]) == s) {
                let mut nm = normal.clone();
                if s < 0 {
                    nm[j] = nm[j].iter().map(|x| -x).collect();
                }
                let mut out = BlowupChart::with_normal(center, chart, nm, j, names)?;
                out.adapted = true;
                return Ok(out);
            }
        }
    }
    BlowupChart::with_normal(center, chart, normal, c - 1, names)
}

/// The strict transform of `f` in the current chart, `None` if it misses the chart.
///
/// Seeded points of `f` are lifted through the steps and spanned; the span is accepted
/// only if its dimension is `dim f` and its equations vanish on the symbolic lift of a
/// parametrization of `f`.
fn strict_center(label: &str, f: &LinearSubspace, inverses: &[PolyMap], current: &Vars, seed: u64) -> Result<Option<LinearSubspace>> {
    if inverses.is_empty() {
        return Ok(Some(f.clone()));
    }
    let param = f.parametrize().expect("center meets the chart");
    let d = param.dim();
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed ^ 0x5e_ed0f_f1a7);
    let mut pts = vec![];
    for _ in 0..d + 3 {
        let tv: Vec<Rat> = (0..d).map(|_| Rat::new(rng.gen_range(-40i64..=40).into(), rng.gen_range(1i64..=7).into())).collect();
        let lifted = inverses.iter().try_fold(param.point(&tv), |x, inv| inv.eval(&x));
        pts.extend(lifted);
    }
    if pts.is_empty() {
        return Ok(None);
    }
    let m = current.len();
    let span = LinearSubspace::span_of_points(m, &pts);
    let unsupported = || Error::ChartPathUnsupported(format!("the strict transform of {label} is not linear in this chart"));
    if span.dim() != d as i64 {
        return Err(unsupported());
    }
    let pnames: Vec<String> = (0..d).map(|i| format!("p{i}")).collect();
    let pv = vars(&pnames);
    let comps: Vec<MPoly> = (0..param.base.len())
        .map(|i| {
            let mut aff = vec![param.base[i].clone()];
            aff.extend(param.dirs.iter().map(|dir| dir[i].clone()));
            MPoly::affine(pv.clone(), &aff)
        })
        .collect();
    let mut lift = PolyMap::from_polys(pv, f_chart(inverses), comps)?;
    for inv in inverses {
        lift = inv.compose(&lift).map_err(|_| unsupported())?;
    }
    for row in span.equations() {
        let mut acc = RatFunc::constant(lift.source().clone(), row[0].clone());
        for (c, comp) in row[1..].iter().zip(lift.components()) {
            acc = acc.add(&comp.scale(c));
        }
        if !acc.is_zero() {
            return Err(unsupported());
        }
    }
    Ok(Some(span))
}

fn f_chart(inverses: &[PolyMap]) -> Vars {
    inverses[0].source().clone()
}

fn divisor_label(p: &Polytope, b: &GeomBuildingSet, d: &Divisor) -> String {
    match d {
        Divisor::Exceptional(i) => format!("E[{}]", b.labels()[*i]),
        Divisor::Facet(i) => format!("H{}: {} = 0", i + 1, p.facet_poly(*i)),
    }
}

impl BlowupSequence {
    /// Chart index used at each step.
    pub fn path(&self) -> Vec<usize> {
        self.steps.iter().map(|s| s.chart.chart_index()).collect()
    }

    /// Pole orders of the pulled-back `omega` along every tracked boundary divisor visible
    /// in the final chart, compared with `predicted`, and the absence of other poles.
    /// Also returns the divisors visible in the chart.
    pub fn census(
        &self,
        p: &Polytope,
        b: &GeomBuildingSet,
        omega: &TopForm,
        predicted: &[Divisor],
    ) -> Result<(VerificationReport, Vec<Divisor>)> {
        let mut r = VerificationReport::new("census in the final chart");
        let mut visible = vec![];
        let mut tracked: Vec<(Divisor, MPoly)> = Vec::new();
        for i in 0..p.inequalities().len() {
            let d = match b.position(&p.facet_hyperplane(i)) {
                Some(k) => Divisor::Exceptional(k),
                None => Divisor::Facet(i),
            };
            tracked.push((d, p.facet_poly(i)));
        }
        for (k, (_, f)) in b.iter().enumerate() {
            if f.is_hyperplane() && f.meets_chart() && !tracked.iter().any(|(d, _)| *d == Divisor::Exceptional(k)) {
                tracked.push((Divisor::Exceptional(k), MPoly::affine(p.vars().clone(), &f.equations()[0])));
            }
        }
        for step in &self.steps {
            for entry in tracked.iter_mut() {
                entry.1 = step.chart.strict_transform(&entry.1)?.0;
            }
            tracked.push((Divisor::Exceptional(step.index), step.chart.exceptional_poly()));
        }
        let pull = self.composed.pullback(omega)?;
        let mut poles = MPoly::one(pull.chart().clone());
        for (d, f) in &tracked {
            let name = divisor_label(p, b, d);
            if f.is_constant() {
                r.skip(format!("{name}: pole order"), "not visible in this chart");
                continue;
            }
            visible.push(d.clone());
            let order = pull.coef().order_along(f);
            let boundary = predicted.contains(d);
            r.check(
                format!("{name}: pole order"),
                if boundary { order == 1 } else { order <= 0 },
                json!({"order": order, "strict transform": f.to_string(), "boundary": boundary}),
            );
            if order > 0 {
                poles = poles.mul(&f.pow(order as u32));
            }
        }
        r.check(
            "no poles off the tracked divisors",
            pull.coef().den() == &poles.make_monic(),
            json!({"denominator": pull.coef().den().to_string(), "tracked": poles.to_string()}),
        );
        Ok((r, visible))
    }
}

/// Verifies the wondertope statements for `(P, B)`: the boundary divisors are exactly the
/// predicted ones, each with a simple pole and the expected residue, and the iterated
/// blow-up has no other poles in the chart containing the interior of `P`.
///
/// The face condition and the building-set property are preconditions; well-adaptedness
/// is reported as a check.
pub fn verify_wondertope(p: &Polytope, b: &GeomBuildingSet) -> Result<VerificationReport> {
    verify_wondertope_seeded(p, b, 0)
}

pub fn verify_wondertope_seeded(p: &Polytope, b: &GeomBuildingSet, seed: u64) -> Result<VerificationReport> {
    if p.ambient_dim() != b.ambient_dim() {
        return Err(Error::DimensionMismatch(format!(
            "building set in P^{} for a polytope in P^{}",
            b.ambient_dim(),
            p.ambient_dim()
        )));
    }
    let face = check_face_condition(p, b);
    if let Some(c) = face.failures().next() {
        return Err(Error::Precondition(format!("face condition fails: {} {}", c.name, c.witness)));
    }
    let bs = check_building_set(b);
    if let Some(c) = bs.failures().next() {
        return Err(Error::Precondition(format!("not a building set: {} {}", c.name, c.witness)));
    }
    let omega = polytope_form(p)?;
    let mut r = VerificationReport::new(format!("wondertope of {p} for {b}"));
    let wa = check_well_adapted(p, b);
    r.check(
        "B is well-adapted",
        wa.passed(),
        wa.failures().next().map_or(json!(null), |c| json!({"check": c.name, "witness": c.witness})),
    );
    let predicted = predicted_boundary(p, b);
    let mut found: Vec<Divisor> = vec![];

    for (i, (label, f)) in b.iter().enumerate() {
        let name = format!("E[{label}]");
        if f.is_empty() {
            r.skip(name, "blowing up the empty set changes nothing");
            continue;
        }
        let boundary = predicted.contains(&Divisor::Exceptional(i));
        if f.is_hyperplane() {
            let order = hyperplane_pole_order(&omega, f)?;
            r.check(
                format!("{name}: pole order"),
                if boundary { order == 1 } else { order <= 0 },
                json!({"order": order, "boundary": boundary}),
            );
            if order == 1 {
                found.push(Divisor::Exceptional(i));
            }
            if boundary && f.meets_chart() {
                let idx = (0..p.inequalities().len()).find(|&k| p.facet_hyperplane(k) == *f);
                match idx {
                    Some(k) => {
                        let fr = facet_residue_of(&omega, p, k)?;
                        r.check(
                            format!("{name}: residue is the facet form"),
                            fr.matches(),
                            json!({"residue": fr.residue.form.to_string(), "expected": fr.expected.to_string()}),
                        );
                    }
                    None => {
                        r.check(format!("{name}: residue is the facet form"), false, json!("not a facet hyperplane"));
                    }
                }
            }
            continue;
        }
        let fc = fundamental_with_form(p, &omega, f, seed)?;
        if fc.pole_order == 1 {
            found.push(Divisor::Exceptional(i));
        }
        r.merge(&name, fc.report);
    }

    for k in 0..p.inequalities().len() {
        if b.position(&p.facet_hyperplane(k)).is_some() {
            continue;
        }
        let fr = facet_residue_of(&omega, p, k)?;
        let name = divisor_label(p, b, &Divisor::Facet(k));
        let order = omega.pole_order(&p.facet_poly(k))?;
        r.check(
            format!("{name}: simple pole with the facet form as residue"),
            order == 1 && fr.matches(),
            json!({"order": order, "residue": fr.residue.form.to_string(), "expected": fr.expected.to_string()}),
        );
        if order == 1 {
            found.push(Divisor::Facet(k));
        }
    }

    let mut want = predicted.clone();
    want.sort();
    found.sort();
    let labels = |ds: &[Divisor]| ds.iter().map(|d| divisor_label(p, b, d)).collect::<Vec<_>>();
    r.check(
        "boundary census",
        found == want,
        json!({"count": found.len(), "predicted": labels(&want), "found": labels(&found)}),
    );

    let mut visible: BTreeSet<Divisor> = BTreeSet::new();
    for seq in all_chart_paths(b, p.vars(), seed, PATH_LIMIT)? {
        match seq {
            Ok(seq) => {
                let (rep, vis) = seq.census(p, b, &omega, &predicted)?;
                r.merge(&format!("chart path {:?}", seq.path()), rep);
                visible.extend(vis);
            }
            Err((path, msg)) => r.skip(format!("chart path {path:?}"), msg),
        }
    }
    let trackable: Vec<String> = predicted
        .iter()
        .filter(|d| match d {
            Divisor::Facet(_) => true,
            Divisor::Exceptional(k) => b.subspaces()[*k].meets_chart(),
        })
        .filter(|d| !visible.contains(d))
        .map(|d| divisor_label(p, b, d))
        .collect();
    r.check("every boundary divisor meeting the chart is seen by some chart path", trackable.is_empty(), json!({"missing": trackable}));
    Ok(r)
}

/// Chart paths enumerated by [`all_chart_paths`] before giving up.
pub const PATH_LIMIT: usize = 512;

/// The iterated blow-up along every chart path, deduplicated; paths whose strict
/// transforms are not linear come back as `Err((path, reason))`.
#[allow(clippy::type_complexity)]
pub fn all_chart_paths(
    b: &GeomBuildingSet,
    chart: &Vars,
    seed: u64,
    limit: usize,
) -> Result<Vec<std::result::Result<BlowupSequence, (Vec<usize>, String)>>> {
    let radices: Vec<usize> = b
        .subspaces()
        .iter()
        .filter(|f| !f.is_empty() && f.codim() >= 2 && f.meets_chart())
        .map(|f| f.codim())
        .collect();
    let mut out = vec![];
    let mut seen: HashSet<Vec<usize>> = HashSet::new();
    let mut path = vec![0; radices.len()];
    for _ in 0..limit {
        match sequential_blowup(b, chart, &path, seed) {
            Ok(seq) => {
                if seen.insert(seq.path()) {
                    out.push(Ok(seq));
                }
            }
            Err(Error::ChartPathUnsupported(msg)) => out.push(Err((path.clone(), msg))),
            Err(e) => return Err(e),
        }
        // mixed-radix increment
        let mut k = 0;
        while k < path.len() {
            path[k] += 1;
            if path[k] < radices[k] {
                break;
            }
            path[k] = 0;
            k += 1;
        }
        if k == path.len() {
            break;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::text::parse_topform;
    use crate::algebra::{rat, ratio};
    use crate::polytope::{ipoint, shapes};

    fn sub(n: usize, rows: &[&[i64]]) -> LinearSubspace {
        LinearSubspace::from_ints(n, rows)
    }

    fn point(n: usize, p: &[i64]) -> LinearSubspace {
        LinearSubspace::span_of_points(n, &[ipoint(p)])
    }

    #[test]
    fn origin_in_the_plane_chart_one() {
        let v = shapes::chart_vars(2);
        let ch = BlowupChart::new(&point(2, &[0, 0]), &v, 1).unwrap();
        assert_eq!(ch.source().to_vec(), vec!["u", "t"]);
        assert_eq!(ch.map().to_string(), "(u, t) -> {x = u*t, y = t}");
        assert_eq!(ch.jacobian_constant().unwrap(), Some(rat(1)));
    }

    #[test]
    fn x_axis_in_space_chart_one() {
        let v = shapes::chart_vars(3);
        let axis = sub(3, &[&[0, 0, 1, 0], &[0, 0, 0, 1]]);
        let ch = BlowupChart::new(&axis, &v, 1).unwrap();
        assert_eq!(ch.source().to_vec(), vec!["x", "u", "t"]);
        let y = vec![rat(2), rat(3), rat(5)];
        assert_eq!(ch.map().eval(&y).unwrap(), vec![rat(2), rat(15), rat(5)]);
        assert_eq!(ch.lift(&[rat(2), rat(15), rat(5)]).unwrap(), y);
    }

    #[test]
    fn jacobian_law_for_every_chart() {
        for n in 2..=4 {
            let v = shapes::chart_vars(n);
            for c in 2..=n {
                let rows: Vec<Vec<Rat>> = (0..c)
                    .map(|i| {
                        let mut r = vec![Rat::zero(); n + 1];
                        r[0] = rat(i as i64 + 1);
                        r[n - i] = rat(1);
                        r[1] += rat(i as i64);
                        r
                    })
                    .collect();
                let w = LinearSubspace::new(n, &rows);
                for j in 0..c {
                    let ch = BlowupChart::new(&w, &v, j).unwrap();
                    let s = ch.jacobian_constant().unwrap().expect("monomial jacobian");
                    assert!(s.is_positive(), "n={n} c={c} j={j}");
                    let x: Vec<Rat> = (0..n).map(|i| ratio(i as i64 * 3 + 1, 7)).collect();
                    let y = ch.lift(&x).unwrap();
                    assert_eq!(ch.map().eval(&y).unwrap(), x);
                }
            }
        }
    }

    #[test]
    fn trivial_centers_are_rejected() {
        let v = shapes::chart_vars(2);
        let line = sub(2, &[&[0, 1, 0]]);
        assert_eq!(BlowupChart::new(&line, &v, 0).unwrap_err(), Error::BlowupIsIsomorphism);
        let far = sub(2, &[&[1, 0, 0], &[0, 1, 0]]);
        assert!(matches!(BlowupChart::new(&far, &v, 0), Err(Error::Precondition(_))));
        assert!(matches!(BlowupChart::new(&LinearSubspace::empty(2), &v, 0), Err(Error::Precondition(_))));
    }

    #[test]
    fn cube_edge_residue() {
        let cube = shapes::unit_cube(3);
        let w = sub(3, &[&[0, 0, 1, 0], &[0, 0, 0, 1]]);
        let f = fundamental(&cube, &w, 0).unwrap();
        assert!(f.report.passed(), "{}", f.report);
        assert_eq!(f.chart.map().to_string(), "(x, u, t) -> {x = x, y = u*t, z = t}");
        assert_eq!(f.pole_order, 1);
        let want = parse_topform("[x, u] 1/(x*(1-x)*u)").unwrap();
        assert_eq!(f.residue.unwrap(), want);
    }

    #[test]
    fn line_through_a_vertex_has_no_pole() {
        let cube = shapes::unit_cube(3);
        let w = sub(3, &[&[0, 1, 1, 0], &[0, 0, 0, 1]]);
        let f = fundamental(&cube, &w, 0).unwrap();
        assert_eq!(f.pole_order, 0);
        assert!(f.report.passed(), "{}", f.report);
    }

    #[test]
    fn simplex_edge_line() {
        let s = shapes::standard_simplex(3);
        let w = sub(3, &[&[0, 0, 1, 0], &[0, 0, 0, 1]]);
        let r = verify_fundamental(&s, &w).unwrap();
        assert!(r.passed(), "{r}");
        assert_eq!(r.summary.skipped, 0);
    }

    #[test]
    fn non_face_center_is_rejected() {
        let t = shapes::triangle();
        let mid = LinearSubspace::span_of_points(2, &[vec![ratio(1, 3), ratio(1, 3)]]);
        assert!(matches!(fundamental(&t, &mid, 0), Err(Error::NotAFace(_))));
    }

    #[test]
    fn center_at_infinity_gives_no_pole() {
        let t = shapes::triangle();
        let far = sub(2, &[&[1, 0, 0], &[0, 1, 0]]);
        let f = fundamental(&t, &far, 0).unwrap();
        assert!(f.switch.is_some());
        assert_eq!(f.pole_order, 0);
        assert!(f.report.passed(), "{}", f.report);
    }

    #[test]
    fn hyperplane_at_infinity_pole_orders() {
        let t = shapes::triangle();
        let omega = polytope_form(&t).unwrap();
        assert_eq!(hyperplane_pole_order(&omega, &LinearSubspace::at_infinity(2)).unwrap(), 0);
        let std = crate::canonical_form::standard_simplex_form(&shapes::chart_vars(2));
        assert_eq!(hyperplane_pole_order(&std, &LinearSubspace::at_infinity(2)).unwrap(), 1);
    }

    fn two_points_and_empty() -> GeomBuildingSet {
        GeomBuildingSet::new(2, vec![point(2, &[0, 0]), point(2, &[1, 0]), LinearSubspace::empty(2)]).unwrap()
    }

    #[test]
    fn triangle_two_vertices() {
        let t = shapes::triangle();
        let r = verify_wondertope(&t, &two_points_and_empty()).unwrap();
        assert!(r.passed(), "{r}");
        assert_eq!(r.find("boundary census").unwrap().witness["count"], 5);
    }

    #[test]
    fn commuting_point_blowups() {
        let t = shapes::triangle();
        let omega = polytope_form(&t).unwrap();
        let b = two_points_and_empty();
        let swapped = GeomBuildingSet::with_labels(
            2,
            vec![point(2, &[1, 0]), point(2, &[0, 0]), LinearSubspace::empty(2)],
            vec!["F2".into(), "F1".into(), "F3".into()],
        )
        .unwrap();
        for bb in [&b, &swapped] {
            let mut seen = BTreeSet::new();
            for seq in all_chart_paths(bb, t.vars(), 0, PATH_LIMIT).unwrap() {
                let seq = seq.unwrap();
                let (rep, vis) = seq.census(&t, bb, &omega, &predicted_boundary(&t, bb)).unwrap();
                assert!(rep.passed(), "{rep}");
                seen.extend(vis.into_iter().map(|d| match d {
                    Divisor::Exceptional(k) => bb.labels()[k].clone(),
                    Divisor::Facet(k) => format!("H{k}"),
                }));
            }
            assert_eq!(seen.len(), 5, "{seen:?}");
        }
    }

    #[test]
    fn nested_line_and_point() {
        let s = shapes::standard_simplex(3);
        let b = GeomBuildingSet::new(3, vec![point(3, &[0, 0, 0]), sub(3, &[&[0, 0, 1, 0], &[0, 0, 0, 1]])]).unwrap();
        let r = verify_wondertope(&s, &b).unwrap();
        assert!(r.passed(), "{r}");
        // the line lies in {x3 = 0}, so it is only seen from the chart t = x1
        assert_eq!(sequential_blowup_adapted(&s, &b, 0).unwrap().steps.len(), 1);
        assert_eq!(sequential_blowup(&b, s.vars(), &[0, 0], 0).unwrap().steps.len(), 2);
    }

    #[test]
    fn pyramid_edge_line() {
        let pyr = shapes::square_pyramid();
        let y = sub(3, &[&[0, 1, 0, 0], &[-1, 0, 1, 1]]);
        let f = fundamental(&pyr, &y, 0).unwrap();
        assert!(f.report.passed(), "{}", f.report);
        let b = GeomBuildingSet::new(3, vec![y]).unwrap();
        let r = verify_wondertope(&pyr, &b).unwrap();
        assert!(r.passed(), "{r}");
    }

    #[test]
    fn cube_edge_wondertope() {
        let cube = shapes::unit_cube(3);
        let b = GeomBuildingSet::new(3, vec![sub(3, &[&[0, 0, 1, 0], &[0, 0, 0, 1]])]).unwrap();
        let r = verify_wondertope(&cube, &b).unwrap();
        assert!(r.passed(), "{r}");
        assert_eq!(r.find("boundary census").unwrap().witness["count"], 7);
    }

    #[test]
    fn residue_independent_of_chart_up_to_names() {
        let cube = shapes::unit_cube(3);
        let w = sub(3, &[&[0, 0, 1, 0], &[0, 0, 0, 1]]);
        let omega = polytope_form(&cube).unwrap();
        let orders: Vec<i64> = (0..2)
            .map(|j| {
                let ch = BlowupChart::new(&w, cube.vars(), j).unwrap();
                ch.pullback(&omega).unwrap().coef().order_along(&ch.exceptional_poly())
            })
            .collect();
        assert_eq!(orders, vec![1, 1]);
    }

    #[test]
    fn strict_transform_of_a_line_through_the_center() {
        let v = shapes::chart_vars(2);
        let ch = BlowupChart::new(&point(2, &[0, 0]), &v, 1).unwrap();
        let f = MPoly::var(v.clone(), 0).sub(&MPoly::var(v.clone(), 1));
        let (g, m) = ch.strict_transform(&f).unwrap();
        assert_eq!(m, 1);
        assert_eq!(g.to_string(), "u - 1");
    }

    #[test]
    fn non_building_set_is_a_precondition_error() {
        let t = shapes::triangle();
        let b = GeomBuildingSet::new(2, vec![point(2, &[0, 0]), point(2, &[1, 0])]).unwrap();
        assert!(matches!(verify_wondertope(&t, &b), Err(Error::Precondition(_))));
    }
}
