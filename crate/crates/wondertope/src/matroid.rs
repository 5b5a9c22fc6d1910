//! Geometric lattices of flats, lattice building sets, nested set complexes, and the
//! product decomposition of links.
//!
//! Flats are bitsets over a ground set of at most 64 elements, ordered by inclusion.
//! Building sets live in an interval `[bottom, top]` of a lattice so that restrictions
//! `[0̂, F]` and contractions `[F, 1̂]` need no separate lattice.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;

use serde_json::{json, Value};

use crate::algebra::Rat;
use crate::error::{Error, Result};
use crate::linalg;
use crate::report::VerificationReport;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LatticeKind {
    /// Set partitions of `[n]`, realized by the braid arrangement.
    Partition(usize),
    Boolean(usize),
    /// `U_{r,n}`.
    Uniform(usize, usize),
    General,
}

/// A geometric lattice given by its flats. Index 0 is `0̂`, the last index is `1̂`; indices
/// are sorted by rank, then by bitset.
#[derive(Clone, Debug)]
pub struct FlatLattice {
    ground: usize,
    flats: Vec<u64>,
    rank: Vec<usize>,
    index: HashMap<u64, usize>,
    join: Vec<Vec<u16>>,
    meet: Vec<Vec<u16>>,
    kind: LatticeKind,
    /// Ground element `e` is the pair of points `edges[e]` for braid-type lattices.
    edges: Option<(usize, Vec<(usize, usize)>)>,
}

impl FlatLattice {
    /// The lattice with the given flats; checks the lattice axioms, semimodularity and
    /// atomicity.
    pub fn from_flats(ground: usize, flats: &[u64]) -> Result<Self> {
        if ground > 64 {
            return Err(Error::Precondition("ground sets are limited to 64 elements".into()));
        }
        let full = if ground == 64 { u64::MAX } else { (1u64 << ground) - 1 };
        let mut set: Vec<u64> = flats.iter().copied().collect::<BTreeSet<_>>().into_iter().collect();
        if set.iter().any(|&f| f & !full != 0) {
            return Err(Error::Precondition("a flat uses elements outside the ground set".into()));
        }
        if !set.contains(&full) {
            return Err(Error::Precondition("the ground set must be a flat".into()));
        }
        let bottom = set.iter().fold(full, |acc, &f| acc & f);
        if !set.contains(&bottom) {
            return Err(Error::Precondition("flats are not closed under intersection".into()));
        }
        if set.len() > u16::MAX as usize {
            return Err(Error::Precondition("too many flats".into()));
        }
        // rank = length of the longest chain from the bottom
        set.sort_by_key(|f| (f.count_ones(), *f));
        let mut rank = vec![0usize; set.len()];
        for i in 0..set.len() {
            for j in 0..i {
                if set[j] & !set[i] == 0 && set[j] != set[i] {
                    rank[i] = rank[i].max(rank[j] + 1);
                }
            }
        }
        let mut order: Vec<usize> = (0..set.len()).collect();
        order.sort_by_key(|&i| (rank[i], set[i]));
        let flats: Vec<u64> = order.iter().map(|&i| set[i]).collect();
        let rank: Vec<usize> = order.iter().map(|&i| rank[i]).collect();
        let index: HashMap<u64, usize> = flats.iter().enumerate().map(|(i, &f)| (f, i)).collect();
        let n = flats.len();
        let mut meet = vec![vec![0u16; n]; n];
        let mut join = vec![vec![0u16; n]; n];
        for a in 0..n {
            for b in a..n {
                let m = *index
                    .get(&(flats[a] & flats[b]))
                    .ok_or_else(|| Error::Precondition("flats are not closed under intersection".into()))?;
                let u = flats[a] | flats[b];
                let closure = flats.iter().filter(|&&f| f & u == u).fold(full, |acc, &f| acc & f);
                let j = index[&closure];
                meet[a][b] = m as u16;
                meet[b][a] = m as u16;
                join[a][b] = j as u16;
                join[b][a] = j as u16;
            }
        }
        let l = FlatLattice { ground, flats, rank, index, join, meet, kind: LatticeKind::General, edges: None };
        l.validate()?;
        Ok(l)
    }

    fn validate(&self) -> Result<()> {
        let n = self.len();
        for a in 0..n {
            for b in 0..n {
                let (j, m) = (self.join(a, b), self.meet(a, b));
                if self.rank[j] + self.rank[m] > self.rank[a] + self.rank[b] {
                    return Err(Error::Precondition(format!(
                        "rank is not semimodular at {} and {}",
                        self.label(a),
                        self.label(b)
                    )));
                }
            }
        }
        let atoms = self.atoms();
        for x in 0..n {
            let j = atoms.iter().filter(|&&a| self.leq(a, x)).fold(0, |acc, &a| self.join(acc, a));
            if j != x {
                return Err(Error::Precondition(format!("{} is not a join of atoms", self.label(x))));
            }
        }
        Ok(())
    }

    /// Intersection lattice of a central arrangement with the given nonzero normals.
    pub fn from_arrangement(normals: &[Vec<Rat>]) -> Result<Self> {
        let m = normals.len();
        if m == 0 || m > 64 {
            return Err(Error::Precondition("an arrangement needs between 1 and 64 hyperplanes".into()));
        }
        let d = normals[0].len();
        if normals.iter().any(|v| v.len() != d) {
            return Err(Error::DimensionMismatch("normals of different lengths".into()));
        }
        if normals.iter().any(|v| linalg::is_zero_vec(v)) {
            return Err(Error::Precondition("zero normal".into()));
        }
        let closure = |s: u64| -> u64 {
            let rows: Vec<Vec<Rat>> = (0..m).filter(|&i| s >> i & 1 == 1).map(|i| normals[i].clone()).collect();
            let (basis, pivots) = linalg::rref(&rows);
            let in_span = |v: &[Rat]| {
                let mut v = v.to_vec();
                for (row, &p) in basis.iter().zip(&pivots) {
                    let f = v[p].clone();
                    for (x, b) in v.iter_mut().zip(row) {
                        *x -= &f * b;
                    }
                }
                linalg::is_zero_vec(&v)
            };
            (0..m).filter(|&i| s >> i & 1 == 1 || in_span(&normals[i])).fold(0u64, |acc, i| acc | 1 << i)
        };
        let mut seen: HashSet<u64> = HashSet::new();
        let mut queue = vec![0u64];
        seen.insert(0);
        while let Some(f) = queue.pop() {
            for i in 0..m {
                if f >> i & 1 == 0 {
                    let g = closure(f | 1 << i);
                    if seen.insert(g) {
                        queue.push(g);
                    }
                }
            }
        }
        let flats: Vec<u64> = seen.into_iter().collect();
        let mut l = FlatLattice::from_flats(m, &flats)?;
        l.edges = braid_edges(normals).map(|e| (d, e));
        Ok(l)
    }

    /// `Π_n`, realized by the normals `e_i − e_j`.
    pub fn partition(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::Precondition("partition lattices need n ≥ 2".into()));
        }
        if n > 7 {
            return Err(Error::Precondition("partition lattices need n ≤ 7".into()));
        }
        // ground element k is the k-th pair i < j in lexicographic order, as in braid_normals
        let edges: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
        let mut flats = vec![];
        // restricted growth strings enumerate set partitions
        let mut block = vec![0usize; n];
        loop {
            let bits = edges.iter().enumerate().filter(|(_, &(i, j))| block[i] == block[j]).fold(0u64, |acc, (e, _)| acc | 1 << e);
            flats.push(bits);
            let mut k = n - 1;
            loop {
                let max_prefix = block[..k].iter().copied().max().unwrap_or(0);
                if k > 0 && block[k] <= max_prefix {
                    block[k] += 1;
                    block[k + 1..].iter_mut().for_each(|b| *b = 0);
                    break;
                }
                if k == 0 {
                    break;
                }
                k -= 1;
            }
            if k == 0 {
                break;
            }
        }
        let mut l = FlatLattice::from_flats(edges.len(), &flats)?;
        l.edges = Some((n, edges));
        l.kind = LatticeKind::Partition(n);
        Ok(l)
    }

    pub fn boolean(n: usize) -> Result<Self> {
        if n == 0 || n > 16 {
            return Err(Error::Precondition("boolean lattices need 1 ≤ n ≤ 16".into()));
        }
        let flats: Vec<u64> = (0..1u64 << n).collect();
        let mut l = FlatLattice::from_flats(n, &flats)?;
        l.kind = LatticeKind::Boolean(n);
        Ok(l)
    }

    /// `U_{r,n}`: subsets of size below `r`, and the ground set.
    pub fn uniform(r: usize, n: usize) -> Result<Self> {
        if r == 0 || r > n || n > 16 {
            return Err(Error::Precondition("uniform matroids need 1 ≤ r ≤ n ≤ 16".into()));
        }
        let full = (1u64 << n) - 1;
        let mut flats: Vec<u64> = (0..1u64 << n).filter(|s| (s.count_ones() as usize) < r).collect();
        flats.push(full);
        let mut l = FlatLattice::from_flats(n, &flats)?;
        l.kind = LatticeKind::Uniform(r, n);
        Ok(l)
    }

    /// `partition`, `boolean` or `uniform` (with `n = (r, n)`).
    pub fn standard(kind: &str, n: usize, r: Option<usize>) -> Result<Self> {
        match kind {
            "partition" => FlatLattice::partition(n),
            "boolean" => FlatLattice::boolean(n),
            "uniform" => FlatLattice::uniform(r.unwrap_or(n), n),
            other => Err(Error::Precondition(format!("unknown lattice kind {other:?}"))),
        }
    }

    pub fn kind(&self) -> LatticeKind {
        self.kind
    }

    pub fn ground(&self) -> usize {
        self.ground
    }

    pub fn len(&self) -> usize {
        self.flats.len()
    }

    pub fn is_empty(&self) -> bool {
        self.flats.is_empty()
    }

    pub fn bottom(&self) -> usize {
        0
    }

    pub fn top(&self) -> usize {
        self.flats.len() - 1
    }

    pub fn flat(&self, x: usize) -> u64 {
        self.flats[x]
    }

    pub fn rank(&self, x: usize) -> usize {
        self.rank[x]
    }

    pub fn index_of(&self, bits: u64) -> Option<usize> {
        self.index.get(&bits).copied()
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.flats[a] & !self.flats[b] == 0
    }

    pub fn lt(&self, a: usize, b: usize) -> bool {
        a != b && self.leq(a, b)
    }

    pub fn comparable(&self, a: usize, b: usize) -> bool {
        self.leq(a, b) || self.leq(b, a)
    }

    pub fn join(&self, a: usize, b: usize) -> usize {
        self.join[a][b] as usize
    }

    pub fn meet(&self, a: usize, b: usize) -> usize {
        self.meet[a][b] as usize
    }

    pub fn join_all(&self, xs: impl IntoIterator<Item = usize>) -> usize {
        xs.into_iter().fold(self.bottom(), |acc, x| self.join(acc, x))
    }

    pub fn atoms(&self) -> Vec<usize> {
        (0..self.len()).filter(|&x| self.rank[x] == 1).collect()
    }

    /// `[a, b]`, in index order.
    pub fn interval(&self, a: usize, b: usize) -> Vec<usize> {
        (0..self.len()).filter(|&x| self.leq(a, x) && self.leq(x, b)).collect()
    }

    /// Blocks of the set partition of a braid-type flat, points numbered from 1.
    pub fn partition_blocks(&self, x: usize) -> Option<Vec<Vec<usize>>> {
        let (points, edges) = self.edges.as_ref()?;
        let mut parent: Vec<usize> = (0..*points).collect();
        fn find(p: &mut Vec<usize>, i: usize) -> usize {
            if p[i] != i {
                let r = find(p, p[i]);
                p[i] = r;
            }
            p[i]
        }
        for (e, &(i, j)) in edges.iter().enumerate() {
            if self.flats[x] >> e & 1 == 1 {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                parent[a] = b;
            }
        }
        let mut blocks: Vec<Vec<usize>> = vec![];
        let mut root_of: HashMap<usize, usize> = HashMap::new();
        for i in 0..*points {
            let r = find(&mut parent, i);
            let k = *root_of.entry(r).or_insert_with(|| {
                blocks.push(vec![]);
                blocks.len() - 1
            });
            blocks[k].push(i + 1);
        }
        Some(blocks)
    }

    /// `123|4|5|6` for braid-type lattices, `{1,3}` (ground elements from 1) otherwise.
    pub fn label(&self, x: usize) -> String {
        if let Some(blocks) = self.partition_blocks(x) {
            let wide = self.edges.as_ref().is_some_and(|(p, _)| *p > 9);
            return blocks
                .iter()
                .map(|b| b.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(if wide { "," } else { "" }))
                .collect::<Vec<_>>()
                .join("|");
        }
        let elems: Vec<String> =
            (0..self.ground).filter(|&e| self.flats[x] >> e & 1 == 1).map(|e| (e + 1).to_string()).collect();
        format!("{{{}}}", elems.join(","))
    }

    /// Inverse of [`FlatLattice::label`].
    pub fn parse_flat(&self, s: &str) -> Result<usize> {
        let s = s.trim();
        let bits = if let Some((points, edges)) = &self.edges {
            let mut bits = 0u64;
            for block in s.split('|') {
                let pts: Option<Vec<usize>> = if block.contains(',') || *points > 9 {
                    block.split(',').map(|t| t.trim().parse::<usize>().ok()).collect()
                } else {
                    block.trim().chars().map(|c| c.to_digit(10).map(|d| d as usize)).collect()
                };
                let pts = pts.ok_or_else(|| Error::Parse(format!("bad block {block:?} in {s:?}")))?;
                if pts.iter().any(|&p| p == 0 || p > *points) {
                    return Err(Error::Parse(format!("point out of range in {s:?}")));
                }
                for (e, &(i, j)) in edges.iter().enumerate() {
                    if pts.contains(&(i + 1)) && pts.contains(&(j + 1)) {
                        bits |= 1 << e;
                    }
                }
            }
            bits
        } else {
            let inner = s.trim_start_matches('{').trim_end_matches('}');
            let mut bits = 0u64;
            for t in inner.split(',').map(str::trim).filter(|t| !t.is_empty()) {
                let e: usize = t.parse().map_err(|_| Error::Parse(format!("bad element {t:?} in {s:?}")))?;
                if e == 0 || e > self.ground {
                    return Err(Error::Parse(format!("element {e} out of range in {s:?}")));
                }
                bits |= 1 << (e - 1);
            }
            bits
        };
        self.index_of(bits).ok_or_else(|| Error::Parse(format!("{s:?} is not a flat")))
    }
}

impl fmt::Display for FlatLattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            LatticeKind::Partition(n) => write!(f, "Π{n}"),
            LatticeKind::Boolean(n) => write!(f, "Boolean({n})"),
            LatticeKind::Uniform(r, n) => write!(f, "U({r},{n})"),
            LatticeKind::General => write!(f, "lattice with {} flats of rank {}", self.len(), self.rank[self.top()]),
        }
    }
}

/// `e_i − e_j` in `ℝⁿ` for `i < j`, in lexicographic order.
pub fn braid_normals(n: usize) -> Vec<Vec<Rat>> {
    let mut out = vec![];
    for i in 0..n {
        for j in i + 1..n {
            let mut v = vec![Rat::from_integer(0.into()); n];
            v[i] = Rat::from_integer(1.into());
            v[j] = Rat::from_integer((-1).into());
            out.push(v);
        }
    }
    out
}

fn braid_edges(normals: &[Vec<Rat>]) -> Option<Vec<(usize, usize)>> {
    normals
        .iter()
        .map(|v| {
            let nz: Vec<usize> = (0..v.len()).filter(|&i| v[i] != Rat::from_integer(0.into())).collect();
            (nz.len() == 2 && v[nz[0]] == -v[nz[1]].clone()).then(|| (nz[0], nz[1]))
        })
        .collect()
}

/// A building set of the interval `[bottom, top]`: members are flats in `(bottom, top]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatroidBuildingSet {
    pub bottom: usize,
    pub top: usize,
    /// Sorted flat indices.
    pub members: Vec<usize>,
}

impl MatroidBuildingSet {
    /// Members of the whole lattice `[0̂, 1̂]`.
    pub fn new(l: &FlatLattice, members: impl IntoIterator<Item = usize>) -> Result<Self> {
        MatroidBuildingSet::in_interval(l, l.bottom(), l.top(), members)
    }

    pub fn in_interval(l: &FlatLattice, bottom: usize, top: usize, members: impl IntoIterator<Item = usize>) -> Result<Self> {
        let members: Vec<usize> = members.into_iter().collect::<BTreeSet<_>>().into_iter().collect();
        if let Some(&x) = members.iter().find(|&&x| x >= l.len() || x == bottom || !l.leq(bottom, x) || !l.leq(x, top)) {
            return Err(Error::Precondition(format!(
                "member {} is not in the open-below interval ({}, {}]",
                if x < l.len() { l.label(x) } else { x.to_string() },
                l.label(bottom),
                l.label(top)
            )));
        }
        Ok(MatroidBuildingSet { bottom, top, members })
    }

    pub fn contains(&self, x: usize) -> bool {
        self.members.binary_search(&x).is_ok()
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// `B^top`, the maximal members.
    pub fn tops(&self, l: &FlatLattice) -> Vec<usize> {
        self.members.iter().copied().filter(|&x| !self.members.iter().any(|&y| l.lt(x, y))).collect()
    }

    /// `max(B_{≤x})`.
    pub fn factors(&self, l: &FlatLattice, x: usize) -> Vec<usize> {
        let below: Vec<usize> = self.members.iter().copied().filter(|&m| l.leq(m, x)).collect();
        below.iter().copied().filter(|&m| !below.iter().any(|&y| l.lt(m, y))).collect()
    }

    pub fn labels(&self, l: &FlatLattice) -> Vec<String> {
        self.members.iter().map(|&x| l.label(x)).collect()
    }
}

/// `B^max = L \ {0̂}`.
pub fn maximal_building_set(l: &FlatLattice) -> MatroidBuildingSet {
    MatroidBuildingSet { bottom: l.bottom(), top: l.top(), members: (1..l.len()).collect() }
}

/// `B^min`: flats `F` whose interval `[0̂, F]` is not a product of two lower intervals.
pub fn minimal_building_set(l: &FlatLattice) -> MatroidBuildingSet {
    let members = (1..l.len()).filter(|&f| !decomposes(l, f)).collect();
    MatroidBuildingSet { bottom: l.bottom(), top: l.top(), members }
}

/// Whether `[0̂, f] ≅ [0̂, a] × [0̂, b]` through the join map for some `a, b ∉ {0̂, f}`.
fn decomposes(l: &FlatLattice, f: usize) -> bool {
    let below = l.interval(l.bottom(), f);
    let size = below.len();
    let sizes: HashMap<usize, usize> = below.iter().map(|&x| (x, l.interval(l.bottom(), x).len())).collect();
    for &a in &below {
        if a == l.bottom() || a == f {
            continue;
        }
        for &b in &below {
            if b <= a || b == f || l.meet(a, b) != l.bottom() || l.join(a, b) != f {
                continue;
            }
            if sizes[&a] * sizes[&b] != size {
                continue;
            }
            if join_map_iso(l, l.bottom(), &[a, b], f).is_ok() {
                return true;
            }
        }
    }
    false
}

/// Checks that `Π [bottom, x_j] → [bottom, x]`, `(f_j) ↦ ∨ f_j` is an order isomorphism.
fn join_map_iso(l: &FlatLattice, bottom: usize, factors: &[usize], x: usize) -> std::result::Result<(), String> {
    let target = l.interval(bottom, x);
    let pieces: Vec<Vec<usize>> = factors.iter().map(|&f| l.interval(bottom, f)).collect();
    let total: usize = pieces.iter().map(|p| p.len()).product();
    if total != target.len() {
        return Err(format!("product of factor intervals has {total} elements, [{}, {}] has {}", l.label(bottom), l.label(x), target.len()));
    }
    let mut tuples: Vec<Vec<usize>> = vec![vec![]];
    for p in &pieces {
        tuples = tuples.iter().flat_map(|t| p.iter().map(move |&e| [t.clone(), vec![e]].concat())).collect();
    }
    let images: Vec<usize> = tuples.iter().map(|t| l.join_all(t.iter().copied())).collect();
    let mut seen = HashMap::new();
    for (k, &y) in images.iter().enumerate() {
        if let Some(&k0) = seen.get(&y) {
            let show = |t: &Vec<usize>| t.iter().map(|&e| l.label(e)).collect::<Vec<_>>().join(", ");
            return Err(format!("join map not injective: ({}) and ({}) both give {}", show(&tuples[k0]), show(&tuples[k]), l.label(y)));
        }
        seen.insert(y, k);
    }
    for a in 0..tuples.len() {
        for b in 0..tuples.len() {
            if l.leq(images[a], images[b]) && !tuples[a].iter().zip(&tuples[b]).all(|(&p, &q)| l.leq(p, q)) {
                return Err(format!("inverse of the join map is not monotone at {} ≤ {}", l.label(images[a]), l.label(images[b])));
            }
        }
    }
    Ok(())
}

/// The lattice building-set test at every `x ∈ (bottom, top]`; the witness describes the
/// first failing flat.
pub fn is_building_set(l: &FlatLattice, b: &MatroidBuildingSet) -> (bool, Option<Value>) {
    for x in l.interval(b.bottom, b.top) {
        if x == b.bottom {
            continue;
        }
        let fs = b.factors(l, x);
        let reason = if fs.is_empty() {
            Some("no member of B lies below it".to_string())
        } else if fs.len() == 1 && fs[0] == x {
            None
        } else {
            let ranks: Vec<usize> = fs.iter().map(|&f| l.rank(f) - l.rank(b.bottom)).collect();
            let sum: usize = ranks.iter().sum();
            let r = l.rank(x) - l.rank(b.bottom);
            if sum != r {
                let terms = ranks.iter().map(|r| r.to_string()).collect::<Vec<_>>().join("+");
                Some(format!("factor ranks {terms} ≠ {r}"))
            } else {
                join_map_iso(l, b.bottom, &fs, x).err()
            }
        };
        if let Some(reason) = reason {
            return (
                false,
                Some(json!({
                    "flat": l.label(x),
                    "rank": l.rank(x) - l.rank(b.bottom),
                    "factors": fs.iter().map(|&f| l.label(f)).collect::<Vec<_>>(),
                    "reason": reason,
                })),
            );
        }
    }
    (true, None)
}

/// Whether every antichain of `s` with at least two elements has its join outside `B`.
pub fn is_nested(l: &FlatLattice, b: &MatroidBuildingSet, s: &[usize]) -> bool {
    let k = s.len();
    if k > 20 {
        return false;
    }
    (1u32..1 << k).filter(|m| m.count_ones() >= 2).all(|m| {
        let a: Vec<usize> = (0..k).filter(|&i| m >> i & 1 == 1).map(|i| s[i]).collect();
        let antichain = a.iter().enumerate().all(|(i, &x)| a[i + 1..].iter().all(|&y| !l.comparable(x, y)));
        !antichain || !b.contains(l.join_all(a.iter().copied()))
    })
}

/// A simplicial complex on flats: the empty face first, faces sorted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NestedComplex {
    pub vertices: Vec<usize>,
    pub faces: Vec<Vec<usize>>,
}

impl NestedComplex {
    pub fn contains(&self, face: &[usize]) -> bool {
        let mut f = face.to_vec();
        f.sort();
        self.faces.binary_search_by(|g| cmp_faces(g, &f)).is_ok()
    }

    /// Number of faces of each size, starting with the empty face.
    pub fn f_vector(&self) -> Vec<usize> {
        let top = self.faces.iter().map(|f| f.len()).max().unwrap_or(0);
        (0..=top).map(|k| self.faces.iter().filter(|f| f.len() == k).count()).collect()
    }

    /// Dimension of the complex; `-1` for `{∅}`.
    pub fn dim(&self) -> i64 {
        self.faces.iter().map(|f| f.len() as i64).max().unwrap_or(0) - 1
    }
}

fn cmp_faces(a: &[usize], b: &[usize]) -> std::cmp::Ordering {
    a.len().cmp(&b.len()).then_with(|| a.cmp(b))
}

/// Subsets `S` of `candidates` with `S ∪ extra` nested, by depth-first extension.
fn nested_faces(l: &FlatLattice, b: &MatroidBuildingSet, candidates: &[usize], extra: Option<usize>) -> Vec<Vec<usize>> {
    let mut out = vec![];
    let mut cur: Vec<usize> = extra.into_iter().collect();
    let offset = cur.len();
    fn rec(
        l: &FlatLattice,
        b: &MatroidBuildingSet,
        cands: &[usize],
        start: usize,
        cur: &mut Vec<usize>,
        offset: usize,
        out: &mut Vec<Vec<usize>>,
    ) {
        out.push(cur[offset..].to_vec());
        for i in start..cands.len() {
            let v = cands[i];
            if extends_nested(l, b, cur, v) {
                cur.push(v);
                rec(l, b, cands, i + 1, cur, offset, out);
                cur.pop();
            }
        }
    }
    let mut cands = candidates.to_vec();
    cands.sort();
    rec(l, b, &cands, 0, &mut cur, offset, &mut out);
    for f in out.iter_mut() {
        f.sort();
    }
    out.sort_by(|a, b| cmp_faces(a, b));
    out
}

/// Whether `cur ∪ {v}` is nested, given that `cur` is.
fn extends_nested(l: &FlatLattice, b: &MatroidBuildingSet, cur: &[usize], v: usize) -> bool {
    let k = cur.len();
    (1u32..1 << k).all(|m| {
        let a: Vec<usize> = (0..k).filter(|&i| m >> i & 1 == 1).map(|i| cur[i]).collect();
        let antichain = a.iter().all(|&x| !l.comparable(x, v))
            && a.iter().enumerate().all(|(i, &x)| a[i + 1..].iter().all(|&y| !l.comparable(x, y)));
        !antichain || !b.contains(l.join(l.join_all(a.iter().copied()), v))
    })
}

/// `𝓝(B)` on the vertex set `B \ B^top`.
pub fn nested_set_complex(l: &FlatLattice, b: &MatroidBuildingSet) -> Result<NestedComplex> {
    if let (false, w) = is_building_set(l, b) {
        return Err(Error::Precondition(format!("not a building set: {}", w.unwrap_or(Value::Null))));
    }
    let tops = b.tops(l);
    let vertices: Vec<usize> = b.members.iter().copied().filter(|x| !tops.contains(x)).collect();
    let faces = nested_faces(l, b, &vertices, None);
    Ok(NestedComplex { vertices, faces })
}

/// `{I ∈ 𝓝(B) : F ∉ I, I ∪ {F} nested}`. For `F ∈ B^top` the nestedness of `I ∪ {F}` is
/// the antichain-join condition, with `F` allowed although it is not a vertex.
pub fn link(l: &FlatLattice, b: &MatroidBuildingSet, n: &NestedComplex, f: usize) -> Result<NestedComplex> {
    if !b.contains(f) {
        return Err(Error::Precondition(format!("{} is not in the building set", l.label(f))));
    }
    let cands: Vec<usize> = n.vertices.iter().copied().filter(|&x| x != f).collect();
    let faces = nested_faces(l, b, &cands, Some(f));
    let vertices: Vec<usize> = faces.iter().filter(|g| g.len() == 1).map(|g| g[0]).collect();
    Ok(NestedComplex { vertices, faces })
}

/// `B^F`, `B_F` and the partition of `B_F` into `(B_F)_1` and `(B_F)_2`.
#[derive(Clone, Debug)]
pub struct RestrictContract {
    /// `B^F` in `[0̂, F]`.
    pub restriction: MatroidBuildingSet,
    /// `B_F` in `[F, 1̂]`.
    pub contraction: MatroidBuildingSet,
    /// `{X ∈ B : F < X}`.
    pub first: Vec<usize>,
    /// `{X ∨ F : X ∈ B, X ∥ F, X ∨ F ∉ B}`.
    pub second: Vec<usize>,
}

impl RestrictContract {
    pub fn is_partition(&self) -> bool {
        let a: BTreeSet<usize> = self.first.iter().copied().collect();
        let b: BTreeSet<usize> = self.second.iter().copied().collect();
        let all: BTreeSet<usize> = self.contraction.members.iter().copied().collect();
        a.is_disjoint(&b) && a.union(&b).copied().collect::<BTreeSet<_>>() == all
    }
}

pub fn restrict_contract(l: &FlatLattice, b: &MatroidBuildingSet, f: usize) -> Result<RestrictContract> {
    if !b.contains(f) {
        return Err(Error::Precondition(format!("{} is not in the building set", l.label(f))));
    }
    let restriction = MatroidBuildingSet::in_interval(l, b.bottom, f, b.members.iter().copied().filter(|&x| l.leq(x, f)))?;
    let contraction = MatroidBuildingSet::in_interval(
        l,
        f,
        b.top,
        b.members.iter().copied().filter(|&x| !l.leq(x, f)).map(|x| l.join(x, f)),
    )?;
    let first: Vec<usize> = b.members.iter().copied().filter(|&x| l.lt(f, x)).collect();
    let second: Vec<usize> = b
        .members
        .iter()
        .copied()
        .filter(|&x| !l.comparable(x, f) && !b.contains(l.join(x, f)))
        .map(|x| l.join(x, f))
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    Ok(RestrictContract { restriction, contraction, first, second })
}

/// Which factor of the product complex a vertex belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Side {
    Restriction,
    Contraction,
}

/// `τ(X)`: `X` when comparable with `F`, `X ∨ F` otherwise; `X` must be a vertex of the link.
pub fn tau(l: &FlatLattice, b: &MatroidBuildingSet, f: usize, x: usize) -> Result<(Side, usize)> {
    let tops = b.tops(l);
    let vertex = b.contains(x) && x != f && !tops.contains(&x) && is_nested(l, b, &[x, f]);
    if !vertex {
        return Err(Error::Precondition(format!("{} is not a vertex of the link of {}", l.label(x), l.label(f))));
    }
    Ok(if l.lt(x, f) {
        (Side::Restriction, x)
    } else if l.lt(f, x) {
        (Side::Contraction, x)
    } else {
        (Side::Contraction, l.join(x, f))
    })
}

/// Checks `𝓝(B)_F ≅ 𝓝(B^F) × 𝓝(B_F)` through `τ`, exhaustively over the faces of both
/// complexes.
pub fn verify_product_theorem(l: &FlatLattice, b: &MatroidBuildingSet, f: usize) -> Result<VerificationReport> {
    let mut r = VerificationReport::new(format!("link of {} in the nested set complex of {l}", l.label(f)));
    let (ok, w) = is_building_set(l, b);
    if !r.check("B is a building set", ok, w.unwrap_or(Value::Null)) {
        return Ok(r);
    }
    let rc = restrict_contract(l, b, f)?;
    let label_all = |xs: &[usize]| xs.iter().map(|&x| l.label(x)).collect::<Vec<_>>();
    r.check(
        "B_F = (B_F)_1 ⊔ (B_F)_2",
        rc.is_partition(),
        json!({"B^F": rc.restriction.len(), "(B_F)_1": rc.first.len(), "(B_F)_2": rc.second.len(), "B_F": rc.contraction.len()}),
    );
    let (ok_r, w_r) = is_building_set(l, &rc.restriction);
    r.check("B^F is a building set of [0̂, F]", ok_r, w_r.unwrap_or(Value::Null));
    let (ok_c, w_c) = is_building_set(l, &rc.contraction);
    r.check("B_F is a building set of [F, 1̂]", ok_c, w_c.unwrap_or(Value::Null));
    if !(ok_r && ok_c) {
        return Ok(r);
    }

    let n = nested_set_complex(l, b)?;
    let lk = link(l, b, &n, f)?;
    let nr = nested_set_complex(l, &rc.restriction)?;
    let nc = nested_set_complex(l, &rc.contraction)?;

    let mut image: HashMap<usize, (Side, usize)> = HashMap::new();
    for &x in &lk.vertices {
        image.insert(x, tau(l, b, f, x)?);
    }
    let mut targets: Vec<(Side, usize)> = image.values().copied().collect();
    targets.sort();
    let mut expected: Vec<(Side, usize)> = nr
        .vertices
        .iter()
        .map(|&x| (Side::Restriction, x))
        .chain(nc.vertices.iter().map(|&x| (Side::Contraction, x)))
        .collect();
    expected.sort();
    let injective = targets.windows(2).all(|w| w[0] != w[1]);
    r.check(
        "τ is a bijection onto the vertices of the product",
        injective && targets == expected,
        json!({
            "link vertices": label_all(&lk.vertices),
            "restriction vertices": label_all(&nr.vertices),
            "contraction vertices": label_all(&nc.vertices),
        }),
    );

    let mapped: HashSet<Vec<(Side, usize)>> = lk
        .faces
        .iter()
        .map(|face| {
            let mut t: Vec<(Side, usize)> = face.iter().map(|x| image[x]).collect();
            t.sort();
            t
        })
        .collect();
    let mut product: HashSet<Vec<(Side, usize)>> = HashSet::new();
    for i in &nr.faces {
        for j in &nc.faces {
            let mut t: Vec<(Side, usize)> = i
                .iter()
                .map(|&x| (Side::Restriction, x))
                .chain(j.iter().map(|&x| (Side::Contraction, x)))
                .collect();
            t.sort();
            product.insert(t);
        }
    }
    let show = |t: &Vec<(Side, usize)>| t.iter().map(|(s, x)| format!("{}{}", if *s == Side::Restriction { "^" } else { "_" }, l.label(*x))).collect::<Vec<_>>();
    let extra = mapped.difference(&product).next().map(show);
    let missing = product.difference(&mapped).next().map(show);
    r.check(
        "τ maps the faces of the link onto the faces of the product",
        extra.is_none() && missing.is_none() && mapped.len() == lk.faces.len(),
        json!({
            "link faces": lk.faces.len(),
            "product faces": product.len(),
            "link face not in product": extra,
            "product face not in link": missing,
        }),
    );
    Ok(r)
}

/// [`verify_product_theorem`] for every `F ∈ B`, run on scoped worker threads; reports
/// are merged in the order of `B`.
pub fn verify_product_all(l: &FlatLattice, b: &MatroidBuildingSet) -> Result<VerificationReport> {
    let workers = std::thread::available_parallelism().map_or(1, |n| n.get()).min(8);
    let chunk = b.members.len().div_ceil(workers).max(1);
    let parts: Vec<Result<Vec<(usize, VerificationReport)>>> = std::thread::scope(|s| {
        let handles: Vec<_> = b
            .members
            .chunks(chunk)
            .map(|fs| s.spawn(move || fs.iter().map(|&f| Ok((f, verify_product_theorem(l, b, f)?))).collect()))
            .collect();
        handles.into_iter().map(|h| h.join().expect("worker panicked")).collect()
    });
    let mut r = VerificationReport::new(format!("product theorem for every element of a building set of {l}"));
    for part in parts {
        for (f, rep) in part? {
            r.merge(&format!("F = {}", l.label(f)), rep);
        }
    }
    Ok(r)
}

/// The Boolean-lattice building set generated by `generators`: all singletons, closed
/// under unions of intersecting members.
pub fn boolean_closure(l: &FlatLattice, generators: &[u64]) -> Result<MatroidBuildingSet> {
    let mut sets: BTreeSet<u64> = (0..l.ground()).map(|e| 1u64 << e).collect();
    sets.extend(generators.iter().copied().filter(|&g| g != 0));
    loop {
        let v: Vec<u64> = sets.iter().copied().collect();
        let mut grew = false;
        for (i, &a) in v.iter().enumerate() {
            for &c in &v[i + 1..] {
                if a & c != 0 && sets.insert(a | c) {
                    grew = true;
                }
            }
        }
        if !grew {
            break;
        }
    }
    let members = sets
        .into_iter()
        .map(|s| l.index_of(s).ok_or_else(|| Error::Precondition("generator is not a flat".into())))
        .collect::<Result<Vec<_>>>()?;
    MatroidBuildingSet::new(l, members)
}
