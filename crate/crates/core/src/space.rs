//! Simplicial complexes and finite T0-spaces.
//!
//! A [`FiniteSpace`] is a finite poset carrying the Alexandroff topology: open
//! sets are up-sets, closed sets are down-sets and the minimal open
//! neighborhood of `x` is `B_x = {y : y >= x}`. Elements are indexed densely
//! and every set operation runs over bitsets keyed by element index.

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A simplex given by its strictly increasing vertex ids.
///
/// Simplices order by dimension first and lexicographically second, which is
/// the element order used for face posets.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<u32>", into = "Vec<u32>")]
pub struct Simplex(Vec<u32>);

impl Simplex {
    /// Sorts the vertices; rejects empty input and repeated vertices.
    pub fn new(mut vertices: Vec<u32>) -> Result<Self> {
        if vertices.is_empty() {
            return Err(Error::MalformedInput("empty simplex".into()));
        }
        vertices.sort_unstable();
        if vertices.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::MalformedInput(format!(
                "duplicate vertex in simplex {vertices:?}"
            )));
        }
        Ok(Simplex(vertices))
    }

    pub fn vertices(&self) -> &[u32] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len() - 1
    }

    /// Codimension-one faces paired with the index of the omitted vertex.
    pub fn boundary_faces(&self) -> impl Iterator<Item = (usize, Simplex)> + '_ {
        let n = if self.0.len() > 1 { self.0.len() } else { 0 };
        (0..n).map(move |i| {
            let mut v = self.0.clone();
            v.remove(i);
            (i, Simplex(v))
        })
    }

    /// All non-empty faces, including the simplex itself.
    pub fn faces(&self) -> Vec<Simplex> {
        let k = self.0.len();
        (1u64..(1u64 << k))
            .map(|mask| {
                Simplex(
                    (0..k)
                        .filter(|i| mask & (1 << i) != 0)
                        .map(|i| self.0[i])
                        .collect(),
                )
            })
            .collect()
    }

    pub fn is_face_of(&self, other: &Simplex) -> bool {
        self.0.iter().all(|v| other.0.binary_search(v).is_ok())
    }
}

impl TryFrom<Vec<u32>> for Simplex {
    type Error = Error;
    fn try_from(v: Vec<u32>) -> Result<Self> {
        Simplex::new(v)
    }
}

impl From<Simplex> for Vec<u32> {
    fn from(s: Simplex) -> Self {
        s.0
    }
}

impl Ord for Simplex {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .len()
            .cmp(&other.0.len())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Simplex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Simplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "]")
    }
}

/// A face-closed set of simplices.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SimplicialComplex {
    simplices: BTreeSet<Simplex>,
}

impl SimplicialComplex {
    pub fn from_maximal<I, V>(max_simplices: I) -> Result<Self>
    where
        I: IntoIterator<Item = V>,
        V: Into<Vec<u32>>,
    {
        let mut simplices = BTreeSet::new();
        for vs in max_simplices {
            let s = Simplex::new(vs.into())?;
            simplices.extend(s.faces());
        }
        Ok(SimplicialComplex { simplices })
    }

    pub fn len(&self) -> usize {
        self.simplices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.simplices.is_empty()
    }

    pub fn dim(&self) -> Option<usize> {
        self.simplices.iter().map(Simplex::dim).max()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Simplex> {
        self.simplices.iter()
    }

    pub fn contains(&self, s: &Simplex) -> bool {
        self.simplices.contains(s)
    }
}

/// A subset of the elements of some [`FiniteSpace`].
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subspace(FixedBitSet);

impl Subspace {
    pub fn empty(n: usize) -> Self {
        Subspace(FixedBitSet::with_capacity(n))
    }

    pub fn full(n: usize) -> Self {
        let mut b = FixedBitSet::with_capacity(n);
        b.insert_range(..);
        Subspace(b)
    }

    pub fn from_indices(n: usize, indices: impl IntoIterator<Item = usize>) -> Self {
        let mut b = FixedBitSet::with_capacity(n);
        for i in indices {
            b.insert(i);
        }
        Subspace(b)
    }

    /// Size of the host space.
    pub fn host_len(&self) -> usize {
        self.0.len()
    }

    pub fn len(&self) -> usize {
        self.0.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_clear()
    }

    pub fn contains(&self, x: usize) -> bool {
        self.0.contains(x)
    }

    pub fn insert(&mut self, x: usize) {
        self.0.insert(x);
    }

    pub fn remove(&mut self, x: usize) {
        self.0.set(x, false);
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.ones()
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.0.ones().collect()
    }

    pub fn first(&self) -> Option<usize> {
        self.0.minimum()
    }

    pub fn is_subset(&self, other: &Subspace) -> bool {
        self.0.is_subset(&other.0)
    }

    pub fn is_disjoint(&self, other: &Subspace) -> bool {
        self.0.is_disjoint(&other.0)
    }

    pub fn union(&self, other: &Subspace) -> Subspace {
        let mut b = self.0.clone();
        b.union_with(&other.0);
        Subspace(b)
    }

    pub fn intersection(&self, other: &Subspace) -> Subspace {
        let mut b = self.0.clone();
        b.intersect_with(&other.0);
        Subspace(b)
    }

    pub fn difference(&self, other: &Subspace) -> Subspace {
        let mut b = self.0.clone();
        b.difference_with(&other.0);
        Subspace(b)
    }
}

/// Chain-length profile of one element inside a subspace.
///
/// `down` ranges over saturated chains from a minimal element up to `x`,
/// `up` over saturated chains from `x` to a maximal element; both count
/// steps, not elements.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ChainProfile {
    pub down_min: usize,
    pub down_max: usize,
    pub up_min: usize,
    pub up_max: usize,
}

impl ChainProfile {
    /// Smallest cardinality of a maximal chain through the element.
    pub fn min_cardinality(&self) -> usize {
        self.down_min + self.up_min + 1
    }

    /// Largest cardinality of a maximal chain through the element.
    pub fn max_cardinality(&self) -> usize {
        self.down_max + self.up_max + 1
    }
}

/// A finite poset viewed as a T0-space with the Alexandroff topology.
#[derive(Clone, Debug)]
pub struct FiniteSpace {
    labels: Option<Vec<Simplex>>,
    index: HashMap<Simplex, usize>,
    covers_up: Vec<Vec<usize>>,
    covers_down: Vec<Vec<usize>>,
    above: Vec<FixedBitSet>,
    below: Vec<FixedBitSet>,
    /// A linear extension of the order, smallest first.
    topo: Vec<usize>,
}

impl FiniteSpace {
    /// Face poset of a complex; elements follow the complex's (dim, lex) order.
    pub fn from_complex(complex: &SimplicialComplex) -> Self {
        let labels: Vec<Simplex> = complex.iter().cloned().collect();
        let index: HashMap<Simplex, usize> = labels
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, s)| (s, i))
            .collect();
        let n = labels.len();
        let mut covers_up = vec![Vec::new(); n];
        let mut covers_down = vec![Vec::new(); n];
        for (y, s) in labels.iter().enumerate() {
            for (_, face) in s.boundary_faces() {
                let x = index[&face];
                covers_down[y].push(x);
                covers_up[x].push(y);
            }
        }
        for c in covers_up.iter_mut().chain(covers_down.iter_mut()) {
            c.sort_unstable();
        }
        let topo: Vec<usize> = (0..n).collect();
        let (above, below) = closure_from_covers(n, &covers_down, &topo);
        FiniteSpace {
            labels: Some(labels),
            index,
            covers_up,
            covers_down,
            above,
            below,
            topo,
        }
    }

    /// Builds a general poset from order relations `(x, y)` meaning `x < y`.
    ///
    /// The relation may contain transitive pairs; they are reduced to
    /// covering pairs. Cycles and reflexive pairs are rejected.
    pub fn from_covering_pairs(n: usize, pairs: &[(usize, usize)]) -> Result<Self> {
        let mut succ = vec![Vec::new(); n];
        let mut indeg = vec![0usize; n];
        for &(x, y) in pairs {
            if x >= n || y >= n {
                return Err(Error::MalformedInput(format!(
                    "pair ({x}, {y}) out of range for {n} elements"
                )));
            }
            if x == y {
                return Err(Error::MalformedInput(format!("reflexive pair ({x}, {x})")));
            }
            succ[x].push(y);
            indeg[y] += 1;
        }
        // Kahn's algorithm, smallest index first for determinism.
        let mut ready: BTreeSet<usize> = (0..n).filter(|&i| indeg[i] == 0).collect();
        let mut topo = Vec::with_capacity(n);
        while let Some(&x) = ready.iter().next() {
            ready.remove(&x);
            topo.push(x);
            for &y in &succ[x] {
                indeg[y] -= 1;
                if indeg[y] == 0 {
                    ready.insert(y);
                }
            }
        }
        if topo.len() != n {
            return Err(Error::MalformedInput("order relation has a cycle".into()));
        }
        let mut pred = vec![Vec::new(); n];
        for &(x, y) in pairs {
            pred[y].push(x);
        }
        let (above, below) = closure_from_covers(n, &pred, &topo);
        let mut covers_up = vec![Vec::new(); n];
        let mut covers_down = vec![Vec::new(); n];
        for y in 0..n {
            for x in below[y].ones() {
                // x is covered by y iff nothing strictly between.
                let mut between = above[x].clone();
                between.intersect_with(&below[y]);
                if between.is_clear() {
                    covers_down[y].push(x);
                    covers_up[x].push(y);
                }
            }
        }
        for c in covers_up.iter_mut() {
            c.sort_unstable();
        }
        Ok(FiniteSpace {
            labels: None,
            index: HashMap::new(),
            covers_up,
            covers_down,
            above,
            below,
            topo,
        })
    }

    pub fn len(&self) -> usize {
        self.covers_up.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn is_face_poset(&self) -> bool {
        self.labels.is_some()
    }

    pub fn label(&self, x: usize) -> Option<&Simplex> {
        self.labels.as_ref().map(|l| &l[x])
    }

    pub fn index_of(&self, s: &Simplex) -> Option<usize> {
        self.index.get(s).copied()
    }

    /// Looks up a simplex by vertex list; panics if absent.
    pub fn element(&self, vertices: &[u32]) -> usize {
        let s = Simplex::new(vertices.to_vec()).expect("valid simplex");
        self.index_of(&s)
            .unwrap_or_else(|| panic!("simplex {s} is not in the space"))
    }

    /// Human-readable name: the simplex for face posets, `x<i>` otherwise.
    pub fn name(&self, x: usize) -> String {
        match self.label(x) {
            Some(s) => s.to_string(),
            None => format!("x{x}"),
        }
    }

    pub fn full(&self) -> Subspace {
        Subspace::full(self.len())
    }

    pub fn empty_subspace(&self) -> Subspace {
        Subspace::empty(self.len())
    }

    pub fn subspace(&self, members: impl IntoIterator<Item = usize>) -> Subspace {
        Subspace::from_indices(self.len(), members)
    }

    /// Subspace from simplex vertex lists.
    pub fn subspace_of(&self, simplices: &[&[u32]]) -> Subspace {
        self.subspace(simplices.iter().map(|v| self.element(v)))
    }

    pub fn leq(&self, x: usize, y: usize) -> bool {
        x == y || self.above[x].contains(y)
    }

    pub fn lt(&self, x: usize, y: usize) -> bool {
        self.above[x].contains(y)
    }

    pub fn comparable(&self, x: usize, y: usize) -> bool {
        self.leq(x, y) || self.leq(y, x)
    }

    pub fn is_covering(&self, x: usize, y: usize) -> bool {
        self.covers_up[x].binary_search(&y).is_ok()
    }

    /// Elements covering `x`.
    pub fn covers_of(&self, x: usize) -> &[usize] {
        &self.covers_up[x]
    }

    /// Elements covered by `x`.
    pub fn covered_by(&self, x: usize) -> &[usize] {
        &self.covers_down[x]
    }

    /// All covering pairs `(x, y)`, sorted.
    pub fn covering_pairs(&self) -> Vec<(usize, usize)> {
        (0..self.len())
            .flat_map(|x| self.covers_up[x].iter().map(move |&y| (x, y)))
            .collect()
    }

    /// A linear extension of the order, smallest elements first.
    pub fn linear_extension(&self) -> &[usize] {
        &self.topo
    }

    /// `B_x`: the up-set of `x`, the smallest open set containing it.
    pub fn min_open_nbhd(&self, x: usize) -> Subspace {
        let mut b = self.above[x].clone();
        b.insert(x);
        Subspace(b)
    }

    /// Strict down-set of `x`.
    pub fn strictly_below(&self, x: usize) -> Subspace {
        Subspace(self.below[x].clone())
    }

    /// Down-closure of `s`.
    pub fn closure(&self, s: &Subspace) -> Subspace {
        let mut b = s.0.clone();
        for x in s.iter() {
            b.union_with(&self.below[x]);
        }
        Subspace(b)
    }

    /// Up-closure of `s`, the smallest open set containing it.
    pub fn star(&self, s: &Subspace) -> Subspace {
        let mut b = s.0.clone();
        for x in s.iter() {
            b.union_with(&self.above[x]);
        }
        Subspace(b)
    }

    pub fn is_open(&self, s: &Subspace) -> bool {
        s.iter().all(|x| self.above[x].is_subset(&s.0))
    }

    pub fn is_closed(&self, s: &Subspace) -> bool {
        s.iter().all(|x| self.below[x].is_subset(&s.0))
    }

    /// `closure(U) - U` for an open `U`.
    pub fn link_of_open(&self, u: &Subspace) -> Result<Subspace> {
        if !self.is_open(u) {
            return Err(Error::Precondition("link requires an open set".into()));
        }
        Ok(self.closure(u).difference(u))
    }

    /// Maximal chain cardinality minus one; errors on the empty set.
    pub fn dimension(&self, s: &Subspace) -> Result<usize> {
        let heights = self.heights(s);
        s.iter()
            .map(|x| heights[x])
            .max()
            .ok_or(Error::EmptyDimension)
    }

    /// Dimension with the convention `dim(∅) = -1`.
    pub fn dimension_or_neg(&self, s: &Subspace) -> isize {
        self.dimension(s).map(|d| d as isize).unwrap_or(-1)
    }

    pub fn space_dimension(&self) -> Result<usize> {
        self.dimension(&self.full())
    }

    /// Longest chain (in steps) ending at each member of `s`, in the induced order.
    fn heights(&self, s: &Subspace) -> Vec<usize> {
        let mut h = vec![0usize; self.len()];
        for &x in &self.topo {
            if !s.contains(x) {
                continue;
            }
            let mut below = self.below[x].clone();
            below.intersect_with(&s.0);
            h[x] = below.ones().map(|z| h[z] + 1).max().unwrap_or(0);
        }
        h
    }

    /// Covering pairs of the induced order on `s`.
    pub fn induced_covering_pairs(&self, s: &Subspace) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for y in s.iter() {
            let mut below = self.below[y].clone();
            below.intersect_with(&s.0);
            for x in below.ones() {
                if self.above[x].is_disjoint(&below) {
                    out.push((x, y));
                }
            }
        }
        out.sort_unstable();
        out
    }

    /// Maximal elements of the induced order on `s`.
    pub fn maximal_elements(&self, s: &Subspace) -> Subspace {
        Subspace::from_indices(
            self.len(),
            s.iter().filter(|&x| self.above[x].is_disjoint(&s.0)),
        )
    }

    /// Chain-length profile of every member of `s` within the induced order.
    pub fn chain_profiles(&self, s: &Subspace) -> Vec<ChainProfile> {
        let n = self.len();
        let covers = self.induced_covering_pairs(s);
        let mut down_covers = vec![Vec::new(); n];
        let mut up_covers = vec![Vec::new(); n];
        for &(x, y) in &covers {
            down_covers[y].push(x);
            up_covers[x].push(y);
        }
        let mut p = vec![ChainProfile::default(); n];
        for &x in &self.topo {
            if !s.contains(x) || down_covers[x].is_empty() {
                continue;
            }
            p[x].down_min = down_covers[x].iter().map(|&z| p[z].down_min + 1).min().unwrap();
            p[x].down_max = down_covers[x].iter().map(|&z| p[z].down_max + 1).max().unwrap();
        }
        for &x in self.topo.iter().rev() {
            if !s.contains(x) || up_covers[x].is_empty() {
                continue;
            }
            p[x].up_min = up_covers[x].iter().map(|&z| p[z].up_min + 1).min().unwrap();
            p[x].up_max = up_covers[x].iter().map(|&z| p[z].up_max + 1).max().unwrap();
        }
        p
    }

    /// True iff every maximal chain of the induced order on `s` has `d + 1` elements.
    /// The empty set is homogeneous of every dimension.
    pub fn is_homogeneous(&self, s: &Subspace, d: usize) -> bool {
        let profiles = self.chain_profiles(s);
        s.iter().all(|x| {
            let p = profiles[x];
            p.min_cardinality() == d + 1 && p.max_cardinality() == d + 1
        })
    }

    /// Components of the comparability graph restricted to `s`, ordered by
    /// smallest member.
    pub fn connected_pieces(&self, s: &Subspace) -> Vec<Subspace> {
        let mut unvisited = s.0.clone();
        let mut pieces = Vec::new();
        while let Some(start) = unvisited.minimum() {
            let mut piece = FixedBitSet::with_capacity(self.len());
            let mut queue = VecDeque::from([start]);
            unvisited.set(start, false);
            piece.insert(start);
            while let Some(x) = queue.pop_front() {
                let mut nbrs = self.above[x].clone();
                nbrs.union_with(&self.below[x]);
                nbrs.intersect_with(&unvisited);
                for y in nbrs.ones() {
                    unvisited.set(y, false);
                    piece.insert(y);
                    queue.push_back(y);
                }
            }
            pieces.push(Subspace(piece));
        }
        pieces
    }
}

/// Strict up/down bitsets from a covering (or any generating) relation, given
/// predecessor lists and a linear extension.
fn closure_from_covers(
    n: usize,
    pred: &[Vec<usize>],
    topo: &[usize],
) -> (Vec<FixedBitSet>, Vec<FixedBitSet>) {
    let mut below = vec![FixedBitSet::with_capacity(n); n];
    for &y in topo {
        let mut acc = FixedBitSet::with_capacity(n);
        for &x in &pred[y] {
            acc.insert(x);
            acc.union_with(&below[x]);
        }
        below[y] = acc;
    }
    let mut above = vec![FixedBitSet::with_capacity(n); n];
    for y in 0..n {
        for x in below[y].ones() {
            above[x].insert(y);
        }
    }
    (above, below)
}

/// Face poset of the complex generated by `max_simplices`.
pub fn build_from_maximal_simplices<V: Into<Vec<u32>>>(
    max_simplices: impl IntoIterator<Item = V>,
) -> Result<FiniteSpace> {
    let complex = SimplicialComplex::from_maximal(max_simplices)?;
    Ok(FiniteSpace::from_complex(&complex))
}
