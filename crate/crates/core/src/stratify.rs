//! Coarsest and minimal homogeneous `F`-stratifications.

use std::cmp::Ordering;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::sheaf::DeltaMap;
use crate::space::{FiniteSpace, Subspace};

/// A filtration `∅ = X_{-1} ⊆ X_0 ⊆ ... ⊆ X_d = X` by closed sets, with its
/// strata `S_i = X_i - X_{i-1}` and their connected pieces.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Stratification {
    host: u64,
    levels: Vec<Subspace>,
    pieces: Vec<Vec<Subspace>>,
}

impl Stratification {
    /// Validates that every level is closed, levels are nested and the last is `X`.
    pub fn from_filtration(space: &FiniteSpace, levels: Vec<Subspace>) -> Result<Self> {
        let n = space.len();
        if levels.is_empty() {
            return Err(Error::InvalidStratification("no filtration levels".into()));
        }
        for (i, l) in levels.iter().enumerate() {
            if l.host_len() != n {
                return Err(Error::HostMismatch);
            }
            if !space.is_closed(l) {
                return Err(Error::InvalidStratification(format!("X_{i} is not closed")));
            }
            if i > 0 && !levels[i - 1].is_subset(l) {
                return Err(Error::InvalidStratification(format!(
                    "X_{} is not contained in X_{i}",
                    i - 1
                )));
            }
        }
        if levels.last().unwrap().len() != n {
            return Err(Error::InvalidStratification("top level is not X".into()));
        }
        let pieces = (0..levels.len())
            .map(|i| {
                let s = match i {
                    0 => levels[0].clone(),
                    _ => levels[i].difference(&levels[i - 1]),
                };
                space.connected_pieces(&s)
            })
            .collect();
        Ok(Stratification {
            host: host_fingerprint(space),
            levels,
            pieces,
        })
    }

    /// Builds the filtration `X_i = S_0 ∪ ... ∪ S_i` from a list of strata.
    pub fn from_strata(space: &FiniteSpace, strata: &[Subspace]) -> Result<Self> {
        let mut acc = space.empty_subspace();
        let mut levels = Vec::with_capacity(strata.len());
        for (i, s) in strata.iter().enumerate() {
            if s.host_len() != space.len() {
                return Err(Error::HostMismatch);
            }
            if !acc.is_disjoint(s) {
                return Err(Error::InvalidStratification(format!("S_{i} overlaps a lower stratum")));
            }
            acc = acc.union(s);
            levels.push(acc.clone());
        }
        Self::from_filtration(space, levels)
    }

    /// One singleton stratum per element, following a linear extension, so
    /// `S_i` is the `i`-th smallest element.
    pub fn finest(space: &FiniteSpace) -> Result<Self> {
        let strata: Vec<Subspace> = space
            .linear_extension()
            .iter()
            .map(|&x| space.subspace([x]))
            .collect();
        Self::from_strata(space, &strata)
    }

    /// Top filtration index `d`.
    pub fn filtration_dim(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn level(&self, i: usize) -> &Subspace {
        &self.levels[i]
    }

    pub fn stratum(&self, i: usize) -> Subspace {
        match i {
            0 => self.levels[0].clone(),
            _ => self.levels[i].difference(&self.levels[i - 1]),
        }
    }

    pub fn pieces(&self, i: usize) -> &[Subspace] {
        &self.pieces[i]
    }

    pub fn num_pieces(&self) -> usize {
        self.pieces.iter().map(Vec::len).sum()
    }

    /// Every piece, in stratum order.
    pub fn all_pieces(&self) -> impl Iterator<Item = (usize, &Subspace)> {
        self.pieces
            .iter()
            .enumerate()
            .flat_map(|(i, ps)| ps.iter().map(move |p| (i, p)))
    }

    /// Index of the stratum containing `x`.
    pub fn stratum_of(&self, x: usize) -> usize {
        self.levels.iter().position(|l| l.contains(x)).expect("x in X")
    }

    /// `(|X_d|, ..., |X_0|)`.
    pub fn lex_key(&self) -> Vec<usize> {
        self.levels.iter().rev().map(Subspace::len).collect()
    }

    /// Piece id per element, numbering pieces in stratum order.
    fn piece_ids(&self) -> Vec<usize> {
        let mut ids = vec![0; self.levels[0].host_len()];
        for (k, (_, p)) in self.all_pieces().enumerate() {
            for x in p.iter() {
                ids[x] = k;
            }
        }
        ids
    }

    /// Whether the closure of each `S_i` within `X_i` is homogeneous of dimension `i`.
    pub fn is_homogeneous(&self, space: &FiniteSpace) -> bool {
        (0..self.levels.len()).all(|i| {
            let s = self.stratum(i);
            let closure = space.closure(&s).intersection(&self.levels[i]);
            space.is_homogeneous(&closure, i)
        })
    }

    fn check_host(&self, space: &FiniteSpace) -> Result<()> {
        if self.host != host_fingerprint(space) {
            return Err(Error::HostMismatch);
        }
        Ok(())
    }
}

fn host_fingerprint(space: &FiniteSpace) -> u64 {
    use std::hash::{DefaultHasher, Hash, Hasher};
    let mut h = DefaultHasher::new();
    space.len().hash(&mut h);
    space.covering_pairs().hash(&mut h);
    h.finish()
}

/// Relation between two stratifications under piecewise containment.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Coarseness {
    Coarser,
    Finer,
    Equivalent,
    Incomparable,
}

/// How `a` relates to `b`: `Coarser` means every piece of `b` lies in a piece of `a`.
pub fn compare_coarseness(a: &Stratification, b: &Stratification) -> Result<Coarseness> {
    if a.host != b.host {
        return Err(Error::HostMismatch);
    }
    let (ia, ib) = (a.piece_ids(), b.piece_ids());
    let refines = |fine: &Stratification, coarse_ids: &[usize]| {
        fine.all_pieces().all(|(_, p)| {
            let first = coarse_ids[p.first().unwrap()];
            p.iter().all(|x| coarse_ids[x] == first)
        })
    };
    Ok(match (refines(b, &ia), refines(a, &ib)) {
        (true, true) => Coarseness::Equivalent,
        (true, false) => Coarseness::Coarser,
        (false, true) => Coarseness::Finer,
        (false, false) => Coarseness::Incomparable,
    })
}

/// Lexicographic comparison of `(|X_d|, ..., |X_0|)`; shorter filtrations are
/// padded at the top with `|X|`.
pub fn lex_compare(a: &Stratification, b: &Stratification) -> Result<Ordering> {
    if a.host != b.host {
        return Err(Error::HostMismatch);
    }
    let d = a.filtration_dim().max(b.filtration_dim());
    let key = |s: &Stratification| -> Vec<usize> {
        (0..=d)
            .rev()
            .map(|i| s.levels.get(i).unwrap_or(s.levels.last().unwrap()).len())
            .collect()
    };
    Ok(key(a).cmp(&key(b)))
}

/// Whether the sheaf is locally constant on every stratum: no covering pair
/// with `δ = 0` has both ends in one stratum.
///
/// Strata are locally closed, hence convex, so their induced covering pairs
/// are covering pairs of `X`, and each such pair `w < y` lies in `B_w ∩ S`.
pub fn is_constructible(space: &FiniteSpace, dm: &DeltaMap, strat: &Stratification) -> Result<bool> {
    strat.check_host(space)?;
    if !dm.covers(space) {
        return Err(Error::Precondition("δ is not total on covering pairs".into()));
    }
    Ok(dm
        .edges()
        .all(|(w, y, ok)| ok || strat.stratum_of(w) != strat.stratum_of(y)))
}

/// Reading of the chain condition `c(x, i)` in the homogeneous algorithm.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum ChainRule {
    /// Maximal chains through `x` have cardinality `d_i + 1`.
    #[default]
    DimensionPlusOne,
    /// Maximal chains through `x` have cardinality `d_i`.
    Literal,
}

/// Coarsest `F`-stratification by repeated peeling.
pub fn coarsest_stratification(space: &FiniteSpace, dm: &DeltaMap) -> Result<Stratification> {
    peel(space, dm, None)
}

/// Minimal homogeneous `F`-stratification.
pub fn minimal_homogeneous_stratification(space: &FiniteSpace, dm: &DeltaMap) -> Result<Stratification> {
    peel(space, dm, Some(ChainRule::DimensionPlusOne))
}

/// Minimal homogeneous variant with an explicit chain rule.
pub fn minimal_homogeneous_with_rule(
    space: &FiniteSpace,
    dm: &DeltaMap,
    rule: ChainRule,
) -> Result<Stratification> {
    peel(space, dm, Some(rule))
}

fn peel(space: &FiniteSpace, dm: &DeltaMap, homogeneous: Option<ChainRule>) -> Result<Stratification> {
    if !dm.covers(space) {
        return Err(Error::Precondition("δ is not total on covering pairs".into()));
    }
    let top = space.space_dimension()?;
    let mut levels = vec![space.empty_subspace(); top + 1];
    let mut current = space.full();
    let mut d = top;
    loop {
        levels[d] = current.clone();
        let stratum = select(space, dm, &current, d, homogeneous);
        if stratum.is_empty() {
            return Err(Error::NoProgress { dim: d });
        }
        let rest = current.difference(&stratum);
        if rest.is_empty() {
            break;
        }
        let next = space.dimension(&rest)?;
        if next >= d {
            return Err(Error::NoProgress { dim: d });
        }
        for level in levels.iter_mut().take(d).skip(next + 1) {
            *level = rest.clone();
        }
        current = rest;
        d = next;
    }
    Stratification::from_filtration(space, levels)
}

/// Elements of `current` whose neighborhood in `current` carries only
/// isomorphisms, optionally restricted by the chain condition.
///
/// `current` is closed, hence convex, so its covering pairs are those of `X`
/// and `δ` of the pulled-back sheaf equals `δ` on `X`.
fn select(
    space: &FiniteSpace,
    dm: &DeltaMap,
    current: &Subspace,
    d: usize,
    homogeneous: Option<ChainRule>,
) -> Subspace {
    let profiles = homogeneous.map(|_| space.chain_profiles(current));
    let target = match homogeneous {
        Some(ChainRule::Literal) => d,
        _ => d + 1,
    };
    let chain_ok = |y: usize| match &profiles {
        Some(p) => p[y].min_cardinality() == target && p[y].max_cardinality() == target,
        None => true,
    };
    let members: Vec<usize> = current
        .to_vec()
        .into_par_iter()
        .filter(|&x| {
            let nbhd = space.min_open_nbhd(x).intersection(current);
            // checked on all of B_x so the stratum stays open in general posets
            if !nbhd.iter().all(chain_ok) {
                return false;
            }
            let constant = nbhd.iter().all(|w| {
                space
                    .covers_of(w)
                    .iter()
                    .filter(|&&y| current.contains(y))
                    .all(|&y| dm.label(w, y))
            });
            constant
        })
        .collect();
    space.subspace(members)
}
