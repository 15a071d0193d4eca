//! Sheaf oracles: values on minimal open neighborhoods and the isomorphism
//! indicator `δ` on covering pairs.

use std::collections::BTreeSet;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::field::{FieldSpec, PrimeField, Rationals};
use crate::homology::{ChainModel, LocalHomology};
use crate::space::FiniteSpace;

/// What the stratification algorithms need from a sheaf.
pub trait SheafOracle: Sync {
    /// Short description of the value on `B_x`.
    fn value_summary(&self, x: usize) -> String;

    /// Whether the restriction `F(B_x) → F(B_y)` is an isomorphism, for a
    /// covering pair `x < y`.
    fn delta(&self, x: usize, y: usize) -> bool;
}

/// `δ` labels on every covering pair of a space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeltaMap {
    pairs: Vec<(usize, usize)>,
    labels: Vec<bool>,
    summaries: Vec<String>,
}

impl DeltaMap {
    /// Queries the oracle once per covering pair, in parallel.
    pub fn from_oracle<O: SheafOracle + ?Sized>(space: &FiniteSpace, oracle: &O) -> Self {
        let pairs = space.covering_pairs();
        let labels = pairs.par_iter().map(|&(x, y)| oracle.delta(x, y)).collect();
        let summaries = (0..space.len())
            .into_par_iter()
            .map(|x| oracle.value_summary(x))
            .collect();
        DeltaMap {
            pairs,
            labels,
            summaries,
        }
    }

    /// Labels given by a closure; value summaries are left empty.
    pub fn from_fn(space: &FiniteSpace, mut label: impl FnMut(usize, usize) -> bool) -> Self {
        let pairs = space.covering_pairs();
        let labels = pairs.iter().map(|&(x, y)| label(x, y)).collect();
        DeltaMap {
            pairs,
            labels,
            summaries: vec![String::new(); space.len()],
        }
    }

    /// Labels from a bit mask over `space.covering_pairs()` order.
    pub fn from_mask(space: &FiniteSpace, mask: u64) -> Self {
        let mut i = 0;
        Self::from_fn(space, |_, _| {
            let bit = mask >> i & 1 == 1;
            i += 1;
            bit
        })
    }

    pub fn get(&self, x: usize, y: usize) -> Option<bool> {
        self.pairs
            .binary_search(&(x, y))
            .ok()
            .map(|i| self.labels[i])
    }

    /// Label of a covering pair; panics for other pairs.
    pub fn label(&self, x: usize, y: usize) -> bool {
        self.get(x, y)
            .unwrap_or_else(|| panic!("({x}, {y}) is not a covering pair"))
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, bool)> + '_ {
        self.pairs.iter().zip(&self.labels).map(|(&(x, y), &b)| (x, y, b))
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn summary(&self, x: usize) -> &str {
        &self.summaries[x]
    }

    pub fn covers(&self, space: &FiniteSpace) -> bool {
        self.pairs == space.covering_pairs()
    }
}

/// Conjunction of `δ` along a chain of consecutive covering pairs.
pub fn delta_along_chain(dm: &DeltaMap, chain: &[usize]) -> Result<bool> {
    let mut all = true;
    for w in chain.windows(2) {
        let b = dm.get(w[0], w[1]).ok_or_else(|| {
            Error::Precondition(format!("({}, {}) is not a covering pair", w[0], w[1]))
        })?;
        all &= b;
    }
    Ok(all)
}

/// `U ↦ H(X, X - U)` with coefficients in a chosen field.
pub struct LocalHomologySheaf<'a> {
    space: &'a FiniteSpace,
    inner: LhInner,
}

enum LhInner {
    Prime(LocalHomology<PrimeField>),
    Rational(LocalHomology<Rationals>),
}

impl<'a> LocalHomologySheaf<'a> {
    /// Uses simplicial chains for face posets and order-complex chains otherwise.
    pub fn new(space: &'a FiniteSpace, field: FieldSpec) -> Result<Self> {
        let model = if space.is_face_poset() {
            ChainModel::Simplicial
        } else {
            ChainModel::OrderComplex
        };
        Self::with_model(space, field, model)
    }

    pub fn with_model(space: &'a FiniteSpace, field: FieldSpec, model: ChainModel) -> Result<Self> {
        let inner = match field {
            FieldSpec::Prime(p) => LhInner::Prime(LocalHomology::new(PrimeField::new(p)?, space, model)?),
            FieldSpec::Rational => LhInner::Rational(LocalHomology::new(Rationals, space, model)?),
        };
        Ok(LocalHomologySheaf { space, inner })
    }

    /// Homology dimensions of `L(B_x)` by degree.
    pub fn dims(&self, x: usize) -> Vec<usize> {
        match &self.inner {
            LhInner::Prime(lh) => lh.dims(x),
            LhInner::Rational(lh) => lh.dims(x),
        }
    }

    /// Whether the restriction for an arbitrary pair `x ≤ y` is an isomorphism.
    pub fn is_iso(&self, x: usize, y: usize) -> Result<bool> {
        match &self.inner {
            LhInner::Prime(lh) => lh.is_iso(self.space, x, y),
            LhInner::Rational(lh) => lh.is_iso(self.space, x, y),
        }
    }

    /// Rank of the restriction map in each degree.
    pub fn restriction_ranks(&self, x: usize, y: usize) -> Result<Vec<usize>> {
        fn ranks<F: crate::field::Field>(
            lh: &LocalHomology<F>,
            space: &FiniteSpace,
            x: usize,
            y: usize,
        ) -> Result<Vec<usize>> {
            let m = lh.induced_restriction(space, x, y)?;
            Ok((0..m.num_degrees())
                .map(|p| crate::linalg::rank(lh.field(), m.matrix(p)))
                .collect())
        }
        match &self.inner {
            LhInner::Prime(lh) => ranks(lh, self.space, x, y),
            LhInner::Rational(lh) => ranks(lh, self.space, x, y),
        }
    }
}

impl SheafOracle for LocalHomologySheaf<'_> {
    fn value_summary(&self, x: usize) -> String {
        let d: Vec<String> = self.dims(x).iter().map(usize::to_string).collect();
        format!("L=({})", d.join(","))
    }

    fn delta(&self, x: usize, y: usize) -> bool {
        self.is_iso(x, y).expect("covering pairs are comparable")
    }
}

/// `U ↦` free module on the maximal elements of `U`.
pub struct MaximalElementSheaf<'a> {
    space: &'a FiniteSpace,
    generators: Vec<BTreeSet<usize>>,
}

impl<'a> MaximalElementSheaf<'a> {
    pub fn new(space: &'a FiniteSpace) -> Self {
        let generators = (0..space.len())
            .map(|x| {
                space
                    .maximal_elements(&space.min_open_nbhd(x))
                    .iter()
                    .collect()
            })
            .collect();
        MaximalElementSheaf { space, generators }
    }

    /// Maximal elements of `B_x`.
    pub fn generators(&self, x: usize) -> &BTreeSet<usize> {
        &self.generators[x]
    }
}

impl SheafOracle for MaximalElementSheaf<'_> {
    fn value_summary(&self, x: usize) -> String {
        let names: Vec<String> = self.generators[x].iter().map(|&m| self.space.name(m)).collect();
        format!("{{{}}}", names.join(" "))
    }

    // Restriction is a coordinate projection, so bijective iff nothing is dropped.
    fn delta(&self, x: usize, y: usize) -> bool {
        self.generators[x] == self.generators[y]
    }
}

/// Every restriction is the identity.
pub struct ConstantSheaf;

impl SheafOracle for ConstantSheaf {
    fn value_summary(&self, _x: usize) -> String {
        "k".into()
    }

    fn delta(&self, _x: usize, _y: usize) -> bool {
        true
    }
}
