//! Local homology `L(U) = H(Cl U, Lk U)` over a field, and the maps it induces
//! between minimal open neighborhoods.

use std::collections::HashMap;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg::{kernel, rref, ColumnSolver, Matrix};
use crate::space::{FiniteSpace, Subspace};

/// Which chain model to use for relative chains.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum ChainModel {
    /// Simplices of the complex; requires a face poset.
    #[default]
    Simplicial,
    /// Chains of the poset's order complex; works for any finite space.
    OrderComplex,
}

/// A generator of a relative chain group: a strictly increasing chain of
/// element indices. Simplicial generators are single elements.
pub type Generator = Vec<usize>;

/// Relative chains `C(Cl U) / C(Lk U)` with their boundary maps.
#[derive(Clone, Debug)]
pub struct ChainComplex<E> {
    generators: Vec<Vec<Generator>>,
    /// `boundaries[p]` maps degree `p` to degree `p - 1`.
    boundaries: Vec<Matrix<E>>,
}

impl<E: Clone> ChainComplex<E> {
    /// Number of degrees tracked, `dim X + 1` for the host space.
    pub fn num_degrees(&self) -> usize {
        self.generators.len()
    }

    pub fn generators(&self, p: usize) -> &[Generator] {
        &self.generators[p]
    }

    pub fn rank_by_degree(&self) -> Vec<usize> {
        self.generators.iter().map(Vec::len).collect()
    }

    pub fn boundary(&self, p: usize) -> &Matrix<E> {
        &self.boundaries[p]
    }

    /// Checks `∂_{p-1} ∘ ∂_p = 0` in every degree.
    pub fn boundary_squares_to_zero<F: Field<Elem = E>>(&self, f: &F) -> bool {
        (2..self.num_degrees())
            .all(|p| self.boundaries[p - 1].mul(f, &self.boundaries[p]).is_zero(f))
    }
}

fn degrees_of(space: &FiniteSpace) -> usize {
    space.space_dimension().map(|d| d + 1).unwrap_or(0)
}

fn assemble<F: Field>(f: &F, generators: Vec<Vec<Generator>>, u: &Subspace) -> ChainComplex<F::Elem> {
    let index: Vec<HashMap<&Generator, usize>> = generators
        .iter()
        .map(|g| g.iter().enumerate().map(|(i, s)| (s, i)).collect())
        .collect();
    let mut boundaries = Vec::with_capacity(generators.len());
    for p in 0..generators.len() {
        let rows = if p == 0 { 0 } else { generators[p - 1].len() };
        let mut m = Matrix::zeros(f, rows, generators[p].len());
        if p > 0 {
            for (j, g) in generators[p].iter().enumerate() {
                for (i, face) in chain_faces(g) {
                    // faces leaving U vanish in the quotient
                    if !u.contains(*face.last().unwrap()) {
                        continue;
                    }
                    let row = index[p - 1][&face];
                    let sign = if i % 2 == 0 { f.one() } else { f.neg(&f.one()) };
                    m.set(row, j, sign);
                }
            }
        }
        boundaries.push(m);
    }
    ChainComplex {
        generators,
        boundaries,
    }
}

fn chain_faces(g: &Generator) -> impl Iterator<Item = (usize, Generator)> + '_ {
    (0..g.len()).map(move |i| {
        let mut face = g.clone();
        face.remove(i);
        (i, face)
    })
}

/// Relative simplicial chains of `(Cl U, Lk U)`: the basis in degree `p` is
/// the `p`-simplices of `U`.
pub fn relative_chain_complex<F: Field>(
    f: &F,
    space: &FiniteSpace,
    u: &Subspace,
) -> Result<ChainComplex<F::Elem>> {
    if !space.is_face_poset() {
        return Err(Error::Precondition(
            "simplicial chains need the face poset of a complex".into(),
        ));
    }
    if !space.is_open(u) {
        return Err(Error::Precondition("relative chains need an open set".into()));
    }
    let mut generators = vec![Vec::new(); degrees_of(space)];
    for x in u.iter() {
        let s = space.label(x).unwrap();
        generators[s.dim()].push(vec![x]);
    }
    let mut boundaries = Vec::with_capacity(generators.len());
    for p in 0..generators.len() {
        let rows = if p == 0 { 0 } else { generators[p - 1].len() };
        let mut m = Matrix::zeros(f, rows, generators[p].len());
        if p > 0 {
            let index: HashMap<usize, usize> = generators[p - 1]
                .iter()
                .enumerate()
                .map(|(i, g)| (g[0], i))
                .collect();
            for (j, g) in generators[p].iter().enumerate() {
                let s = space.label(g[0]).unwrap();
                for (i, face) in s.boundary_faces() {
                    let fx = space.index_of(&face).unwrap();
                    if let Some(&row) = index.get(&fx) {
                        let sign = if i % 2 == 0 { f.one() } else { f.neg(&f.one()) };
                        m.set(row, j, sign);
                    }
                }
            }
        }
        boundaries.push(m);
    }
    let cc = ChainComplex {
        generators,
        boundaries,
    };
    Ok(cc)
}

/// Relative chains of the order complex: chains `a_0 < ... < a_p` whose top
/// element lies in `U`.
pub fn order_chain_complex<F: Field>(
    f: &F,
    space: &FiniteSpace,
    u: &Subspace,
) -> Result<ChainComplex<F::Elem>> {
    if !space.is_open(u) {
        return Err(Error::Precondition("relative chains need an open set".into()));
    }
    let mut generators: Vec<Vec<Generator>> = vec![Vec::new(); degrees_of(space)];
    for top in u.iter() {
        let mut stack = vec![vec![top]];
        while let Some(chain) = stack.pop() {
            let low = chain[0];
            for z in space.strictly_below(low).iter() {
                let mut longer = Vec::with_capacity(chain.len() + 1);
                longer.push(z);
                longer.extend_from_slice(&chain);
                stack.push(longer);
            }
            generators[chain.len() - 1].push(chain);
        }
    }
    for g in generators.iter_mut() {
        g.sort_unstable();
    }
    Ok(assemble(f, generators, u))
}

/// Builds the chain complex for `U` in the requested model.
pub fn chain_complex<F: Field>(
    f: &F,
    space: &FiniteSpace,
    u: &Subspace,
    model: ChainModel,
) -> Result<ChainComplex<F::Elem>> {
    match model {
        ChainModel::Simplicial => relative_chain_complex(f, space, u),
        ChainModel::OrderComplex => order_chain_complex(f, space, u),
    }
}

#[derive(Clone, Debug)]
struct HomologyDegree<E> {
    reps: Vec<Vec<E>>,
    boundary_rank: usize,
    /// Solves against the columns `[boundary basis | reps]`.
    solver: ColumnSolver<E>,
}

/// Homology with a chosen basis of cycle representatives in each degree.
#[derive(Clone, Debug)]
pub struct GradedSpace<E> {
    degrees: Vec<HomologyDegree<E>>,
}

impl<E: Clone> GradedSpace<E> {
    pub fn dims(&self) -> Vec<usize> {
        self.degrees.iter().map(|d| d.reps.len()).collect()
    }

    pub fn dim(&self, p: usize) -> usize {
        self.degrees.get(p).map_or(0, |d| d.reps.len())
    }

    pub fn is_zero(&self) -> bool {
        self.degrees.iter().all(|d| d.reps.is_empty())
    }

    /// Cycle representatives in degree `p`, as coefficient vectors over the generators.
    pub fn representatives(&self, p: usize) -> &[Vec<E>] {
        &self.degrees[p].reps
    }

    /// Coordinates of the class of `cycle` in the chosen basis; `None` if
    /// `cycle` is not a cycle.
    pub fn coordinates<F: Field<Elem = E>>(&self, f: &F, p: usize, cycle: &[E]) -> Option<Vec<E>> {
        let d = &self.degrees[p];
        let x = d.solver.solve(f, cycle)?;
        Some(x[d.boundary_rank..].to_vec())
    }
}

/// Homology of a chain complex; representatives extend a boundary basis to a
/// cycle basis, scanning generators in their deterministic order.
pub fn homology<F: Field>(f: &F, cc: &ChainComplex<F::Elem>) -> GradedSpace<F::Elem> {
    let n = cc.num_degrees();
    let degrees = (0..n)
        .map(|p| {
            let rows = cc.generators[p].len();
            let cycles = kernel(f, &cc.boundaries[p]);
            let boundary_basis: Vec<Vec<F::Elem>> = if p + 1 < n {
                let next = &cc.boundaries[p + 1];
                let mut r = next.clone();
                rref(f, &mut r).into_iter().map(|c| next.column(c)).collect()
            } else {
                Vec::new()
            };
            let nb = boundary_basis.len();
            let mut stacked = boundary_basis.clone();
            stacked.extend(cycles.iter().cloned());
            let mut m = Matrix::from_columns(f, rows, &stacked);
            let reps: Vec<Vec<F::Elem>> = rref(f, &mut m)
                .into_iter()
                .filter(|&c| c >= nb)
                .map(|c| cycles[c - nb].clone())
                .collect();
            let mut basis = boundary_basis;
            basis.extend(reps.iter().cloned());
            let solver = ColumnSolver::new(f, &Matrix::from_columns(f, rows, &basis));
            HomologyDegree {
                reps,
                boundary_rank: nb,
                solver,
            }
        })
        .collect();
    GradedSpace { degrees }
}

/// A map on homology, one matrix per degree (target dim × source dim).
#[derive(Clone, Debug, PartialEq)]
pub struct InducedMap<E> {
    matrices: Vec<Matrix<E>>,
}

impl<E: Clone> InducedMap<E> {
    pub fn matrix(&self, p: usize) -> &Matrix<E> {
        &self.matrices[p]
    }

    pub fn num_degrees(&self) -> usize {
        self.matrices.len()
    }

    pub fn compose<F: Field<Elem = E>>(&self, f: &F, first: &InducedMap<E>) -> InducedMap<E> {
        InducedMap {
            matrices: self
                .matrices
                .iter()
                .zip(&first.matrices)
                .map(|(a, b)| a.mul(f, b))
                .collect(),
        }
    }
}

/// True iff every degree is square of full rank.
pub fn is_isomorphism<F: Field>(f: &F, m: &InducedMap<F::Elem>) -> bool {
    m.matrices
        .iter()
        .all(|a| a.rows() == a.cols() && crate::linalg::rank(f, a) == a.rows())
}

/// Local homology of every minimal open neighborhood of a space.
#[derive(Clone, Debug)]
pub struct LocalHomology<F: Field> {
    field: F,
    model: ChainModel,
    generators: Vec<Vec<Vec<Generator>>>,
    groups: Vec<GradedSpace<F::Elem>>,
}

impl<F: Field> LocalHomology<F> {
    /// Computes `L(B_x)` for every element, in parallel.
    pub fn new(field: F, space: &FiniteSpace, model: ChainModel) -> Result<Self> {
        if model == ChainModel::Simplicial && !space.is_face_poset() {
            return Err(Error::Precondition(
                "simplicial chains need the face poset of a complex".into(),
            ));
        }
        let per_element: Vec<(Vec<Vec<Generator>>, GradedSpace<F::Elem>)> = (0..space.len())
            .into_par_iter()
            .map(|x| {
                let u = space.min_open_nbhd(x);
                let cc = chain_complex(&field, space, &u, model).expect("B_x is open");
                let h = homology(&field, &cc);
                (cc.generators, h)
            })
            .collect();
        let (generators, groups) = per_element.into_iter().unzip();
        Ok(LocalHomology {
            field,
            model,
            generators,
            groups,
        })
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn model(&self) -> ChainModel {
        self.model
    }

    pub fn group(&self, x: usize) -> &GradedSpace<F::Elem> {
        &self.groups[x]
    }

    pub fn dims(&self, x: usize) -> Vec<usize> {
        self.groups[x].dims()
    }

    /// The restriction `L(B_x) → L(B_y)` for `x ≤ y`: project chains onto the
    /// generators of `B_y` and read off homology coordinates.
    pub fn induced_restriction(
        &self,
        space: &FiniteSpace,
        x: usize,
        y: usize,
    ) -> Result<InducedMap<F::Elem>> {
        if !space.leq(x, y) {
            return Err(Error::Precondition(format!(
                "{} is not below {}",
                space.name(x),
                space.name(y)
            )));
        }
        let f = &self.field;
        let (src, dst) = (&self.groups[x], &self.groups[y]);
        let matrices = (0..src.degrees.len())
            .map(|p| {
                let target_index: HashMap<&Generator, usize> = self.generators[y][p]
                    .iter()
                    .enumerate()
                    .map(|(i, g)| (g, i))
                    .collect();
                let columns: Vec<Vec<F::Elem>> = src
                    .representatives(p)
                    .iter()
                    .map(|rep| {
                        let mut projected = vec![f.zero(); target_index.len()];
                        for (g, c) in self.generators[x][p].iter().zip(rep) {
                            if let Some(&i) = target_index.get(g) {
                                projected[i] = c.clone();
                            }
                        }
                        dst.coordinates(f, p, &projected)
                            .expect("projection of a relative cycle is a cycle")
                    })
                    .collect();
                Matrix::from_columns(f, dst.dim(p), &columns)
            })
            .collect();
        Ok(InducedMap { matrices })
    }

    /// `δ(x ≤ y)`: whether the restriction is an isomorphism.
    pub fn is_iso(&self, space: &FiniteSpace, x: usize, y: usize) -> Result<bool> {
        let (a, b) = (self.dims(x), self.dims(y));
        if a != b {
            return Ok(false);
        }
        Ok(is_isomorphism(&self.field, &self.induced_restriction(space, x, y)?))
    }
}
