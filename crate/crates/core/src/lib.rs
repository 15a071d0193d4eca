//! Sheaf-theoretic stratifications of finite T0-spaces.
//!
//! Spaces are finite posets with the Alexandroff topology, usually face
//! posets of simplicial complexes. A sheaf is presented through a
//! [`SheafOracle`](sheaf::SheafOracle) that reports whether restrictions
//! between minimal open neighborhoods are isomorphisms; the
//! [`stratify`] module peels off strata on which the sheaf is locally constant.

pub mod error;
pub mod field;
pub mod fixtures;
pub mod geometry;
pub mod homology;
pub mod io;
pub mod linalg;
pub mod sheaf;
pub mod space;
pub mod stratify;

pub use error::{Error, Result};
pub use field::FieldSpec;
pub use homology::ChainModel;
pub use sheaf::{ConstantSheaf, DeltaMap, LocalHomologySheaf, MaximalElementSheaf, SheafOracle};
pub use space::{build_from_maximal_simplices, FiniteSpace, Simplex, SimplicialComplex, Subspace};
pub use stratify::{
    coarsest_stratification, compare_coarseness, is_constructible, lex_compare,
    minimal_homogeneous_stratification, Coarseness, Stratification,
};
