//! Locking-free mixed finite elements for Reissner–Mindlin plates.
//!
//! Transverse displacement lives in the Crouzeix–Raviart space, rotations in
//! continuous P1, and the scaled shear stress in a Lagrange multiplier space
//! that is either continuous P1 or the biorthogonal (dual) family. With the
//! dual family the multiplier can be condensed out, leaving a symmetric
//! positive definite system.

// Index loops mirror the element formulas; negated comparisons reject NaN.
#![allow(clippy::needless_range_loop, clippy::neg_cmp_op_on_partial_ord)]

pub mod assembly;
pub mod error;
pub mod fields;
pub mod mesh;
pub mod quadrature;
pub mod solver;
pub mod spaces;
pub mod sparse;
pub mod verify;

pub use assembly::{assemble, BlockSystem, PlateModel};
pub use error::{PlateError, Result};
pub use mesh::{load_mesh, save_mesh, Mesh, VertexSets};
pub use solver::{condense, recover_shear, solve, solve_condensed, solve_saddle, Solution, SolverChoice};
pub use spaces::{BoundaryCondition, Discretization, DofMap, MultiplierFamily, ReferenceBasis, SpaceKind};
