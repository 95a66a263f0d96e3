//! Finite median algebras embedded in hypercubes.

mod algebra;
mod canonical;
mod halfspace;
mod quotient;
mod superext;
mod table;

pub use algebra::{ConvexSet, Halfspace, IndexSet, MedianAlgebra};
pub use canonical::canonicalize;
pub use halfspace::{
    halfspaces, halfspaces_brute_force, oriented_halfspaces, separate_convex, BRUTE_FORCE_LIMIT,
};
pub use quotient::quotient_by_halfspaces;
pub(crate) use quotient::quotient_map;
pub use superext::{
    maximal_linked_systems, superextension, superextension_bounded, MaximalLinkedSystem,
    DEFAULT_GROUND_BOUND, MAX_GROUND,
};
pub use table::{embed_median_table, from_median_table, to_median_table};
