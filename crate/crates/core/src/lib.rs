//! Automorphisms of free groups, their realizations on finite graphs, and the
//! finite matrix groups that show up as their abelianized images.

pub mod abelian;
pub mod endo;
pub mod error;
pub mod graph;
pub mod modgroup;
pub mod scenario;
pub mod word;

pub use abelian::{abelianize, congruence_level_member, is_torelli, mod_reduce, IntMatrix, ResidueMatrix};
pub use endo::{is_basis, nielsen_reduce, Caps, Endo, NamedGenerator, NielsenMove, NielsenResult, OrderResult};
pub use error::{Error, Result};
pub use graph::{
    change_basis, collapse_forest, induced_endo, induced_out_rep, spanning_tree_presentation, EdgePath, Graph,
    GraphAut, Pi1Presentation,
};
pub use modgroup::{FiniteGroupTable, PackedMatrix, SplitResult, Subspace, TraceZeroSpace};
pub use word::{Letter, Word};
