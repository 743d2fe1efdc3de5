//! String C-groups over permutation groups.
//!
//! Layers, bottom up: [`perm`] and [`group`] (permutations, stabilizer
//! chains, blocks), [`sggi`] (string groups generated by involutions),
//! [`prgraph`] (permutation representation graphs), [`families`] (the graph
//! catalog), [`analysis`] (block actions and kernel vectors) and
//! [`classify`] (verification reports and exhaustive search).

pub mod analysis;
pub mod blocks;
pub mod classify;
pub mod families;
pub mod group;
pub mod perm;
pub mod prgraph;
pub mod sggi;

pub use blocks::BlockSystem;
pub use group::PermGroup;
pub use perm::{parse_perm, PermError, Permutation};
pub use sggi::{make_sggi, IndexSet, IntersectionCheck, IntersectionMode, SchlafliSymbol, Sggi, SggiError};
pub use prgraph::{parse_graph, CanonicalForm, Edge, GraphError, PRGraph};
