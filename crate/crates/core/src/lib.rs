//! Graph-encoded congruence inclusions: labeled graphs, the relations they
//! define on finite algebras, and the identity sets and checks built on them.

pub mod algebra;
pub mod canon;
pub mod cli;
pub mod condition;
pub mod error;
pub mod eval;
pub mod fixtures;
pub mod graph;
pub mod relation;
pub mod term;
pub(crate) mod union_find;
pub mod verify;

pub use algebra::{FiniteAlgebra, FreeAlgebra, FreeCaps, Operation, ToleranceClass};
pub use error::{Error, Result};
pub use graph::LabeledGraph;
pub use relation::FinRelation;
pub use term::Term;
