//! Independent brute-force oracle: predicates, component graphs, enumeration.

pub mod component;
pub mod enumerate;
pub mod predicates;

pub use component::{component_graph, ComponentEdge, ComponentTree, ComponentVertex};
pub use enumerate::*;
pub use predicates::*;
