//! Regular graph constraints: graphs over two successor relations with a
//! root and a null node, read as constraints satisfied by every structure
//! that maps homomorphically into them.

pub mod closure;
pub mod emsol;
pub mod families;
pub mod format;
pub mod graph;
pub mod heap_sat;
pub mod hom;
pub mod implication;
pub mod paths;
pub mod pcp;

pub use graph::{Graph, GraphBuilder, GraphError, NodeId, Rel, NULL, ROOT};
pub use hom::{check_hom, exists_hom, find_hom, Homomorphism};
