pub mod chains;
pub mod digraph;
pub mod error;
pub mod homology;
pub mod int;
pub mod linalg;
pub mod spectral;

pub use digraph::{Digraph, DigraphMap, ExtInt};
pub use error::{Error, Result};
pub use int::Int;
