//! Latin squares with disjoint subsquares: verification, outline squares,
//! explicit constructions, a necessary-condition test and search oracles.

pub mod constructions;
pub mod error;
pub mod fixtures;
pub mod flow;
pub mod freq_array;
pub mod io;
pub mod latin;
pub mod necessary;
pub mod outline;
pub mod solver;

pub use error::{Error, Result};
pub use latin::{Composition, LatinSquare, PartialLatinSquare, Partition, SubsquareSpec, Symbol};
pub use outline::OutlineRectangle;
