//! Relative differential geometry of parametric hypersurfaces.

pub mod dsl;
pub mod jet;
pub mod euclid;
pub mod harness;
pub mod linalg;
pub mod relative;
pub mod residual;
