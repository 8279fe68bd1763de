//! Two-generator unipotent subgroups of PU(2,1): Siegel-model arithmetic, the
//! discreteness region of the parameter square, isometric spheres, Ford-domain
//! combinatorics and the limit-group octahedron.

pub mod certify;
pub mod cli;
pub mod error;
pub mod ford;
pub mod limit;
pub mod moduli;
pub mod poly;
pub mod render;
pub mod siegel;
pub mod spheres;

pub use error::{Error, Result};
