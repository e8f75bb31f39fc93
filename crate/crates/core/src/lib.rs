pub mod algebra;
pub mod bgg;
pub mod ci_ops;
pub mod complexes;
pub mod error;
pub mod ext_rmodule;
pub mod field_poly;
pub mod fixtures;
pub mod groebner;
pub mod homotopy;
pub mod linalg;
pub mod linmod;
pub mod resolution;
pub mod tor_emodule;

pub use error::{AlgebraError, Result};
