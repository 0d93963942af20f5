//! Almost affine rank-metric codes and their q-matroids.

pub mod acceptance;
pub mod code;
pub mod constructions;
pub mod error;
pub mod field;
pub mod geometry;
pub mod invariants;
pub mod linalg;
pub mod ports;
pub mod qmatroid;
pub mod scope;
pub mod subspace;
pub mod tower;

pub use code::Code;
pub use error::{Error, Result};
pub use field::{Elem, Field, FieldSpec};
pub use qmatroid::QMatroid;
pub use scope::Scope;
pub use subspace::Subspace;
pub use tower::{Tower, TowerSpec};
