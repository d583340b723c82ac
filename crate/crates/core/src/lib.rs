//! Chain-level triangulated calculus over finite-dimensional commutative
//! algebras: complexes, exact triangles, homotopy-cartesian squares, the
//! tensor-product octahedral construction and level witnesses.

pub mod algebra;
pub mod chain_map;
pub mod cofibration;
pub mod complex;
pub mod cone;
pub mod coordinates;
pub mod error;
pub mod field;
pub mod homotopy;
pub mod json;
pub mod kx2;
pub mod level;
pub mod matrix;
pub mod minimize;
pub mod module;
pub mod random;
pub mod report;
pub mod rmatrix;
pub mod square;
pub mod suites;
pub mod tensor;
pub mod triangle;
pub mod verdier;

pub use error::{Error, Result};
pub use field::PrimeField;
pub use matrix::KMatrix;
