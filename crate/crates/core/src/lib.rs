//! Exact computation of Bianchi period polynomial spaces, Heilbronn Hecke operators,
//! Hecke eigensystems and congruences between them.

pub mod arith;
pub mod congruence;
pub mod error;
pub mod hecke;
pub mod json;
pub mod linalg;
pub mod pipeline;
pub mod presentation;
pub mod quad;
pub mod spaces;
pub mod spectral;
pub mod verify;
pub mod weight;

pub use arith::{FFElement, Field, NFElement, NumberField, Rational, Scalar};
pub use error::{Error, Result};
pub use linalg::{Matrix, Subspace};
pub use quad::ideal::{IdealLattice, PrimeIdeal};
pub use quad::QuadInt;
pub use spaces::SpaceBundle;
pub use weight::GMatrix;
