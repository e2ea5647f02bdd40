//! Exact scalars: integers, rationals, polynomials, number fields and finite fields.

pub mod factor;
pub mod finite_field;
pub mod integer;
pub mod modp;
pub mod numfield;
pub mod poly;
pub mod rational;
pub mod scalar;

pub use finite_field::{FFElement, FField, FiniteField};
pub use numfield::{Embedding, Field, NFElement, NumberField};
pub use rational::Rational;
pub use scalar::Scalar;
