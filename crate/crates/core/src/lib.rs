//! Exact computations with n-fold matrix factorizations of a regular
//! normal element `ω` over univariate (skew) polynomial rings.

pub mod adjunction;
pub mod chain;
pub mod cli;
pub mod error;
pub mod factorization;
pub mod field;
pub mod functors;
pub mod gamma;
pub mod homotopy;
pub mod json;
pub mod laws;
pub mod linalg;
pub mod matrix;
pub mod normal_form;
pub mod presentation;
pub mod random;
pub mod recollement;
pub mod solve;
pub mod stable;
pub mod ring;

pub use error::{Error, Result};
pub use factorization::{FactorMorphism, NFactorization};
pub use field::{Field, FieldSpec, Scalar};
pub use matrix::TwistedMatrix;
pub use ring::{Poly, Ring, RingElem, RingRef};
