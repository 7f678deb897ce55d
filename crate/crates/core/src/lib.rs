//! Chern forms, Schur forms and Chern numbers from explicit curvature data,
//! with checks of the nonnegativity and bound statements that hold for
//! curvature of the factored shape `Ω = A ∧ Āᵗ`.
//!
//! Pointwise statements about differential forms are checked by seeded
//! sampling ([`forms::nonnegative_sampled`]); polynomial identities and
//! characteristic numbers are computed exactly.

pub mod chern;
pub mod curvature;
pub mod error;
pub mod forms;
pub mod literal;
pub mod matrix;
pub mod models;
pub mod polynomial;
pub mod random;
pub mod scalar;
pub mod schur;

pub use error::{Error, Result};
pub use forms::{Form, Monomial, TangentVector, VerdictReport};
pub use scalar::{Coeff, GaussianRational, ScalarMode};
