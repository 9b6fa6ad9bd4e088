//! Exact exterior algebra on R^8 for comparing Kahler and Spin(7) geometry.
//!
//! The crate builds the standard SU(4) and Spin(7) structures, splits forms
//! into their irreducible pieces, rotates Kahler forms inside the Spin(7)
//! family, evaluates Bogomolov-type bounds on (2,2)-classes and runs the
//! period-matrix pipeline for rotated Weil-type tori.
//!
//! Everything is generic over [`scalar::Coeff`]: [`scalar::Scalar`] gives
//! exact answers in a small number tower, `Complex64` gives float answers.

pub mod bogomolov;
pub mod classes;
pub mod error;
pub mod exterior;
pub mod json;
pub mod linalg;
pub mod poly;
pub mod rotation;
pub mod scalar;
pub mod spin7;
pub mod torus;

pub use error::{Error, Result};
pub use exterior::Form;
pub use num_complex::Complex64;
pub use scalar::{Coeff, FieldSpec, Scalar, Q};
