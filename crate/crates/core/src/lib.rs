//! Numerical verification toolkit for Riemannian maps into almost-contact
//! metric manifolds.
//!
//! Charts, metrics, structure tensors and maps are declared as expression
//! strings; every derivative is taken exactly with nested dual numbers.
//! The modules build on each other bottom-up:
//!
//! - [`expr`]: scalar-field expression language and second-order jets.
//! - [`geometry`]: single-chart metric geometry, connections, geodesics.
//! - [`contact`]: almost-contact axioms and trans-Sasakian type fitting.
//! - [`rmap`]: differentials, splittings and the second fundamental form.
//! - [`clairaut`]: anti-invariance, Clairaut checks and theorem residuals.

pub mod clairaut;
pub mod contact;
pub mod error;
pub mod expr;
pub mod geometry;
pub mod linalg;
pub mod rmap;

pub use error::{Error, Result};
