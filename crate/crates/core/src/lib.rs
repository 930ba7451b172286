//! Exact arithmetic for q-linearized polynomials over finite fields and
//! rational function fields: minimal linearized multiples, projective
//! polynomials, root spaces, and evaluation maps on symmetric powers.

pub mod cli;
pub mod error;
pub mod ffield;
pub mod field;
pub mod linalg;
pub mod linearize;
pub mod linpoly;
pub mod ratfun;
pub mod rootspace;
pub mod symmod;
pub mod text;
pub mod upoly;

pub use error::{Error, Result};
pub use ffield::{FfElem, FiniteField};
pub use field::Field;
pub use linalg::Matrix;
pub use linpoly::LinPoly;
pub use ratfun::{RatFun, RationalFunctionField};
pub use upoly::Poly;

/// Polynomials over a finite field.
pub type GfPoly = Poly<FiniteField>;
/// Polynomials over `F_q(t)`.
pub type RatPoly = Poly<RationalFunctionField>;
