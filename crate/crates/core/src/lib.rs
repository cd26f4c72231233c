//! Exact calculus on diolic algebras `𝒜 = A ⊕ P`, with `A = ℚ[x1..xn]` and
//! `P = Aᵐ` free on `e_1..e_m`.
//!
//! Slots for variables and basis sections are 0-based in the API; the text
//! grammar writes them 1-based (`x1`, `k2`).

#![allow(clippy::needless_range_loop)]

pub mod complexes;
pub mod diffop;
pub mod diole;
pub mod diolic_diffops;
pub mod error;
pub mod linalg;
pub mod multider;
pub(crate) mod parse;
pub mod poly;
pub mod sample;
pub mod symbols;

pub use error::{Error, Result};
pub use poly::{monomials_up_to, MultiIndex, Poly, PolyMat, PolyVec, Rational};
pub use diffop::{MatrixOp, ScalarOp, VectorField};
