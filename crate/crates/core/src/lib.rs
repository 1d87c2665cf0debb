//! Quantum Tanner codes on left-right Cayley complexes.
//!
//! Bit-packed GF(2) algebra, binary linear codes, finite groups, the square
//! complex with its local views, classical Tanner codes (including the
//! locally testable code on the square graph), the CSS code pair, the
//! mismatch decoder, and robustness checks for dual tensor codes.

pub mod code;
pub mod complex;
pub mod css;
pub mod decoder;
pub mod error;
pub mod gf2;
pub mod group;
pub mod robust;
pub mod tanner;

pub use code::{dual_tensor_code, tensor_code, GridWord, LinearCode};
pub use error::{Error, Result};
pub use gf2::{BitMatrix, BitVector};
