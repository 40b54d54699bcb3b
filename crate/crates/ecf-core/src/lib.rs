//! Exact arithmetic for even (ECF) and backward (BCF) continued fractions of
//! real quadratic irrationals: Gauss shifts and their periodic points, the
//! word/matrix dictionary, counting engines and the supporting number theory.
//!
//! The crate is `no_std` and only needs `alloc`.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod census;
pub mod kloosterman_check;
pub mod cf_shifts;
pub mod mat2;
pub mod pell_theta;
pub mod qi_core;
pub mod totient;
pub mod word_matrix;

pub use mat2::Mat2Z;
pub use qi_core::{QuadValue, QuadraticIrrational, RootSign};
