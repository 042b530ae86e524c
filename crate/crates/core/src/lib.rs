//! Arithmetic for locally compact contraction groups built from truncated
//! Laurent series over `Z/p^m`: equivariant cocycles, their central
//! extensions, fingerprints, equivariant sections, and classification
//! invariants.

pub mod classify;
pub mod cli;
pub mod cocycle;
pub mod error;
pub mod extension;
pub mod fingerprint;
pub mod random;
pub mod section;
pub mod selftest;
pub mod series;
pub mod text;

pub use error::{Error, Result};
pub use series::{AbsValue, Modulus, TruncSeries};
