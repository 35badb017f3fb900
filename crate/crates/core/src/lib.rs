//! Self-dual maximum-rank-distance codes over finite fields.
//!
//! The crate is organized bottom-up:
//!
//! - [`ffield`]: the tower F_p ⊆ F_q ⊆ F_{q^n}, Frobenius, trace, normal and dual bases.
//! - [`matfq`]: dense linear algebra over F_q and the trace form on matrices.
//! - [`rankcode`]: linear rank-metric codes, duals, distances and isometries.
//! - [`gabidulin`]: full-length Gabidulin codes and their structure matrices.
//! - [`selfdual`]: self-duality criteria and the explicit self-dualization of Gabidulin codes.
//! - [`cli`]: the `mrdkit` command-line front end.

pub mod cli;
pub mod error;
pub mod ffield;
pub mod gabidulin;
pub mod matfq;
pub mod rankcode;
pub mod selfdual;

pub use error::{Error, Result};
