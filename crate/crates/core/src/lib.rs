//! Exact arithmetic toolkit for circulant nut graphs.
//!
//! The crate is organised bottom-up:
//!
//! * [`poly`]: dense and sparse integer polynomials, cyclotomic polynomials
//!   and the residue reductions modulo `x^b - 1` / `x^q + 1`.
//! * [`cyclotomy`]: decides which cyclotomic polynomials divide a given
//!   integer polynomial, either by brute force or with lacunary pruning.
//! * [`circulant`]: generator sets, the eigenvalue polynomial and the two
//!   independent nut-graph deciders (spectral and exact kernel).
//! * [`families`]: the `D'` / `D''` families, their six-term polynomials and
//!   the residue tables.
//! * [`search`]: exhaustive existence catalog by order and degree.
//! * [`cli`]: the `nutcirc` command line front end.

pub mod circulant;
pub mod cli;
pub mod cyclotomy;
mod error;
pub mod families;
pub mod linalg;
pub mod numtheory;
pub mod poly;
pub mod search;
mod serde_big;

pub use error::{Error, Result};
