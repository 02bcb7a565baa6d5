//! Sparse non-Hermitian random networks with Weibull weights.
//!
//! The crate samples `Z = X ⊙ Y` where `X` is the adjacency matrix of a
//! directed Erdős–Rényi graph with `p = d/n` and `Y` has i.i.d. symmetric
//! Weibull entries, reduces such networks by norm-controlled transforms,
//! computes largest singular values, evaluates the closed-form typical
//! values and large-deviation rate functions, and runs seeded Monte Carlo
//! experiments against them.

pub mod cli;
pub mod error;
pub mod experiments;
pub mod io;
pub mod network;
pub mod randgen;
pub mod spectral;
pub mod structure;
pub mod theory;
pub mod transforms;

pub use error::{Error, Result};
pub use network::{ComponentStats, DenseMatrix, DirectedNetwork, Edge, Entry, MatrixView, UndirectedNetwork};
pub use randgen::{RngHandle, WeibullSpec};
pub use spectral::{Engine, NormResult};
