//! Dense and iterative symmetric eigensolvers.

mod dense;
mod lanczos;

pub use dense::{residual_norm, symmetric_eigen, tridiagonal_eigen, Matrix, SymmetricEigen};
pub use lanczos::{largest_eigenpairs, EigenPairs, LanczosConfig, LinearOperator};
pub(crate) use lanczos::{dot, norm};
