//! Coefficient-level numerics for the weighted composition semigroup
//! `W_n f(z) = (1 + z + ... + z^{n-1}) f(z^n)` and its adjoints on the
//! Hardy space H^2 of the unit disk.
//!
//! Everything acts on truncated Maclaurin coefficient vectors carrying
//! explicit trust and tail metadata, so truncation error is a quantity a
//! caller can inspect and test, never an accident of the representation.
//! No boundary values and no zeta values are ever evaluated; all
//! experiments are coefficient arithmetic.
//!
//! Module map:
//! - [`hardy`]: the truncated vector type and its inner-product arithmetic.
//! - [`semigroup`]: exact actions of `W_n`, `W_n^*` and their iterates.
//! - [`families`]: closed-form eigenvector families (`f_k`, `g_k`, the
//!   kernels `kappa_s`, the log-weight integrals `h_k`) with stored tail
//!   bounds.
//! - [`dynamics`]: orbit records, periodic points of the adjoint, Gram
//!   rank probes, spectral radius and expansivity experiments.
//! - [`rh`]: distance-from-constants-to-span experiments over the `h_k`
//!   family, with a dual solver cross-check.

pub mod dynamics;
pub mod error;
pub mod families;
pub mod hardy;
pub mod rh;
pub mod semigroup;

pub use error::Error;
pub use hardy::CoeffVector;
