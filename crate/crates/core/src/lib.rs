//! Degradability, antidegradability and their conjugate variants for
//! finite-dimensional quantum channels.
//!
//! Channels are carried in three equivalent forms (Kraus set, Choi matrix,
//! superoperator). The superoperator acts from the right on row-flattened
//! density matrices, so composition `first then second` is the matrix product
//! `first.matrix() * second.matrix()`.
//!
//! The decision engine in [`degradability`] computes the pseudoinverse
//! candidate for a degrading map and only reports a negative verdict when the
//! solution of the composition equation is unique. In the non-unique regime a
//! kernel-family search can upgrade the verdict to a positive one, but the
//! absence of a certificate is never reported as non-existence.
//!
//! Index conventions (0-based, row-major throughout):
//!
//! * `row_flatten(A)[k * cols + mu] = A[(k, mu)]`
//! * Choi matrix `R[(k * d_out + l, mu * d_out + nu)]` is the coefficient of
//!   `|k><mu|_A (x) |l><nu|_B`
//! * superoperator `M[(k * d_in + mu, l * d_out + nu)] = R[(k * d_out + l, mu * d_out + nu)]`

pub mod capacity;
pub mod channel;
pub mod degradability;
pub mod error;
pub mod io;
pub mod linalg;
pub mod sample;
pub mod zoo;

pub use channel::{Channel, ChoiMatrix, DensityMatrix, KrausSet, SuperOp};
pub use degradability::{Mode, Status, Verdict};
pub use error::{Error, Result};
pub use linalg::{ComplexMatrix, ComplexVector, Tolerance, C64};
