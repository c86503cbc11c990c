//! Exact recognition of tame and wild linear K[z]-automorphisms of the free
//! associative algebra K<x_1, ..., x_n, z>.
//!
//! A linear K[z]-endomorphism sends each x_j to a sum of terms `b(z) x_i c(z)`.
//! Its Jacobian lives in `GL_n(K[z1, z2])` exactly when it is an automorphism,
//! and for n = 2 it is tame exactly when the Jacobian lies in `GE_2(K[z1, z2])`.
//! Every answer comes with a certificate that can be checked independently:
//! elementary transcripts for tame inputs, a stuck reduced matrix for wild
//! ones, and a 3x3 decomposition showing stable tameness.

pub mod autgroup;
pub mod cli;
pub mod error;
pub mod expr;
pub mod freealg;
pub mod jacobian;
pub mod matgroup;
pub mod poly;
pub mod scalar;

pub use autgroup::{
    abelianized_tame_decomposition, builtin, invert_linear, is_automorphism_linear, is_tame, matrix_to_endo,
    recompose, stable_tame, AutoFactor, StableTame, TameVerdict,
};
pub use error::{Error, Result};
pub use freealg::{compose, AlgebraCtx, KzEndo, Letter, NCPoly, Word, XDegreeSplit};
pub use jacobian::{abelianize_endo, jacobian_full, jacobian_linear, partial_derivative, TensorElem};
pub use matgroup::{
    ge2_decide, gl2_univariate_decompose, stabilize3, verify_transcript, Factor, Ge2Verdict, PolyMatrix, Stabilized,
    Transcript,
};
pub use poly::{term_divide, CommPoly, Monomial, MonomialOrder, OrderKind, Ring};
pub use scalar::{Field, Scalar};
