//! Exact small-scale simulation of the LOCC test of purity.
//!
//! Given `n` copies of a bipartite state `rho` on `C^d (x) C^d`, the globally
//! optimal one-sided test for purity projects onto the symmetric subspace of
//! the `n` copies. The LOCC protocol modelled here first lets each party
//! measure its Schur-Weyl block label `lambda`, then runs a test for the
//! maximally entangled state on the permutation-module part of the matched
//! blocks. This crate computes both acceptance probabilities exactly from
//! dense operators, together with the combinatorial data (Young indices,
//! irrep dimensions, characters, Schur polynomials) that drive them.
//!
//! Module map:
//!
//! - [`partitions`]: Young indices, dimension formulas, characters,
//!   symmetric polynomials, entropies and type-class bounds.
//! - [`tensorops`]: dense complex operators, permutation operators and the
//!   symmetrizer.
//! - [`schurweyl`]: isotypic projectors and the symmetric-subspace projector
//!   on the doubled chain.
//! - [`states`]: bipartite state specifications, analysis, tensor powers.
//! - [`protocol`]: block statistics, `P_opt`, `P_*`, slack bound, exponents.
//! - [`cli`]: the `locc-purity` command-line front end.
//!
//! A narrative guide with runnable listings lives in the `book/` directory.

pub mod cli;
pub mod error;
pub mod partitions;
pub mod protocol;
pub mod schurweyl;
pub mod states;
pub mod tensorops;
pub mod tolerance;

pub use error::{Error, Result};
pub use num_complex::Complex64;
