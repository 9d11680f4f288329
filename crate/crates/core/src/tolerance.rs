//! Numerical tolerances shared by the library checks and the test suites.
//!
//! Every threshold used to accept or reject a floating-point invariant lives
//! here so that the library's fail-fast checks and the tests agree.

/// Sum-to-one slack for probability vectors.
pub const PROBABILITY_SUM: f64 = 1e-12;

/// Hermiticity, PSD and unit-trace checks on density matrices.
pub const DENSITY_MATRIX: f64 = 1e-10;

/// Purity threshold for the `is_pure` flag: `trace(rho^2) >= 1 - PURITY`.
pub const PURITY: f64 = 1e-9;

/// Spectrum normalisation check in state analysis.
pub const SPECTRUM_SUM: f64 = 1e-9;

/// Idempotence, Hermiticity, orthogonality and completeness of projectors
/// (Frobenius norm, relative to the operator norm where stated).
pub const PROJECTOR: f64 = 1e-10;

/// `trace(P_lambda) = dim U * d_lambda`, absolute.
pub const PROJECTOR_TRACE: f64 = 1e-8;

/// Cross-block products on the doubled chain.
pub const CROSS_BLOCK: f64 = 1e-8;

/// Block traces `trace(Pi (P^A x P^B)) = (dim U)^2`, absolute.
pub const BLOCK_TRACE: f64 = 1e-6;

/// Agreement between the direct trace, the block sum and the
/// complete-homogeneous oracle for the optimal acceptance probability.
pub const P_OPT_AGREEMENT: f64 = 1e-8;

/// Slack on the ordering `p_opt <= p_star <= p_opt + slack` and on
/// `0 <= m_lambda <= p_lambda <= 1`.
pub const SANDWICH: f64 = 1e-9;

/// Probabilities within this distance of one are reported with exponent 0.
pub const UNIT_PROBABILITY: f64 = 1e-12;

/// Eigenvalues of an input state at or below this value are dropped by the
/// factored engine.
pub const EIGENVALUE_CUTOFF: f64 = 1e-13;
