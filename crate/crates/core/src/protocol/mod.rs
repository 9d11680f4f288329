//! Acceptance probabilities of the purity test on `rho^{(x)n}`.
//!
//! The globally optimal one-sided test projects onto the symmetric subspace
//! `Pi^n` of the `n` copies and accepts with `P_opt = trace(rho^{(x)n} Pi^n)`.
//!
//! The LOCC protocol:
//!
//! 1. each party measures its Schur-Weyl block label, `{P^A_lambda}` and
//!    `{P^B_mu}`; outcomes with `lambda != mu` reject;
//! 2. on a matched outcome `lambda` (probability `p_lambda`), run a test for
//!    the maximally entangled state of the two `V_lambda` factors, accepting
//!    with `(F + 1/d_lambda^2) / (1 + 1/d_lambda^2)` where `F` is the fidelity
//!    of the post-measurement state with that maximally entangled state.
//!
//! Because `Pi^n` restricted to the matched block `lambda` is
//! `1_{U_A} (x) 1_{U_B} (x) |Phi_lambda><Phi_lambda|`, the fidelity is
//! `F_lambda = m_lambda / p_lambda` with
//! `m_lambda = trace(rho^{(x)n} Q_lambda Pi^n Q_lambda)`,
//! `Q_lambda = P^A_lambda (x) P^B_lambda`. Summing `m_lambda` recovers `P_opt`.
//!
//! Two engines compute `(p_lambda, m_lambda)`:
//!
//! - [`Engine::Dense`] forms `rho^{(x)n}`, `Pi^n` and every `Q_lambda` as
//!   dense operators on the doubled chain and multiplies them out;
//! - [`Engine::Factored`] expands `rho = sum_k r_k |psi_k><psi_k|`, groups the
//!   product vectors of `rho^{(x)n}` by multiset of eigen-indices (all
//!   operators involved commute with copy permutations), and applies
//!   `P^A (x) P^B` to a vector reshaped as a `d^n x d^n` matrix `M` as
//!   `P^A M P^B^T`. Memory stays `O(d^{2n})` instead of `O(d^{4n})`.

mod dense;
mod factored;

use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::partitions::{complete_homogeneous, enumerate_partitions, hook_dim, weyl_dim, Partition};
use crate::states::{analyze, build_state, BipartiteStateSpec};
use crate::tensorops::{tensor_dim, DenseOperator, MemoryCap};
use crate::tolerance;

/// Largest doubled-chain dimension for which [`Engine::Auto`] picks the
/// dense engine.
pub const DENSE_AUTO_MAX_DIM: u128 = 256;

/// Probabilities at or below this are treated as an empty block: the
/// fidelity is undefined and the block contributes nothing to `P_*`.
pub const ZERO_PROBABILITY: f64 = 1e-12;

/// Acceptance probability of the maximally-entangled-state test on a state
/// with fidelity `fidelity` to `|Phi>` in dimension `d`:
/// `(F + 1/d^2) / (1 + 1/d^2)`.
pub fn tsuda_acceptance(fidelity: f64, d: u64) -> f64 {
    let c = 1.0 / (d as f64 * d as f64);
    (fidelity + c) / (1.0 + c)
}

pub(crate) fn serialize_extended<S: Serializer>(x: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    if x.is_finite() {
        s.serialize_f64(*x)
    } else if x.is_nan() {
        s.serialize_str("nan")
    } else if *x > 0.0 {
        s.serialize_str("inf")
    } else {
        s.serialize_str("-inf")
    }
}

/// Statistics of one matched block `lambda`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BlockStatistics {
    pub lambda: Partition,
    /// `trace(rho^{(x)n} (P^A_lambda (x) P^B_lambda))`.
    pub p_lambda: f64,
    /// `trace(rho^{(x)n} Q_lambda Pi^n Q_lambda)`.
    pub m_lambda: f64,
    /// `dim V_lambda`.
    pub d_lambda: u64,
    /// `dim U_lambda`.
    pub dim_u: u64,
    /// `m_lambda / p_lambda`, `None` for an empty block.
    pub fidelity: Option<f64>,
}

impl BlockStatistics {
    fn new(lambda: Partition, d: usize, p_lambda: f64, m_lambda: f64) -> Result<Self> {
        let to_u64 = |x: num_bigint::BigUint, what: &str| {
            x.to_u64()
                .ok_or_else(|| Error::invalid(format!("{what} of {lambda} exceeds 64 bits")))
        };
        let d_lambda = to_u64(hook_dim(&lambda), "d_lambda")?;
        let dim_u = to_u64(weyl_dim(&lambda, d)?, "dim U")?;
        let fidelity = (p_lambda > ZERO_PROBABILITY).then(|| m_lambda / p_lambda);
        Ok(BlockStatistics {
            lambda,
            p_lambda,
            m_lambda,
            d_lambda,
            dim_u,
            fidelity,
        })
    }

    /// Contribution `p_lambda * P_acc(F_lambda, d_lambda)` to `P_*`.
    pub fn acceptance(&self) -> f64 {
        match self.fidelity {
            Some(f) => self.p_lambda * tsuda_acceptance(f, self.d_lambda),
            None => 0.0,
        }
    }
}

/// `P_* = sum_lambda p_lambda (F_lambda + 1/d_lambda^2) / (1 + 1/d_lambda^2)`;
/// mismatched outcomes reject and empty blocks contribute nothing.
pub fn p_star(blocks: &[BlockStatistics]) -> f64 {
    blocks.iter().map(BlockStatistics::acceptance).sum()
}

/// `sum_lambda p_lambda / d_lambda^2`, the gap allowed between `P_*` and `P_opt`.
pub fn slack_bound(blocks: &[BlockStatistics]) -> f64 {
    blocks
        .iter()
        .map(|b| b.p_lambda / (b.d_lambda as f64 * b.d_lambda as f64))
        .sum()
}

/// `-(1/n) ln p`, exactly 0 for `p` within `1e-12` of one and `+inf` for `p <= 0`.
pub fn exponent(p: f64, n: usize) -> f64 {
    if (p - 1.0).abs() <= tolerance::UNIT_PROBABILITY {
        0.0
    } else if p <= 0.0 {
        f64::INFINITY
    } else {
        -p.ln() / n as f64
    }
}

/// How block statistics are computed.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Engine {
    /// Dense up to [`DENSE_AUTO_MAX_DIM`], factored above.
    #[default]
    Auto,
    Dense,
    Factored,
}

/// The engine and memory estimate chosen for one `(d, n)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Plan {
    pub engine: Engine,
    pub estimated_bytes: u128,
}

/// Raw per-block values plus the engine's own evaluation of `P_opt`.
pub(crate) struct EngineOutput {
    pub blocks: Vec<(Partition, f64, f64)>,
    pub p_opt_direct: f64,
}

/// Results for one `n`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TestReport {
    pub n: usize,
    /// `trace(rho^{(x)n} Pi^n)`.
    pub p_opt: f64,
    pub p_star: f64,
    pub slack: f64,
    /// `h_n(spectrum of rho)`.
    pub oracle_p_opt: f64,
    #[serde(serialize_with = "serialize_extended")]
    pub exponent_opt: f64,
    #[serde(serialize_with = "serialize_extended")]
    pub exponent_star: f64,
    /// `-ln p_1` for the largest eigenvalue `p_1` of `rho`.
    #[serde(serialize_with = "serialize_extended")]
    pub minus_log_p1: f64,
    pub blocks: Vec<BlockStatistics>,
}

/// Three evaluations of `P_opt` that must agree.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct POptEvaluation {
    /// `trace(rho^{(x)n} Pi^n)`.
    pub direct: f64,
    /// `sum_lambda m_lambda`.
    pub block_sum: f64,
    /// `h_n(spectrum)`.
    pub oracle: f64,
}

/// Computes block statistics and acceptance probabilities under a memory cap.
#[derive(Clone, Copy, Debug, Default)]
pub struct Evaluator {
    cap: MemoryCap,
    engine: Engine,
}

impl Evaluator {
    pub fn new(cap: MemoryCap, engine: Engine) -> Self {
        Evaluator { cap, engine }
    }

    pub fn cap(&self) -> MemoryCap {
        self.cap
    }

    pub fn engine(&self) -> Engine {
        self.engine
    }

    /// Picks the engine for `(d, n)` and checks its memory estimate against
    /// the cap before anything is allocated.
    pub fn plan(&self, d: usize, n: usize) -> Result<Plan> {
        if d == 0 || n == 0 {
            return Err(Error::invalid("need d >= 1 and n >= 1"));
        }
        let doubled = tensor_dim(d * d, n);
        let engine = match self.engine {
            Engine::Auto if doubled <= DENSE_AUTO_MAX_DIM => Engine::Dense,
            Engine::Auto => Engine::Factored,
            e => e,
        };
        let blocks = enumerate_partitions(n, d)?.len();
        let estimated_bytes = match engine {
            Engine::Dense => dense::estimate_bytes(d, n),
            _ => factored::estimate_bytes(d, n, blocks),
        };
        self.cap.check(
            format!("{engine:?} evaluation for d = {d}, n = {n}"),
            estimated_bytes,
        )?;
        Ok(Plan {
            engine,
            estimated_bytes,
        })
    }

    fn run(&self, rho: &DenseOperator, d: usize, n: usize) -> Result<EngineOutput> {
        crate::states::validate_density_matrix(rho.matrix(), d, "rho")?;
        let plan = self.plan(d, n)?;
        match plan.engine {
            Engine::Dense => dense::evaluate(rho, d, n, self.cap),
            _ => factored::evaluate(rho, d, n, self.cap),
        }
    }

    /// `(p_lambda, m_lambda)` for every Young index of `n` with at most `d` rows.
    pub fn block_statistics(&self, rho: &DenseOperator, d: usize, n: usize) -> Result<Vec<BlockStatistics>> {
        let out = self.run(rho, d, n)?;
        let blocks = collect_blocks(out.blocks, d)?;
        check_blocks(&blocks)?;
        Ok(blocks)
    }

    /// Direct trace, block sum and `h_n` oracle for `P_opt`, without the
    /// agreement check.
    pub fn p_opt_evaluations(&self, rho: &DenseOperator, d: usize, n: usize) -> Result<POptEvaluation> {
        let out = self.run(rho, d, n)?;
        let block_sum = out.blocks.iter().map(|b| b.2).sum();
        Ok(POptEvaluation {
            direct: out.p_opt_direct,
            block_sum,
            oracle: oracle_p_opt(rho, d, n)?,
        })
    }

    /// `P_opt = trace(rho^{(x)n} Pi^n)`, after checking it against the block
    /// sum and the `h_n` oracle.
    pub fn p_opt(&self, rho: &DenseOperator, d: usize, n: usize) -> Result<f64> {
        let eval = self.p_opt_evaluations(rho, d, n)?;
        check_p_opt(&eval)?;
        Ok(eval.direct)
    }

    /// Full report for one `n`. Fails with [`Error::Invariant`] if any of the
    /// three `P_opt` values disagree or `P_opt <= P_* <= P_opt + slack` fails.
    pub fn report(&self, rho: &DenseOperator, d: usize, n: usize) -> Result<TestReport> {
        let analysis = analyze(rho, d)?;
        let out = self.run(rho, d, n)?;
        let eval = POptEvaluation {
            direct: out.p_opt_direct,
            block_sum: out.blocks.iter().map(|b| b.2).sum(),
            oracle: complete_homogeneous(n, &clamped(&analysis.spectrum)),
        };
        check_p_opt(&eval)?;
        let blocks = collect_blocks(out.blocks, d)?;
        check_blocks(&blocks)?;
        let p_opt = eval.direct;
        let p_star = p_star(&blocks);
        let slack = slack_bound(&blocks);
        if p_star < p_opt - tolerance::SANDWICH || p_star > p_opt + slack + tolerance::SANDWICH {
            return Err(Error::Invariant(format!(
                "n = {n}: expected p_opt <= p_star <= p_opt + slack, got {p_opt} / {p_star} / {slack}"
            )));
        }
        Ok(TestReport {
            n,
            p_opt,
            p_star,
            slack,
            oracle_p_opt: eval.oracle,
            exponent_opt: exponent(p_opt, n),
            exponent_star: exponent(p_star, n),
            minus_log_p1: exponent(analysis.p1, 1),
            blocks,
        })
    }
}

fn clamped(spectrum: &[f64]) -> Vec<f64> {
    spectrum.iter().map(|x| x.max(0.0)).collect()
}

/// `h_n` of the spectrum of `rho`, clamped to be non-negative.
pub fn oracle_p_opt(rho: &DenseOperator, d: usize, n: usize) -> Result<f64> {
    let analysis = analyze(rho, d)?;
    Ok(complete_homogeneous(n, &clamped(&analysis.spectrum)))
}

fn collect_blocks(raw: Vec<(Partition, f64, f64)>, d: usize) -> Result<Vec<BlockStatistics>> {
    raw.into_iter()
        .map(|(lambda, p, m)| BlockStatistics::new(lambda, d, p, m))
        .collect()
}

fn check_p_opt(eval: &POptEvaluation) -> Result<()> {
    let tol = tolerance::P_OPT_AGREEMENT;
    if (eval.direct - eval.oracle).abs() > tol || (eval.direct - eval.block_sum).abs() > tol {
        return Err(Error::Invariant(format!(
            "P_opt evaluations disagree: direct {}, block sum {}, h_n oracle {}",
            eval.direct, eval.block_sum, eval.oracle
        )));
    }
    Ok(())
}

fn check_blocks(blocks: &[BlockStatistics]) -> Result<()> {
    let tol = tolerance::SANDWICH;
    for b in blocks {
        if b.m_lambda < -tol || b.m_lambda > b.p_lambda + tol || b.p_lambda > 1.0 + tol {
            return Err(Error::Invariant(format!(
                "block {}: expected 0 <= m <= p <= 1, got m = {}, p = {}",
                b.lambda, b.m_lambda, b.p_lambda
            )));
        }
    }
    let total: f64 = blocks.iter().map(|b| b.p_lambda).sum();
    if total > 1.0 + tol {
        return Err(Error::Invariant(format!("block probabilities sum to {total}")));
    }
    Ok(())
}

/// Where a series stopped early.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Truncation {
    /// First `n` that could not be computed.
    pub n: usize,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExponentSeries {
    #[serde(serialize_with = "serialize_extended")]
    pub minus_log_p1: f64,
    pub reports: Vec<TestReport>,
    pub truncated: Option<Truncation>,
}

/// Reports for `n = 1..=n_max`, computed in parallel across `n`. Stops at the
/// first `n` whose plan exceeds the memory cap and returns the reports before
/// it with a truncation marker.
pub fn exponent_series(spec: &BipartiteStateSpec, n_max: usize, evaluator: &Evaluator) -> Result<ExponentSeries> {
    let d = spec.d();
    let rho = build_state(spec)?;
    let analysis = analyze(&rho, d)?;
    // plan sequentially so the cut-off does not depend on scheduling
    let mut feasible = Vec::new();
    let mut truncated = None;
    for n in 1..=n_max {
        match evaluator.plan(d, n) {
            Ok(_) => feasible.push(n),
            Err(e @ Error::ResourceLimit { .. }) => {
                truncated = Some(Truncation {
                    n,
                    reason: e.to_string(),
                });
                break;
            }
            Err(e) => return Err(e),
        }
    }
    let reports = feasible
        .into_par_iter()
        .map(|n| evaluator.report(&rho, d, n))
        .collect::<Result<Vec<_>>>()?;
    Ok(ExponentSeries {
        minus_log_p1: exponent(analysis.p1, 1),
        reports,
        truncated,
    })
}
