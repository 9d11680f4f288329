//! Schur-Weyl block projectors on a single chain and the symmetric-subspace
//! projector on the doubled chain.
//!
//! On one chain `(C^d)^{(x)n}` the isotypic projector onto `W_lambda` is the
//! central idempotent `P_lambda = (d_lambda / n!) sum_sigma chi_lambda(sigma) U(sigma)`.
//!
//! The doubled chain `(C^d (x) C^d)^{(x)n}` is stored copy-major,
//! `(A_1 B_1)(A_2 B_2)...(A_n B_n)`. Operators built as `X^A (x) Y^B` from
//! single-chain operators live naturally in the split order
//! `(A_1 ... A_n)(B_1 ... B_n)` and are moved to copy-major order with
//! [`copy_major_layout`].

use std::collections::HashMap;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::partitions::{enumerate_partitions, hook_dim, mn_character, weyl_dim, Partition};
use crate::tensorops::{
    kron, symmetrizer, tensor_dim, weighted_permutation_sum, DenseOperator, MemoryCap, Permutation,
    PermutationAction,
};
use crate::tolerance;

/// `C(local_dim + n - 1, n)`, the dimension of the symmetric subspace.
pub fn symmetric_subspace_dim(local_dim: usize, n: usize) -> BigUint {
    let mut num = BigUint::one();
    let mut den = BigUint::one();
    for i in 0..n {
        num *= local_dim + i;
        den *= i + 1;
    }
    num / den
}

fn check_index(lambda: &Partition, d: usize, n: usize) -> Result<()> {
    if n == 0 || d == 0 {
        return Err(Error::invalid("need n >= 1 and d >= 1"));
    }
    if lambda.n() != n {
        return Err(Error::invalid(format!("{lambda} is not a partition of {n}")));
    }
    if lambda.rows() > d {
        return Err(Error::invalid(format!("{lambda} has more than d = {d} rows")));
    }
    Ok(())
}

/// Isotypic projector `P_lambda` onto `W_lambda` inside `(C^d)^{(x)n}`.
pub fn young_projector(lambda: &Partition, d: usize, n: usize, cap: MemoryCap) -> Result<DenseOperator> {
    check_index(lambda, d, n)?;
    let d_lambda = hook_dim(lambda)
        .to_f64()
        .ok_or_else(|| Error::invalid("d_lambda does not fit in f64"))?;
    let n_fact: f64 = (1..=n).map(|k| k as f64).product();
    let mut by_class: HashMap<Partition, f64> = HashMap::new();
    let mut failure = None;
    let op = weighted_permutation_sum(
        d,
        n,
        d_lambda / n_fact,
        |sigma: &Permutation| {
            let class = sigma.cycle_type();
            if let Some(&v) = by_class.get(&class) {
                return v;
            }
            let v = match mn_character(lambda, &class) {
                Ok(chi) => chi.to_f64().unwrap_or(f64::NAN),
                Err(e) => {
                    failure = Some(e);
                    0.0
                }
            };
            by_class.insert(class, v);
            v
        },
        cap,
    )?;
    if let Some(e) = failure {
        return Err(e);
    }
    Ok(op.with_label(format!("P{lambda}")))
}

/// Layout permutation on `2n` factors of dimension `d` taking the split
/// order `(A_1..A_n)(B_1..B_n)` to copy-major order `(A_1 B_1)..(A_n B_n)`.
pub fn copy_major_layout(n: usize, d: usize) -> Result<PermutationAction> {
    let images = (0..2 * n)
        .map(|k| if k < n { 2 * k } else { 2 * (k - n) + 1 })
        .collect();
    PermutationAction::new(Permutation::new(images)?, d)
}

/// `X^A (x) Y^B` for single-chain operators, returned in copy-major order.
pub fn bipartite_product(
    a: &DenseOperator,
    b: &DenseOperator,
    n: usize,
    d: usize,
    cap: MemoryCap,
) -> Result<DenseOperator> {
    let chain = tensor_dim(d, n);
    if a.dim() as u128 != chain || b.dim() as u128 != chain {
        return Err(Error::invalid(format!(
            "single-chain operators must have dimension d^n = {chain}"
        )));
    }
    cap.check_dense("bipartite block operator", chain * chain, 2)?;
    copy_major_layout(n, d)?.conjugate(&kron(a, b, cap)?)
}

/// The projectors `{P_lambda}` for every Young index of `n` with at most `d` rows.
#[derive(Clone, Debug)]
pub struct IsotypicProjectorSet {
    n: usize,
    d: usize,
    projectors: Vec<(Partition, DenseOperator)>,
}

/// Measured defects of an [`IsotypicProjectorSet`].
#[derive(Clone, Debug, Serialize)]
pub struct ProjectorSetDefects {
    /// Largest `max(||P - P^dag||, ||P^2 - P||)`, Frobenius.
    pub projector: f64,
    /// Largest `||P_lambda P_mu||_F` over `lambda != mu`.
    pub orthogonality: f64,
    /// `||sum P_lambda - I||_F`.
    pub completeness: f64,
    /// Largest `|trace P_lambda - dim U_lambda * d_lambda|`.
    pub trace: f64,
}

impl ProjectorSetDefects {
    pub fn within(&self, tol: f64, trace_tol: f64) -> bool {
        self.projector <= tol && self.orthogonality <= tol && self.completeness <= tol && self.trace <= trace_tol
    }
}

impl IsotypicProjectorSet {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn len(&self) -> usize {
        self.projectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.projectors.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Partition, &DenseOperator)> {
        self.projectors.iter().map(|(l, p)| (l, p))
    }

    pub fn get(&self, lambda: &Partition) -> Option<&DenseOperator> {
        self.projectors
            .iter()
            .find(|(l, _)| l == lambda)
            .map(|(_, p)| p)
    }

    pub fn defects(&self) -> Result<ProjectorSetDefects> {
        let dim = tensor_dim(self.d, self.n) as usize;
        let mut projector: f64 = 0.0;
        let mut orthogonality: f64 = 0.0;
        let mut trace: f64 = 0.0;
        let mut sum = DenseOperator::zeros(dim);
        for (i, (lambda, p)) in self.projectors.iter().enumerate() {
            projector = projector
                .max(p.hermiticity_defect())
                .max(p.idempotence_defect());
            let expected = (weyl_dim(lambda, self.d)? * hook_dim(lambda))
                .to_f64()
                .unwrap_or(f64::INFINITY);
            trace = trace.max((p.trace().re - expected).abs().max(p.trace().im.abs()));
            for (_, q) in &self.projectors[i + 1..] {
                orthogonality = orthogonality.max(p.mul(q)?.frobenius_norm());
            }
            sum = sum.add(p)?;
        }
        let completeness = sum.distance(&DenseOperator::identity(dim))?;
        Ok(ProjectorSetDefects {
            projector,
            orthogonality,
            completeness,
            trace,
        })
    }
}

/// Builds every `P_lambda` on `(C^d)^{(x)n}` and fails fast if the set is
/// not an orthogonal resolution of the identity with the expected traces.
pub fn build_projector_set(d: usize, n: usize, cap: MemoryCap) -> Result<IsotypicProjectorSet> {
    let partitions = enumerate_partitions(n, d)?;
    // all projectors plus the running sum and a product temporary
    cap.check_dense(
        format!("projector set for d = {d}, n = {n}"),
        tensor_dim(d, n),
        partitions.len() as u128 + 2,
    )?;
    let projectors = partitions
        .into_par_iter()
        .map(|lambda| young_projector(&lambda, d, n, cap).map(|p| (lambda, p)))
        .collect::<Result<Vec<_>>>()?;
    let set = IsotypicProjectorSet { n, d, projectors };
    let defects = set.defects()?;
    if !defects.within(tolerance::PROJECTOR, tolerance::PROJECTOR_TRACE) {
        return Err(Error::Invariant(format!(
            "isotypic projectors for d = {d}, n = {n} fail their checks: {defects:?}"
        )));
    }
    Ok(set)
}

/// `Pi^n`, the projector onto the symmetric subspace of `(C^d (x) C^d)^{(x)n}`
/// in copy-major order.
#[derive(Clone, Debug)]
pub struct SymSubspaceProjector {
    n: usize,
    d: usize,
    pi: DenseOperator,
}

impl SymSubspaceProjector {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn operator(&self) -> &DenseOperator {
        &self.pi
    }
}

/// Builds `Pi^n` as the symmetrizer over copies, each copy being one
/// `C^d (x) C^d` factor. Checks `trace = C(d^2 + n - 1, n)`.
pub fn sym_projector_bipartite(d: usize, n: usize, cap: MemoryCap) -> Result<SymSubspaceProjector> {
    let pi = symmetrizer(d * d, n, cap)?.with_label(format!("Pi^{n}"));
    let expected = symmetric_subspace_dim(d * d, n).to_f64().unwrap_or(f64::INFINITY);
    let tr = pi.trace();
    if (tr.re - expected).abs() > tolerance::PROJECTOR_TRACE * expected.max(1.0) {
        return Err(Error::Invariant(format!(
            "trace of Pi^{n} is {tr}, expected {expected}"
        )));
    }
    Ok(SymSubspaceProjector { n, d, pi })
}

/// Per-block result of [`verify_block_structure`].
#[derive(Clone, Debug, Serialize)]
pub struct BlockCheck {
    pub lambda: Partition,
    /// `||[Pi, P^A_lambda (x) P^B_lambda]||_F`.
    pub commutator: f64,
    /// `trace(Pi (P^A_lambda (x) P^B_lambda))`.
    pub trace: f64,
    /// `(dim U_lambda)^2`.
    pub expected_trace: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct CrossBlockCheck {
    pub lambda: Partition,
    pub mu: Partition,
    /// `||(P^A_lambda (x) P^B_mu) Pi||_F`.
    pub norm: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct BlockStructureReport {
    pub blocks: Vec<BlockCheck>,
    pub cross_blocks: Vec<CrossBlockCheck>,
    pub total_trace: f64,
    /// `C(d^2 + n - 1, n)`.
    pub symmetric_dim: f64,
}

impl BlockStructureReport {
    /// All checks within the given tolerances.
    pub fn passed(&self, commutator_tol: f64, cross_tol: f64, trace_tol: f64) -> bool {
        self.blocks.iter().all(|b| {
            b.commutator <= commutator_tol && (b.trace - b.expected_trace).abs() <= trace_tol
        }) && self.cross_blocks.iter().all(|c| c.norm <= cross_tol)
            && (self.total_trace - self.symmetric_dim).abs() <= trace_tol
    }
}

/// Checks that `Pi^n` is block diagonal in the `(lambda_A, lambda_B)`
/// decomposition, supported only on matched blocks, with block traces
/// `(dim U_lambda)^2`.
pub fn verify_block_structure(
    set_a: &IsotypicProjectorSet,
    set_b: &IsotypicProjectorSet,
    pi: &SymSubspaceProjector,
    cap: MemoryCap,
) -> Result<BlockStructureReport> {
    let (n, d) = (pi.n(), pi.d());
    if set_a.n() != n || set_b.n() != n || set_a.d() != d || set_b.d() != d {
        return Err(Error::invalid(format!(
            "projector sets (n={}, d={}) and (n={}, d={}) do not match Pi (n={n}, d={d})",
            set_a.n(),
            set_a.d(),
            set_b.n(),
            set_b.d()
        )));
    }
    let pi_op = pi.operator();
    let mut blocks = Vec::new();
    let mut cross_blocks = Vec::new();
    for (lambda, pa) in set_a.iter() {
        for (mu, pb) in set_b.iter() {
            let q = bipartite_product(pa, pb, n, d, cap)?;
            if lambda == mu {
                let u = weyl_dim(lambda, d)?.to_f64().unwrap_or(f64::INFINITY);
                blocks.push(BlockCheck {
                    lambda: lambda.clone(),
                    commutator: pi_op.commutator_norm(&q)?,
                    trace: pi_op.trace_product(&q)?.re,
                    expected_trace: u * u,
                });
            } else {
                cross_blocks.push(CrossBlockCheck {
                    lambda: lambda.clone(),
                    mu: mu.clone(),
                    norm: q.mul(pi_op)?.frobenius_norm(),
                });
            }
        }
    }
    let total_trace = blocks.iter().map(|b| b.trace).sum();
    Ok(BlockStructureReport {
        blocks,
        cross_blocks,
        total_trace,
        symmetric_dim: symmetric_subspace_dim(d * d, n).to_f64().unwrap_or(f64::INFINITY),
    })
}
