//! Dense evaluation on the full doubled chain.

use rayon::prelude::*;

use super::EngineOutput;
use crate::error::Result;
use crate::schurweyl::{bipartite_product, build_projector_set};
use crate::states::tensor_power;
use crate::tensorops::{dense_bytes, symmetrizer, tensor_dim, DenseOperator, MemoryCap};

/// `rho^n` and `Pi`.
const SHARED_OPERATORS: u128 = 2;
/// `Q`, the unpermuted Kronecker product and two products.
const PER_BLOCK_OPERATORS: u128 = 4;

pub(crate) fn estimate_bytes(d: usize, n: usize) -> u128 {
    let threads = rayon::current_num_threads() as u128;
    let live = SHARED_OPERATORS + PER_BLOCK_OPERATORS * threads;
    dense_bytes(tensor_dim(d * d, n)).saturating_mul(live)
}

pub(crate) fn evaluate(rho: &DenseOperator, d: usize, n: usize, cap: MemoryCap) -> Result<EngineOutput> {
    let rho_n = tensor_power(rho, n, cap)?;
    let pi = symmetrizer(d * d, n, cap)?;
    let set = build_projector_set(d, n, cap)?;
    let indexed: Vec<_> = set.iter().collect();
    let blocks = indexed
        .into_par_iter()
        .map(|(lambda, p)| {
            let q = bipartite_product(p, p, n, d, cap)?;
            let p_lambda = rho_n.trace_product(&q)?.re;
            let m_lambda = rho_n.mul(&q)?.trace_product(&pi.mul(&q)?)?.re;
            Ok((lambda.clone(), p_lambda, m_lambda))
        })
        .collect::<Result<Vec<_>>>()?;
    let p_opt_direct = rho_n.trace_product(&pi)?.re;
    Ok(EngineOutput {
        blocks,
        p_opt_direct,
    })
}
