//! Evaluation through the spectral decomposition of `rho`.
//!
//! `rho^{(x)n} = sum_t r_{t_1}..r_{t_n} |Psi_t><Psi_t|` with product vectors
//! `Psi_t`. Every operator we take expectations of commutes with permuting
//! the copies, so all arrangements of one multiset of eigen-indices give the
//! same value and each multiset is visited once with its multinomial weight.

use std::collections::HashMap;

use itertools::Itertools;
use nalgebra::DMatrix;
use rayon::prelude::*;

use super::EngineOutput;
use crate::error::Result;
use crate::partitions::Partition;
use crate::schurweyl::{build_projector_set, copy_major_layout};
use crate::states::spectral_decomposition;
use crate::tensorops::{tensor_dim, DenseOperator, MemoryCap, C64};
use crate::tolerance;

const BYTES_PER_ENTRY: u128 = 16;

/// Vectors and `d^n x d^n` matrices alive in one worker.
const WORKER_VECTORS: u128 = 8;

pub(crate) fn estimate_bytes(d: usize, n: usize, blocks: usize) -> u128 {
    let chain = tensor_dim(d, n);
    let doubled = tensor_dim(d * d, n);
    let threads = rayon::current_num_threads() as u128;
    let projectors = chain.saturating_mul(chain).saturating_mul(blocks as u128 + 1);
    let workers = doubled.saturating_mul(WORKER_VECTORS).saturating_mul(threads);
    projectors.saturating_add(workers).saturating_mul(BYTES_PER_ENTRY)
}

fn kron_vec(a: &[C64], b: &[C64]) -> Vec<C64> {
    let mut out = Vec::with_capacity(a.len() * b.len());
    for &x in a {
        out.extend(b.iter().map(|&y| x * y));
    }
    out
}

/// `Sym(v_{k_1} (x) .. (x) v_{k_m})` for the sorted multiset `ks`, built by
/// splitting off the last factor:
/// `Sym(K) = (1/m) sum_j count_j Sym(K - j) (x) v_j`.
fn symmetrize(ks: &[usize], vecs: &[Vec<C64>], memo: &mut HashMap<Vec<usize>, Vec<C64>>) -> Vec<C64> {
    if ks.len() == 1 {
        return vecs[ks[0]].clone();
    }
    if let Some(v) = memo.get(ks) {
        return v.clone();
    }
    let m = ks.len() as f64;
    let local = vecs[0].len();
    let mut out = vec![C64::new(0.0, 0.0); local.pow(ks.len() as u32)];
    for (j, group) in &ks.iter().enumerate().chunk_by(|(_, &k)| k) {
        let (first, count) = group.fold((None, 0usize), |(f, c), (i, _)| (f.or(Some(i)), c + 1));
        let mut rest = ks.to_vec();
        rest.remove(first.unwrap_or(0));
        let head = symmetrize(&rest, vecs, memo);
        let coef = C64::new(count as f64 / m, 0.0);
        for (i, &h) in head.iter().enumerate() {
            let h = h * coef;
            for (slot, &t) in out[i * local..(i + 1) * local].iter_mut().zip(&vecs[j]) {
                *slot += h * t;
            }
        }
    }
    memo.insert(ks.to_vec(), out.clone());
    out
}

fn multinomial(ks: &[usize]) -> f64 {
    let fact = |m: usize| (1..=m).map(|x| x as f64).product::<f64>();
    let denom: f64 = ks.iter().chunk_by(|&&k| k).into_iter().map(|(_, g)| fact(g.count())).product();
    fact(ks.len()) / denom
}

fn norm_sqr(m: &DMatrix<C64>) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum()
}

/// Orthonormal basis of the range of a projector, as the columns of `V`
/// with `P = V V^dag`.
fn range_isometry(p: &DenseOperator) -> DMatrix<C64> {
    let eig = p.matrix().clone().symmetric_eigen();
    let keep: Vec<usize> = (0..eig.eigenvalues.len())
        .filter(|&k| eig.eigenvalues[k] > 0.5)
        .collect();
    DMatrix::from_fn(p.dim(), keep.len(), |i, j| eig.eigenvectors[(i, keep[j])])
}

struct Contribution {
    blocks: Vec<(f64, f64)>,
    p_opt: f64,
}

pub(crate) fn evaluate(rho: &DenseOperator, d: usize, n: usize, cap: MemoryCap) -> Result<EngineOutput> {
    let (values, vecs): (Vec<f64>, Vec<Vec<C64>>) = spectral_decomposition(rho)
        .into_iter()
        .filter(|(r, _)| *r > tolerance::EIGENVALUE_CUTOFF)
        .unzip();
    let set = build_projector_set(d, n, cap)?;
    // (lambda, V^dag, conj(V)) with P_lambda = V V^dag
    let isometries: Vec<(Partition, DMatrix<C64>, DMatrix<C64>)> = set
        .iter()
        .map(|(lambda, p)| {
            let v = range_isometry(p);
            (lambda.clone(), v.adjoint(), v.conjugate())
        })
        .collect();
    drop(set);
    let chain = d.pow(n as u32);
    // split index a * chain + b -> copy-major index
    let table = copy_major_layout(n, d)?.index_table();
    let reshape = |v: &[C64]| DMatrix::from_fn(chain, chain, |a, b| v[table[a * chain + b]]);

    let multisets: Vec<Vec<usize>> = (0..values.len()).combinations_with_replacement(n).collect();
    let contributions: Vec<Contribution> = multisets
        .par_iter()
        .map(|ks| {
            let weight = multinomial(ks) * ks.iter().map(|&k| values[k]).product::<f64>();
            let product = ks[1..]
                .iter()
                .fold(vecs[ks[0]].clone(), |acc, &k| kron_vec(&acc, &vecs[k]));
            let sym = symmetrize(ks, &vecs, &mut HashMap::new());
            let p_opt = weight * sym.iter().map(|z| z.norm_sqr()).sum::<f64>();
            let m_prod = reshape(&product);
            let m_sym = reshape(&sym);
            // P^T = conj(V) V^T, so |P M P^T|^2 = |V^dag M conj(V)|^2
            let blocks = isometries
                .iter()
                .map(|(_, vt, vbar)| {
                    let p_val = norm_sqr(&(vt * &m_prod * vbar));
                    let m_val = norm_sqr(&(vt * &m_sym * vbar));
                    (weight * p_val, weight * m_val)
                })
                .collect();
            Contribution { blocks, p_opt }
        })
        .collect();

    let mut totals = vec![(0.0, 0.0); isometries.len()];
    let mut p_opt_direct = 0.0;
    for c in &contributions {
        for (t, (p, m)) in totals.iter_mut().zip(&c.blocks) {
            t.0 += p;
            t.1 += m;
        }
        p_opt_direct += c.p_opt;
    }
    let blocks = isometries
        .into_iter()
        .zip(totals)
        .map(|((lambda, _, _), (p, m))| (lambda, p, m))
        .collect();
    Ok(EngineOutput {
        blocks,
        p_opt_direct,
    })
}
