//! Entropies and the type-class bounds relating `d_lambda` and the block
//! probabilities to `H(lambda/n)` and `D(lambda/n || p)`. Natural logarithms
//! throughout.

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use serde::Serialize;

use super::{enumerate_partitions, hook_dim, schur_polynomial, weyl_dim, Partition, ProbabilityVector};
use crate::error::{Error, Result};

/// Result of evaluating one inequality `lhs <= rhs`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BoundCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
}

impl BoundCheck {
    fn new(lhs: f64, rhs: f64) -> Self {
        BoundCheck {
            lhs,
            rhs,
            holds: lhs <= rhs,
        }
    }
}

/// A subset of the probability simplex, queried only at normalized Young
/// indices `lambda / n`.
pub trait Region {
    fn contains(&self, q: &ProbabilityVector) -> bool;
}

impl<F> Region for F
where
    F: Fn(&ProbabilityVector) -> bool,
{
    fn contains(&self, q: &ProbabilityVector) -> bool {
        self(q)
    }
}

/// `ln` of an arbitrarily large integer.
pub(crate) fn ln_big(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits <= 1000 {
        return x.to_f64().map_or(f64::INFINITY, f64::ln);
    }
    let shift = bits - 64;
    let top = (x >> shift).to_f64().unwrap_or(f64::INFINITY);
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

/// Shannon entropy `H(q) = -sum q_i ln q_i` with `0 ln 0 = 0`.
pub fn shannon_entropy(q: &ProbabilityVector) -> f64 {
    let sum: f64 = q
        .entries()
        .iter()
        .filter(|&&x| x > 0.0)
        .map(|&x| x * x.ln())
        .sum();
    // avoid reporting -0 for point masses
    0.0 - sum
}

/// Relative entropy `D(q || p)`; `+inf` when `q_i > 0` but `p_i = 0`.
///
/// Each term is `q_i (ln q_i - ln p_i)`, so `D((1,0,...,0) || p)` is exactly
/// `-ln p_1`.
pub fn kl_divergence(q: &ProbabilityVector, p: &ProbabilityVector) -> Result<f64> {
    if q.len() != p.len() {
        return Err(Error::invalid(format!(
            "distributions have lengths {} and {}",
            q.len(),
            p.len()
        )));
    }
    let mut total = 0.0;
    for (&qi, &pi) in q.entries().iter().zip(p.entries()) {
        if qi == 0.0 {
            continue;
        }
        if pi == 0.0 {
            return Ok(f64::INFINITY);
        }
        total += qi * (qi.ln() - pi.ln());
    }
    Ok(total)
}

fn require_weight(lambda: &Partition, n: usize, d: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::invalid("n must be at least 1"));
    }
    if lambda.n() != n {
        return Err(Error::invalid(format!(
            "{} is not a partition of {n}",
            lambda.compact()
        )));
    }
    if lambda.rows() > d {
        return Err(Error::invalid(format!(
            "{} has more than d = {d} rows",
            lambda.compact()
        )));
    }
    Ok(())
}

/// `|ln d_lambda / n - H(lambda/n)| <= (d^2 + 2d) / (2n) * ln(n + d)`.
pub fn check_dim_entropy_bound(lambda: &Partition, n: usize, d: usize) -> Result<BoundCheck> {
    require_weight(lambda, n, d)?;
    let lambda = lambda.with_rows(d)?;
    let nf = n as f64;
    let rate = ln_big(&hook_dim(&lambda)) / nf;
    let entropy = shannon_entropy(&lambda.normalized()?);
    let df = d as f64;
    let rhs = (df * df + 2.0 * df) / (2.0 * nf) * (nf + df).ln();
    Ok(BoundCheck::new((rate - entropy).abs(), rhs))
}

/// `ln dim U_lambda <= d^2 ln n`.
pub fn check_dim_zero_rate(lambda: &Partition, d: usize) -> Result<BoundCheck> {
    let n = lambda.n();
    require_weight(lambda, n, d)?;
    let lhs = ln_big(&weyl_dim(lambda, d)?);
    Ok(BoundCheck::new(lhs, (d * d) as f64 * (n as f64).ln()))
}

/// Type-class bound for the block probabilities of `sigma^{(x)n}`:
///
/// `sum_{lambda/n in R} d_lambda s_lambda(p) <= (n+1)^{d(d+1)/2} exp(-n min D(q || p))`
///
/// where the minimum runs over the normalized Young indices inside `R`.
/// An `R` that contains none of them gives `lhs = rhs = 0`, which holds.
///
/// Young indices are non-increasing, so the divergence is taken against `p`
/// sorted non-increasingly. `s_lambda` is symmetric, so the order of `p`
/// does not change `lhs`.
pub fn type_region_bound(
    region: &dyn Region,
    p: &ProbabilityVector,
    n: usize,
    d: usize,
) -> Result<BoundCheck> {
    if n == 0 {
        return Err(Error::invalid("n must be at least 1"));
    }
    if p.len() != d {
        return Err(Error::invalid(format!(
            "p has {} entries but d = {d}",
            p.len()
        )));
    }
    let sorted = ProbabilityVector::new(p.sorted_desc())?;
    let mut lhs = 0.0;
    let mut min_divergence: Option<f64> = None;
    for lambda in enumerate_partitions(n, d)? {
        let q = lambda.normalized()?;
        if !region.contains(&q) {
            continue;
        }
        lhs += hook_dim(&lambda).to_f64().unwrap_or(f64::INFINITY) * schur_polynomial(&lambda, p)?;
        let div = kl_divergence(&q, &sorted)?;
        min_divergence = Some(min_divergence.map_or(div, |m: f64| m.min(div)));
    }
    let Some(min_divergence) = min_divergence else {
        return Ok(BoundCheck::new(0.0, 0.0));
    };
    let exponent = (d * (d + 1) / 2) as f64;
    let rhs = ((n + 1) as f64).powf(exponent) * (-(n as f64) * min_divergence).exp();
    Ok(BoundCheck::new(lhs, rhs))
}
