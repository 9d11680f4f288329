use num_bigint::BigUint;
use num_traits::{One, Zero};

use super::{enumerate_partitions, Partition};
use crate::error::{Error, Result};

/// `dim U_lambda`, `d_lambda = dim V_lambda` and their product `dim W_lambda`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DimensionRecord {
    pub dim_u: BigUint,
    pub dim_v: BigUint,
    pub dim_w: BigUint,
}

fn factorial(k: usize) -> BigUint {
    (1..=k).fold(BigUint::one(), |acc, i| acc * i)
}

/// `prod_{i<j} (l_i - l_j)` over the shifted parts.
fn vandermonde(shifted: &[usize]) -> BigUint {
    let mut acc = BigUint::one();
    for (i, &li) in shifted.iter().enumerate() {
        for &lj in &shifted[i + 1..] {
            acc *= li - lj;
        }
    }
    acc
}

fn exact_div(num: BigUint, den: &BigUint, what: &str) -> BigUint {
    let (q, r) = (&num / den, &num % den);
    debug_assert!(r.is_zero(), "{what}: {num} is not divisible by {den}");
    q
}

/// Dimension of the `SU(d)` irrep `U_lambda`:
/// `prod_{i<j} (l_i - l_j) / prod_{i=1}^{d-1} (d-i)!` with `l_i = lambda_i + d - i`.
///
/// `lambda` is re-padded to `d` rows; more than `d` non-zero rows is an error.
pub fn weyl_dim(lambda: &Partition, d: usize) -> Result<BigUint> {
    let lambda = lambda.with_rows(d).map_err(|_| {
        Error::invalid(format!("{} has more than d = {d} rows", lambda.compact()))
    })?;
    let num = vandermonde(&lambda.shifted());
    let den = (1..d).fold(BigUint::one(), |acc, k| acc * factorial(k));
    Ok(exact_div(num, &den, "weyl_dim"))
}

/// Dimension `d_lambda` of the symmetric-group irrep `V_lambda`:
/// `n! / prod_i l_i! * prod_{i<j} (l_i - l_j)`.
///
/// Padding with zero rows does not change the value.
pub fn hook_dim(lambda: &Partition) -> BigUint {
    let shifted = lambda.shifted();
    let num = factorial(lambda.n()) * vandermonde(&shifted);
    let den = shifted
        .iter()
        .fold(BigUint::one(), |acc, &l| acc * factorial(l));
    exact_div(num, &den, "hook_dim")
}

pub fn dimension_record(lambda: &Partition, d: usize) -> Result<DimensionRecord> {
    let dim_u = weyl_dim(lambda, d)?;
    let dim_v = hook_dim(lambda);
    let dim_w = &dim_u * &dim_v;
    Ok(DimensionRecord { dim_u, dim_v, dim_w })
}

/// `sum_lambda (dim U_lambda)^2` over Young indices of `n` with at most `d`
/// rows. Equals the dimension of the symmetric subspace of `(C^{d^2})^{(x)n}`.
pub fn sum_weyl_dim_squared(n: usize, d: usize) -> Result<BigUint> {
    let mut acc = BigUint::zero();
    for lambda in enumerate_partitions(n, d)? {
        let u = weyl_dim(&lambda, d)?;
        acc += &u * &u;
    }
    Ok(acc)
}
