use std::collections::HashMap;

use super::{Partition, ProbabilityVector};
use crate::error::{Error, Result};

/// Schur polynomial `s_lambda(p)` at a probability vector.
///
/// Together with `d_lambda` it gives the weight of block `lambda` in
/// `sigma^{(x)n}`: `trace(P_lambda sigma^{(x)n}) = d_lambda * s_lambda(spec sigma)`.
pub fn schur_polynomial(lambda: &Partition, p: &ProbabilityVector) -> Result<f64> {
    schur_polynomial_at(lambda, p.entries())
}

/// Schur polynomial `s_lambda(x_1, ..., x_m)` for non-negative `x`.
///
/// Evaluated with the branching rule
/// `s_lambda(x_1..x_m) = sum_{mu interlacing lambda} s_mu(x_1..x_{m-1}) x_m^{|lambda|-|mu|}`,
/// which is a sum of non-negative terms for non-negative inputs and therefore
/// free of cancellation, including at repeated arguments.
pub fn schur_polynomial_at(lambda: &Partition, x: &[f64]) -> Result<f64> {
    if lambda.rows() > x.len() {
        return Err(Error::invalid(format!(
            "{} has more rows than the {} variables supplied",
            lambda.compact(),
            x.len()
        )));
    }
    let mut memo = HashMap::new();
    Ok(branch(lambda.nonzero_parts(), x, &mut memo))
}

fn branch(lambda: &[usize], x: &[f64], memo: &mut HashMap<(Vec<usize>, usize), f64>) -> f64 {
    let m = x.len();
    if lambda.is_empty() {
        return 1.0;
    }
    if lambda.len() > m {
        return 0.0;
    }
    let key = (lambda.to_vec(), m);
    if let Some(&v) = memo.get(&key) {
        return v;
    }
    let weight: usize = lambda.iter().sum();
    let last = x[m - 1];
    let mut total = 0.0;
    let mut mu = Vec::with_capacity(m);
    let mut stack = Vec::new();
    interlacing(lambda, m - 1, 0, &mut mu, &mut stack);
    for mu in stack {
        let mu_weight: usize = mu.iter().sum();
        let inner = branch(&mu, &x[..m - 1], memo);
        if inner != 0.0 {
            total += inner * last.powi((weight - mu_weight) as i32);
        }
    }
    memo.insert(key, total);
    total
}

/// Collects every `mu` with at most `rows` rows and
/// `lambda_{i+1} <= mu_i <= lambda_i`, trailing zeros stripped.
fn interlacing(lambda: &[usize], rows: usize, i: usize, mu: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if i == rows {
        let mut m = mu.clone();
        while m.last() == Some(&0) {
            m.pop();
        }
        out.push(m);
        return;
    }
    let hi = lambda.get(i).copied().unwrap_or(0);
    let lo = lambda.get(i + 1).copied().unwrap_or(0);
    for v in lo..=hi {
        mu.push(v);
        interlacing(lambda, rows, i + 1, mu, out);
        mu.pop();
    }
}

/// Complete homogeneous symmetric polynomial
/// `h_n(mu) = sum_{i_1 <= ... <= i_n} mu_{i_1} ... mu_{i_n}`.
///
/// Uses the recurrence obtained by adding one variable at a time,
/// `h_k(x_1..x_j) = h_k(x_1..x_{j-1}) + x_j h_{k-1}(x_1..x_j)`.
pub fn complete_homogeneous(n: usize, mu: &[f64]) -> f64 {
    let mut h = vec![0.0; n + 1];
    h[0] = 1.0;
    for &x in mu {
        for k in 1..=n {
            h[k] += x * h[k - 1];
        }
    }
    h[n]
}
