//! Irreducible characters of `S_n` by the Murnaghan-Nakayama rule.
//!
//! A partition is encoded by its beta set `{lambda_i + k - i}` (k = number of
//! non-zero rows). Removing a rim hook of length `r` moves one bead from `b`
//! to `b - r`; the hook's height is the number of beads strictly in between.

use std::collections::{BTreeSet, HashMap};

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};

use super::Partition;
use crate::error::{Error, Result};

type BetaSet = BTreeSet<usize>;

fn beta_set(lambda: &Partition) -> BetaSet {
    let rows = lambda.nonzero_parts();
    let k = rows.len();
    rows.iter().enumerate().map(|(i, &p)| p + k - 1 - i).collect()
}

fn is_empty_shape(beta: &BetaSet) -> bool {
    beta.iter().enumerate().all(|(i, &b)| b == i)
}

struct Rule<'a> {
    cycles: &'a [usize],
    memo: HashMap<(Vec<usize>, usize), BigInt>,
}

impl Rule<'_> {
    fn eval(&mut self, beta: &BetaSet, step: usize) -> BigInt {
        if step == self.cycles.len() {
            return if is_empty_shape(beta) {
                BigInt::one()
            } else {
                BigInt::zero()
            };
        }
        let key = (beta.iter().copied().collect::<Vec<_>>(), step);
        if let Some(v) = self.memo.get(&key) {
            return v.clone();
        }
        let r = self.cycles[step];
        let mut total = BigInt::zero();
        for &b in beta.iter().filter(|&&b| b >= r) {
            let target = b - r;
            if beta.contains(&target) {
                continue;
            }
            let height = beta.range(target + 1..b).count();
            let mut next = beta.clone();
            next.remove(&b);
            next.insert(target);
            let term = self.eval(&next, step + 1);
            if height.is_multiple_of(2) {
                total += term;
            } else {
                total -= term;
            }
        }
        self.memo.insert(key, total.clone());
        total
    }
}

/// `chi_lambda` evaluated on the conjugacy class with the given cycle type.
///
/// Both arguments must be partitions of the same `n`; their row counts are
/// irrelevant.
pub fn mn_character(lambda: &Partition, cycle_type: &Partition) -> Result<BigInt> {
    if lambda.n() != cycle_type.n() {
        return Err(Error::invalid(format!(
            "{} and cycle type {} have different weights",
            lambda.compact(),
            cycle_type.compact()
        )));
    }
    let cycles = cycle_type.nonzero_parts();
    let mut rule = Rule {
        cycles,
        memo: HashMap::new(),
    };
    Ok(rule.eval(&beta_set(lambda), 0))
}

/// Centralizer order `z_mu = prod_i i^{m_i} m_i!`.
pub fn z_mu(cycle_type: &Partition) -> BigUint {
    let mut counts: HashMap<usize, usize> = HashMap::new();
    for &c in cycle_type.nonzero_parts() {
        *counts.entry(c).or_default() += 1;
    }
    counts.into_iter().fold(BigUint::one(), |acc, (len, m)| {
        let fact: BigUint = (1..=m).fold(BigUint::one(), |f, k| f * k);
        acc * BigUint::from(len).pow(m as u32) * fact
    })
}

/// Number of permutations with the given cycle type, `n! / z_mu`.
pub fn class_size(cycle_type: &Partition) -> BigUint {
    let fact: BigUint = (1..=cycle_type.n()).fold(BigUint::one(), |f, k| f * k);
    fact / z_mu(cycle_type)
}
