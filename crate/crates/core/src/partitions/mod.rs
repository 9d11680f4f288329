//! Young indices and the combinatorics attached to them.
//!
//! A Young index `lambda = (lambda_1, ..., lambda_d)` with
//! `lambda_1 >= ... >= lambda_d >= 0` labels one irreducible block
//! `U_lambda (x) V_lambda` of `(C^d)^{(x)n}`. This module provides the
//! enumeration of those labels, exact integer formulas for `dim U_lambda`
//! (the unitary-group irrep) and `d_lambda = dim V_lambda` (the
//! symmetric-group irrep), symmetric-group characters, Schur and complete
//! homogeneous polynomials, and the entropy/type-class bounds used to
//! analyse how the block probabilities concentrate.

mod character;
mod dimension;
mod symmetric;
mod types;

use std::fmt;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::tolerance;

pub(crate) use types::ln_big;
pub use character::{class_size, mn_character, z_mu};
pub use dimension::{
    dimension_record, hook_dim, sum_weyl_dim_squared, weyl_dim, DimensionRecord,
};
pub use symmetric::{complete_homogeneous, schur_polynomial, schur_polynomial_at};
pub use types::{
    check_dim_entropy_bound, check_dim_zero_rate, kl_divergence, shannon_entropy,
    type_region_bound, BoundCheck, Region,
};

/// A Young index: a non-increasing sequence of `d` non-negative integers.
///
/// The parts are always stored padded with zeros to exactly `d` entries, so
/// `(3)` with `d = 2` is stored and displayed as `(3,0)`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition {
    parts: Vec<usize>,
    n: usize,
}

impl Partition {
    /// Builds a Young index with at most `d` rows, padding `parts` with zeros.
    pub fn new(parts: impl Into<Vec<usize>>, d: usize) -> Result<Self> {
        let mut parts = parts.into();
        if d == 0 {
            return Err(Error::invalid("the number of rows d must be at least 1"));
        }
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::invalid(format!(
                "parts {parts:?} are not non-increasing"
            )));
        }
        while parts.len() > d && parts.last() == Some(&0) {
            parts.pop();
        }
        if parts.len() > d {
            return Err(Error::invalid(format!(
                "{parts:?} has more than d = {d} non-zero rows"
            )));
        }
        parts.resize(d, 0);
        let n = parts.iter().sum();
        Ok(Partition { parts, n })
    }

    /// Parses `"(3,1,0)"`, `"3,1"` or `"3 1"`.
    pub fn parse(s: &str, d: usize) -> Result<Self> {
        let inner = s.trim().trim_start_matches('(').trim_end_matches(')');
        let parts = inner
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|t| !t.is_empty())
            .map(|t| {
                t.parse::<usize>()
                    .map_err(|_| Error::invalid(format!("`{t}` is not a partition part")))
            })
            .collect::<Result<Vec<_>>>()?;
        Partition::new(parts, d)
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    /// Weight `sum_i lambda_i`.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Maximum number of rows, i.e. the local dimension the index lives in.
    pub fn d(&self) -> usize {
        self.parts.len()
    }

    /// Number of non-zero rows.
    pub fn rows(&self) -> usize {
        self.parts.iter().take_while(|&&p| p > 0).count()
    }

    pub fn nonzero_parts(&self) -> &[usize] {
        &self.parts[..self.rows()]
    }

    /// The same index re-padded to `d` rows.
    pub fn with_rows(&self, d: usize) -> Result<Self> {
        Partition::new(self.nonzero_parts().to_vec(), d)
    }

    /// Shifted parts `l_i = lambda_i + d - i` (rows counted from 1), strictly
    /// decreasing.
    pub fn shifted(&self) -> Vec<usize> {
        let d = self.d();
        self.parts
            .iter()
            .enumerate()
            .map(|(i, &p)| p + d - 1 - i)
            .collect()
    }

    /// The type `lambda / n` as a probability vector of length `d`.
    pub fn normalized(&self) -> Result<ProbabilityVector> {
        if self.n == 0 {
            return Err(Error::invalid("the empty partition has no normalized type"));
        }
        let n = self.n as f64;
        ProbabilityVector::new(self.parts.iter().map(|&p| p as f64 / n).collect())
    }

    /// Display without trailing zero rows, e.g. `(2,1)` or `(1,1,1)`.
    pub fn compact(&self) -> String {
        format_parts(self.nonzero_parts())
    }
}

fn format_parts(parts: &[usize]) -> String {
    let body: Vec<String> = parts.iter().map(|p| p.to_string()).collect();
    format!("({})", body.join(","))
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_parts(&self.parts))
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Partition{self}")
    }
}

impl Serialize for Partition {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.parts.serialize(serializer)
    }
}

/// All partitions of `n` into at most `d` parts, lexicographically decreasing.
pub fn enumerate_partitions(n: usize, d: usize) -> Result<Vec<Partition>> {
    if d == 0 {
        return Err(Error::invalid("the number of rows d must be at least 1"));
    }
    let mut out = Vec::new();
    let mut prefix = Vec::with_capacity(d);
    fill(n, d, n, &mut prefix, &mut out);
    Ok(out)
}

fn fill(remaining: usize, slots: usize, max_part: usize, prefix: &mut Vec<usize>, out: &mut Vec<Partition>) {
    if remaining == 0 {
        let mut parts = prefix.clone();
        parts.resize(parts.len() + slots, 0);
        let n = parts.iter().sum();
        out.push(Partition { parts, n });
        return;
    }
    if slots == 0 {
        return;
    }
    // the remaining rows can hold at most slots * first
    let lowest = remaining.div_ceil(slots);
    for first in (lowest..=max_part.min(remaining)).rev() {
        prefix.push(first);
        fill(remaining - first, slots - 1, first, prefix, out);
        prefix.pop();
    }
}

/// A finite probability distribution `(p_1, ..., p_d)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(transparent)]
pub struct ProbabilityVector {
    entries: Vec<f64>,
}

impl ProbabilityVector {
    /// Validates non-negativity and `|sum - 1| <= 1e-12`.
    pub fn new(entries: Vec<f64>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::invalid("a probability vector needs at least one entry"));
        }
        if let Some(bad) = entries.iter().find(|x| !x.is_finite() || **x < 0.0) {
            return Err(Error::invalid(format!(
                "probability entry {bad} is negative or not finite"
            )));
        }
        let sum: f64 = entries.iter().sum();
        if (sum - 1.0).abs() > tolerance::PROBABILITY_SUM {
            return Err(Error::invalid(format!(
                "probability entries sum to {sum}, not 1"
            )));
        }
        Ok(ProbabilityVector { entries })
    }

    /// Rescales non-negative weights to sum to one.
    pub fn normalize(weights: Vec<f64>) -> Result<Self> {
        let sum: f64 = weights.iter().sum();
        if sum.is_nan() || sum <= 0.0 || weights.iter().any(|w| *w < 0.0) {
            return Err(Error::invalid("weights must be non-negative with a positive sum"));
        }
        ProbabilityVector::new(weights.into_iter().map(|w| w / sum).collect())
    }

    /// `(1, 0, ..., 0)` of length `d`.
    pub fn point_mass(d: usize) -> Result<Self> {
        let mut e = vec![0.0; d];
        *e.first_mut()
            .ok_or_else(|| Error::invalid("d must be at least 1"))? = 1.0;
        ProbabilityVector::new(e)
    }

    pub fn uniform(d: usize) -> Result<Self> {
        ProbabilityVector::new(vec![1.0 / d as f64; d])
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Entries sorted in non-increasing order.
    pub fn sorted_desc(&self) -> Vec<f64> {
        let mut v = self.entries.clone();
        v.sort_by(|a, b| b.total_cmp(a));
        v
    }
}
