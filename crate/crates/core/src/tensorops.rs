//! Dense complex operators on tensor-product spaces, permutations of tensor
//! factors, and the symmetrizer.
//!
//! Basis convention: on `(C^k)^{(x)n}` the basis vector `|i_1 ... i_n>` has
//! index `sum_j i_j k^{n-j}`, so the first factor is the most significant
//! digit. This matches [`kron`], where the left operand acts on the leading
//! factor.

use std::fmt;

use itertools::Itertools;
use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::partitions::Partition;

pub type C64 = Complex64;

/// Default limit on a single dense allocation plan: 2 GiB.
pub const DEFAULT_MEMORY_CAP: u64 = 2 << 30;

const BYTES_PER_ENTRY: u128 = std::mem::size_of::<C64>() as u128;

/// Upper bound on the bytes a computation may allocate for dense operators.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MemoryCap(u64);

impl MemoryCap {
    pub fn new(bytes: u64) -> Self {
        MemoryCap(bytes)
    }

    pub fn bytes(self) -> u64 {
        self.0
    }

    /// Fails with [`Error::ResourceLimit`] when `required` exceeds the cap.
    pub fn check(self, what: impl Into<String>, required: u128) -> Result<()> {
        if required > self.0 as u128 {
            return Err(Error::ResourceLimit {
                what: what.into(),
                required,
                cap: self.0,
            });
        }
        Ok(())
    }

    /// Checks room for `count` dense operators of dimension `dim`.
    pub fn check_dense(self, what: impl Into<String>, dim: u128, count: u128) -> Result<()> {
        self.check(what, dense_bytes(dim).saturating_mul(count))
    }
}

impl Default for MemoryCap {
    fn default() -> Self {
        MemoryCap(DEFAULT_MEMORY_CAP)
    }
}

/// Bytes taken by one `dim x dim` complex matrix.
pub fn dense_bytes(dim: u128) -> u128 {
    dim.saturating_mul(dim).saturating_mul(BYTES_PER_ENTRY)
}

/// `base^exp` without overflow, saturating.
pub fn tensor_dim(base: usize, exp: usize) -> u128 {
    (0..exp).fold(1u128, |acc, _| acc.saturating_mul(base as u128))
}

/// A square complex matrix with an optional human-readable label.
#[derive(Clone, PartialEq)]
pub struct DenseOperator {
    matrix: DMatrix<C64>,
    label: Option<String>,
}

impl DenseOperator {
    pub fn from_matrix(matrix: DMatrix<C64>) -> Result<Self> {
        if !matrix.is_square() || matrix.nrows() == 0 {
            return Err(Error::invalid(format!(
                "operator must be square and non-empty, got {}x{}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        Ok(DenseOperator {
            matrix,
            label: None,
        })
    }

    pub fn identity(dim: usize) -> Self {
        DenseOperator {
            matrix: DMatrix::identity(dim, dim),
            label: Some(format!("I_{dim}")),
        }
    }

    pub fn zeros(dim: usize) -> Self {
        DenseOperator {
            matrix: DMatrix::zeros(dim, dim),
            label: None,
        }
    }

    /// Real diagonal operator.
    pub fn diagonal(entries: &[f64]) -> Self {
        let mut m = DMatrix::zeros(entries.len(), entries.len());
        for (i, &x) in entries.iter().enumerate() {
            m[(i, i)] = C64::new(x, 0.0);
        }
        DenseOperator {
            matrix: m,
            label: None,
        }
    }

    /// `|v><v|` for a (not necessarily normalised) vector.
    pub fn outer(v: &[C64]) -> Self {
        let m = DMatrix::from_fn(v.len(), v.len(), |i, j| v[i] * v[j].conj());
        DenseOperator {
            matrix: m,
            label: None,
        }
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.matrix
    }

    pub fn into_matrix(self) -> DMatrix<C64> {
        self.matrix
    }

    pub fn get(&self, row: usize, col: usize) -> C64 {
        self.matrix[(row, col)]
    }

    pub fn trace(&self) -> C64 {
        self.matrix.trace()
    }

    pub fn adjoint(&self) -> Self {
        DenseOperator {
            matrix: self.matrix.adjoint(),
            label: self.label.as_ref().map(|l| format!("{l}^dag")),
        }
    }

    pub fn mul(&self, other: &DenseOperator) -> Result<Self> {
        self.same_dim(other)?;
        Ok(DenseOperator {
            matrix: &self.matrix * &other.matrix,
            label: None,
        })
    }

    pub fn add(&self, other: &DenseOperator) -> Result<Self> {
        self.same_dim(other)?;
        Ok(DenseOperator {
            matrix: &self.matrix + &other.matrix,
            label: None,
        })
    }

    pub fn sub(&self, other: &DenseOperator) -> Result<Self> {
        self.same_dim(other)?;
        Ok(DenseOperator {
            matrix: &self.matrix - &other.matrix,
            label: None,
        })
    }

    pub fn scale(&self, factor: C64) -> Self {
        DenseOperator {
            matrix: &self.matrix * factor,
            label: None,
        }
    }

    /// `trace(self * other)` in `O(dim^2)` without forming the product.
    pub fn trace_product(&self, other: &DenseOperator) -> Result<C64> {
        self.same_dim(other)?;
        let a = &self.matrix;
        let b = &other.matrix;
        let dim = self.dim();
        let mut acc = C64::new(0.0, 0.0);
        // column-major storage: a[(i, j)] * b[(j, i)]
        for j in 0..dim {
            for i in 0..dim {
                acc += a[(i, j)] * b[(j, i)];
            }
        }
        Ok(acc)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.matrix.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `||self - other||_F`.
    pub fn distance(&self, other: &DenseOperator) -> Result<f64> {
        self.same_dim(other)?;
        Ok(self
            .matrix
            .iter()
            .zip(other.matrix.iter())
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt())
    }

    /// `||A - A^dag||_F`.
    pub fn hermiticity_defect(&self) -> f64 {
        let dim = self.dim();
        let mut acc = 0.0;
        for i in 0..dim {
            for j in 0..dim {
                acc += (self.matrix[(i, j)] - self.matrix[(j, i)].conj()).norm_sqr();
            }
        }
        acc.sqrt()
    }

    /// `||A^2 - A||_F`.
    pub fn idempotence_defect(&self) -> f64 {
        let sq = &self.matrix * &self.matrix;
        sq.iter()
            .zip(self.matrix.iter())
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// Hermitian and idempotent within `tol`, relative to `max(1, ||A||_F)`.
    pub fn is_projector(&self, tol: f64) -> bool {
        let scale = self.frobenius_norm().max(1.0);
        self.hermiticity_defect() <= tol * scale && self.idempotence_defect() <= tol * scale
    }

    /// `||AB - BA||_F`.
    pub fn commutator_norm(&self, other: &DenseOperator) -> Result<f64> {
        let ab = self.mul(other)?;
        let ba = other.mul(self)?;
        ab.distance(&ba)
    }

    fn same_dim(&self, other: &DenseOperator) -> Result<()> {
        if self.dim() != other.dim() {
            return Err(Error::invalid(format!(
                "dimension mismatch: {} vs {}",
                self.dim(),
                other.dim()
            )));
        }
        Ok(())
    }
}

impl fmt::Debug for DenseOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DenseOperator")
            .field("dim", &self.dim())
            .field("label", &self.label)
            .finish()
    }
}

/// Kronecker product `A (x) B`.
pub fn kron(a: &DenseOperator, b: &DenseOperator, cap: MemoryCap) -> Result<DenseOperator> {
    let dim = a.dim() as u128 * b.dim() as u128;
    cap.check_dense("Kronecker product", dim, 1)?;
    let label = match (a.label(), b.label()) {
        (Some(x), Some(y)) => Some(format!("{x} (x) {y}")),
        _ => None,
    };
    Ok(DenseOperator {
        matrix: a.matrix.kronecker(&b.matrix),
        label,
    })
}

/// A bijection of `{0, ..., n-1}` stored as its image list.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation(Vec<usize>);

impl Permutation {
    pub fn new(images: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; images.len()];
        for &i in &images {
            if i >= images.len() || seen[i] {
                return Err(Error::invalid(format!("{images:?} is not a permutation")));
            }
            seen[i] = true;
        }
        Ok(Permutation(images))
    }

    pub fn identity(n: usize) -> Self {
        Permutation((0..n).collect())
    }

    /// Swap of positions `i` and `j` (zero-based).
    pub fn transposition(n: usize, i: usize, j: usize) -> Result<Self> {
        if i >= n || j >= n {
            return Err(Error::invalid(format!("transposition ({i} {j}) outside 0..{n}")));
        }
        let mut v: Vec<usize> = (0..n).collect();
        v.swap(i, j);
        Ok(Permutation(v))
    }

    /// All of `S_n` in lexicographic order of image lists.
    pub fn all(n: usize) -> impl Iterator<Item = Permutation> {
        (0..n).permutations(n).map(Permutation)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn images(&self) -> &[usize] {
        &self.0
    }

    pub fn apply(&self, i: usize) -> usize {
        self.0[i]
    }

    /// `self * other`, i.e. apply `other` first.
    pub fn compose(&self, other: &Permutation) -> Result<Self> {
        if self.len() != other.len() {
            return Err(Error::invalid("composing permutations of different degree"));
        }
        Ok(Permutation(other.0.iter().map(|&i| self.0[i]).collect()))
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.len()];
        for (i, &j) in self.0.iter().enumerate() {
            inv[j] = i;
        }
        Permutation(inv)
    }

    /// Cycle lengths sorted non-increasingly, as a partition of `n` with `n` rows.
    pub fn cycle_type(&self) -> Partition {
        let n = self.len();
        let mut seen = vec![false; n];
        let mut lengths = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                i = self.0[i];
                len += 1;
            }
            lengths.push(len);
        }
        lengths.sort_unstable_by(|a, b| b.cmp(a));
        Partition::new(lengths, n.max(1)).expect("cycle lengths form a partition")
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Permutation{:?}", self.0)
    }
}

/// The action of a permutation on the tensor factors of `(C^local_dim)^{(x)n}`.
///
/// Basis vector `|i_1 ... i_n>` is sent to `|i_{s^-1(1)} ... i_{s^-1(n)}>`:
/// the digit found at factor `k` moves to factor `sigma(k)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PermutationAction {
    sigma: Permutation,
    local_dim: usize,
}

impl PermutationAction {
    pub fn new(sigma: Permutation, local_dim: usize) -> Result<Self> {
        if local_dim == 0 || sigma.is_empty() {
            return Err(Error::invalid("need local_dim >= 1 and n >= 1"));
        }
        Ok(PermutationAction { sigma, local_dim })
    }

    pub fn sigma(&self) -> &Permutation {
        &self.sigma
    }

    pub fn local_dim(&self) -> usize {
        self.local_dim
    }

    pub fn n(&self) -> usize {
        self.sigma.len()
    }

    /// Dimension of the space acted on, `local_dim^n`.
    pub fn dim(&self) -> usize {
        self.local_dim.pow(self.n() as u32)
    }

    /// Index table: basis vector `i` is mapped to `table[i]`.
    pub fn index_table(&self) -> Vec<usize> {
        let n = self.n();
        let k = self.local_dim;
        // weight of each output position
        let mut weights = vec![1usize; n];
        for pos in (0..n.saturating_sub(1)).rev() {
            weights[pos] = weights[pos + 1] * k;
        }
        let moved: Vec<usize> = (0..n).map(|pos| weights[self.sigma.apply(pos)]).collect();
        let mut table = vec![0usize; self.dim()];
        let mut digits = vec![0usize; n];
        for (i, slot) in table.iter_mut().enumerate() {
            let mut rest = i;
            for pos in (0..n).rev() {
                digits[pos] = rest % k;
                rest /= k;
            }
            *slot = digits.iter().zip(&moved).map(|(d, w)| d * w).sum();
        }
        table
    }

    /// Applies the permutation to a state vector.
    pub fn apply_to_vector(&self, v: &[C64]) -> Result<Vec<C64>> {
        if v.len() != self.dim() {
            return Err(Error::invalid(format!(
                "vector has length {}, expected {}",
                v.len(),
                self.dim()
            )));
        }
        let mut out = vec![C64::new(0.0, 0.0); v.len()];
        for (i, j) in self.index_table().into_iter().enumerate() {
            out[j] = v[i];
        }
        Ok(out)
    }

    /// `U A U^dag` for the permutation unitary `U`, in `O(dim^2)`.
    pub fn conjugate(&self, op: &DenseOperator) -> Result<DenseOperator> {
        if op.dim() != self.dim() {
            return Err(Error::invalid(format!(
                "operator has dimension {}, expected {}",
                op.dim(),
                self.dim()
            )));
        }
        let table = self.index_table();
        let dim = op.dim();
        let mut out = DMatrix::zeros(dim, dim);
        for j in 0..dim {
            for i in 0..dim {
                out[(table[i], table[j])] = op.matrix[(i, j)];
            }
        }
        Ok(DenseOperator {
            matrix: out,
            label: op.label.clone(),
        })
    }
}

/// The 0/1 unitary permuting tensor factors, see [`PermutationAction`].
pub fn perm_operator(action: &PermutationAction, cap: MemoryCap) -> Result<DenseOperator> {
    let dim = action.dim();
    cap.check_dense("permutation operator", dim as u128, 1)?;
    let mut m = DMatrix::zeros(dim, dim);
    for (i, j) in action.index_table().into_iter().enumerate() {
        m[(j, i)] = C64::new(1.0, 0.0);
    }
    Ok(DenseOperator {
        matrix: m,
        label: Some(format!("U{:?}", action.sigma.images())),
    })
}

/// `scale * sum_{sigma in S_n} weight(sigma) U(sigma)` on `(C^local_dim)^{(x)n}`.
///
/// The weights are accumulated in a fixed order before scaling, so integer
/// weights (characters) are summed exactly and the result is bit-stable.
pub fn weighted_permutation_sum(
    local_dim: usize,
    n: usize,
    scale: f64,
    mut weight: impl FnMut(&Permutation) -> f64,
    cap: MemoryCap,
) -> Result<DenseOperator> {
    if local_dim == 0 || n == 0 {
        return Err(Error::invalid("need local_dim >= 1 and n >= 1"));
    }
    let dim = tensor_dim(local_dim, n);
    cap.check_dense("permutation sum", dim, 1)?;
    let dim = dim as usize;
    let mut acc = DMatrix::<f64>::zeros(dim, dim);
    for sigma in Permutation::all(n) {
        let w = weight(&sigma);
        if w == 0.0 {
            continue;
        }
        let action = PermutationAction::new(sigma, local_dim)?;
        for (i, j) in action.index_table().into_iter().enumerate() {
            acc[(j, i)] += w;
        }
    }
    Ok(DenseOperator {
        matrix: acc.map(|x| C64::new(x * scale, 0.0)),
        label: None,
    })
}

fn factorial_f64(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

/// Projector onto the symmetric subspace, `(1/n!) sum_sigma U(sigma)`.
pub fn symmetrizer(local_dim: usize, n: usize, cap: MemoryCap) -> Result<DenseOperator> {
    let op = weighted_permutation_sum(local_dim, n, 1.0 / factorial_f64(n), |_| 1.0, cap)?;
    Ok(op.with_label(format!("Sym({local_dim}, {n})")))
}
