//! Bipartite input states on `C^d (x) C^d`.
//!
//! The joint index of `|a>|b>` is `a * d + b`. States are described by a
//! [`BipartiteStateSpec`] and turned into density matrices by [`build_state`].
//!
//! State-spec JSON:
//!
//! ```json
//! {"d": 2, "kind": "pure_schmidt",   "schmidt": [0.5, 0.5]}
//! {"d": 2, "kind": "density_matrix", "matrix": [[[0.25, 0], [0, 0], ...], ...]}
//! {"d": 2, "kind": "random_pure",    "seed": 7}
//! {"d": 2, "kind": "random_mixed",   "seed": 7, "rank": 2}
//! ```
//!
//! Matrix entries are `[re, im]` pairs, one array per row. Keys other than
//! the ones listed for a kind are rejected, and every validation error names
//! the offending key.

use nalgebra::{DMatrix, DVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::partitions::ProbabilityVector;
use crate::tensorops::{dense_bytes, kron, tensor_dim, DenseOperator, MemoryCap, C64};
use crate::tolerance;

/// How the input state is produced.
#[derive(Clone, Debug, PartialEq)]
pub enum StateKind {
    /// `sum_i sqrt(p_i) |i>|i>`.
    PureSchmidt { schmidt: ProbabilityVector },
    /// An explicit `d^2 x d^2` density matrix.
    DensityMatrix { matrix: DMatrix<C64> },
    /// A normalised complex Gaussian vector.
    RandomPure { seed: u64 },
    /// `G G^dag / trace` with `G` a `d^2 x rank` complex Gaussian matrix.
    RandomMixed { seed: u64, rank: usize },
}

impl StateKind {
    pub fn name(&self) -> &'static str {
        match self {
            StateKind::PureSchmidt { .. } => "pure_schmidt",
            StateKind::DensityMatrix { .. } => "density_matrix",
            StateKind::RandomPure { .. } => "random_pure",
            StateKind::RandomMixed { .. } => "random_mixed",
        }
    }
}

/// A validated description of a state on `C^d (x) C^d`.
#[derive(Clone, Debug, PartialEq)]
pub struct BipartiteStateSpec {
    d: usize,
    kind: StateKind,
}

fn check_d(d: usize) -> Result<()> {
    if d == 0 {
        return Err(Error::validation("d", "must be a positive integer"));
    }
    Ok(())
}

impl BipartiteStateSpec {
    pub fn pure_schmidt(schmidt: ProbabilityVector) -> Result<Self> {
        let d = schmidt.len();
        check_d(d)?;
        Ok(BipartiteStateSpec {
            d,
            kind: StateKind::PureSchmidt { schmidt },
        })
    }

    pub fn density_matrix(d: usize, matrix: DMatrix<C64>) -> Result<Self> {
        check_d(d)?;
        validate_density_matrix(&matrix, d, "matrix")?;
        Ok(BipartiteStateSpec {
            d,
            kind: StateKind::DensityMatrix { matrix },
        })
    }

    pub fn random_pure(d: usize, seed: u64) -> Result<Self> {
        check_d(d)?;
        Ok(BipartiteStateSpec {
            d,
            kind: StateKind::RandomPure { seed },
        })
    }

    pub fn random_mixed(d: usize, seed: u64, rank: usize) -> Result<Self> {
        check_d(d)?;
        if rank == 0 || rank > d * d {
            return Err(Error::validation(
                "rank",
                format!("must lie in 1..={} for d = {d}", d * d),
            ));
        }
        Ok(BipartiteStateSpec {
            d,
            kind: StateKind::RandomMixed { seed, rank },
        })
    }

    /// The maximally mixed state `I / d^2`.
    pub fn maximally_mixed(d: usize) -> Result<Self> {
        let dd = d * d;
        Self::density_matrix(d, DMatrix::identity(dd, dd) / C64::new(dd as f64, 0.0))
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn kind(&self) -> &StateKind {
        &self.kind
    }

    /// Replaces the seed of a random kind; other kinds are returned unchanged.
    pub fn with_seed(mut self, new_seed: u64) -> Self {
        match &mut self.kind {
            StateKind::RandomPure { seed } | StateKind::RandomMixed { seed, .. } => *seed = new_seed,
            _ => {}
        }
        self
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        let value: Value = serde_json::from_str(text)
            .map_err(|e| Error::validation("state", format!("not valid JSON: {e}")))?;
        Self::from_json(&value)
    }

    pub fn from_json(value: &Value) -> Result<Self> {
        let obj = value
            .as_object()
            .ok_or_else(|| Error::validation("state", "must be a JSON object"))?;
        let d = obj
            .get("d")
            .ok_or_else(|| Error::validation("d", "missing"))?
            .as_u64()
            .filter(|&d| d >= 1)
            .ok_or_else(|| Error::validation("d", "must be a positive integer"))? as usize;
        let kind = obj
            .get("kind")
            .ok_or_else(|| Error::validation("kind", "missing"))?
            .as_str()
            .ok_or_else(|| Error::validation("kind", "must be a string"))?;
        let allowed: &[&str] = match kind {
            "pure_schmidt" => &["schmidt"],
            "density_matrix" => &["matrix"],
            "random_pure" => &["seed"],
            "random_mixed" => &["seed", "rank"],
            other => {
                return Err(Error::validation(
                    "kind",
                    format!("unknown kind `{other}`; expected pure_schmidt, density_matrix, random_pure or random_mixed"),
                ))
            }
        };
        for key in obj.keys() {
            if key != "d" && key != "kind" && !allowed.contains(&key.as_str()) {
                return Err(Error::validation(
                    key.as_str(),
                    format!("not allowed for kind `{kind}`"),
                ));
            }
        }
        let require = |key: &str| {
            obj.get(key)
                .ok_or_else(|| Error::validation(key, format!("required for kind `{kind}`")))
        };
        let seed = |obj: &Map<String, Value>| -> Result<u64> {
            obj.get("seed")
                .ok_or_else(|| Error::validation("seed", format!("required for kind `{kind}`")))?
                .as_u64()
                .ok_or_else(|| Error::validation("seed", "must be a non-negative 64-bit integer"))
        };
        match kind {
            "pure_schmidt" => {
                let entries = parse_reals(require("schmidt")?, "schmidt")?;
                if entries.len() != d {
                    return Err(Error::validation(
                        "schmidt",
                        format!("has {} entries but d = {d}", entries.len()),
                    ));
                }
                let probs = ProbabilityVector::new(entries)
                    .map_err(|e| Error::validation("schmidt", strip_prefix(e)))?;
                Self::pure_schmidt(probs)
            }
            "density_matrix" => {
                let matrix = parse_matrix(require("matrix")?, d * d)?;
                Self::density_matrix(d, matrix)
            }
            "random_pure" => Self::random_pure(d, seed(obj)?),
            _ => {
                let rank = require("rank")?
                    .as_u64()
                    .ok_or_else(|| Error::validation("rank", "must be a positive integer"))?;
                Self::random_mixed(d, seed(obj)?, rank as usize)
            }
        }
    }

    pub fn to_json(&self) -> Value {
        match &self.kind {
            StateKind::PureSchmidt { schmidt } => {
                json!({"d": self.d, "kind": "pure_schmidt", "schmidt": schmidt.entries()})
            }
            StateKind::DensityMatrix { matrix } => {
                let rows: Vec<Vec<[f64; 2]>> = (0..matrix.nrows())
                    .map(|i| (0..matrix.ncols()).map(|j| [matrix[(i, j)].re, matrix[(i, j)].im]).collect())
                    .collect();
                json!({"d": self.d, "kind": "density_matrix", "matrix": rows})
            }
            StateKind::RandomPure { seed } => json!({"d": self.d, "kind": "random_pure", "seed": seed}),
            StateKind::RandomMixed { seed, rank } => {
                json!({"d": self.d, "kind": "random_mixed", "seed": seed, "rank": rank})
            }
        }
    }
}

fn strip_prefix(e: Error) -> String {
    match e {
        Error::InvalidArgument(msg) => msg,
        other => other.to_string(),
    }
}

fn parse_reals(value: &Value, key: &str) -> Result<Vec<f64>> {
    value
        .as_array()
        .ok_or_else(|| Error::validation(key, "must be an array of numbers"))?
        .iter()
        .map(|x| {
            x.as_f64()
                .ok_or_else(|| Error::validation(key, "must be an array of numbers"))
        })
        .collect()
}

fn parse_matrix(value: &Value, dim: usize) -> Result<DMatrix<C64>> {
    let rows = value
        .as_array()
        .ok_or_else(|| Error::validation("matrix", "must be an array of rows"))?;
    if rows.len() != dim {
        return Err(Error::validation(
            "matrix",
            format!("has {} rows, expected d^2 = {dim}", rows.len()),
        ));
    }
    let mut m = DMatrix::zeros(dim, dim);
    for (i, row) in rows.iter().enumerate() {
        let row = row
            .as_array()
            .filter(|r| r.len() == dim)
            .ok_or_else(|| Error::validation("matrix", format!("row {i} must hold {dim} [re, im] pairs")))?;
        for (j, entry) in row.iter().enumerate() {
            let pair = parse_reals(entry, "matrix")
                .ok()
                .filter(|p| p.len() == 2)
                .ok_or_else(|| Error::validation("matrix", format!("entry ({i}, {j}) must be a [re, im] pair")))?;
            m[(i, j)] = C64::new(pair[0], pair[1]);
        }
    }
    Ok(m)
}

/// Checks shape `d^2 x d^2`, Hermiticity, unit trace and PSD, all at `1e-10`.
pub fn validate_density_matrix(m: &DMatrix<C64>, d: usize, key: &str) -> Result<()> {
    let dim = d * d;
    if m.nrows() != dim || m.ncols() != dim {
        return Err(Error::validation(
            key,
            format!("is {}x{}, expected {dim}x{dim} for d = {d}", m.nrows(), m.ncols()),
        ));
    }
    let tol = tolerance::DENSITY_MATRIX;
    if m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::validation(key, "has non-finite entries"));
    }
    let herm = (&m.adjoint() - m).iter().map(|z| z.norm()).fold(0.0, f64::max);
    if herm > tol {
        return Err(Error::validation(key, format!("is not Hermitian (defect {herm:e})")));
    }
    let tr = m.trace();
    if (tr.re - 1.0).abs() > tol || tr.im.abs() > tol {
        return Err(Error::validation(key, format!("has trace {tr}, not 1")));
    }
    let min = m.clone().symmetric_eigenvalues().min();
    if min < -tol {
        return Err(Error::validation(
            key,
            format!("is not positive semidefinite (eigenvalue {min:e})"),
        ));
    }
    Ok(())
}

fn complex_gaussian(rng: &mut ChaCha8Rng) -> C64 {
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    C64::new(re, im)
}

/// The density matrix described by `spec`. Random kinds are reproducible
/// bit for bit for a fixed seed.
pub fn build_state(spec: &BipartiteStateSpec) -> Result<DenseOperator> {
    let d = spec.d;
    let dim = d * d;
    let op = match &spec.kind {
        StateKind::PureSchmidt { schmidt } => {
            let mut v = vec![C64::new(0.0, 0.0); dim];
            for (i, &p) in schmidt.entries().iter().enumerate() {
                v[i * d + i] = C64::new(p.sqrt(), 0.0);
            }
            DenseOperator::outer(&v)
        }
        StateKind::DensityMatrix { matrix } => DenseOperator::from_matrix(matrix.clone())?,
        StateKind::RandomPure { seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(*seed);
            let v: Vec<C64> = (0..dim).map(|_| complex_gaussian(&mut rng)).collect();
            let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            let v: Vec<C64> = v.into_iter().map(|z| z / norm).collect();
            DenseOperator::outer(&v)
        }
        StateKind::RandomMixed { seed, rank } => {
            let mut rng = ChaCha8Rng::seed_from_u64(*seed);
            let g = DMatrix::from_fn(dim, *rank, |_, _| complex_gaussian(&mut rng));
            let gg = &g * g.adjoint();
            let tr = gg.trace();
            DenseOperator::from_matrix(gg / tr)?
        }
    };
    Ok(op.with_label(spec.kind.name()))
}

/// Spectral data of a bipartite density matrix.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StateAnalysis {
    /// Eigenvalues, non-increasing.
    pub spectrum: Vec<f64>,
    /// Largest eigenvalue.
    pub p1: f64,
    /// `trace(rho^2)`.
    pub purity: f64,
    pub is_pure: bool,
    /// Eigenvalues of `Tr_B rho`, non-increasing, reported for pure states.
    pub schmidt_probs: Option<Vec<f64>>,
}

/// `Tr_B rho` for `rho` on `C^d (x) C^d`.
pub fn partial_trace_b(rho: &DenseOperator, d: usize) -> Result<DenseOperator> {
    if rho.dim() != d * d {
        return Err(Error::invalid(format!(
            "operator has dimension {}, expected d^2 = {}",
            rho.dim(),
            d * d
        )));
    }
    let m = DMatrix::from_fn(d, d, |a, a2| {
        (0..d).map(|b| rho.get(a * d + b, a2 * d + b)).sum()
    });
    DenseOperator::from_matrix(m)
}

fn sorted_eigenvalues(m: &DMatrix<C64>) -> Vec<f64> {
    let mut ev: Vec<f64> = m.clone().symmetric_eigenvalues().iter().copied().collect();
    ev.sort_by(|a, b| b.total_cmp(a));
    ev
}

/// Eigen-decomposition `rho = sum_k r_k |psi_k><psi_k|`, eigenvalues
/// non-increasing.
pub fn spectral_decomposition(rho: &DenseOperator) -> Vec<(f64, Vec<C64>)> {
    let eig = rho.matrix().clone().symmetric_eigen();
    let mut pairs: Vec<(f64, Vec<C64>)> = eig
        .eigenvalues
        .iter()
        .enumerate()
        .map(|(k, &r)| (r, eig.eigenvectors.column(k).iter().copied().collect()))
        .collect();
    pairs.sort_by(|a, b| b.0.total_cmp(&a.0));
    pairs
}

pub fn analyze(rho: &DenseOperator, d: usize) -> Result<StateAnalysis> {
    validate_density_matrix(rho.matrix(), d, "rho")?;
    let spectrum = sorted_eigenvalues(rho.matrix());
    let total: f64 = spectrum.iter().sum();
    if (total - 1.0).abs() > tolerance::SPECTRUM_SUM {
        return Err(Error::Invariant(format!("spectrum sums to {total}")));
    }
    let purity = rho.matrix().iter().map(|z| z.norm_sqr()).sum::<f64>();
    let is_pure = purity >= 1.0 - tolerance::PURITY;
    let schmidt_probs = if is_pure {
        Some(sorted_eigenvalues(partial_trace_b(rho, d)?.matrix()))
    } else {
        None
    };
    Ok(StateAnalysis {
        p1: spectrum[0],
        spectrum,
        purity,
        is_pure,
        schmidt_probs,
    })
}

/// `rho^{(x)n}` in copy-major order.
pub fn tensor_power(rho: &DenseOperator, n: usize, cap: MemoryCap) -> Result<DenseOperator> {
    if n == 0 {
        return Err(Error::invalid("tensor power needs n >= 1"));
    }
    let dim = tensor_dim(rho.dim(), n);
    cap.check(format!("tensor power of order {n}"), dense_bytes(dim))?;
    let mut out = rho.clone();
    for _ in 1..n {
        out = kron(&out, rho, cap)?;
    }
    Ok(out.with_label(format!("rho^{n}")))
}

/// `|Phi> = (1/sqrt d) sum_i |i>|i>` as a vector.
pub fn maximally_entangled_vector(d: usize) -> DVector<C64> {
    let mut v = DVector::zeros(d * d);
    let amp = C64::new(1.0 / (d as f64).sqrt(), 0.0);
    for i in 0..d {
        v[i * d + i] = amp;
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(text: &str) -> Result<BipartiteStateSpec> {
        BipartiteStateSpec::from_json_str(text)
    }

    fn key_of(e: Error) -> String {
        match e {
            Error::Validation { key, .. } => key,
            other => panic!("expected a validation error, got {other}"),
        }
    }

    #[test]
    fn product_state() {
        let s = spec(r#"{"d": 2, "kind": "pure_schmidt", "schmidt": [1, 0]}"#).unwrap();
        let rho = build_state(&s).unwrap();
        assert_eq!(rho.get(0, 0), C64::new(1.0, 0.0));
        let a = analyze(&rho, 2).unwrap();
        assert!((a.purity - 1.0).abs() < 1e-15);
        assert!(a.is_pure);
    }

    #[test]
    fn maximally_entangled() {
        let s = spec(r#"{"d": 2, "kind": "pure_schmidt", "schmidt": [0.5, 0.5]}"#).unwrap();
        let rho = build_state(&s).unwrap();
        let reduced = partial_trace_b(&rho, 2).unwrap();
        let half = DenseOperator::diagonal(&[0.5, 0.5]);
        assert!(reduced.distance(&half).unwrap() < 1e-15);
        let a = analyze(&rho, 2).unwrap();
        assert!((a.p1 - 1.0).abs() < 1e-12);
        assert!((a.purity - 1.0).abs() < 1e-12);
        let schmidt = a.schmidt_probs.unwrap();
        assert!((schmidt[0] - 0.5).abs() < 1e-12 && (schmidt[1] - 0.5).abs() < 1e-12);
        let phi = maximally_entangled_vector(2);
        let outer = DenseOperator::from_matrix(&phi * phi.adjoint()).unwrap();
        assert!(outer.distance(&rho).unwrap() < 1e-15);
    }

    #[test]
    fn maximally_mixed_analysis() {
        let rho = build_state(&BipartiteStateSpec::maximally_mixed(2).unwrap()).unwrap();
        let a = analyze(&rho, 2).unwrap();
        for x in &a.spectrum {
            assert!((x - 0.25).abs() < 1e-15);
        }
        assert!((a.purity - 0.25).abs() < 1e-15);
        assert!(!a.is_pure);
        assert!(a.schmidt_probs.is_none());
    }

    #[test]
    fn werner_like_mixture() {
        let phi = maximally_entangled_vector(2);
        let m = (&phi * phi.adjoint()) * C64::new(0.7, 0.0)
            + DMatrix::identity(4, 4) * C64::new(0.3 / 4.0, 0.0);
        let s = BipartiteStateSpec::density_matrix(2, m).unwrap();
        let a = analyze(&build_state(&s).unwrap(), 2).unwrap();
        assert!((a.p1 - 0.775).abs() < 1e-12);
        assert!((a.spectrum[3] - 0.075).abs() < 1e-12);
    }

    #[test]
    fn json_validation_names_keys() {
        assert_eq!(key_of(spec(r#"{"kind": "random_pure", "seed": 1}"#).unwrap_err()), "d");
        assert_eq!(key_of(spec(r#"{"d": 2}"#).unwrap_err()), "kind");
        assert_eq!(key_of(spec(r#"{"d": 2, "kind": "bell"}"#).unwrap_err()), "kind");
        assert_eq!(key_of(spec(r#"{"d": 0, "kind": "random_pure", "seed": 1}"#).unwrap_err()), "d");
        assert_eq!(key_of(spec(r#"{"d": 2, "kind": "random_pure"}"#).unwrap_err()), "seed");
        assert_eq!(key_of(spec(r#"{"d": 2, "kind": "random_pure", "seed": -3}"#).unwrap_err()), "seed");
        assert_eq!(
            key_of(spec(r#"{"d": 2, "kind": "random_pure", "seed": 1, "rank": 2}"#).unwrap_err()),
            "rank"
        );
        assert_eq!(key_of(spec(r#"{"d": 2, "kind": "random_mixed", "seed": 1, "rank": 5}"#).unwrap_err()), "rank");
        assert_eq!(key_of(spec(r#"{"d": 2, "kind": "pure_schmidt", "schmidt": [0.5]}"#).unwrap_err()), "schmidt");
        assert_eq!(key_of(spec(r#"{"d": 2, "kind": "pure_schmidt", "schmidt": [0.5, 0.6]}"#).unwrap_err()), "schmidt");
        assert_eq!(key_of(spec(r#"{"d": 2, "kind": "pure_schmidt", "schmidt": "x"}"#).unwrap_err()), "schmidt");
        assert_eq!(key_of(spec(r#"{"d": 1, "kind": "density_matrix", "matrix": [[[2, 0]]]}"#).unwrap_err()), "matrix");
        assert_eq!(key_of(spec(r#"{"d": 1, "kind": "density_matrix", "matrix": [[1]]}"#).unwrap_err()), "matrix");
        assert_eq!(key_of(spec("[1, 2]").unwrap_err()), "state");
        assert_eq!(key_of(spec("{not json").unwrap_err()), "state");
    }

    #[test]
    fn non_psd_and_non_hermitian_rejected() {
        let neg = DMatrix::from_diagonal(&DVector::from_vec(vec![
            C64::new(1.1, 0.0),
            C64::new(-0.1, 0.0),
            C64::new(0.0, 0.0),
            C64::new(0.0, 0.0),
        ]));
        assert!(matches!(
            BipartiteStateSpec::density_matrix(2, neg),
            Err(Error::Validation { ref key, ref reason }) if key == "matrix" && reason.contains("semidefinite")
        ));
        let mut m = DMatrix::identity(4, 4) / C64::new(4.0, 0.0);
        m[(0, 1)] = C64::new(0.0, 0.1);
        assert!(matches!(
            BipartiteStateSpec::density_matrix(2, m),
            Err(Error::Validation { ref reason, .. }) if reason.contains("Hermitian")
        ));
    }

    #[test]
    fn json_round_trip() {
        let specs = [
            BipartiteStateSpec::random_mixed(3, 42, 4).unwrap(),
            BipartiteStateSpec::random_pure(2, 9).unwrap(),
            BipartiteStateSpec::pure_schmidt(ProbabilityVector::new(vec![0.25, 0.75]).unwrap()).unwrap(),
            BipartiteStateSpec::maximally_mixed(2).unwrap(),
        ];
        for s in specs {
            let back = BipartiteStateSpec::from_json(&s.to_json()).unwrap();
            assert_eq!(back, s);
        }
    }

    #[test]
    fn seeded_states_are_reproducible() {
        for s in [
            BipartiteStateSpec::random_pure(3, 123).unwrap(),
            BipartiteStateSpec::random_mixed(2, 123, 3).unwrap(),
        ] {
            let a = build_state(&s).unwrap();
            let b = build_state(&s).unwrap();
            assert_eq!(a.matrix(), b.matrix());
            let c = build_state(&s.clone().with_seed(124)).unwrap();
            assert_ne!(a.matrix(), c.matrix());
        }
    }

    #[test]
    fn random_states_are_valid() {
        for seed in 0..10 {
            for d in [2, 3] {
                let pure = build_state(&BipartiteStateSpec::random_pure(d, seed).unwrap()).unwrap();
                let a = analyze(&pure, d).unwrap();
                assert!(a.is_pure);
                assert!(a.p1 >= 1.0 / (d * d) as f64 && a.p1 <= 1.0 + 1e-12);
                for rank in 1..=d * d {
                    let mixed = build_state(&BipartiteStateSpec::random_mixed(d, seed, rank).unwrap()).unwrap();
                    let a = analyze(&mixed, d).unwrap();
                    assert!(a.p1 >= 1.0 / (d * d) as f64 - 1e-12 && a.p1 <= 1.0 + 1e-12);
                    let nonzero = a.spectrum.iter().filter(|&&x| x > 1e-12).count();
                    assert_eq!(nonzero, rank);
                }
            }
        }
    }

    #[test]
    fn pure_state_schmidt_spectrum() {
        let probs = [0.6, 0.3, 0.1];
        let s = BipartiteStateSpec::pure_schmidt(ProbabilityVector::new(probs.to_vec()).unwrap()).unwrap();
        let a = analyze(&build_state(&s).unwrap(), 3).unwrap();
        for (x, y) in a.schmidt_probs.unwrap().iter().zip(probs) {
            assert!((x - y).abs() < 1e-9);
        }
    }

    #[test]
    fn tensor_powers() {
        let cap = MemoryCap::default();
        let rho = build_state(&BipartiteStateSpec::random_mixed(2, 1, 3).unwrap()).unwrap();
        assert_eq!(tensor_power(&rho, 1, cap).unwrap().matrix(), rho.matrix());
        for n in 1..=4 {
            let t = tensor_power(&rho, n, cap).unwrap().trace();
            assert!((t.re - 1.0).abs() < 1e-9 && t.im.abs() < 1e-9);
        }
        let pure = build_state(&BipartiteStateSpec::random_pure(2, 4).unwrap()).unwrap();
        let sq = tensor_power(&pure, 2, cap).unwrap();
        let purity: f64 = sq.matrix().iter().map(|z| z.norm_sqr()).sum();
        assert!((purity - 1.0).abs() < 1e-12);
        assert!(matches!(tensor_power(&rho, 8, cap), Err(Error::ResourceLimit { .. })));
        assert!(tensor_power(&rho, 0, cap).is_err());
    }
}
