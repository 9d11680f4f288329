//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line each and
//! exits non-zero if any failed.
//!
//! Reference values come from the closed-form oracles at the top of this
//! file, not from the library.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use locc_purity::partitions::{
    check_dim_entropy_bound, enumerate_partitions, hook_dim, type_region_bound, weyl_dim, Partition,
    ProbabilityVector,
};
use locc_purity::protocol::{Engine, Evaluator};
use locc_purity::schurweyl::{bipartite_product, build_projector_set, sym_projector_bipartite};
use locc_purity::states::{analyze, build_state, BipartiteStateSpec};
use locc_purity::tensorops::{DenseOperator, MemoryCap};
use locc_purity::Complex64;
use nalgebra::DMatrix;
use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        let ok: bool = $cond;
        if !ok {
            return Err(format!($($fmt)+));
        }
    };
}

// ---- oracles ----

fn partitions_oracle(n: usize, d: usize) -> Vec<Vec<usize>> {
    fn go(rest: usize, max: usize, rows: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if rest == 0 {
            out.push(cur.clone());
            return;
        }
        if rows == 0 {
            return;
        }
        for part in (1..=rest.min(max)).rev() {
            cur.push(part);
            go(rest - part, part, rows - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(n, n, d, &mut Vec::new(), &mut out);
    out
}

fn hooks(parts: &[usize]) -> Vec<usize> {
    let mut h = Vec::new();
    for (i, &row) in parts.iter().enumerate() {
        for j in 0..row {
            let arm = row - j - 1;
            let leg = parts[i + 1..].iter().filter(|&&r| r > j).count();
            h.push(arm + leg + 1);
        }
    }
    h
}

fn hook_oracle(parts: &[usize]) -> u128 {
    let n: usize = parts.iter().sum();
    let fact: u128 = (1..=n as u128).product();
    fact / hooks(parts).iter().map(|&h| h as u128).product::<u128>()
}

fn ln_hook_oracle(parts: &[usize]) -> f64 {
    let n: usize = parts.iter().sum();
    (1..=n).map(|k| (k as f64).ln()).sum::<f64>() - hooks(parts).iter().map(|&h| (h as f64).ln()).sum::<f64>()
}

/// Product over cells of `(d + content) / hook`.
fn weyl_oracle(parts: &[usize], d: usize) -> u128 {
    let mut num: u128 = 1;
    for (i, &row) in parts.iter().enumerate() {
        for j in 0..row {
            num *= (d + j - i) as u128;
        }
    }
    num / hooks(parts).iter().map(|&h| h as u128).product::<u128>()
}

fn binomial(n: u128, k: u128) -> u128 {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

fn h_oracle(n: usize, x: &[f64]) -> f64 {
    if n == 0 {
        return 1.0;
    }
    match x.split_first() {
        None => 0.0,
        Some((&first, rest)) => (0..=n).map(|k| first.powi(k as i32) * h_oracle(n - k, rest)).sum(),
    }
}

/// Two-variable Schur polynomial `s_(a,b)(x, y) = sum_{k=b}^{a} x^k y^{a+b-k}`.
fn schur2(a: usize, b: usize, x: f64, y: f64) -> f64 {
    (b..=a).map(|k| x.powi(k as i32) * y.powi((a + b - k) as i32)).sum()
}

fn spectrum(rho: &DenseOperator) -> Vec<f64> {
    rho.matrix()
        .clone()
        .symmetric_eigenvalues()
        .iter()
        .map(|&x| x.max(0.0))
        .collect()
}

fn frob(m: &DMatrix<Complex64>) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

fn state(spec: BipartiteStateSpec) -> DenseOperator {
    build_state(&spec).expect("state builds")
}

fn mixed_test_states() -> Vec<(String, DenseOperator)> {
    let mut states = vec![
        (
            "pure (0.8,0.2)".to_string(),
            state(BipartiteStateSpec::pure_schmidt(ProbabilityVector::new(vec![0.8, 0.2]).unwrap()).unwrap()),
        ),
        ("I/4".to_string(), state(BipartiteStateSpec::maximally_mixed(2).unwrap())),
    ];
    for (seed, rank) in [(1, 2), (2, 3), (3, 4), (4, 2), (5, 3)] {
        states.push((
            format!("random_mixed seed {seed} rank {rank}"),
            state(BipartiteStateSpec::random_mixed(2, seed, rank).unwrap()),
        ));
    }
    states
}

// ---- criteria ----

fn dimension_identity() -> Outcome {
    let mut cases = 0;
    for d in [2usize, 3] {
        for n in 1..=8 {
            let lambdas = enumerate_partitions(n, d).map_err(|e| e.to_string())?;
            let expected = partitions_oracle(n, d);
            ensure!(lambdas.len() == expected.len(), "d={d} n={n}: {} indices, expected {}", lambdas.len(), expected.len());
            let mut total = BigUint::from(0u32);
            for (lambda, parts) in lambdas.iter().zip(&expected) {
                ensure!(lambda.nonzero_parts() == parts.as_slice(), "d={d} n={n}: {lambda} vs {parts:?}");
                let u = weyl_dim(lambda, d).map_err(|e| e.to_string())?;
                let v = hook_dim(lambda);
                ensure!(u == BigUint::from(weyl_oracle(parts, d)), "dim U{lambda}, d={d}");
                ensure!(v == BigUint::from(hook_oracle(parts)), "d{lambda}");
                total += u * v;
            }
            ensure!(total == BigUint::from(d).pow(n as u32), "d={d} n={n}: sum = {total}");
            cases += 1;
        }
    }
    Ok(format!("{cases} (d, n) pairs exact"))
}

fn projector_suite() -> Outcome {
    let tol = 1e-8;
    let mut worst: f64 = 0.0;
    for d in [2usize, 3] {
        for n in 1..=4 {
            let set = build_projector_set(d, n, MemoryCap::default()).map_err(|e| e.to_string())?;
            let dim = d.pow(n as u32);
            let mut sum = DMatrix::<Complex64>::zeros(dim, dim);
            let ops: Vec<_> = set.iter().collect();
            for (i, (lambda, p)) in ops.iter().enumerate() {
                let m = p.matrix();
                let idem = frob(&(m * m - m));
                let herm = frob(&(m - m.adjoint()));
                let expected = (weyl_oracle(lambda.nonzero_parts(), d) * hook_oracle(lambda.nonzero_parts())) as f64;
                let trace = (m.trace().re - expected).abs();
                for (_, q) in &ops[i + 1..] {
                    let cross = frob(&(m * q.matrix()));
                    worst = worst.max(cross);
                    ensure!(cross <= tol, "d={d} n={n} {lambda}: orthogonality defect {cross:e}");
                }
                worst = worst.max(idem).max(herm).max(trace);
                ensure!(idem <= tol && herm <= tol && trace <= tol, "d={d} n={n} {lambda}: idempotence {idem:e}, hermiticity {herm:e}, trace {trace:e}");
                sum += m;
            }
            let complete = frob(&(sum - DMatrix::identity(dim, dim)));
            worst = worst.max(complete);
            ensure!(complete <= tol, "d={d} n={n}: completeness defect {complete:e}");
        }
    }
    Ok(format!("worst defect {worst:.2e}"))
}

fn block_structure() -> Outcome {
    let d = 2;
    let cap = MemoryCap::default();
    let mut worst_trace: f64 = 0.0;
    let mut worst_cross: f64 = 0.0;
    for n in 1..=3 {
        let pi = sym_projector_bipartite(d, n, cap).map_err(|e| e.to_string())?;
        let pi = pi.operator().matrix();
        let set = build_projector_set(d, n, cap).map_err(|e| e.to_string())?;
        let mut sum_sq: u128 = 0;
        for (lambda, p) in set.iter() {
            for (mu, q) in set.iter() {
                let block = bipartite_product(p, q, n, d, cap).map_err(|e| e.to_string())?;
                let prod = pi * block.matrix();
                if lambda == mu {
                    let u = weyl_oracle(lambda.nonzero_parts(), d);
                    let err = (prod.trace().re - (u * u) as f64).abs();
                    worst_trace = worst_trace.max(err);
                    ensure!(err <= 1e-6, "n={n} {lambda}: trace off by {err:e}");
                } else {
                    let norm = frob(&prod);
                    worst_cross = worst_cross.max(norm);
                    ensure!(norm <= 1e-8, "n={n} {lambda} x {mu}: cross block norm {norm:e}");
                }
            }
            let u = weyl_dim(lambda, d).map_err(|e| e.to_string())?;
            sum_sq += u128::try_from(&u * &u).map_err(|e| e.to_string())?;
        }
        let sym = binomial((d * d + n - 1) as u128, n as u128);
        ensure!(sum_sq == sym, "n={n}: sum dim U^2 = {sum_sq}, expected {sym}");
        let trace_pi = (pi.trace().re - sym as f64).abs();
        ensure!(trace_pi <= 1e-6, "n={n}: trace of symmetric projector off by {trace_pi:e}");
    }
    Ok(format!("trace error {worst_trace:.2e}, cross blocks {worst_cross:.2e}"))
}

fn pure_acceptance() -> Outcome {
    let ev = Evaluator::default();
    let mut worst: f64 = 0.0;
    for d in [2usize, 3] {
        for seed in 0..10 {
            let rho = state(BipartiteStateSpec::random_pure(d, seed).unwrap());
            for n in 1..=3 {
                let r = ev.report(&rho, d, n).map_err(|e| format!("d={d} seed={seed} n={n}: {e}"))?;
                let err = (r.p_opt - 1.0).abs().max((r.p_star - 1.0).abs());
                worst = worst.max(err);
                ensure!(err <= 1e-9, "d={d} seed={seed} n={n}: p_opt={} p_star={}", r.p_opt, r.p_star);
            }
        }
    }
    Ok(format!("20 states x 3 n, max |p - 1| = {worst:.2e}"))
}

fn oracle_equivalence() -> Outcome {
    let ev = Evaluator::new(MemoryCap::default(), Engine::Dense);
    let mut worst: f64 = 0.0;
    for (name, rho) in mixed_test_states() {
        let spec = spectrum(&rho);
        for n in 1..=4 {
            let eval = ev.p_opt_evaluations(&rho, 2, n).map_err(|e| format!("{name} n={n}: {e}"))?;
            let oracle = h_oracle(n, &spec);
            let err = (eval.direct - oracle).abs().max((eval.block_sum - oracle).abs());
            worst = worst.max(err);
            ensure!(err <= 1e-8, "{name} n={n}: direct {} block sum {} h_n {oracle}", eval.direct, eval.block_sum);
        }
    }
    let rho = state(BipartiteStateSpec::maximally_mixed(2).unwrap());
    let p2 = ev.p_opt(&rho, 2, 2).map_err(|e| e.to_string())?;
    ensure!((p2 - 5.0 / 8.0).abs() <= 1e-8, "I/4: P_opt(2) = {p2}, expected 5/8");
    Ok(format!("7 states x 4 n, max error {worst:.2e}, P_opt(2) of I/4 = {p2}"))
}

fn sandwich() -> Outcome {
    let ev = Evaluator::default();
    let mut checks = 0;
    let mut min_gap = f64::INFINITY;
    for (name, rho) in mixed_test_states() {
        for n in 1..=6 {
            let r = ev.report(&rho, 2, n).map_err(|e| format!("{name} n={n}: {e}"))?;
            ensure!(r.p_opt <= r.p_star + 1e-9, "{name} n={n}: p_opt {} > p_star {}", r.p_opt, r.p_star);
            ensure!(r.p_star <= r.p_opt + r.slack + 1e-9, "{name} n={n}: p_star {} > p_opt + slack {}", r.p_star, r.p_opt + r.slack);
            for b in &r.blocks {
                if let Some(f) = b.fidelity {
                    ensure!((-1e-9..=1.0 + 1e-9).contains(&f), "{name} n={n} {}: fidelity {f}", b.lambda);
                }
            }
            min_gap = min_gap.min(r.p_opt + r.slack - r.p_star);
            checks += 1;
        }
    }
    Ok(format!("{checks} (state, n) pairs up to n = 6, min upper margin {min_gap:.2e}"))
}

fn schur_block_probabilities() -> Outcome {
    let ev = Evaluator::default();
    let mut states: Vec<(String, DenseOperator)> = [[0.5, 0.5], [0.9, 0.1], [0.7, 0.3], [1.0, 0.0]]
        .iter()
        .map(|p| {
            let spec = BipartiteStateSpec::pure_schmidt(ProbabilityVector::new(p.to_vec()).unwrap()).unwrap();
            (format!("schmidt {p:?}"), state(spec))
        })
        .collect();
    for seed in 0..3 {
        states.push((format!("random_pure seed {seed}"), state(BipartiteStateSpec::random_pure(2, seed).unwrap())));
    }
    let mut worst: f64 = 0.0;
    for (name, rho) in &states {
        let analysis = analyze(rho, 2).map_err(|e| e.to_string())?;
        let p = analysis.schmidt_probs.ok_or(format!("{name}: not pure"))?;
        for n in 1..=4 {
            let blocks = ev.block_statistics(rho, 2, n).map_err(|e| format!("{name} n={n}: {e}"))?;
            for b in blocks {
                let parts = b.lambda.parts();
                let expected = hook_oracle(b.lambda.nonzero_parts()) as f64 * schur2(parts[0], parts[1], p[0], p[1]);
                let err = (b.p_lambda - expected).abs();
                worst = worst.max(err);
                ensure!(err <= 1e-8, "{name} n={n} {}: p = {}, expected {expected}", b.lambda, b.p_lambda);
            }
        }
    }
    Ok(format!("{} pure states x 4 n, max error {worst:.2e}", states.len()))
}

fn type_bounds() -> Outcome {
    let mut checked = 0;
    for d in 1..=4usize {
        for n in 1..=20 {
            for parts in partitions_oracle(n, d) {
                let lambda = Partition::new(parts.clone(), d).map_err(|e| e.to_string())?;
                let c = check_dim_entropy_bound(&lambda, n, d).map_err(|e| e.to_string())?;
                let nf = n as f64;
                let entropy: f64 = parts.iter().map(|&x| x as f64 / nf).map(|q| -q * q.ln()).sum();
                let lhs = (ln_hook_oracle(&parts) / nf - entropy).abs();
                let rhs = (d * d + 2 * d) as f64 / (2.0 * nf) * (nf + d as f64).ln();
                ensure!((c.lhs - lhs).abs() <= 1e-9 && (c.rhs - rhs).abs() <= 1e-12, "{lambda}: library ({}, {}) vs oracle ({lhs}, {rhs})", c.lhs, c.rhs);
                ensure!(lhs <= rhs && c.holds, "{lambda}, n={n}, d={d}: {lhs} > {rhs}");
                checked += 1;
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for instance in 0..20 {
        let p1: f64 = rng.random_range(0.05..0.95);
        let p = ProbabilityVector::new(vec![p1, 1.0 - p1]).unwrap();
        let threshold: f64 = rng.random_range(0.5..1.0);
        let below = rng.random_bool(0.5);
        let n = rng.random_range(1..=12usize);
        let inside = move |q: &ProbabilityVector| {
            if below {
                q.entries()[0] <= threshold
            } else {
                q.entries()[0] >= threshold
            }
        };
        let c = type_region_bound(&inside, &p, n, 2).map_err(|e| e.to_string())?;
        let mut lhs = 0.0;
        let mut min_div = f64::INFINITY;
        for parts in partitions_oracle(n, 2) {
            let a = parts[0];
            let b = parts.get(1).copied().unwrap_or(0);
            let q = [a as f64 / n as f64, b as f64 / n as f64];
            let q_inside = if below { q[0] <= threshold } else { q[0] >= threshold };
            if !q_inside {
                continue;
            }
            lhs += hook_oracle(&parts) as f64 * schur2(a, b, p1, 1.0 - p1);
            // lambda / n is non-increasing, so compare against p sorted the same way
            let div: f64 = q
                .iter()
                .zip([p1.max(1.0 - p1), p1.min(1.0 - p1)])
                .filter(|(&qi, _)| qi > 0.0)
                .map(|(&qi, pi)| qi * (qi / pi).ln())
                .sum();
            min_div = min_div.min(div);
        }
        let rhs = if min_div.is_finite() {
            ((n + 1) as f64).powi(3) * (-(n as f64) * min_div).exp()
        } else {
            0.0
        };
        ensure!((c.lhs - lhs).abs() <= 1e-12, "instance {instance}: lhs {} vs oracle {lhs}", c.lhs);
        ensure!((c.rhs - rhs).abs() <= 1e-9 * rhs.max(1.0), "instance {instance}: rhs {} vs oracle {rhs}", c.rhs);
        ensure!(lhs <= rhs && c.holds, "instance {instance} (p1={p1}, n={n}): {lhs} > {rhs}");
    }
    Ok(format!("{checked} entropy checks and 20 region instances hold"))
}

fn exponent_trend() -> Outcome {
    let rho = state(BipartiteStateSpec::maximally_mixed(2).unwrap());
    let ev = Evaluator::default();
    let d = 2.0f64;
    let ln4 = 4f64.ln();
    let mut prev = (f64::NEG_INFINITY, f64::NEG_INFINITY);
    let mut line = Vec::new();
    for n in 1..=6usize {
        let r = ev.report(&rho, 2, n).map_err(|e| format!("n={n}: {e}"))?;
        let exact = binomial(n as u128 + 3, 3) as f64 / 4f64.powi(n as i32);
        ensure!((r.p_opt - exact).abs() <= 1e-12, "n={n}: p_opt {} vs C(n+3,3)/4^n = {exact}", r.p_opt);
        let (e_opt, e_star) = (r.exponent_opt, r.exponent_star);
        ensure!(e_opt >= prev.0 - 1e-12 && e_star >= prev.1 - 1e-12, "n={n}: exponents decreased");
        let nf = n as f64;
        let allowed = (d * d * nf.ln() + d * (d + 1.0) / 2.0 * (nf + 1.0).ln()) / nf;
        ensure!((e_opt - e_star).abs() < allowed, "n={n}: gap {} not below {allowed}", (e_opt - e_star).abs());
        ensure!(e_opt <= ln4 + 1e-12 && e_star <= ln4 + 1e-12, "n={n}: exponent above ln 4");
        ensure!((r.minus_log_p1 - ln4).abs() <= 1e-12, "-ln p1 = {}", r.minus_log_p1);
        line.push(format!("{e_opt:.3}/{e_star:.3}"));
        prev = (e_opt, e_star);
    }
    Ok(format!("opt/star exponents {}", line.join(" ")))
}

fn cli_determinism() -> Outcome {
    let bin = env!("CARGO_BIN_EXE_locc-purity");
    let spec = r#"{"d":2,"kind":"random_mixed","seed":42,"rank":3}"#;
    let sweep = || {
        Command::new(bin)
            .args(["sweep", "--state", spec, "--n-max", "5", "--format", "csv"])
            .env_remove("LOCC_PURITY_MEMORY_CAP")
            .output()
            .map_err(|e| e.to_string())
    };
    let (a, b) = (sweep()?, sweep()?);
    ensure!(a.status.success() && b.status.success(), "sweep failed: {}", String::from_utf8_lossy(&a.stderr));
    ensure!(a.stdout == b.stdout, "CSV differs between runs");
    let header = String::from_utf8_lossy(&a.stdout).lines().next().unwrap_or_default().to_string();
    ensure!(header == "n,p_opt,p_star,slack,oracle_p_opt,exponent_opt,exponent_star,minus_log_p1", "header {header}");
    let malformed = [
        (r#"{"d":2,"kind":"random_mixed","seed":1}"#, "rank"),
        (r#"{"d":2,"kind":"pure_schmidt","schmidt":[0.5,0.6]}"#, "schmidt"),
        (r#"{"d":0,"kind":"random_pure","seed":1}"#, "d"),
        (r#"{"d":2,"kind":"cat","seed":1}"#, "kind"),
    ];
    for (bad, key) in malformed {
        let out = Command::new(bin)
            .args(["sweep", "--state", bad, "--n-max", "2"])
            .output()
            .map_err(|e| e.to_string())?;
        let stderr = String::from_utf8_lossy(&out.stderr);
        ensure!(out.status.code() == Some(2), "{bad}: exit {:?}", out.status.code());
        ensure!(stderr.contains(&format!("`{key}`")), "{bad}: stderr does not name `{key}`: {stderr}");
    }
    Ok(format!("{} identical CSV bytes, 4 malformed specs exit 2", a.stdout.len()))
}

struct Criterion {
    id: usize,
    name: &'static str,
    limit: Option<Duration>,
    run: fn() -> Outcome,
}

fn main() -> ExitCode {
    let criteria = [
        Criterion { id: 1, name: "dimension identity", limit: Some(Duration::from_secs(1)), run: dimension_identity },
        Criterion { id: 2, name: "projector suite", limit: Some(Duration::from_secs(30)), run: projector_suite },
        Criterion { id: 3, name: "symmetric projector block structure", limit: Some(Duration::from_secs(60)), run: block_structure },
        Criterion { id: 4, name: "pure states always accepted", limit: None, run: pure_acceptance },
        Criterion { id: 5, name: "P_opt equals h_n of the spectrum", limit: None, run: oracle_equivalence },
        Criterion { id: 6, name: "sandwich p_opt <= p_star <= p_opt + slack", limit: None, run: sandwich },
        Criterion { id: 7, name: "block probabilities d_lambda s_lambda(p)", limit: None, run: schur_block_probabilities },
        Criterion { id: 8, name: "type-class bounds", limit: Some(Duration::from_secs(30)), run: type_bounds },
        Criterion { id: 9, name: "exponent trend for I/4", limit: None, run: exponent_trend },
        Criterion { id: 10, name: "CLI determinism and validation", limit: None, run: cli_determinism },
    ];
    let mut failed = 0;
    for c in &criteria {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(c.run)).unwrap_or_else(|_| Err("panicked".into()));
        let elapsed = start.elapsed();
        let outcome = match (outcome, c.limit) {
            (Ok(_), Some(limit)) if elapsed > limit => Err(format!("took {elapsed:.2?}, limit {limit:?}")),
            (o, _) => o,
        };
        let (tag, detail) = match outcome {
            Ok(detail) => ("PASS", detail),
            Err(detail) => {
                failed += 1;
                ("FAIL", detail)
            }
        };
        println!("criterion {:>2} {tag} {} [{elapsed:.2?}]: {detail}", c.id, c.name);
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
