//! Command-line front end.
//!
//! ```text
//! locc-purity dims   --n 4 --d 2
//! locc-purity chars  --n 4
//! locc-purity blocks --state state.json --n 3
//! locc-purity test   --state '{"d":2,"kind":"random_mixed","seed":1,"rank":2}' --n 3
//! locc-purity sweep  --state state.json --n-max 6 --format csv
//! locc-purity bounds --d 2 --n-max 20 --p 0.9,0.1 --region 'q1<=0.6'
//! ```
//!
//! Exit codes: 0 success, 2 invalid input, 3 memory cap exceeded, 4 violated
//! numerical invariant.

mod output;
mod region;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use num_bigint::BigUint;
use serde_json::Value;

pub use output::{Cell, Format, Output, Table};
pub use region::RegionExpr;

use crate::error::{Error, Result};
use crate::partitions::{
    check_dim_entropy_bound, class_size, ln_big, dimension_record, enumerate_partitions, mn_character,
    shannon_entropy, type_region_bound, ProbabilityVector,
};
use crate::protocol::{exponent_series, Engine, Evaluator, TestReport};
use crate::states::{analyze, build_state, BipartiteStateSpec};
use crate::tensorops::{MemoryCap, DEFAULT_MEMORY_CAP};

/// Environment variable read when `--memory-cap` is not given.
pub const MEMORY_CAP_ENV: &str = "LOCC_PURITY_MEMORY_CAP";

/// Largest `n` for which `chars` prints a full character table.
pub const MAX_CHARACTER_TABLE_N: usize = 20;

const SWEEP_COLUMNS: [&str; 8] = [
    "n",
    "p_opt",
    "p_star",
    "slack",
    "oracle_p_opt",
    "exponent_opt",
    "exponent_star",
    "minus_log_p1",
];

#[derive(Debug, Parser)]
#[command(name = "locc-purity", version, about = "Purity tests on many copies of a bipartite state")]
pub struct Args {
    #[command(subcommand)]
    pub command: CommandArgs,

    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    pub format: Format,

    /// Write the result here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// Refuse computations whose estimated dense allocation exceeds this many bytes.
    #[arg(long, global = true, env = MEMORY_CAP_ENV, default_value_t = DEFAULT_MEMORY_CAP)]
    pub memory_cap: u64,

    /// Replace the seed of a random state spec.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
}

#[derive(Debug, clap::Args)]
pub struct StateArgs {
    /// Path to a state-spec JSON file, or the JSON itself.
    #[arg(long)]
    pub state: String,

    /// Expected local dimension; must match the state.
    #[arg(long)]
    pub d: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum CommandArgs {
    /// Dimensions and entropy bound for every Young index of n with at most d rows.
    Dims {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: usize,
    },
    /// Character table of the symmetric group on n letters.
    Chars {
        #[arg(long)]
        n: usize,
    },
    /// Block probabilities and fidelities on n copies.
    Blocks {
        #[command(flatten)]
        state: StateArgs,
        #[arg(long)]
        n: usize,
    },
    /// Optimal and LOCC acceptance probabilities on n copies.
    Test {
        #[command(flatten)]
        state: StateArgs,
        #[arg(long)]
        n: usize,
    },
    /// Acceptance probabilities and exponents for n = 1..n-max.
    Sweep {
        #[command(flatten)]
        state: StateArgs,
        #[arg(long)]
        n_max: usize,
    },
    /// Entropy bound for every Young index and region bound for every n.
    Bounds {
        #[arg(long)]
        d: usize,
        #[arg(long, default_value_t = 1)]
        n_min: usize,
        #[arg(long)]
        n_max: usize,
        /// Comma-separated distribution for the region bound; uniform by default.
        #[arg(long)]
        p: Option<String>,
        /// Conjunction of comparisons on q1..qd, or `all`.
        #[arg(long, default_value = "all")]
        region: String,
    },
}

/// A validated command.
#[derive(Clone, Debug, PartialEq)]
pub enum Command {
    Dims { n: usize, d: usize },
    Chars { n: usize },
    Blocks { state: BipartiteStateSpec, n: usize },
    Test { state: BipartiteStateSpec, n: usize },
    Sweep { state: BipartiteStateSpec, n_max: usize },
    Bounds {
        d: usize,
        n_min: usize,
        n_max: usize,
        p: ProbabilityVector,
        region: RegionExpr,
    },
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub format: Format,
    pub out: Option<PathBuf>,
    pub memory_cap: MemoryCap,
}

fn positive(value: usize, key: &str) -> Result<usize> {
    if value == 0 {
        return Err(Error::validation(key, "must be at least 1"));
    }
    Ok(value)
}

fn load_state(args: &StateArgs, seed: Option<u64>) -> Result<BipartiteStateSpec> {
    let text = if args.state.trim_start().starts_with('{') {
        args.state.clone()
    } else {
        std::fs::read_to_string(&args.state)
            .map_err(|e| Error::validation("state", format!("cannot read `{}`: {e}", args.state)))?
    };
    let mut spec = BipartiteStateSpec::from_json_str(&text)?;
    if let Some(seed) = seed {
        spec = spec.with_seed(seed);
    }
    if let Some(d) = args.d {
        if d != spec.d() {
            return Err(Error::validation(
                "d",
                format!("--d {d} does not match the state's d = {}", spec.d()),
            ));
        }
    }
    Ok(spec)
}

fn parse_distribution(text: &str, d: usize) -> Result<ProbabilityVector> {
    let entries = text
        .split(',')
        .map(|x| {
            x.trim()
                .parse::<f64>()
                .map_err(|_| Error::validation("p", format!("`{}` is not a number", x.trim())))
        })
        .collect::<Result<Vec<_>>>()?;
    if entries.len() != d {
        return Err(Error::validation(
            "p",
            format!("has {} entries but d = {d}", entries.len()),
        ));
    }
    ProbabilityVector::new(entries).map_err(|e| match e {
        Error::InvalidArgument(reason) => Error::validation("p", reason),
        other => other,
    })
}

impl RunConfig {
    pub fn from_args(args: &Args) -> Result<Self> {
        let command = match &args.command {
            CommandArgs::Dims { n, d } => Command::Dims {
                n: positive(*n, "n")?,
                d: positive(*d, "d")?,
            },
            CommandArgs::Chars { n } => {
                let n = positive(*n, "n")?;
                if n > MAX_CHARACTER_TABLE_N {
                    return Err(Error::validation(
                        "n",
                        format!("character tables are limited to n <= {MAX_CHARACTER_TABLE_N}"),
                    ));
                }
                Command::Chars { n }
            }
            CommandArgs::Blocks { state, n } => Command::Blocks {
                n: positive(*n, "n")?,
                state: load_state(state, args.seed)?,
            },
            CommandArgs::Test { state, n } => Command::Test {
                n: positive(*n, "n")?,
                state: load_state(state, args.seed)?,
            },
            CommandArgs::Sweep { state, n_max } => Command::Sweep {
                n_max: positive(*n_max, "n-max")?,
                state: load_state(state, args.seed)?,
            },
            CommandArgs::Bounds {
                d,
                n_min,
                n_max,
                p,
                region,
            } => {
                let d = positive(*d, "d")?;
                let n_min = positive(*n_min, "n-min")?;
                let n_max = positive(*n_max, "n-max")?;
                if n_min > n_max {
                    return Err(Error::validation("n-min", "must not exceed --n-max"));
                }
                let p = match p {
                    Some(text) => parse_distribution(text, d)?,
                    None => ProbabilityVector::uniform(d)?,
                };
                let region: RegionExpr = region.parse()?;
                region.check_dimension(d)?;
                Command::Bounds {
                    d,
                    n_min,
                    n_max,
                    p,
                    region,
                }
            }
        };
        Ok(RunConfig {
            command,
            format: args.format,
            out: args.out.clone(),
            memory_cap: MemoryCap::new(args.memory_cap),
        })
    }

    fn evaluator(&self) -> Evaluator {
        Evaluator::new(self.memory_cap, Engine::Auto)
    }
}

/// Exit status for an error.
pub fn exit_code(error: &Error) -> u8 {
    match error {
        Error::InvalidArgument(_) | Error::Validation { .. } | Error::Io(_) => 2,
        Error::ResourceLimit { .. } => 3,
        Error::Invariant(_) => 4,
    }
}

/// Runs one validated command.
pub fn execute(config: &RunConfig) -> Result<Output> {
    match &config.command {
        Command::Dims { n, d } => cmd_dims(*n, *d),
        Command::Chars { n } => cmd_chars(*n),
        Command::Blocks { state, n } => cmd_blocks(state, *n, &config.evaluator()),
        Command::Test { state, n } => cmd_test(state, *n, &config.evaluator()),
        Command::Sweep { state, n_max } => cmd_sweep(state, *n_max, &config.evaluator()),
        Command::Bounds {
            d,
            n_min,
            n_max,
            p,
            region,
        } => cmd_bounds(*d, *n_min, *n_max, p, region),
    }
}

pub fn cmd_dims(n: usize, d: usize) -> Result<Output> {
    let mut table = Table::new([
        "lambda",
        "dim_u",
        "d_lambda",
        "dim_w",
        "log_d_lambda_over_n",
        "entropy",
        "bound",
        "holds",
    ]);
    let mut total = BigUint::from(0u32);
    for lambda in enumerate_partitions(n, d)? {
        let record = dimension_record(&lambda, d)?;
        let check = check_dim_entropy_bound(&lambda, n, d)?;
        total += &record.dim_w;
        table.push(vec![
            lambda.to_string().into(),
            record.dim_u.into(),
            record.dim_v.clone().into(),
            record.dim_w.into(),
            (ln_big(&record.dim_v) / n as f64).into(),
            shannon_entropy(&lambda.normalized()?).into(),
            check.rhs.into(),
            check.holds.into(),
        ]);
    }
    let expected = BigUint::from(d).pow(n as u32);
    let complete = total == expected;
    if !complete {
        return Err(Error::Invariant(format!(
            "dimensions of W sum to {total}, expected d^n = {expected}"
        )));
    }
    let mut out = Output::new(table);
    out.footer.push(format!("sum dim_w = {total} = {d}^{n}"));
    out.json_extra.insert("sum_dim_w".into(), Cell::Int(total).json());
    out.json_extra.insert("d_pow_n".into(), Cell::Int(expected).json());
    Ok(out)
}

pub fn cmd_chars(n: usize) -> Result<Output> {
    let classes = enumerate_partitions(n, n)?;
    let mut columns = vec!["lambda".to_string()];
    columns.extend(classes.iter().map(|mu| mu.compact()));
    let mut table = Table::new(columns);
    for lambda in &classes {
        let mut row = vec![Cell::Text(lambda.compact())];
        for mu in &classes {
            row.push(Cell::Text(mn_character(lambda, mu)?.to_string()));
        }
        table.push(row);
    }
    let mut sizes = Table::new(["class", "size"]);
    for mu in &classes {
        sizes.push(vec![mu.compact().into(), class_size(mu).into()]);
    }
    let mut out = Output::new(table);
    out.json_extra.insert("class_sizes".into(), sizes.json_rows());
    out.secondary.push(("class sizes".into(), sizes));
    Ok(out)
}

fn block_table(report_blocks: &[crate::protocol::BlockStatistics]) -> Table {
    let mut table = Table::new([
        "lambda",
        "dim_u",
        "d_lambda",
        "p_lambda",
        "m_lambda",
        "fidelity",
        "acceptance",
    ]);
    for b in report_blocks {
        table.push(vec![
            b.lambda.to_string().into(),
            b.dim_u.into(),
            b.d_lambda.into(),
            b.p_lambda.into(),
            b.m_lambda.into(),
            b.fidelity.into(),
            b.acceptance().into(),
        ]);
    }
    table
}

fn state_notes(out: &mut Output, spec: &BipartiteStateSpec) {
    let json = spec.to_json();
    out.notes.push(format!("state: {json}"));
    out.json_extra.insert("state".into(), json);
}

pub fn cmd_blocks(spec: &BipartiteStateSpec, n: usize, evaluator: &Evaluator) -> Result<Output> {
    let rho = build_state(spec)?;
    let blocks = evaluator.block_statistics(&rho, spec.d(), n)?;
    let mut out = Output::new(block_table(&blocks));
    state_notes(&mut out, spec);
    out.notes.push(format!("n = {n}"));
    out.json_extra.insert("n".into(), Value::from(n));
    Ok(out)
}

fn summary_row(r: &TestReport) -> Vec<Cell> {
    vec![
        r.n.into(),
        r.p_opt.into(),
        r.p_star.into(),
        r.slack.into(),
        r.oracle_p_opt.into(),
        r.exponent_opt.into(),
        r.exponent_star.into(),
        r.minus_log_p1.into(),
    ]
}

pub fn cmd_test(spec: &BipartiteStateSpec, n: usize, evaluator: &Evaluator) -> Result<Output> {
    let d = spec.d();
    let plan = evaluator.plan(d, n)?;
    let rho = build_state(spec)?;
    let analysis = analyze(&rho, d)?;
    let report = evaluator.report(&rho, d, n)?;
    let mut table = Table::new(SWEEP_COLUMNS);
    table.push(summary_row(&report));
    let blocks = block_table(&report.blocks);
    let mut out = Output::new(table);
    state_notes(&mut out, spec);
    out.notes.push(format!(
        "d = {d}, n = {n}, purity = {:.12}, p1 = {:.12}",
        analysis.purity, analysis.p1
    ));
    out.notes.push(format!(
        "engine: {:?}, estimated memory {} bytes",
        plan.engine, plan.estimated_bytes
    ));
    out.json_extra.insert("blocks".into(), blocks.json_rows());
    out.secondary.push(("blocks".into(), blocks));
    Ok(out)
}

pub fn cmd_sweep(spec: &BipartiteStateSpec, n_max: usize, evaluator: &Evaluator) -> Result<Output> {
    let series = exponent_series(spec, n_max, evaluator)?;
    let mut table = Table::new(SWEEP_COLUMNS);
    for r in &series.reports {
        table.push(summary_row(r));
    }
    let mut out = Output::new(table);
    state_notes(&mut out, spec);
    let truncated = match &series.truncated {
        Some(t) => {
            let mut row = vec![Cell::from(t.n)];
            row.extend((1..SWEEP_COLUMNS.len()).map(|_| Cell::from("truncated")));
            out.trailer = Some(row);
            out.footer.push(format!("stopped at n = {}: {}", t.n, t.reason));
            serde_json::json!({"n": t.n, "reason": t.reason})
        }
        None => Value::Null,
    };
    out.json_extra.insert("truncated".into(), truncated);
    Ok(out)
}

pub fn cmd_bounds(
    d: usize,
    n_min: usize,
    n_max: usize,
    p: &ProbabilityVector,
    region: &RegionExpr,
) -> Result<Output> {
    let mut table = Table::new(["check", "n", "lambda", "lhs", "rhs", "holds"]);
    let mut all_hold = true;
    for n in n_min..=n_max {
        for lambda in enumerate_partitions(n, d)? {
            let c = check_dim_entropy_bound(&lambda, n, d)?;
            all_hold &= c.holds;
            table.push(vec![
                "entropy".into(),
                n.into(),
                lambda.to_string().into(),
                c.lhs.into(),
                c.rhs.into(),
                c.holds.into(),
            ]);
        }
        let c = type_region_bound(region, p, n, d)?;
        all_hold &= c.holds;
        table.push(vec![
            "region".into(),
            n.into(),
            Cell::Undefined,
            c.lhs.into(),
            c.rhs.into(),
            c.holds.into(),
        ]);
    }
    let mut out = Output::new(table);
    out.notes.push(format!("p = {:?}, region: {region}", p.entries()));
    out.footer.push(format!("all hold: {all_hold}"));
    out.json_extra.insert("all_hold".into(), Value::Bool(all_hold));
    out.json_extra.insert("region".into(), Value::String(region.to_string()));
    Ok(out)
}

fn emit(config: &RunConfig, text: &str) -> Result<()> {
    match &config.out {
        Some(path) => std::fs::write(path, text)?,
        None => std::io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}

/// Parses `argv`, runs the command and returns the process exit status.
pub fn run<I, T>(argv: I) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args = match Args::try_parse_from(argv) {
        Ok(args) => args,
        Err(e) => {
            let _ = e.print();
            return e.exit_code().clamp(0, 255) as u8;
        }
    };
    let result = RunConfig::from_args(&args).and_then(|config| {
        let text = execute(&config)?.render(config.format)?;
        emit(&config, &text)
    });
    match result {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}
