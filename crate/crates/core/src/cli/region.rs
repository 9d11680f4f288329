//! Region expressions for the type-class bound: comparisons of the
//! coordinates `q1..qd` of a normalized Young index, joined by `AND`.
//!
//! ```text
//! all
//! q1<=0.6
//! q1 >= 0.2 AND q2 < 0.5
//! q1 == 1
//! ```

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::partitions::{ProbabilityVector, Region};

/// Slack used by `=` when comparing against grid points `lambda / n`.
const EQUALITY_SLACK: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Op {
    Le,
    Ge,
    Lt,
    Gt,
    Eq,
}

impl Op {
    fn symbol(self) -> &'static str {
        match self {
            Op::Le => "<=",
            Op::Ge => ">=",
            Op::Lt => "<",
            Op::Gt => ">",
            Op::Eq => "==",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
struct Clause {
    /// 0-based coordinate.
    index: usize,
    op: Op,
    value: f64,
}

impl Clause {
    fn holds(&self, q: &ProbabilityVector) -> bool {
        let Some(&x) = q.entries().get(self.index) else {
            return false;
        };
        match self.op {
            Op::Le => x <= self.value,
            Op::Ge => x >= self.value,
            Op::Lt => x < self.value,
            Op::Gt => x > self.value,
            Op::Eq => (x - self.value).abs() <= EQUALITY_SLACK,
        }
    }
}

/// A conjunction of coordinate comparisons; no clauses means everything.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct RegionExpr {
    clauses: Vec<Clause>,
}

impl RegionExpr {
    pub fn everything() -> Self {
        RegionExpr::default()
    }

    /// Rejects coordinates beyond `q_d`.
    pub fn check_dimension(&self, d: usize) -> Result<()> {
        match self.clauses.iter().find(|c| c.index >= d) {
            Some(c) => Err(Error::validation(
                "region",
                format!("q{} does not exist for d = {d}", c.index + 1),
            )),
            None => Ok(()),
        }
    }
}

impl Region for RegionExpr {
    fn contains(&self, q: &ProbabilityVector) -> bool {
        self.clauses.iter().all(|c| c.holds(q))
    }
}

fn parse_clause(text: &str) -> Result<Clause> {
    let bad = |reason: String| Error::validation("region", reason);
    let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let rest = compact
        .strip_prefix('q')
        .ok_or_else(|| bad(format!("`{text}` must start with a coordinate such as q1")))?;
    let digits = rest.chars().take_while(char::is_ascii_digit).count();
    let index: usize = rest[..digits]
        .parse()
        .ok()
        .filter(|&i| i >= 1)
        .ok_or_else(|| bad(format!("`{text}` needs a coordinate index starting at 1")))?;
    let rest = &rest[digits..];
    let (op, value) = [
        ("<=", Op::Le),
        (">=", Op::Ge),
        ("==", Op::Eq),
        ("<", Op::Lt),
        (">", Op::Gt),
        ("=", Op::Eq),
    ]
    .iter()
    .find_map(|(sym, op)| rest.strip_prefix(sym).map(|v| (*op, v)))
    .ok_or_else(|| bad(format!("`{text}` needs one of <=, >=, <, >, =")))?;
    let value: f64 = value
        .parse()
        .ok()
        .filter(|v: &f64| v.is_finite())
        .ok_or_else(|| bad(format!("`{value}` is not a finite number")))?;
    Ok(Clause {
        index: index - 1,
        op,
        value,
    })
}

impl FromStr for RegionExpr {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let trimmed = s.trim();
        if trimmed.is_empty() {
            return Err(Error::validation("region", "empty expression"));
        }
        if matches!(trimmed.to_ascii_lowercase().as_str(), "all" | "true") {
            return Ok(RegionExpr::everything());
        }
        let clauses = trimmed
            .replace("&&", " AND ")
            .split_whitespace()
            .collect::<Vec<_>>()
            .join(" ")
            .split(" AND ")
            .flat_map(|part| part.split(" and "))
            .map(parse_clause)
            .collect::<Result<Vec<_>>>()?;
        Ok(RegionExpr { clauses })
    }
}

impl fmt::Display for RegionExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.clauses.is_empty() {
            return f.write_str("all");
        }
        let parts: Vec<String> = self
            .clauses
            .iter()
            .map(|c| format!("q{}{}{}", c.index + 1, c.op.symbol(), c.value))
            .collect();
        f.write_str(&parts.join(" AND "))
    }
}
