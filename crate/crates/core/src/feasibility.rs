//! Decision procedures for the three existence questions the builders answer.
//!
//! * [`check_construction`]: row parameters `n`, column parameters `m` and a
//!   symbol count `s`.
//! * [`check_row_params`]: row parameters `n`, a column count `c` and a
//!   symbol count `s`.
//! * [`check_sizes`]: the four counts `r`, `c`, `s` and the volume `v`.
//!
//! Each returns a [`FeasibilityReport`] listing every condition with a
//! witness; infeasibility is an ordinary result, not an error.

use std::fmt;

use serde::Serialize;
use thiserror::Error;

/// One condition of a predicate and whether it holds.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Condition {
    /// Stable short identifier, e.g. `"dominance"`.
    pub id: &'static str,
    /// The inequality being tested.
    pub statement: &'static str,
    pub satisfied: bool,
    pub witness: Option<String>,
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mark = if self.satisfied { "ok" } else { "violated" };
        write!(f, "[{mark}] {}: {}", self.id, self.statement)?;
        if let Some(w) = &self.witness {
            write!(f, " ({w})")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FeasibilityReport {
    pub feasible: bool,
    pub conditions: Vec<Condition>,
}

impl FeasibilityReport {
    fn from_conditions(conditions: Vec<Condition>) -> Self {
        Self {
            feasible: conditions.iter().all(|c| c.satisfied),
            conditions,
        }
    }

    pub fn violated(&self) -> impl Iterator<Item = &Condition> + '_ {
        self.conditions.iter().filter(|c| !c.satisfied)
    }

    pub fn condition(&self, id: &str) -> Option<&Condition> {
        self.conditions.iter().find(|c| c.id == id)
    }
}

impl fmt::Display for FeasibilityReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "{}",
            if self.feasible {
                "feasible"
            } else {
                "infeasible"
            }
        )?;
        for c in &self.conditions {
            writeln!(f, "  {c}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FeasibilityError {
    #[error("row parameters sum to {rows} but column parameters sum to {cols}")]
    SumMismatch { rows: usize, cols: usize },
}

/// Outcome of the subset inequality check.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dominance {
    Holds,
    /// The `k` largest row parameters and `l` largest column parameters sum
    /// to `lhs`, exceeding `rhs = v + k·l`.
    Violated {
        k: usize,
        l: usize,
        lhs: usize,
        rhs: usize,
    },
}

impl Dominance {
    pub fn holds(&self) -> bool {
        matches!(self, Dominance::Holds)
    }
}

/// Tests `Σ_{i∈I} n_i + Σ_{j∈J} m_j ≤ v + |I|·|J|` for all row subsets `I`
/// and column subsets `J`.
///
/// For fixed sizes `|I| = k`, `|J| = l` the left side is largest on the `k`
/// largest rows and `l` largest columns, so only sorted prefixes are tested.
/// On failure the pair with the largest excess is reported (smallest `k`,
/// then `l`, among ties).
pub fn dominance_check(n: &[usize], m: &[usize]) -> Result<Dominance, FeasibilityError> {
    let (rows, cols): (usize, usize) = (n.iter().sum(), m.iter().sum());
    if rows != cols {
        return Err(FeasibilityError::SumMismatch { rows, cols });
    }
    let v = rows;
    let prefix = |xs: &[usize]| -> Vec<usize> {
        let mut sorted = xs.to_vec();
        sorted.sort_unstable_by(|a, b| b.cmp(a));
        std::iter::once(0)
            .chain(sorted.iter().scan(0, |acc, &x| {
                *acc += x;
                Some(*acc)
            }))
            .collect()
    };
    let (np, mp) = (prefix(n), prefix(m));
    let mut worst: Option<(usize, usize, usize, usize)> = None;
    for (k, &nk) in np.iter().enumerate() {
        for (l, &ml) in mp.iter().enumerate() {
            let (lhs, rhs) = (nk + ml, v + k * l);
            if lhs > rhs && worst.is_none_or(|(_, _, wl, wr)| lhs - rhs > wl - wr) {
                worst = Some((k, l, lhs, rhs));
            }
        }
    }
    Ok(match worst {
        None => Dominance::Holds,
        Some((k, l, lhs, rhs)) => Dominance::Violated { k, l, lhs, rhs },
    })
}

fn input_condition(lists: &[&[usize]]) -> Condition {
    let bad = lists.iter().find(|xs| xs.is_empty() || xs.contains(&0));
    Condition {
        id: "input",
        statement: "parameter lists are nonempty with entries ≥ 1",
        satisfied: bad.is_none(),
        witness: bad.map(|xs| format!("got {}", join(xs))),
    }
}

fn positive_condition(values: &[(&str, usize)]) -> Condition {
    let bad = values.iter().find(|(_, x)| *x == 0);
    Condition {
        id: "input",
        statement: "counts are ≥ 1",
        satisfied: bad.is_none(),
        witness: bad.map(|(name, _)| format!("{name} = 0")),
    }
}

pub(crate) fn join(xs: &[usize]) -> String {
    xs.iter()
        .map(usize::to_string)
        .collect::<Vec<_>>()
        .join(",")
}

/// Exact criterion for a square with row parameters `n`, column parameters
/// `m` and exactly `s` symbols.
pub fn check_construction(n: &[usize], m: &[usize], s: usize) -> FeasibilityReport {
    let (vn, vm): (usize, usize) = (n.iter().sum(), m.iter().sum());
    let sums = Condition {
        id: "(1)",
        statement: "n_1+…+n_r = m_1+…+m_c = v",
        satisfied: vn == vm,
        witness: Some(if vn == vm {
            format!("v = {vn}")
        } else {
            format!("{vn} ≠ {vm}")
        }),
    };
    let dominance = match dominance_check(n, m) {
        Ok(Dominance::Holds) => Condition {
            id: "(2)",
            statement: "Σ_{i∈I} n_i + Σ_{j∈J} m_j ≤ v + |I||J| for all I, J",
            satisfied: true,
            witness: None,
        },
        Ok(Dominance::Violated { k, l, lhs, rhs }) => Condition {
            id: "(2)",
            statement: "Σ_{i∈I} n_i + Σ_{j∈J} m_j ≤ v + |I||J| for all I, J",
            satisfied: false,
            witness: Some(format!(
                "{k} largest rows and {l} largest columns: {lhs} > {rhs}"
            )),
        },
        Err(_) => Condition {
            id: "(2)",
            statement: "Σ_{i∈I} n_i + Σ_{j∈J} m_j ≤ v + |I||J| for all I, J",
            satisfied: false,
            witness: Some("undefined while (1) fails".to_string()),
        },
    };
    let max_line = n.iter().chain(m).copied().max().unwrap_or(0);
    let range = Condition {
        id: "(3)",
        statement: "max(n_1,…,n_r,m_1,…,m_c) ≤ s ≤ v",
        satisfied: max_line <= s && s <= vn,
        witness: Some(if max_line > s {
            format!("s = {s} < {max_line}")
        } else if s > vn {
            format!("s = {s} > v = {vn}")
        } else {
            format!("{max_line} ≤ {s} ≤ {vn}")
        }),
    };
    FeasibilityReport::from_conditions(vec![input_condition(&[n, m]), sums, dominance, range])
}

/// Exact criterion for a square with row parameters `n`, exactly `c`
/// columns and exactly `s` symbols.
pub fn check_row_params(n: &[usize], c: usize, s: usize) -> FeasibilityReport {
    let v: usize = n.iter().sum();
    let lo = c.max(s);
    let hi = c * s;
    let volume = Condition {
        id: "volume",
        statement: "max(c,s) ≤ n_1+…+n_r ≤ c·s",
        satisfied: lo <= v && v <= hi,
        witness: Some(if v < lo {
            format!("v = {v} < max(c,s) = {lo}")
        } else if v > hi {
            format!("v = {v} > c·s = {hi}")
        } else {
            format!("{lo} ≤ {v} ≤ {hi}")
        }),
    };
    let cap = c.min(s);
    let over = n.iter().enumerate().find(|(_, &x)| x > cap);
    let lines = Condition {
        id: "row-cap",
        statement: "n_i ≤ min(c,s) for every i",
        satisfied: over.is_none(),
        witness: Some(match over {
            Some((i, x)) => format!("n_{} = {x} > min(c,s) = {cap}", i + 1),
            None => format!("all ≤ {cap}"),
        }),
    };
    FeasibilityReport::from_conditions(vec![
        input_condition(&[n]),
        positive_condition(&[("c", c), ("s", s)]),
        volume,
        lines,
    ])
}

/// Exact criterion for a square with `r` rows, `c` columns, `s` symbols and
/// volume `v`.
pub fn check_sizes(r: usize, c: usize, s: usize, v: usize) -> FeasibilityReport {
    let lo = r.max(c).max(s);
    let lower = Condition {
        id: "lower",
        statement: "max(r,c,s) ≤ v",
        satisfied: lo <= v,
        witness: Some(if lo <= v {
            format!("{lo} ≤ {v}")
        } else {
            let name = if r == lo {
                "r"
            } else if c == lo {
                "c"
            } else {
                "s"
            };
            format!("v ≥ {name} fails: {v} < {lo}")
        }),
    };
    let products = [("rc", r * c), ("cs", c * s), ("rs", r * s)];
    let tight = products
        .iter()
        .min_by_key(|(_, p)| *p)
        .expect("three products");
    let upper = Condition {
        id: "upper",
        statement: "v ≤ min(rc, cs, rs)",
        satisfied: v <= tight.1,
        witness: Some(if v <= tight.1 {
            format!("{v} ≤ {}", tight.1)
        } else {
            format!("v ≤ {} fails: {v} > {}", tight.0, tight.1)
        }),
    };
    FeasibilityReport::from_conditions(vec![
        positive_condition(&[("r", r), ("c", c), ("s", s), ("v", v)]),
        lower,
        upper,
    ])
}
