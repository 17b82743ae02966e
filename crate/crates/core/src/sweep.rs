//! Exhaustive comparison of the feasibility predicates against the oracle.

use std::fmt;

use crate::builder::{build_corollary, build_proposition, build_theorem, BuildError};
use crate::feasibility::{check_construction, check_row_params, check_sizes, join};
use crate::oracle::{exists_full, Budget, OracleError, Query};
use crate::square::PartialLatinSquare;

/// One instance of one of the three existence questions.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Instance {
    Theorem {
        rows: Vec<usize>,
        cols: Vec<usize>,
        s: usize,
    },
    RowParams {
        rows: Vec<usize>,
        c: usize,
        s: usize,
    },
    Sizes {
        r: usize,
        c: usize,
        s: usize,
        v: usize,
    },
}

impl fmt::Display for Instance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Instance::Theorem { rows, cols, s } => {
                write!(f, "rows={} cols={} s={s}", join(rows), join(cols))
            }
            Instance::RowParams { rows, c, s } => write!(f, "rows={} c={c} s={s}", join(rows)),
            Instance::Sizes { r, c, s, v } => write!(f, "r={r} c={c} s={s} v={v}"),
        }
    }
}

impl Instance {
    /// Verdict of the matching feasibility predicate.
    pub fn predicate(&self) -> bool {
        match self {
            Instance::Theorem { rows, cols, s } => check_construction(rows, cols, *s).feasible,
            Instance::RowParams { rows, c, s } => check_row_params(rows, *c, *s).feasible,
            Instance::Sizes { r, c, s, v } => check_sizes(*r, *c, *s, *v).feasible,
        }
    }

    pub fn query(&self) -> Query {
        let q = Query::default();
        match self {
            Instance::Theorem { rows, cols, s } => q.rows(rows).cols(cols).s(*s),
            Instance::RowParams { rows, c, s } => q.rows(rows).c(*c).s(*s),
            Instance::Sizes { r, c, s, v } => q.r(*r).c(*c).s(*s).v(*v),
        }
    }

    pub fn oracle(&self, budget: Budget) -> Result<Option<PartialLatinSquare>, OracleError> {
        exists_full(&self.query(), budget)
    }

    pub fn build(&self) -> Result<PartialLatinSquare, BuildError> {
        match self {
            Instance::Theorem { rows, cols, s } => build_theorem(rows, cols, *s),
            Instance::RowParams { rows, c, s } => build_proposition(rows, *c, *s),
            Instance::Sizes { r, c, s, v } => build_corollary(*r, *c, *s, *v),
        }
    }

    /// True when `square` has exactly the requested parameters: row and
    /// column sequences for [`Instance::Theorem`], counts elsewhere.
    pub fn is_met_by(&self, square: &PartialLatinSquare) -> bool {
        let p = square.parameters();
        match self {
            Instance::Theorem { rows, cols, s } => {
                p.row_params == *rows && p.col_params == *cols && p.s() == *s
            }
            Instance::RowParams { rows, c, s } => {
                p.row_params == *rows && p.c() == *c && p.s() == *s
            }
            Instance::Sizes { r, c, s, v } => {
                p.r() == *r && p.c() == *c && p.s() == *s && p.volume == *v
            }
        }
    }
}

/// All sequences of length `1..=max_len` with entries in `1..=max_entry`.
pub fn sequences(max_len: usize, max_entry: usize) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = Vec::new();
    let mut layer: Vec<Vec<usize>> = vec![Vec::new()];
    for _ in 0..max_len {
        layer = layer
            .iter()
            .flat_map(|prefix| {
                (1..=max_entry).map(move |x| {
                    let mut next = prefix.clone();
                    next.push(x);
                    next
                })
            })
            .collect();
        out.extend(layer.iter().cloned());
    }
    out
}

/// Row and column sequences with equal sums, each paired with every `s`
/// from 1 to `v + 1`.
pub fn theorem_instances(max_len: usize, max_entry: usize, max_volume: usize) -> Vec<Instance> {
    let seqs: Vec<Vec<usize>> = sequences(max_len, max_entry)
        .into_iter()
        .filter(|x| x.iter().sum::<usize>() <= max_volume)
        .collect();
    let mut out = Vec::new();
    for rows in &seqs {
        let v: usize = rows.iter().sum();
        for cols in seqs.iter().filter(|m| m.iter().sum::<usize>() == v) {
            for s in 1..=v + 1 {
                out.push(Instance::Theorem {
                    rows: rows.clone(),
                    cols: cols.clone(),
                    s,
                });
            }
        }
    }
    out
}

pub fn row_param_instances(
    max_len: usize,
    max_entry: usize,
    max_c: usize,
    max_s: usize,
) -> Vec<Instance> {
    let mut out = Vec::new();
    for rows in sequences(max_len, max_entry) {
        for c in 1..=max_c {
            for s in 1..=max_s {
                out.push(Instance::RowParams {
                    rows: rows.clone(),
                    c,
                    s,
                });
            }
        }
    }
    out
}

pub fn size_instances(max_dim: usize, max_volume: usize) -> Vec<Instance> {
    let mut out = Vec::new();
    for r in 1..=max_dim {
        for c in 1..=max_dim {
            for s in 1..=max_dim {
                for v in 1..=max_volume {
                    out.push(Instance::Sizes { r, c, s, v });
                }
            }
        }
    }
    out
}

/// A predicate and the oracle disagreeing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mismatch {
    pub instance: Instance,
    pub predicate: bool,
    pub oracle: bool,
}

impl fmt::Display for Mismatch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}: predicate says {}, oracle says {}",
            self.instance,
            if self.predicate {
                "feasible"
            } else {
                "infeasible"
            },
            if self.oracle { "exists" } else { "none" }
        )
    }
}

#[derive(Debug, Clone, Default)]
pub struct SweepOutcome {
    pub checked: usize,
    /// Instances the oracle found a square for.
    pub feasible: Vec<Instance>,
    pub mismatches: Vec<Mismatch>,
}

/// Runs the predicate and the oracle on every instance.
pub fn compare(instances: &[Instance], budget: Budget) -> Result<SweepOutcome, OracleError> {
    let mut outcome = SweepOutcome::default();
    for inst in instances {
        let predicate = inst.predicate();
        let oracle = inst.oracle(budget)?.is_some();
        outcome.checked += 1;
        if oracle {
            outcome.feasible.push(inst.clone());
        }
        if predicate != oracle {
            outcome.mismatches.push(Mismatch {
                instance: inst.clone(),
                predicate,
                oracle,
            });
        }
    }
    Ok(outcome)
}
