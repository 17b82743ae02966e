//! Constructions of partial Latin squares with prescribed parameters.
//!
//! Everything funnels through [`fill_symbols`], which puts symbols on a given
//! cell set using as few symbols as the busiest row or column allows. It
//! peels the cells off in layers: with `p` the current maximum line count,
//! one matching of the occupancy graph covering every line of count `p` gets
//! symbol `p` and is removed, lowering the maximum to `p - 1`.
//!
//! [`build_theorem`] realizes the requested line counts as a cell set, fills
//! it, then spends the surplus symbols with [`split_symbols`].
//! [`build_proposition`] and [`build_corollary`] reduce to it.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::feasibility::{check_construction, check_row_params, check_sizes, FeasibilityReport};
use crate::matching::{covering_matching, occupancy_graph, MatchingError, Side};
use crate::realization::{
    distribute_rows, realize_degree_matrix, rebalance_columns, RealizationError,
};
use crate::square::{validate, Axis, CellSet, PartialLatinSquare, Triple};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BuildError {
    #[error("no such partial Latin square exists:\n{0}")]
    Infeasible(FeasibilityReport),
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error(transparent)]
    Matching(#[from] MatchingError),
    #[error(transparent)]
    Realization(#[from] RealizationError),
}

/// The cells that received one symbol during [`fill_layers`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Layer {
    pub symbol: u32,
    pub cells: BTreeSet<(usize, usize)>,
}

/// Runs the layer peeling and returns the layers from the largest symbol
/// down to symbol 1.
pub fn fill_layers(cells: &CellSet) -> Result<Vec<Layer>, BuildError> {
    let (rows, cols) = (cells.rows(), cells.cols());
    let mut remaining: BTreeSet<(usize, usize)> = cells.cells().clone();
    let top = cells.max_line();
    let mut layers = Vec::with_capacity(top);

    for p in (1..=top).rev() {
        let current = CellSet::new(rows, cols, remaining.iter().copied())
            .map_err(|_| violated(format!("no cells left for symbol {p}")))?;
        let graph = occupancy_graph(&current);
        if graph.max_degree() != p {
            return Err(violated(format!(
                "busiest line has {} cells before layer {p}",
                graph.max_degree()
            )));
        }
        let x1 = graph.vertices_of_degree(Side::Left, p);
        let y1 = graph.vertices_of_degree(Side::Right, p);
        let layer: BTreeSet<(usize, usize)> = covering_matching(&graph, &x1, &y1)?
            .iter()
            .map(|(l, r)| (l + 1, r + 1))
            .collect();
        remaining.retain(|cell| !layer.contains(cell));
        layers.push(Layer {
            symbol: p as u32,
            cells: layer,
        });
    }
    if !remaining.is_empty() {
        return Err(violated(format!("{} cells left unfilled", remaining.len())));
    }
    Ok(layers)
}

/// Puts symbols on exactly the cells of `cells` so that the number of
/// symbols equals the largest row or column count.
pub fn fill_symbols(cells: &CellSet) -> Result<PartialLatinSquare, BuildError> {
    let triples = fill_layers(cells)?.into_iter().flat_map(|layer| {
        let sym = layer.symbol;
        layer
            .cells
            .into_iter()
            .map(move |(r, c)| Triple::new(r as u32, c as u32, sym))
    });
    validate(triples).map_err(|e| violated(format!("layers do not form a square: {e}")))
}

/// Raises the number of symbols to `s` by giving single cells fresh symbols.
///
/// Only cells of symbols occurring at least twice are relabeled, so no symbol
/// disappears: each step takes the most frequent symbol (smallest label on
/// ties), its cell in the lowest row (then column), and gives it the label
/// one above the current largest.
pub fn split_symbols(
    square: &PartialLatinSquare,
    s: usize,
) -> Result<PartialLatinSquare, BuildError> {
    let s0 = square.labels(Axis::Sym).len();
    let v = square.volume();
    if s < s0 || s > v {
        return Err(violated(format!(
            "cannot reach {s} symbols from {s0} with {v} cells"
        )));
    }
    let mut by_symbol: BTreeMap<u32, BTreeSet<(u32, u32)>> = BTreeMap::new();
    for t in square {
        by_symbol.entry(t.sym).or_default().insert(t.cell());
    }
    let first_new = by_symbol.keys().last().copied().unwrap_or(0) + 1;
    for next in (first_new..).take(s - s0) {
        let (&sym, _) = by_symbol
            .iter()
            .filter(|(_, cells)| cells.len() >= 2)
            .max_by_key(|(&sym, cells)| (cells.len(), std::cmp::Reverse(sym)))
            .expect("s ≤ v leaves a repeated symbol");
        let cell = by_symbol
            .get_mut(&sym)
            .and_then(|cells| cells.pop_first())
            .expect("symbol has cells");
        by_symbol.insert(next, BTreeSet::from([cell]));
    }
    let triples = by_symbol
        .into_iter()
        .flat_map(|(sym, cells)| cells.into_iter().map(move |(r, c)| Triple::new(r, c, sym)));
    validate(triples).map_err(|e| violated(format!("relabeling broke the square: {e}")))
}

/// A square whose row `i` holds `n[i]` cells, whose column `j` holds `m[j]`
/// cells, and which uses exactly `s` symbols.
pub fn build_theorem(n: &[usize], m: &[usize], s: usize) -> Result<PartialLatinSquare, BuildError> {
    let report = check_construction(n, m, s);
    if !report.feasible {
        return Err(BuildError::Infeasible(report));
    }
    let cells = realize_degree_matrix(n, m)?;
    let filled = fill_symbols(&cells)?;
    Ok(split_symbols(&filled, s)?.normalize())
}

/// A square whose row `i` holds `n[i]` cells, with exactly `c` columns and
/// `s` symbols.
pub fn build_proposition(
    n: &[usize],
    c: usize,
    s: usize,
) -> Result<PartialLatinSquare, BuildError> {
    let report = check_row_params(n, c, s);
    if !report.feasible {
        return Err(BuildError::Infeasible(report));
    }
    let leftmost = CellSet::new(
        n.len(),
        c,
        n.iter()
            .enumerate()
            .flat_map(|(i, &k)| (1..=k).map(move |j| (i + 1, j))),
    )
    .map_err(|e| violated(e.to_string()))?;
    let balanced = rebalance_columns(&leftmost, s)?;
    build_theorem(n, &balanced.col_counts(), s)
}

/// A square with exactly `r` rows, `c` columns, `s` symbols and `v` cells.
pub fn build_corollary(
    r: usize,
    c: usize,
    s: usize,
    v: usize,
) -> Result<PartialLatinSquare, BuildError> {
    let report = check_sizes(r, c, s, v);
    if !report.feasible {
        return Err(BuildError::Infeasible(report));
    }
    let n = distribute_rows(v, r, c.min(s))?;
    build_proposition(&n, c, s)
}

fn violated(msg: String) -> BuildError {
    BuildError::PreconditionViolated(msg)
}
