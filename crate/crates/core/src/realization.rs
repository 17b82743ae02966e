//! Cell sets with prescribed line counts.

use thiserror::Error;

use crate::feasibility::{dominance_check, Dominance, FeasibilityError};
use crate::square::CellSet;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RealizationError {
    #[error("line sums differ: rows {rows}, columns {cols}")]
    SumMismatch { rows: usize, cols: usize },
    #[error(
        "no 0-1 matrix has these line sums: the {k} largest rows and {l} largest \
         columns need {lhs} > {rhs}"
    )]
    Dominance {
        k: usize,
        l: usize,
        lhs: usize,
        rhs: usize,
    },
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
}

/// Builds a cell set with `n[i]` cells in row `i + 1` and `m[j]` cells in
/// column `j + 1`.
///
/// Rows are filled in decreasing order of `n` (lower index first on ties),
/// each taking the columns with the largest remaining demand (lower index
/// first on ties).
pub fn realize_degree_matrix(n: &[usize], m: &[usize]) -> Result<CellSet, RealizationError> {
    if n.is_empty() || m.is_empty() || n.contains(&0) || m.contains(&0) {
        return Err(RealizationError::PreconditionViolated(
            "line sums must be nonempty lists of positive integers".into(),
        ));
    }
    match dominance_check(n, m) {
        Err(FeasibilityError::SumMismatch { rows, cols }) => {
            return Err(RealizationError::SumMismatch { rows, cols })
        }
        Ok(Dominance::Violated { k, l, lhs, rhs }) => {
            return Err(RealizationError::Dominance { k, l, lhs, rhs })
        }
        Ok(Dominance::Holds) => {}
    }

    let mut row_order: Vec<usize> = (0..n.len()).collect();
    row_order.sort_by_key(|&i| (std::cmp::Reverse(n[i]), i));
    let mut demand = m.to_vec();
    let mut cells = Vec::with_capacity(n.iter().sum());
    for i in row_order {
        let mut cols: Vec<usize> = (0..m.len()).collect();
        cols.sort_by_key(|&j| (std::cmp::Reverse(demand[j]), j));
        for &j in &cols[..n[i]] {
            assert!(demand[j] > 0, "greedy realization ran out of column demand");
            demand[j] -= 1;
            cells.push((i + 1, j + 1));
        }
    }
    debug_assert!(demand.iter().all(|&d| d == 0));
    Ok(CellSet::new(n.len(), m.len(), cells).expect("cells lie on the board"))
}

/// Moves cells within their rows until every column holds between 1 and
/// `s` cells.
///
/// Each step takes the fullest column (lowest index on ties) as source and a
/// column holding fewer than `s` cells as destination, preferring an empty
/// one and then the lowest index; the moved cell is in the lowest row that
/// has the source cell but not the destination cell.
pub fn rebalance_columns(cells: &CellSet, s: usize) -> Result<CellSet, RealizationError> {
    let (rows, cols) = (cells.rows(), cells.cols());
    let total = cells.len();
    let cap = cols.min(s);
    if let Some((i, &x)) = cells
        .row_counts()
        .iter()
        .enumerate()
        .find(|(_, &x)| x > cap)
    {
        return Err(RealizationError::PreconditionViolated(format!(
            "row {} has {x} cells, more than min(c,s) = {cap}",
            i + 1
        )));
    }
    if total < cols || total > cols * s {
        return Err(RealizationError::PreconditionViolated(format!(
            "{total} cells cannot give {cols} columns between 1 and {s} cells each"
        )));
    }

    let mut grid = vec![vec![false; cols]; rows];
    for (r, c) in cells.iter() {
        grid[r - 1][c - 1] = true;
    }
    let mut counts = cells.col_counts();
    while counts.iter().any(|&x| x == 0 || x > s) {
        let src = (0..cols)
            .max_by_key(|&j| (counts[j], std::cmp::Reverse(j)))
            .expect("board has columns");
        let dst = (0..cols)
            .filter(|&j| counts[j] < s)
            .min_by_key(|&j| (counts[j] != 0, j))
            .expect("a column below s exists while total ≤ c·s");
        let row = (0..rows)
            .find(|&i| grid[i][src] && !grid[i][dst])
            .expect("the fuller column has a cell the other lacks");
        grid[row][src] = false;
        grid[row][dst] = true;
        counts[src] -= 1;
        counts[dst] += 1;
    }

    let moved = (0..rows).flat_map(|i| {
        let row = &grid[i];
        (0..cols)
            .filter(move |&j| row[j])
            .map(move |j| (i + 1, j + 1))
    });
    Ok(CellSet::new(rows, cols, moved).expect("cells stay on the board"))
}

/// Splits `v` cells over `r` rows as evenly as possible, larger parts first,
/// no part above `cap`.
pub fn distribute_rows(v: usize, r: usize, cap: usize) -> Result<Vec<usize>, RealizationError> {
    if r == 0 || v < r || v > r * cap {
        return Err(RealizationError::PreconditionViolated(format!(
            "{v} cells cannot fill {r} rows with 1 to {cap} cells each"
        )));
    }
    let (q, extra) = (v / r, v % r);
    Ok((0..r).map(|i| if i < extra { q + 1 } else { q }).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn cells(rows: usize, cols: usize, cs: &[(usize, usize)]) -> CellSet {
        CellSet::new(rows, cols, cs.iter().copied()).unwrap()
    }

    /// Tries every 0-1 matrix; only usable for tiny boards.
    fn realizable_brute(n: &[usize], m: &[usize]) -> bool {
        let (r, c) = (n.len(), m.len());
        (0u32..1 << (r * c)).any(|mask| {
            let bit = |i: usize, j: usize| (mask >> (i * c + j) & 1) as usize;
            (0..r).all(|i| (0..c).map(|j| bit(i, j)).sum::<usize>() == n[i])
                && (0..c).all(|j| (0..r).map(|i| bit(i, j)).sum::<usize>() == m[j])
        })
    }

    #[test]
    fn realize_examples() {
        assert_eq!(
            realize_degree_matrix(&[2, 1], &[2, 1]).unwrap(),
            cells(2, 2, &[(1, 1), (1, 2), (2, 1)])
        );
        assert_eq!(
            realize_degree_matrix(&[1, 1], &[1, 1]).unwrap(),
            cells(2, 2, &[(1, 1), (2, 2)])
        );
        assert!(!realizable_brute(&[3, 3, 3, 1], &[4, 4, 1, 1]));
        assert_eq!(
            realize_degree_matrix(&[3, 3, 3, 1], &[4, 4, 1, 1]),
            Err(RealizationError::Dominance {
                k: 3,
                l: 2,
                lhs: 17,
                rhs: 16
            })
        );
    }

    #[test]
    fn realize_maps_back_to_caller_order() {
        let b = realize_degree_matrix(&[1, 3], &[1, 2, 1]).unwrap();
        assert_eq!(b.row_counts(), vec![1, 3]);
        assert_eq!(b.col_counts(), vec![1, 2, 1]);
    }

    #[test]
    fn realize_rejects_bad_input() {
        assert_eq!(
            realize_degree_matrix(&[2], &[1]),
            Err(RealizationError::SumMismatch { rows: 2, cols: 1 })
        );
        assert!(matches!(
            realize_degree_matrix(&[], &[]),
            Err(RealizationError::PreconditionViolated(_))
        ));
    }

    #[test]
    fn rebalance_examples() {
        let b = cells(2, 2, &[(1, 1), (2, 2)]);
        assert_eq!(rebalance_columns(&b, 1).unwrap(), b);

        let b = cells(3, 3, &[(1, 1), (2, 1), (3, 1)]);
        let out = rebalance_columns(&b, 2).unwrap();
        assert_eq!(out, cells(3, 3, &[(1, 2), (2, 3), (3, 1)]));
        assert_eq!(out.col_counts(), vec![1, 1, 1]);

        let b = cells(2, 2, &[(1, 1), (1, 2), (2, 1)]);
        assert!(matches!(
            rebalance_columns(&b, 1),
            Err(RealizationError::PreconditionViolated(_))
        ));
    }

    #[test]
    fn rebalance_fills_empty_columns_even_when_under_cap() {
        // All counts are already ≤ s, but column 3 is empty.
        let b = cells(3, 3, &[(1, 1), (2, 1), (3, 2)]);
        let out = rebalance_columns(&b, 2).unwrap();
        assert!(out.col_counts().iter().all(|&x| (1..=2).contains(&x)));
        assert_eq!(out.row_counts(), b.row_counts());
    }

    #[test]
    fn distribute_examples() {
        assert_eq!(distribute_rows(5, 3, 2).unwrap(), vec![2, 2, 1]);
        assert_eq!(distribute_rows(4, 4, 7).unwrap(), vec![1; 4]);
        assert_eq!(distribute_rows(6, 3, 2).unwrap(), vec![2, 2, 2]);
        assert!(distribute_rows(7, 3, 2).is_err());
        assert!(distribute_rows(2, 3, 2).is_err());
    }

    /// Random 0-1 matrix with no empty line, as (rows, cols, cells).
    fn arb_full_lines() -> impl Strategy<Value = CellSet> {
        (1usize..6, 1usize..6)
            .prop_flat_map(|(r, c)| {
                (
                    Just(r),
                    Just(c),
                    prop::collection::vec(any::<bool>(), r * c),
                )
            })
            .prop_filter_map("no empty line", |(r, c, bits)| {
                let cs: Vec<(usize, usize)> = bits
                    .iter()
                    .enumerate()
                    .filter(|(_, &b)| b)
                    .map(|(k, _)| (k / c + 1, k % c + 1))
                    .collect();
                let b = CellSet::new(r, c, cs).ok()?;
                (b.row_counts().iter().chain(&b.col_counts()).all(|&x| x > 0)).then_some(b)
            })
    }

    proptest! {
        #[test]
        fn realize_reproduces_line_sums(b in arb_full_lines()) {
            let (n, m) = (b.row_counts(), b.col_counts());
            let out = realize_degree_matrix(&n, &m).unwrap();
            prop_assert_eq!(out.row_counts(), n.clone());
            prop_assert_eq!(out.col_counts(), m.clone());
            prop_assert_eq!(realize_degree_matrix(&n, &m).unwrap(), out);
        }

        #[test]
        fn rebalance_keeps_rows_and_bounds_columns(
            n in prop::collection::vec(1usize..5, 1..6),
            c in 1usize..6,
            s in 1usize..6,
        ) {
            let v: usize = n.iter().sum();
            prop_assume!(n.iter().all(|&x| x <= c.min(s)) && c <= v && v <= c * s);
            let leftmost = CellSet::new(
                n.len(),
                c,
                n.iter().enumerate().flat_map(|(i, &k)| (1..=k).map(move |j| (i + 1, j))),
            ).unwrap();
            let out = rebalance_columns(&leftmost, s).unwrap();
            prop_assert_eq!(out.row_counts(), n);
            prop_assert_eq!(out.len(), v);
            prop_assert!(out.col_counts().iter().all(|&x| (1..=s).contains(&x)));
        }

        #[test]
        fn distribute_meets_row_param_bounds(
            (r, c, s, v) in (1usize..6, 1usize..6, 1usize..6).prop_flat_map(|(r, c, s)| {
                let lo = r.max(c).max(s);
                let hi = (r * c).min(c * s).min(r * s);
                (Just(r), Just(c), Just(s), lo..=hi.max(lo))
            })
        ) {
            prop_assume!(v <= (r * c).min(c * s).min(r * s));
            let n = distribute_rows(v, r, c.min(s)).unwrap();
            prop_assert_eq!(n.iter().sum::<usize>(), v);
            prop_assert!(n.windows(2).all(|w| w[0] >= w[1] && w[0] - w[1] <= 1));
            prop_assert!(crate::feasibility::check_row_params(&n, c, s).feasible);
        }
    }
}
