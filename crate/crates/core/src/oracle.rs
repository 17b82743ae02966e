//! Exhaustive search over small partial Latin squares.
//!
//! This is ground truth for the predicates in [`crate::feasibility`] and the
//! only way to answer queries that prescribe all three parameter families at
//! once. Parameter families are matched as multisets.
//!
//! The search works on normalized squares: rows, columns and symbols can be
//! relabeled independently, so a query with prescribed row parameters is
//! solved with row `i` holding the `i`-th largest parameter, and likewise for
//! columns and symbols. Symbols with identical requirements are further
//! forced to first appear in increasing label order.

use thiserror::Error;

use crate::square::{validate, PartialLatinSquare, Triple};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("the query constrains nothing")]
    EmptyQuery,
    #[error("invalid query: {0}")]
    InvalidQuery(String),
    #[error("search space exceeds the budget: {0}")]
    BudgetExceeded(String),
}

/// Limits on the instances the oracle is willing to search.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    pub max_volume: usize,
    /// Applies to rows, columns and symbols alike.
    pub max_dim: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Self {
            max_volume: 12,
            max_dim: 6,
        }
    }
}

/// Constraints on a partial Latin square. Unset fields are free.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Query {
    pub rows: Option<Vec<usize>>,
    pub cols: Option<Vec<usize>>,
    pub syms: Option<Vec<usize>>,
    pub r: Option<usize>,
    pub c: Option<usize>,
    pub s: Option<usize>,
    pub v: Option<usize>,
}

impl Query {
    pub fn rows(mut self, params: &[usize]) -> Self {
        self.rows = Some(params.to_vec());
        self
    }

    pub fn cols(mut self, params: &[usize]) -> Self {
        self.cols = Some(params.to_vec());
        self
    }

    pub fn syms(mut self, params: &[usize]) -> Self {
        self.syms = Some(params.to_vec());
        self
    }

    pub fn r(mut self, r: usize) -> Self {
        self.r = Some(r);
        self
    }

    pub fn c(mut self, c: usize) -> Self {
        self.c = Some(c);
        self
    }

    pub fn s(mut self, s: usize) -> Self {
        self.s = Some(s);
        self
    }

    pub fn v(mut self, v: usize) -> Self {
        self.v = Some(v);
        self
    }

    fn is_empty(&self) -> bool {
        self.rows.is_none()
            && self.cols.is_none()
            && self.syms.is_none()
            && self.r.is_none()
            && self.c.is_none()
            && self.s.is_none()
            && self.v.is_none()
    }

    /// True when `square` meets every constraint.
    pub fn accepts(&self, square: &PartialLatinSquare) -> bool {
        let p = square.parameters();
        let multiset = |want: &Option<Vec<usize>>, got: &[usize]| {
            want.as_ref().is_none_or(|w| {
                let (mut a, mut b) = (w.clone(), got.to_vec());
                a.sort_unstable();
                b.sort_unstable();
                a == b
            })
        };
        multiset(&self.rows, &p.row_params)
            && multiset(&self.cols, &p.col_params)
            && multiset(&self.syms, &p.sym_params)
            && self.r.is_none_or(|r| r == p.r())
            && self.c.is_none_or(|c| c == p.c())
            && self.s.is_none_or(|s| s == p.s())
            && self.v.is_none_or(|v| v == p.volume)
    }
}

/// Requirements on one family of lines (rows, columns or symbols).
#[derive(Debug, Clone)]
enum Lines {
    /// Exactly these counts, sorted descending.
    Exact(Vec<usize>),
    /// This many lines, each nonempty.
    Count(usize),
    /// Between one and `max` lines.
    Free(usize),
}

impl Lines {
    fn from_query(params: &Option<Vec<usize>>, count: Option<usize>, v_hi: usize) -> Lines {
        match (params, count) {
            (Some(p), _) => {
                let mut p = p.clone();
                p.sort_unstable_by(|a, b| b.cmp(a));
                Lines::Exact(p)
            }
            (None, Some(n)) => Lines::Count(n),
            (None, None) => Lines::Free(v_hi),
        }
    }

    fn max_count(&self) -> usize {
        match self {
            Lines::Exact(p) => p.len(),
            Lines::Count(n) => *n,
            Lines::Free(max) => *max,
        }
    }

    fn counts(&self) -> Vec<usize> {
        match self {
            Lines::Free(max) => (1..=*max).collect(),
            _ => vec![self.max_count()],
        }
    }
}

/// Decides whether some square meets `query`, returning a normalized witness.
pub fn exists_full(
    query: &Query,
    budget: Budget,
) -> Result<Option<PartialLatinSquare>, OracleError> {
    if query.is_empty() {
        return Err(OracleError::EmptyQuery);
    }
    for (name, family) in [
        ("rows", &query.rows),
        ("cols", &query.cols),
        ("symbols", &query.syms),
    ] {
        if let Some(f) = family {
            if f.is_empty() || f.contains(&0) {
                return Err(OracleError::InvalidQuery(format!(
                    "{name} parameters must be a nonempty list of positive integers"
                )));
            }
        }
    }
    for (name, x) in [
        ("r", query.r),
        ("c", query.c),
        ("s", query.s),
        ("v", query.v),
    ] {
        if x == Some(0) {
            return Err(OracleError::InvalidQuery(format!(
                "{name} must be positive"
            )));
        }
    }

    let mut volumes: Vec<(&str, usize)> = Vec::new();
    for (name, family) in [
        ("rows", &query.rows),
        ("cols", &query.cols),
        ("symbols", &query.syms),
    ] {
        if let Some(f) = family {
            volumes.push((name, f.iter().sum()));
        }
    }
    volumes.extend(query.v.map(|v| ("v", v)));
    if let Some(w) = volumes.windows(2).find(|w| w[0].1 != w[1].1) {
        return Err(OracleError::InvalidQuery(format!(
            "implied volumes disagree: {} gives {}, {} gives {}",
            w[0].0, w[0].1, w[1].0, w[1].1
        )));
    }
    for (name, family, count) in [
        ("rows", &query.rows, query.r),
        ("cols", &query.cols, query.c),
        ("symbols", &query.syms, query.s),
    ] {
        if let (Some(f), Some(n)) = (family, count) {
            if f.len() != n {
                return Err(OracleError::InvalidQuery(format!(
                    "{n} {name} requested but {} parameters given",
                    f.len()
                )));
            }
        }
    }

    let dims = [
        query.rows.as_ref().map(Vec::len).or(query.r),
        query.cols.as_ref().map(Vec::len).or(query.c),
        query.syms.as_ref().map(Vec::len).or(query.s),
    ];
    let v_exact = volumes.first().map(|&(_, v)| v);
    let v_hi = v_exact.or_else(|| {
        let products = [(0, 1), (1, 2), (0, 2)]
            .iter()
            .filter_map(|&(a, b)| Some(dims[a]? * dims[b]?));
        products.min()
    });
    let Some(v_hi) = v_hi else {
        return Err(OracleError::BudgetExceeded(
            "volume is unbounded; give v, a parameter family, or two of r, c, s".into(),
        ));
    };
    if v_hi > budget.max_volume {
        return Err(OracleError::BudgetExceeded(format!(
            "volume up to {v_hi} exceeds {}",
            budget.max_volume
        )));
    }

    let rows = Lines::from_query(&query.rows, query.r, v_hi);
    let cols = Lines::from_query(&query.cols, query.c, v_hi);
    let syms = Lines::from_query(&query.syms, query.s, v_hi);
    for (name, lines) in [("rows", &rows), ("columns", &cols), ("symbols", &syms)] {
        if lines.max_count() > budget.max_dim {
            return Err(OracleError::BudgetExceeded(format!(
                "up to {} {name} exceeds {}",
                lines.max_count(),
                budget.max_dim
            )));
        }
    }

    for r in rows.counts() {
        for c in cols.counts() {
            for s in syms.counts() {
                let mut search = Search::new(
                    bounds_for(&rows, r, c.min(s)),
                    bounds_for(&cols, c, r.min(s)),
                    bounds_for(&syms, s, r.min(c)),
                    v_exact.map_or((1, v_hi), |v| (v, v)),
                );
                if let Some(found) = search.run() {
                    debug_assert!(query.accepts(&found));
                    return Ok(Some(found));
                }
            }
        }
    }
    Ok(None)
}

/// Per-line `(min, max)` counts for `n` lines, each capped at `cap`.
fn bounds_for(lines: &Lines, n: usize, cap: usize) -> Vec<(usize, usize)> {
    match lines {
        Lines::Exact(p) => p.iter().map(|&x| (x, x)).collect(),
        _ => vec![(1, cap); n],
    }
}

/// Backtracking over cells in row-major order; each cell tries the symbols
/// in ascending order and then stays empty.
struct Search {
    r: usize,
    c: usize,
    row_bounds: Vec<(usize, usize)>,
    col_bounds: Vec<(usize, usize)>,
    sym_bounds: Vec<(usize, usize)>,
    volume: (usize, usize),
    grid: Vec<Option<usize>>,
    row_cnt: Vec<usize>,
    col_cnt: Vec<usize>,
    sym_cnt: Vec<usize>,
    row_has: Vec<u64>,
    col_has: Vec<u64>,
    placed: usize,
}

impl Search {
    fn new(
        row_bounds: Vec<(usize, usize)>,
        col_bounds: Vec<(usize, usize)>,
        sym_bounds: Vec<(usize, usize)>,
        volume: (usize, usize),
    ) -> Self {
        let (r, c, s) = (row_bounds.len(), col_bounds.len(), sym_bounds.len());
        assert!(s <= 64, "symbol sets are bitmasks");
        Self {
            r,
            c,
            grid: vec![None; r * c],
            row_cnt: vec![0; r],
            col_cnt: vec![0; c],
            sym_cnt: vec![0; s],
            row_has: vec![0; r],
            col_has: vec![0; c],
            placed: 0,
            row_bounds,
            col_bounds,
            sym_bounds,
            volume,
        }
    }

    fn run(&mut self) -> Option<PartialLatinSquare> {
        let lower: usize = self.row_bounds.iter().map(|b| b.0).sum();
        let upper: usize = self.row_bounds.iter().map(|b| b.1).sum();
        if lower > self.volume.1 || upper < self.volume.0 {
            return None;
        }
        if !self.dfs(0) {
            return None;
        }
        let triples = self.grid.iter().enumerate().filter_map(|(idx, sym)| {
            sym.map(|k| {
                Triple::new(
                    (idx / self.c + 1) as u32,
                    (idx % self.c + 1) as u32,
                    k as u32 + 1,
                )
            })
        });
        Some(validate(triples).expect("search only places compatible triples"))
    }

    /// Can the lower bounds still be met once cell `idx` onwards is decided?
    fn viable(&self, idx: usize) -> bool {
        let remaining = self.r * self.c - idx;
        if self.placed + remaining < self.volume.0 {
            return false;
        }
        let (i, j) = (idx / self.c, idx % self.c);
        // Rows before i are closed; row i has c - j cells left.
        for (row, &(lo, _)) in self.row_bounds.iter().enumerate() {
            let left = match row.cmp(&i) {
                std::cmp::Ordering::Less => 0,
                std::cmp::Ordering::Equal => self.c - j,
                std::cmp::Ordering::Greater => self.c,
            };
            if self.row_cnt[row] + left < lo {
                return false;
            }
        }
        for (col, &(lo, _)) in self.col_bounds.iter().enumerate() {
            let left = if i >= self.r {
                0
            } else if col >= j {
                self.r - i
            } else {
                self.r - i - 1
            };
            if self.col_cnt[col] + left < lo {
                return false;
            }
        }
        let mut deficit = 0;
        for (k, &(lo, _)) in self.sym_bounds.iter().enumerate() {
            let need = lo.saturating_sub(self.sym_cnt[k]);
            if need == 0 {
                continue;
            }
            let in_row = i < self.r && self.row_has[i] >> k & 1 == 0;
            let rows_left = self.r.saturating_sub(i + 1) + usize::from(in_row);
            if need > rows_left {
                return false;
            }
            deficit += need;
        }
        deficit <= remaining
    }

    fn dfs(&mut self, idx: usize) -> bool {
        if !self.viable(idx) {
            return false;
        }
        if idx == self.r * self.c {
            return self.placed <= self.volume.1;
        }
        let (i, j) = (idx / self.c, idx % self.c);
        if self.placed < self.volume.1
            && self.row_cnt[i] < self.row_bounds[i].1
            && self.col_cnt[j] < self.col_bounds[j].1
        {
            let busy = self.row_has[i] | self.col_has[j];
            for k in 0..self.sym_bounds.len() {
                if busy >> k & 1 == 1 || self.sym_cnt[k] >= self.sym_bounds[k].1 {
                    continue;
                }
                // Interchangeable symbols are introduced in label order.
                if self.sym_cnt[k] == 0
                    && k > 0
                    && self.sym_bounds[k - 1] == self.sym_bounds[k]
                    && self.sym_cnt[k - 1] == 0
                {
                    continue;
                }
                self.place(i, j, k, true);
                if self.dfs(idx + 1) {
                    return true;
                }
                self.place(i, j, k, false);
            }
        }
        self.dfs(idx + 1)
    }

    fn place(&mut self, i: usize, j: usize, k: usize, on: bool) {
        let bit = 1u64 << k;
        if on {
            self.grid[i * self.c + j] = Some(k);
            self.row_cnt[i] += 1;
            self.col_cnt[j] += 1;
            self.sym_cnt[k] += 1;
            self.placed += 1;
        } else {
            self.grid[i * self.c + j] = None;
            self.row_cnt[i] -= 1;
            self.col_cnt[j] -= 1;
            self.sym_cnt[k] -= 1;
            self.placed -= 1;
        }
        self.row_has[i] ^= bit;
        self.col_has[j] ^= bit;
    }
}

/// Caps for [`enumerate`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Bounds {
    pub r: usize,
    pub c: usize,
    pub s: usize,
    pub v: usize,
}

/// Lists every normalized square with at most `r` rows, `c` columns, `s`
/// symbols and `v` cells, once each, in lexicographic order of their sorted
/// triple lists.
pub fn enumerate(bounds: Bounds, budget: Budget) -> Result<Enumeration, OracleError> {
    if bounds.v > budget.max_volume || bounds.r.max(bounds.c).max(bounds.s) > budget.max_dim {
        return Err(OracleError::BudgetExceeded(format!(
            "bounds r={} c={} s={} v={} exceed the budget",
            bounds.r, bounds.c, bounds.s, bounds.v
        )));
    }
    Ok(Enumeration::new(bounds))
}

/// Lazy pre-order walk of the tree of sorted triple lists.
#[derive(Debug, Clone)]
pub struct Enumeration {
    candidates: Vec<Triple>,
    max_volume: usize,
    chosen: Vec<usize>,
    next: usize,
    cell_used: Vec<bool>,
    row_sym_used: Vec<bool>,
    col_sym_used: Vec<bool>,
    col_cnt: Vec<usize>,
    sym_cnt: Vec<usize>,
    bounds: Bounds,
}

impl Enumeration {
    fn new(bounds: Bounds) -> Self {
        let Bounds { r, c, s, v } = bounds;
        let candidates = (1..=r as u32)
            .flat_map(|row| {
                (1..=c as u32)
                    .flat_map(move |col| (1..=s as u32).map(move |sym| Triple::new(row, col, sym)))
            })
            .collect();
        Self {
            candidates,
            max_volume: v,
            chosen: Vec::new(),
            next: 0,
            cell_used: vec![false; r * c],
            row_sym_used: vec![false; r * s],
            col_sym_used: vec![false; c * s],
            col_cnt: vec![0; c],
            sym_cnt: vec![0; s],
            bounds,
        }
    }

    fn slots(&self, t: Triple) -> (usize, usize, usize) {
        let (row, col, sym) = (t.row as usize - 1, t.col as usize - 1, t.sym as usize - 1);
        (
            row * self.bounds.c + col,
            row * self.bounds.s + sym,
            col * self.bounds.s + sym,
        )
    }

    fn toggle(&mut self, t: Triple, on: bool) {
        let (a, b, c) = self.slots(t);
        self.cell_used[a] = on;
        self.row_sym_used[b] = on;
        self.col_sym_used[c] = on;
        let (col, sym) = (t.col as usize - 1, t.sym as usize - 1);
        if on {
            self.col_cnt[col] += 1;
            self.sym_cnt[sym] += 1;
        } else {
            self.col_cnt[col] -= 1;
            self.sym_cnt[sym] -= 1;
        }
    }

    fn fits(&self, t: Triple) -> bool {
        let (a, b, c) = self.slots(t);
        !self.cell_used[a] && !self.row_sym_used[b] && !self.col_sym_used[c]
    }

    fn is_normalized(&self) -> bool {
        let prefix = |counts: &[usize]| {
            let used = counts.iter().take_while(|&&x| x > 0).count();
            counts[used..].iter().all(|&x| x == 0)
        };
        prefix(&self.col_cnt) && prefix(&self.sym_cnt)
    }

    fn current(&self) -> PartialLatinSquare {
        validate(self.chosen.iter().map(|&k| self.candidates[k]))
            .expect("only compatible triples are chosen")
    }
}

impl Iterator for Enumeration {
    type Item = PartialLatinSquare;

    fn next(&mut self) -> Option<PartialLatinSquare> {
        loop {
            // Rows appear in nondecreasing order, so skipping a row label
            // could never be repaired later.
            let max_row = self
                .chosen
                .last()
                .map_or(1, |&k| self.candidates[k].row + 1);
            let extension = if self.chosen.len() < self.max_volume {
                (self.next..self.candidates.len())
                    .take_while(|&k| self.candidates[k].row <= max_row)
                    .find(|&k| self.fits(self.candidates[k]))
            } else {
                None
            };
            match extension {
                Some(k) => {
                    self.toggle(self.candidates[k], true);
                    self.chosen.push(k);
                    self.next = k + 1;
                    if self.is_normalized() {
                        return Some(self.current());
                    }
                }
                None => {
                    let k = self.chosen.pop()?;
                    self.toggle(self.candidates[k], false);
                    self.next = k + 1;
                }
            }
        }
    }
}
