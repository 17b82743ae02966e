//! Partial Latin squares as sets of `(row, col, sym)` triples.
//!
//! A partial Latin square is a nonempty finite set of triples in which any two
//! coordinates determine the third at most once. Labels are positive integers;
//! nothing forces them to be contiguous, see [`PartialLatinSquare::normalize`].

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use serde::Serialize;
use thiserror::Error;

/// One filled cell: symbol `sym` placed at `(row, col)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Triple {
    pub row: u32,
    pub col: u32,
    pub sym: u32,
}

impl Triple {
    pub const fn new(row: u32, col: u32, sym: u32) -> Self {
        Self { row, col, sym }
    }

    /// Coordinate along `axis`.
    pub fn get(&self, axis: Axis) -> u32 {
        match axis {
            Axis::Row => self.row,
            Axis::Col => self.col,
            Axis::Sym => self.sym,
        }
    }

    pub fn cell(&self) -> (u32, u32) {
        (self.row, self.col)
    }
}

impl From<(u32, u32, u32)> for Triple {
    fn from((row, col, sym): (u32, u32, u32)) -> Self {
        Self { row, col, sym }
    }
}

impl fmt::Display for Triple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.row, self.col, self.sym)
    }
}

/// Reasons a set of triples fails to be a partial Latin square.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PlsError {
    #[error("a partial Latin square needs at least one triple")]
    EmptyInput,
    #[error("triple {0} has a zero coordinate; labels start at 1")]
    ZeroLabel(Triple),
    #[error("triples {0} and {1} fill the same cell")]
    DuplicateCell(Triple, Triple),
    #[error("triples {0} and {1} repeat a symbol within a row")]
    RowSymbolClash(Triple, Triple),
    #[error("triples {0} and {1} repeat a symbol within a column")]
    ColSymbolClash(Triple, Triple),
}

/// A validated partial Latin square.
///
/// Triples are kept sorted, so iteration order is row, then column, then symbol.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PartialLatinSquare {
    triples: BTreeSet<Triple>,
}

/// Checks the three pairwise injectivity conditions and builds the square.
///
/// Identical triples collapse (the input is a set). Triples are examined in
/// sorted order and the first conflict found is reported together with the
/// earlier triple it clashes with.
pub fn validate<I>(triples: I) -> Result<PartialLatinSquare, PlsError>
where
    I: IntoIterator<Item = Triple>,
{
    let triples: BTreeSet<Triple> = triples.into_iter().collect();
    if triples.is_empty() {
        return Err(PlsError::EmptyInput);
    }
    let mut by_cell: HashMap<(u32, u32), Triple> = HashMap::new();
    let mut by_row_sym: HashMap<(u32, u32), Triple> = HashMap::new();
    let mut by_col_sym: HashMap<(u32, u32), Triple> = HashMap::new();
    for &t in &triples {
        if t.row == 0 || t.col == 0 || t.sym == 0 {
            return Err(PlsError::ZeroLabel(t));
        }
        if let Some(&prev) = by_cell.get(&(t.row, t.col)) {
            return Err(PlsError::DuplicateCell(prev, t));
        }
        if let Some(&prev) = by_row_sym.get(&(t.row, t.sym)) {
            return Err(PlsError::RowSymbolClash(prev, t));
        }
        if let Some(&prev) = by_col_sym.get(&(t.col, t.sym)) {
            return Err(PlsError::ColSymbolClash(prev, t));
        }
        by_cell.insert((t.row, t.col), t);
        by_row_sym.insert((t.row, t.sym), t);
        by_col_sym.insert((t.col, t.sym), t);
    }
    Ok(PartialLatinSquare { triples })
}

impl PartialLatinSquare {
    /// Same as [`validate`].
    pub fn new<I: IntoIterator<Item = Triple>>(triples: I) -> Result<Self, PlsError> {
        validate(triples)
    }

    pub fn triples(&self) -> &BTreeSet<Triple> {
        &self.triples
    }

    pub fn iter(&self) -> impl Iterator<Item = &Triple> + '_ {
        self.triples.iter()
    }

    /// Number of triples, v(P).
    pub fn volume(&self) -> usize {
        self.triples.len()
    }

    /// The symbol at `(row, col)`, if the cell is filled.
    pub fn get(&self, row: u32, col: u32) -> Option<u32> {
        self.triples
            .range(Triple::new(row, col, 0)..=Triple::new(row, col, u32::MAX))
            .next()
            .map(|t| t.sym)
    }

    /// Distinct labels used along `axis`, ascending.
    pub fn labels(&self, axis: Axis) -> BTreeSet<u32> {
        self.triples.iter().map(|t| t.get(axis)).collect()
    }

    /// Number of triples per label along `axis`, in increasing label order.
    pub fn line_counts(&self, axis: Axis) -> Vec<usize> {
        let mut counts: BTreeMap<u32, usize> = BTreeMap::new();
        for t in &self.triples {
            *counts.entry(t.get(axis)).or_default() += 1;
        }
        counts.into_values().collect()
    }

    pub fn parameters(&self) -> ParameterProfile {
        parameters_of(self)
    }

    /// The occupied cells on the smallest board containing them.
    pub fn support(&self) -> CellSet {
        let rows = self.triples.iter().map(|t| t.row).max().unwrap_or(1);
        let cols = self.triples.iter().map(|t| t.col).max().unwrap_or(1);
        CellSet::new(
            rows as usize,
            cols as usize,
            self.triples
                .iter()
                .map(|t| (t.row as usize, t.col as usize)),
        )
        .expect("a valid square has a nonempty in-bounds support")
    }

    /// Permutes the coordinates of every triple.
    pub fn conjugate(&self, perm: Conjugation) -> Self {
        Self {
            triples: self.triples.iter().map(|t| perm.apply(t)).collect(),
        }
    }

    /// Relabels rows, columns and symbols order-preservingly onto `1..=r`,
    /// `1..=c` and `1..=s`.
    pub fn normalize(&self) -> Self {
        let relabel = |axis: Axis| -> HashMap<u32, u32> {
            self.labels(axis)
                .into_iter()
                .zip(1..)
                .collect::<HashMap<_, _>>()
        };
        let (rows, cols, syms) = (relabel(Axis::Row), relabel(Axis::Col), relabel(Axis::Sym));
        Self {
            triples: self
                .triples
                .iter()
                .map(|t| Triple::new(rows[&t.row], cols[&t.col], syms[&t.sym]))
                .collect(),
        }
    }

    /// True when the used labels along every axis are exactly `1..=count`.
    pub fn is_normalized(&self) -> bool {
        [Axis::Row, Axis::Col, Axis::Sym].into_iter().all(|axis| {
            let labels = self.labels(axis);
            labels.iter().copied().eq(1..=labels.len() as u32)
        })
    }

    /// Plain-text grid: one line per row, `.` for empty cells.
    pub fn to_grid(&self) -> String {
        let rows = self.triples.iter().map(|t| t.row).max().unwrap_or(0);
        let cols = self.triples.iter().map(|t| t.col).max().unwrap_or(0);
        let mut out = String::new();
        for row in 1..=rows {
            let line: Vec<String> = (1..=cols)
                .map(|col| match self.get(row, col) {
                    Some(sym) => sym.to_string(),
                    None => ".".to_string(),
                })
                .collect();
            out.push_str(&line.join(" "));
            out.push('\n');
        }
        out
    }
}

impl<'a> IntoIterator for &'a PartialLatinSquare {
    type Item = &'a Triple;
    type IntoIter = std::collections::btree_set::Iter<'a, Triple>;

    fn into_iter(self) -> Self::IntoIter {
        self.triples.iter()
    }
}

impl fmt::Display for PartialLatinSquare {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, t) in self.triples.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{t}")?;
        }
        f.write_str("}")
    }
}

/// Row, column and symbol parameters of a square, plus its volume.
///
/// Each family lists the triple count of every occupied label in increasing
/// label order (not sorted by value).
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct ParameterProfile {
    pub row_params: Vec<usize>,
    pub col_params: Vec<usize>,
    pub sym_params: Vec<usize>,
    pub volume: usize,
}

impl ParameterProfile {
    /// Number of occupied rows.
    pub fn r(&self) -> usize {
        self.row_params.len()
    }

    pub fn c(&self) -> usize {
        self.col_params.len()
    }

    pub fn s(&self) -> usize {
        self.sym_params.len()
    }

    pub fn family(&self, axis: Axis) -> &[usize] {
        match axis {
            Axis::Row => &self.row_params,
            Axis::Col => &self.col_params,
            Axis::Sym => &self.sym_params,
        }
    }
}

pub fn parameters_of(square: &PartialLatinSquare) -> ParameterProfile {
    ParameterProfile {
        row_params: square.line_counts(Axis::Row),
        col_params: square.line_counts(Axis::Col),
        sym_params: square.line_counts(Axis::Sym),
        volume: square.volume(),
    }
}

/// One of the three coordinates of a triple.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Axis {
    Row,
    Col,
    Sym,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::Row, Axis::Col, Axis::Sym];

    fn index(self) -> usize {
        self as usize
    }
}

/// A permutation of the three coordinates.
///
/// `source[k]` names the old coordinate that becomes coordinate `k` of the
/// conjugate: swapping rows with symbols is `[Sym, Col, Row]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Conjugation {
    source: [Axis; 3],
}

impl Conjugation {
    pub const IDENTITY: Conjugation = Conjugation {
        source: [Axis::Row, Axis::Col, Axis::Sym],
    };

    /// Returns `None` unless `source` mentions every axis once.
    pub fn new(source: [Axis; 3]) -> Option<Self> {
        let mut seen = [false; 3];
        for axis in source {
            seen[axis.index()] = true;
        }
        seen.iter().all(|&s| s).then_some(Self { source })
    }

    /// The transposition exchanging `a` and `b`.
    pub fn swap(a: Axis, b: Axis) -> Self {
        let mut source = Axis::ALL;
        source.swap(a.index(), b.index());
        Self { source }
    }

    /// All six conjugations, identity first.
    pub fn all() -> [Conjugation; 6] {
        use Axis::*;
        [
            [Row, Col, Sym],
            [Row, Sym, Col],
            [Col, Row, Sym],
            [Col, Sym, Row],
            [Sym, Row, Col],
            [Sym, Col, Row],
        ]
        .map(|source| Conjugation { source })
    }

    pub fn source(&self, target: Axis) -> Axis {
        self.source[target.index()]
    }

    pub fn inverse(&self) -> Self {
        let mut source = Axis::ALL;
        for target in Axis::ALL {
            source[self.source(target).index()] = target;
        }
        Self { source }
    }

    pub fn apply(&self, t: &Triple) -> Triple {
        Triple::new(
            t.get(self.source[0]),
            t.get(self.source[1]),
            t.get(self.source[2]),
        )
    }

    /// The profile a conjugate square has, given the original's.
    pub fn apply_profile(&self, p: &ParameterProfile) -> ParameterProfile {
        ParameterProfile {
            row_params: p.family(self.source[0]).to_vec(),
            col_params: p.family(self.source[1]).to_vec(),
            sym_params: p.family(self.source[2]).to_vec(),
            volume: p.volume,
        }
    }
}

/// Errors building a [`CellSet`].
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CellSetError {
    #[error("a cell set needs at least one cell")]
    Empty,
    #[error("cell ({0},{1}) lies outside the {2}x{3} board")]
    OutOfBounds(usize, usize, usize, usize),
}

/// A nonempty set of cells on an `rows x cols` board, 1-based.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CellSet {
    rows: usize,
    cols: usize,
    cells: BTreeSet<(usize, usize)>,
}

impl CellSet {
    pub fn new<I>(rows: usize, cols: usize, cells: I) -> Result<Self, CellSetError>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let cells: BTreeSet<(usize, usize)> = cells.into_iter().collect();
        if cells.is_empty() {
            return Err(CellSetError::Empty);
        }
        if let Some(&(r, c)) = cells
            .iter()
            .find(|&&(r, c)| r == 0 || c == 0 || r > rows || c > cols)
        {
            return Err(CellSetError::OutOfBounds(r, c, rows, cols));
        }
        Ok(Self { rows, cols, cells })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn contains(&self, row: usize, col: usize) -> bool {
        self.cells.contains(&(row, col))
    }

    pub fn cells(&self) -> &BTreeSet<(usize, usize)> {
        &self.cells
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.cells.iter().copied()
    }

    /// Cells per row, indexed `0..rows` (row `i` at index `i - 1`).
    pub fn row_counts(&self) -> Vec<usize> {
        let mut counts = vec![0; self.rows];
        for &(r, _) in &self.cells {
            counts[r - 1] += 1;
        }
        counts
    }

    pub fn col_counts(&self) -> Vec<usize> {
        let mut counts = vec![0; self.cols];
        for &(_, c) in &self.cells {
            counts[c - 1] += 1;
        }
        counts
    }

    /// Largest row or column count.
    pub fn max_line(&self) -> usize {
        self.row_counts()
            .into_iter()
            .chain(self.col_counts())
            .max()
            .unwrap_or(0)
    }
}
