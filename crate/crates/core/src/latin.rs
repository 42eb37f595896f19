//! Latin squares, partial latin squares and subsquare bookkeeping.
//!
//! Symbols are 1-based (`1..=n`); row, column and block offsets are 0-based.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// A symbol of a latin square, in `1..=order`.
pub type Symbol = u32;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ShapeError {
    #[error("expected {expected} rows, found {found}")]
    RowCount { expected: usize, found: usize },
    #[error("row {row} has {found} entries, expected {expected}")]
    RowLength {
        row: usize,
        expected: usize,
        found: usize,
    },
    #[error("a square must have order at least 1")]
    Empty,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PartitionError {
    #[error("part {index} is zero")]
    ZeroPart { index: usize },
    #[error("parts are not nonincreasing at index {index}")]
    NotSorted { index: usize },
}

/// Ordered block sizes used to amalgamate rows, columns or symbols.
///
/// Unlike [`Partition`] the parts may come in any order, which is what the
/// outline machinery needs (a slack block can be larger than the subsquares
/// before it).
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Composition {
    parts: Vec<usize>,
    offsets: Vec<usize>,
}

impl Composition {
    pub fn new(parts: Vec<usize>) -> Result<Self, PartitionError> {
        if let Some(index) = parts.iter().position(|&p| p == 0) {
            return Err(PartitionError::ZeroPart { index });
        }
        let mut offsets = Vec::with_capacity(parts.len() + 1);
        let mut acc = 0;
        offsets.push(0);
        for &p in &parts {
            acc += p;
            offsets.push(acc);
        }
        Ok(Composition { parts, offsets })
    }

    /// `n` copies of 1.
    pub fn units(n: usize) -> Self {
        Composition::new(vec![1; n]).expect("unit parts are positive")
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn total(&self) -> usize {
        *self.offsets.last().unwrap_or(&0)
    }

    /// Sum of the parts before `i`; `offset(len())` is the total.
    pub fn offset(&self, i: usize) -> usize {
        self.offsets[i]
    }

    pub fn range(&self, i: usize) -> std::ops::Range<usize> {
        self.offsets[i]..self.offsets[i + 1]
    }

    /// For every element `0..total()`, the index of the part containing it.
    pub fn group_map(&self) -> Vec<usize> {
        let mut map = Vec::with_capacity(self.total());
        for (i, &p) in self.parts.iter().enumerate() {
            map.extend(std::iter::repeat_n(i, p));
        }
        map
    }
}

impl TryFrom<Vec<usize>> for Composition {
    type Error = PartitionError;

    fn try_from(parts: Vec<usize>) -> Result<Self, Self::Error> {
        Composition::new(parts)
    }
}

impl From<Composition> for Vec<usize> {
    fn from(c: Composition) -> Self {
        c.parts
    }
}

/// Nonincreasing positive integers `h_1 >= h_2 >= ... >= h_m`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Partition {
    inner: Composition,
}

impl Partition {
    pub fn new(parts: Vec<usize>) -> Result<Self, PartitionError> {
        if let Some(w) = parts.windows(2).position(|w| w[0] < w[1]) {
            return Err(PartitionError::NotSorted { index: w + 1 });
        }
        Ok(Partition {
            inner: Composition::new(parts)?,
        })
    }

    /// Sorts the parts into nonincreasing order first.
    pub fn sorted(mut parts: Vec<usize>) -> Result<Self, PartitionError> {
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Partition::new(parts)
    }

    pub fn parts(&self) -> &[usize] {
        self.inner.parts()
    }

    pub fn len(&self) -> usize {
        self.inner.len()
    }

    pub fn is_empty(&self) -> bool {
        self.inner.is_empty()
    }

    pub fn total(&self) -> usize {
        self.inner.total()
    }

    pub fn offset(&self, i: usize) -> usize {
        self.inner.offset(i)
    }

    pub fn as_composition(&self) -> &Composition {
        &self.inner
    }

    /// The requested parts followed by the slack part `n - sum`, dropping the
    /// slack when it is zero.
    pub fn with_slack(&self, order: usize) -> Option<Composition> {
        let sum = self.total();
        if sum > order {
            return None;
        }
        let mut parts = self.parts().to_vec();
        if order > sum {
            parts.push(order - sum);
        }
        Composition::new(parts).ok()
    }
}

impl TryFrom<Vec<usize>> for Partition {
    type Error = PartitionError;

    fn try_from(parts: Vec<usize>) -> Result<Self, Self::Error> {
        Partition::new(parts)
    }
}

impl From<Partition> for Vec<usize> {
    fn from(p: Partition) -> Self {
        p.inner.parts
    }
}

/// The first cell (in row-major order) at which latinness fails.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum LatinViolation {
    #[error("symbol {symbol} at ({row}, {col}) is outside 1..=n")]
    SymbolOutOfRange { row: usize, col: usize, symbol: Symbol },
    #[error("symbol {symbol} repeats in row {row} (column {col})")]
    RowRepeat { row: usize, col: usize, symbol: Symbol },
    #[error("symbol {symbol} repeats in column {col} (row {row})")]
    ColumnRepeat { row: usize, col: usize, symbol: Symbol },
    #[error("cell ({row}, {col}) is empty")]
    Empty { row: usize, col: usize },
}

impl LatinViolation {
    pub fn cell(&self) -> (usize, usize) {
        match *self {
            LatinViolation::SymbolOutOfRange { row, col, .. }
            | LatinViolation::RowRepeat { row, col, .. }
            | LatinViolation::ColumnRepeat { row, col, .. }
            | LatinViolation::Empty { row, col } => (row, col),
        }
    }
}

/// Why a square is not an ILS with the requested subsquares on its diagonal.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IlsError {
    #[error("subsquare orders sum to {sum}, more than the order {order}")]
    OrdersExceedOrder { sum: usize, order: usize },
    #[error("not a latin square: {0}")]
    NotLatin(LatinViolation),
    /// `block` is 0-based.
    #[error("block {block} is not a subsquare: symbol {symbol} at ({row}, {col})")]
    Block {
        block: usize,
        row: usize,
        col: usize,
        symbol: Symbol,
    },
}

/// Scans a grid of optional symbols. Empty cells are skipped unless
/// `require_full` is set.
fn scan_latin(
    order: usize,
    get: impl Fn(usize, usize) -> Option<Symbol>,
    require_full: bool,
) -> Result<(), LatinViolation> {
    let mut col_seen = vec![false; order * order];
    let mut row_seen = vec![false; order];
    for row in 0..order {
        row_seen.iter_mut().for_each(|s| *s = false);
        for col in 0..order {
            let Some(symbol) = get(row, col) else {
                if require_full {
                    return Err(LatinViolation::Empty { row, col });
                }
                continue;
            };
            if symbol == 0 || symbol as usize > order {
                return Err(LatinViolation::SymbolOutOfRange { row, col, symbol });
            }
            let s = symbol as usize - 1;
            if row_seen[s] {
                return Err(LatinViolation::RowRepeat { row, col, symbol });
            }
            row_seen[s] = true;
            if col_seen[col * order + s] {
                return Err(LatinViolation::ColumnRepeat { row, col, symbol });
            }
            col_seen[col * order + s] = true;
        }
    }
    Ok(())
}

fn check_rows<T>(rows: &[Vec<T>]) -> Result<usize, ShapeError> {
    let order = rows.len();
    if order == 0 {
        return Err(ShapeError::Empty);
    }
    for (row, r) in rows.iter().enumerate() {
        if r.len() != order {
            return Err(ShapeError::RowLength {
                row,
                expected: order,
                found: r.len(),
            });
        }
    }
    Ok(order)
}

/// An `n x n` grid of symbols from `1..=n`.
///
/// Construction only checks the shape; [`LatinSquare::validate`] checks the
/// latin property. Every constructor in this crate returns validated squares.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LatinSquare {
    order: usize,
    cells: Vec<Symbol>,
}

impl LatinSquare {
    pub fn from_rows(rows: Vec<Vec<Symbol>>) -> Result<Self, ShapeError> {
        let order = check_rows(&rows)?;
        Ok(LatinSquare {
            order,
            cells: rows.into_iter().flatten().collect(),
        })
    }

    pub(crate) fn from_cells(order: usize, cells: Vec<Symbol>) -> Self {
        debug_assert_eq!(cells.len(), order * order);
        LatinSquare { order, cells }
    }

    /// The Cayley table of `Z_n`, shifted to symbols `1..=n`.
    pub fn cyclic(order: usize) -> Self {
        let cells = (0..order * order)
            .map(|x| ((x / order + x % order) % order) as Symbol + 1)
            .collect();
        LatinSquare { order, cells }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn get(&self, row: usize, col: usize) -> Symbol {
        self.cells[row * self.order + col]
    }

    pub(crate) fn set(&mut self, row: usize, col: usize, symbol: Symbol) {
        self.cells[row * self.order + col] = symbol;
    }

    pub fn row(&self, row: usize) -> &[Symbol] {
        &self.cells[row * self.order..(row + 1) * self.order]
    }

    pub fn rows(&self) -> Vec<Vec<Symbol>> {
        self.cells.chunks(self.order).map(<[_]>::to_vec).collect()
    }

    pub fn cells(&self) -> &[Symbol] {
        &self.cells
    }

    pub fn validate(&self) -> Result<(), LatinViolation> {
        scan_latin(self.order, |r, c| Some(self.get(r, c)), true)
    }

    /// Checks that the diagonal blocks of sizes `parts` (taken in order from
    /// the top-left corner) are subsquares on ascending symbol ranges.
    pub fn verify_ils(&self, parts: &[usize]) -> Result<(), IlsError> {
        let sum: usize = parts.iter().sum();
        if sum > self.order {
            return Err(IlsError::OrdersExceedOrder {
                sum,
                order: self.order,
            });
        }
        self.validate().map_err(IlsError::NotLatin)?;
        let mut offset = 0;
        for (block, &h) in parts.iter().enumerate() {
            let lo = offset as Symbol;
            let hi = (offset + h) as Symbol;
            for row in offset..offset + h {
                for col in offset..offset + h {
                    let symbol = self.get(row, col);
                    if symbol <= lo || symbol > hi {
                        return Err(IlsError::Block {
                            block,
                            row,
                            col,
                            symbol,
                        });
                    }
                }
            }
            offset += h;
        }
        Ok(())
    }

    /// Applies `row_perm`, `col_perm` and `sym_perm` (all 0-based maps from
    /// old to new index) to produce an isotopic square.
    pub fn permuted(&self, row_perm: &[usize], col_perm: &[usize], sym_perm: &[usize]) -> Self {
        let n = self.order;
        let mut cells = vec![0; n * n];
        for r in 0..n {
            for c in 0..n {
                let s = self.get(r, c) as usize - 1;
                cells[row_perm[r] * n + col_perm[c]] = sym_perm[s] as Symbol + 1;
            }
        }
        LatinSquare { order: n, cells }
    }

    /// Reorders the blocks of `blocks` (applied to rows, columns and symbols
    /// alike) so that old block `order[t]` becomes new block `t`.
    pub fn reorder_blocks(&self, blocks: &Composition, order: &[usize]) -> Self {
        let perm = block_permutation(blocks, order);
        self.permuted(&perm, &perm, &perm)
    }

    pub fn subsquare_specs(&self, parts: &[usize]) -> Vec<SubsquareSpec> {
        let mut offset = 0;
        parts
            .iter()
            .map(|&h| {
                let spec = SubsquareSpec::diagonal(offset, h);
                offset += h;
                spec
            })
            .collect()
    }
}

/// Maps each element to its position after moving old block `order[t]` into
/// slot `t`.
pub(crate) fn block_permutation(blocks: &Composition, order: &[usize]) -> Vec<usize> {
    let mut perm = vec![0; blocks.total()];
    let mut next = 0;
    for &b in order {
        for x in blocks.range(b) {
            perm[x] = next;
            next += 1;
        }
    }
    debug_assert_eq!(next, blocks.total());
    perm
}

impl fmt::Display for LatinSquare {
    /// One row per line, space separated.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let width = self.order.to_string().len();
        for row in 0..self.order {
            for (c, s) in self.row(row).iter().enumerate() {
                if c > 0 {
                    f.write_str(" ")?;
                }
                write!(f, "{s:>width$}")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// An `r x r` grid whose cells are empty or hold a symbol in `1..=r`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartialLatinSquare {
    order: usize,
    cells: Vec<Option<Symbol>>,
}

impl PartialLatinSquare {
    pub fn empty(order: usize) -> Self {
        PartialLatinSquare {
            order,
            cells: vec![None; order * order],
        }
    }

    pub fn from_rows(rows: Vec<Vec<Option<Symbol>>>) -> Result<Self, ShapeError> {
        let order = check_rows(&rows)?;
        Ok(PartialLatinSquare {
            order,
            cells: rows.into_iter().flatten().collect(),
        })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn get(&self, row: usize, col: usize) -> Option<Symbol> {
        self.cells[row * self.order + col]
    }

    pub fn set(&mut self, row: usize, col: usize, symbol: Option<Symbol>) {
        self.cells[row * self.order + col] = symbol;
    }

    pub fn row(&self, row: usize) -> &[Option<Symbol>] {
        &self.cells[row * self.order..(row + 1) * self.order]
    }

    pub fn validate(&self) -> Result<(), LatinViolation> {
        scan_latin(self.order, |r, c| self.get(r, c), false)
    }

    pub fn empty_in_row(&self, row: usize) -> usize {
        self.row(row).iter().filter(|s| s.is_none()).count()
    }

    pub fn empty_in_col(&self, col: usize) -> usize {
        (0..self.order).filter(|&r| self.get(r, col).is_none()).count()
    }
}

impl fmt::Display for PartialLatinSquare {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let width = self.order.to_string().len();
        for row in 0..self.order {
            for (c, s) in self.row(row).iter().enumerate() {
                if c > 0 {
                    f.write_str(" ")?;
                }
                match s {
                    Some(s) => write!(f, "{s:>width$}")?,
                    None => write!(f, "{:>width$}", ".")?,
                }
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// An `h x h` block that should be a latin square on `symbols`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubsquareSpec {
    pub row_offset: usize,
    pub col_offset: usize,
    pub order: usize,
    #[serde(skip)]
    pub symbols: Vec<Symbol>,
}

impl SubsquareSpec {
    /// The normal-form block at `(offset, offset)` on symbols `offset+1..=offset+h`.
    pub fn diagonal(offset: usize, order: usize) -> Self {
        SubsquareSpec {
            row_offset: offset,
            col_offset: offset,
            order,
            symbols: (offset as Symbol + 1..=(offset + order) as Symbol).collect(),
        }
    }

    /// True when the block uses exactly `symbols`, each once per block row
    /// and block column.
    pub fn holds_in(&self, square: &LatinSquare) -> bool {
        let h = self.order;
        if self.symbols.len() != h
            || self.row_offset + h > square.order()
            || self.col_offset + h > square.order()
        {
            return false;
        }
        let index = |s: Symbol| self.symbols.iter().position(|&x| x == s);
        let mut col_seen = vec![false; h * h];
        for a in 0..h {
            let mut row_seen = vec![false; h];
            for b in 0..h {
                let Some(s) = index(square.get(self.row_offset + a, self.col_offset + b)) else {
                    return false;
                };
                if row_seen[s] || col_seen[b * h + s] {
                    return false;
                }
                row_seen[s] = true;
                col_seen[b * h + s] = true;
            }
        }
        true
    }
}

/// Replaces every cell of `base` with an `h x h` block, the block at `(i, j)`
/// being a cyclic square on symbols `(base(i,j) - 1) * h + 1..=base(i,j) * h`.
pub fn inflate(base: &LatinSquare, h: usize) -> LatinSquare {
    assert!(h >= 1, "inflation factor must be positive");
    let k = base.order();
    let n = k * h;
    let mut cells = vec![0; n * n];
    for i in 0..k {
        for j in 0..k {
            let block = (base.get(i, j) as usize - 1) * h;
            for a in 0..h {
                for b in 0..h {
                    cells[(i * h + a) * n + j * h + b] = (block + (a + b) % h + 1) as Symbol;
                }
            }
        }
    }
    LatinSquare::from_cells(n, cells)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("no idempotent latin square of order {0} exists")]
pub struct NoIdempotentSquare(pub usize);

/// A latin square with `L(i,i) = i` for every `i`.
///
/// Odd orders use `L(i,j) = (i + j) / 2`; even orders prolong the square of
/// order `k - 1` along the transversal `j = i + 1`.
pub fn idempotent_square(k: usize) -> Result<LatinSquare, NoIdempotentSquare> {
    if k == 0 || k == 2 {
        return Err(NoIdempotentSquare(k));
    }
    if k % 2 == 1 {
        let half = k.div_ceil(2);
        let cells = (0..k * k)
            .map(|x| {
                let (i, j) = (x / k + 1, x % k + 1);
                (((i + j) * half + k - 1) % k + 1) as Symbol
            })
            .collect();
        return Ok(LatinSquare::from_cells(k, cells));
    }
    let m = k - 1;
    let odd = idempotent_square(m)?;
    let mut cells = vec![0; k * k];
    for i in 0..m {
        for j in 0..m {
            cells[i * k + j] = odd.get(i, j);
        }
        let t = (i + 1) % m;
        cells[i * k + m] = odd.get(i, t);
        cells[m * k + t] = odd.get(i, t);
        cells[i * k + t] = k as Symbol;
    }
    cells[m * k + m] = k as Symbol;
    Ok(LatinSquare::from_cells(k, cells))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::sample_square;

    #[test]
    fn sample_square_is_latin() {
        assert_eq!(sample_square().validate(), Ok(()));
    }

    #[test]
    fn order_one() {
        let sq = LatinSquare::from_rows(vec![vec![1]]).unwrap();
        assert_eq!(sq.validate(), Ok(()));
        assert_eq!(sq.verify_ils(&[1]), Ok(()));
    }

    #[test]
    fn swapped_cells_fail_in_first_column() {
        let mut rows = sample_square().rows();
        rows[0].swap(0, 1);
        let sq = LatinSquare::from_rows(rows).unwrap();
        let err = sq.validate().unwrap_err();
        assert_eq!(
            err,
            LatinViolation::ColumnRepeat {
                row: 1,
                col: 0,
                symbol: 2
            }
        );
    }

    #[test]
    fn ragged_rows_are_a_shape_error() {
        let err = LatinSquare::from_rows(vec![vec![1, 2], vec![2]]).unwrap_err();
        assert!(matches!(err, ShapeError::RowLength { row: 1, .. }));
        assert_eq!(LatinSquare::from_rows(vec![]), Err(ShapeError::Empty));
    }

    #[test]
    fn sample_square_subsquares() {
        let sq = sample_square();
        assert_eq!(sq.verify_ils(&[3, 2, 1]), Ok(()));
        assert_eq!(sq.verify_ils(&[8]), Ok(()));
        assert!(matches!(
            sq.verify_ils(&[3, 3]),
            Err(IlsError::Block { block: 1, .. })
        ));
        assert!(matches!(
            sq.verify_ils(&[5, 4]),
            Err(IlsError::OrdersExceedOrder { sum: 9, order: 8 })
        ));
        for spec in sq.subsquare_specs(&[3, 2, 1]) {
            assert!(spec.holds_in(&sq));
        }
    }

    #[test]
    fn inflate_two_by_two() {
        let base = LatinSquare::from_rows(vec![vec![2, 1], vec![1, 2]]).unwrap();
        let sq = inflate(&base, 3);
        assert_eq!(sq.order(), 6);
        assert_eq!(sq.validate(), Ok(()));
        for r in 0..3 {
            for c in 0..3 {
                assert!((4..=6).contains(&sq.get(r, c)));
                assert!((1..=3).contains(&sq.get(r, c + 3)));
                assert!((4..=6).contains(&sq.get(r + 3, c + 3)));
            }
        }
        assert_eq!(inflate(&base, 1), base);
    }

    #[test]
    fn idempotent_small_orders() {
        assert_eq!(idempotent_square(1).unwrap().rows(), vec![vec![1]]);
        assert_eq!(
            idempotent_square(3).unwrap().rows(),
            vec![vec![1, 3, 2], vec![3, 2, 1], vec![2, 1, 3]]
        );
        assert_eq!(idempotent_square(2), Err(NoIdempotentSquare(2)));
        for k in (1..=24).filter(|&k| k != 2) {
            let sq = idempotent_square(k).unwrap();
            assert_eq!(sq.validate(), Ok(()), "order {k}");
            for i in 0..k {
                assert_eq!(sq.get(i, i) as usize, i + 1);
            }
        }
    }

    #[test]
    fn inflated_idempotent_squares_have_diagonal_subsquares() {
        for k in 3..=8 {
            let base = idempotent_square(k).unwrap();
            for h in 1..=4 {
                let sq = inflate(&base, h);
                assert_eq!(sq.verify_ils(&vec![h; k]), Ok(()), "k={k} h={h}");
            }
        }
    }

    #[test]
    fn partition_offsets() {
        let p = Partition::new(vec![3, 2, 1, 1, 1]).unwrap();
        assert_eq!(p.total(), 8);
        for i in 0..p.len() {
            assert_eq!(p.offset(i + 1) - p.offset(i), p.parts()[i]);
        }
        assert_eq!(p.offset(p.len()), 8);
        assert!(Partition::new(vec![1, 2]).is_err());
        assert!(Partition::new(vec![2, 0]).is_err());
        assert_eq!(
            p.with_slack(10).unwrap().parts(),
            &[3, 2, 1, 1, 1, 2][..]
        );
    }

    #[test]
    fn partial_square_checks() {
        let mut p = PartialLatinSquare::empty(3);
        p.set(0, 0, Some(1));
        p.set(1, 1, Some(1));
        assert_eq!(p.validate(), Ok(()));
        p.set(2, 0, Some(1));
        assert!(matches!(
            p.validate(),
            Err(LatinViolation::ColumnRepeat { row: 2, col: 0, .. })
        ));
        assert_eq!(p.empty_in_row(0), 2);
    }

    #[test]
    fn block_reordering_moves_subsquares() {
        // ILS(3;1) with slack block first: move the slack to the end.
        let sq = LatinSquare::from_rows(vec![vec![1, 3, 2], vec![3, 2, 1], vec![2, 1, 3]]).unwrap();
        let blocks = Composition::new(vec![2, 1]).unwrap();
        let moved = sq.reorder_blocks(&blocks, &[1, 0]);
        assert_eq!(moved.validate(), Ok(()));
        assert_eq!(moved.get(0, 0), 1);
    }
}
