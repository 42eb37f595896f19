//! Outline rectangles: reduction of latin squares modulo block partitions,
//! lifting back to latin squares, and symmetric rational outline squares.
//!
//! Block, row-group and symbol-group indices are 0-based here; symbol group
//! `l` of `R` stands for the symbols `R.offset(l)+1..=R.offset(l+1)`.

use std::fmt;

use num_rational::Ratio;
use thiserror::Error;

use crate::error::{Error, Result};
use crate::flow::{perfect_matching, FlowNetwork};
use crate::latin::{Composition, LatinSquare, SubsquareSpec, Symbol};

/// A `u x v` array of multisets over `t` symbol groups.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct OutlineRectangle {
    p: Composition,
    q: Composition,
    r: Composition,
    counts: Vec<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum OutlineViolation {
    #[error("partitions have different totals ({p}, {q}, {r})")]
    TotalMismatch { p: usize, q: usize, r: usize },
    #[error("cell ({i}, {j}) holds {found} symbols, expected {expected}")]
    CellSize {
        i: usize,
        j: usize,
        expected: u64,
        found: u64,
    },
    #[error("symbol {symbol} occurs {found} times in row {i}, expected {expected}")]
    RowSymbol {
        i: usize,
        symbol: usize,
        expected: u64,
        found: u64,
    },
    #[error("symbol {symbol} occurs {found} times in column {j}, expected {expected}")]
    ColumnSymbol {
        j: usize,
        symbol: usize,
        expected: u64,
        found: u64,
    },
    #[error("respect check needs an outline square")]
    NotSquare,
    #[error("cell ({i}, {i}) holds {found} copies of {i}, expected {expected}")]
    Diagonal { i: usize, expected: u64, found: u64 },
}

impl OutlineRectangle {
    pub fn zero(p: Composition, q: Composition, r: Composition) -> Self {
        let len = p.len() * q.len() * r.len();
        OutlineRectangle {
            p,
            q,
            r,
            counts: vec![0; len],
        }
    }

    /// `counts[(i * v + j) * t + l]` copies of symbol `l` in cell `(i, j)`.
    pub fn from_counts(
        p: Composition,
        q: Composition,
        r: Composition,
        counts: Vec<u64>,
    ) -> Result<Self> {
        let len = p.len() * q.len() * r.len();
        if counts.len() != len {
            return Err(Error::Precondition(format!(
                "expected {len} counts, found {}",
                counts.len()
            )));
        }
        Ok(OutlineRectangle { p, q, r, counts })
    }

    pub fn p(&self) -> &Composition {
        &self.p
    }

    pub fn q(&self) -> &Composition {
        &self.q
    }

    pub fn r(&self) -> &Composition {
        &self.r
    }

    pub fn rows(&self) -> usize {
        self.p.len()
    }

    pub fn cols(&self) -> usize {
        self.q.len()
    }

    pub fn symbols(&self) -> usize {
        self.r.len()
    }

    pub fn is_square(&self) -> bool {
        self.p == self.q && self.q == self.r
    }

    fn index(&self, i: usize, j: usize, l: usize) -> usize {
        (i * self.cols() + j) * self.symbols() + l
    }

    pub fn get(&self, i: usize, j: usize, l: usize) -> u64 {
        self.counts[self.index(i, j, l)]
    }

    pub fn set(&mut self, i: usize, j: usize, l: usize, count: u64) {
        let x = self.index(i, j, l);
        self.counts[x] = count;
    }

    pub fn add(&mut self, i: usize, j: usize, l: usize, count: u64) {
        let x = self.index(i, j, l);
        self.counts[x] += count;
    }

    /// Symbol counts of cell `(i, j)`, indexed by symbol group.
    pub fn cell(&self, i: usize, j: usize) -> &[u64] {
        let start = self.index(i, j, 0);
        &self.counts[start..start + self.symbols()]
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    /// Checks the three defining sum conditions in order, then (if given)
    /// that `O_i(i,i) = p_i^2` for every `i` in `respect`.
    pub fn validate(&self, respect: Option<&[usize]>) -> std::result::Result<(), OutlineViolation> {
        let (p, q, r) = (self.p.parts(), self.q.parts(), self.r.parts());
        if self.p.total() != self.q.total() || self.q.total() != self.r.total() {
            return Err(OutlineViolation::TotalMismatch {
                p: self.p.total(),
                q: self.q.total(),
                r: self.r.total(),
            });
        }
        let (u, v, t) = (self.rows(), self.cols(), self.symbols());
        for i in 0..u {
            for j in 0..v {
                let found: u64 = self.cell(i, j).iter().sum();
                let expected = (p[i] * q[j]) as u64;
                if found != expected {
                    return Err(OutlineViolation::CellSize { i, j, expected, found });
                }
            }
        }
        for i in 0..u {
            for l in 0..t {
                let found: u64 = (0..v).map(|j| self.get(i, j, l)).sum();
                let expected = (p[i] * r[l]) as u64;
                if found != expected {
                    return Err(OutlineViolation::RowSymbol {
                        i,
                        symbol: l,
                        expected,
                        found,
                    });
                }
            }
        }
        for j in 0..v {
            for l in 0..t {
                let found: u64 = (0..u).map(|i| self.get(i, j, l)).sum();
                let expected = (q[j] * r[l]) as u64;
                if found != expected {
                    return Err(OutlineViolation::ColumnSymbol {
                        j,
                        symbol: l,
                        expected,
                        found,
                    });
                }
            }
        }
        if let Some(respect) = respect {
            if !self.is_square() {
                return Err(OutlineViolation::NotSquare);
            }
            for &i in respect {
                let expected = (p[i] * p[i]) as u64;
                let found = self.get(i, i, i);
                if found != expected {
                    return Err(OutlineViolation::Diagonal { i, expected, found });
                }
            }
        }
        Ok(())
    }

    /// Lifts to a latin square whose reduction modulo `(P,Q,R)` is `self`.
    pub fn lift(&self) -> Result<LatinSquare> {
        self.lift_with(LiftOptions::default())
    }

    pub fn lift_with(&self, options: LiftOptions) -> Result<LatinSquare> {
        self.validate(None)
            .map_err(|e| Error::InvalidOutline(e.to_string()))?;
        let rows = split_rows(self, options)?;
        let groups = split_columns(self, &rows)?;
        let square = split_symbols(self, &groups)?;
        square.validate()?;
        Ok(square)
    }
}

/// Knobs for [`OutlineRectangle::lift_with`].
#[derive(Debug, Clone, Copy, Default)]
pub struct LiftOptions {
    /// Re-validate the outline conditions after every row extraction.
    pub check_intermediate: bool,
}

/// Rows of a partly split rectangle: a multiplicity and `v * t` counts.
type RowGroup = (usize, Vec<u64>);

fn check_row_groups(o: &OutlineRectangle, groups: &[RowGroup]) -> Result<()> {
    let p = Composition::new(groups.iter().map(|g| g.0).collect())?;
    let counts = groups.iter().flat_map(|g| g.1.iter().copied()).collect();
    let partial = OutlineRectangle::from_counts(p, o.q.clone(), o.r.clone(), counts)?;
    partial
        .validate(None)
        .map_err(|e| Error::Internal(format!("row split left an invalid outline: {e}")))
}

/// Splits every row group into unit rows, one max-flow per extracted row.
fn split_rows(o: &OutlineRectangle, options: LiftOptions) -> Result<Vec<Vec<u64>>> {
    let (v, t) = (o.cols(), o.symbols());
    let (q, r) = (o.q.parts(), o.r.parts());
    let n = o.p.total() as u64;
    let mut pending: Vec<RowGroup> = (0..o.rows())
        .map(|i| {
            let start = o.index(i, 0, 0);
            (o.p.parts()[i], o.counts[start..start + v * t].to_vec())
        })
        .collect();
    let mut done: Vec<Vec<u64>> = Vec::with_capacity(o.p.total());
    for gi in 0..pending.len() {
        while pending[gi].0 > 1 {
            let counts = &pending[gi].1;
            // source, column groups, symbol groups, sink
            let (s, sink) = (0, 1 + v + t);
            let mut net = FlowNetwork::new(v + t + 2);
            for (j, &qj) in q.iter().enumerate() {
                net.add_edge(s, 1 + j, qj as u64);
            }
            let mut ids = vec![usize::MAX; v * t];
            for j in 0..v {
                for l in 0..t {
                    let c = counts[j * t + l];
                    if c > 0 {
                        ids[j * t + l] = net.add_edge(1 + j, 1 + v + l, c);
                    }
                }
            }
            for (l, &rl) in r.iter().enumerate() {
                net.add_edge(1 + v + l, sink, rl as u64);
            }
            if net.max_flow(s, sink) != n {
                return Err(Error::InvalidOutline(format!(
                    "no unit row can be split from row group {gi}"
                )));
            }
            let row: Vec<u64> = ids
                .iter()
                .map(|&id| if id == usize::MAX { 0 } else { net.flow_on(id) })
                .collect();
            let group = &mut pending[gi];
            for (c, x) in group.1.iter_mut().zip(&row) {
                *c -= x;
            }
            group.0 -= 1;
            done.push(row);
            if options.check_intermediate {
                let mut state: Vec<RowGroup> = done.iter().map(|r| (1, r.clone())).collect();
                state.extend(pending[gi..].iter().cloned());
                check_row_groups(o, &state)?;
            }
        }
        done.push(std::mem::take(&mut pending[gi].1));
    }
    Ok(done)
}

/// Splits every column group of the unit rows, giving each cell one symbol group.
fn split_columns(o: &OutlineRectangle, rows: &[Vec<u64>]) -> Result<Vec<usize>> {
    let (v, t) = (o.cols(), o.symbols());
    let n = rows.len();
    let r = o.r.parts();
    let mut grid = vec![0usize; n * n];
    for j in 0..v {
        let mut remaining: Vec<Vec<u64>> = rows
            .iter()
            .map(|row| row[j * t..(j + 1) * t].to_vec())
            .collect();
        let base = o.q.offset(j);
        for unit in 0..o.q.parts()[j] {
            let (s, sink) = (0, 1 + n + t);
            let mut net = FlowNetwork::new(n + t + 2);
            for a in 0..n {
                net.add_edge(s, 1 + a, 1);
            }
            let mut ids = vec![usize::MAX; n * t];
            for (a, rem) in remaining.iter().enumerate() {
                for (l, &c) in rem.iter().enumerate() {
                    if c > 0 {
                        ids[a * t + l] = net.add_edge(1 + a, 1 + n + l, 1);
                    }
                }
            }
            for (l, &rl) in r.iter().enumerate() {
                net.add_edge(1 + n + l, sink, rl as u64);
            }
            if net.max_flow(s, sink) != n as u64 {
                return Err(Error::InvalidOutline(format!(
                    "no unit column can be split from column group {j}"
                )));
            }
            for a in 0..n {
                let l = (0..t)
                    .find(|&l| ids[a * t + l] != usize::MAX && net.flow_on(ids[a * t + l]) == 1)
                    .ok_or_else(|| Error::Internal("row left without a symbol".into()))?;
                remaining[a][l] -= 1;
                grid[a * n + base + unit] = l;
            }
        }
    }
    Ok(grid)
}

/// Decomposes each symbol group's cells into perfect matchings.
fn split_symbols(o: &OutlineRectangle, grid: &[usize]) -> Result<LatinSquare> {
    let n = o.p.total();
    let mut cells = vec![0 as Symbol; n * n];
    for l in 0..o.symbols() {
        let mut adj: Vec<Vec<usize>> = (0..n)
            .map(|a| (0..n).filter(|&b| grid[a * n + b] == l).collect())
            .collect();
        for d in 0..o.r.parts()[l] {
            let matching = perfect_matching(&adj).ok_or_else(|| {
                Error::InvalidOutline(format!("symbol group {l} is not regular"))
            })?;
            let symbol = (o.r.offset(l) + d + 1) as Symbol;
            for (a, &b) in matching.iter().enumerate() {
                cells[a * n + b] = symbol;
                adj[a].retain(|&x| x != b);
            }
        }
    }
    Ok(LatinSquare::from_cells(n, cells))
}

/// Amalgamates rows, columns and symbols of `square` by `p`, `q` and `r`.
pub fn reduce_modulo(
    square: &LatinSquare,
    p: &Composition,
    q: &Composition,
    r: &Composition,
) -> Result<OutlineRectangle> {
    let n = square.order();
    if p.total() != n || q.total() != n || r.total() != n {
        return Err(Error::Precondition(format!(
            "partitions must sum to the order {n} (got {}, {}, {})",
            p.total(),
            q.total(),
            r.total()
        )));
    }
    let (pm, qm, rm) = (p.group_map(), q.group_map(), r.group_map());
    let mut o = OutlineRectangle::zero(p.clone(), q.clone(), r.clone());
    for a in 0..n {
        for b in 0..n {
            let s = square.get(a, b) as usize - 1;
            o.add(pm[a], qm[b], rm[s], 1);
        }
    }
    Ok(o)
}

/// Lifts an outline square that respects its first `k` blocks to an ILS with
/// those blocks as diagonal subsquares.
pub fn ils_from_outline(o: &OutlineRectangle, k: usize) -> Result<(LatinSquare, Vec<SubsquareSpec>)> {
    if !o.is_square() || k > o.rows() {
        return Err(Error::Precondition(
            "an outline square with at least k blocks is required".into(),
        ));
    }
    let respect: Vec<usize> = (0..k).collect();
    o.validate(Some(&respect))
        .map_err(|e| Error::Precondition(e.to_string()))?;
    let square = o.lift()?;
    let parts = &o.p().parts()[..k];
    square.verify_ils(parts)?;
    let specs = square.subsquare_specs(parts);
    Ok((square, specs))
}

/// Exact nonnegative rational, symmetric in its three arguments.
pub type Rational = Ratio<i64>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalOutlineSquare {
    p: Composition,
    values: Vec<Rational>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RosViolation {
    #[error("value at ({i}, {j}, {l}) is negative")]
    Negative { i: usize, j: usize, l: usize },
    #[error("values over ({i}, {j}, *) sum to {found}, expected {expected}")]
    PlaneSum {
        i: usize,
        j: usize,
        expected: Rational,
        found: Rational,
    },
    #[error("value at ({i}, {i}, {i}) is {found}, expected {expected}")]
    Diagonal {
        i: usize,
        expected: Rational,
        found: Rational,
    },
}

impl RationalOutlineSquare {
    pub fn zero(p: Composition) -> Self {
        let u = p.len();
        RationalOutlineSquare {
            p,
            values: vec![Rational::from_integer(0); u * u * u],
        }
    }

    pub fn p(&self) -> &Composition {
        &self.p
    }

    pub fn get(&self, i: usize, j: usize, l: usize) -> Rational {
        let u = self.p.len();
        self.values[(i * u + j) * u + l]
    }

    /// Sets the value of the unordered triple `{i, j, l}`.
    pub fn set(&mut self, i: usize, j: usize, l: usize, value: Rational) {
        let u = self.p.len();
        for (a, b, c) in [(i, j, l), (i, l, j), (j, i, l), (j, l, i), (l, i, j), (l, j, i)] {
            self.values[(a * u + b) * u + c] = value;
        }
    }

    pub fn validate(&self, respect: &[usize]) -> std::result::Result<(), RosViolation> {
        let u = self.p.len();
        let zero = Rational::from_integer(0);
        for i in 0..u {
            for j in 0..u {
                for l in 0..u {
                    if self.get(i, j, l) < zero {
                        return Err(RosViolation::Negative { i, j, l });
                    }
                }
            }
        }
        let p = self.p.parts();
        for i in 0..u {
            for j in 0..u {
                let found: Rational = (0..u).map(|l| self.get(i, j, l)).sum();
                let expected = Rational::from_integer((p[i] * p[j]) as i64);
                if found != expected {
                    return Err(RosViolation::PlaneSum { i, j, expected, found });
                }
            }
        }
        for &i in respect {
            let expected = Rational::from_integer((p[i] * p[i]) as i64);
            let found = self.get(i, i, i);
            if found != expected {
                return Err(RosViolation::Diagonal { i, expected, found });
            }
        }
        Ok(())
    }
}

/// Averages an outline square over the six argument orders.
pub fn symmetrize(o: &OutlineRectangle) -> Result<RationalOutlineSquare> {
    if !o.is_square() {
        return Err(Error::Precondition("symmetrize needs an outline square".into()));
    }
    let u = o.rows();
    let mut x = RationalOutlineSquare::zero(o.p().clone());
    for i in 0..u {
        for j in i..u {
            for l in j..u {
                let sum = o.get(i, j, l)
                    + o.get(j, i, l)
                    + o.get(j, l, i)
                    + o.get(l, j, i)
                    + o.get(i, l, j)
                    + o.get(l, i, j);
                x.set(i, j, l, Rational::new(sum as i64, 6));
            }
        }
    }
    Ok(x)
}

impl fmt::Display for OutlineRectangle {
    /// One line per cell group row; each cell is printed as `symbol^count`
    /// terms (1-based), cells separated by `|`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut lines = Vec::with_capacity(self.rows());
        let mut width = 0;
        let cells: Vec<Vec<String>> = (0..self.rows())
            .map(|i| {
                (0..self.cols())
                    .map(|j| {
                        let terms: Vec<String> = self
                            .cell(i, j)
                            .iter()
                            .enumerate()
                            .filter(|(_, &c)| c > 0)
                            .map(|(l, &c)| {
                                if c == 1 {
                                    format!("{}", l + 1)
                                } else {
                                    format!("{}^{c}", l + 1)
                                }
                            })
                            .collect();
                        let s = if terms.is_empty() { "-".to_string() } else { terms.join(" ") };
                        width = width.max(s.len());
                        s
                    })
                    .collect()
            })
            .collect();
        for row in cells {
            let padded: Vec<String> = row.iter().map(|c| format!("{c:<width$}")).collect();
            lines.push(padded.join(" | ").trim_end().to_string());
        }
        for line in lines {
            writeln!(f, "{line}")?;
        }
        Ok(())
    }
}
