//! Frequency arrays and outline arrays, with the sum and amalgamation
//! operations used to compose outline squares.

use std::ops::Add;

use thiserror::Error;

use crate::error::{Error, Result};
use crate::latin::Composition;
use crate::outline::OutlineRectangle;

/// A `k x k` array of nonnegative targets.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FrequencyArray {
    k: usize,
    f: Vec<u64>,
}

impl FrequencyArray {
    pub fn zero(k: usize) -> Self {
        FrequencyArray { k, f: vec![0; k * k] }
    }

    pub fn from_rows(rows: Vec<Vec<u64>>) -> Result<Self> {
        let k = rows.len();
        if rows.iter().any(|r| r.len() != k) {
            return Err(Error::Precondition("frequency array must be square".into()));
        }
        Ok(FrequencyArray {
            k,
            f: rows.into_iter().flatten().collect(),
        })
    }

    /// `F(i,j) = h_i * h_j`.
    pub fn product(parts: &[usize]) -> Self {
        let k = parts.len();
        let mut f = FrequencyArray::zero(k);
        for i in 0..k {
            for j in 0..k {
                f.set(i, j, (parts[i] * parts[j]) as u64);
            }
        }
        f
    }

    pub fn order(&self) -> usize {
        self.k
    }

    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.f[i * self.k + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: u64) {
        self.f[i * self.k + j] = value;
    }

    pub fn rows(&self) -> Vec<Vec<u64>> {
        self.f.chunks(self.k.max(1)).map(<[_]>::to_vec).collect()
    }
}

impl Add for &FrequencyArray {
    type Output = FrequencyArray;

    fn add(self, other: &FrequencyArray) -> FrequencyArray {
        assert_eq!(self.k, other.k, "frequency arrays of different orders");
        FrequencyArray {
            k: self.k,
            f: self.f.iter().zip(&other.f).map(|(a, b)| a + b).collect(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum ArrayViolation {
    #[error("outline array has order {array}, frequency array has order {target}")]
    OrderMismatch { array: usize, target: usize },
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
}

/// A `k x k` array of multisets over `0..k`, stored as symbol counts.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct OutlineArray {
    k: usize,
    counts: Vec<u64>,
}

impl OutlineArray {
    pub fn zero(k: usize) -> Self {
        OutlineArray {
            k,
            counts: vec![0; k * k * k],
        }
    }

    /// Builds an array from cells listed as 1-based symbols.
    pub fn from_cells(rows: &[Vec<Vec<u32>>]) -> Result<Self> {
        let k = rows.len();
        let mut o = OutlineArray::zero(k);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != k {
                return Err(Error::Precondition(format!("row {i} has {} cells", row.len())));
            }
            for (j, cell) in row.iter().enumerate() {
                for &s in cell {
                    if s == 0 || s as usize > k {
                        return Err(Error::Precondition(format!("symbol {s} out of range")));
                    }
                    o.add(i, j, s as usize - 1, 1);
                }
            }
        }
        Ok(o)
    }

    pub fn order(&self) -> usize {
        self.k
    }

    fn index(&self, i: usize, j: usize, l: usize) -> usize {
        (i * self.k + j) * self.k + l
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

    pub fn cell(&self, i: usize, j: usize) -> &[u64] {
        let start = self.index(i, j, 0);
        &self.counts[start..start + self.k]
    }

    /// Removes every symbol from cell `(i, j)`.
    pub fn clear_cell(&mut self, i: usize, j: usize) {
        let start = self.index(i, j, 0);
        let k = self.k;
        self.counts[start..start + k].iter_mut().for_each(|c| *c = 0);
    }

    /// Cell sizes, i.e. the frequency array this array is for if it is valid.
    pub fn cell_sizes(&self) -> FrequencyArray {
        let mut f = FrequencyArray::zero(self.k);
        for i in 0..self.k {
            for j in 0..self.k {
                f.set(i, j, self.cell(i, j).iter().sum());
            }
        }
        f
    }

    pub fn validate(&self, f: &FrequencyArray) -> std::result::Result<(), ArrayViolation> {
        let k = self.k;
        if f.order() != k {
            return Err(ArrayViolation::OrderMismatch {
                array: k,
                target: f.order(),
            });
        }
        for i in 0..k {
            for j in 0..k {
                let found = self.cell(i, j).iter().sum();
                let expected = f.get(i, j);
                if found != expected {
                    return Err(ArrayViolation::CellSize { i, j, expected, found });
                }
            }
        }
        for i in 0..k {
            for l in 0..k {
                let found = (0..k).map(|j| self.get(i, j, l)).sum();
                let expected = f.get(i, l);
                if found != expected {
                    return Err(ArrayViolation::RowSymbol {
                        i,
                        symbol: l,
                        expected,
                        found,
                    });
                }
            }
        }
        for j in 0..k {
            for l in 0..k {
                let found = (0..k).map(|i| self.get(i, j, l)).sum();
                let expected = f.get(l, j);
                if found != expected {
                    return Err(ArrayViolation::ColumnSymbol {
                        j,
                        symbol: l,
                        expected,
                        found,
                    });
                }
            }
        }
        Ok(())
    }

    /// Cell-wise multiset union.
    pub fn sum(&self, other: &OutlineArray) -> Result<OutlineArray> {
        if self.k != other.k {
            return Err(Error::Precondition(format!(
                "cannot add arrays of orders {} and {}",
                self.k, other.k
            )));
        }
        Ok(OutlineArray {
            k: self.k,
            counts: self.counts.iter().zip(&other.counts).map(|(a, b)| a + b).collect(),
        })
    }

    pub(crate) fn add_assign(&mut self, other: &OutlineArray) {
        debug_assert_eq!(self.k, other.k);
        for (a, b) in self.counts.iter_mut().zip(&other.counts) {
            *a += b;
        }
    }

    /// Every cell repeated `factor` times.
    pub fn scaled(&self, factor: u64) -> OutlineArray {
        OutlineArray {
            k: self.k,
            counts: self.counts.iter().map(|c| c * factor).collect(),
        }
    }

    /// Merges indices by the classes `classes` (which must partition `0..k`);
    /// class `c` becomes index `c` of the result.
    pub fn amalgamate(&self, classes: &[Vec<usize>]) -> Result<OutlineArray> {
        let mut map = vec![usize::MAX; self.k];
        for (c, class) in classes.iter().enumerate() {
            for &x in class {
                if x >= self.k || map[x] != usize::MAX {
                    return Err(Error::Precondition(format!(
                        "index {x} is out of range or in two classes"
                    )));
                }
                map[x] = c;
            }
        }
        if let Some(x) = map.iter().position(|&m| m == usize::MAX) {
            return Err(Error::Precondition(format!("index {x} is in no class")));
        }
        Ok(self.remap(&map, classes.len()))
    }

    /// Sends index `x` to `map[x]` in an array of order `k`. Distinct indices
    /// may share a target and targets may be unused; this covers both
    /// amalgamation and embedding into a larger order.
    pub fn remap(&self, map: &[usize], k: usize) -> OutlineArray {
        debug_assert_eq!(map.len(), self.k);
        let mut o = OutlineArray::zero(k);
        for i in 0..self.k {
            for j in 0..self.k {
                for l in 0..self.k {
                    let c = self.get(i, j, l);
                    if c > 0 {
                        o.add(map[i], map[j], map[l], c);
                    }
                }
            }
        }
        o
    }

    /// Reads an outline square (`P = Q = R`) as an array for `F(i,j) = p_i p_j`.
    pub fn from_outline_square(o: &OutlineRectangle) -> Result<(OutlineArray, FrequencyArray)> {
        if !o.is_square() {
            return Err(Error::Precondition("outline rectangle is not square".into()));
        }
        let k = o.rows();
        Ok((
            OutlineArray {
                k,
                counts: o.counts().to_vec(),
            },
            FrequencyArray::product(o.p().parts()),
        ))
    }

    /// The outline square with block sizes `parts`; requires `|O(i,j)| = h_i h_j`.
    pub fn to_outline_square(&self, parts: &Composition) -> Result<OutlineRectangle> {
        if parts.len() != self.k {
            return Err(Error::Precondition(format!(
                "{} parts for an array of order {}",
                parts.len(),
                self.k
            )));
        }
        let f = FrequencyArray::product(parts.parts());
        self.validate(&f)
            .map_err(|e| Error::InvalidOutline(e.to_string()))?;
        OutlineRectangle::from_counts(
            parts.clone(),
            parts.clone(),
            parts.clone(),
            self.counts.clone(),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::sample_outline;

    fn small() -> (OutlineArray, FrequencyArray) {
        // The order-2 array {2} {1} / {1} {} for F = [[1,1],[1,0]].
        let o = OutlineArray::from_cells(&[
            vec![vec![2], vec![1]],
            vec![vec![1], vec![]],
        ])
        .unwrap();
        let f = FrequencyArray::from_rows(vec![vec![1, 1], vec![1, 0]]).unwrap();
        (o, f)
    }

    #[test]
    fn small_array_validates() {
        let (o, f) = small();
        assert_eq!(o.validate(&f), Ok(()));
        assert_eq!(OutlineArray::zero(3).validate(&FrequencyArray::zero(3)), Ok(()));
        assert!(matches!(
            o.validate(&FrequencyArray::zero(3)),
            Err(ArrayViolation::OrderMismatch { .. })
        ));
    }

    #[test]
    fn sums_add_targets() {
        let (o, f) = small();
        let zero = OutlineArray::zero(2);
        assert_eq!(o.sum(&zero).unwrap(), o);
        let twice = o.sum(&o).unwrap();
        assert_eq!(twice.validate(&(&f + &f)), Ok(()));
        assert_eq!(twice, o.scaled(2));
        assert!(o.sum(&OutlineArray::zero(3)).is_err());
    }

    #[test]
    fn amalgamation() {
        let (o, f) = small();
        assert_eq!(o.amalgamate(&[vec![0], vec![1]]).unwrap(), o);
        let one = o.amalgamate(&[vec![0, 1]]).unwrap();
        assert_eq!(one.get(0, 0, 0), 3);
        assert_eq!(one.validate(&FrequencyArray::from_rows(vec![vec![3]]).unwrap()), Ok(()));
        assert!(o.amalgamate(&[vec![0]]).is_err());
        assert!(o.amalgamate(&[vec![0, 1], vec![1]]).is_err());
        let _ = f;
    }

    #[test]
    fn sample_outline_roundtrips_through_arrays() {
        let o = sample_outline();
        let (a, f) = OutlineArray::from_outline_square(&o).unwrap();
        assert_eq!(a.validate(&f), Ok(()));
        assert_eq!(a.to_outline_square(o.p()).unwrap(), o);
    }

    #[test]
    fn deleted_symbol_is_a_cell_size_failure() {
        let (mut o, f) = small();
        o.set(0, 0, 1, 0);
        assert!(matches!(o.validate(&f), Err(ArrayViolation::CellSize { i: 0, j: 0, .. })));
    }
}
