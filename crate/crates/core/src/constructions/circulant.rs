//! Circulant partial latin squares with prescribed empty diagonals.

use crate::error::{Error, Result};
use crate::latin::{PartialLatinSquare, Symbol};

/// A circulant partial latin square of even order `r` with `h1` empty cells
/// in every row and column.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Circulant {
    pub square: PartialLatinSquare,
    /// Offsets `b - a (mod r)` whose diagonals are empty.
    pub empty_offsets: Vec<usize>,
    /// Offsets of the transversals that were removed on top of the forced
    /// empty diagonals.
    pub removed_offsets: Vec<usize>,
}

/// First row of the full pattern, 0-based positions, symbols in `1..=r`.
fn first_row(r: usize, h2: usize) -> Vec<Option<Symbol>> {
    let mut row = vec![None; r];
    let mut put = |i: usize, s: usize| row[i - 1] = Some(s as Symbol);
    for j in 1..=h2 {
        let i = 2 * j - 1;
        put(i, i.div_ceil(2));
    }
    for j in 1..h2 {
        let i = r + 1 - 2 * j;
        put(i, (i + r).div_ceil(2));
    }
    for j in 1..=(r - 4 * h2 + 2) / 2 {
        let i = 2 * h2 + j;
        put(i, r + h2 + 2 - i);
    }
    for j in 1..=(r - 4 * h2) / 2 {
        let i = (r + 2) / 2 + j;
        put(i, r + 3 - i - h2);
    }
    row
}

/// Builds the circulant square for `r` even, `1 <= h2 <= r/4` and
/// `2 h2 <= h1 <= r + 1 - 2 h2`. The first row leaves the odd offsets below
/// `2 h2` and their negatives empty; `h1 - 2 h2` more diagonals are emptied
/// from the offsets `2 h2 ..= r - 2 h2`, lowest first.
pub fn circulant_partial(r: usize, h1: usize, h2: usize) -> Result<Circulant> {
    if !r.is_multiple_of(2) || h2 == 0 || 4 * h2 > r || h1 < 2 * h2 || h1 + 2 * h2 > r + 1 {
        return Err(Error::Precondition(format!(
            "need r even, 1 <= h2 <= r/4 and 2h2 <= h1 <= r+1-2h2 (r = {r}, h1 = {h1}, h2 = {h2})"
        )));
    }
    let mut first = first_row(r, h2);
    let optional: Vec<usize> = (2 * h2..=r - 2 * h2).collect();
    let removed: Vec<usize> = optional[..h1 - 2 * h2].to_vec();
    for &off in &removed {
        if first[off].is_none() {
            return Err(Error::Internal(format!("offset {off} is already empty")));
        }
        first[off] = None;
    }
    let mut square = PartialLatinSquare::empty(r);
    for a in 0..r {
        for b in 0..r {
            let s = first[(b + r - a) % r].map(|s| ((s as usize - 1 + a) % r + 1) as Symbol);
            square.set(a, b, s);
        }
    }
    let empty_offsets = (0..r).filter(|&d| first[d].is_none()).collect();
    Ok(Circulant {
        square,
        empty_offsets,
        removed_offsets: removed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(c: &Circulant) -> Vec<Option<Symbol>> {
        c.square.row(0).to_vec()
    }

    #[test]
    fn small_first_rows() {
        let c = circulant_partial(8, 4, 2).unwrap();
        assert_eq!(
            row(&c),
            vec![Some(1), None, Some(2), None, Some(7), None, Some(8), None]
        );
        let c = circulant_partial(4, 2, 1).unwrap();
        assert_eq!(row(&c), vec![Some(1), None, Some(4), None]);
    }

    #[test]
    fn removal_and_counts() {
        let c = circulant_partial(12, 5, 2).unwrap();
        assert_eq!(c.removed_offsets, vec![4]);
        assert_eq!(c.square.validate(), Ok(()));
        for i in 0..12 {
            assert_eq!(c.square.empty_in_row(i), 5);
            assert_eq!(c.square.empty_in_col(i), 5);
        }
    }

    #[test]
    fn rejects_out_of_range() {
        assert!(circulant_partial(7, 2, 1).is_err());
        assert!(circulant_partial(8, 3, 2).is_err());
        assert!(circulant_partial(8, 6, 2).is_err());
    }
}
