//! Realizations of `(h1, h2, ..., hk)` with `h2 + ... + hk` even, built from
//! the circulant partial square.

use super::{circulant_partial, Construction, ConstructionTrace};
use crate::error::{Error, Result};
use crate::latin::Composition;
use crate::outline::OutlineRectangle;

/// LS(h1 h2 ... hk): a latin square of order `h1 + r` (`r = h2 + ... + hk`)
/// with all `k` blocks as subsquares. Needs `r` even, `h2 >= ... >= hk`,
/// `h2 <= r/4` and `2 h2 <= h1 <= r + 1 - 2 h2`.
pub fn realization_even_r(parts: &[usize]) -> Result<Construction> {
    if parts.len() < 2 || parts[1..].windows(2).any(|w| w[0] < w[1]) || parts.contains(&0) {
        return Err(Error::Precondition(
            "need h1 and a nonincreasing list h2 >= ... >= hk >= 1".into(),
        ));
    }
    let h1 = parts[0];
    let tail = &parts[1..];
    let r: usize = tail.iter().sum();
    let h2 = tail[0];
    let circ = circulant_partial(r, h1, h2)?;
    let mut offsets = Vec::with_capacity(tail.len());
    let mut group_of = vec![0usize; r];
    let mut acc = 0;
    for (t, &h) in tail.iter().enumerate() {
        offsets.push(acc);
        group_of[acc..acc + h].iter_mut().for_each(|g| *g = t + 1);
        acc += h;
    }
    // Symbol groups of the circulant cells; 0 marks an empty cell.
    let mut grid: Vec<Vec<usize>> = (0..r)
        .map(|a| {
            (0..r)
                .map(|b| circ.square.get(a, b).map_or(0, |s| group_of[s as usize - 1]))
                .collect()
        })
        .collect();
    let minus = |v: usize, w: usize| (v as i64 - 1 - w as i64).rem_euclid(r as i64) as usize;
    for (t, &h) in tail.iter().enumerate() {
        let g = t + 1;
        let s = offsets[t];
        for a in 1..=h {
            for b in (a + 1..=h).step_by(2) {
                // 1-based coordinates x, y become 0-based below.
                let x = minus(s + 1, a);
                let y = minus(s + 2 * h + 1, b);
                let (sa, sb) = (s + a - 1, s + b - 1);
                let quads = [
                    [(sa, sb), (sa, y), (x, sb), (x, y)],
                    [(sb, sa), (sb, x), (y, sa), (y, x)],
                ];
                for q in quads {
                    let expect = [0, g, g, 0];
                    for (&(i, j), &e) in q.iter().zip(&expect) {
                        if grid[i][j] != e {
                            return Err(Error::Internal(format!(
                                "swap for block {g}: cell ({i}, {j}) holds group {} not {e}",
                                grid[i][j]
                            )));
                        }
                    }
                    for (&(i, j), &e) in q.iter().zip(&expect) {
                        grid[i][j] = if e == 0 { g } else { 0 };
                    }
                }
            }
        }
    }
    let mut qparts = vec![h1];
    qparts.extend(std::iter::repeat_n(1, r));
    let q = Composition::new(qparts)?;
    let p = Composition::new(parts.to_vec())?;
    let mut o = OutlineRectangle::zero(q.clone(), q, p);
    o.set(0, 0, 0, (h1 * h1) as u64);
    let mut row_count = vec![vec![0usize; parts.len()]; r];
    let mut col_count = vec![vec![0usize; parts.len()]; r];
    for a in 0..r {
        for b in 0..r {
            let g = grid[a][b];
            o.add(a + 1, b + 1, g, 1);
            row_count[a][g] += 1;
            col_count[b][g] += 1;
        }
    }
    for (line, counts) in row_count.iter().chain(&col_count).enumerate() {
        if counts[0] != h1 {
            return Err(Error::Internal(format!(
                "line {line} of the swapped square has {} empty cells, not {h1}",
                counts[0]
            )));
        }
    }
    for a in 0..r {
        for g in 1..parts.len() {
            let rest = |c: usize| {
                parts[g].checked_sub(c).ok_or_else(|| {
                    Error::Internal(format!("group {g} appears more than {} times", parts[g]))
                })
            };
            o.set(a + 1, 0, g, rest(row_count[a][g])? as u64);
            o.set(0, a + 1, g, rest(col_count[a][g])? as u64);
        }
    }
    o.validate(None)
        .map_err(|e| Error::Internal(format!("realization outline: {e}")))?;
    let square = o.lift()?;
    let trace = ConstructionTrace::new("circulant realization", parts, h1 + r)
        .param("removed", circ.removed_offsets.len());
    Construction::verified(square, parts, trace)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_realizations() {
        for parts in [
            vec![2, 1, 1, 1, 1],
            vec![4, 2, 2, 2, 2],
            vec![3, 1, 1, 1, 1],
            vec![5, 2, 2, 2, 1, 1],
        ] {
            let c = realization_even_r(&parts).unwrap_or_else(|e| panic!("{parts:?}: {e}"));
            assert_eq!(c.square.order(), parts.iter().sum::<usize>());
        }
    }

    #[test]
    fn outside_range() {
        assert!(realization_even_r(&[1, 1, 1, 1, 1]).is_err());
        assert!(realization_even_r(&[2, 1, 1, 1]).is_err());
        assert!(realization_even_r(&[2, 1, 1]).is_err());
    }
}
