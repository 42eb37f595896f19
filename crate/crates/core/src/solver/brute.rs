//! Exhaustive backtracking for latin squares with prescribed diagonal
//! subsquares.
//!
//! Each diagonal block is prefilled with a reduced latin square on its
//! symbol range. Every ILS can be brought to that shape by permuting rows
//! and symbols inside each block, so trying every reduced block filling
//! keeps the search exhaustive.

use super::{SearchOutcome, Searched};
use crate::latin::{LatinSquare, Symbol};

/// Largest order the oracle accepts (bitmask width).
pub const MAX_ORDER: usize = 32;

/// All reduced latin squares of order `h` (first row and column in natural
/// order), symbols `0..h`.
pub fn reduced_latin_squares(h: usize) -> Vec<Vec<u8>> {
    let mut out = Vec::new();
    for_each_reduced(h, &mut |sq| {
        out.push(sq.to_vec());
        true
    });
    out
}

/// Calls `f` on every reduced latin square of order `h` until it returns false.
/// Returns false if stopped early.
fn for_each_reduced(h: usize, f: &mut dyn FnMut(&[u8]) -> bool) -> bool {
    if h == 0 {
        return f(&[]);
    }
    let mut sq = vec![u8::MAX; h * h];
    let mut rows = vec![0u32; h];
    let mut cols = vec![0u32; h];
    for i in 0..h {
        sq[i] = i as u8;
        sq[i * h] = i as u8;
        rows[0] |= 1 << i;
        cols[i] |= 1 << i;
        if i > 0 {
            rows[i] |= 1 << i;
            cols[0] |= 1 << i;
        }
    }
    fn rec(
        h: usize,
        pos: usize,
        sq: &mut [u8],
        rows: &mut [u32],
        cols: &mut [u32],
        f: &mut dyn FnMut(&[u8]) -> bool,
    ) -> bool {
        if pos == h * h {
            return f(sq);
        }
        let (r, c) = (pos / h, pos % h);
        if r == 0 || c == 0 {
            return rec(h, pos + 1, sq, rows, cols, f);
        }
        let mut avail = !(rows[r] | cols[c]) & ((1u32 << h) - 1);
        while avail != 0 {
            let s = avail.trailing_zeros();
            avail &= avail - 1;
            sq[pos] = s as u8;
            rows[r] |= 1 << s;
            cols[c] |= 1 << s;
            let go_on = rec(h, pos + 1, sq, rows, cols, f);
            rows[r] &= !(1 << s);
            cols[c] &= !(1 << s);
            if !go_on {
                return false;
            }
        }
        true
    }
    rec(h, 0, &mut sq, &mut rows, &mut cols, f)
}

struct Grid {
    n: usize,
    cells: Vec<u8>, // 0 = empty, else symbol
    rows: Vec<u32>,
    cols: Vec<u32>,
    nodes: u64,
    budget: u64,
}

enum Branch {
    Cell(usize, usize, u32),
    RowSymbol(usize, u32, u32),
    ColSymbol(usize, u32, u32),
}

enum Step {
    Done,
    Dead,
    Go(Branch),
}

impl Grid {
    fn full(&self) -> u32 {
        ((1u64 << self.n) - 1) as u32
    }

    fn place(&mut self, r: usize, c: usize, s: u32) {
        self.cells[r * self.n + c] = s as u8 + 1;
        self.rows[r] |= 1 << s;
        self.cols[c] |= 1 << s;
    }

    fn unplace(&mut self, r: usize, c: usize, s: u32) {
        self.cells[r * self.n + c] = 0;
        self.rows[r] &= !(1 << s);
        self.cols[c] &= !(1 << s);
    }

    /// Picks the most constrained choice: an empty cell, or a missing
    /// symbol of a row or column, with the fewest options.
    fn choose(&self) -> Step {
        let n = self.n;
        let full = self.full();
        let mut best: Option<(u32, Branch)> = None;
        let mut any_empty = false;
        let consider = |count: u32, b: Branch, best: &mut Option<(u32, Branch)>| {
            if best.as_ref().is_none_or(|(c, _)| count < *c) {
                *best = Some((count, b));
            }
        };
        for r in 0..n {
            for c in 0..n {
                if self.cells[r * n + c] != 0 {
                    continue;
                }
                any_empty = true;
                let cand = !(self.rows[r] | self.cols[c]) & full;
                let k = cand.count_ones();
                if k == 0 {
                    return Step::Dead;
                }
                consider(k, Branch::Cell(r, c, cand), &mut best);
            }
        }
        if !any_empty {
            return Step::Done;
        }
        if best.as_ref().is_some_and(|(c, _)| *c == 1) {
            return Step::Go(best.unwrap().1);
        }
        for r in 0..n {
            let mut missing = !self.rows[r] & full;
            while missing != 0 {
                let s = missing.trailing_zeros();
                missing &= missing - 1;
                let mut places = 0u32;
                for c in 0..n {
                    if self.cells[r * n + c] == 0 && self.cols[c] & (1 << s) == 0 {
                        places |= 1 << c;
                    }
                }
                let k = places.count_ones();
                if k == 0 {
                    return Step::Dead;
                }
                consider(k, Branch::RowSymbol(r, s, places), &mut best);
            }
        }
        for c in 0..n {
            let mut missing = !self.cols[c] & full;
            while missing != 0 {
                let s = missing.trailing_zeros();
                missing &= missing - 1;
                let mut places = 0u32;
                for r in 0..n {
                    if self.cells[r * n + c] == 0 && self.rows[r] & (1 << s) == 0 {
                        places |= 1 << r;
                    }
                }
                let k = places.count_ones();
                if k == 0 {
                    return Step::Dead;
                }
                consider(k, Branch::ColSymbol(c, s, places), &mut best);
            }
        }
        Step::Go(best.expect("an empty cell exists").1)
    }

    /// Some(true) found, Some(false) exhausted, None budget exceeded.
    fn search(&mut self) -> Option<bool> {
        let branch = match self.choose() {
            Step::Done => return Some(true),
            Step::Dead => return Some(false),
            Step::Go(b) => b,
        };
        let mut options = match branch {
            Branch::Cell(_, _, m) | Branch::RowSymbol(_, _, m) | Branch::ColSymbol(_, _, m) => m,
        };
        while options != 0 {
            let x = options.trailing_zeros();
            options &= options - 1;
            let (r, c, s) = match branch {
                Branch::Cell(r, c, _) => (r, c, x),
                Branch::RowSymbol(r, s, _) => (r, x as usize, s),
                Branch::ColSymbol(c, s, _) => (x as usize, c, s),
            };
            self.nodes += 1;
            if self.nodes > self.budget {
                return None;
            }
            self.place(r, c, s);
            let res = self.search();
            if res != Some(false) {
                if res.is_none() {
                    self.unplace(r, c, s);
                }
                return res;
            }
            self.unplace(r, c, s);
        }
        Some(false)
    }
}

/// Searches for a latin square of order `n` whose first diagonal blocks are
/// subsquares of orders `parts` (in normal form). Exhaustive within `budget`
/// nodes.
pub fn brute_force_ils(parts: &[usize], n: usize, budget: u64) -> Searched<LatinSquare> {
    let sum: usize = parts.iter().sum();
    if n == 0 || n > MAX_ORDER || sum > n || parts.contains(&0) {
        return Searched {
            outcome: SearchOutcome::Infeasible,
            nodes: 0,
        };
    }
    let mut grid = Grid {
        n,
        cells: vec![0; n * n],
        rows: vec![0; n],
        cols: vec![0; n],
        nodes: 0,
        budget,
    };
    let mut offsets = Vec::with_capacity(parts.len());
    let mut acc = 0;
    for &h in parts {
        offsets.push(acc);
        acc += h;
    }
    let mut result: Option<bool> = Some(false);
    fill_blocks(&mut grid, parts, &offsets, 0, &mut result);
    let nodes = grid.nodes;
    let outcome = match result {
        Some(true) => {
            let cells = grid.cells.iter().map(|&c| c as Symbol).collect();
            SearchOutcome::Found(LatinSquare::from_cells(n, cells))
        }
        Some(false) => SearchOutcome::Infeasible,
        None => SearchOutcome::Timeout,
    };
    Searched { outcome, nodes }
}

/// Tries every reduced filling of block `b`, recursing to later blocks and
/// finally to the free cells. Leaves `grid` filled on success.
fn fill_blocks(
    grid: &mut Grid,
    parts: &[usize],
    offsets: &[usize],
    b: usize,
    result: &mut Option<bool>,
) {
    if b == parts.len() {
        *result = grid.search();
        return;
    }
    let (h, off) = (parts[b], offsets[b]);
    for_each_reduced(h, &mut |sq| {
        grid.nodes += 1;
        if grid.nodes > grid.budget {
            *result = None;
            return false;
        }
        for a in 0..h {
            for c in 0..h {
                grid.place(off + a, off + c, (off + sq[a * h + c] as usize) as u32);
            }
        }
        fill_blocks(grid, parts, offsets, b + 1, result);
        if *result == Some(false) {
            for a in 0..h {
                for c in 0..h {
                    grid.unplace(off + a, off + c, (off + sq[a * h + c] as usize) as u32);
                }
            }
            true
        } else {
            false
        }
    });
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduced_counts() {
        let counts: Vec<usize> = (1..=5).map(|h| reduced_latin_squares(h).len()).collect();
        assert_eq!(counts, vec![1, 1, 1, 4, 56]);
    }

    #[test]
    fn two_twos_in_five_do_not_exist() {
        let r = brute_force_ils(&[2, 2], 5, 10_000_000);
        assert_eq!(r.outcome, SearchOutcome::Infeasible);
    }

    #[test]
    fn trivial_order_one() {
        let r = brute_force_ils(&[1], 1, 100);
        assert_eq!(
            r.outcome,
            SearchOutcome::Found(LatinSquare::from_rows(vec![vec![1]]).unwrap())
        );
    }

    #[test]
    fn three_twos_in_seven() {
        let r = brute_force_ils(&[2, 2, 2], 7, 10_000_000);
        let sq = r.outcome.found().expect("exists");
        assert_eq!(sq.verify_ils(&[2, 2, 2]), Ok(()));
    }

    #[test]
    fn evans_bound() {
        assert_eq!(
            brute_force_ils(&[3], 5, 10_000_000).outcome,
            SearchOutcome::Infeasible
        );
        assert!(brute_force_ils(&[3], 6, 10_000_000).outcome.found().is_some());
    }

    #[test]
    fn tiny_budget_times_out() {
        assert_eq!(brute_force_ils(&[1], 7, 3).outcome, SearchOutcome::Timeout);
    }
}
