//! Integer outline squares with pinned diagonal entries.
//!
//! Small instances are settled by exhaustive search over cell contents.
//! Larger ones use local search from the reduction of a cyclic square: a
//! `2x2x2` box move (+1 on the corners with an even number of primed
//! coordinates, -1 on the others) keeps every line sum fixed, so the search
//! only has to drive the pinned entries to their targets.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{SearchOutcome, Searched};
use crate::latin::{Composition, LatinSquare};
use crate::outline::{reduce_modulo, OutlineRectangle};

/// An outline square for `p` that must have `O_i(i,i) = p_i^2` for every
/// `i` in `respect`, plus any extra `fixed` entries `(i, j, l, count)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OutlineSpec {
    pub p: Composition,
    pub respect: Vec<usize>,
    pub fixed: Vec<(usize, usize, usize, u64)>,
}

impl OutlineSpec {
    pub fn new(p: Composition, respect: Vec<usize>) -> Self {
        OutlineSpec {
            p,
            respect,
            fixed: Vec::new(),
        }
    }

    fn pins(&self) -> Vec<(usize, u64)> {
        let u = self.p.len();
        let idx = |i: usize, j: usize, l: usize| (i * u + j) * u + l;
        let mut pins: Vec<(usize, u64)> = self
            .respect
            .iter()
            .map(|&i| (idx(i, i, i), (self.p.parts()[i] * self.p.parts()[i]) as u64))
            .collect();
        pins.extend(self.fixed.iter().map(|&(i, j, l, c)| (idx(i, j, l), c)));
        pins.sort_unstable();
        pins.dedup();
        pins
    }
}

const EXACT_SHARE: u64 = 4;
const EXACT_CAP: u64 = 200_000;
const SEED: u64 = 0x5eed_0f_0a7;

/// Finds an outline square satisfying `spec`, proving infeasibility when the
/// exhaustive phase finishes inside its share of `budget`.
pub fn solve_outline_square(spec: &OutlineSpec, budget: u64) -> Searched<OutlineRectangle> {
    let u = spec.p.len();
    let pins = spec.pins();
    if pins.iter().any(|&(x, _)| x >= u * u * u) {
        return Searched {
            outcome: SearchOutcome::Infeasible,
            nodes: 0,
        };
    }
    let exact_budget = (budget / EXACT_SHARE).min(EXACT_CAP);
    let mut exact = Exact::new(spec, &pins, exact_budget);
    let res = exact.run();
    let mut nodes = exact.nodes;
    match res {
        Some(true) => {
            let o = exact.into_outline(spec);
            return Searched {
                outcome: SearchOutcome::Found(o),
                nodes,
            };
        }
        Some(false) => {
            return Searched {
                outcome: SearchOutcome::Infeasible,
                nodes,
            }
        }
        None => {}
    }
    let (outcome, used) = local_search(spec, &pins, budget.saturating_sub(nodes));
    nodes += used;
    Searched { outcome, nodes }
}

struct Exact {
    u: usize,
    p: Vec<u64>,
    counts: Vec<u64>,
    pinned: Vec<Option<u64>>,
    row_rem: Vec<u64>, // (i, l)
    col_rem: Vec<u64>, // (j, l)
    nodes: u64,
    budget: u64,
}

impl Exact {
    fn new(spec: &OutlineSpec, pins: &[(usize, u64)], budget: u64) -> Self {
        let u = spec.p.len();
        let p: Vec<u64> = spec.p.parts().iter().map(|&x| x as u64).collect();
        let mut pinned = vec![None; u * u * u];
        for &(x, c) in pins {
            pinned[x] = Some(c);
        }
        let mut row_rem = vec![0; u * u];
        let mut col_rem = vec![0; u * u];
        for i in 0..u {
            for l in 0..u {
                row_rem[i * u + l] = p[i] * p[l];
                col_rem[i * u + l] = p[i] * p[l];
            }
        }
        Exact {
            u,
            p,
            counts: vec![0; u * u * u],
            pinned,
            row_rem,
            col_rem,
            nodes: 0,
            budget,
        }
    }

    fn run(&mut self) -> Option<bool> {
        self.cell(0)
    }

    /// Fills cell number `c` (row-major).
    fn cell(&mut self, c: usize) -> Option<bool> {
        let u = self.u;
        if c == u * u {
            return Some(true);
        }
        let (i, j) = (c / u, c % u);
        let size = self.p[i] * self.p[j];
        let reach: u64 = (0..u)
            .map(|l| self.row_rem[i * u + l].min(self.col_rem[j * u + l]))
            .sum();
        if reach < size {
            return Some(false);
        }
        self.symbol(c, 0, size)
    }

    /// Chooses the count of symbol `l` in cell `c`, with `left` still to place.
    fn symbol(&mut self, c: usize, l: usize, left: u64) -> Option<bool> {
        let u = self.u;
        let (i, j) = (c / u, c % u);
        if l == u {
            if left != 0 {
                return Some(false);
            }
            // A finished row must have used up its symbols.
            if j == u - 1 && (0..u).any(|l| self.row_rem[i * u + l] != 0) {
                return Some(false);
            }
            return self.cell(c + 1);
        }
        let x = c * u + l;
        let cap = self.row_rem[i * u + l].min(self.col_rem[j * u + l]).min(left);
        let rest: u64 = (l + 1..u)
            .map(|m| self.row_rem[i * u + m].min(self.col_rem[j * u + m]))
            .sum();
        let lo = left.saturating_sub(rest);
        let (lo, hi) = match self.pinned[x] {
            Some(v) if v < lo || v > cap => return Some(false),
            Some(v) => (v, v),
            None => (lo, cap),
        };
        if lo > hi {
            return Some(false);
        }
        for v in (lo..=hi).rev() {
            self.nodes += 1;
            if self.nodes > self.budget {
                return None;
            }
            self.counts[x] = v;
            self.row_rem[i * u + l] -= v;
            self.col_rem[j * u + l] -= v;
            let res = self.symbol(c, l + 1, left - v);
            self.row_rem[i * u + l] += v;
            self.col_rem[j * u + l] += v;
            if res != Some(false) {
                return res;
            }
        }
        self.counts[x] = 0;
        Some(false)
    }

    fn into_outline(self, spec: &OutlineSpec) -> OutlineRectangle {
        OutlineRectangle::from_counts(spec.p.clone(), spec.p.clone(), spec.p.clone(), self.counts)
            .expect("dimensions match")
    }
}

fn local_search(
    spec: &OutlineSpec,
    pins: &[(usize, u64)],
    budget: u64,
) -> (SearchOutcome<OutlineRectangle>, u64) {
    let u = spec.p.len();
    let n = spec.p.total();
    let p = &spec.p;
    let start = reduce_modulo(&LatinSquare::cyclic(n), p, p, p).expect("totals agree");
    let mut counts = start.counts().to_vec();
    let mut target: Vec<Option<u64>> = vec![None; u * u * u];
    for &(x, c) in pins {
        target[x] = Some(c);
    }
    let idx = |i: usize, j: usize, l: usize| (i * u + j) * u + l;
    let cost_at = |counts: &[u64], x: usize| -> u64 {
        match target[x] {
            Some(t) => counts[x].abs_diff(t),
            None => 0,
        }
    };
    let mut cost: u64 = pins.iter().map(|&(x, _)| cost_at(&counts, x)).sum();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut nodes = 0u64;
    if u < 2 {
        let outcome = if cost == 0 {
            SearchOutcome::Found(start)
        } else {
            SearchOutcome::Infeasible
        };
        return (outcome, 0);
    }

    // Corners of the box anchored at (i, j, l) with partners (a, b, c);
    // sign +1 at corners with an even number of partner coordinates.
    let corners = |i: usize, a: usize, j: usize, b: usize, l: usize, c: usize| {
        [
            (idx(i, j, l), 1i64),
            (idx(i, b, c), 1),
            (idx(a, j, c), 1),
            (idx(a, b, l), 1),
            (idx(a, j, l), -1),
            (idx(i, b, l), -1),
            (idx(i, j, c), -1),
            (idx(a, b, c), -1),
        ]
    };
    let delta = |counts: &[u64], box_: &[(usize, i64); 8], sign: i64| -> Option<i64> {
        let mut d = 0i64;
        for &(x, s) in box_ {
            let s = s * sign;
            if s < 0 && counts[x] == 0 {
                return None;
            }
            if let Some(t) = target[x] {
                let before = counts[x].abs_diff(t) as i64;
                let after = (counts[x] as i64 + s).abs_diff(t as i64) as i64;
                d += after - before;
            }
        }
        Some(d)
    };
    let apply = |counts: &mut [u64], box_: &[(usize, i64); 8], sign: i64| {
        for &(x, s) in box_ {
            counts[x] = (counts[x] as i64 + s * sign) as u64;
        }
    };

    let mut stall = 0u64;
    while cost > 0 {
        if nodes >= budget {
            return (SearchOutcome::Timeout, nodes);
        }
        // Targeted repair of one violated pin.
        let violated: Vec<usize> = pins
            .iter()
            .filter(|&&(x, _)| cost_at(&counts, x) > 0)
            .map(|&(x, _)| x)
            .collect();
        let &x = violated.choose(&mut rng).expect("cost > 0");
        let (i, j, l) = (x / (u * u), (x / u) % u, x % u);
        let sign = if counts[x] < target[x].unwrap() { 1 } else { -1 };
        let mut best: Vec<([(usize, i64); 8], i64)> = Vec::new();
        let mut best_d = 0i64;
        for a in (0..u).filter(|&a| a != i) {
            for b in (0..u).filter(|&b| b != j) {
                for c in (0..u).filter(|&c| c != l) {
                    nodes += 1;
                    let bx = corners(i, a, j, b, l, c);
                    if let Some(d) = delta(&counts, &bx, sign) {
                        if d < best_d {
                            best_d = d;
                            best.clear();
                        }
                        if d == best_d && d < 0 {
                            best.push((bx, d));
                        }
                    }
                }
            }
        }
        if let Some((bx, d)) = best.choose(&mut rng) {
            apply(&mut counts, bx, sign);
            cost = (cost as i64 + d) as u64;
            stall = 0;
            continue;
        }
        // No direct repair: take random moves that do not hurt, and
        // occasionally one that does.
        stall += 1;
        let tries = 4 * u * u;
        let mut moved = false;
        for _ in 0..tries {
            nodes += 1;
            let (i, j, l) = (rng.gen_range(0..u), rng.gen_range(0..u), rng.gen_range(0..u));
            let (mut a, mut b, mut c) = (rng.gen_range(0..u - 1), rng.gen_range(0..u - 1), rng.gen_range(0..u - 1));
            if a >= i {
                a += 1;
            }
            if b >= j {
                b += 1;
            }
            if c >= l {
                c += 1;
            }
            let bx = corners(i, a, j, b, l, c);
            if let Some(d) = delta(&counts, &bx, 1) {
                let uphill_ok = d > 0 && d <= 2 && rng.gen_bool(0.05 + (stall.min(50) as f64) * 0.002);
                if d <= 0 || uphill_ok {
                    apply(&mut counts, &bx, 1);
                    cost = (cost as i64 + d) as u64;
                    moved = true;
                    if d < 0 || !uphill_ok {
                        break;
                    }
                }
            }
        }
        let _ = moved;
    }
    let o = OutlineRectangle::from_counts(p.clone(), p.clone(), p.clone(), counts)
        .expect("dimensions match");
    (SearchOutcome::Found(o), nodes)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn comp(v: &[usize]) -> Composition {
        Composition::new(v.to_vec()).unwrap()
    }

    fn check(parts: &[usize], respect: Vec<usize>) -> Option<OutlineRectangle> {
        let spec = OutlineSpec::new(comp(parts), respect.clone());
        let r = solve_outline_square(&spec, 20_000_000);
        let o = r.outcome.found()?;
        assert_eq!(o.validate(Some(&respect)), Ok(()));
        Some(o)
    }

    #[test]
    fn two_twos_are_infeasible() {
        let spec = OutlineSpec::new(comp(&[2, 2]), vec![0, 1]);
        assert_eq!(solve_outline_square(&spec, 1_000_000).outcome, SearchOutcome::Infeasible);
    }

    #[test]
    fn three_twos() {
        check(&[2, 2, 2], vec![0, 1, 2]).expect("LS(2^3) exists");
    }

    #[test]
    fn three_twos_and_one_lifts() {
        let o = check(&[2, 2, 2, 1], vec![0, 1, 2, 3]).expect("LS(2^3 1) exists");
        let sq = o.lift().unwrap();
        assert_eq!(sq.verify_ils(&[2, 2, 2, 1]), Ok(()));
    }

    #[test]
    fn larger_realizations() {
        for parts in [
            vec![3, 3, 3, 2],
            vec![4, 4, 4, 4, 3],
            vec![6, 1, 1, 1, 1, 1, 1, 1],
            vec![10, 3, 3, 3, 2, 2, 1, 1],
        ] {
            let respect = (0..parts.len()).collect();
            assert!(check(&parts, respect).is_some(), "{parts:?}");
        }
    }
}
