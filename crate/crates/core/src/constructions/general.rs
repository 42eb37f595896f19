//! The recursive construction for `h1 = h2` and its use for arbitrary
//! subsquare orders with enough slack.

use super::small::square_from_array;
use super::{lemma_outline_arrays, realization_even_r, Construction, ConstructionTrace, LemmaVariant};
use crate::error::{Error, Result};
use crate::freq_array::{FrequencyArray, OutlineArray};
use crate::latin::{inflate, Composition, LatinSquare, Partition};
use crate::outline::{reduce_modulo, LiftOptions};
use crate::solver::{brute_force_ils, solve_outline_square, OutlineSpec, SearchOutcome, MAX_ORDER};

/// Node budget for realizations whose existence is already known.
pub const REALIZATION_BUDGET: u64 = 1_000_000_000;

/// Cell search gets this many nodes before the outline search takes over;
/// it wins on many unit parts and loses on large blocks.
const CELL_SEARCH_BUDGET: u64 = 20_000;

/// Settings shared by the recursive constructions.
#[derive(Debug, Clone, Copy)]
pub struct BuildOptions {
    /// Node budget for searched realizations (odd `r` in case A).
    pub budget: u64,
    /// Re-validate the outline after every row split while lifting.
    pub check_intermediate: bool,
}

impl Default for BuildOptions {
    fn default() -> Self {
        BuildOptions {
            budget: REALIZATION_BUDGET,
            check_intermediate: false,
        }
    }
}

/// Checks `array` is an outline square for `h` respecting every block but
/// the first.
fn check_square(array: &OutlineArray, h: &[usize], what: &str) -> Result<()> {
    array
        .validate(&FrequencyArray::product(h))
        .map_err(|e| Error::Internal(format!("{what}: {e}")))?;
    for i in 1..h.len() {
        let want = (h[i] * h[i]) as u64;
        if array.get(i, i, i) != want {
            return Err(Error::Internal(format!(
                "{what}: cell ({i}, {i}) does not hold {want} copies of {i}"
            )));
        }
    }
    Ok(())
}

fn strip_diagonal(array: &mut OutlineArray, h: &[usize]) -> Result<()> {
    for i in 1..h.len() {
        let want = (h[i] * h[i]) as u64;
        if array.cell(i, i).iter().sum::<u64>() != want || array.get(i, i, i) != want {
            return Err(Error::Internal(format!("cell ({i}, {i}) is not a subsquare cell")));
        }
        array.clear_cell(i, i);
    }
    Ok(())
}

fn restore_diagonal(array: &mut OutlineArray, h: &[usize]) {
    for i in 1..h.len() {
        array.set(i, i, i, (h[i] * h[i]) as u64);
    }
}

fn embed(array: &OutlineArray, k: usize) -> OutlineArray {
    let map: Vec<usize> = (0..array.order()).collect();
    array.remap(&map, k)
}

fn sq(x: usize) -> u64 {
    (x * x) as u64
}

fn check_shape(h: &[usize]) -> Result<()> {
    if h.len() < 2 || h[0] != h[1] || h[1..].windows(2).any(|w| w[0] < w[1]) {
        return Err(Error::Precondition(format!(
            "need h1 = h2 >= h3 >= ... >= hk, got {h:?}"
        )));
    }
    Ok(())
}

/// Outline square for `h` (`h1 = h2`, trailing zeros allowed) respecting all
/// blocks but the first.
pub(crate) fn main_array(h: &[usize], opts: &BuildOptions) -> Result<(OutlineArray, ConstructionTrace)> {
    check_shape(h)?;
    let k = h.len();
    let positive = h.iter().take_while(|&&x| x > 0).count();
    if positive == 0 {
        return Ok((OutlineArray::zero(k), ConstructionTrace::new("empty", h, 0)));
    }
    if positive < k {
        let (a, t) = main_array(&h[..positive], opts)?;
        return Ok((embed(&a, k), t));
    }
    let order: usize = h.iter().sum();
    if k == 2 {
        let mut a = OutlineArray::zero(2);
        a.set(0, 0, 1, sq(h[0]));
        a.set(0, 1, 0, sq(h[0]));
        a.set(1, 0, 0, sq(h[0]));
        a.set(1, 1, 1, sq(h[0]));
        check_square(&a, h, "two-block square")?;
        return Ok((a, ConstructionTrace::new("two blocks", &h[1..], order)));
    }
    let r: usize = h[2..].iter().sum();
    let out = if 4 * h[2] <= r + 1 {
        case_a(h, opts)?
    } else if k >= 5 && h[2] == h[3] && h[3] == h[4] {
        case_equal_three(h, opts)?
    } else if k >= 4 && h[2] == h[3] {
        case_equal_two(h, opts)?
    } else {
        case_strict(h, opts)?
    };
    check_square(&out.0, h, &out.1.case)?;
    Ok(out)
}

/// Realization of `parts` with every block a subsquare.
fn realize(parts: &[usize], opts: &BuildOptions) -> Result<(LatinSquare, ConstructionTrace)> {
    let r: usize = parts[1..].iter().sum();
    if r.is_multiple_of(2) {
        let c = realization_even_r(parts)?;
        return Ok((c.square, c.trace));
    }
    let n = parts[0] + r;
    if n <= MAX_ORDER {
        let searched = brute_force_ils(parts, n, CELL_SEARCH_BUDGET);
        if let SearchOutcome::Found(square) = searched.outcome {
            let trace = ConstructionTrace::new("searched realization", parts, n)
                .param("cell_nodes", searched.nodes);
            return Ok((square, trace));
        }
    }
    let p = Composition::new(parts.to_vec())?;
    let spec = OutlineSpec::new(p, (0..parts.len()).collect());
    let searched = solve_outline_square(&spec, opts.budget);
    let outline = match searched.outcome {
        SearchOutcome::Found(o) => o,
        SearchOutcome::Infeasible => {
            return Err(Error::Internal(format!("no realization of {parts:?} found")))
        }
        SearchOutcome::Timeout => return Err(Error::Timeout { budget: opts.budget }),
    };
    let square = outline.lift_with(LiftOptions {
        check_intermediate: opts.check_intermediate,
    })?;
    square.verify_ils(parts)?;
    let trace = ConstructionTrace::new("searched realization", parts, square.order())
        .param("nodes", searched.nodes);
    Ok((square, trace))
}

fn case_a(h: &[usize], opts: &BuildOptions) -> Result<(OutlineArray, ConstructionTrace)> {
    let k = h.len();
    let (h1, h3) = (h[0], h[2]);
    let r: usize = h[2..].iter().sum();
    let order = 2 * h1 + r;
    if 2 * h1 + 2 * h3 <= r + 1 {
        let mut parts = vec![2 * h1];
        parts.extend_from_slice(&h[2..]);
        let (mut square, child) = realize(&parts, opts)?;
        let base = LatinSquare::from_rows(vec![vec![2, 1], vec![1, 2]])?;
        let block = inflate(&base, h1);
        for a in 0..2 * h1 {
            for b in 0..2 * h1 {
                square.set(a, b, block.get(a, b));
            }
        }
        square.validate()?;
        let comp = Composition::new(h.to_vec())?;
        let o = reduce_modulo(&square, &comp, &comp, &comp)?;
        let (array, _) = OutlineArray::from_outline_square(&o)?;
        let trace = ConstructionTrace::new("case A, direct", &h[1..], order).child(child);
        return Ok((array, trace));
    }
    let g = if r % 2 == 1 { (r + 1 - 2 * h3) / 2 } else { (r - 2 * h3) / 2 };
    let mut smaller = vec![g, g];
    smaller.extend_from_slice(&h[2..]);
    let (mut o, child) = main_array(&smaller, opts)?;
    let (gg, ggu) = (sq(g), g * g);
    if o.get(0, 0, 1) != gg || o.get(0, 1, 0) != gg || o.get(1, 0, 0) != gg || o.cell(0, 0).iter().sum::<u64>() != ggu as u64 {
        return Err(Error::Internal("case A: smaller square has the wrong corner".into()));
    }
    o.clear_cell(0, 1);
    o.clear_cell(1, 0);
    for i in 0..k {
        o.clear_cell(i, i);
    }
    let extra = lemma_outline_arrays(2, sq(h1), (h1 - g) as u64, &h[2..], LemmaVariant::Plain)?;
    o.add_assign(&extra);
    restore_diagonal(&mut o, h);
    let trace = ConstructionTrace::new("case A, reduced", &h[1..], order)
        .param("g", g)
        .child(child);
    Ok((o, trace))
}

/// `h3 = h4 = h5`.
fn case_equal_three(h: &[usize], opts: &BuildOptions) -> Result<(OutlineArray, ConstructionTrace)> {
    let k = h.len();
    let (h1, h3) = (h[0], h[2]);
    let rest: usize = h[5..].iter().sum();
    let g3 = rest + 1;
    let c = h3 - g3;
    let h1p = h1.min(3 * h3 + 2 * g3);
    let g1 = h1p - c;
    let a = (2 * (h3 * h3 - g3 * g3)).min(h1p * h3 - g1 * g3);
    let mut smaller = vec![g1, g1, g3, g3, g3];
    smaller.extend_from_slice(&h[5..]);
    let (mut o, child) = main_array(&smaller, opts)?;
    strip_diagonal(&mut o, &smaller)?;
    let f1 = lemma_outline_arrays(
        5,
        sq(h3) - sq(g3),
        c as u64,
        &h[5..],
        LemmaVariant::FiveRow { a: a as u64 },
    )?;
    let f2 = lemma_outline_arrays(
        2,
        sq(h1p) - sq(g1) - a as u64,
        (h1p * h3 - g1 * g3 - a) as u64,
        &[1, 1, 1],
        LemmaVariant::Plain,
    )?;
    let f3 = lemma_outline_arrays(2, sq(h1) - sq(h1p), (h1 - h1p) as u64, &h[2..], LemmaVariant::Plain)?;
    o.add_assign(&f1);
    o.add_assign(&embed(&f2, k));
    o.add_assign(&f3);
    restore_diagonal(&mut o, h);
    let trace = ConstructionTrace::new("three equal after the largest", &h[1..], h.iter().sum())
        .param("a", a)
        .param("c", c)
        .param("g1", g1)
        .param("g3", g3)
        .param("h1_capped", h1p)
        .child(child);
    Ok((o, trace))
}

/// `h3 = h4 > h5` (with `h5 = 0` when `k = 4`).
fn case_equal_two(h: &[usize], opts: &BuildOptions) -> Result<(OutlineArray, ConstructionTrace)> {
    let k = h.len();
    let (h1, h3) = (h[0], h[2]);
    let h5 = h.get(4).copied().unwrap_or(0);
    let c = h3 - h5;
    let g1 = h1 - c;
    let mut smaller = vec![g1, g1, h5, h5];
    smaller.extend_from_slice(&h[4..]);
    let (mut o, child) = main_array(&smaller, opts)?;
    strip_diagonal(&mut o, &smaller)?;
    let f1 = lemma_outline_arrays(4, sq(h3) - sq(h5), c as u64, &h[4..], LemmaVariant::Plain)?;
    let d = (c * (h1 - h3)) as u64;
    let f2 = lemma_outline_arrays(2, 2 * d, d, &[1, 1], LemmaVariant::Plain)?;
    o.add_assign(&f1);
    o.add_assign(&embed(&f2, k));
    restore_diagonal(&mut o, h);
    let trace = ConstructionTrace::new("two equal after the largest", &h[1..], h.iter().sum())
        .param("c", c)
        .param("g1", g1)
        .child(child);
    Ok((o, trace))
}

/// `h3 > h4` (with `h4 = 0` when `k = 3`).
fn case_strict(h: &[usize], opts: &BuildOptions) -> Result<(OutlineArray, ConstructionTrace)> {
    let k = h.len();
    let (h1, h3) = (h[0], h[2]);
    let h4 = h.get(3).copied().unwrap_or(0);
    let rest: usize = h[3..].iter().sum();
    let g3 = h4.max((rest + 1) / 3);
    let c = h3 - g3;
    let g1 = h1 - c;
    let mut smaller = vec![g1, g1, g3];
    smaller.extend_from_slice(&h[3..]);
    let (mut o, child) = main_array(&smaller, opts)?;
    strip_diagonal(&mut o, &smaller)?;
    let cross = (h1 * h3 - g1 * g3) as u64;
    let f1 = lemma_outline_arrays(3, cross, c as u64, &h[3..], LemmaVariant::Plain)?;
    let f2 = lemma_outline_arrays(2, sq(h1) - sq(g1) - cross, 0, &[], LemmaVariant::Plain)?;
    o.add_assign(&f1);
    o.add_assign(&embed(&f2, k));
    restore_diagonal(&mut o, h);
    let trace = ConstructionTrace::new("largest after the first is unique", &h[1..], h.iter().sum())
        .param("c", c)
        .param("g1", g1)
        .param("g3", g3)
        .child(child);
    Ok((o, trace))
}

/// Lifts the array for `h` and moves the slack block last.
fn lift_main(h: &[usize], opts: &BuildOptions) -> Result<(LatinSquare, ConstructionTrace)> {
    let (array, trace) = main_array(h, opts)?;
    let respect: Vec<usize> = (1..h.len()).collect();
    let outline = square_from_array(&array, h, &respect)?;
    let square = outline.lift_with(LiftOptions {
        check_intermediate: opts.check_intermediate,
    })?;
    let kept: Vec<usize> = h.iter().copied().filter(|&x| x > 0).collect();
    let comp = Composition::new(kept.clone())?;
    let mut order: Vec<usize> = (1..kept.len()).collect();
    order.push(0);
    Ok((square.reorder_blocks(&comp, &order), trace))
}

/// ILS(h1 + h1 + h3 + ... + hk; h1, h3, ..., hk) for `h = (h1, h1, h3, ..., hk)`
/// with `h3 <= (r + 1) / 4` where `r = h3 + ... + hk`.
pub fn construct_case_a(h: &[usize]) -> Result<Construction> {
    check_shape(h)?;
    if h.len() < 3 || h.contains(&0) {
        return Err(Error::Precondition("case A needs at least three positive parts".into()));
    }
    let r: usize = h[2..].iter().sum();
    if 4 * h[2] > r + 1 {
        return Err(Error::Precondition(format!(
            "case A needs h3 <= (r+1)/4, got h3 = {} and r = {r}",
            h[2]
        )));
    }
    construct_main(h)
}

/// ILS(h1 + h1 + r; h1, h3, ..., hk) for `h = (h1, h1, h3, ..., hk)`, the
/// subsquares first in that order and the remaining block of order `h1` last.
pub fn construct_main(h: &[usize]) -> Result<Construction> {
    check_shape(h)?;
    if h.contains(&0) {
        return Err(Error::Precondition("parts must be positive".into()));
    }
    let (square, trace) = lift_main(h, &BuildOptions::default())?;
    Construction::verified(square, &h[1..], trace)
}

/// ILS(n; g1, ..., gk) for any nonincreasing `g` with `n >= g1 + (g1 + ... + gk)`.
pub fn construct_general(g: &[usize], n: usize) -> Result<Construction> {
    construct_general_with(g, n, &BuildOptions::default())
}

/// [`construct_general`] with explicit options.
pub fn construct_general_with(g: &[usize], n: usize, opts: &BuildOptions) -> Result<Construction> {
    if g.is_empty() {
        let trace = ConstructionTrace::new("no subsquares", g, n);
        return Construction::verified(LatinSquare::cyclic(n), g, trace);
    }
    Partition::new(g.to_vec())?;
    let sum: usize = g.iter().sum();
    if n < g[0] + sum {
        return Err(Error::Precondition(format!(
            "n = {n} is below the largest part plus the sum ({})",
            g[0] + sum
        )));
    }
    let slack = n - sum;
    let mut h = vec![g[0]];
    h.extend_from_slice(g);
    h.extend(std::iter::repeat_n(1, slack - g[0]));
    let (square, child) = lift_main(&h, opts)?;
    let trace = ConstructionTrace::new("padded with unit subsquares", g, n)
        .param("units", slack - g[0])
        .child(child);
    Construction::verified(square, g, trace)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn main_small_cases() {
        for h in [
            vec![2, 2, 1, 1, 1, 1],
            vec![3, 3, 2, 2, 2, 2],
            vec![3, 3, 1, 1, 1],
            vec![4, 4, 3, 3, 3, 1],
            vec![5, 5, 4, 4, 1],
            vec![4, 4, 4],
            vec![3, 3, 2, 1],
            vec![6, 6, 5, 2, 2, 1],
            vec![1, 1, 1],
        ] {
            let c = construct_main(&h).unwrap_or_else(|e| panic!("{h:?}: {e}"));
            assert_eq!(c.square.order(), h.iter().sum::<usize>());
        }
    }

    #[test]
    fn general_examples() {
        let c = construct_general(&[3, 2, 1], 9).unwrap();
        assert_eq!(c.square.verify_ils(&[3, 2, 1]), Ok(()));
        let c = construct_general(&[5, 5, 5, 5], 25).unwrap();
        assert_eq!(c.square.order(), 25);
        construct_general(&[], 4).unwrap();
        assert!(construct_general(&[3, 2], 7).is_err());
        assert!(construct_general(&[1, 2], 9).is_err());
    }
}
