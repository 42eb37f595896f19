//! Outline arrays assembled from many small blocks, one per part of a
//! multiset split.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use crate::error::{Error, Result};
use crate::freq_array::{FrequencyArray, OutlineArray};
use crate::latin::LatinSquare;
use crate::solver::{brute_force_ils, SearchOutcome};

/// Five-row block arrays for 0 to 4 extra unit indices: rows on lines,
/// cells split by `|`, 1-based symbols split by `,`.
pub const FIVE_ROW_SOURCES: [&str; 5] = [
    "4,5|3,5|1,2|1,2|3,4
     3,4||4,5|3,5|1,1
     1,1|4,5||2|2
     3,5|1,1|2||2
     2,2|3,4|1|1|",
    "4,5|4,5|1,1|3,6|2,3|2
     3,3||4,6|1,5|1,4|5
     2,2|4,5||1|6|1
     5,6|1,1|2||2|3
     1,1|3,6|2|2||4
     4|3|5|2|1|",
    "4,5|3,5|1,2|1,7|2,6|3|4
     3,3||1,5|1,6|4,7|4|5
     4,7|1,6||5|2|1|2
     2,2|1,7|6||1|5|3
     1,6|3,4|7|2||2|1
     1|5|4|2|3||
     5|4|2|3|1||",
    "3,5|4,8|1,6|5,7|2,2|3|4|1
     3,4||1,8|3,6|1,7|4|5|5
     1,8|1,7||2|6|5|2|4
     2,6|1,5|7||8|1|3|2
     1,7|4,6|2|8||2|1|3
     2|5|4|1|3|||
     5|3|2|1|4|||
     4|3|5|2|1|||",
    "2,4|3,6|4,9|1,8|2,7|5|3|1|5
     3,5||1,8|6,7|1,9|4|5|4|3
     2,7|5,8||9|6|1|1|2|4
     1,6|1,9|7||8|3|2|5|2
     8,9|1,7|6|2||2|4|3|1
     5|4|1|2|3||||
     4|3|2|5|1||||
     3|4|5|1|2||||
     1|5|2|3|4||||",
];

/// Which family of blocks to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LemmaVariant {
    /// Every block is a unit-diagonal square with one cell restored.
    Plain,
    /// `m = 5`; the first `a - b` blocks use the five-row arrays.
    FiveRow { a: u64 },
}

/// Frequency array of a five-row block with `s` unit tail indices.
fn five_row_frequency(s: usize) -> FrequencyArray {
    let k = 5 + s;
    let mut f = FrequencyArray::zero(k);
    for i in 0..k {
        for j in 0..k {
            let v = if i < 5 && j < 5 {
                if (i < 2 || j < 2) && (i, j) != (1, 1) {
                    2
                } else if i >= 2 && j >= 2 && i != j {
                    1
                } else {
                    0
                }
            } else if i < 5 || j < 5 {
                1
            } else {
                0
            };
            f.set(i, j, v);
        }
    }
    f
}

fn parse_five_row(src: &str) -> Result<OutlineArray> {
    let rows: Vec<Vec<Vec<u32>>> = src
        .lines()
        .map(|line| {
            line.trim()
                .split('|')
                .map(|cell| {
                    cell.split(',')
                        .filter(|t| !t.trim().is_empty())
                        .map(|t| t.trim().parse::<u32>())
                        .collect::<std::result::Result<Vec<_>, _>>()
                })
                .collect::<std::result::Result<Vec<_>, _>>()
        })
        .collect::<std::result::Result<Vec<_>, _>>()
        .map_err(|e| Error::Internal(format!("bad five-row array source: {e}")))?;
    OutlineArray::from_cells(&rows)
}

/// The five-row block array for `s` (`0..=4`) extra unit indices, validated
/// against its frequency array.
pub fn five_row_array(s: usize) -> Result<OutlineArray> {
    let src = FIVE_ROW_SOURCES
        .get(s)
        .ok_or_else(|| Error::Precondition(format!("no five-row array for {s} extra indices")))?;
    let o = parse_five_row(src)?;
    o.validate(&five_row_frequency(s))
        .map_err(|e| Error::Internal(format!("five-row array {s}: {e}")))?;
    Ok(o)
}

const UNIT_BLOCK_BUDGET: u64 = 50_000_000;

/// A latin square of order `m + s` whose first `m` diagonal cells are unit
/// subsquares and whose last `s` rows and columns form a subsquare.
pub fn unit_block_square(m: usize, s: usize) -> Result<LatinSquare> {
    static CACHE: OnceLock<Mutex<HashMap<(usize, usize), LatinSquare>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(sq) = cache.lock().expect("cache lock").get(&(m, s)) {
        return Ok(sq.clone());
    }
    let mut parts = vec![1; m];
    if s > 0 {
        parts.push(s);
    }
    let searched = brute_force_ils(&parts, m + s, UNIT_BLOCK_BUDGET);
    let sq = match searched.outcome {
        SearchOutcome::Found(sq) => sq,
        SearchOutcome::Infeasible => {
            return Err(Error::Infeasible(format!(
                "no latin square of order {} with {m} unit subsquares and a subsquare of order {s}",
                m + s
            )))
        }
        SearchOutcome::Timeout => return Err(Error::Timeout { budget: UNIT_BLOCK_BUDGET }),
    };
    cache.lock().expect("cache lock").insert((m, s), sq.clone());
    Ok(sq)
}

/// Block array for one part of the split: order `m + s`, indices past `m`
/// are single units.
fn plain_block(m: usize, s: usize) -> Result<OutlineArray> {
    if m == 2 && s == 0 {
        return OutlineArray::from_cells(&[vec![vec![2], vec![1]], vec![vec![1], vec![]]]);
    }
    let sq = unit_block_square(m, s)?;
    let n = m + s;
    let mut o = OutlineArray::zero(n);
    for a in 0..n {
        for b in 0..n {
            let inside = a >= m && b >= m;
            if (a == b && a > 0 && a < m) || inside {
                continue;
            }
            o.add(a, b, sq.get(a, b) as usize - 1, 1);
        }
    }
    Ok(o)
}

/// The frequency array the lemma promises.
fn lemma_frequency(m: usize, b: u64, c: u64, tail: &[usize], variant: LemmaVariant) -> FrequencyArray {
    let k = m + tail.len();
    let mut f = FrequencyArray::zero(k);
    for i in 0..k {
        for j in 0..k {
            let v = if i < m && j < m {
                match variant {
                    LemmaVariant::Plain => {
                        if i != j || i == 0 {
                            b
                        } else {
                            0
                        }
                    }
                    LemmaVariant::FiveRow { a } => {
                        if (i < 2 || j < 2) && (i, j) != (1, 1) {
                            a
                        } else if i != j {
                            b
                        } else {
                            0
                        }
                    }
                }
            } else if i < m {
                c * tail[j - m] as u64
            } else if j < m {
                c * tail[i - m] as u64
            } else {
                0
            };
            f.set(i, j, v);
        }
    }
    f
}

/// Outline array of order `m + tail.len()` for the frequency array with `b`
/// between the first `m` indices (off the diagonal, plus the first diagonal
/// cell) and `c * tail[t]` between those and tail index `m + t`. With
/// [`LemmaVariant::FiveRow`] the first two indices instead see `a` against
/// the first five.
pub fn lemma_outline_arrays(
    m: usize,
    b: u64,
    c: u64,
    tail: &[usize],
    variant: LemmaVariant,
) -> Result<OutlineArray> {
    let k = m + tail.len();
    let items: u64 = c * tail.iter().map(|&h| h as u64).sum::<u64>();
    if m < 2 {
        return Err(Error::Precondition("need m >= 2".into()));
    }
    match variant {
        LemmaVariant::Plain => {
            if (m as u64 - 1) * b < items {
                return Err(Error::Precondition(format!(
                    "(m-1)b = {} is less than c * sum = {items}",
                    (m as u64 - 1) * b
                )));
            }
        }
        LemmaVariant::FiveRow { a } => {
            if m != 5 || a < b || a > 2 * b || 4 * b < items {
                return Err(Error::Precondition(format!(
                    "five-row blocks need m = 5, b <= a <= 2b and 4b >= c * sum (m = {m}, a = {a}, b = {b}, sum = {items})"
                )));
            }
        }
    }
    let fig_blocks = match variant {
        LemmaVariant::Plain => 0,
        LemmaVariant::FiveRow { a } => a - b,
    };
    // The multiset, largest tail index first, dealt round-robin to b blocks.
    let mut multiset = Vec::with_capacity(items as usize);
    for t in (0..tail.len()).rev() {
        multiset.extend(std::iter::repeat_n(t, c as usize * tail[t]));
    }
    let mut groups: HashMap<(bool, Vec<usize>), u64> = HashMap::new();
    let dealt = (b as usize).min(multiset.len());
    for l in 0..dealt {
        let mut counts = vec![0usize; tail.len()];
        for &t in multiset[l..].iter().step_by(b as usize) {
            counts[t] += 1;
        }
        *groups.entry(((l as u64) < fig_blocks, counts)).or_default() += 1;
    }
    let empty = vec![0usize; tail.len()];
    let fig_empty = fig_blocks.saturating_sub(dealt as u64);
    let plain_empty = b - dealt as u64 - fig_empty;
    if fig_empty > 0 {
        *groups.entry((true, empty.clone())).or_default() += fig_empty;
    }
    if plain_empty > 0 {
        *groups.entry((false, empty)).or_default() += plain_empty;
    }
    let mut total = OutlineArray::zero(k);
    let mut keys: Vec<_> = groups.into_iter().collect();
    keys.sort();
    for ((fig, counts), mult) in keys {
        let s: usize = counts.iter().sum();
        let block = if fig { five_row_array(s)? } else { plain_block(m, s)? };
        let mut map: Vec<usize> = (0..m).collect();
        for (t, &cnt) in counts.iter().enumerate() {
            map.extend(std::iter::repeat_n(m + t, cnt));
        }
        total.add_assign(&block.remap(&map, k).scaled(mult));
    }
    let f = lemma_frequency(m, b, c, tail, variant);
    total
        .validate(&f)
        .map_err(|e| Error::Internal(format!("lemma array (m = {m}, b = {b}, c = {c}): {e}")))?;
    Ok(total)
}
