//! Two and three subsquares, and subsquares of a single order.

use super::{construct_general, Construction, ConstructionTrace};
use crate::error::{Error, Result};
use crate::freq_array::OutlineArray;
use crate::latin::{idempotent_square, inflate, Composition, LatinSquare};
use crate::outline::{ils_from_outline, OutlineRectangle};
use crate::solver::{solve_outline_square, OutlineSpec, SearchOutcome};

/// Validates `array` as an outline square for `parts` (zero parts allowed)
/// respecting the blocks in `respect`, then drops the zero-size blocks.
pub(crate) fn square_from_array(
    array: &OutlineArray,
    parts: &[usize],
    respect: &[usize],
) -> Result<OutlineRectangle> {
    let f = crate::freq_array::FrequencyArray::product(parts);
    array
        .validate(&f)
        .map_err(|e| Error::Internal(format!("outline array check failed: {e}")))?;
    for &i in respect {
        let want = (parts[i] * parts[i]) as u64;
        if array.get(i, i, i) != want {
            return Err(Error::Internal(format!(
                "cell ({i}, {i}) does not hold {want} copies of {i}"
            )));
        }
    }
    let kept: Vec<usize> = (0..parts.len()).filter(|&i| parts[i] > 0).collect();
    let p = Composition::new(kept.iter().map(|&i| parts[i]).collect())?;
    let mut o = OutlineRectangle::zero(p.clone(), p.clone(), p);
    for (a, &i) in kept.iter().enumerate() {
        for (b, &j) in kept.iter().enumerate() {
            for (c, &l) in kept.iter().enumerate() {
                o.set(a, b, c, array.get(i, j, l));
            }
        }
    }
    Ok(o)
}

fn arr_set(o: &mut OutlineArray, i: usize, j: usize, l: usize, v: i64) -> Result<()> {
    if v < 0 {
        return Err(Error::Internal(format!(
            "negative count {v} for symbol {l} in cell ({i}, {j})"
        )));
    }
    o.set(i, j, l, v as u64);
    Ok(())
}

/// ILS(n; h1, h2) from the three-block outline square; needs `n - h1 - h2 >= h1`.
pub fn construct_ils_k2(h1: usize, h2: usize, n: usize) -> Result<Construction> {
    if h2 == 0 || h1 < h2 {
        return Err(Error::Precondition(format!(
            "need h1 >= h2 >= 1, got ({h1}, {h2})"
        )));
    }
    if h1 + h2 > n {
        return Err(Error::Precondition(format!(
            "subsquares {h1} + {h2} exceed the order {n}"
        )));
    }
    let h3 = n - h1 - h2;
    if h3 < h1 {
        return Err(Error::Infeasible(format!(
            "remaining part {h3} is smaller than the largest subsquare {h1}"
        )));
    }
    let (a, b, c) = (h1 as i64, h2 as i64, h3 as i64);
    let mut o = OutlineArray::zero(3);
    arr_set(&mut o, 0, 0, 0, a * a)?;
    arr_set(&mut o, 0, 1, 2, a * b)?;
    arr_set(&mut o, 0, 2, 1, a * b)?;
    arr_set(&mut o, 0, 2, 2, a * c - a * b)?;
    arr_set(&mut o, 1, 0, 2, a * b)?;
    arr_set(&mut o, 1, 1, 1, b * b)?;
    arr_set(&mut o, 1, 2, 0, a * b)?;
    arr_set(&mut o, 1, 2, 2, b * c - a * b)?;
    arr_set(&mut o, 2, 0, 1, a * b)?;
    arr_set(&mut o, 2, 0, 2, a * c - a * b)?;
    arr_set(&mut o, 2, 1, 0, a * b)?;
    arr_set(&mut o, 2, 1, 2, b * c - a * b)?;
    arr_set(&mut o, 2, 2, 0, a * c - a * b)?;
    arr_set(&mut o, 2, 2, 1, b * c - a * b)?;
    arr_set(&mut o, 2, 2, 2, c * c - a * c - b * c + 2 * a * b)?;
    let outline = square_from_array(&o, &[h1, h2, h3], &[0, 1])?;
    let (square, _) = ils_from_outline(&outline, 2)?;
    let trace = ConstructionTrace::new("two subsquares", &[h1, h2], n);
    Construction::verified(square, &[h1, h2], trace)
}

/// The three ranges of the slack part for three subsquares.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum K3Branch {
    /// slack >= h1
    Large,
    /// h1 > slack >= h3
    Middle,
    /// slack < h3
    Small,
}

/// Decides existence of ILS(n; h1, h2, h3) (`h1 >= h2 >= h3 >= 1`,
/// `h1 + h2 + h3 <= n`). On success returns the branch and the free
/// parameter `z` of the outline square; otherwise names the failed inequality.
pub fn k3_condition(h1: usize, h2: usize, h3: usize, n: usize) -> std::result::Result<(K3Branch, i64), String> {
    let (a, b, c) = (h1 as i64, h2 as i64, h3 as i64);
    let d = n as i64 - a - b - c;
    if d >= a {
        Ok((K3Branch::Large, b * c))
    } else if d >= c {
        if d >= a - c {
            Ok((K3Branch::Middle, b * d - a * b + b * c))
        } else {
            Err(format!("slack {d} < h1 - h3 = {}", a - c))
        }
    } else {
        let z = a * d - a * b - a * c + 2 * b * c;
        let q = d * d + d * (2 * a - b - c) - a * b - a * c + 2 * b * c;
        if z < 0 {
            Err(format!("h1*slack = {} < h1*h2 + h1*h3 - 2*h2*h3 = {}", a * d, a * b + a * c - 2 * b * c))
        } else if q < 0 {
            Err(format!("slack^2 + slack(2h1-h2-h3) - h1h2 - h1h3 + 2h2h3 = {q} < 0"))
        } else {
            Ok((K3Branch::Small, z))
        }
    }
}

/// ILS(n; h1, h2, h3) from the four-block outline square with parameter `z`.
pub fn construct_ils_k3(h1: usize, h2: usize, h3: usize, n: usize) -> Result<Construction> {
    if h3 == 0 || h2 < h3 || h1 < h2 {
        return Err(Error::Precondition(format!(
            "need h1 >= h2 >= h3 >= 1, got ({h1}, {h2}, {h3})"
        )));
    }
    if h1 + h2 + h3 > n {
        return Err(Error::Precondition(format!(
            "subsquares sum to more than the order {n}"
        )));
    }
    let (branch, z) = k3_condition(h1, h2, h3, n).map_err(Error::Infeasible)?;
    let h4 = n - h1 - h2 - h3;
    let (a, b, c, d) = (h1 as i64, h2 as i64, h3 as i64, h4 as i64);
    let t2 = a * d - a * b - a * c + 2 * b * c;
    let t3 = b * d - a * b + b * c;
    let t4 = c * d - a * c + b * c;
    let t5 = d * d - d * (a + b + c) + 2 * a * b + 2 * a * c - 4 * b * c;
    let constraints = [
        (z >= 0, "z >= 0"),
        (z <= b * c, "(1) z <= h2h3"),
        (z <= t2, "(2)"),
        (z <= t3, "(3)"),
        (z <= t4, "(4)"),
        (t5 + 3 * z >= 0, "(5)"),
    ];
    for (ok, name) in constraints {
        if !ok {
            return Err(Error::Internal(format!("constraint {name} fails for z = {z}")));
        }
    }
    let mut o = OutlineArray::zero(4);
    let rows: [[&[(usize, i64)]; 4]; 4] = [
        [
            &[(0, a * a)],
            &[(2, b * c), (3, a * b - b * c)],
            &[(1, b * c - z), (3, a * c - b * c + z)],
            &[(1, a * b - b * c + z), (2, a * c - b * c), (3, t2 - z)],
        ],
        [
            &[(2, b * c - z), (3, a * b - b * c + z)],
            &[(1, b * b)],
            &[(0, b * c)],
            &[(0, a * b - b * c), (2, z), (3, t3 - z)],
        ],
        [
            &[(1, b * c), (3, a * c - b * c)],
            &[(0, b * c - z), (3, z)],
            &[(2, c * c)],
            &[(0, a * c - b * c + z), (3, t4 - z)],
        ],
        [
            &[(1, a * b - b * c), (2, a * c - b * c + z), (3, t2 - z)],
            &[(0, a * b - b * c + z), (3, t3 - z)],
            &[(0, a * c - b * c), (1, z), (3, t4 - z)],
            &[(0, t2 - z), (1, t3 - z), (2, t4 - z), (3, t5 + 3 * z)],
        ],
    ];
    for (i, row) in rows.iter().enumerate() {
        for (j, cell) in row.iter().enumerate() {
            for &(l, v) in cell.iter() {
                arr_set(&mut o, i, j, l, v)?;
            }
        }
    }
    let outline = square_from_array(&o, &[h1, h2, h3, h4], &[0, 1, 2])?;
    let (square, _) = ils_from_outline(&outline, 3)?;
    let case = match branch {
        K3Branch::Large => "three subsquares, slack >= h1",
        K3Branch::Middle => "three subsquares, h1 > slack >= h3",
        K3Branch::Small => "three subsquares, slack < h3",
    };
    let trace = ConstructionTrace::new(case, &[h1, h2, h3], n).param("z", z);
    Construction::verified(square, &[h1, h2, h3], trace)
}

/// ILS(n; h^k).
pub fn construct_ils_uniform(h: usize, k: usize, n: usize, budget: u64) -> Result<Construction> {
    if h == 0 || k == 0 {
        return Err(Error::Precondition("need h >= 1 and k >= 1".into()));
    }
    let parts = vec![h; k];
    match k {
        1 => {
            if n == h {
                let trace = ConstructionTrace::new("whole square", &parts, n);
                Construction::verified(LatinSquare::cyclic(n), &parts, trace)
            } else if n >= 2 * h {
                construct_general(&parts, n)
            } else {
                Err(Error::Infeasible(format!(
                    "a subsquare of order {h} needs n = {h} or n >= {}",
                    2 * h
                )))
            }
        }
        2 => {
            if n < 3 * h {
                return Err(Error::Infeasible(format!(
                    "two subsquares of order {h} need n >= {}",
                    3 * h
                )));
            }
            construct_ils_k2(h, h, n)
        }
        _ => {
            if n < k * h {
                return Err(Error::Infeasible(format!(
                    "{k} subsquares of order {h} need n >= {}",
                    k * h
                )));
            }
            let (blocks, rest) = (n / h, n % h);
            if rest == 0 {
                let base = idempotent_square(blocks)
                    .map_err(|e| Error::Internal(e.to_string()))?;
                let trace = ConstructionTrace::new("inflated idempotent square", &parts, n)
                    .param("blocks", blocks);
                return Construction::verified(inflate(&base, h), &parts, trace);
            }
            if n >= (k + 1) * h {
                return construct_general(&parts, n);
            }
            // LS(h^k rest) with rest < h.
            let mut all = parts.clone();
            all.push(rest);
            let p = Composition::new(all.clone())?;
            let spec = OutlineSpec::new(p, (0..=k).collect());
            let searched = solve_outline_square(&spec, budget);
            let outline = match searched.outcome {
                SearchOutcome::Found(o) => o,
                SearchOutcome::Infeasible => {
                    return Err(Error::Internal(format!(
                        "no outline square found for LS(h^{k} {rest})"
                    )))
                }
                SearchOutcome::Timeout => return Err(Error::Timeout { budget }),
            };
            let (square, _) = ils_from_outline(&outline, k + 1)?;
            let trace = ConstructionTrace::new("searched realization", &parts, n)
                .param("rest", rest)
                .param("nodes", searched.nodes);
            Construction::verified(square, &parts, trace)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn k2_examples() {
        let c = construct_ils_k2(2, 2, 10).unwrap();
        assert_eq!(c.square.order(), 10);
        let c = construct_ils_k2(1, 1, 3).unwrap();
        assert_eq!(c.square.verify_ils(&[1, 1]), Ok(()));
        assert!(matches!(construct_ils_k2(3, 1, 5), Err(Error::Infeasible(_))));
    }

    #[test]
    fn k3_examples() {
        let c = construct_ils_k3(2, 2, 2, 7).unwrap();
        assert_eq!(c.trace.params["z"], 2);
        construct_ils_k3(2, 2, 2, 9).unwrap();
        assert!(matches!(construct_ils_k3(3, 2, 1, 7), Err(Error::Infeasible(_))));
        assert_eq!(k3_condition(2, 2, 2, 9), Ok((K3Branch::Large, 4)));
    }

    #[test]
    fn uniform_examples() {
        let c = construct_ils_uniform(2, 3, 6, 1_000_000).unwrap();
        assert_eq!(c.trace.case, "inflated idempotent square");
        let c = construct_ils_uniform(2, 3, 7, 1_000_000).unwrap();
        assert_eq!(c.square.verify_ils(&[2, 2, 2]), Ok(()));
        assert!(matches!(
            construct_ils_uniform(2, 2, 5, 1_000),
            Err(Error::Infeasible(_))
        ));
        construct_ils_uniform(3, 4, 14, 10_000_000).unwrap();
        construct_ils_uniform(1, 1, 1, 10).unwrap();
        construct_ils_uniform(3, 1, 6, 10).unwrap();
    }
}
