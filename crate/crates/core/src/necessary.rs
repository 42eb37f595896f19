//! The four-set necessary condition and the decision layer.

use serde::Serialize;

use crate::constructions::{
    construct_general, construct_ils_k2, construct_ils_k3, construct_ils_uniform, k3_condition,
    Construction, ConstructionTrace,
};
use crate::error::{Error, Result};
use crate::latin::{LatinSquare, Partition};
use crate::solver::{brute_force_ils, default_budget, SearchOutcome};

/// Largest number of elements (parts plus the slack part) scanned by default.
pub const DEFAULT_ELEMENT_BOUND: usize = 12;

/// Four pairwise disjoint sets of 1-based element indices for which the
/// inequality fails. Element `k + 1` stands for the slack part `n - sum`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NecessaryViolation {
    #[serde(rename = "A")]
    pub a: Vec<usize>,
    #[serde(rename = "B")]
    pub b: Vec<usize>,
    #[serde(rename = "C")]
    pub c: Vec<usize>,
    #[serde(rename = "D")]
    pub d: Vec<usize>,
    pub lhs: i64,
    pub rhs: i64,
}

fn weights(parts: &[usize], n: usize) -> Result<Vec<i64>> {
    let sum: usize = parts.iter().sum();
    if sum > n {
        return Err(Error::Precondition(format!(
            "parts sum to {sum}, more than the order {n}"
        )));
    }
    let mut w: Vec<i64> = parts.iter().map(|&h| h as i64).collect();
    w.push((n - sum) as i64);
    Ok(w)
}

/// Both sides of the inequality for the given sets (1-based indices, the
/// last one being the slack part). Sets must be disjoint and in range.
pub fn evaluate_sets(
    parts: &[usize],
    n: usize,
    sets: [&[usize]; 4],
) -> Result<(i64, i64)> {
    let w = weights(parts, n)?;
    let slack = w.len();
    let mut class = vec![0usize; slack];
    for (c, set) in sets.iter().enumerate() {
        for &e in set.iter() {
            if e == 0 || e > slack || class[e - 1] != 0 {
                return Err(Error::Precondition(format!(
                    "element {e} is out of range or in two sets"
                )));
            }
            class[e - 1] = c + 1;
        }
    }
    let sum = |cs: &[usize]| -> i64 {
        (0..slack).filter(|&e| cs.contains(&class[e])).map(|e| w[e]).sum()
    };
    let sq_e: i64 = (0..slack - 1).filter(|&e| class[e] != 0).map(|e| w[e] * w[e]).sum();
    let lhs = sum(&[1, 3]).pow(2) + sum(&[2, 4]).pow(2) - sq_e;
    let rhs = sum(&[1, 4]) * (sum(&[2, 3]) - sum(&[0]));
    Ok((lhs, rhs))
}

struct Scan<'a> {
    w: &'a [i64],
    class: Vec<u8>,
}

impl Scan<'_> {
    // sums: [A∪C, B∪D, A∪D, B∪C, none, squares of E without the slack]
    fn go(&mut self, e: usize, s: [i64; 6]) -> Option<(i64, i64)> {
        if e == self.w.len() {
            let lhs = s[0] * s[0] + s[1] * s[1] - s[5];
            let rhs = s[2] * (s[3] - s[4]);
            return (lhs < rhs).then_some((lhs, rhs));
        }
        let h = self.w[e];
        let sq = if e + 1 == self.w.len() { 0 } else { h * h };
        let digits: &[u8] = if e == 0 { &[0, 1, 3] } else { &[0, 1, 2, 3, 4] };
        for &d in digits {
            let mut t = s;
            match d {
                0 => t[4] += h,
                1 => {
                    t[0] += h;
                    t[2] += h;
                }
                2 => {
                    t[1] += h;
                    t[3] += h;
                }
                3 => {
                    t[0] += h;
                    t[3] += h;
                }
                _ => {
                    t[1] += h;
                    t[2] += h;
                }
            }
            if d != 0 {
                t[5] += sq;
            }
            self.class[e] = d;
            if let Some(found) = self.go(e + 1, t) {
                return Some(found);
            }
        }
        None
    }
}

/// Scans every assignment of the `k + 1` elements to A, B, C, D or none and
/// returns the first one violating the inequality.
pub fn check_necessary(parts: &[usize], n: usize) -> Result<Option<NecessaryViolation>> {
    check_necessary_bounded(parts, n, DEFAULT_ELEMENT_BOUND)
}

/// [`check_necessary`] with an explicit cap on the number of elements.
pub fn check_necessary_bounded(
    parts: &[usize],
    n: usize,
    max_elements: usize,
) -> Result<Option<NecessaryViolation>> {
    let w = weights(parts, n)?;
    if w.len() > max_elements {
        return Err(Error::Precondition(format!(
            "{} elements exceed the scan bound of {max_elements}",
            w.len()
        )));
    }
    let mut scan = Scan {
        w: &w,
        class: vec![0; w.len()],
    };
    let Some((lhs, rhs)) = scan.go(0, [0; 6]) else {
        return Ok(None);
    };
    let members = |d: u8| -> Vec<usize> {
        (0..w.len()).filter(|&e| scan.class[e] == d).map(|e| e + 1).collect()
    };
    Ok(Some(NecessaryViolation {
        a: members(1),
        b: members(2),
        c: members(3),
        d: members(4),
        lhs,
        rhs,
    }))
}

/// Why a verdict says an ILS does not exist.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Certificate {
    /// The four-set inequality fails.
    Violation(NecessaryViolation),
    /// A characterization rules it out; the text names the failed condition.
    Structural { reason: String },
    /// The exhaustive search finished without a square.
    Exhausted { nodes: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Exists,
    NotExists,
    Unknown,
}

/// Outcome of [`decide`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExistenceVerdict {
    pub status: Status,
    pub witness: Option<LatinSquare>,
    pub certificate: Option<Certificate>,
    /// Which rule settled it.
    pub basis: String,
    pub trace: Option<ConstructionTrace>,
}

impl ExistenceVerdict {
    fn exists(c: Construction, basis: &str) -> Self {
        ExistenceVerdict {
            status: Status::Exists,
            witness: Some(c.square),
            certificate: None,
            basis: basis.to_string(),
            trace: Some(c.trace),
        }
    }

    fn not_exists(certificate: Certificate, basis: &str) -> Self {
        ExistenceVerdict {
            status: Status::NotExists,
            witness: None,
            certificate: Some(certificate),
            basis: basis.to_string(),
            trace: None,
        }
    }

    fn unknown(basis: String) -> Self {
        ExistenceVerdict {
            status: Status::Unknown,
            witness: None,
            certificate: None,
            basis,
            trace: None,
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct DecideOptions {
    /// Orders up to this bound fall back to exhaustive search.
    pub oracle_bound: usize,
    pub budget: u64,
}

impl Default for DecideOptions {
    fn default() -> Self {
        DecideOptions {
            oracle_bound: 7,
            budget: default_budget(),
        }
    }
}

/// Decides whether ILS(n; parts) exists.
pub fn decide(parts: &[usize], n: usize) -> Result<ExistenceVerdict> {
    decide_with(parts, n, &DecideOptions::default())
}

fn structural(reason: String, basis: &str) -> ExistenceVerdict {
    ExistenceVerdict::not_exists(Certificate::Structural { reason }, basis)
}

fn built(result: Result<Construction>, basis: &str) -> Result<ExistenceVerdict> {
    match result {
        Ok(c) => Ok(ExistenceVerdict::exists(c, basis)),
        Err(Error::Infeasible(reason)) => Ok(structural(reason, basis)),
        Err(Error::Timeout { budget }) => Ok(ExistenceVerdict::unknown(format!(
            "{basis}: construction search ran out of its {budget}-node budget"
        ))),
        Err(e) => Err(e),
    }
}

/// [`decide`] with an explicit oracle bound and search budget.
pub fn decide_with(parts: &[usize], n: usize, opts: &DecideOptions) -> Result<ExistenceVerdict> {
    if n == 0 {
        return Err(Error::Precondition("order must be positive".into()));
    }
    let parts = Partition::new(parts.to_vec())?;
    let h = parts.parts();
    let sum = parts.total();
    if sum > n {
        return Err(Error::Precondition(format!(
            "parts sum to {sum}, more than the order {n}"
        )));
    }
    let k = h.len();
    match k {
        0 => {
            return built(construct_general(&[], n), "no subsquares");
        }
        1 => {
            let basis = "single subsquare";
            return if n == h[0] || n >= 2 * h[0] {
                built(construct_ils_uniform(h[0], 1, n, opts.budget), basis)
            } else {
                Ok(structural(
                    format!("a proper subsquare of order {} needs n >= {}", h[0], 2 * h[0]),
                    basis,
                ))
            };
        }
        2 => return built(construct_ils_k2(h[0], h[1], n), "two subsquares"),
        3 => {
            let basis = "three subsquares";
            return match k3_condition(h[0], h[1], h[2], n) {
                Ok(_) => built(construct_ils_k3(h[0], h[1], h[2], n), basis),
                Err(reason) => Ok(structural(reason, basis)),
            };
        }
        _ => {}
    }
    if h.iter().all(|&x| x == h[0]) {
        return built(
            construct_ils_uniform(h[0], k, n, opts.budget),
            "subsquares of one order",
        );
    }
    if n >= h[0] + sum {
        return built(construct_general(h, n), "slack at least the largest subsquare");
    }
    if k < DEFAULT_ELEMENT_BOUND {
        if let Some(v) = check_necessary(h, n)? {
            return Ok(ExistenceVerdict::not_exists(
                Certificate::Violation(v),
                "four-set inequality",
            ));
        }
    }
    if n <= opts.oracle_bound {
        let searched = brute_force_ils(h, n, opts.budget);
        let basis = "exhaustive search";
        return Ok(match searched.outcome {
            SearchOutcome::Found(sq) => {
                sq.verify_ils(h)?;
                ExistenceVerdict {
                    status: Status::Exists,
                    witness: Some(sq),
                    certificate: None,
                    basis: basis.to_string(),
                    trace: None,
                }
            }
            SearchOutcome::Infeasible => ExistenceVerdict::not_exists(
                Certificate::Exhausted {
                    nodes: searched.nodes,
                },
                basis,
            ),
            SearchOutcome::Timeout => {
                ExistenceVerdict::unknown(format!("exhaustive search hit its {}-node budget", opts.budget))
            }
        });
    }
    Ok(ExistenceVerdict::unknown(
        "no characterization applies and the order is above the search bound".into(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_twos_in_five() {
        let v = check_necessary(&[2, 2], 5).unwrap().unwrap();
        assert_eq!((v.a.as_slice(), v.b.as_slice()), (&[1][..], &[2][..]));
        assert!(v.c.is_empty() && v.d.is_empty());
        assert_eq!((v.lhs, v.rhs), (0, 2));
        let (l, r) = evaluate_sets(&[2, 2], 5, [&v.a, &v.b, &v.c, &v.d]).unwrap();
        assert_eq!((l, r), (v.lhs, v.rhs));
    }

    #[test]
    fn passes() {
        assert_eq!(check_necessary(&[1], 2).unwrap(), None);
        assert_eq!(check_necessary(&[3, 3, 3], 9).unwrap(), None);
        assert!(check_necessary(&[1; 12], 20).is_err());
    }

    #[test]
    fn decide_examples() {
        let v = decide(&[2, 2], 6).unwrap();
        assert_eq!(v.status, Status::Exists);
        v.witness.unwrap().verify_ils(&[2, 2]).unwrap();
        assert_eq!(decide(&[2, 2, 2], 7).unwrap().status, Status::Exists);
        let v = decide(&[3, 2], 5).unwrap();
        assert_eq!(v.status, Status::NotExists);
        assert!(matches!(v.certificate, Some(Certificate::Structural { .. })));
        assert_eq!(decide(&[3, 2, 2, 1], 8).unwrap().status, Status::NotExists);
        assert!(decide(&[1, 2], 4).is_err());
    }
}
