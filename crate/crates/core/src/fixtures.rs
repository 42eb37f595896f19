//! The order-8 example square with subsquares of orders 3, 2, 1 and its
//! reduction modulo (3,2,1,1,1).

use crate::latin::LatinSquare;
use crate::outline::OutlineRectangle;
use crate::latin::Composition;

pub const SAMPLE_ROWS: [[u32; 8]; 8] = [
    [1, 2, 3, 6, 7, 8, 5, 4],
    [2, 3, 1, 8, 6, 5, 4, 7],
    [3, 1, 2, 7, 8, 4, 6, 5],
    [8, 7, 6, 4, 5, 1, 2, 3],
    [7, 6, 8, 5, 4, 2, 3, 1],
    [5, 8, 4, 3, 1, 6, 7, 2],
    [6, 4, 5, 2, 3, 7, 1, 8],
    [4, 5, 7, 1, 2, 3, 8, 6],
];

/// The reduced rows, symbol per unit cell, read off the printed multiset grid.
const SAMPLE_OUTLINE_ROWS: [[u32; 8]; 8] = [
    [1, 1, 1, 3, 3, 2, 2, 2],
    [1, 1, 1, 4, 4, 2, 2, 2],
    [1, 1, 1, 5, 5, 5, 3, 4],
    [3, 3, 4, 2, 2, 1, 1, 1],
    [4, 5, 5, 2, 2, 1, 1, 1],
    [2, 2, 5, 1, 1, 3, 4, 1],
    [2, 2, 3, 1, 1, 4, 1, 5],
    [2, 2, 4, 1, 1, 1, 5, 3],
];

pub const SAMPLE_PARTS: [usize; 5] = [3, 2, 1, 1, 1];

pub fn sample_square() -> LatinSquare {
    LatinSquare::from_rows(SAMPLE_ROWS.iter().map(|r| r.to_vec()).collect())
        .expect("fixture is square")
}

/// The printed outline square, built by counting symbols in each block of
/// the printed grid (rows and columns are grouped by 3,2,1,1,1).
pub fn sample_outline() -> OutlineRectangle {
    let p = Composition::new(SAMPLE_PARTS.to_vec()).expect("positive parts");
    let map = p.group_map();
    let u = p.len();
    let mut o = OutlineRectangle::zero(p.clone(), p.clone(), p);
    for (a, row) in SAMPLE_OUTLINE_ROWS.iter().enumerate() {
        for (b, &s) in row.iter().enumerate() {
            o.add(map[a], map[b], s as usize - 1, 1);
        }
    }
    debug_assert_eq!(o.rows(), u);
    o
}
