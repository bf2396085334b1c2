//! Gaussian elimination over the prime field Z_d.

use crate::zd::Dimension;

/// A row that supports the elementary operations of elimination.
pub trait EliminationRow: Clone {
    fn entry(&self, col: usize) -> u32;
    /// `self <- c * self` for invertible `c`.
    fn scale(&mut self, c: u32, dim: Dimension);
    /// `self <- self + c * other`.
    fn add_scaled(&mut self, other: &Self, c: u32, dim: Dimension);
}

impl EliminationRow for Vec<u32> {
    fn entry(&self, col: usize) -> u32 {
        self[col]
    }

    fn scale(&mut self, c: u32, dim: Dimension) {
        for v in self.iter_mut() {
            *v = dim.mul(*v, c);
        }
    }

    fn add_scaled(&mut self, other: &Self, c: u32, dim: Dimension) {
        for (v, o) in self.iter_mut().zip(other) {
            *v = dim.add(*v, dim.mul(*o, c));
        }
    }
}

/// Brings `rows` to reduced row-echelon form with respect to `cols`, visited in
/// the given order. Pivot rows come first, each with a leading 1 and zeros in
/// every other row's pivot column. Returns the pivot columns in row order.
pub fn reduce_rows<R: EliminationRow>(rows: &mut [R], cols: &[usize], dim: Dimension) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut next = 0;
    for &col in cols {
        if next == rows.len() {
            break;
        }
        let Some(found) = (next..rows.len()).find(|&r| rows[r].entry(col) != 0) else {
            continue;
        };
        rows.swap(next, found);
        let inv = dim.inv(rows[next].entry(col)).expect("nonzero in a prime field");
        rows[next].scale(inv, dim);
        let pivot = rows[next].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            let e = row.entry(col);
            if r != next && e != 0 {
                row.add_scaled(&pivot, dim.neg(e), dim);
            }
        }
        pivots.push(col);
        next += 1;
    }
    pivots
}

/// Rank of a set of vectors over Z_d.
pub fn rank(rows: &[Vec<u32>], dim: Dimension) -> usize {
    let Some(width) = rows.first().map(Vec::len) else {
        return 0;
    };
    let mut rows = rows.to_vec();
    let cols: Vec<usize> = (0..width).collect();
    reduce_rows(&mut rows, &cols, dim).len()
}

/// Coefficients `c` with `sum_i c_i * rows[i] == target`, if any exist.
pub fn solve_combination(rows: &[Vec<u32>], target: &[u32], dim: Dimension) -> Option<Vec<u32>> {
    let width = target.len();
    let m = rows.len();
    // Tag each row with a unit vector to track the combination.
    let mut aug: Vec<Vec<u32>> = rows
        .iter()
        .enumerate()
        .map(|(i, r)| {
            debug_assert_eq!(r.len(), width);
            let mut v = r.clone();
            v.extend((0..m).map(|j| u32::from(i == j)));
            v
        })
        .collect();
    let cols: Vec<usize> = (0..width).collect();
    let pivots = reduce_rows(&mut aug, &cols, dim);
    let mut residual: Vec<u32> = target.to_vec();
    residual.extend(std::iter::repeat_n(0, m));
    for (r, &col) in pivots.iter().enumerate() {
        let e = residual[col];
        if e != 0 {
            residual.add_scaled(&aug[r], dim.neg(e), dim);
        }
    }
    if residual[..width].iter().any(|&v| v != 0) {
        return None;
    }
    Some(residual[width..].iter().map(|&v| dim.neg(v)).collect())
}
