//! Gauss-Jordan elimination over exact rationals.

use crate::scalar::ExactScalar;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearSolution {
    /// A particular solution with every free variable set to zero.
    pub particular: Vec<ExactScalar>,
    pub rank: usize,
    pub nullity: usize,
}

/// Solves `a x = b` for `ncols` unknowns. Returns `None` when the system is inconsistent.
pub fn solve(a: &[Vec<ExactScalar>], b: &[ExactScalar], ncols: usize) -> Option<LinearSolution> {
    assert_eq!(a.len(), b.len(), "row count");
    let mut rows: Vec<Vec<ExactScalar>> = a
        .iter()
        .zip(b)
        .map(|(r, v)| {
            assert_eq!(r.len(), ncols, "row length");
            let mut row = r.clone();
            row.push(v.clone());
            row
        })
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].inv().expect("nonzero pivot");
        for x in rows[r].iter_mut() {
            *x *= &inv;
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, y) in row.iter_mut().zip(&pivot_row) {
                if !y.is_zero() {
                    *x -= &f * y;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    if rows[r..].iter().any(|row| !row[ncols].is_zero()) {
        return None;
    }
    let mut particular = vec![ExactScalar::zero(); ncols];
    for (i, &c) in pivots.iter().enumerate() {
        particular[c] = rows[i][ncols].clone();
    }
    Some(LinearSolution { particular, rank: pivots.len(), nullity: ncols - pivots.len() })
}
