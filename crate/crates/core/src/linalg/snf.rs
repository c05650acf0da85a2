//! Smith normal form with unimodular transforms.
//!
//! Pivoting always takes the entry of smallest nonzero absolute value in the active
//! submatrix, breaking ties by the lowest `(row, col)`, so transforms are reproducible.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::IntMatrix;

/// `u * a * v == d` with `u`, `v` unimodular and `d` diagonal in divisibility order.
///
/// `u_inv` and `v_inv` are the exact inverses of `u` and `v`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SnfDecomposition {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
    pub u_inv: IntMatrix,
    pub v_inv: IntMatrix,
}

impl SnfDecomposition {
    /// Diagonal entries `d[0,0], d[1,1], ...`, length `min(rows, cols)`.
    pub fn diagonal(&self) -> Vec<BigInt> {
        diagonal_of(&self.d)
    }

    pub fn rank(&self) -> usize {
        self.diagonal().iter().filter(|x| !x.is_zero()).count()
    }
}

fn diagonal_of(d: &IntMatrix) -> Vec<BigInt> {
    (0..d.rows().min(d.cols()))
        .map(|i| d[(i, i)].clone())
        .collect()
}

pub fn snf(a: &IntMatrix) -> SnfDecomposition {
    let mut w = Worker::new(a.clone(), true);
    w.run();
    let t = w.transforms.expect("transforms tracked");
    SnfDecomposition {
        u: t.u,
        d: w.a,
        v: t.v,
        u_inv: t.u_inv,
        v_inv: t.v_inv,
    }
}

/// Only the diagonal of the Smith form; skips the transform bookkeeping.
pub fn snf_diagonal(a: &IntMatrix) -> Vec<BigInt> {
    let mut w = Worker::new(a.clone(), false);
    w.run();
    diagonal_of(&w.a)
}

struct Transforms {
    u: IntMatrix,
    u_inv: IntMatrix,
    v: IntMatrix,
    v_inv: IntMatrix,
}

struct Worker {
    a: IntMatrix,
    transforms: Option<Transforms>,
}

impl Worker {
    fn new(a: IntMatrix, track: bool) -> Self {
        let (r, c) = a.shape();
        let transforms = track.then(|| Transforms {
            u: IntMatrix::identity(r),
            u_inv: IntMatrix::identity(r),
            v: IntMatrix::identity(c),
            v_inv: IntMatrix::identity(c),
        });
        Worker { a, transforms }
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        self.a.swap_rows(i, j);
        if let Some(t) = &mut self.transforms {
            t.u.swap_rows(i, j);
            t.u_inv.swap_cols(i, j);
        }
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        self.a.swap_cols(i, j);
        if let Some(t) = &mut self.transforms {
            t.v.swap_cols(i, j);
            t.v_inv.swap_rows(i, j);
        }
    }

    /// row[target] += k * row[source]
    fn add_row(&mut self, target: usize, source: usize, k: &BigInt) {
        self.a.add_row_multiple(target, source, k);
        if let Some(t) = &mut self.transforms {
            t.u.add_row_multiple(target, source, k);
            t.u_inv.add_col_multiple(source, target, &-k);
        }
    }

    /// col[target] += k * col[source]
    fn add_col(&mut self, target: usize, source: usize, k: &BigInt) {
        self.a.add_col_multiple(target, source, k);
        if let Some(t) = &mut self.transforms {
            t.v.add_col_multiple(target, source, k);
            t.v_inv.add_row_multiple(source, target, &-k);
        }
    }

    fn negate_row(&mut self, i: usize) {
        self.a.negate_row(i);
        if let Some(t) = &mut self.transforms {
            t.u.negate_row(i);
            t.u_inv.negate_col(i);
        }
    }

    fn smallest_in_block(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize, BigInt)> = None;
        for i in t..self.a.rows() {
            for j in t..self.a.cols() {
                let x = &self.a[(i, j)];
                if x.is_zero() {
                    continue;
                }
                let ax = x.abs();
                if best.as_ref().is_none_or(|(_, _, b)| ax < *b) {
                    best = Some((i, j, ax));
                }
            }
        }
        best.map(|(i, j, _)| (i, j))
    }

    /// Smallest nonzero entry in row `t` or column `t` of the active block.
    fn smallest_in_cross(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize, BigInt)> = None;
        let mut consider = |i: usize, j: usize, x: &BigInt| {
            if x.is_zero() {
                return;
            }
            let ax = x.abs();
            let better = match &best {
                None => true,
                Some((bi, bj, b)) => ax < *b || (ax == *b && (i, j) < (*bi, *bj)),
            };
            if better {
                best = Some((i, j, ax));
            }
        };
        for i in t..self.a.rows() {
            consider(i, t, &self.a[(i, t)]);
        }
        for j in t + 1..self.a.cols() {
            consider(t, j, &self.a[(t, j)]);
        }
        best.map(|(i, j, _)| (i, j))
    }

    fn run(&mut self) {
        let (rows, cols) = self.a.shape();
        let steps = rows.min(cols);
        let mut t = 0;
        while t < steps {
            let Some((pi, pj)) = self.smallest_in_block(t) else {
                break;
            };
            self.swap_rows(t, pi);
            self.swap_cols(t, pj);
            loop {
                let p = self.a[(t, t)].clone();
                let mut clean = true;
                for i in t + 1..rows {
                    let x = &self.a[(i, t)];
                    if x.is_zero() {
                        continue;
                    }
                    let q = x / &p;
                    if !q.is_zero() {
                        self.add_row(i, t, &-q);
                    }
                    if !self.a[(i, t)].is_zero() {
                        clean = false;
                    }
                }
                for j in t + 1..cols {
                    let x = &self.a[(t, j)];
                    if x.is_zero() {
                        continue;
                    }
                    let q = x / &p;
                    if !q.is_zero() {
                        self.add_col(j, t, &-q);
                    }
                    if !self.a[(t, j)].is_zero() {
                        clean = false;
                    }
                }
                if !clean {
                    let (i, j) = self.smallest_in_cross(t).expect("pivot row is nonzero");
                    self.swap_rows(t, i);
                    self.swap_cols(t, j);
                    continue;
                }
                // Pivot must divide the whole remaining block.
                let offender = (t + 1..rows)
                    .flat_map(|i| (t + 1..cols).map(move |j| (i, j)))
                    .find(|&(i, j)| !self.a[(i, j)].is_multiple_of(&p));
                match offender {
                    Some((i, _)) => self.add_row(t, i, &BigInt::one()),
                    None => break,
                }
            }
            if self.a[(t, t)].is_negative() {
                self.negate_row(t);
            }
            t += 1;
        }
    }
}
