use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::{snf, IntMatrix};
use crate::error::{Error, Result};

/// A sublattice of `Z^ambient_rank`, given by a basis of linearly independent columns.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lattice {
    ambient_rank: usize,
    basis: IntMatrix,
}

impl Lattice {
    /// Checks that the columns are independent.
    pub fn new(basis: IntMatrix) -> Result<Self> {
        let e = ColumnEchelon::new(&basis);
        if e.rank != basis.cols() {
            return Err(Error::Shape(format!(
                "{} basis columns span a lattice of rank {}",
                basis.cols(),
                e.rank
            )));
        }
        Ok(Lattice {
            ambient_rank: basis.rows(),
            basis,
        })
    }

    pub(crate) fn from_independent(basis: IntMatrix) -> Self {
        Lattice {
            ambient_rank: basis.rows(),
            basis,
        }
    }

    pub fn zero(ambient_rank: usize) -> Self {
        Lattice {
            ambient_rank,
            basis: IntMatrix::zeros(ambient_rank, 0),
        }
    }

    pub fn ambient_rank(&self) -> usize {
        self.ambient_rank
    }

    pub fn rank(&self) -> usize {
        self.basis.cols()
    }

    pub fn basis(&self) -> &IntMatrix {
        &self.basis
    }

    pub fn contains(&self, v: &[BigInt]) -> bool {
        solve_exact(&self.basis, v).is_some()
    }
}

/// Column-style echelon form `a * v = e`, with `v` unimodular.
///
/// Column `k < rank` of `e` has its leading nonzero entry in row `pivot_rows[k]`, the rows
/// are strictly increasing, and every column from `rank` on is zero.
#[derive(Clone, Debug)]
pub struct ColumnEchelon {
    pub e: IntMatrix,
    pub v: IntMatrix,
    pub pivot_rows: Vec<usize>,
    pub rank: usize,
}

impl ColumnEchelon {
    pub fn new(a: &IntMatrix) -> Self {
        let (rows, cols) = a.shape();
        let mut e = a.clone();
        let mut v = IntMatrix::identity(cols);
        let mut pivot_rows = Vec::new();
        let mut p = 0;
        for i in 0..rows {
            if p == cols {
                break;
            }
            loop {
                // smallest nonzero |e[i, j]| for j >= p
                let mut best: Option<(usize, BigInt)> = None;
                for j in p..cols {
                    let x = &e[(i, j)];
                    if !x.is_zero() {
                        let ax = x.abs();
                        if best.as_ref().is_none_or(|(_, b)| ax < *b) {
                            best = Some((j, ax));
                        }
                    }
                }
                let Some((j, _)) = best else { break };
                e.swap_cols(p, j);
                v.swap_cols(p, j);
                let piv = e[(i, p)].clone();
                let mut done = true;
                for j in p + 1..cols {
                    let x = &e[(i, j)];
                    if x.is_zero() {
                        continue;
                    }
                    let q = -(x / &piv);
                    e.add_col_multiple(j, p, &q);
                    v.add_col_multiple(j, p, &q);
                    if !e[(i, j)].is_zero() {
                        done = false;
                    }
                }
                if done {
                    pivot_rows.push(i);
                    p += 1;
                    break;
                }
            }
        }
        ColumnEchelon {
            e,
            v,
            pivot_rows,
            rank: p,
        }
    }

    /// Some `x` with `a * x = b`, or `None` when no integer solution exists.
    pub fn solve(&self, b: &[BigInt]) -> Option<Vec<BigInt>> {
        let rows = self.e.rows();
        assert_eq!(b.len(), rows, "right-hand side has the wrong length");
        let mut r = b.to_vec();
        let mut y = Vec::with_capacity(self.rank);
        let mut next_row = 0;
        for (k, &pr) in self.pivot_rows.iter().enumerate() {
            if r[next_row..pr].iter().any(|x| !x.is_zero()) {
                return None;
            }
            let piv = &self.e[(pr, k)];
            let (q, rem) = r[pr].div_rem(piv);
            if !rem.is_zero() {
                return None;
            }
            if !q.is_zero() {
                for (i, ri) in r.iter_mut().enumerate().skip(pr) {
                    let c = &self.e[(i, k)];
                    if !c.is_zero() {
                        *ri -= &q * c;
                    }
                }
            }
            y.push(q);
            next_row = pr + 1;
        }
        if r[next_row..].iter().any(|x| !x.is_zero()) {
            return None;
        }
        let cols = self.v.rows();
        Some(
            (0..cols)
                .map(|i| {
                    y.iter()
                        .enumerate()
                        .filter(|(_, yk)| !yk.is_zero())
                        .map(|(k, yk)| &self.v[(i, k)] * yk)
                        .sum()
                })
                .collect(),
        )
    }

    pub fn kernel(&self) -> Lattice {
        let cols = self.v.cols();
        Lattice::from_independent(self.v.submatrix(0..self.v.rows(), self.rank..cols))
    }

    pub fn image(&self) -> Lattice {
        Lattice::from_independent(self.e.submatrix(0..self.e.rows(), 0..self.rank))
    }
}

pub fn rank(a: &IntMatrix) -> usize {
    ColumnEchelon::new(a).rank
}

/// Basis of `{x in Z^cols : a x = 0}`.
pub fn kernel_lattice(a: &IntMatrix) -> Lattice {
    ColumnEchelon::new(a).kernel()
}

/// Basis of the column span of `a`.
pub fn image_lattice(a: &IntMatrix) -> Lattice {
    ColumnEchelon::new(a).image()
}

pub fn solve_exact(a: &IntMatrix, b: &[BigInt]) -> Option<Vec<BigInt>> {
    assert_eq!(b.len(), a.rows(), "right-hand side has the wrong length");
    ColumnEchelon::new(a).solve(b)
}

/// Solves `a x = b` for every column of `b`; `None` if any column has no solution.
pub fn solve_columns(a: &IntMatrix, b: &IntMatrix) -> Option<IntMatrix> {
    let e = ColumnEchelon::new(a);
    let mut out = Vec::with_capacity(b.cols());
    for c in b.columns() {
        out.push(e.solve(&c)?);
    }
    Some(IntMatrix::from_columns(a.cols(), &out))
}

/// Whether every column of `b` lies in the column span of `a`.
pub fn spans(a: &IntMatrix, b: &IntMatrix) -> bool {
    if b.is_zero() {
        return true;
    }
    let e = ColumnEchelon::new(a);
    b.columns().all(|c| e.solve(&c).is_some())
}

/// Diagonal of the Smith form of `a`, truncated to its nonzero part.
pub(crate) fn elementary_divisors(a: &IntMatrix) -> Vec<BigInt> {
    snf::snf_diagonal(a)
        .into_iter()
        .filter(|x| !x.is_zero())
        .collect()
}
