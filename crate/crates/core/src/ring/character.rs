//! Rational isotypic decomposition of lattices with an order-`n` automorphism.
//!
//! Over `Q`, `R(C_n) ⊗ Q` splits as a product of cyclotomic fields `Q(ζ_d)`, `d | n`. A
//! lattice `L` decomposes accordingly, and `mult_d(L) = rank ker Φ_d(T) / φ(d)` counts the
//! copies of `Q(ζ_d)`. Tensor products over `R(C_n)` multiply these counts componentwise.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::module::LatticeModule;
use crate::linalg::{rank, IntMatrix};

/// Coefficients of the `d`-th cyclotomic polynomial, lowest degree first.
pub fn cyclotomic(d: usize) -> Vec<BigInt> {
    assert!(d >= 1);
    // x^d - 1
    let mut num = vec![BigInt::zero(); d + 1];
    num[0] = BigInt::from(-1);
    num[d] = BigInt::one();
    for e in (1..d).filter(|e| d.is_multiple_of(*e)) {
        num = divide_monic(&num, &cyclotomic(e));
    }
    num
}

fn divide_monic(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let qd = rem.len() - 1 - dd;
    let mut q = vec![BigInt::zero(); qd + 1];
    for i in (0..=qd).rev() {
        let c = rem[i + dd].clone();
        if c.is_zero() {
            continue;
        }
        for (j, dj) in den.iter().enumerate() {
            rem[i + j] -= &c * dj;
        }
        q[i] = c;
    }
    debug_assert!(rem.iter().all(Zero::is_zero), "inexact cyclotomic division");
    q
}

pub fn euler_phi(d: usize) -> usize {
    (1..=d).filter(|k| gcd(*k, d) == 1).count()
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn eval_poly(coeffs: &[BigInt], t: &IntMatrix) -> IntMatrix {
    let n = t.rows();
    let mut acc = IntMatrix::zeros(n, n);
    for c in coeffs.iter().rev() {
        acc = (&acc * t).add(&IntMatrix::identity(n).scale(c));
    }
    acc
}

/// `d ↦ mult_d(L)` for every divisor `d` of the point-group order.
pub fn character_multiplicities(l: &LatticeModule) -> BTreeMap<usize, usize> {
    use super::module::ZModule;
    let n = l.group().order();
    let r = l.rank();
    (1..=n)
        .filter(|d| n.is_multiple_of(*d))
        .map(|d| {
            let k = r - rank(&eval_poly(&cyclotomic(d), l.action()));
            let phi = euler_phi(d);
            debug_assert_eq!(k % phi, 0);
            (d, k / phi)
        })
        .collect()
}
