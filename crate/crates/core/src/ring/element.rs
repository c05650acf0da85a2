use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The finite cyclic point group `C_n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "usize", into = "usize")]
pub struct PointGroup(usize);

impl PointGroup {
    pub fn new(order: usize) -> Result<Self> {
        if order == 0 {
            return Err(Error::Shape("point group order must be at least 1".into()));
        }
        Ok(PointGroup(order))
    }

    pub fn cyclic(order: usize) -> Self {
        Self::new(order).expect("point group order must be at least 1")
    }

    pub fn order(self) -> usize {
        self.0
    }

    pub fn divisors(self) -> Vec<usize> {
        (1..=self.0).filter(|d| self.0.is_multiple_of(*d)).collect()
    }

    pub fn check_divisor(self, m: usize) -> Result<()> {
        if m == 0 || !self.0.is_multiple_of(m) {
            return Err(Error::NotADivisor { n: self.0, m });
        }
        Ok(())
    }

    pub fn ensure_same(self, other: PointGroup) -> Result<()> {
        if self != other {
            return Err(Error::GroupMismatch {
                left: self.0,
                right: other.0,
            });
        }
        Ok(())
    }
}

impl TryFrom<usize> for PointGroup {
    type Error = Error;

    fn try_from(n: usize) -> Result<Self> {
        Self::new(n)
    }
}

impl From<PointGroup> for usize {
    fn from(g: PointGroup) -> usize {
        g.0
    }
}

/// An element of `R(C_n) = Z[η]/(η^n - 1)`, stored by its coordinates on `1, η, ..., η^(n-1)`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RingElement {
    coords: Vec<BigInt>,
}

impl RingElement {
    pub fn zero(n: usize) -> Self {
        RingElement {
            coords: vec![BigInt::zero(); n],
        }
    }

    pub fn one(n: usize) -> Self {
        Self::monomial(n, 0)
    }

    /// `η^k`, exponent taken mod `n`.
    pub fn monomial(n: usize, k: usize) -> Self {
        let mut r = Self::zero(n);
        r.coords[k % n] = BigInt::one();
        r
    }

    /// `η^k - 1`, which is zero when `n | k`.
    pub fn binomial(n: usize, k: usize) -> Self {
        let mut r = Self::monomial(n, k);
        r.coords[0] -= 1;
        r
    }

    pub fn from_coords(coords: Vec<BigInt>) -> Self {
        assert!(
            !coords.is_empty(),
            "ring element needs at least one coordinate"
        );
        RingElement { coords }
    }

    pub fn from_i64(coords: &[i64]) -> Self {
        Self::from_coords(coords.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn order(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[BigInt] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    pub fn multiply(&self, other: &RingElement) -> Result<RingElement> {
        let n = self.order();
        if other.order() != n {
            return Err(Error::GroupMismatch {
                left: n,
                right: other.order(),
            });
        }
        let mut out = Self::zero(n);
        for (i, a) in self.coords.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coords.iter().enumerate() {
                if !b.is_zero() {
                    out.coords[(i + j) % n] += a * b;
                }
            }
        }
        Ok(out)
    }

    pub fn add(&self, other: &RingElement) -> RingElement {
        assert_eq!(self.order(), other.order());
        RingElement {
            coords: self
                .coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn neg(&self) -> RingElement {
        RingElement {
            coords: self.coords.iter().map(|a| -a).collect(),
        }
    }

    /// `η^k * self`.
    pub fn shift(&self, k: usize) -> RingElement {
        let n = self.order();
        let mut out = Self::zero(n);
        for (i, a) in self.coords.iter().enumerate() {
            out.coords[(i + k) % n] = a.clone();
        }
        out
    }

    /// Returns `m` when `self == ±(η^m - 1)` with `0 < m < n`.
    pub(crate) fn binomial_exponent(&self) -> Option<usize> {
        let n = self.order();
        let nonzero: Vec<usize> = (0..n).filter(|&i| !self.coords[i].is_zero()).collect();
        if nonzero.len() != 2 || nonzero[0] != 0 {
            return None;
        }
        let m = nonzero[1];
        let (c0, cm) = (&self.coords[0], &self.coords[m]);
        let unit_pair = c0.abs().is_one() && cm.abs().is_one() && (c0 + cm).is_zero();
        unit_pair.then_some(m)
    }
}

impl fmt::Debug for RingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for RingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut wrote = false;
        for (k, c) in self.coords.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() {
                "-"
            } else if wrote {
                "+"
            } else {
                ""
            };
            let mag = c.abs();
            let coeff = if mag.is_one() && k > 0 {
                String::new()
            } else {
                mag.to_string()
            };
            let mono = match k {
                0 => String::new(),
                1 => "η".to_string(),
                _ => format!("η^{k}"),
            };
            write!(f, "{sign}{coeff}{mono}")?;
            wrote = true;
        }
        if !wrote {
            write!(f, "0")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn multiplication_examples() {
        let eta = RingElement::monomial(4, 1);
        let eta3 = RingElement::monomial(4, 3);
        assert_eq!(eta.multiply(&eta3).unwrap(), RingElement::one(4));

        let a = RingElement::from_i64(&[-1, 0, 1, 0]);
        let b = RingElement::from_i64(&[1, 0, 1, 0]);
        assert!(a.multiply(&b).unwrap().is_zero());

        let s = RingElement::from_i64(&[1, 1]);
        assert_eq!(s.multiply(&s).unwrap(), RingElement::from_i64(&[2, 2]));
    }

    #[test]
    fn order_mismatch() {
        let a = RingElement::one(4);
        let b = RingElement::one(2);
        assert!(matches!(a.multiply(&b), Err(Error::GroupMismatch { .. })));
    }

    #[test]
    fn binomial_detection() {
        assert_eq!(RingElement::binomial(4, 2).binomial_exponent(), Some(2));
        assert_eq!(
            RingElement::binomial(4, 2).neg().binomial_exponent(),
            Some(2)
        );
        assert_eq!(RingElement::binomial(4, 4).binomial_exponent(), None);
        assert_eq!(
            RingElement::from_i64(&[1, 0, 1, 0]).binomial_exponent(),
            None
        );
    }

    #[test]
    fn display() {
        assert_eq!(RingElement::binomial(4, 2).to_string(), "η^2-1");
        assert_eq!(RingElement::from_i64(&[0, -2, 0, 1]).to_string(), "η^3-2η");
        assert_eq!(RingElement::zero(3).to_string(), "0");
    }
}
