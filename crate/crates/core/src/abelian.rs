//! Finitely generated abelian groups in invariant-factor form.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::linalg::{elementary_divisors, IntMatrix, Lattice};

/// `Z^free_rank ⊕ Z/d1 ⊕ ... ⊕ Z/dk` with `2 <= d1 | d2 | ... | dk`.
///
/// Values are only constructed in canonical form, so structural equality is isomorphism.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawGroup")]
pub struct FgAbGroup {
    free_rank: usize,
    #[serde(serialize_with = "ser_factors")]
    invariant_factors: Vec<BigInt>,
}

#[derive(Deserialize)]
struct RawGroup {
    free_rank: usize,
    #[serde(deserialize_with = "de_factors")]
    invariant_factors: Vec<BigInt>,
}

impl TryFrom<RawGroup> for FgAbGroup {
    type Error = String;

    fn try_from(raw: RawGroup) -> Result<Self, String> {
        let g = FgAbGroup::from_parts(raw.free_rank, raw.invariant_factors.clone());
        if g.invariant_factors != raw.invariant_factors {
            return Err(format!(
                "invariant factors {:?} are not in canonical form",
                raw.invariant_factors
                    .iter()
                    .map(ToString::to_string)
                    .collect::<Vec<_>>()
            ));
        }
        Ok(g)
    }
}

impl FgAbGroup {
    pub fn zero() -> Self {
        Self::free(0)
    }

    pub fn free(rank: usize) -> Self {
        FgAbGroup {
            free_rank: rank,
            invariant_factors: Vec::new(),
        }
    }

    pub fn cyclic(order: u64) -> Self {
        Self::from_parts(0, vec![BigInt::from(order)])
    }

    /// Canonicalizes `Z^free_rank ⊕ (⊕ Z/t)` for arbitrary torsion orders `t`.
    /// A zero order contributes a free summand; orders of absolute value one vanish.
    pub fn from_parts(free_rank: usize, torsion: Vec<BigInt>) -> Self {
        let n = torsion.len();
        let mut m = IntMatrix::zeros(n, n);
        for (i, t) in torsion.into_iter().enumerate() {
            m[(i, i)] = t;
        }
        let nonzero = elementary_divisors(&m);
        Self::from_diagonal(free_rank + n - nonzero.len(), nonzero)
    }

    /// From a Smith diagonal that is already a divisibility chain.
    fn from_diagonal(free_rank: usize, diagonal: Vec<BigInt>) -> Self {
        FgAbGroup {
            free_rank,
            invariant_factors: diagonal.into_iter().filter(|d| !d.is_one()).collect(),
        }
    }

    /// `Z^rows / (column span of relations)`.
    pub fn cokernel(relations: &IntMatrix) -> Self {
        let nonzero = elementary_divisors(relations);
        Self::from_diagonal(relations.rows() - nonzero.len(), nonzero)
    }

    pub fn free_rank(&self) -> usize {
        self.free_rank
    }

    pub fn invariant_factors(&self) -> &[BigInt] {
        &self.invariant_factors
    }

    pub fn is_zero(&self) -> bool {
        self.free_rank == 0 && self.invariant_factors.is_empty()
    }

    pub fn is_free(&self) -> bool {
        self.invariant_factors.is_empty()
    }

    /// Order of the torsion subgroup.
    pub fn torsion_order(&self) -> BigInt {
        self.invariant_factors.iter().product()
    }

    pub fn torsion(&self) -> FgAbGroup {
        FgAbGroup {
            free_rank: 0,
            invariant_factors: self.invariant_factors.clone(),
        }
    }

    pub fn direct_sum(&self, other: &FgAbGroup) -> FgAbGroup {
        let mut t = self.invariant_factors.clone();
        t.extend(other.invariant_factors.iter().cloned());
        Self::from_parts(self.free_rank + other.free_rank, t)
    }

    pub fn sum<'a>(groups: impl IntoIterator<Item = &'a FgAbGroup>) -> FgAbGroup {
        let mut free = 0;
        let mut t = Vec::new();
        for g in groups {
            free += g.free_rank;
            t.extend(g.invariant_factors.iter().cloned());
        }
        Self::from_parts(free, t)
    }

    pub fn power(&self, k: usize) -> FgAbGroup {
        Self::sum(std::iter::repeat_n(self, k))
    }
}

/// `Z^ambient_rank / span(sub)`.
pub fn quotient_group(ambient_rank: usize, sub: &Lattice) -> FgAbGroup {
    assert_eq!(
        sub.ambient_rank(),
        ambient_rank,
        "sublattice lives in a different ambient lattice"
    );
    FgAbGroup::cokernel(sub.basis())
}

/// `(Hom_Z(G, Z), Ext_Z(G, Z))`.
pub fn hom_ext_z(g: &FgAbGroup) -> (FgAbGroup, FgAbGroup) {
    (FgAbGroup::free(g.free_rank), g.torsion())
}

impl fmt::Display for FgAbGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        // group equal factors: Z/2 ⊕ Z/2 prints as (Z/2)^2
        let mut i = 0;
        while i < self.invariant_factors.len() {
            let d = &self.invariant_factors[i];
            let mut j = i;
            while j < self.invariant_factors.len() && &self.invariant_factors[j] == d {
                j += 1;
            }
            match j - i {
                1 => parts.push(format!("Z/{d}")),
                k => parts.push(format!("(Z/{d})^{k}")),
            }
            i = j;
        }
        write!(f, "{}", parts.join(" ⊕ "))
    }
}

fn ser_factors<S: Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for x in v {
        match x.to_u64() {
            Some(small) => seq.serialize_element(&small)?,
            None => seq.serialize_element(&x.to_string())?,
        }
    }
    seq.end()
}

#[derive(Deserialize)]
#[serde(untagged)]
enum NumOrString {
    Num(u64),
    Str(String),
}

fn de_factors<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigInt>, D::Error> {
    let raw = Vec::<NumOrString>::deserialize(d)?;
    raw.into_iter()
        .map(|x| match x {
            NumOrString::Num(n) => Ok(BigInt::from(n)),
            NumOrString::Str(s) => s
                .parse::<BigInt>()
                .map_err(|e| serde::de::Error::custom(format!("bad integer `{s}`: {e}"))),
        })
        .collect()
}

/// Sum of free ranks, used for rank-level bookkeeping.
pub fn total_free_rank<'a>(groups: impl IntoIterator<Item = &'a FgAbGroup>) -> usize {
    groups.into_iter().map(FgAbGroup::free_rank).sum()
}

impl Default for FgAbGroup {
    fn default() -> Self {
        Self::zero()
    }
}
