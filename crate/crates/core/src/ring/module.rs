use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::{PointGroup, RingElement};
use crate::abelian::FgAbGroup;
use crate::error::{Error, Result};
use crate::linalg::{snf, IntMatrix};

/// Anything that can be viewed as a finitely generated abelian group with an order-`n`
/// automorphism: a set of "flattened" Z-generators, the η-action on them, and the Z-relations.
pub trait ZModule {
    fn group(&self) -> PointGroup;
    fn flat_rank(&self) -> usize;
    /// η acting on flattened generators (column `j` is the image of generator `j`).
    fn flat_action(&self) -> IntMatrix;
    /// Columns span the Z-relations among the flattened generators.
    fn flat_relations(&self) -> IntMatrix;

    fn flatten(&self) -> FgAbGroup {
        FgAbGroup::cokernel(&self.flat_relations())
    }
}

/// A finitely presented `R(C_n)`-module: `generators` free generators modulo `relations`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FpModule {
    group: PointGroup,
    generators: usize,
    relations: Vec<Vec<RingElement>>,
}

impl FpModule {
    pub fn new(
        group: PointGroup,
        generators: usize,
        relations: Vec<Vec<RingElement>>,
    ) -> Result<Self> {
        for (i, r) in relations.iter().enumerate() {
            if r.len() != generators {
                return Err(Error::Shape(format!(
                    "relation {i} has {} entries for {generators} generators",
                    r.len()
                )));
            }
            if let Some(bad) = r.iter().find(|e| e.order() != group.order()) {
                return Err(Error::GroupMismatch {
                    left: group.order(),
                    right: bad.order(),
                });
            }
        }
        Ok(FpModule {
            group,
            generators,
            relations,
        })
    }

    pub fn zero(group: PointGroup) -> Self {
        Self::free(group, 0)
    }

    pub fn free(group: PointGroup, k: usize) -> Self {
        FpModule {
            group,
            generators: k,
            relations: Vec::new(),
        }
    }

    /// `R(C_n)/(η^m - 1)`, i.e. `R(C_m)` with `R(C_n)` acting through restriction.
    pub fn restriction(group: PointGroup, m: usize) -> Result<Self> {
        Self::cyclic_sum(group, &[m])
    }

    /// `⊕ R(C_n)/(η^m - 1)` over the given orders.
    pub fn cyclic_sum(group: PointGroup, orders: &[usize]) -> Result<Self> {
        let n = group.order();
        let g = orders.len();
        let mut relations = Vec::new();
        for (i, &m) in orders.iter().enumerate() {
            group.check_divisor(m)?;
            if m < n {
                let mut r = vec![RingElement::zero(n); g];
                r[i] = RingElement::binomial(n, m);
                relations.push(r);
            }
        }
        Ok(FpModule {
            group,
            generators: g,
            relations,
        })
    }

    pub fn generators(&self) -> usize {
        self.generators
    }

    pub fn relations(&self) -> &[Vec<RingElement>] {
        &self.relations
    }

    pub fn is_free(&self) -> bool {
        self.relations
            .iter()
            .all(|r| r.iter().all(RingElement::is_zero))
    }

    pub fn direct_sum(parts: &[FpModule]) -> Result<FpModule> {
        let Some(first) = parts.first() else {
            return Err(Error::Shape("direct sum of no modules".into()));
        };
        let group = first.group;
        let n = group.order();
        let total: usize = parts.iter().map(|p| p.generators).sum();
        let mut relations = Vec::new();
        let mut offset = 0;
        for p in parts {
            group.ensure_same(p.group)?;
            for r in &p.relations {
                let mut row = vec![RingElement::zero(n); total];
                row[offset..offset + p.generators].clone_from_slice(r);
                relations.push(row);
            }
            offset += p.generators;
        }
        Ok(FpModule {
            group,
            generators: total,
            relations,
        })
    }

    /// `self ⊗_R other`; generator `(s, t)` has index `s * other.generators + t`.
    pub fn tensor(&self, other: &FpModule) -> Result<FpModule> {
        self.group.ensure_same(other.group)?;
        let n = self.group.order();
        let (a, b) = (self.generators, other.generators);
        let mut relations =
            Vec::with_capacity(self.relations.len() * b + other.relations.len() * a);
        for r in &self.relations {
            for t in 0..b {
                let mut row = vec![RingElement::zero(n); a * b];
                for (s, e) in r.iter().enumerate() {
                    row[s * b + t] = e.clone();
                }
                relations.push(row);
            }
        }
        for q in &other.relations {
            for s in 0..a {
                let mut row = vec![RingElement::zero(n); a * b];
                for (t, e) in q.iter().enumerate() {
                    row[s * b + t] = e.clone();
                }
                relations.push(row);
            }
        }
        Ok(FpModule {
            group: self.group,
            generators: a * b,
            relations,
        })
    }

    /// `M / (η^k - 1) M`.
    pub fn quotient_by_ideal(&self, k: usize) -> Result<FpModule> {
        let n = self.group.order();
        if k > n {
            return Err(Error::IdealExponent { k, n });
        }
        let mut out = self.clone();
        let gen = RingElement::binomial(n, k);
        if gen.is_zero() {
            return Ok(out);
        }
        for i in 0..self.generators {
            let mut row = vec![RingElement::zero(n); self.generators];
            row[i] = gen.clone();
            out.relations.push(row);
        }
        Ok(out)
    }

    /// Effective cyclic orders when every relation is `±(η^m - 1)` on a single generator.
    fn cyclic_orders(&self) -> Option<Vec<usize>> {
        let n = self.group.order();
        let mut orders = vec![n; self.generators];
        for r in &self.relations {
            let nz: Vec<usize> = (0..r.len()).filter(|&i| !r[i].is_zero()).collect();
            match nz.as_slice() {
                [] => {}
                [i] => {
                    let m = r[*i].binomial_exponent()?;
                    orders[*i] = orders[*i].gcd(&m);
                }
                _ => return None,
            }
        }
        Some(orders)
    }

    pub fn lattice_form(&self) -> Result<LatticeForm> {
        if let Some(orders) = self.cyclic_orders() {
            return Ok(cyclic_lattice_form(self.group, &orders));
        }
        generic_lattice_form(self)
    }
}

impl ZModule for FpModule {
    fn group(&self) -> PointGroup {
        self.group
    }

    fn flat_rank(&self) -> usize {
        self.generators * self.group.order()
    }

    fn flat_action(&self) -> IntMatrix {
        let n = self.group.order();
        let block = cyclic_shift(n);
        IntMatrix::block_diag(&vec![block; self.generators])
    }

    fn flat_relations(&self) -> IntMatrix {
        let n = self.group.order();
        let rows = self.flat_rank();
        let mut columns = Vec::with_capacity(self.relations.len() * n);
        for r in &self.relations {
            for p in 0..n {
                let mut col = vec![BigInt::zero(); rows];
                for (i, e) in r.iter().enumerate() {
                    for (k, c) in e.coords().iter().enumerate() {
                        if !c.is_zero() {
                            col[i * n + (k + p) % n] += c;
                        }
                    }
                }
                columns.push(col);
            }
        }
        IntMatrix::from_columns(rows, &columns)
    }
}

/// Permutation matrix of η on the basis `1, η, ..., η^(m-1)` of `Z[η]/(η^m - 1)`.
pub fn cyclic_shift(m: usize) -> IntMatrix {
    IntMatrix::from_fn(m, m, |i, j| {
        if i == (j + 1) % m {
            BigInt::one()
        } else {
            BigInt::zero()
        }
    })
}

/// A free abelian group `Z^rank` with an automorphism whose order divides `n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeModule {
    group: PointGroup,
    action: IntMatrix,
}

impl LatticeModule {
    pub fn new(group: PointGroup, action: IntMatrix) -> Result<Self> {
        if !action.is_square() {
            return Err(Error::Shape(format!(
                "action must be square, got {:?}",
                action.shape()
            )));
        }
        if action.pow(group.order()) != IntMatrix::identity(action.rows()) {
            return Err(Error::ActionOrder {
                order: group.order(),
            });
        }
        Ok(LatticeModule { group, action })
    }

    pub fn trivial(group: PointGroup, rank: usize) -> Self {
        LatticeModule {
            group,
            action: IntMatrix::identity(rank),
        }
    }

    pub fn rank(&self) -> usize {
        self.action.rows()
    }

    pub fn action(&self) -> &IntMatrix {
        &self.action
    }
}

impl ZModule for LatticeModule {
    fn group(&self) -> PointGroup {
        self.group
    }

    fn flat_rank(&self) -> usize {
        self.rank()
    }

    fn flat_action(&self) -> IntMatrix {
        self.action.clone()
    }

    fn flat_relations(&self) -> IntMatrix {
        IntMatrix::zeros(self.rank(), 0)
    }
}

/// Either module representation; the endpoints of a [`ModuleMap`](super::ModuleMap).
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AnyModule {
    Fp(FpModule),
    Lattice(LatticeModule),
}

impl AnyModule {
    pub fn lattice_form(&self) -> Result<LatticeForm> {
        match self {
            AnyModule::Fp(m) => m.lattice_form(),
            AnyModule::Lattice(l) => Ok(LatticeForm {
                lattice: l.clone(),
                coords: IntMatrix::identity(l.rank()),
                section: IntMatrix::identity(l.rank()),
            }),
        }
    }

    pub fn as_fp(&self) -> Option<&FpModule> {
        match self {
            AnyModule::Fp(m) => Some(m),
            AnyModule::Lattice(_) => None,
        }
    }
}

impl ZModule for AnyModule {
    fn group(&self) -> PointGroup {
        match self {
            AnyModule::Fp(m) => m.group(),
            AnyModule::Lattice(l) => l.group(),
        }
    }

    fn flat_rank(&self) -> usize {
        match self {
            AnyModule::Fp(m) => m.flat_rank(),
            AnyModule::Lattice(l) => l.flat_rank(),
        }
    }

    fn flat_action(&self) -> IntMatrix {
        match self {
            AnyModule::Fp(m) => m.flat_action(),
            AnyModule::Lattice(l) => l.flat_action(),
        }
    }

    fn flat_relations(&self) -> IntMatrix {
        match self {
            AnyModule::Fp(m) => m.flat_relations(),
            AnyModule::Lattice(l) => l.flat_relations(),
        }
    }
}

impl From<FpModule> for AnyModule {
    fn from(m: FpModule) -> Self {
        AnyModule::Fp(m)
    }
}

impl From<LatticeModule> for AnyModule {
    fn from(l: LatticeModule) -> Self {
        AnyModule::Lattice(l)
    }
}

/// A Z-basis of a torsion-free module.
///
/// `coords` maps flattened generators onto the basis and kills exactly the relations;
/// `section` lifts basis vectors back, with `coords * section = I`.
#[derive(Clone, Debug)]
pub struct LatticeForm {
    pub lattice: LatticeModule,
    pub coords: IntMatrix,
    pub section: IntMatrix,
}

fn cyclic_lattice_form(group: PointGroup, orders: &[usize]) -> LatticeForm {
    let n = group.order();
    let rank: usize = orders.iter().sum();
    let flat = orders.len() * n;
    let mut coords = IntMatrix::zeros(rank, flat);
    let mut section = IntMatrix::zeros(flat, rank);
    let mut offset = 0;
    for (i, &o) in orders.iter().enumerate() {
        for k in 0..n {
            coords[(offset + k % o, i * n + k)] = BigInt::one();
        }
        for j in 0..o {
            section[(i * n + j, offset + j)] = BigInt::one();
        }
        offset += o;
    }
    let blocks: Vec<IntMatrix> = orders.iter().map(|&o| cyclic_shift(o)).collect();
    LatticeForm {
        lattice: LatticeModule {
            group,
            action: IntMatrix::block_diag(&blocks),
        },
        coords,
        section,
    }
}

fn generic_lattice_form(m: &FpModule) -> Result<LatticeForm> {
    let flat = m.flat_rank();
    let rel = m.flat_relations();
    let s = snf(&rel);
    let diag = s.diagonal();
    let rho = diag.iter().filter(|d| !d.is_zero()).count();
    if diag.iter().any(|d| !d.is_zero() && !d.is_one()) {
        return Err(Error::Torsion {
            group: FgAbGroup::cokernel(&rel).to_string(),
        });
    }
    let coords = s.u.submatrix(rho..flat, 0..flat);
    let section = s.u_inv.submatrix(0..flat, rho..flat);
    let action = &(&coords * &m.flat_action()) * &section;
    Ok(LatticeForm {
        lattice: LatticeModule {
            group: m.group,
            action,
        },
        coords,
        section,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c4() -> PointGroup {
        PointGroup::cyclic(4)
    }

    #[test]
    fn restriction_examples() {
        let m = FpModule::restriction(c4(), 2).unwrap();
        assert_eq!(m.generators(), 1);
        assert_eq!(m.relations()[0][0], RingElement::binomial(4, 2));
        assert_eq!(m.flatten(), FgAbGroup::free(2));
        assert_eq!(
            FpModule::restriction(c4(), 1).unwrap().flatten(),
            FgAbGroup::free(1)
        );
        let full = FpModule::restriction(c4(), 4).unwrap();
        assert!(full.relations().is_empty());
        assert!(matches!(
            FpModule::restriction(c4(), 3),
            Err(Error::NotADivisor { n: 4, m: 3 })
        ));
    }

    #[test]
    fn free_module_examples() {
        assert_eq!(FpModule::free(c4(), 0).flatten(), FgAbGroup::zero());
        assert_eq!(FpModule::free(c4(), 1).flatten(), FgAbGroup::free(4));
        assert_eq!(
            FpModule::free(PointGroup::cyclic(2), 3).flatten(),
            FgAbGroup::free(6)
        );
    }

    #[test]
    fn augmentation_with_doubling_is_z2() {
        let n = 4;
        let m = FpModule::new(
            c4(),
            1,
            vec![
                vec![RingElement::binomial(n, 1)],
                vec![RingElement::from_i64(&[2, 0, 0, 0])],
            ],
        )
        .unwrap();
        assert_eq!(m.flatten(), FgAbGroup::cyclic(2));
    }

    #[test]
    fn quotient_by_ideal_examples() {
        let r = FpModule::free(c4(), 1);
        assert_eq!(
            r.quotient_by_ideal(1).unwrap().flatten(),
            FgAbGroup::free(1)
        );
        assert_eq!(
            r.quotient_by_ideal(2).unwrap().flatten(),
            FgAbGroup::free(2)
        );
        assert_eq!(r.quotient_by_ideal(4).unwrap(), r);
        assert!(r.quotient_by_ideal(5).is_err());
    }

    #[test]
    fn tensor_of_restrictions() {
        let m = FpModule::restriction(c4(), 2).unwrap();
        assert_eq!(m.tensor(&m).unwrap().flatten(), FgAbGroup::free(2));
        let z = FpModule::restriction(c4(), 1).unwrap();
        assert_eq!(m.tensor(&z).unwrap().flatten(), FgAbGroup::free(1));
        assert!(m.tensor(&FpModule::free(PointGroup::cyclic(2), 1)).is_err());
    }

    #[test]
    fn lattice_forms_agree() {
        let m = FpModule::cyclic_sum(c4(), &[4, 2, 1]).unwrap();
        let canon = m.lattice_form().unwrap();
        let generic = generic_lattice_form(&m).unwrap();
        assert_eq!(canon.lattice.rank(), 7);
        assert_eq!(generic.lattice.rank(), 7);
        for f in [&canon, &generic] {
            assert_eq!(&f.coords * &f.section, IntMatrix::identity(7));
            assert!((&f.coords * &m.flat_relations()).is_zero());
        }
    }

    #[test]
    fn torsion_has_no_lattice_form() {
        let m = FpModule::new(c4(), 1, vec![vec![RingElement::from_i64(&[2, 0, 0, 0])]]).unwrap();
        assert!(matches!(m.lattice_form(), Err(Error::Torsion { .. })));
    }

    #[test]
    fn lattice_module_checks_order() {
        let rot = IntMatrix::from_i64(2, 2, &[0, -1, 1, 0]);
        assert!(LatticeModule::new(c4(), rot.clone()).is_ok());
        assert!(LatticeModule::new(PointGroup::cyclic(2), rot).is_err());
    }
}
