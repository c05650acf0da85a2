//! Cycles modulo boundaries for complexes of presented abelian groups.
//!
//! A spot in a complex is `C = Z^c / rel`, with an outgoing map `D_out : Z^c → Z^t`
//! landing in `Z^t / rel_next` and an incoming map `D_in` landing in `Z^c`. Cycles are the
//! `x` with `D_out x ∈ span(rel_next)`; boundaries are `span(D_in) + span(rel)`.

use num_traits::{One, Zero};

use crate::abelian::FgAbGroup;
use crate::error::{Error, Result};
use crate::linalg::{image_lattice, kernel_lattice, snf, ColumnEchelon, IntMatrix};
use crate::ring::{LatticeModule, PointGroup};

#[derive(Clone, Debug)]
pub struct Subquotient {
    /// Basis of the cycle lattice, `c x s`.
    pub cycles: IntMatrix,
    /// Boundary generators in cycle coordinates, `s x b`.
    pub boundaries: IntMatrix,
}

pub struct Spot<'a> {
    pub rank: usize,
    pub relations: &'a IntMatrix,
    pub outgoing: Option<(&'a IntMatrix, &'a IntMatrix)>,
    pub incoming: Option<&'a IntMatrix>,
}

impl Spot<'_> {
    pub fn subquotient(&self) -> Result<Subquotient> {
        let c = self.rank;
        let cycles = match self.outgoing {
            None => IntMatrix::identity(c),
            Some((d, rel_next)) if rel_next.cols() == 0 => kernel_lattice(d).basis().clone(),
            Some((d, rel_next)) => {
                let k = kernel_lattice(&d.hstack(rel_next));
                let projected = k.basis().submatrix(0..c, 0..k.rank());
                image_lattice(&projected).basis().clone()
            }
        };
        let gens = match self.incoming {
            Some(d_in) => d_in.hstack(self.relations),
            None => self.relations.clone(),
        };
        let ech = ColumnEchelon::new(&cycles);
        let mut coords = Vec::with_capacity(gens.cols());
        for col in gens.columns() {
            if col.iter().all(Zero::is_zero) {
                continue;
            }
            let x = ech.solve(&col).ok_or_else(|| {
                Error::Shape("a boundary is not a cycle; the maps do not compose to zero".into())
            })?;
            coords.push(x);
        }
        Ok(Subquotient {
            boundaries: IntMatrix::from_columns(cycles.cols(), &coords),
            cycles,
        })
    }
}

/// A torsion-free subquotient with its induced automorphism.
#[derive(Clone, Debug)]
pub struct LatticeQuotient {
    pub module: LatticeModule,
    /// Lifts of the quotient basis into the ambient `Z^c`, `c x r`.
    pub lift: IntMatrix,
}

impl Subquotient {
    pub fn group(&self) -> FgAbGroup {
        FgAbGroup::cokernel(&self.boundaries)
    }

    /// Packages the quotient as a lattice with the automorphism induced by `action`
    /// (which must preserve both cycles and boundaries).
    pub fn lattice_quotient(
        &self,
        group: PointGroup,
        action: &IntMatrix,
    ) -> Result<LatticeQuotient> {
        let s = self.cycles.cols();
        let g = self.group();
        if !g.is_free() {
            return Err(Error::Torsion {
                group: g.to_string(),
            });
        }
        let image = &(action * &self.cycles);
        let ech = ColumnEchelon::new(&self.cycles);
        let mut cols = Vec::with_capacity(s);
        for c in image.columns() {
            cols.push(
                ech.solve(&c).ok_or_else(|| {
                    Error::InvalidMap("action does not preserve the cycles".into())
                })?,
            );
        }
        let on_cycles = IntMatrix::from_columns(s, &cols);
        let d = snf(&self.boundaries);
        let rho = d.diagonal().iter().filter(|x| !x.is_zero()).count();
        debug_assert!(d.diagonal().iter().take(rho).all(One::is_one));
        let proj = d.u.submatrix(rho..s, 0..s);
        let sect = d.u_inv.submatrix(0..s, rho..s);
        let induced = &(&proj * &on_cycles) * &sect;
        Ok(LatticeQuotient {
            module: LatticeModule::new(group, induced)?,
            lift: &self.cycles * &sect,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn circle_homology() {
        // two vertices, two edges both from v0 to v1: H0 = Z, H1 = Z
        let d = IntMatrix::from_i64(2, 2, &[-1, -1, 1, 1]);
        let empty2 = IntMatrix::zeros(2, 0);
        let h1 = Spot {
            rank: 2,
            relations: &empty2,
            outgoing: Some((&d, &empty2)),
            incoming: None,
        };
        assert_eq!(h1.subquotient().unwrap().group(), FgAbGroup::free(1));
        let h0 = Spot {
            rank: 2,
            relations: &empty2,
            outgoing: None,
            incoming: Some(&d),
        };
        assert_eq!(h0.subquotient().unwrap().group(), FgAbGroup::free(1));
    }

    #[test]
    fn relations_in_target_enlarge_cycles() {
        // Z --2--> Z/2 : everything is a cycle
        let d = IntMatrix::from_i64(1, 1, &[2]);
        let rel_next = IntMatrix::from_i64(1, 1, &[2]);
        let empty = IntMatrix::zeros(1, 0);
        let spot = Spot {
            rank: 1,
            relations: &empty,
            outgoing: Some((&d, &rel_next)),
            incoming: None,
        };
        assert_eq!(spot.subquotient().unwrap().group(), FgAbGroup::free(1));
    }

    #[test]
    fn projective_plane_torsion() {
        // cellular chain complex of RP^2 read as cochains: Z --0--> Z --2--> Z
        let d0 = IntMatrix::zeros(1, 1);
        let d1 = IntMatrix::from_i64(1, 1, &[2]);
        let empty = IntMatrix::zeros(1, 0);
        let top = Spot {
            rank: 1,
            relations: &empty,
            outgoing: None,
            incoming: Some(&d1),
        };
        assert_eq!(top.subquotient().unwrap().group(), FgAbGroup::cyclic(2));
        let mid = Spot {
            rank: 1,
            relations: &empty,
            outgoing: Some((&d1, &empty)),
            incoming: Some(&d0),
        };
        assert_eq!(mid.subquotient().unwrap().group(), FgAbGroup::zero());
    }
}
