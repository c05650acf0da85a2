//! Presentations of lattices, kernels of maps out of free modules, and Tor.

use num_bigint::BigInt;
use num_traits::Zero;

use super::map::ModuleMap;
use super::module::{cyclic_shift, AnyModule, FpModule, LatticeModule, ZModule};
use super::RingElement;
use crate::abelian::FgAbGroup;
use crate::error::{Error, Result};
use crate::homology::Spot;
use crate::linalg::{image_lattice, kernel_lattice, ColumnEchelon, IntMatrix};

/// An [`FpModule`] presenting a lattice, with the evaluation map from its flattened
/// generators onto the lattice (`rank x generators * n`).
#[derive(Clone, Debug)]
pub struct LatticePresentation {
    pub module: FpModule,
    pub evaluation: IntMatrix,
}

/// Greedily picks the columns of `candidates` that are not yet in the R-span of earlier
/// picks. The R-span of `v` is the Z-span of `action^k v`, `k < n`.
fn greedy_generators(candidates: &IntMatrix, action: &IntMatrix, n: usize) -> Vec<Vec<BigInt>> {
    let dim = candidates.rows();
    let mut chosen = Vec::new();
    let mut span: Vec<Vec<BigInt>> = Vec::new();
    let mut echelon: Option<ColumnEchelon> = None;
    for v in candidates.columns() {
        let covered = match &echelon {
            Some(e) => e.solve(&v).is_some(),
            None => v.iter().all(Zero::is_zero),
        };
        if covered {
            continue;
        }
        let mut w = v.clone();
        for _ in 0..n {
            span.push(w.clone());
            w = action.mul_vec(&w);
        }
        chosen.push(v);
        echelon = Some(ColumnEchelon::new(&IntMatrix::from_columns(dim, &span)));
    }
    chosen
}

/// Presents a lattice with automorphism as an `R(C_n)`-module.
///
/// Generators are the lowest-index standard basis vectors not already in the R-span of
/// earlier ones; relations generate the kernel of the evaluation map.
pub fn present_lattice(l: &LatticeModule) -> Result<LatticePresentation> {
    let group = l.group();
    let n = group.order();
    let r = l.rank();
    let t = l.action();
    let gens = greedy_generators(&IntMatrix::identity(r), t, n);
    let g = gens.len();

    let mut columns = Vec::with_capacity(g * n);
    for v in &gens {
        let mut w = v.clone();
        for _ in 0..n {
            columns.push(w.clone());
            w = t.mul_vec(&w);
        }
    }
    let evaluation = IntMatrix::from_columns(r, &columns);

    let syzygies = kernel_lattice(&evaluation);
    let shift = IntMatrix::block_diag(&vec![cyclic_shift(n); g]);
    let rel_vectors = greedy_generators(syzygies.basis(), &shift, n);
    let relations = rel_vectors
        .iter()
        .map(|v| {
            (0..g)
                .map(|i| RingElement::from_coords(v[i * n..(i + 1) * n].to_vec()))
                .collect()
        })
        .collect();
    Ok(LatticePresentation {
        module: FpModule::new(group, g, relations)?,
        evaluation,
    })
}

pub fn lattice_to_fp(l: &LatticeModule) -> Result<FpModule> {
    Ok(present_lattice(l)?.module)
}

/// Kernel of a map out of a free module, presented as an `FpModule`, together with its
/// inclusion into the source.
pub fn presentation_kernel(f: &ModuleMap) -> Result<(FpModule, ModuleMap)> {
    let source = match f.source() {
        AnyModule::Fp(m) if m.is_free() => m.clone(),
        _ => {
            return Err(Error::InvalidMap(
                "presentation_kernel needs a free source".into(),
            ))
        }
    };
    let group = source.group();
    let n = group.order();
    let flat = source.flat_rank();
    let rel_t = f.target().flat_relations();
    let kernel = if rel_t.cols() == 0 {
        kernel_lattice(f.matrix()).basis().clone()
    } else {
        let k = kernel_lattice(&f.matrix().hstack(&rel_t));
        image_lattice(&k.basis().submatrix(0..flat, 0..k.rank()))
            .basis()
            .clone()
    };
    let s = kernel.cols();
    let shift = source.flat_action();
    let ech = ColumnEchelon::new(&kernel);
    let moved = &shift * &kernel;
    let mut cols = Vec::with_capacity(s);
    for c in moved.columns() {
        cols.push(ech.solve(&c).ok_or_else(|| {
            Error::InvalidMap("kernel is not closed under η; the map is not equivariant".into())
        })?);
    }
    let on_kernel = LatticeModule::new(group, IntMatrix::from_columns(s, &cols))?;
    let pres = present_lattice(&on_kernel)?;
    debug_assert_eq!(pres.module.group().order(), n);
    let inclusion = ModuleMap::unchecked(
        pres.module.clone().into(),
        source.into(),
        &kernel * &pres.evaluation,
    )?;
    Ok((pres.module, inclusion))
}

/// Free resolution `F_len → ... → F_1 → F_0 → M`; entry `p - 1` is `∂_p : F_p → F_{p-1}`.
pub fn free_resolution(m: &FpModule, len: usize) -> Result<Vec<ModuleMap>> {
    let group = m.group();
    let n = group.order();
    let mut maps = Vec::with_capacity(len);
    if len == 0 {
        return Ok(maps);
    }
    let f0 = FpModule::free(group, m.generators());
    let f1 = FpModule::free(group, m.relations().len());
    let mut d1 = IntMatrix::zeros(f0.flat_rank(), f1.flat_rank());
    for (j, rel) in m.relations().iter().enumerate() {
        for (i, e) in rel.iter().enumerate() {
            for k in 0..n {
                for (c, coeff) in e.coords().iter().enumerate() {
                    if !coeff.is_zero() {
                        d1[(i * n + (c + k) % n, j * n + k)] += coeff;
                    }
                }
            }
        }
    }
    maps.push(ModuleMap::new(f1, f0, d1)?);
    while maps.len() < len {
        let last = maps.last().expect("resolution has a first map");
        let (kernel, inclusion) = presentation_kernel(last)?;
        let fp = FpModule::free(group, kernel.generators());
        let prev = last.source().clone();
        maps.push(ModuleMap::unchecked(
            fp.into(),
            prev,
            inclusion.matrix().clone(),
        )?);
    }
    Ok(maps)
}

/// `Tor_p^{R(C_n)}(M, N)` for `p = 0..=p_max`, from a free resolution of `M` tensored with `N`.
pub fn tor(m: &FpModule, n_mod: &FpModule, p_max: usize) -> Result<Vec<FgAbGroup>> {
    m.group().ensure_same(n_mod.group())?;
    let resolution = free_resolution(m, p_max + 1)?;
    let group = m.group();
    // C_p = F_p ⊗ N and D_p = ∂_p ⊗ 1
    let mut chain = Vec::with_capacity(p_max + 2);
    chain.push(FpModule::free(group, m.generators()).tensor(n_mod)?);
    let mut diffs = Vec::with_capacity(p_max + 1);
    for d in &resolution {
        let dt = d.tensor_right(n_mod)?;
        chain.push(dt.source().as_fp().expect("tensor is presented").clone());
        diffs.push(dt);
    }
    let rels: Vec<IntMatrix> = chain.iter().map(ZModule::flat_relations).collect();
    let mut out = Vec::with_capacity(p_max + 1);
    for p in 0..=p_max {
        let outgoing = if p == 0 {
            None
        } else {
            Some((diffs[p - 1].matrix(), &rels[p - 1]))
        };
        let spot = Spot {
            rank: chain[p].flat_rank(),
            relations: &rels[p],
            outgoing,
            incoming: Some(diffs[p].matrix()),
        };
        out.push(spot.subquotient()?.group());
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::PointGroup;

    fn c4() -> PointGroup {
        PointGroup::cyclic(4)
    }

    fn line_difference() -> ModuleMap {
        let one = RingElement::one(4);
        ModuleMap::from_ring_matrix(
            FpModule::free(c4(), 2),
            FpModule::restriction(c4(), 2).unwrap(),
            &[vec![one.neg(), one]],
        )
        .unwrap()
    }

    #[test]
    fn regular_representation_is_free() {
        let l = LatticeModule::new(c4(), cyclic_shift(4)).unwrap();
        assert_eq!(lattice_to_fp(&l).unwrap(), FpModule::free(c4(), 1));
    }

    #[test]
    fn trivial_rank_one_is_augmentation_quotient() {
        let l = LatticeModule::trivial(c4(), 1);
        let m = lattice_to_fp(&l).unwrap();
        assert_eq!(m.generators(), 1);
        assert_eq!(m.relations().len(), 1);
        assert_eq!(m.relations()[0][0].binomial_exponent(), Some(1));
    }

    #[test]
    fn rotation_is_gaussian_integers() {
        let rot = IntMatrix::from_i64(2, 2, &[0, -1, 1, 0]);
        let l = LatticeModule::new(c4(), rot.clone()).unwrap();
        let p = present_lattice(&l).unwrap();
        assert_eq!(p.module.generators(), 1);
        assert_eq!(p.module.relations().len(), 1);
        assert_eq!(
            p.module.relations()[0][0],
            RingElement::from_i64(&[1, 0, 1, 0])
        );
        // flattened back: Z^2 with an action conjugate to the rotation
        let form = p.module.lattice_form().unwrap();
        assert_eq!(form.lattice.rank(), 2);
        let conj = &p.evaluation * &form.section;
        assert!(conj.determinant() == 1.into() || conj.determinant() == (-1).into());
        assert_eq!(&conj * form.lattice.action(), &rot * &conj);
    }

    #[test]
    fn kernel_of_identity_is_zero() {
        let f = ModuleMap::identity(FpModule::free(c4(), 1));
        let (k, inc) = presentation_kernel(&f).unwrap();
        assert_eq!(k.generators(), 0);
        assert!(inc.matrix().is_empty());
    }

    #[test]
    fn kernel_of_projection_is_the_ideal() {
        let f = ModuleMap::from_ring_matrix(
            FpModule::free(c4(), 1),
            FpModule::restriction(c4(), 2).unwrap(),
            &[vec![RingElement::one(4)]],
        )
        .unwrap();
        let (k, inc) = presentation_kernel(&f).unwrap();
        assert_eq!(k.flatten(), FgAbGroup::free(2));
        assert!(f.compose(&inc).unwrap().is_zero_map());
        // image is (η^2 - 1) R: spanned by η^2 - 1 and η^3 - η
        let ideal = IntMatrix::from_i64(4, 2, &[-1, 0, 0, -1, 1, 0, 0, 1]);
        assert_eq!(
            crate::linalg::image_lattice(inc.matrix()).rank(),
            crate::linalg::image_lattice(&ideal).rank()
        );
        assert!(crate::linalg::spans(inc.matrix(), &ideal));
        assert!(crate::linalg::spans(&ideal, inc.matrix()));
    }

    #[test]
    fn kernel_of_line_difference_has_rank_six() {
        let f = line_difference();
        let (k, inc) = presentation_kernel(&f).unwrap();
        assert_eq!(k.flatten(), FgAbGroup::free(6));
        assert!(f.compose(&inc).unwrap().is_zero_map());
        assert!(inc.is_equivariant());
    }

    #[test]
    fn free_modules_are_flat() {
        let n = FpModule::restriction(c4(), 2).unwrap();
        let t = tor(&FpModule::free(c4(), 2), &n, 2).unwrap();
        assert_eq!(
            t,
            vec![FgAbGroup::free(4), FgAbGroup::zero(), FgAbGroup::zero()]
        );
    }

    #[test]
    fn trivial_group_tor() {
        let g = PointGroup::cyclic(1);
        let z = FpModule::restriction(g, 1).unwrap();
        assert_eq!(
            tor(&z, &z, 1).unwrap(),
            vec![FgAbGroup::free(1), FgAbGroup::zero()]
        );
    }

    #[test]
    fn tor_of_z_over_z2_group_ring() {
        // Tor_p^{Z[C2]}(Z, Z) = H_p(C2; Z) = Z, Z/2, 0, Z/2
        let g = PointGroup::cyclic(2);
        let z = FpModule::restriction(g, 1).unwrap();
        let t = tor(&z, &z, 3).unwrap();
        assert_eq!(
            t,
            vec![
                FgAbGroup::free(1),
                FgAbGroup::cyclic(2),
                FgAbGroup::zero(),
                FgAbGroup::cyclic(2)
            ]
        );
    }

    #[test]
    fn line_kernel_tor_has_two_torsion() {
        // H0(line) = R ⊕ R/(η^2+1), and Tor_1(R/(η^2+1), R/(η^2+1)) = Z[i]/2
        let (k, _) = presentation_kernel(&line_difference()).unwrap();
        let t = tor(&k, &k, 2).unwrap();
        assert_eq!(t[0], FgAbGroup::free(10));
        assert_eq!(t[1], FgAbGroup::from_parts(0, vec![2.into(), 2.into()]));
        assert_eq!(t[2], FgAbGroup::zero());
        assert_eq!(t[0], k.tensor(&k).unwrap().flatten());
    }
}
