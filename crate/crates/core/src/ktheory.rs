//! Equivariant K-theory from Bredon cohomology through the Atiyah-Hirzebruch spectral
//! sequence, Bredon homology through the universal coefficient sequence, and the final
//! report on the K-theory of the reduced group C*-algebra.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::abelian::{hom_ext_z, FgAbGroup};
use crate::bredon::CohomologyTable;
use crate::error::Result;
use crate::pullback::{compute_pullback_cohomology, PullbackSpec};

/// The identification of the reduced group C*-algebra's K-theory with equivariant
/// K-homology. It is recorded, never computed.
pub const BAUM_CONNES: &str = "K_*(C*_r(Γ)) ≅ K_*^Γ(E̲Γ) by the Baum-Connes assembly map, \
     an isomorphism for these groups by results of Higson-Kasparov (assumed, not computed)";

const EXTENSIONS: &str = "some E2 groups have torsion; the sums are the associated graded \
     of the K-groups, which may be nontrivial extensions of them";

/// K-groups read off an Atiyah-Hirzebruch E2 page concentrated in even degrees.
///
/// When odd degrees are nonzero the spectral sequence may have differentials, so `k0` and
/// `k1` are left empty and only the E2 sums are reported, as upper bounds.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KTheoryResult {
    pub collapsed: bool,
    pub k0: Option<FgAbGroup>,
    pub k1: Option<FgAbGroup>,
    /// Direct sum of the even-degree E2 groups.
    pub even_e2: FgAbGroup,
    /// Direct sum of the odd-degree E2 groups.
    pub odd_e2: FgAbGroup,
    pub assumptions: Vec<String>,
}

fn collapse<'a>(groups: impl Iterator<Item = (i64, &'a FgAbGroup)>) -> KTheoryResult {
    let mut even = FgAbGroup::zero();
    let mut odd = FgAbGroup::zero();
    for (d, g) in groups {
        if d.rem_euclid(2) == 0 {
            even = even.direct_sum(g);
        } else {
            odd = odd.direct_sum(g);
        }
    }
    let collapsed = odd.is_zero();
    let mut assumptions = Vec::new();
    if collapsed && !even.is_free() {
        assumptions.push(EXTENSIONS.to_string());
    }
    KTheoryResult {
        collapsed,
        k0: collapsed.then(|| even.clone()),
        k1: collapsed.then(FgAbGroup::zero),
        even_e2: even,
        odd_e2: odd,
        assumptions,
    }
}

/// Equivariant K-theory from Bredon cohomology with representation-ring coefficients.
pub fn ahss_collapse(h: &CohomologyTable) -> KTheoryResult {
    collapse(h.entries().iter().map(|(d, e)| (*d as i64, &e.group)))
}

/// Bredon homology from cohomology: `H_n = Hom(H^n, Z) ⊕ Ext(H^(n+1), Z)`.
///
/// The output has an entry for every degree of the input, plus degree `n - 1` whenever
/// `H^n` has torsion.
pub fn uct_dualize(h: &BTreeMap<i64, FgAbGroup>) -> BTreeMap<i64, FgAbGroup> {
    let mut degrees: Vec<i64> = h.keys().copied().collect();
    degrees.extend(h.iter().filter(|(_, g)| !g.is_free()).map(|(d, _)| d - 1));
    degrees.sort_unstable();
    degrees.dedup();
    degrees
        .into_iter()
        .map(|n| {
            let hom = h.get(&n).map(|g| hom_ext_z(g).0).unwrap_or_default();
            let ext = h.get(&(n + 1)).map(|g| hom_ext_z(g).1).unwrap_or_default();
            (n, hom.direct_sum(&ext))
        })
        .collect()
}

/// Equivariant K-homology from Bredon homology.
pub fn khomology_collapse(homology: &BTreeMap<i64, FgAbGroup>) -> KTheoryResult {
    collapse(homology.iter().map(|(d, g)| (*d, g)))
}

/// Everything the pipeline says about one pullback.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub point_group_order: usize,
    pub blocks: Vec<String>,
    pub cohomology: BTreeMap<i64, FgAbGroup>,
    /// `K^*_Γ(E̲Γ)`.
    pub k_theory: KTheoryResult,
    pub homology: BTreeMap<i64, FgAbGroup>,
    /// `K_*^Γ(E̲Γ)`, identified with `K_*(C*_r(Γ))` under [`BAUM_CONNES`].
    pub k_homology: KTheoryResult,
    pub assumptions: Vec<String>,
}

/// Runs the pullback, both spectral sequences and the universal coefficient sequence.
pub fn full_report(spec: &PullbackSpec) -> Result<Report> {
    let h = compute_pullback_cohomology(spec)?;
    Ok(report_from_table(spec, &h))
}

/// Assembles a report from an already computed cohomology table.
pub fn report_from_table(spec: &PullbackSpec, h: &CohomologyTable) -> Report {
    let cohomology: BTreeMap<i64, FgAbGroup> = h
        .entries()
        .iter()
        .map(|(d, e)| (*d as i64, e.group.clone()))
        .collect();
    let homology = uct_dualize(&cohomology);
    Report {
        point_group_order: spec.point_group().order(),
        blocks: spec.blocks().iter().map(|b| b.name().to_string()).collect(),
        k_theory: ahss_collapse(h),
        k_homology: khomology_collapse(&homology),
        cohomology,
        homology,
        assumptions: vec![BAUM_CONNES.to_string()],
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pullback::PullbackOptions;
    use crate::ring::PointGroup;

    fn table(groups: &[(usize, FgAbGroup)]) -> CohomologyTable {
        CohomologyTable::from_groups(PointGroup::cyclic(4), groups.iter().cloned().collect())
    }

    #[test]
    fn even_tables_collapse() {
        let k = ahss_collapse(&table(&[
            (0, FgAbGroup::free(3)),
            (1, FgAbGroup::zero()),
            (2, FgAbGroup::free(5)),
        ]));
        assert!(k.collapsed);
        assert_eq!(k.k0, Some(FgAbGroup::free(8)));
        assert_eq!(k.k1, Some(FgAbGroup::zero()));
        assert!(k.assumptions.is_empty());
    }

    #[test]
    fn odd_classes_give_bounds_only() {
        let k = ahss_collapse(&table(&[(0, FgAbGroup::free(2)), (1, FgAbGroup::free(1))]));
        assert!(!k.collapsed);
        assert_eq!(k.k0, None);
        assert_eq!(k.k1, None);
        assert_eq!(k.even_e2, FgAbGroup::free(2));
        assert_eq!(k.odd_e2, FgAbGroup::free(1));
    }

    #[test]
    fn torsion_flags_extensions() {
        let k = ahss_collapse(&table(&[(0, FgAbGroup::from_parts(1, vec![2.into()]))]));
        assert!(k.collapsed);
        assert_eq!(k.assumptions.len(), 1);
    }

    #[test]
    fn uct_examples() {
        let free: BTreeMap<i64, FgAbGroup> = [
            (0, FgAbGroup::free(6)),
            (1, FgAbGroup::zero()),
            (2, FgAbGroup::free(1)),
        ]
        .into();
        assert_eq!(uct_dualize(&free), free);
        assert_eq!(uct_dualize(&uct_dualize(&free)), free);
        let z4: BTreeMap<i64, FgAbGroup> = [(0, FgAbGroup::cyclic(4))].into();
        let h = uct_dualize(&z4);
        assert_eq!(h[&-1], FgAbGroup::cyclic(4));
        assert_eq!(h[&0], FgAbGroup::zero());
        assert!(uct_dualize(&BTreeMap::new()).is_empty());
    }

    #[test]
    fn point_and_line_reports() {
        let spec = PullbackSpec::from_names(&["point"], PullbackOptions::default()).unwrap();
        let r = full_report(&spec).unwrap();
        assert_eq!(r.k_theory.k0, Some(FgAbGroup::free(4)));
        assert_eq!(r.k_homology.k0, Some(FgAbGroup::free(4)));
        assert_eq!(r.k_homology.k1, Some(FgAbGroup::zero()));
        assert_eq!(r.assumptions, vec![BAUM_CONNES.to_string()]);

        let spec = PullbackSpec::from_names(&["line-minus"], PullbackOptions::default()).unwrap();
        let r = full_report(&spec).unwrap();
        assert_eq!(r.k_theory.k0, Some(FgAbGroup::free(6)));
        assert_eq!(r.k_theory.k1, Some(FgAbGroup::zero()));

        let spec = PullbackSpec::from_names(&["plane-i"], PullbackOptions::default()).unwrap();
        let r = full_report(&spec).unwrap();
        assert_eq!(r.k_theory.k0, Some(FgAbGroup::free(9)));
        assert_eq!(r.k_theory.k1, Some(FgAbGroup::zero()));
    }

    #[test]
    fn report_round_trips() {
        let spec = PullbackSpec::from_names(&["plane-i"], PullbackOptions::default()).unwrap();
        let r = full_report(&spec).unwrap();
        let text = serde_json::to_string(&r).unwrap();
        assert_eq!(serde_json::from_str::<Report>(&text).unwrap(), r);
    }
}
