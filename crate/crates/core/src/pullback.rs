//! Cohomology of iterated pullbacks: the graded tensor of the factors' cohomology over the
//! representation ring, the Eilenberg-Moore E2 page, and the tensor product of cochain
//! complexes used as an independent check.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::abelian::FgAbGroup;
use crate::bredon::{
    bredon_cochain_complex, builtin_block, cohomology_groups, cohomology_table, CochainComplex,
    CohomologyEntry, CohomologyTable, GcwBlock,
};
use crate::error::{Error, Result};
use crate::linalg::IntMatrix;
use crate::ring::{tor, FpModule, ModuleMap, PointGroup, ZModule};

/// How much checking a pullback run does on top of the Künneth fold.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PullbackOptions {
    /// Compare every fold against the cohomology of a product complex.
    pub oracle: bool,
    /// Compute the E2 page up to this Tor degree at every fold; 0 disables it.
    pub tor_depth: usize,
    /// Also build the product complex of all blocks at once.
    pub full_product_oracle: bool,
}

/// An ordered list of blocks over a common point group.
#[derive(Clone, Debug)]
pub struct PullbackSpec {
    point_group: PointGroup,
    blocks: Vec<GcwBlock>,
    pub options: PullbackOptions,
}

impl PullbackSpec {
    pub fn new(
        point_group: PointGroup,
        blocks: Vec<GcwBlock>,
        options: PullbackOptions,
    ) -> Result<Self> {
        if blocks.is_empty() {
            return Err(Error::EmptyPullback);
        }
        for b in &blocks {
            point_group.ensure_same(b.point_group())?;
        }
        Ok(PullbackSpec {
            point_group,
            blocks,
            options,
        })
    }

    /// A spec made of built-in blocks.
    pub fn from_names(names: &[&str], options: PullbackOptions) -> Result<Self> {
        let blocks = names
            .iter()
            .map(|n| builtin_block(n))
            .collect::<Result<Vec<_>>>()?;
        let group = blocks.first().ok_or(Error::EmptyPullback)?.point_group();
        Self::new(group, blocks, options)
    }

    /// Two copies of the line block followed by two copies of the plane block.
    pub fn vafa_witten(options: PullbackOptions) -> Self {
        Self::from_names(&["line-minus", "line-minus", "plane-i", "plane-i"], options)
            .expect("built-in blocks are valid")
    }

    pub fn point_group(&self) -> PointGroup {
        self.point_group
    }

    pub fn blocks(&self) -> &[GcwBlock] {
        &self.blocks
    }
}

/// Groups indexed by `(p, q)`: `p` is the Tor degree (a resolution index, not negated) and
/// `q` the internal cohomological degree.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct BigradedTable {
    pub entries: Vec<BigradedEntry>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BigradedEntry {
    pub p: usize,
    pub q: usize,
    pub group: FgAbGroup,
}

impl BigradedTable {
    pub fn get(&self, p: usize, q: usize) -> FgAbGroup {
        self.entries
            .iter()
            .find(|e| e.p == p && e.q == q)
            .map(|e| e.group.clone())
            .unwrap_or_default()
    }

    /// The nonzero groups in row `p`, by `q`.
    pub fn row(&self, p: usize) -> BTreeMap<usize, FgAbGroup> {
        self.entries
            .iter()
            .filter(|e| e.p == p && !e.group.is_zero())
            .map(|e| (e.q, e.group.clone()))
            .collect()
    }

    /// The first nonzero entry with `p ≥ 1`, if any.
    pub fn first_higher_entry(&self) -> Option<&BigradedEntry> {
        self.entries.iter().find(|e| e.p >= 1 && !e.group.is_zero())
    }

    pub fn higher_rows_vanish(&self) -> bool {
        self.first_higher_entry().is_none()
    }
}

/// `H(X) ⊗ H(Y)` over the representation ring: degree `k` is `⊕_{i+j=k} H^i(X) ⊗ H^j(Y)`.
///
/// Needs module structure in every nonzero degree of both inputs. The output keeps the
/// tensor presentations, including in degrees where the tensor product has torsion, so the
/// result can be folded again.
pub fn kunneth_tensor(hx: &CohomologyTable, hy: &CohomologyTable) -> Result<CohomologyTable> {
    let group = hx.point_group();
    group.ensure_same(hy.point_group())?;
    let mx = hx.modules()?;
    let my = hy.modules()?;
    let top = hx.top_degree() + hy.top_degree();
    let mut entries = BTreeMap::new();
    for k in 0..=top {
        let mut parts = Vec::new();
        for (&i, a) in &mx {
            if let Some(b) = k.checked_sub(i).and_then(|j| my.get(&j)) {
                parts.push(a.tensor(b)?);
            }
        }
        let module = if parts.is_empty() {
            FpModule::zero(group)
        } else {
            FpModule::direct_sum(&parts)?
        };
        entries.insert(
            k,
            CohomologyEntry {
                group: module.flatten(),
                module: Some(module),
            },
        );
    }
    CohomologyTable::new(group, entries)
}

/// The E2 page `Tor^{R}_p(H(X), H(Y))_q` for `p = 0..=p_max`.
pub fn em_e2(hx: &CohomologyTable, hy: &CohomologyTable, p_max: usize) -> Result<BigradedTable> {
    hx.point_group().ensure_same(hy.point_group())?;
    let mx = hx.modules()?;
    let my = hy.modules()?;
    let top = hx.top_degree() + hy.top_degree();
    let mut sums = vec![vec![FgAbGroup::zero(); top + 1]; p_max + 1];
    for (&i, a) in &mx {
        for (&j, b) in &my {
            for (p, g) in tor(a, b, p_max)?.into_iter().enumerate() {
                sums[p][i + j] = sums[p][i + j].direct_sum(&g);
            }
        }
    }
    let entries = sums
        .into_iter()
        .enumerate()
        .flat_map(|(p, row)| {
            row.into_iter()
                .enumerate()
                .map(move |(q, group)| BigradedEntry { p, q, group })
        })
        .collect();
    Ok(BigradedTable { entries })
}

/// Total complex of `C(X) ⊗ C(Y)` over the representation ring, with
/// `d(x ⊗ y) = dx ⊗ y + (-1)^|x| x ⊗ dy`. Summands of each degree are ordered by the degree
/// of the left factor.
pub fn product_complex(cx: &CochainComplex, cy: &CochainComplex) -> Result<CochainComplex> {
    let group = cx.point_group();
    group.ensure_same(cy.point_group())?;
    let (tx, ty) = (cx.top_degree(), cy.top_degree());
    let summands = |k: usize| -> Vec<(usize, usize)> {
        (0..=tx.min(k))
            .filter(|&i| k - i <= ty)
            .map(|i| (i, k - i))
            .collect()
    };
    let mut modules = Vec::with_capacity(tx + ty + 1);
    let mut offsets: Vec<BTreeMap<(usize, usize), usize>> = Vec::with_capacity(tx + ty + 1);
    for k in 0..=tx + ty {
        let mut parts = Vec::new();
        let mut off = BTreeMap::new();
        let mut at = 0;
        for (i, j) in summands(k) {
            let m = cx.modules()[i].tensor(&cy.modules()[j])?;
            off.insert((i, j), at);
            at += m.flat_rank();
            parts.push(m);
        }
        modules.push(FpModule::direct_sum(&parts)?);
        offsets.push(off);
    }
    let mut maps = Vec::with_capacity(tx + ty);
    for k in 0..tx + ty {
        let mut d = IntMatrix::zeros(modules[k + 1].flat_rank(), modules[k].flat_rank());
        for (i, j) in summands(k) {
            let col = offsets[k][&(i, j)];
            if i < tx {
                let f = cx.maps()[i].tensor_right(&cy.modules()[j])?;
                d.set_block(offsets[k + 1][&(i + 1, j)], col, f.matrix());
            }
            if j < ty {
                let g = ModuleMap::tensor_left(&cx.modules()[i], &cy.maps()[j])?;
                let g = if i % 2 == 0 { g } else { g.scaled(-1) };
                d.set_block(offsets[k + 1][&(i, j + 1)], col, g.matrix());
            }
        }
        maps.push(ModuleMap::unchecked(
            modules[k].clone().into(),
            modules[k + 1].clone().into(),
            d,
        )?);
    }
    CochainComplex::new(group, modules, maps)
}

/// The complex with the modules of a cohomology table and zero differentials.
pub fn formal_complex(h: &CohomologyTable) -> Result<CochainComplex> {
    let group = h.point_group();
    let modules = (0..=h.top_degree())
        .map(|d| {
            let e = h.entry(d);
            match e.and_then(|e| e.module.clone()) {
                Some(m) => Ok(m),
                None if e.is_none_or(|e| e.group.is_zero()) => Ok(FpModule::zero(group)),
                None => Err(Error::TorsionObstruction {
                    degree: d,
                    group: h.group(d).to_string(),
                }),
            }
        })
        .collect::<Result<Vec<_>>>()?;
    CochainComplex::formal(group, modules)
}

/// Outcome of comparing one fold with the cohomology of a product complex.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleCheck {
    pub product: BTreeMap<usize, FgAbGroup>,
    /// Degrees where the product complex disagrees with the Künneth tensor.
    pub mismatched_degrees: Vec<usize>,
}

impl OracleCheck {
    fn compare(kunneth: &BTreeMap<usize, FgAbGroup>, product: BTreeMap<usize, FgAbGroup>) -> Self {
        let degrees: std::collections::BTreeSet<usize> =
            kunneth.keys().chain(product.keys()).copied().collect();
        let mismatched_degrees = degrees
            .into_iter()
            .filter(|d| kunneth.get(d) != product.get(d))
            .collect();
        OracleCheck {
            product,
            mismatched_degrees,
        }
    }

    pub fn agrees(&self) -> bool {
        self.mismatched_degrees.is_empty()
    }
}

/// One step of the left fold: the accumulated result tensored with the next block.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FoldRecord {
    /// 1 for the first pair of blocks.
    pub fold: usize,
    pub block: String,
    pub kunneth: BTreeMap<usize, FgAbGroup>,
    pub oracle: Option<OracleCheck>,
    pub e2: Option<BigradedTable>,
}

impl FoldRecord {
    pub fn collapses(&self) -> Option<bool> {
        self.e2.as_ref().map(BigradedTable::higher_rows_vanish)
    }
}

/// The product complex of every block, compared with the folded result.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FullProductCheck {
    /// Z-ranks of the cochain groups of the full product complex.
    pub flat_ranks: Vec<usize>,
    pub check: OracleCheck,
}

/// Everything computed by a pullback run.
#[derive(Clone, Debug)]
pub struct PullbackRun {
    /// Cohomology of each block on its own.
    pub block_tables: Vec<(String, CohomologyTable)>,
    pub folds: Vec<FoldRecord>,
    pub result: CohomologyTable,
    pub full_product: Option<FullProductCheck>,
}

impl PullbackRun {
    pub fn oracles_agree(&self) -> bool {
        self.folds
            .iter()
            .filter_map(|f| f.oracle.as_ref())
            .chain(self.full_product.as_ref().map(|f| &f.check))
            .all(OracleCheck::agrees)
    }

    pub fn collapses(&self) -> bool {
        self.folds.iter().all(|f| f.collapses().unwrap_or(true))
    }
}

/// Runs the left fold with whatever checks the options ask for, recording their outcome
/// without failing on a disagreement.
pub fn run_pullback(spec: &PullbackSpec) -> Result<PullbackRun> {
    let complexes = spec
        .blocks
        .iter()
        .map(bredon_cochain_complex)
        .collect::<Result<Vec<_>>>()?;
    let tables = complexes
        .iter()
        .map(cohomology_table)
        .collect::<Result<Vec<_>>>()?;
    let opts = spec.options;
    let mut acc = tables[0].clone();
    let mut folds = Vec::new();
    for (k, (next_c, next_h)) in complexes.iter().zip(&tables).enumerate().skip(1) {
        let e2 = if opts.tor_depth > 0 {
            Some(em_e2(&acc, next_h, opts.tor_depth)?)
        } else {
            None
        };
        let folded = kunneth_tensor(&acc, next_h)?;
        let kunneth = folded.groups();
        let oracle = if opts.oracle {
            let left = if k == 1 {
                complexes[0].clone()
            } else {
                formal_complex(&acc)?
            };
            let product = cohomology_groups(&product_complex(&left, next_c)?)?;
            Some(OracleCheck::compare(&kunneth, product.groups()))
        } else {
            None
        };
        folds.push(FoldRecord {
            fold: k,
            block: spec.blocks[k].name().to_string(),
            kunneth,
            oracle,
            e2,
        });
        acc = folded;
    }
    let full_product = if opts.full_product_oracle {
        let mut total = complexes[0].clone();
        for c in &complexes[1..] {
            total = product_complex(&total, c)?;
        }
        let product = cohomology_groups(&total)?;
        Some(FullProductCheck {
            flat_ranks: total.flat_ranks(),
            check: OracleCheck::compare(&acc.groups(), product.groups()),
        })
    } else {
        None
    };
    Ok(PullbackRun {
        block_tables: spec
            .blocks
            .iter()
            .map(|b| b.name().to_string())
            .zip(tables)
            .collect(),
        folds,
        result: acc,
        full_product,
    })
}

/// The folded cohomology, failing on the first oracle disagreement or non-vanishing higher
/// Tor row that the options asked to check.
pub fn compute_pullback_cohomology(spec: &PullbackSpec) -> Result<CohomologyTable> {
    let run = run_pullback(spec)?;
    certify(&run)?;
    Ok(run.result)
}

/// Fails on the first product-complex disagreement or nonzero higher Tor entry recorded in
/// a run.
pub fn certify(run: &PullbackRun) -> Result<()> {
    for f in &run.folds {
        if let Some(o) = &f.oracle {
            check_oracle(f.fold, &f.kunneth, o)?;
        }
        if let Some(e) = f.e2.as_ref().and_then(BigradedTable::first_higher_entry) {
            return Err(Error::NoCollapse {
                fold: f.fold,
                p: e.p,
                q: e.q,
                group: e.group.to_string(),
            });
        }
    }
    if let Some(full) = &run.full_product {
        check_oracle(run.folds.len(), &run.result.groups(), &full.check)?;
    }
    Ok(())
}

fn check_oracle(fold: usize, kunneth: &BTreeMap<usize, FgAbGroup>, o: &OracleCheck) -> Result<()> {
    match o.mismatched_degrees.first() {
        None => Ok(()),
        Some(&degree) => Err(Error::OracleMismatch {
            fold,
            degree,
            kunneth: kunneth
                .get(&degree)
                .cloned()
                .unwrap_or_default()
                .to_string(),
            product: o
                .product
                .get(&degree)
                .cloned()
                .unwrap_or_default()
                .to_string(),
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn complex(name: &str) -> CochainComplex {
        bredon_cochain_complex(&builtin_block(name).unwrap()).unwrap()
    }

    fn table(name: &str) -> CohomologyTable {
        cohomology_table(&complex(name)).unwrap()
    }

    #[test]
    fn line_squared() {
        let t = kunneth_tensor(&table("line-minus"), &table("line-minus")).unwrap();
        assert_eq!(t.groups(), BTreeMap::from([(0, FgAbGroup::free(10))]));
    }

    #[test]
    fn point_is_a_unit() {
        for name in ["line-minus", "plane-i"] {
            let h = table(name);
            let t = kunneth_tensor(&h, &table("point")).unwrap();
            assert_eq!(t.groups(), h.groups());
            let t = kunneth_tensor(&table("point"), &h).unwrap();
            assert_eq!(t.groups(), h.groups());
        }
    }

    #[test]
    fn product_complex_ranks() {
        let p = product_complex(&complex("line-minus"), &complex("line-minus")).unwrap();
        assert_eq!(p.flat_ranks(), vec![16, 8, 2]);
        assert_eq!(p.euler_characteristic(), 10);
        let q = product_complex(&complex("plane-i"), &complex("point")).unwrap();
        assert_eq!(q.flat_ranks(), complex("plane-i").flat_ranks());
    }

    #[test]
    fn product_complex_euler_is_multiplicative_per_character() {
        let names = ["line-minus", "plane-i", "point"];
        for a in names {
            for b in names {
                let (x, y) = (complex(a), complex(b));
                let p = product_complex(&x, &y).unwrap();
                let (ex, ey, ep) = (
                    x.character_euler().unwrap(),
                    y.character_euler().unwrap(),
                    p.character_euler().unwrap(),
                );
                for (d, v) in &ep {
                    assert_eq!(*v, ex[d] * ey[d], "{a} x {b}, character {d}");
                }
                let h = cohomology_table(&p).unwrap();
                assert_eq!(h.euler_characteristic(), p.euler_characteristic());
            }
        }
    }

    #[test]
    fn free_tables_have_flat_e2() {
        let point = table("point");
        let e2 = em_e2(&point, &table("plane-i"), 2).unwrap();
        assert!(e2.higher_rows_vanish());
        assert_eq!(e2.row(0), table("plane-i").groups());
    }

    #[test]
    fn e2_row_zero_is_the_tensor() {
        let h = table("line-minus");
        let e2 = em_e2(&h, &h, 1).unwrap();
        assert_eq!(e2.row(0), kunneth_tensor(&h, &h).unwrap().groups());
    }

    #[test]
    fn associativity() {
        let (a, b, c) = (table("line-minus"), table("plane-i"), table("line-minus"));
        let left = kunneth_tensor(&kunneth_tensor(&a, &b).unwrap(), &c).unwrap();
        let right = kunneth_tensor(&a, &kunneth_tensor(&b, &c).unwrap()).unwrap();
        assert_eq!(left.groups(), right.groups());
    }

    #[test]
    fn single_block_and_points() {
        let spec = PullbackSpec::from_names(&["line-minus"], PullbackOptions::default()).unwrap();
        assert_eq!(
            compute_pullback_cohomology(&spec).unwrap().groups(),
            BTreeMap::from([(0, FgAbGroup::free(6))])
        );
        let opts = PullbackOptions {
            oracle: true,
            tor_depth: 2,
            full_product_oracle: true,
        };
        let spec = PullbackSpec::from_names(&["point", "point"], opts).unwrap();
        assert_eq!(
            compute_pullback_cohomology(&spec).unwrap().groups(),
            BTreeMap::from([(0, FgAbGroup::free(4))])
        );
    }

    #[test]
    fn empty_spec_rejected() {
        let err = PullbackSpec::new(
            PointGroup::cyclic(4),
            Vec::new(),
            PullbackOptions::default(),
        );
        assert_eq!(err.unwrap_err(), Error::EmptyPullback);
    }

    #[test]
    fn torsion_blocks_further_folds() {
        let g = PointGroup::cyclic(4);
        let torsion = CohomologyTable::from_groups(g, BTreeMap::from([(0, FgAbGroup::cyclic(2))]));
        let err = kunneth_tensor(&torsion, &table("point")).unwrap_err();
        assert!(matches!(err, Error::TorsionObstruction { degree: 0, .. }));
    }
}
