use std::collections::BTreeMap;
use std::fmt;

use crate::abelian::FgAbGroup;
use crate::error::{Error, Result};
use crate::homology::Spot;
use crate::linalg::IntMatrix;
use crate::ring::character::character_multiplicities;
use crate::ring::{lattice_to_fp, AnyModule, FpModule, ModuleMap, PointGroup, ZModule};

/// Lifts a matrix given in the Z-bases of two torsion-free modules to a map between their
/// presentations.
pub fn lift_canonical(source: &FpModule, target: &FpModule, m: &IntMatrix) -> Result<ModuleMap> {
    let s = source.lattice_form()?;
    let t = target.lattice_form()?;
    if m.shape() != (t.lattice.rank(), s.lattice.rank()) {
        return Err(Error::Shape(format!(
            "matrix is {:?}, lattices need {:?}",
            m.shape(),
            (t.lattice.rank(), s.lattice.rank())
        )));
    }
    let flat = &(&t.section * m) * &s.coords;
    ModuleMap::unchecked(source.clone().into(), target.clone().into(), flat)
}

/// A bounded cochain complex of finitely presented `R(C_n)`-modules, concentrated in
/// degrees `0..modules.len()`. `maps[d]` goes from degree `d` to degree `d + 1`.
#[derive(Clone, Debug)]
pub struct CochainComplex {
    point_group: PointGroup,
    modules: Vec<FpModule>,
    maps: Vec<ModuleMap>,
}

impl CochainComplex {
    /// Checks that the maps connect the modules, commute with η, respect the relations and
    /// square to zero.
    pub fn new(
        point_group: PointGroup,
        modules: Vec<FpModule>,
        maps: Vec<ModuleMap>,
    ) -> Result<Self> {
        let c = Self::unchecked(point_group, modules, maps)?;
        for (d, f) in c.maps.iter().enumerate() {
            if !f.respects_relations() || !f.is_equivariant() {
                return Err(Error::InvalidMap(format!(
                    "differential in degree {d} is not a module map"
                )));
            }
        }
        for (d, pair) in c.maps.windows(2).enumerate() {
            if !pair[1].compose(&pair[0])?.is_zero_map() {
                return Err(Error::NonzeroSquare { degree: d });
            }
        }
        Ok(c)
    }

    /// Checks only that the maps connect the modules.
    pub fn unchecked(
        point_group: PointGroup,
        modules: Vec<FpModule>,
        maps: Vec<ModuleMap>,
    ) -> Result<Self> {
        if maps.len() != modules.len().saturating_sub(1) {
            return Err(Error::Shape(format!(
                "{} modules need {} maps, got {}",
                modules.len(),
                modules.len().saturating_sub(1),
                maps.len()
            )));
        }
        for m in &modules {
            point_group.ensure_same(m.group())?;
        }
        for (d, f) in maps.iter().enumerate() {
            let joins = matches!(f.source(), AnyModule::Fp(s) if *s == modules[d])
                && matches!(f.target(), AnyModule::Fp(t) if *t == modules[d + 1]);
            if !joins {
                return Err(Error::Shape(format!(
                    "map in degree {d} does not join the modules in degrees {d} and {}",
                    d + 1
                )));
            }
        }
        Ok(CochainComplex {
            point_group,
            modules,
            maps,
        })
    }

    /// The complex with the given modules and zero differentials.
    pub fn formal(point_group: PointGroup, modules: Vec<FpModule>) -> Result<Self> {
        let maps = modules
            .windows(2)
            .map(|w| ModuleMap::zero(w[0].clone(), w[1].clone()))
            .collect::<Result<Vec<_>>>()?;
        Self::unchecked(point_group, modules, maps)
    }

    pub fn point_group(&self) -> PointGroup {
        self.point_group
    }

    pub fn modules(&self) -> &[FpModule] {
        &self.modules
    }

    pub fn maps(&self) -> &[ModuleMap] {
        &self.maps
    }

    pub fn top_degree(&self) -> usize {
        self.modules.len().saturating_sub(1)
    }

    /// Z-ranks of the cochain groups.
    pub fn flat_ranks(&self) -> Vec<usize> {
        self.modules
            .iter()
            .map(|m| m.flatten().free_rank())
            .collect()
    }

    /// Alternating sum of the Z-ranks of the cochain groups.
    pub fn euler_characteristic(&self) -> i64 {
        alternating(self.flat_ranks().into_iter().enumerate())
    }

    /// For each divisor `d` of the point-group order, the alternating sum of the
    /// multiplicities of the rational character of order `d`. Needs torsion-free modules.
    pub fn character_euler(&self) -> Result<BTreeMap<usize, i64>> {
        let mut out = zero_characters(self.point_group);
        for (deg, m) in self.modules.iter().enumerate() {
            let mults = character_multiplicities(&m.lattice_form()?.lattice);
            accumulate(&mut out, deg, &mults);
        }
        Ok(out)
    }

    fn spot(&self, d: usize) -> (usize, IntMatrix, Option<IntMatrix>) {
        (
            self.modules[d].flat_rank(),
            self.modules[d].flat_relations(),
            self.modules.get(d + 1).map(ZModule::flat_relations),
        )
    }

    fn subquotient(&self, d: usize) -> Result<crate::homology::Subquotient> {
        let (rank, rel, rel_next) = self.spot(d);
        let outgoing = match (self.maps.get(d), rel_next.as_ref()) {
            (Some(f), Some(r)) => Some((f.matrix(), r)),
            _ => None,
        };
        let incoming = d.checked_sub(1).map(|p| self.maps[p].matrix());
        Spot {
            rank,
            relations: &rel,
            outgoing,
            incoming,
        }
        .subquotient()
    }
}

fn alternating(items: impl Iterator<Item = (usize, usize)>) -> i64 {
    items
        .map(|(d, r)| if d % 2 == 0 { r as i64 } else { -(r as i64) })
        .sum()
}

fn zero_characters(group: PointGroup) -> BTreeMap<usize, i64> {
    group.divisors().into_iter().map(|d| (d, 0)).collect()
}

fn accumulate(out: &mut BTreeMap<usize, i64>, degree: usize, mults: &BTreeMap<usize, usize>) {
    let sign = if degree.is_multiple_of(2) { 1 } else { -1 };
    for (d, k) in mults {
        *out.entry(*d).or_insert(0) += sign * *k as i64;
    }
}

/// One degree of a cohomology table: the abelian group and, when it is torsion-free, its
/// module structure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CohomologyEntry {
    pub group: FgAbGroup,
    pub module: Option<FpModule>,
}

/// Cohomology groups indexed by degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CohomologyTable {
    point_group: PointGroup,
    entries: BTreeMap<usize, CohomologyEntry>,
}

impl CohomologyTable {
    /// Checks that every module flattens to its group.
    pub fn new(point_group: PointGroup, entries: BTreeMap<usize, CohomologyEntry>) -> Result<Self> {
        for (d, e) in &entries {
            if let Some(m) = &e.module {
                point_group.ensure_same(m.group())?;
                if m.flatten() != e.group {
                    return Err(Error::Shape(format!(
                        "degree {d}: module flattens to {}, group is {}",
                        m.flatten(),
                        e.group
                    )));
                }
            }
        }
        Ok(CohomologyTable {
            point_group,
            entries,
        })
    }

    /// A table of bare groups with no module structure.
    pub fn from_groups(point_group: PointGroup, groups: BTreeMap<usize, FgAbGroup>) -> Self {
        CohomologyTable {
            point_group,
            entries: groups
                .into_iter()
                .map(|(d, group)| {
                    (
                        d,
                        CohomologyEntry {
                            group,
                            module: None,
                        },
                    )
                })
                .collect(),
        }
    }

    pub fn point_group(&self) -> PointGroup {
        self.point_group
    }

    pub fn entries(&self) -> &BTreeMap<usize, CohomologyEntry> {
        &self.entries
    }

    pub fn entry(&self, d: usize) -> Option<&CohomologyEntry> {
        self.entries.get(&d)
    }

    /// The group in degree `d`, zero outside the stored range.
    pub fn group(&self, d: usize) -> FgAbGroup {
        self.entries
            .get(&d)
            .map(|e| e.group.clone())
            .unwrap_or_default()
    }

    pub fn module(&self, d: usize) -> Option<&FpModule> {
        self.entries.get(&d).and_then(|e| e.module.as_ref())
    }

    /// The nonzero groups by degree.
    pub fn groups(&self) -> BTreeMap<usize, FgAbGroup> {
        self.entries
            .iter()
            .filter(|(_, e)| !e.group.is_zero())
            .map(|(d, e)| (*d, e.group.clone()))
            .collect()
    }

    pub fn top_degree(&self) -> usize {
        self.entries.keys().next_back().copied().unwrap_or(0)
    }

    pub fn is_torsion_free(&self) -> bool {
        self.entries.values().all(|e| e.group.is_free())
    }

    pub fn total_rank(&self) -> usize {
        self.entries.values().map(|e| e.group.free_rank()).sum()
    }

    pub fn euler_characteristic(&self) -> i64 {
        alternating(self.entries.iter().map(|(d, e)| (*d, e.group.free_rank())))
    }

    /// Per-character Euler characteristic, as for [`CochainComplex::character_euler`].
    pub fn character_euler(&self) -> Result<BTreeMap<usize, i64>> {
        let mut out = zero_characters(self.point_group);
        for (deg, e) in &self.entries {
            if e.group.is_zero() {
                continue;
            }
            let m = e.module.as_ref().ok_or_else(|| Error::Torsion {
                group: e.group.to_string(),
            })?;
            let mults = character_multiplicities(&m.lattice_form()?.lattice);
            accumulate(&mut out, *deg, &mults);
        }
        Ok(out)
    }

    /// The module in every nonzero degree, or the first degree where it is missing.
    pub fn modules(&self) -> Result<BTreeMap<usize, &FpModule>> {
        self.entries
            .iter()
            .filter(|(_, e)| !e.group.is_zero())
            .map(|(d, e)| match &e.module {
                Some(m) => Ok((*d, m)),
                None => Err(Error::TorsionObstruction {
                    degree: *d,
                    group: e.group.to_string(),
                }),
            })
            .collect()
    }
}

impl fmt::Display for CohomologyTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (d, e)) in self.entries.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "H^{d} = {}", e.group)?;
        }
        Ok(())
    }
}

/// Cohomology of a complex. Torsion-free degrees also get their module structure, read off
/// from the η-action on a complement of the coboundaries.
pub fn cohomology_table(c: &CochainComplex) -> Result<CohomologyTable> {
    let mut entries = BTreeMap::new();
    for d in 0..c.modules.len() {
        let sq = c.subquotient(d)?;
        let group = sq.group();
        let module = if group.is_zero() {
            Some(FpModule::zero(c.point_group))
        } else if group.is_free() {
            let action = c.modules[d].flat_action();
            let q = sq.lattice_quotient(c.point_group, &action)?;
            Some(lattice_to_fp(&q.module)?)
        } else {
            None
        };
        entries.insert(d, CohomologyEntry { group, module });
    }
    CohomologyTable::new(c.point_group, entries)
}

/// Cohomology groups only, without module structure.
pub fn cohomology_groups(c: &CochainComplex) -> Result<CohomologyTable> {
    let groups = (0..c.modules.len())
        .map(|d| Ok((d, c.subquotient(d)?.group())))
        .collect::<Result<BTreeMap<_, _>>>()?;
    Ok(CohomologyTable::from_groups(c.point_group, groups))
}
