use std::fmt;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::complex::{lift_canonical, CochainComplex};
use crate::error::{Error, Result};
use crate::linalg::IntMatrix;
use crate::ring::{FpModule, ModuleMap, PointGroup};

/// Names of the blocks shipped with the engine.
pub const BUILTIN_BLOCKS: [&str; 3] = ["line-minus", "plane-i", "point"];

/// A semidirect-product building block: equivariant cells per degree and the cochain
/// differentials between them.
///
/// A cell with isotropy of order `m` contributes the coefficient module `R(C_n)/(η^m - 1)`.
/// Differentials are integer matrices in the canonical Z-basis of these modules: a cell of
/// isotropy order `m` contributes the basis `1, η, ..., η^(m-1)`, and cells are listed in
/// order. `differentials[d]` maps degree `d` to degree `d + 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GcwBlock {
    name: String,
    point_group: PointGroup,
    cells: Vec<Vec<usize>>,
    differentials: Vec<IntMatrix>,
}

impl GcwBlock {
    /// Builds a block and rejects it unless [`validate_block`] finds nothing.
    pub fn new(
        name: impl Into<String>,
        point_group: PointGroup,
        cells: Vec<Vec<usize>>,
        differentials: Vec<IntMatrix>,
    ) -> Result<Self> {
        let block = Self::from_parts(name, point_group, cells, differentials);
        let report = validate_block(&block);
        if let Some(first) = report.findings.first() {
            return Err(Error::InvalidBlock {
                name: block.name,
                reason: first.to_string(),
            });
        }
        Ok(block)
    }

    /// Builds a block without any checks; use [`validate_block`] to inspect it.
    pub fn from_parts(
        name: impl Into<String>,
        point_group: PointGroup,
        cells: Vec<Vec<usize>>,
        differentials: Vec<IntMatrix>,
    ) -> Self {
        GcwBlock {
            name: name.into(),
            point_group,
            cells,
            differentials,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn point_group(&self) -> PointGroup {
        self.point_group
    }

    /// Top cell degree; a block with no cells has dimension 0.
    pub fn dimension(&self) -> usize {
        self.cells.len().saturating_sub(1)
    }

    pub fn cells(&self) -> &[Vec<usize>] {
        &self.cells
    }

    pub fn differentials(&self) -> &[IntMatrix] {
        &self.differentials
    }

    /// Z-rank of the degree-`d` cochain group.
    pub fn cochain_rank(&self, d: usize) -> usize {
        self.cells.get(d).map_or(0, |c| c.iter().sum())
    }

    pub fn cochain_module(&self, d: usize) -> Result<FpModule> {
        FpModule::cyclic_sum(
            self.point_group,
            self.cells.get(d).map_or(&[][..], Vec::as_slice),
        )
    }

    pub fn summary(&self) -> BlockSummary {
        BlockSummary {
            name: self.name.clone(),
            point_group_order: self.point_group.order(),
            dimension: self.dimension(),
            cells: self.cells.clone(),
            cochain_ranks: (0..self.cells.len())
                .map(|d| self.cochain_rank(d))
                .collect(),
        }
    }
}

/// Serializable description of a block's cells.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockSummary {
    pub name: String,
    pub point_group_order: usize,
    pub dimension: usize,
    /// Isotropy orders of the cells, per degree.
    pub cells: Vec<Vec<usize>>,
    /// Z-ranks of the cochain groups, per degree.
    pub cochain_ranks: Vec<usize>,
}

/// Restriction `R(C_4) → R(C_2)` in canonical bases.
fn restriction_matrix(n: usize, m: usize) -> IntMatrix {
    IntMatrix::from_fn(m, n, |i, j| if j % m == i { 1.into() } else { 0.into() })
}

/// Augmentation `R(C_m) → Z` in the canonical basis.
fn augmentation(m: usize) -> IntMatrix {
    IntMatrix::from_fn(1, m, |_, _| 1.into())
}

/// The built-in blocks over `C_4`.
///
/// `line-minus` is the real line with `Z ⋊ C_4` acting through `-1`: two vertex orbits with
/// full isotropy and one edge orbit with isotropy `C_2`. `plane-i` is the plane with
/// `Z^2 ⋊ C_4` acting through `i`: vertex orbits with isotropy `C_4, C_4, C_2`, two free edge
/// orbits and one free face orbit. `point` is a single fixed point.
pub fn builtin_block(name: &str) -> Result<GcwBlock> {
    let c4 = PointGroup::cyclic(4);
    match name {
        "line-minus" => {
            // edge oriented from vertex 0 to vertex 1; value at head minus value at tail
            let res = restriction_matrix(4, 2);
            let d0 = res.neg().hstack(&res);
            GcwBlock::new(name, c4, vec![vec![4, 4], vec![2]], vec![d0])
        }
        "plane-i" => {
            let aug = IntMatrix::block_diag(&[augmentation(4), augmentation(4), augmentation(2)]);
            let incidence = IntMatrix::from_i64(2, 3, &[-1, 1, 0, 0, -1, 1]);
            let d0 = &incidence * &aug;
            let d1 = IntMatrix::zeros(1, 2);
            GcwBlock::new(
                name,
                c4,
                vec![vec![4, 4, 2], vec![1, 1], vec![1]],
                vec![d0, d1],
            )
        }
        "point" => GcwBlock::new(name, c4, vec![vec![4]], Vec::new()),
        _ => Err(Error::UnknownBlock(name.to_string())),
    }
}

/// One problem found in a block.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Finding {
    /// An isotropy order that does not divide the point-group order.
    Divisor {
        degree: usize,
        cell: usize,
        isotropy: usize,
        group_order: usize,
    },
    /// The number of differentials does not match the number of degrees.
    DifferentialCount { expected: usize, found: usize },
    /// A differential of the wrong shape.
    Shape {
        degree: usize,
        expected: (usize, usize),
        found: (usize, usize),
    },
    /// A differential that does not commute with η.
    NotEquivariant { degree: usize },
    /// Two consecutive differentials whose composite is nonzero.
    NonzeroSquare { degree: usize },
}

impl fmt::Display for Finding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Finding::Divisor {
                degree,
                cell,
                isotropy,
                group_order,
            } => write!(
                f,
                "cell {cell} in degree {degree} has isotropy order {isotropy}, \
                 which does not divide {group_order}"
            ),
            Finding::DifferentialCount { expected, found } => {
                write!(f, "expected {expected} differentials, found {found}")
            }
            Finding::Shape {
                degree,
                expected,
                found,
            } => write!(
                f,
                "differential in degree {degree} is {}x{}, expected {}x{}",
                found.0, found.1, expected.0, expected.1
            ),
            Finding::NotEquivariant { degree } => {
                write!(f, "differential in degree {degree} does not commute with η")
            }
            Finding::NonzeroSquare { degree } => {
                write!(f, "d^2 != 0 from degree {degree} to degree {}", degree + 2)
            }
        }
    }
}

/// Everything [`validate_block`] found wrong with a block; empty when the block is sound.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockReport {
    pub block: String,
    pub findings: Vec<Finding>,
}

impl BlockReport {
    pub fn is_valid(&self) -> bool {
        self.findings.is_empty()
    }
}

/// Checks isotropy orders, differential shapes, η-equivariance and `d^2 = 0`.
pub fn validate_block(block: &GcwBlock) -> BlockReport {
    let mut findings = Vec::new();
    let n = block.point_group.order();
    for (degree, cells) in block.cells.iter().enumerate() {
        for (cell, &m) in cells.iter().enumerate() {
            if m == 0 || !n.is_multiple_of(m) {
                findings.push(Finding::Divisor {
                    degree,
                    cell,
                    isotropy: m,
                    group_order: n,
                });
            }
        }
    }
    let expected = block.cells.len().saturating_sub(1);
    if block.differentials.len() != expected {
        findings.push(Finding::DifferentialCount {
            expected,
            found: block.differentials.len(),
        });
    }
    if !findings.is_empty() {
        return BlockReport {
            block: block.name.clone(),
            findings,
        };
    }

    let mut shapes_ok = true;
    for (d, m) in block.differentials.iter().enumerate() {
        let want = (block.cochain_rank(d + 1), block.cochain_rank(d));
        if m.shape() != want {
            shapes_ok = false;
            findings.push(Finding::Shape {
                degree: d,
                expected: want,
                found: m.shape(),
            });
        }
    }
    if shapes_ok {
        for (d, m) in block.differentials.iter().enumerate() {
            let equivariant = block_map(block, d, m).is_ok_and(|f| f.is_equivariant());
            if !equivariant {
                findings.push(Finding::NotEquivariant { degree: d });
            }
        }
        for (d, pair) in block.differentials.windows(2).enumerate() {
            if !(&pair[1] * &pair[0]).entries().iter().all(Zero::is_zero) {
                findings.push(Finding::NonzeroSquare { degree: d });
            }
        }
    }
    BlockReport {
        block: block.name.clone(),
        findings,
    }
}

fn block_map(block: &GcwBlock, d: usize, m: &IntMatrix) -> Result<ModuleMap> {
    let src = block.cochain_module(d)?;
    let tgt = block.cochain_module(d + 1)?;
    lift_canonical(&src, &tgt, m)
}

/// Assembles the Bredon cochain complex of a block: one restriction module per cell and
/// the block's differentials lifted to the presentations.
pub fn bredon_cochain_complex(block: &GcwBlock) -> Result<CochainComplex> {
    let report = validate_block(block);
    if let Some(first) = report.findings.first() {
        return Err(match first {
            Finding::NonzeroSquare { degree } => Error::NonzeroSquare { degree: *degree },
            other => Error::InvalidBlock {
                name: block.name.clone(),
                reason: other.to_string(),
            },
        });
    }
    let modules = (0..block.cells.len())
        .map(|d| block.cochain_module(d))
        .collect::<Result<Vec<_>>>()?;
    let maps = block
        .differentials
        .iter()
        .enumerate()
        .map(|(d, m)| block_map(block, d, m))
        .collect::<Result<Vec<_>>>()?;
    CochainComplex::new(block.point_group, modules, maps)
}
