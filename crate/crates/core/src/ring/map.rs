use num_bigint::BigInt;
use num_traits::Zero;

use super::module::{AnyModule, FpModule, LatticeForm, ZModule};
use super::RingElement;
use crate::error::{Error, Result};
use crate::linalg::{spans, IntMatrix};

/// An `R(C_n)`-linear map, given by its matrix on flattened Z-generators
/// (`target.flat_rank() x source.flat_rank()`).
///
/// Equivariance and well-definedness are checked modulo the target relations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModuleMap {
    source: AnyModule,
    target: AnyModule,
    matrix: IntMatrix,
}

impl ModuleMap {
    pub fn new(
        source: impl Into<AnyModule>,
        target: impl Into<AnyModule>,
        matrix: IntMatrix,
    ) -> Result<Self> {
        let map = Self::unchecked(source.into(), target.into(), matrix)?;
        if !map.respects_relations() {
            return Err(Error::InvalidMap(
                "source relations are not sent into the target relations".into(),
            ));
        }
        if !map.is_equivariant() {
            return Err(Error::InvalidMap("map does not commute with η".into()));
        }
        Ok(map)
    }

    /// Shape-checked only.
    pub fn unchecked(source: AnyModule, target: AnyModule, matrix: IntMatrix) -> Result<Self> {
        source.group().ensure_same(target.group())?;
        let want = (target.flat_rank(), source.flat_rank());
        if matrix.shape() != want {
            return Err(Error::Shape(format!(
                "map matrix is {:?}, modules need {want:?}",
                matrix.shape()
            )));
        }
        Ok(ModuleMap {
            source,
            target,
            matrix,
        })
    }

    pub fn zero(source: impl Into<AnyModule>, target: impl Into<AnyModule>) -> Result<Self> {
        let (s, t) = (source.into(), target.into());
        let m = IntMatrix::zeros(t.flat_rank(), s.flat_rank());
        Self::unchecked(s, t, m)
    }

    pub fn identity(module: impl Into<AnyModule>) -> Self {
        let m: AnyModule = module.into();
        let id = IntMatrix::identity(m.flat_rank());
        ModuleMap {
            source: m.clone(),
            target: m,
            matrix: id,
        }
    }

    /// Map between finitely presented modules given by a ring-element matrix
    /// `entries[i][j]`: generator `j` of the source goes to `Σ_i entries[i][j] e_i`.
    pub fn from_ring_matrix(
        source: FpModule,
        target: FpModule,
        entries: &[Vec<RingElement>],
    ) -> Result<Self> {
        let n = source.group().order();
        if entries.len() != target.generators()
            || entries.iter().any(|r| r.len() != source.generators())
        {
            return Err(Error::Shape(
                "ring matrix does not match generator counts".into(),
            ));
        }
        let mut m = IntMatrix::zeros(target.flat_rank(), source.flat_rank());
        for (i, row) in entries.iter().enumerate() {
            for (j, e) in row.iter().enumerate() {
                for k in 0..n {
                    for (c, coeff) in e.coords().iter().enumerate() {
                        if !coeff.is_zero() {
                            m[(i * n + (c + k) % n, j * n + k)] += coeff;
                        }
                    }
                }
            }
        }
        Self::new(source, target, m)
    }

    pub fn source(&self) -> &AnyModule {
        &self.source
    }

    pub fn target(&self) -> &AnyModule {
        &self.target
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    pub fn respects_relations(&self) -> bool {
        let image = &self.matrix * &self.source.flat_relations();
        spans(&self.target.flat_relations(), &image)
    }

    pub fn is_equivariant(&self) -> bool {
        let lhs = &self.matrix * &self.source.flat_action();
        let rhs = &self.target.flat_action() * &self.matrix;
        spans(&self.target.flat_relations(), &lhs.sub(&rhs))
    }

    /// Whether every image lies in the target relations.
    pub fn is_zero_map(&self) -> bool {
        spans(&self.target.flat_relations(), &self.matrix)
    }

    /// `self ∘ first`.
    pub fn compose(&self, first: &ModuleMap) -> Result<ModuleMap> {
        if first.target.flat_rank() != self.source.flat_rank() {
            return Err(Error::Shape("composition of incompatible maps".into()));
        }
        Self::unchecked(
            first.source.clone(),
            self.target.clone(),
            &self.matrix * &first.matrix,
        )
    }

    /// The matrix in the Z-bases of two torsion-free modules.
    pub fn lattice_matrix(&self, source: &LatticeForm, target: &LatticeForm) -> IntMatrix {
        &(&target.coords * &self.matrix) * &source.section
    }

    fn fp_ends(&self) -> Result<(&FpModule, &FpModule)> {
        match (self.source.as_fp(), self.target.as_fp()) {
            (Some(s), Some(t)) => Ok((s, t)),
            _ => Err(Error::InvalidMap(
                "tensoring needs finitely presented endpoints".into(),
            )),
        }
    }

    /// `self ⊗ 1_N : M ⊗ N → M' ⊗ N`.
    pub fn tensor_right(&self, n_mod: &FpModule) -> Result<ModuleMap> {
        let (src, tgt) = self.fp_ends()?;
        let n = src.group().order();
        let b = n_mod.generators();
        let (a, a2) = (src.generators(), tgt.generators());
        let mut m = IntMatrix::zeros(a2 * b * n, a * b * n);
        for s in 0..a {
            for k in 0..n {
                let col = s * n + k;
                for s2 in 0..a2 {
                    for k2 in 0..n {
                        let x = &self.matrix[(s2 * n + k2, col)];
                        if x.is_zero() {
                            continue;
                        }
                        for t in 0..b {
                            m[((s2 * b + t) * n + k2, (s * b + t) * n + k)] = x.clone();
                        }
                    }
                }
            }
        }
        Self::unchecked(src.tensor(n_mod)?.into(), tgt.tensor(n_mod)?.into(), m)
    }

    /// `1_M ⊗ g : M ⊗ N → M ⊗ N'`.
    pub fn tensor_left(m_mod: &FpModule, g: &ModuleMap) -> Result<ModuleMap> {
        let (src, tgt) = g.fp_ends()?;
        let n = src.group().order();
        let a = m_mod.generators();
        let (b, b2) = (src.generators(), tgt.generators());
        let mut m = IntMatrix::zeros(a * b2 * n, a * b * n);
        for t in 0..b {
            for k in 0..n {
                let col = t * n + k;
                for t2 in 0..b2 {
                    for k2 in 0..n {
                        let x = &g.matrix[(t2 * n + k2, col)];
                        if x.is_zero() {
                            continue;
                        }
                        for s in 0..a {
                            m[((s * b2 + t2) * n + k2, (s * b + t) * n + k)] = x.clone();
                        }
                    }
                }
            }
        }
        Self::unchecked(m_mod.tensor(src)?.into(), m_mod.tensor(tgt)?.into(), m)
    }

    pub fn scaled(&self, k: i64) -> ModuleMap {
        ModuleMap {
            source: self.source.clone(),
            target: self.target.clone(),
            matrix: self.matrix.scale(&BigInt::from(k)),
        }
    }
}
