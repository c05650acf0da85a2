//! The coefficient algebra `R(C_n) = Z[η]/(η^n - 1)` and its modules.
//!
//! Modules come in two shapes. [`FpModule`] is a finite presentation, which is what tensor
//! products and resolutions consume. [`LatticeModule`] is a free abelian group with an
//! automorphism, which is what cohomology produces. [`lattice_to_fp`] converts the second
//! into the first and [`FpModule::lattice_form`] goes back for torsion-free modules.

pub mod character;
mod element;
mod map;
mod module;
mod syzygy;

pub use element::{PointGroup, RingElement};
pub use map::ModuleMap;
pub use module::{cyclic_shift, AnyModule, FpModule, LatticeForm, LatticeModule, ZModule};
pub use syzygy::{
    free_resolution, lattice_to_fp, present_lattice, presentation_kernel, tor, LatticePresentation,
};

use crate::abelian::FgAbGroup;
use crate::error::Result;

pub fn ring_multiply(a: &RingElement, b: &RingElement) -> Result<RingElement> {
    a.multiply(b)
}

pub fn restriction_module(n: usize, m: usize) -> Result<FpModule> {
    FpModule::restriction(PointGroup::new(n)?, m)
}

pub fn free_module(n: usize, k: usize) -> Result<FpModule> {
    Ok(FpModule::free(PointGroup::new(n)?, k))
}

pub fn flatten(m: &FpModule) -> FgAbGroup {
    m.flatten()
}

pub fn tensor_over_ring(m: &FpModule, n: &FpModule) -> Result<FpModule> {
    m.tensor(n)
}

pub fn quotient_by_ideal(m: &FpModule, k: usize) -> Result<FpModule> {
    m.quotient_by_ideal(k)
}
