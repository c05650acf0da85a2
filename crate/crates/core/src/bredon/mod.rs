//! Equivariant cell structures of the building blocks, their Bredon cochain complexes with
//! representation-ring coefficients, and cohomology.

mod block;
mod complex;

pub use block::{
    bredon_cochain_complex, builtin_block, validate_block, BlockReport, BlockSummary, Finding,
    GcwBlock, BUILTIN_BLOCKS,
};
pub use complex::{
    cohomology_groups, cohomology_table, lift_canonical, CochainComplex, CohomologyEntry,
    CohomologyTable,
};
