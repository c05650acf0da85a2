//! Exact Bredon cohomology with representation-ring coefficients for crystallographic
//! groups built as iterated pullbacks over a cyclic point group, together with the
//! Eilenberg-Moore E2 page, equivariant K-theory and K-homology.

pub mod abelian;
pub mod bredon;
pub mod document;
pub mod error;
pub mod homology;
pub mod ktheory;
pub mod linalg;
pub mod pullback;
pub mod ring;

pub use abelian::{hom_ext_z, quotient_group, FgAbGroup};
pub use bredon::{
    bredon_cochain_complex, builtin_block, cohomology_table, validate_block, CochainComplex,
    CohomologyTable, GcwBlock,
};
pub use document::{parse_spec, OutputFormat, SpecDocument, SpecError};
pub use error::{Error, Result};
pub use ktheory::{ahss_collapse, full_report, uct_dualize, KTheoryResult, Report};
pub use linalg::{kernel_lattice, snf, solve_exact, IntMatrix, Lattice, SnfDecomposition};
pub use pullback::{
    compute_pullback_cohomology, em_e2, kunneth_tensor, product_complex, run_pullback,
    BigradedTable, PullbackOptions, PullbackRun, PullbackSpec,
};
pub use ring::{
    lattice_to_fp, presentation_kernel, tor, AnyModule, FpModule, LatticeModule, ModuleMap,
    PointGroup, RingElement, ZModule,
};
