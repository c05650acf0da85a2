//! Exact integer linear algebra: the substrate for every boundary map in the engine.

mod lattice;
mod matrix;
pub mod snf;

pub(crate) use lattice::elementary_divisors;
pub use lattice::{
    image_lattice, kernel_lattice, rank, solve_columns, solve_exact, spans, ColumnEchelon, Lattice,
};
pub use matrix::IntMatrix;
pub use snf::{snf, snf_diagonal, SnfDecomposition};
