//! Fixtures shared by the benchmarks.

use bredon_core::{IntMatrix, PullbackOptions, PullbackSpec};

/// A dense square matrix with small entries and full rank for every `n` used here.
pub fn dense_matrix(n: usize) -> IntMatrix {
    IntMatrix::from_fn(n, n, |i, j| {
        let v = (7 * i + 13 * j + i * j) % 11;
        (v as i64 - 5 + if i == j { 11 } else { 0 }).into()
    })
}

/// The four-block pullback with the given checks.
pub fn vafa_witten(oracle: bool, tor_depth: usize) -> PullbackSpec {
    PullbackSpec::vafa_witten(PullbackOptions {
        oracle,
        tor_depth,
        full_product_oracle: false,
    })
}
