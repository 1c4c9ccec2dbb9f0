//! Shared fixtures for the benchmarks.

use tpp_core::{build_group, Group, Matrix, TppTriple};

pub fn group(spec: &str) -> Group {
    build_group(spec).expect("benchmark group spec")
}

/// The three factor subgroups of `cyc:2^3`, realizing `<2,2,2>`.
pub fn factor_triple(g: &Group) -> TppTriple {
    TppTriple::from_ids(g, &[0, 4], &[0, 2], &[0, 1]).expect("ids in range")
}

pub fn sample_matrix(rows: usize, cols: usize, seed: i64) -> Matrix {
    let values: Vec<i64> = (0..(rows * cols) as i64).map(|i| (i * 7 + seed * 3) % 19 - 9).collect();
    Matrix::from_i64(rows, cols, &values).expect("dimensions match")
}
