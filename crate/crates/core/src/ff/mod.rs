//! Finite fields F_q (q = p^r) in the polynomial basis, dense linear algebra
//! over them, and exact counting of subspaces and rank classes.

mod counting;
mod field;
pub mod io;
mod matrix;
mod poly;

pub use counting::{
    count_rank_at_most, count_rank_matrices, gaussian_binomial, general_linear_order, sample_matrix_of_rank, subspaces_containing,
};
pub use field::{builtin_modulus, prime_power, Field, FieldElem, FieldSpec, DEFAULT_MAX_Q};
pub use io::{parse_matrix, write_matrix};
pub use matrix::{random_vector, unit_vector, Matrix, Solution, Vector};
