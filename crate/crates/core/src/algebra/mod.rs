//! Finite rings and matrices over them.

pub mod matrix;
pub mod ring;

pub use matrix::{
    left_kernel, mat_inverse, row_canonical, vec_add, vec_mat_mul, vec_scale, vec_sub, MatrixError, RingMatrix,
    RowReducer,
};
pub use ring::{is_prime, Elem, Ring, RingError, RingKind};
