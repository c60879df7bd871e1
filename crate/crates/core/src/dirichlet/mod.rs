//! Dirichlet-ring generalization of the Q-transform.

pub mod arith;
pub mod transform;
pub mod zeta;

pub use arith::{dirichlet_convolve, dirichlet_inverse, moebius, ArithmeticSeq};
pub use transform::{
    apply_d, apply_d_inv, d_matrix, d_transform_2d, d_transform_2d_direct, divisors,
    operator_norm_bound, qd_transform, qd_transform_field, truncated_operator_norm, FreqVec,
};
pub use zeta::{
    broadband_average_1d, broadband_average_2d, broadband_average_2d_per_zero, c_d,
    load_zero_table, periodized_zeta, PartialSum, ZeroTable, ZetaParams,
};
