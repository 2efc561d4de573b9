//! The orthogonal group O^-(2n, q), its parabolic subgroups and the eight
//! double-coset families used to build codes.

pub mod enumerate;
pub mod matrix;
pub mod spec;
pub mod sums;

pub use enumerate::{
    double_coset, double_coset_elements, enumerate_q_minus, enumerate_so2, theta_minus, weyl_elements, GroupElement,
    WeylElements,
};
pub use matrix::MatrixGF;
pub use spec::{dc_cardinality, parabolic_indices, CosetConstants, DoubleCosetSpec, Family, Sign};
pub use sums::{b_r_sum, exp_sum_dc, trace_distribution, Mode, TraceDistribution};
