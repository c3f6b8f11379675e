#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod distribution;
pub mod error;
pub mod montecarlo;
pub mod quadrature;
pub mod roots;
pub mod special;
pub mod spectral;
pub mod statistic;
