#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod error;
pub mod linalg;
pub mod observable;
pub mod pauli;
pub mod partition;
pub mod problem;
pub mod random;
pub mod solver;
