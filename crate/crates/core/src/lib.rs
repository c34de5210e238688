#![allow(clippy::neg_cmp_op_on_partial_ord)]
pub mod catalog;
pub mod cli;
pub mod config;
pub mod distillation;
pub mod error;
pub mod estimator;
pub mod isa;
pub mod magic_state;
pub mod pareto;
pub mod report;
pub mod surface_code;
pub mod validate;

pub use error::{Error, Result};
