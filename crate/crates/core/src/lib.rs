//! Cesàro kernels and Lebesgue constants for reflection-invariant weights
//! on the sphere, ball and simplex.

#![no_std]
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod cesaro;
pub mod error;
pub mod estimates;
pub mod kernels;
pub mod math;
pub mod orthopoly;
pub mod quadrature;
pub mod sampling;
pub mod weight;

pub use error::{Error, Result};
pub use weight::ReflectionWeight;
