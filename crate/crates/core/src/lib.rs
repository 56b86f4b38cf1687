//! Numerical core for effective equidistribution of expanding horospheres in
//! hyperbolic 3-space.
//!
//! Everything here is `no_std` with `alloc`. File formats, the command line and
//! thread pools live in the `horolab` crate.

#![no_std]
#![allow(
    clippy::excessive_precision,
    clippy::neg_cmp_op_on_partial_ord,
    clippy::too_many_arguments
)]

extern crate alloc;

pub mod boundary;
pub mod exec;
pub mod experiment;
pub mod group;
pub mod kernels;
pub mod lattice;
pub mod quadrature;
pub mod rational;
pub mod uea;

pub use group::{GroupElement, Point, C64};
