//! Systole and diameter computations for closed hyperbolic surfaces.
//!
//! The crate is organised bottom-up:
//!
//! * [`hplane`]: upper half-plane points, Möbius isometries and the
//!   matrix-holonomy oracle for two-arc curves.
//! * [`hyptrig`]: closed-form length formulas, extremal-angle bounds and
//!   the systole/diameter inequalities with their slack functions.
//! * [`fuchsian`]: genus-2 surface groups (the Bolza surface and
//!   Fenchel–Nielsen surfaces) and ball enumeration in the group.
//! * [`systole`]: certified systole and short length spectrum.
//! * [`diameter`]: Dirichlet domains, quotient distance and certified
//!   diameter intervals.
//!
//! Data-parallel loops go through [`Exec`]; with the `parallel` feature
//! disabled every policy runs sequentially.

// Validity checks are written `!(x <= bound)` so that NaN fails them.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod diameter;
pub mod dirichlet;
pub mod error;
pub mod exec;
pub mod fuchsian;
pub mod hplane;
pub mod hyptrig;
mod minkowski;
pub mod systole;
pub mod tol;

pub use error::{Error, Result};
pub use exec::Exec;
