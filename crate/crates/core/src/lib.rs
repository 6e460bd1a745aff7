//! Horizontally ruled area-minimizing surfaces in the first Heisenberg group.
//!
//! Given a lenticular domain `D ⊂ {x = 0}` and a small boundary datum, the
//! crate builds the ruled surface spanned by the datum, recovers it as a left
//! and a right intrinsic graph, constructs the calibration field that
//! certifies its minimality, and checks all of this numerically.

// Negated comparisons below are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod area;
pub mod calibration;
pub mod cli;
pub mod config;
pub mod domain;
pub mod error;
pub mod function;
pub mod graph;
pub mod harness;
pub mod heisenberg;
pub mod mesh;
pub mod numerics;
pub mod report;
pub mod roots;
pub mod ruling;

pub use domain::{BoundaryDatum, LenticularDomain, ZetaOptions, ZetaReport};
pub use error::{Error, Gate, Result};
pub use function::ScalarFn1D;
pub use heisenberg::{HPoint, HVector, WPoint};
