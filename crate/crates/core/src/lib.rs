//! Bifurcation diagrams of d-concave nonautonomous scalar ODEs
//!
//! `x' = -a3(ω·t) x³ + a2(ω·t) x² + a1(ω·t) x + λx + μx²`
//!
//! The crate computes pullback attractors, Lyapunov exponents and minimal-set
//! censuses along parameter scans, evaluates closed-form criteria that decide
//! the shape of the bifurcation diagram, and implements the constructions
//! that produce coefficients with a prescribed diagram.

// Negated float comparisons reject NaN along with out-of-range values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod attractor;
pub mod base_flow;
pub mod cli;
pub mod construct;
pub mod criteria;
pub mod diagram;
pub mod dynamics;
pub mod error;
pub mod integrator;
pub mod jet;
pub mod spectrum;
pub mod twoparam;

pub use base_flow::{CoefficientEntry, CoefficientFn, Driver, DriverKind, TableEntry};
pub use dynamics::{flow_map, Family, Flow, Form};
pub use error::{Error, Result};
