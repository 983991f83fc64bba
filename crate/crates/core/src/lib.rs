//! Solver and diagnostics for small linear rational-expectations models.
//!
//! The crate turns structural models of the form
//!
//! ```text
//! A0·y_t = A1·E_t(y_{t+1}) + A2·y_{t−1} + A3·x_t + u_t
//! x_t = Φx·x_{t−1} + v_t,   u_t = Φu·u_{t−1} + ε_t
//! ```
//!
//! into their decision-rule representation
//! `y_t = C·y_{t−1} + G1·x_t + G2·u_t`, classifies determinacy by
//! counting unstable pencil roots against forward-looking variables, and
//! reduces a catalog of named persistence models to a common scalar
//! autoregressive currency. On top of that sit observational-equivalence
//! checks (autocovariance and likelihood agreement), local identification
//! rank reports, growth-model convergence-rate calculators, and a Monte
//! Carlo engine for simulation and AR estimation. The `lrem` binary
//! exposes all of it on the command line.

pub mod algebra;
pub mod catalog;
pub mod cli;
pub mod docsmap;
pub mod equivalence;
pub mod growth;
pub mod identification;
pub mod montecarlo;
pub mod remodel;

pub use algebra::Matrix;
pub use catalog::{ARProcess, CatalogEntry};
pub use remodel::{SolvedModel, StateSpaceForm, StructuralREModel};
