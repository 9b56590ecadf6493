//! Exact hypergeometric distribution toolkit with Hoeffding-style tail
//! bounds and a verification harness.
//!
//! The urn model: N balls, M of them white, n drawn uniformly without
//! replacement; the white count i among the drawn balls is hypergeometric.
//! [`dist`] evaluates the PMF, tails, and moments exactly (big rationals)
//! and in f64 log space. [`symmetry`] holds the three parameter symmetries
//! of the PMF. [`bounds`] evaluates the analytic upper- and lower-tail
//! ceilings. [`sampler`] is a seeded Monte Carlo oracle. [`report`] sweeps
//! parameter grids and certifies `exact <= hoeffding <= relaxed`, with
//! byte-reproducible CSV/JSON reports; [`cli`] exposes everything as a
//! command-line tool.

pub mod bounds;
pub mod cli;
pub mod dist;
pub mod error;
pub mod numeric;
pub mod report;
pub mod sampler;
pub mod symmetry;

pub use bounds::{BoundForm, BoundValue, TailSide, TailSpec};
pub use dist::{choose, ExactProb, Hypergeometric, LogFactorials, LogProb};
pub use error::{Error, Result};
pub use report::{grid_verify, GridSpec, Summary, VerifyReport, VerifyRow};
pub use sampler::{SampleConfig, TailEstimate};
pub use symmetry::PmfPoint;
