//! Local-limit machinery for bounded-degree colored graphs.
//!
//! The crate turns statistics of rooted colored tree types into finite
//! graphs and back:
//!
//! * [`tree`] — canonical forms, enumeration, truncation and `adm` counts
//!   for rooted colored tree types; [`ball`] does the same for general
//!   rooted ball types (which may contain cycles) and extracts balls from
//!   finite graphs.
//! * [`dist`] — probability distributions over radius-(k+1) tree types,
//!   with exact rational weights, the mass-transport (unimodularity)
//!   residual check, and truncation projections.
//! * [`synth`] — builds a finite graph with girth at least `2k+4` whose
//!   k-ball statistics approximate a given unimodular distribution, plus
//!   graph powers and rainbow ball-colorings.
//! * [`audit`] — girth, deficiency classification, exact ball-type
//!   statistics, the truncated local-convergence metric, and perturbation
//!   bounds.
//! * [`interp`] — strongly-local interpretation schemes on colored graphs
//!   and the end-to-end pipeline that approximates a finite target graph
//!   through a spanning forest.
//! * [`io`] — the line-based text formats for graphs, distributions and
//!   schemes used by the CLI.

pub mod audit;
pub mod ball;
pub mod dist;
pub mod error;
pub mod gen;
pub mod graph;
pub mod interp;
pub mod io;
pub mod synth;
pub mod tree;

pub use ball::BallType;
pub use dist::TypeDistribution;
pub use error::{Error, Result};
pub use graph::ColoredGraph;
pub use tree::{Params, TreeType};
