//! Multilevel graph partitioning driven by small actor-critic graph networks.
//!
//! The crate is organised bottom-up:
//!
//! * [`graph`] holds the immutable [`Graph`], two-way [`Bisection`]s, three-way
//!   [`Separator3`]s and the partition quality metrics.
//! * [`coarsen`] builds heavy-edge matchings and interpolates labels back.
//! * [`nn`] is a tiny reverse-mode tape plus the two agent networks.
//! * [`a2c`] and [`train`] implement returns, the actor-critic loss, plain SGD
//!   and the multi-worker training driver.
//! * [`edge`] and [`vertex`] are the multilevel edge- and vertex-separator
//!   pipelines.
//! * [`ordering`] provides nested dissection, minimum degree and symbolic
//!   fill counting.
//! * [`io`] reads Matrix Market files, generates Delaunay graphs and builds
//!   training datasets.

pub mod a2c;
pub mod coarsen;
pub mod edge;
mod episode;
pub mod error;
pub mod graph;
pub mod io;
pub mod nn;
pub mod ordering;
pub mod train;
pub mod vertex;

pub use error::{Error, Result};
pub use graph::{Bisection, Graph, Label, Separator3, Side, Subgraph};
pub use nn::{Agent, TaskKind};
pub use ordering::{Permutation, SparsePattern};
