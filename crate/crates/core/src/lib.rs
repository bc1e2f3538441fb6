//! Hyperspace dynamics of pointwise periodic homeomorphisms at desk scale.
//!
//! A [`System`] is a bijection of a finite carrier in which every point is
//! periodic. Finite non-empty subsets of the carrier ([`FiniteSet`]) stand in
//! for points of the hyperspace, and the induced map sends a set to its
//! image. Everything downstream (return series, recurrence certificates,
//! chain structure, odometer signatures, spanning counts) is phrased at an
//! explicit `(eps, horizon)` scale.
//!
//! The crate is `no_std` and only needs `alloc`. File formats, the scenario
//! runner and parallel drivers live in the `hyperlab` crate.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod chains;
pub mod classifiers;
pub mod entropy;
pub mod hyperspace;
pub mod metric;
pub mod odometer;
pub mod systems;

mod graph;

pub use chains::{ChainDigraph, ChainError, CycleDecomposition};
pub use classifiers::{APCertificate, PairVerdict, URCertificate};
pub use entropy::SpanningReport;
pub use hyperspace::{ReturnStats, SetFamily};
pub use metric::{CirclePoint, DistanceTable, FiniteSet, MetricError, Point, Rational, Space, DEFAULT_TOLERANCE};
pub use odometer::{OdometerAddress, OdometerSignature};
pub use systems::{Example63Config, System, SystemError};
