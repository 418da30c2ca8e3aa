//! Topological entropy of upper semi-continuous set-valued dynamical systems.
//!
//! A set-valued function F maps each point of a compact metric space X to a
//! non-empty compact subset of X; it is upper semi-continuous exactly when
//! its graph is closed. This crate works with two concrete carriers:
//!
//! * finite metric spaces, where F is a boolean adjacency relation
//!   ([`relation::FiniteRelation`]), and
//! * the unit interval, where the graph of F is a finite union of segments
//!   and points ([`interval::IntervalSvf`]) that can be discretized onto a
//!   grid.
//!
//! On top of those sit orbit spaces with the max metric ([`orbit`]),
//! epsilon-separated and epsilon-spanning set computations ([`separation`]),
//! the entropy estimation pipeline and its exact subshift oracle
//! ([`entropy`]), certificate detectors for positive and unbounded entropy
//! ([`detect`]), and instance-level checks of the theorem inequalities
//! ([`harness`]). [`spec`] holds the JSON system format used by the CLI.

pub mod detect;
pub mod entropy;
pub mod error;
pub mod harness;
pub mod interval;
pub mod num;
pub mod orbit;
pub mod relation;
pub mod separation;
pub mod space;
pub mod spec;

pub use error::{Error, Result};
pub use relation::FiniteRelation;
pub use space::MetricPointSet;
