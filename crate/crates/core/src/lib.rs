//! Exact computations with linear systems on tropical curves and their
//! quotients by finite isometry groups.
//!
//! The crate works entirely over the rationals. A [`Curve`] is given by a
//! metric-graph model; [`Divisor`]s and piecewise linear functions
//! ([`PlFunction`]) live on it. Given a finite [`GroupAction`], the
//! [`quotient`](morphism::build_quotient) gives a harmonic morphism to the
//! quotient curve, and [`LinearSystem`] computes generators of the
//! invariant part of a complete linear system.

pub mod divisor;
pub mod error;
pub mod firing;
pub mod fixtures;
pub mod function;
pub mod graph;
pub mod json;
pub mod linalg;
pub mod linsys;
pub mod morphism;
pub mod group;
pub mod scalar;
pub mod subgraph;

pub use divisor::Divisor;
pub use error::{Error, Result};
pub use firing::{chip_firing, decompose_chip_firing, ChipFiringMove, Decomposition};
pub use function::PlFunction;
pub use graph::{Curve, Edge, Point, Remodel, Vertex};
pub use linsys::{normalize, project, GeneratorSet, LinearSystem, TropicalCombination};
pub use morphism::{build_quotient, Degree, EdgeImage, Morphism, Quotient};
pub use group::{close_group, GroupAction, InvariantModel, Isometry, OrbitData};
pub use scalar::{Length, Rational, Value};
pub use subgraph::Subgraph;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/curves.md")]
    mod curves {}
    #[doc = include_str!("../../../book/src/functions.md")]
    mod functions {}
    #[doc = include_str!("../../../book/src/quotients.md")]
    mod quotients {}
    #[doc = include_str!("../../../book/src/linear-systems.md")]
    mod linear_systems {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
    #[doc = include_str!("../../../README.md")]
    mod readme {}
}
