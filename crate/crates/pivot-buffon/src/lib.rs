//! Hitting probabilities for a two-segment pivot needle thrown onto a
//! lattice of parallel lines.
//!
//! A pivot needle is a pair of rigid segments of lengths `a` and `b` joined
//! at a point, each free to rotate independently about it. Thrown at random
//! onto a plane ruled by parallel lines spaced `d` apart (`a + b <= d`), it
//! meets the lines in 0, 1, or 2 points, with
//!
//! ```text
//! p(0) = 1 - (a+b)(pi + 2E(k)) / (pi^2 d)
//! p(1) = 4(a+b)E(k) / (pi^2 d)
//! p(2) = (a+b)(pi - 2E(k)) / (pi^2 d)
//! ```
//!
//! where `E(k)` is the complete elliptic integral of the second kind at
//! `k^2 = 4ab/(a+b)^2`. Setting `b = 0` recovers the classical Buffon
//! needle; `a = b` gives `k = 1` and `E(1) = 1`.
//!
//! The crate evaluates these closed forms ([`closed_form`]) on top of an
//! AGM elliptic kernel with an independent quadrature oracle ([`elliptic`],
//! [`quadrature`]), and validates them against a deterministic, chunkable
//! Monte Carlo simulation of the throw ([`montecarlo`]) using standard
//! goodness-of-fit machinery ([`stats`]).
//!
//! With the default `parallel` feature the simulation fans chunks out over
//! a rayon pool; without it the identical work runs on one thread. Reports
//! are bit-identical either way.

pub mod closed_form;
pub mod elliptic;
pub mod geometry;
pub mod montecarlo;
pub mod quadrature;
pub mod stats;

pub use closed_form::ClosedFormError;
pub use elliptic::{EllipticError, Modulus};
pub use geometry::{
    DistributionSource, GeometryError, HitDistribution, Lattice, PivotNeedle, ThrowSample,
};
pub use montecarlo::{EstimateReport, SimulationConfig, SimulationError, TallyCounts};
pub use stats::{GofResult, StatsError};
