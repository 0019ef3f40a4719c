//! Law of the minimum of a Brownian bridge conditioned to pass through
//! given points.
//!
//! A Brownian bridge on `[0, 1]` pinned at interior points `(t_i, x_i)` is the
//! concatenation of independent bridges between consecutive knots. This crate
//! computes the law of the global minimum `m(X)` of such a process and of the
//! location `theta(X)` where the minimum is attained, three ways:
//!
//! - **closed forms** ([`analytic`]): minimum densities and distribution
//!   functions per segment, the survival function of the global minimum, the
//!   joint/marginal/conditional densities of `(m, theta)`, and the explicit
//!   probabilities that one segment's minimum undercuts another's;
//! - **quadrature** ([`quadrature`]): the probability that the minimum falls
//!   in a given inter-knot interval, via adaptive Gauss-Kronrod integration or
//!   a rectangle rule with a rigorous error bound;
//! - **exact simulation** ([`sampler`]): inverse-CDF draws of segment minima,
//!   acceptance/rejection draws of the minimum's location, and frequency
//!   reports with simultaneous confidence intervals.
//!
//! On top of these, [`bench`] scores non-adaptive black-box optimization
//! strategies (equidistant, uniform random, equal-probability points) by the
//! expected gap between the best sampled value and the true path minimum.
//!
//! The crate is `no_std` (requires `alloc`); all floating-point math goes
//! through `libm`, so results are bit-reproducible across platforms. The
//! companion `bridgemin-cli` crate adds file formats and a command-line
//! interface.

#![no_std]
// Quadrature nodes and rational-approximation coefficients keep their
// published digits; negated comparisons are NaN-rejecting guards.
#![allow(clippy::excessive_precision)]
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod analytic;
pub mod bench;
mod math;
pub mod model;
pub mod quadrature;
pub mod rng;
pub mod sampler;

pub use model::{Knots, KnotsError, PairwiseConfig, Segment};
pub use quadrature::{QuadConfig, QuadMethod, QuadResult};
pub use rng::RngHandle;
