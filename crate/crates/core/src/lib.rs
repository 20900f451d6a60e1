//! Real-graded lattices and the regrading of antichain cutsets.
//!
//! The crate is organised around a small [`GradedLattice`] contract and a few
//! concrete families:
//!
//! * [`finite`]: Boolean lattices, partition lattices, subspace lattices over a
//!   prime field and the product-plane lattice used for discontinuity demos.
//! * [`interval`]: the measurable Boolean lattice restricted to finite unions of
//!   half-open rational intervals, graded by Lebesgue measure or by a step
//!   density.
//! * [`limit`]: rank-preserving embeddings over the divisibility order, the
//!   up-down metric and dyadic (or any divisibility-chain) approximation.
//!
//! [`regrading`] builds, for an antichain cutset `A`, a new grading `σ` under
//! which `A` is the zero level set. All arithmetic is exact.

pub mod error;
pub mod finite;
pub mod interval;
pub mod lattice;
pub mod limit;
pub mod profile;
pub mod rank;
pub mod regrading;
pub mod sample;
pub mod suites;

pub use error::{Error, Result};
pub use lattice::{Adjoined, ChainSample, Extended, GradedLattice, JoinOrMeet};
pub use rank::{Rank, RankInterval, Q};
