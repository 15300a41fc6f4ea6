//! The guide's chapters, compiled so that every Rust listing runs as a
//! doctest.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("../../../book/src/geometry.md")]
pub mod geometry {}

#[doc = include_str!("../../../book/src/oracles.md")]
pub mod oracles {}

#[doc = include_str!("../../../book/src/frank-wolfe.md")]
pub mod frank_wolfe {}

#[doc = include_str!("../../../book/src/karcher-mean.md")]
pub mod karcher_mean {}

#[doc = include_str!("../../../book/src/benchmarks.md")]
pub mod benchmarks {}
