//! The user guide from `book/`, included chapter by chapter as module
//! documentation: `cargo test --doc` compiles and runs every Rust snippet
//! in the book, so a chapter that drifts from the public API fails the
//! build. Rendered with `mdbook build book` for the standalone version.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("../../../book/src/gaussian-entropy.md")]
pub mod gaussian_entropy {}

#[doc = include_str!("../../../book/src/ou-benchmark.md")]
pub mod ou_benchmark {}

#[doc = include_str!("../../../book/src/delay-dynamics.md")]
pub mod delay_dynamics {}

#[doc = include_str!("../../../book/src/sdde-gaussian.md")]
pub mod sdde_gaussian {}

#[doc = include_str!("../../../book/src/monte-carlo.md")]
pub mod monte_carlo {}

#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
