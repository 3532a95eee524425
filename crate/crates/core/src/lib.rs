//! Word calculus, finite presentations and decision procedures for braid
//! groups over closed orientable surfaces and their link-homotopy quotients.

#[cfg(feature = "cli")]
pub mod cli;
pub mod homs;
pub mod lab;
pub mod permutation;
pub mod presentations;
pub mod reduced_free;
pub mod rng;
pub mod surface;
pub mod verdict;
pub mod word;
