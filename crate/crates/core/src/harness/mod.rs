//! Verification suites, their reports, the clique cache and the seeded PRNG.

pub mod cache;
pub mod report;
pub mod rng;
pub mod suites;
