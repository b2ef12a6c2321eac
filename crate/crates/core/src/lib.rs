//! Exact Lie-algebraic and curvature kernels for conformally homogeneous
//! pseudo-Riemannian spaces.

// index loops mirror the tensor formulas they implement
#![allow(clippy::needless_range_loop)]

pub mod curvature;
pub mod error;
pub mod io;
pub mod lie;
pub mod linalg;
pub mod models;
pub mod pseudo;
pub mod scalar;
pub mod spinor;

pub use error::{Error, Result};

use rand::SeedableRng;

/// Seeded generator used by every randomised sweep.
pub fn rng(seed: u64) -> rand_chacha::ChaCha8Rng {
    rand_chacha::ChaCha8Rng::seed_from_u64(seed)
}
