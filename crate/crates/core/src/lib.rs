//! Computable p-adic Hodge theory: isocrystals and their slopes, filtered
//! spaces and semistability, nilpotent orbits, and the Mahler/character
//! calculus on the p-adic unit disc.

pub mod error;
pub mod filtration;
pub mod fourier;
pub mod isocrystal;
pub mod linalg;
pub mod orbit;
pub mod padic;
pub mod rational;
pub mod verify;

pub use error::{Error, Result};
pub use rational::Rational;
