//! Linear algebra over Q_p with tracked precision.

pub mod laurent;
pub mod matrix;
pub mod subspace;

pub use laurent::{limit_span, LaurentVector};
pub use matrix::{Matrix, Rref};
pub use subspace::Subspace;
