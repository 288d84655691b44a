//! Linear codes over finite Frobenius rings under homogeneous weights, with
//! the tools needed to study them as error-correcting network codes.

pub mod algebra;
pub mod asymptotics;
pub mod bounds;
pub mod codes;
pub mod fixtures;
pub mod network;
pub mod simulator;
pub mod weights;

pub use weights::Rational;
