//! Rotationally symmetric expanding gradient Ricci solitons: construction of
//! the Bryant family by shooting from the axis, and numerical verification of
//! the identities, barrier inequalities and conical asymptotics they satisfy.
//!
//! Every numerical routine is generic over [`Scalar`] (`f32` or `f64`); the
//! aliases below fix `f64`, which is what the command-line tool uses.

pub mod asymptotics;
pub mod error;
pub mod identities;
pub mod io;
pub mod jet;
pub mod ode;
pub mod radial_pde;
pub mod report;
pub mod scalar;
pub mod symmetry;
pub mod warped;

pub use error::{Error, Result};
pub use scalar::Scalar;

pub type Profile = ode::SolitonProfile<f64>;
pub type GeomPoint = warped::GeomPoint<f64>;
pub type FrameTensor2 = warped::FrameTensor2<f64>;
