//! Reductions from SAT to model checking over succinctly represented graphs,
//! with the explicit-graph machinery needed to check them at desk scale.

pub mod circuit;
pub mod cli;
pub mod efgame;
mod error;
pub mod graph;
pub mod mso;
pub mod reduce;
pub mod sgr;
pub mod treedec;
pub mod verify;

pub use error::Error;
