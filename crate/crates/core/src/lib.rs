//! Fidelity geometry of mixed states and lower bounds on the relative error
//! of ancilla-assisted cloning.
//!
//! [`states`] holds density matrices, fidelity and purifications; [`clone`]
//! builds cloning setups and evaluates the bound; [`search`] optimizes over
//! cloning unitaries and runs the randomized inequality checks. The `clonebound`
//! binary is a thin wrapper over [`cli::run`].

pub mod ensemble;
pub mod error;
pub mod cli;
pub mod clone;
pub mod formats;
pub mod matkernel;
pub mod measure;
pub mod search;
pub mod states;

pub use error::{Error, Result};
