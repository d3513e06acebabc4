//! Quantum inverse scattering toolkit for the 4-vertex model and its
//! relatives: symbolic and dense monodromy matrices, Yang-Baxter checks,
//! exact partition functions on small lattices, and a Poisson-bracket
//! expansion engine.

pub mod cli;
pub mod config;
pub mod dense;
pub mod error;
pub mod fixtures;
pub mod laurent;
pub mod models;
pub mod monodromy;
pub mod operator;
pub mod poisson;
pub mod scalar;
mod text;
pub mod vertex;
pub mod words;

pub use error::{QismError, Result};
