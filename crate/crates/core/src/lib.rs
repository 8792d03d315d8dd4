//! Embedded resolution of `f(x, y) + z^2` from the decorated resolution graph of `f`.

pub mod assembler;
pub mod cli_io;
pub mod curve_graph;
pub mod error;
pub mod lattice;
pub mod local_models;
pub mod pic;
pub mod surface_graph;
pub mod tower;
pub mod verifier;

pub use error::{Error, Result};
