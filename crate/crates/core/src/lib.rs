//! Quadratic, hermitian and sesquilinear forms over rings with involution,
//! computed exactly.

pub mod arithmetic;
pub mod cli;
pub mod error;
pub mod genus_pipeline;
pub mod isometry_engine;
pub mod quadratic_space;
pub mod ring_core;
pub mod transfer;
pub mod unitary_algebra;

pub use error::{Error, Result};
