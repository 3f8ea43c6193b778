//! Exact coefficient rings and dense linear algebra over them.

pub mod base;
pub mod gf;
pub mod hom;
pub mod lattice;
pub mod linalg;
pub mod matrix;
pub mod poly;

pub use base::{rat, rat_int, BaseRing, RingElem};
pub use hom::{ring_hom, RingHom};
pub use linalg::{solve_linear, Solution};
pub use matrix::Matrix;
