//! Coherent states, Bohr-Sommerfeld loop states and semiclassical asymptotics
//! for the irreducible representations of SU(2) realized on holomorphic
//! sections over the sphere.

pub mod asymptotics;
pub mod coherent;
pub mod error;
pub mod hopf;
pub mod quadrature;
pub mod special;
pub mod stationary;
pub mod su2;
pub mod verify;

pub use error::{Error, Result};
