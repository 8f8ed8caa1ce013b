//! Exact computation in adjoint Chevalley groups over finite commutative
//! local rings: root systems, integral structure constants, generator
//! matrices, Bruhat-style decompositions, and the first-order definability
//! machinery built on top of them.

pub mod definability;
pub mod error;
pub mod gauss;
pub mod group;
pub mod interp;
pub mod lie;
mod poly;
pub mod rings;
pub mod roots;

pub use error::{Error, Result};
