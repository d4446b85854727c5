//! Higher-order automorphic forms: higher invariants of group actions, Hecke
//! operators on higher invariants, Fourier-Taylor series, L-functions and
//! their convolutions.

pub mod conv;
pub mod error;
pub mod forms;
pub mod ft;
pub mod group;
pub mod hecke;
pub mod invariants;
pub mod lfun;
pub mod linalg;
pub mod modular;
pub mod quad;
pub mod scalar;
pub mod special;

pub use error::{Error, Result};
pub use linalg::{Matrix, Subspace, Vector};
pub use scalar::QI;
