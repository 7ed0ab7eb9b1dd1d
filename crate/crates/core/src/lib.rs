//! Exact Gelfand-Tsetlin bases and generator matrices for type 1 unitary
//! irreducible modules of gl(m|n).

pub mod error;
pub mod exactnum;
pub mod fixture;
pub mod matels;
pub mod patterns;
pub mod repmat;
pub mod roots;
pub mod verify;
pub mod weights;

pub use error::{Error, Result};
