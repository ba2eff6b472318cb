//! Hyperlattices of nilpotent orbits: enumeration, special and riding
//! chains, quotients by the two standard congruences, and an isomorphism
//! classifier with a brute-force cross-check.

pub mod chains;
pub mod cli;
pub mod error;
pub mod export;
pub mod hyperlattice;
pub mod isomorphism;
pub mod quotient;
pub mod segre;

pub use error::{Error, Result};
pub use hyperlattice::{Hyperlattice, Hypertuple};
pub use segre::{RawSegre, SegreChar};
