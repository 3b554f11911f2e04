//! Exact construction of the subregular-type W-algebras `W^(2)_n` through
//! their free-field realizations `n[m]`: generators, screenings, operator
//! product expansions and an independent Fock-space oracle.

pub mod cli;
pub mod error;
pub mod exact;
pub mod fock;
pub mod independence;
pub mod lattice;
pub mod oracle;
pub mod report;
pub mod screening;
pub mod suites;
pub mod tables;
pub mod wgen;
pub mod wick;

pub use error::{Error, Result};
