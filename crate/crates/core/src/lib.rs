//! Closed-form K- and L-theory decompositions of group rings.

pub(crate) mod bigjson;
pub mod formal;
pub mod intlattice;
pub mod groupcat;
pub mod assembly;
pub mod oracles;
pub mod cli;
