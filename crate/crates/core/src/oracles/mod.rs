//! Brute-force checks of the quantities the engine computes, each by a
//! different algorithm from the one it checks.

mod h1;
mod orbits;
mod random;
mod recursion;
mod suite;
mod words;

use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};
use thiserror::Error;

pub use h1::{h1_coset_enum, structure_from_orders, DEFAULT_BOUND};
pub use orbits::{count_primitive_lines, primitive_lines, primitive_orbit_probe, OrbitProbe};
pub use random::{random_block_sum, random_conjugate, random_order_p_matrix};
pub use recursion::{bhs_iterate, l_periodic_table};
pub use suite::{run_suite, SuiteConfig};
pub use words::count_maximal_cyclic_classes;

use crate::intlattice::LatticeError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error("quotient has more than {bound} elements")]
    QuotientTooLarge { bound: u64 },
    #[error("the oracle needs a regular ring")]
    NeedsRegular,
    #[error("the action is not free away from 0")]
    NotFree,
}

/// Outcome of comparing the engine's value with an oracle's value on one input.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct OracleReport {
    pub name: String,
    pub input_digest: String,
    pub main_value: Value,
    pub oracle_value: Value,
    pub agree: bool,
}

impl OracleReport {
    /// Builds a report; `agree` is structural equality of the two values.
    pub fn compare(name: impl Into<String>, input: &Value, main: Value, oracle: Value) -> Self {
        OracleReport {
            name: name.into(),
            input_digest: digest(input),
            agree: main == oracle,
            main_value: main,
            oracle_value: oracle,
        }
    }
}

/// Hex SHA-256 of the compact JSON form of `input`.
pub fn digest(input: &Value) -> String {
    let bytes = Sha256::digest(input.to_string().as_bytes());
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}
