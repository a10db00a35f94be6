use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use super::OracleError;
use crate::intlattice::{check_order, fixed_sublattice, IntMatrix};

/// Stabilizer statistics for the action of `Z/p` on lines through primitive
/// vectors of bounded sup-norm.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct OrbitProbe {
    pub p: u64,
    pub bound: u64,
    /// Number of orbits met by the probed lines.
    pub classes: usize,
    pub trivial_stabilizers: usize,
    pub order_two_stabilizers: usize,
    pub other_stabilizers: usize,
}

impl OrbitProbe {
    /// Every stabilizer is trivial or of order two.
    pub fn dichotomy_holds(&self) -> bool {
        self.other_stabilizers == 0
    }

    /// Matches the parity rule: for `p = 2` all stabilizers have order two,
    /// for odd `p` all are trivial.
    pub fn parity_rule_holds(&self) -> bool {
        if self.p == 2 {
            self.trivial_stabilizers == 0
        } else {
            self.order_two_stabilizers == 0
        }
    }
}

/// Representative of the line through `v`: first nonzero entry positive.
fn line(v: &[BigInt]) -> Vec<BigInt> {
    match v.iter().find(|x| !x.is_zero()) {
        Some(x) if x.is_negative() => v.iter().map(|c| -c).collect(),
        _ => v.to_vec(),
    }
}

fn content(v: &[BigInt]) -> BigInt {
    v.iter().fold(BigInt::zero(), |g, x| g.gcd(x))
}

/// All vectors of `[-bound, bound]^d`, as an odometer.
fn box_vectors(d: usize, bound: i64) -> impl Iterator<Item = Vec<BigInt>> {
    let side = (2 * bound + 1) as u64;
    let total = side.checked_pow(d as u32).expect("probe box too large");
    (0..total).map(move |mut k| {
        (0..d)
            .map(|_| {
                let digit = (k % side) as i64 - bound;
                k /= side;
                BigInt::from(digit)
            })
            .collect()
    })
}

/// Primitive vectors of sup-norm at most `bound`, one per line.
pub fn primitive_lines(d: usize, bound: u64) -> BTreeSet<Vec<BigInt>> {
    box_vectors(d, bound as i64)
        .filter(|v| content(v) == BigInt::from(1))
        .map(|v| line(&v))
        .collect()
}

/// Enumerates lines through primitive vectors in the box, groups them into
/// orbits under `rho`, and records the order of each orbit's stabilizer.
pub fn primitive_orbit_probe(rho: &IntMatrix, p: u64, bound: u64) -> Result<OrbitProbe, OracleError> {
    check_order(rho, p)?;
    if fixed_sublattice(rho)?.rank() != 0 {
        return Err(OracleError::NotFree);
    }
    let d = rho.rows();
    let mut remaining = primitive_lines(d, bound);
    let mut probe = OrbitProbe {
        p,
        bound,
        classes: 0,
        trivial_stabilizers: 0,
        order_two_stabilizers: 0,
        other_stabilizers: 0,
    };
    while let Some(start) = remaining.pop_first() {
        let mut orbit = BTreeSet::new();
        let mut stabilizer = 0;
        let mut v = start.clone();
        for _ in 0..p {
            let l = line(&v);
            if l == start {
                stabilizer += 1;
            }
            remaining.remove(&l);
            orbit.insert(l);
            v = rho.mul_vec(&v);
        }
        probe.classes += 1;
        match stabilizer {
            1 => probe.trivial_stabilizers += 1,
            2 => probe.order_two_stabilizers += 1,
            _ => probe.other_stabilizers += 1,
        }
    }
    Ok(probe)
}

/// Number of lines through primitive vectors of `Z^d` with sup-norm at most
/// `bound`; constant in `bound` exactly when `Z^d` has finitely many maximal
/// infinite cyclic subgroups.
pub fn count_primitive_lines(d: usize, bound: u64) -> usize {
    primitive_lines(d, bound).len()
}
