use crate::formal::{Atom, Axiom, Decoration, GradedExpr, RingExpr, RingSpec, Simplifier};

use super::OracleError;

/// `K_n(R[Z^d])` for regular `R` by applying `K_n(S[Z]) = K_n(S) + K_(n-1)(S)`
/// `d` times, then simplifying with the ring's axioms.
pub fn bhs_iterate(d: u64, ring: &RingSpec, n: i64) -> Result<GradedExpr, OracleError> {
    if !ring.has(Axiom::Regular) {
        return Err(OracleError::NeedsRegular);
    }
    let base = RingExpr::base(ring.name());
    Ok(Simplifier::new(ring).simplify(&unroll(d, &base, n)))
}

fn unroll(d: u64, ring: &RingExpr, n: i64) -> GradedExpr {
    if d == 0 {
        GradedExpr::atom(Atom::k(ring, n))
    } else {
        unroll(d - 1, ring, n).dsum(&unroll(d - 1, ring, n - 1))
    }
}

/// `L_n(Z)` for any decoration, read off a table indexed by `n mod 4`.
pub fn l_periodic_table(n: i64, _decoration: Decoration) -> GradedExpr {
    const TABLE: [&str; 4] = ["Z", "0", "Z/2", "0"];
    let idx = n.rem_euclid(4);
    crate::formal::parse_concrete(TABLE[idx as usize]).expect("table entries parse")
}
