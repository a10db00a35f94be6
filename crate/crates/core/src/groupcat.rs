//! Catalog of groups and the combinatorial invariants of a `Z/p`-action on a
//! lattice.
//!
//! `TfHyperbolic` descriptors are trusted: the caller asserts that the group
//! is torsion-free hyperbolic with free integral homology of the given Betti
//! numbers.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::One;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::formal::{Card, GroupTag};
use crate::intlattice::{check_order, fixed_sublattice, h1_cyclic, FiniteAbelian, IntMatrix, LatticeError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("invalid group descriptor: {0}")]
    Invalid(String),
    #[error("{p} is not a prime")]
    NotPrime { p: u64 },
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error("the extension is not split, so |J| is unknown; supply it explicitly")]
    UnknownJ,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "camelCase", deny_unknown_fields)]
pub enum GroupDesc {
    /// Free abelian group of rank `d`.
    Zd { d: i64 },
    /// Free group of rank `r`.
    Free { r: i64 },
    /// Fundamental group of the closed orientable surface of genus `g`.
    Surface { g: i64 },
    /// Torsion-free hyperbolic group with free integral homology.
    #[serde(rename = "tfHyperbolic")]
    TfHyperbolic {
        betti: Vec<u64>,
        #[serde(rename = "micyCard")]
        micy_card: Card,
    },
    /// Hyperbolic group known only through the number of conjugacy classes of
    /// maximal infinite virtually cyclic subgroups.
    Hyperbolic {
        #[serde(rename = "micyCard")]
        micy_card: Card,
    },
    /// Extension `1 -> Z^d -> G -> Z/p -> 1` with action `rho`.
    #[serde(rename = "crystZp")]
    CrystZp {
        d: i64,
        p: u64,
        rho: IntMatrix,
        split: bool,
        #[serde(default, rename = "jCard", skip_serializing_if = "Option::is_none")]
        j_card: Option<Card>,
    },
    /// `G x Z^d` for a named group `G`.
    Product { d: i64, factor: GroupTag },
}

impl GroupDesc {
    pub fn validate(&self) -> Result<(), GroupError> {
        let nonneg = |what: &str, v: i64| {
            if v < 0 {
                Err(GroupError::Invalid(format!("{what} must be nonnegative, got {v}")))
            } else {
                Ok(())
            }
        };
        match self {
            GroupDesc::Zd { d } => nonneg("rank d", *d),
            GroupDesc::Free { r } => {
                if *r < 1 {
                    Err(GroupError::Invalid(format!("free rank r must be at least 1, got {r}")))
                } else {
                    Ok(())
                }
            }
            GroupDesc::Surface { g } => nonneg("genus g", *g),
            GroupDesc::TfHyperbolic { betti, .. } => {
                if betti.first() != Some(&1) {
                    return Err(GroupError::Invalid(format!(
                        "betti numbers must start with b0 = 1, got {betti:?}"
                    )));
                }
                Ok(())
            }
            GroupDesc::Hyperbolic { .. } => Ok(()),
            GroupDesc::CrystZp { d, p, rho, .. } => {
                nonneg("rank d", *d)?;
                if !is_prime(*p) {
                    return Err(GroupError::NotPrime { p: *p });
                }
                if rho.rows() as i64 != *d || rho.cols() as i64 != *d {
                    return Err(GroupError::Invalid(format!(
                        "rho must be {d}x{d}, got {}x{}",
                        rho.rows(),
                        rho.cols()
                    )));
                }
                check_order(rho, *p)?;
                Ok(())
            }
            GroupDesc::Product { d, factor } => {
                nonneg("rank d", *d)?;
                if *factor == GroupTag::Trivial {
                    return Err(GroupError::Invalid("product factor must be nontrivial; use zd".into()));
                }
                Ok(())
            }
        }
    }

    /// True for the torsion-free members of the catalog.
    pub fn is_torsion_free(&self) -> bool {
        matches!(
            self,
            GroupDesc::Zd { .. } | GroupDesc::Free { .. } | GroupDesc::Surface { .. } | GroupDesc::TfHyperbolic { .. }
        )
    }

    /// Action invariants of a `CrystZp` descriptor, with `J` taken from the
    /// override when present.
    pub fn analysis(&self) -> Result<ActionAnalysis, GroupError> {
        self.validate()?;
        match self {
            GroupDesc::CrystZp {
                p, rho, split, j_card, ..
            } => {
                let mut a = analyze_action(rho, *p)?;
                a.j_card = match (j_card, split) {
                    (Some(j), _) => Some(j.clone()),
                    (None, true) => a.j_card,
                    (None, false) => None,
                };
                Ok(a)
            }
            other => Err(GroupError::Invalid(format!(
                "action analysis needs a crystZp descriptor, got {}",
                other.kind()
            ))),
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            GroupDesc::Zd { .. } => "zd",
            GroupDesc::Free { .. } => "free",
            GroupDesc::Surface { .. } => "surface",
            GroupDesc::TfHyperbolic { .. } => "tfHyperbolic",
            GroupDesc::Hyperbolic { .. } => "hyperbolic",
            GroupDesc::CrystZp { .. } => "crystZp",
            GroupDesc::Product { .. } => "product",
        }
    }
}

impl fmt::Display for GroupDesc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupDesc::Zd { d } => write!(f, "Z^{d}"),
            GroupDesc::Free { r } => write!(f, "F_{r}"),
            GroupDesc::Surface { g } => write!(f, "Gamma_{g}"),
            GroupDesc::TfHyperbolic { betti, micy_card } => {
                let b: Vec<String> = betti.iter().map(u64::to_string).collect();
                write!(f, "tf-hyperbolic(betti={}, |M|={micy_card})", b.join(","))
            }
            GroupDesc::Hyperbolic { micy_card } => write!(f, "hyperbolic(|M|={micy_card})"),
            GroupDesc::CrystZp { d, p, rho, split, .. } => {
                let kind = if *split { "split" } else { "non-split" };
                write!(f, "Z^{d} by Z/{p}, rho={rho} ({kind})")
            }
            GroupDesc::Product { d, factor } => write!(f, "{factor} x Z^{d}"),
        }
    }
}

/// Invariants of `Z/p` acting on `Z^d` through `rho`.
///
/// `p = 1` stands for the trivial quotient.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ActionAnalysis {
    pub d: usize,
    pub p: u64,
    /// Rank of the fixed sublattice.
    pub e: usize,
    pub free_away_from_zero: bool,
    pub h1: FiniteAbelian,
    /// Number of conjugacy classes of nontrivial finite subgroups; `None` when
    /// it cannot be derived.
    pub j_card: Option<Card>,
    pub micy_fixed_card: Card,
    /// Orbit classes of maximal infinite cyclic subgroups with trivial
    /// stabilizer (`i1Card`) and with stabilizer `Z/2` (`i2Card`). Only
    /// defined for free actions.
    pub i1_card: Option<Card>,
    pub i2_card: Option<Card>,
    /// Number of maximal finite subgroups of `W_G C` for `C` with stabilizer `Z/2`.
    pub jc_size: Option<Card>,
}

impl ActionAnalysis {
    /// The trivial extension of `Z^d` by the trivial group.
    pub fn trivial_quotient(d: usize) -> Self {
        ActionAnalysis {
            d,
            p: 1,
            e: d,
            free_away_from_zero: true,
            h1: FiniteAbelian::trivial(),
            j_card: Some(Card::zero()),
            micy_fixed_card: micy_card_of(d as u64),
            i1_card: Some(micy_card_of(d as u64)),
            i2_card: Some(Card::zero()),
            jc_size: None,
        }
    }

    pub fn require_j(&self) -> Result<&Card, GroupError> {
        self.j_card.as_ref().ok_or(GroupError::UnknownJ)
    }
}

/// Invariants of the split extension of `Z^d` by `Z/p` acting through `rho`.
pub fn analyze_action(rho: &IntMatrix, p: u64) -> Result<ActionAnalysis, GroupError> {
    if !is_prime(p) {
        return Err(GroupError::NotPrime { p });
    }
    check_order(rho, p)?;
    let d = rho.rows();
    let e = fixed_sublattice(rho)?.rank();
    let free = e == 0;
    let h1 = h1_cyclic(rho, p)?;
    let j_card = Some(Card::Fin(h1.order().to_biguint().expect("order is positive")));
    let micy = micy_card_of(d as u64);
    let (i1, i2) = match (free, p) {
        (false, _) => (None, None),
        (true, 2) => (Some(Card::zero()), Some(micy)),
        (true, _) => (Some(micy), Some(Card::zero())),
    };
    let jc_size = match &i2 {
        Some(c) if !c.is_zero() => Some(Card::Fin(BigUint::one() << (d - 1))),
        _ => None,
    };
    Ok(ActionAnalysis {
        d,
        p,
        e,
        free_away_from_zero: free,
        h1,
        j_card,
        micy_fixed_card: micy_card_of(e as u64),
        i1_card: i1,
        i2_card: i2,
        jc_size,
    })
}

/// Number of maximal infinite cyclic subgroups of `Z^d`.
pub fn micy_card_of(d: u64) -> Card {
    match d {
        0 => Card::zero(),
        1 => Card::one(),
        _ => Card::Omega,
    }
}

/// Number of conjugacy classes of maximal infinite cyclic subgroups of the
/// free group of rank `r >= 1`.
pub fn micy_card_free_group(r: u64) -> Card {
    if r <= 1 {
        Card::one()
    } else {
        Card::Omega
    }
}

pub(crate) fn is_prime(n: u64) -> bool {
    crate::formal::is_prime(n)
}

/// `-I` on `Z^d`.
pub fn minus_identity(d: usize) -> IntMatrix {
    -&IntMatrix::identity(d)
}

/// Companion matrix of `1 + x + ... + x^(p-1)`, of size `p - 1`.
pub fn cyclotomic_companion(p: u64) -> IntMatrix {
    let n = (p - 1) as usize;
    let mut m = IntMatrix::zeros(n, n);
    for i in 1..n {
        m.set(i, i - 1, BigInt::one());
    }
    for i in 0..n {
        m.set(i, n - 1, -BigInt::one());
    }
    m
}

/// Permutation matrix of the cycle `e_i -> e_(i+1 mod n)`.
pub fn cyclic_permutation(n: usize) -> IntMatrix {
    let mut m = IntMatrix::zeros(n, n);
    for i in 0..n {
        m.set((i + 1) % n, i, BigInt::one());
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fin(n: u64) -> Card {
        Card::fin(n)
    }

    #[test]
    fn companion_of_order_three() {
        let a = analyze_action(&cyclotomic_companion(3), 3).unwrap();
        assert_eq!(a.e, 0);
        assert!(a.free_away_from_zero);
        assert_eq!(a.h1.order(), BigInt::from(3));
        assert_eq!(a.j_card, Some(fin(3)));
        assert_eq!(a.i1_card, Some(Card::Omega));
        assert_eq!(a.i2_card, Some(fin(0)));
        assert_eq!(a.jc_size, None);
    }

    #[test]
    fn trivial_action() {
        let a = analyze_action(&IntMatrix::identity(2), 3).unwrap();
        assert_eq!(a.e, 2);
        assert!(!a.free_away_from_zero);
        assert!(a.h1.is_trivial());
        assert_eq!(a.j_card, Some(fin(1)));
        assert_eq!(a.micy_fixed_card, Card::Omega);
        assert_eq!(a.i1_card, None);
    }

    #[test]
    fn infinite_dihedral() {
        let a = analyze_action(&minus_identity(1), 2).unwrap();
        assert_eq!(a.e, 0);
        assert!(a.free_away_from_zero);
        assert_eq!(a.j_card, Some(fin(2)));
        assert_eq!(a.i1_card, Some(fin(0)));
        assert_eq!(a.i2_card, Some(fin(1)));
        assert_eq!(a.jc_size, Some(fin(1)));
    }

    #[test]
    fn three_cycle() {
        let a = analyze_action(&cyclic_permutation(3), 3).unwrap();
        assert_eq!((a.e, a.j_card.clone()), (1, Some(fin(1))));
        assert_eq!(a.micy_fixed_card, fin(1));
    }

    #[test]
    fn micy_cards() {
        assert_eq!(micy_card_of(0), fin(0));
        assert_eq!(micy_card_of(1), fin(1));
        assert_eq!(micy_card_of(2), Card::Omega);
        assert_eq!(micy_card_free_group(1), fin(1));
        assert_eq!(micy_card_free_group(5), Card::Omega);
    }

    #[test]
    fn validation() {
        assert!(GroupDesc::Zd { d: 3 }.validate().is_ok());
        assert!(GroupDesc::Surface { g: -1 }.validate().is_err());
        assert!(GroupDesc::Free { r: 0 }.validate().is_err());
        let bad = GroupDesc::CrystZp {
            d: 2,
            p: 3,
            rho: minus_identity(2),
            split: true,
            j_card: None,
        };
        assert_eq!(
            bad.validate(),
            Err(GroupError::Lattice(LatticeError::NotOrderP { p: 3 }))
        );
        let not_prime = GroupDesc::CrystZp {
            d: 2,
            p: 4,
            rho: IntMatrix::identity(2),
            split: true,
            j_card: None,
        };
        assert_eq!(not_prime.validate(), Err(GroupError::NotPrime { p: 4 }));
        let tf = GroupDesc::TfHyperbolic {
            betti: vec![2, 1],
            micy_card: Card::Omega,
        };
        assert!(tf.validate().is_err());
    }

    #[test]
    fn non_split_needs_override() {
        let g = GroupDesc::CrystZp {
            d: 2,
            p: 3,
            rho: cyclotomic_companion(3),
            split: false,
            j_card: None,
        };
        assert_eq!(g.analysis().unwrap().require_j(), Err(GroupError::UnknownJ));
        let g = GroupDesc::CrystZp {
            d: 2,
            p: 3,
            rho: cyclotomic_companion(3),
            split: false,
            j_card: Some(fin(0)),
        };
        assert_eq!(g.analysis().unwrap().j_card, Some(fin(0)));
    }

    #[test]
    fn descriptor_json() {
        let text = r#"{"type": "crystZp", "d": 2, "p": 3, "rho": [[0,-1],[1,-1]], "split": true}"#;
        let g: GroupDesc = serde_json::from_str(text).unwrap();
        assert_eq!(
            g,
            GroupDesc::CrystZp {
                d: 2,
                p: 3,
                rho: cyclotomic_companion(3),
                split: true,
                j_card: None
            }
        );
        let back: GroupDesc = serde_json::from_str(&serde_json::to_string(&g).unwrap()).unwrap();
        assert_eq!(back, g);
        let tf: GroupDesc = serde_json::from_str(r#"{"type":"tfHyperbolic","betti":[1,4,1],"micyCard":"omega"}"#).unwrap();
        assert!(tf.validate().is_ok());
        let z: GroupDesc = serde_json::from_str(r#"{"type":"zd","d":3}"#).unwrap();
        assert_eq!(z, GroupDesc::Zd { d: 3 });
    }
}
