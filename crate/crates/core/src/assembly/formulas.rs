//! Closed-form decompositions. Each function returns the unsimplified
//! expression; [`super::simplified`] applies the ring's rewrite rules.

use num_bigint::BigUint;
use num_integer::binomial;

use super::{AssemblyError, Theory};
use crate::formal::{Atom, Card, Decoration, GradedExpr, GroupTag, RingExpr};
use crate::groupcat::{micy_card_free_group, micy_card_of, ActionAnalysis};

pub(crate) fn choose(n: u64, k: u64) -> Card {
    Card::Fin(binomial(BigUint::from(n), BigUint::from(k)))
}

/// `⊕_{i=0}^{top} atom(n - i)^(factor * C(top, i))`.
fn binomial_family(top: u64, factor: u64, atom: impl Fn(u64) -> Atom) -> GradedExpr {
    (0..=top)
        .map(|i| GradedExpr::term(atom(i), &choose(top, i) * &Card::fin(factor)))
        .sum()
}

fn off(n: i64, i: u64) -> i64 {
    n - i as i64
}

/// Nil part of `Z^d` over `ring`: `⊕_{i<d} NK_{n-i}^(2 C(d-1, i))`, once per
/// maximal infinite cyclic subgroup.
fn zd_nil(d: u64, ring: &RingExpr, n: i64) -> GradedExpr {
    if d == 0 {
        return GradedExpr::zero();
    }
    binomial_family(d - 1, 2, |i| Atom::nk(ring, off(n, i))).scale(&micy_card_of(d))
}

pub fn wh_zd(d: u64, ring: &RingExpr, n: i64) -> GradedExpr {
    zd_nil(d, ring, n)
}

pub fn k_zd(d: u64, ring: &RingExpr, n: i64) -> GradedExpr {
    binomial_family(d, 1, |i| Atom::k(ring, off(n, i))).dsum(&zd_nil(d, ring, n))
}

pub fn l_zd(d: u64, ring: &RingExpr, n: i64, decoration: Decoration) -> GradedExpr {
    binomial_family(d, 1, |i| Atom::l(ring, off(n, i), decoration))
}

/// Homology of a space with free integral homology, split: `⊕_i b_i X_{n-i}`.
fn split_homology(betti: &[u64], atom: impl Fn(i64) -> Atom, n: i64) -> GradedExpr {
    betti
        .iter()
        .enumerate()
        .map(|(i, &b)| GradedExpr::term(atom(off(n, i as u64)), Card::fin(b)))
        .sum()
}

fn spectrum_atom(theory: Theory, ring: &RingExpr, decoration: Decoration) -> impl Fn(i64) -> Atom + '_ {
    move |m| match theory {
        Theory::L => Atom::l(ring, m, decoration),
        _ => Atom::k(ring, m),
    }
}

/// `NK_n(R)^2` once per class of maximal infinite cyclic subgroups.
fn hyperbolic_nil(micy: &Card, ring: &RingExpr, n: i64) -> GradedExpr {
    GradedExpr::term(Atom::nk(ring, n), Card::fin(2)).scale(micy)
}

/// K-, Wh- or L-groups of a torsion-free hyperbolic group with free integral
/// homology `betti`, assuming the Atiyah-Hirzebruch spectral sequence
/// collapses and splits.
pub fn tf_hyperbolic(
    betti: &[u64],
    micy: &Card,
    ring: &RingExpr,
    theory: Theory,
    n: i64,
    decoration: Decoration,
) -> GradedExpr {
    match theory {
        Theory::K => split_homology(betti, spectrum_atom(theory, ring, decoration), n).dsum(&hyperbolic_nil(micy, ring, n)),
        Theory::Wh => hyperbolic_nil(micy, ring, n),
        Theory::L => split_homology(betti, spectrum_atom(theory, ring, decoration), n),
        Theory::Sper => GradedExpr::zero(),
    }
}

pub fn free_group(r: u64, ring: &RingExpr, theory: Theory, n: i64, decoration: Decoration) -> GradedExpr {
    tf_hyperbolic(&[1, r], &micy_card_free_group(r), ring, theory, n, decoration)
}

pub fn surface_group(g: u64, ring: &RingExpr, theory: Theory, n: i64, decoration: Decoration) -> GradedExpr {
    match (g, theory) {
        (0, Theory::K) => GradedExpr::atom(Atom::k(ring, n)),
        (0, Theory::L) => GradedExpr::atom(Atom::l(ring, n, decoration)),
        (0, _) => GradedExpr::zero(),
        (1, Theory::K) => k_zd(2, ring, n),
        (1, Theory::Wh) => wh_zd(2, ring, n),
        (1, Theory::L) => l_zd(2, ring, n, decoration),
        (1, Theory::Sper) => GradedExpr::zero(),
        _ => tf_hyperbolic(&[1, 2 * g, 1], &Card::Omega, ring, theory, n, decoration),
    }
}

pub(crate) const HYPERBOLIC_PROPER_K: &str = "H^G[EG;K]";
pub(crate) const HYPERBOLIC_PROPER_L: &str = "H^G[EG;L]";
pub(crate) const HYPERBOLIC_NIL_K: &str = "H^V[EV->pt;K]";
pub(crate) const HYPERBOLIC_NIL_L: &str = "H^V[EV->pt;L]";

/// Equivariant homology of the proper classifying space plus one relative
/// term per maximal infinite virtually cyclic subgroup; both are opaque.
pub fn hyperbolic_skeleton(micy: &Card, ring: &RingExpr, theory: Theory, n: i64) -> GradedExpr {
    let (proper, nil) = match theory {
        Theory::L => (HYPERBOLIC_PROPER_L, HYPERBOLIC_NIL_L),
        _ => (HYPERBOLIC_PROPER_K, HYPERBOLIC_NIL_K),
    };
    GradedExpr::atom(Atom::opaque(proper, ring, n))
        .dsum(&GradedExpr::term(Atom::opaque(nil, ring, n), micy.clone()))
}

fn finite_tag(p: u64) -> GroupTag {
    GroupTag::Cyclic(p)
}

fn require_free(a: &ActionAnalysis) -> Result<(), AssemblyError> {
    if a.free_away_from_zero {
        Ok(())
    } else {
        Err(AssemblyError::NotFree)
    }
}

pub fn free_action_wh(a: &ActionAnalysis, ring: &RingExpr, n: i64) -> Result<GradedExpr, AssemblyError> {
    require_free(a)?;
    let j = a.require_j()?;
    let finite = if a.p > 1 {
        GradedExpr::term(Atom::wh(finite_tag(a.p), ring, n), j.clone())
    } else {
        GradedExpr::zero()
    };
    let d = a.d as u64;
    let (i1, i2) = (
        a.i1_card.clone().unwrap_or_else(Card::zero),
        a.i2_card.clone().unwrap_or_else(Card::zero),
    );
    let nil = if d == 0 {
        GradedExpr::zero()
    } else {
        binomial_family(d - 1, 2, |i| Atom::nk(ring, off(n, i)))
            .scale(&i1)
            .dsum(&binomial_family(d - 1, 1, |i| Atom::nk(ring, off(n, i))).scale(&i2))
    };
    Ok(finite.dsum(&nil))
}

pub fn free_action_l(a: &ActionAnalysis, ring: &RingExpr, n: i64) -> Result<GradedExpr, AssemblyError> {
    require_free(a)?;
    let j = a.require_j()?;
    let finite = if a.p > 1 {
        GradedExpr::term(
            Atom::sper(finite_tag(a.p), ring, n, Decoration::MinusInfinity),
            j.clone(),
        )
    } else {
        GradedExpr::zero()
    };
    let unil = match (&a.i2_card, &a.jc_size) {
        (Some(i2), Some(jc)) => GradedExpr::term(Atom::unil(ring, n), i2 * jc),
        _ => GradedExpr::zero(),
    };
    Ok(finite.dsum(&unil))
}

/// Whitehead groups for `Z/p` acting with fixed rank `e`; needs a regular ring.
pub fn zp_wh(a: &ActionAnalysis, ring: &RingExpr, n: i64) -> Result<GradedExpr, AssemblyError> {
    let j = a.require_j()?;
    let e = a.e as u64;
    let tag = finite_tag(a.p);
    let finite = binomial_family(e, 1, |i| Atom::wh(tag.clone(), ring, off(n, i)));
    let nil = if e == 0 {
        GradedExpr::zero()
    } else {
        let group_ring = RingExpr::group_ring(ring.base_name(), tag.clone());
        binomial_family(e - 1, 2, |i| Atom::nk(&group_ring, off(n, i))).scale(&a.micy_fixed_card)
    };
    Ok(finite.dsum(&nil).scale(j))
}

/// Periodic structure groups for `Z/p`, `p` odd.
pub fn zp_l(a: &ActionAnalysis, ring: &RingExpr, n: i64, decoration: Decoration) -> Result<GradedExpr, AssemblyError> {
    if a.p.is_multiple_of(2) {
        return Err(AssemblyError::EvenP { p: a.p });
    }
    let j = a.require_j()?;
    let tag = finite_tag(a.p);
    Ok(binomial_family(a.e as u64, 1, |i| Atom::sper(tag.clone(), ring, off(n, i), decoration)).scale(j))
}

/// K- or Wh-groups of `G x Z^d` from those of `G`.
pub fn k_product_with_zd(
    d: u64,
    factor: &GroupTag,
    ring: &RingExpr,
    theory: Theory,
    n: i64,
) -> GradedExpr {
    let group_ring = RingExpr::group_ring(ring.base_name(), factor.clone());
    let head = match theory {
        Theory::Wh => binomial_family(d, 1, |i| Atom::wh(factor.clone(), ring, off(n, i))),
        _ => binomial_family(d, 1, |i| Atom::k(&group_ring, off(n, i))),
    };
    head.dsum(&zd_nil(d, &group_ring, n))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groupcat::{analyze_action, minus_identity};

    fn r() -> RingExpr {
        RingExpr::base("R")
    }

    fn t(a: Atom, m: u64) -> GradedExpr {
        GradedExpr::term(a, Card::fin(m))
    }

    #[test]
    fn wh_zd_low_ranks() {
        assert!(wh_zd(0, &r(), 3).is_zero());
        assert_eq!(wh_zd(1, &r(), 3), t(Atom::nk(&r(), 3), 2));
        let want = t(Atom::nk(&r(), 3), 2).dsum(&t(Atom::nk(&r(), 2), 2)).scale(&Card::Omega);
        assert_eq!(wh_zd(2, &r(), 3), want);
    }

    #[test]
    fn k_zd_rank_one_is_bass_heller_swan() {
        let want = GradedExpr::atom(Atom::k(&r(), 0))
            .dsum(&GradedExpr::atom(Atom::k(&r(), -1)))
            .dsum(&t(Atom::nk(&r(), 0), 2));
        assert_eq!(k_zd(1, &r(), 0), want);
        assert_eq!(k_zd(0, &r(), 4), GradedExpr::atom(Atom::k(&r(), 4)));
    }

    #[test]
    fn free_group_of_rank_one_is_z() {
        for n in -3..=3 {
            assert_eq!(free_group(1, &r(), Theory::K, n, Decoration::MinusInfinity), k_zd(1, &r(), n));
        }
    }

    #[test]
    fn free_group_l() {
        let l = |m| Atom::l(&r(), m, Decoration::MinusInfinity);
        let want = GradedExpr::atom(l(2)).dsum(&t(l(1), 3));
        assert_eq!(free_group(3, &r(), Theory::L, 2, Decoration::MinusInfinity), want);
    }

    #[test]
    fn tf_hyperbolic_matches_surface_and_free() {
        for n in -2..=2 {
            for g in 2..4u64 {
                for th in [Theory::K, Theory::L, Theory::Wh] {
                    assert_eq!(
                        tf_hyperbolic(&[1, 2 * g, 1], &Card::Omega, &r(), th, n, Decoration::MinusInfinity),
                        surface_group(g, &r(), th, n, Decoration::MinusInfinity)
                    );
                }
            }
            assert!(tf_hyperbolic(&[1], &Card::zero(), &r(), Theory::Wh, n, Decoration::MinusInfinity).is_zero());
        }
    }

    #[test]
    fn skeleton() {
        let e = hyperbolic_skeleton(&Card::zero(), &r(), Theory::K, 0);
        assert_eq!(e.len(), 1);
        let e = hyperbolic_skeleton(&Card::Omega, &r(), Theory::K, 0);
        assert_eq!(e.len(), 2);
        assert_eq!(e.multiplicity(&Atom::opaque(HYPERBOLIC_NIL_K, &r(), 0)), Card::Omega);
    }

    #[test]
    fn infinite_dihedral_groups() {
        let a = analyze_action(&minus_identity(1), 2).unwrap();
        let wh = free_action_wh(&a, &r(), 1).unwrap();
        assert_eq!(
            wh,
            t(Atom::wh(GroupTag::Cyclic(2), &r(), 1), 2).dsum(&GradedExpr::atom(Atom::nk(&r(), 1)))
        );
        let s = free_action_l(&a, &r(), 1).unwrap();
        assert_eq!(
            s,
            t(Atom::sper(GroupTag::Cyclic(2), &r(), 1, Decoration::MinusInfinity), 2)
                .dsum(&GradedExpr::atom(Atom::unil(&r(), 1)))
        );
    }

    #[test]
    fn minus_identity_rank_two() {
        let a = analyze_action(&minus_identity(2), 2).unwrap();
        let s = free_action_l(&a, &r(), 0).unwrap();
        assert_eq!(
            s,
            t(Atom::sper(GroupTag::Cyclic(2), &r(), 0, Decoration::MinusInfinity), 4)
                .dsum(&GradedExpr::term(Atom::unil(&r(), 0), Card::Omega))
        );
    }

    #[test]
    fn zp_l_needs_odd_p() {
        let a = analyze_action(&minus_identity(1), 2).unwrap();
        assert_eq!(
            zp_l(&a, &r(), 0, Decoration::MinusInfinity),
            Err(AssemblyError::EvenP { p: 2 })
        );
    }

    #[test]
    fn product_with_trivial_rank() {
        let g = GroupTag::Cyclic(3);
        let rg = RingExpr::group_ring("R", g.clone());
        assert_eq!(k_product_with_zd(0, &g, &r(), Theory::K, 2), GradedExpr::atom(Atom::k(&rg, 2)));
        let want = GradedExpr::atom(Atom::k(&rg, 2))
            .dsum(&GradedExpr::atom(Atom::k(&rg, 1)))
            .dsum(&t(Atom::nk(&rg, 2), 2));
        assert_eq!(k_product_with_zd(1, &g, &r(), Theory::K, 2), want);
    }
}
