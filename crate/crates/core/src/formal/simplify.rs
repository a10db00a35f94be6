//! Ring-axiom rewriting.
//!
//! Every rule replaces a single symbolic atom by a concrete expression (often
//! zero), and concrete atoms are never rewritten, so the system terminates
//! after one pass and the result does not depend on rule order.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use super::ring::{Axiom, RingSpec, TableKind};
use super::{Atom, Card, Decoration, GradedExpr, GroupTag, RingExpr};

/// Identifier of a rewrite rule, reported in provenance.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Rule {
    /// `NK_n(R) = 0` for regular `R`.
    RegularNilVanishing,
    /// `K_n(R) = 0` for `n <= -1` and regular `R`.
    RegularNegativeK,
    /// `K_n(R[F]) = 0` for `n <= -2`, `F` finite, `R` Dedekind of characteristic zero.
    FiniteGroupLowerK,
    /// `NK_n(Z[Z/p]) = 0` for `n <= 1`, `p` prime.
    IntegralCyclicNil,
    /// `L_n(Z)` is `Z, 0, Z/2, 0` according to `n mod 4`, for every decoration.
    IntegralLPeriodicity,
    /// Whitehead and structure groups of the trivial group vanish.
    TrivialGroupRelative,
    /// Substitution from the ring's value table.
    ValueTable,
    /// `S^per,s_n(Z/p; Z) = Z[1/p]^((p-1)/2)` for `n` even and 0 for `n` odd
    /// (`p` odd). Off by default.
    StructureSetPreset,
}

impl Rule {
    /// Ring axioms the rule relies on.
    pub fn axioms(self) -> &'static [Axiom] {
        match self {
            Rule::RegularNilVanishing | Rule::RegularNegativeK => &[Axiom::Regular],
            Rule::FiniteGroupLowerK => &[Axiom::DedekindCharZero],
            Rule::IntegralCyclicNil | Rule::IntegralLPeriodicity | Rule::StructureSetPreset => &[Axiom::IsZ],
            Rule::TrivialGroupRelative | Rule::ValueTable => &[],
        }
    }

    pub fn describe(self) -> &'static str {
        match self {
            Rule::RegularNilVanishing => "NK_n(R) = 0 for regular R",
            Rule::RegularNegativeK => "K_n(R) = 0 for n <= -1, R regular",
            Rule::FiniteGroupLowerK => "K_n(R[F]) = 0 for n <= -2, F finite, R Dedekind of char 0",
            Rule::IntegralCyclicNil => "NK_n(Z[Z/p]) = 0 for n <= 1",
            Rule::IntegralLPeriodicity => "L_n(Z) = Z, 0, Z/2, 0 for n = 0, 1, 2, 3 mod 4 (any decoration)",
            Rule::TrivialGroupRelative => "Wh_n(1;R) = S^per_n(1;R) = 0",
            Rule::ValueTable => "value supplied by the ring's value table",
            Rule::StructureSetPreset => {
                "S^per,s_n(Z/p;Z) = Z[1/p]^((p-1)/2) (n even), 0 (n odd); opt-in"
            }
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.describe())
    }
}

/// Rewrites atoms according to the axioms of the rings they mention.
/// Atoms over rings the simplifier does not know are left alone.
#[derive(Clone, Debug, Default)]
pub struct Simplifier {
    rings: BTreeMap<String, RingSpec>,
    structure_set_preset: bool,
}

impl Simplifier {
    pub fn new(ring: &RingSpec) -> Self {
        Self::with_rings([ring.clone()])
    }

    pub fn with_rings(rings: impl IntoIterator<Item = RingSpec>) -> Self {
        Simplifier {
            rings: rings.into_iter().map(|r| (r.name().to_string(), r)).collect(),
            structure_set_preset: false,
        }
    }

    pub fn structure_set_preset(mut self, on: bool) -> Self {
        self.structure_set_preset = on;
        self
    }

    pub fn simplify(&self, e: &GradedExpr) -> GradedExpr {
        self.simplify_traced(e).0
    }

    /// Simplifies and reports which rules fired.
    pub fn simplify_traced(&self, e: &GradedExpr) -> (GradedExpr, BTreeSet<Rule>) {
        let mut fired = BTreeSet::new();
        let mut current = e.clone();
        loop {
            let next = current.flat_map(|a| match self.rewrite(a) {
                Some((image, rule)) => {
                    fired.insert(rule);
                    image
                }
                None => GradedExpr::atom(a.clone()),
            });
            if next == current {
                return (next, fired);
            }
            current = next;
        }
    }

    fn ring_has(&self, ring: &RingExpr, axiom: Axiom) -> bool {
        self.rings
            .get(ring.base_name())
            .is_some_and(|spec| spec.has(axiom))
    }

    fn rewrite(&self, a: &Atom) -> Option<(GradedExpr, Rule)> {
        let zero = GradedExpr::zero;
        match a {
            Atom::NK { ring, degree } => match ring.group() {
                None if self.ring_has(ring, Axiom::Regular) => Some((zero(), Rule::RegularNilVanishing)),
                Some(GroupTag::Cyclic(p)) if *degree <= 1 && is_prime(*p) && self.ring_has(ring, Axiom::IsZ) => {
                    Some((zero(), Rule::IntegralCyclicNil))
                }
                None => self.table(ring, TableKind::NK, *degree, None),
                _ => None,
            },
            Atom::K { ring, degree } => match ring.group() {
                None if *degree <= -1 && self.ring_has(ring, Axiom::Regular) => {
                    Some((zero(), Rule::RegularNegativeK))
                }
                Some(g) if g.is_finite() && *degree <= -2 && self.ring_has(ring, Axiom::DedekindCharZero) => {
                    Some((zero(), Rule::FiniteGroupLowerK))
                }
                None => self.table(ring, TableKind::K, *degree, None),
                _ => None,
            },
            Atom::L {
                ring,
                degree,
                decoration,
            } => match ring.group() {
                None if self.ring_has(ring, Axiom::IsZ) => {
                    Some((integral_l_group(*degree), Rule::IntegralLPeriodicity))
                }
                None => self.table(ring, TableKind::L, *degree, Some(*decoration)),
                _ => None,
            },
            Atom::Wh {
                group: GroupTag::Trivial,
                ..
            }
            | Atom::Sper {
                group: GroupTag::Trivial,
                ..
            } => Some((zero(), Rule::TrivialGroupRelative)),
            Atom::Sper {
                group: GroupTag::Cyclic(p),
                ring,
                degree,
                decoration: Decoration::S,
            } if self.structure_set_preset
                && *p > 2
                && is_prime(*p)
                && ring.group().is_none()
                && self.ring_has(ring, Axiom::IsZ) =>
            {
                let value = if degree.rem_euclid(2) == 0 {
                    GradedExpr::term(
                        Atom::Named {
                            label: format!("Z[1/{p}]"),
                        },
                        Card::fin((p - 1) / 2),
                    )
                } else {
                    zero()
                };
                Some((value, Rule::StructureSetPreset))
            }
            _ => None,
        }
    }

    fn table(
        &self,
        ring: &RingExpr,
        kind: TableKind,
        degree: i64,
        decoration: Option<Decoration>,
    ) -> Option<(GradedExpr, Rule)> {
        let spec = self.rings.get(ring.base_name())?;
        spec.values()
            .lookup(kind, degree, decoration)
            .map(|v| (v, Rule::ValueTable))
    }
}

/// `L_n(Z)`: `Z`, `0`, `Z/2`, `0` for `n = 0, 1, 2, 3 (mod 4)`.
fn integral_l_group(n: i64) -> GradedExpr {
    match n.rem_euclid(4) {
        0 => GradedExpr::free(),
        2 => GradedExpr::cyclic(2),
        _ => GradedExpr::zero(),
    }
}

pub(crate) fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
}

/// Simplifies `e` using the axioms of a single ring.
pub fn simplify(e: &GradedExpr, ring: &RingSpec) -> GradedExpr {
    Simplifier::new(ring).simplify(e)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn regular() -> RingSpec {
        RingSpec::preset("regular").unwrap()
    }

    #[test]
    fn regular_kills_nil() {
        let r = RingExpr::base("R");
        let e = GradedExpr::atom(Atom::nk(&r, 5));
        assert!(simplify(&e, &regular()).is_zero());
        assert_eq!(simplify(&e, &RingSpec::generic()), e);
    }

    #[test]
    fn integral_l_groups() {
        let z = RingExpr::base("Z");
        let e = GradedExpr::atom(Atom::l(&z, 6, Decoration::S));
        assert_eq!(simplify(&e, &RingSpec::integers()), GradedExpr::cyclic(2));
        let e = GradedExpr::atom(Atom::l(&z, -4, Decoration::MinusInfinity));
        assert_eq!(simplify(&e, &RingSpec::integers()), GradedExpr::free());
        let e = GradedExpr::atom(Atom::l(&z, -1, Decoration::H));
        assert!(simplify(&e, &RingSpec::integers()).is_zero());
    }

    #[test]
    fn integral_cyclic_nil() {
        let z5 = RingExpr::group_ring("Z", GroupTag::Cyclic(5));
        let e = GradedExpr::atom(Atom::nk(&z5, 1));
        assert!(simplify(&e, &RingSpec::integers()).is_zero());
        let e2 = GradedExpr::atom(Atom::nk(&z5, 2));
        assert_eq!(simplify(&e2, &RingSpec::integers()), e2);
    }

    #[test]
    fn lower_k_of_finite_group_rings() {
        let d = RingSpec::preset("dedekind0").unwrap();
        let rz3 = RingExpr::group_ring("R", GroupTag::Cyclic(3));
        assert!(simplify(&GradedExpr::atom(Atom::k(&rz3, -2)), &d).is_zero());
        let km1 = GradedExpr::atom(Atom::k(&rz3, -1));
        assert_eq!(simplify(&km1, &d), km1);
        // regular alone says nothing about R[Z/3]
        let km5 = GradedExpr::atom(Atom::k(&rz3, -5));
        assert_eq!(simplify(&km5, &regular()), km5);
        // and regular kills negative K of R itself
        let r = RingExpr::base("R");
        assert!(simplify(&GradedExpr::atom(Atom::k(&r, -1)), &regular()).is_zero());
        let k0 = GradedExpr::atom(Atom::k(&r, 0));
        assert_eq!(simplify(&k0, &regular()), k0);
    }

    #[test]
    fn trivial_group_relative_terms_vanish() {
        let r = RingExpr::base("R");
        let e = GradedExpr::atom(Atom::wh(GroupTag::Trivial, &r, 1))
            .dsum(&GradedExpr::atom(Atom::sper(GroupTag::Trivial, &r, 0, Decoration::MinusInfinity)));
        assert!(simplify(&e, &RingSpec::generic()).is_zero());
    }

    #[test]
    fn k_of_z_is_not_built_in() {
        let z = RingExpr::base("Z");
        let k0 = GradedExpr::atom(Atom::k(&z, 0));
        assert_eq!(simplify(&k0, &RingSpec::integers()), k0);
    }

    #[test]
    fn value_table_substitution() {
        let text = r#"{"name": "Z", "axioms": ["IsZ"], "values": {"K": {"0": "Z", "1": "Z/2"}}}"#;
        let spec = RingSpec::from_json(text).unwrap();
        let z = RingExpr::base("Z");
        let e = GradedExpr::atom(Atom::k(&z, 0)).dsum(&GradedExpr::atom(Atom::k(&z, 1)));
        let (out, fired) = Simplifier::new(&spec).simplify_traced(&e);
        assert_eq!(out, GradedExpr::free().dsum(&GradedExpr::cyclic(2)));
        assert!(fired.contains(&Rule::ValueTable));
    }

    #[test]
    fn structure_set_preset_gated() {
        let z = RingExpr::base("Z");
        let e = GradedExpr::atom(Atom::sper(GroupTag::Cyclic(5), &z, 2, Decoration::S));
        let plain = Simplifier::new(&RingSpec::integers());
        assert_eq!(plain.simplify(&e), e);
        let with = plain.clone().structure_set_preset(true);
        assert_eq!(
            with.simplify(&e),
            GradedExpr::term(Atom::Named { label: "Z[1/5]".into() }, Card::fin(2))
        );
        assert!(with.simplify(&e.shift(1)).is_zero());
        let h = GradedExpr::atom(Atom::sper(GroupTag::Cyclic(5), &z, 2, Decoration::H));
        assert_eq!(with.simplify(&h), h);
    }

    #[test]
    fn primes() {
        let ps: Vec<u64> = (0..30).filter(|&n| is_prime(n)).collect();
        assert_eq!(ps, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
    }
}
