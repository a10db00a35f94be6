//! Theorem engine: picks the decomposition that applies to a group and theory,
//! instantiates it degree by degree, and records which hypotheses were used.

mod formulas;

use std::fmt;
use std::ops::RangeInclusive;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use formulas::{
    free_action_l, free_action_wh, free_group, hyperbolic_skeleton, k_product_with_zd, k_zd, l_zd,
    surface_group, tf_hyperbolic, wh_zd, zp_l, zp_wh,
};

use crate::formal::{Axiom, Decoration, GradedExpr, RingExpr, RingSpec, Rule, Simplifier};
use crate::groupcat::{ActionAnalysis, GroupDesc, GroupError};

/// Largest number of degrees a single query may request.
pub const MAX_DEGREES: i64 = 10_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Theory {
    K,
    Wh,
    L,
    Sper,
}

impl Theory {
    pub fn takes_decoration(self) -> bool {
        matches!(self, Theory::L | Theory::Sper)
    }
}

impl fmt::Display for Theory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Theory::K => "K",
            Theory::Wh => "Wh",
            Theory::L => "L",
            Theory::Sper => "Sper",
        })
    }
}

impl FromStr for Theory {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "K" | "k" => Ok(Theory::K),
            "Wh" | "wh" | "WH" => Ok(Theory::Wh),
            "L" | "l" => Ok(Theory::L),
            "Sper" | "sper" | "S" | "structure" => Ok(Theory::Sper),
            _ => Err(format!("unknown theory {s:?}; expected K, Wh, L or Sper")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AssemblyError {
    #[error("invalid query: {0}")]
    InvalidQuery(String),
    #[error(transparent)]
    Group(GroupError),
    #[error("no applicable theorem: {0}")]
    NoApplicableTheorem(String),
    #[error("|J| is unknown for a non-split extension; pass an explicit value")]
    UnknownJ,
    #[error("the theorem needs a regular coefficient ring")]
    NotRegular,
    #[error("the action is not free away from 0")]
    NotFree,
    #[error("the theorem needs an odd prime, got p = {p}")]
    EvenP { p: u64 },
    #[error("decorations other than <-oo> are only covered for R = Z")]
    DecorationNeedsZ,
}

impl From<GroupError> for AssemblyError {
    fn from(e: GroupError) -> Self {
        match e {
            GroupError::UnknownJ => AssemblyError::UnknownJ,
            other => AssemblyError::Group(other),
        }
    }
}

impl AssemblyError {
    /// True when the query was well formed but no theorem covers it.
    pub fn is_hypothesis_failure(&self) -> bool {
        !matches!(self, AssemblyError::InvalidQuery(_) | AssemblyError::Group(_))
    }
}

/// Which decomposition produced a row.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TheoremId {
    TrivialGroup,
    FreeAbelian,
    FreeGroup,
    SurfaceGroup,
    TorsionFreeHyperbolic,
    Hyperbolic,
    FreeActionK,
    FreeActionL,
    CyclicPrimeK,
    OddPrimeL,
    OddPrimeLIntegral,
    ProductWithFreeAbelian,
    TorsionFreeAssembly,
}

impl TheoremId {
    pub fn id(self) -> &'static str {
        match self {
            TheoremId::TrivialGroup => "trivial-group",
            TheoremId::FreeAbelian => "free-abelian",
            TheoremId::FreeGroup => "free-group",
            TheoremId::SurfaceGroup => "surface-group",
            TheoremId::TorsionFreeHyperbolic => "torsion-free-hyperbolic",
            TheoremId::Hyperbolic => "hyperbolic",
            TheoremId::FreeActionK => "free-action-k",
            TheoremId::FreeActionL => "free-action-l",
            TheoremId::CyclicPrimeK => "cyclic-prime-k",
            TheoremId::OddPrimeL => "odd-prime-l",
            TheoremId::OddPrimeLIntegral => "odd-prime-l-integral",
            TheoremId::ProductWithFreeAbelian => "product-with-free-abelian",
            TheoremId::TorsionFreeAssembly => "torsion-free-assembly",
        }
    }

    pub fn summary(self) -> &'static str {
        match self {
            TheoremId::TrivialGroup => "group ring of the trivial group is the coefficient ring",
            TheoremId::FreeAbelian => "K, Wh and L of Z^d: binomial sums over K_(n-i)(R), Nil terms per maximal cyclic subgroup",
            TheoremId::FreeGroup => "free group F_r: K_n + K_(n-1)^r + Nil terms; L_n + L_(n-1)^r",
            TheoremId::SurfaceGroup => "closed orientable surface group: homology of the surface plus Nil terms",
            TheoremId::TorsionFreeHyperbolic => "torsion-free hyperbolic group: H_n(BG; E) plus NK_n^2 per maximal cyclic class",
            TheoremId::Hyperbolic => "hyperbolic group: proper equivariant homology plus one relative term per maximal virtually cyclic class",
            TheoremId::FreeActionK => "Z^d by finite Q acting freely away from 0: Wh over J plus Nil terms over I1 and I2",
            TheoremId::FreeActionL => "Z^d by finite Q acting freely away from 0: structure groups over J plus UNil over I2",
            TheoremId::CyclicPrimeK => "Z^d by Z/p, R regular: Wh over J with binomials in e plus Nil terms of R[Z/p]",
            TheoremId::OddPrimeL => "Z^d by Z/p, p odd: structure groups over J with binomials in e",
            TheoremId::OddPrimeLIntegral => "Z^d by Z/p, p odd, R = Z: decorated structure groups over J with binomials in e",
            TheoremId::ProductWithFreeAbelian => "G x Z^d: free-abelian decomposition over the ring R[G]",
            TheoremId::TorsionFreeAssembly => "assembly is an isomorphism for this torsion-free group, so the structure group vanishes",
        }
    }
}

impl fmt::Display for TheoremId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

/// One entry of a hypothesis checklist. `via` lists the ring axioms that
/// discharge it and is empty when the hypothesis is not satisfied.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Hypothesis {
    pub name: String,
    pub satisfied: bool,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub via: Vec<Axiom>,
}

impl Hypothesis {
    fn structural(name: impl Into<String>) -> Self {
        Hypothesis {
            name: name.into(),
            satisfied: true,
            via: Vec::new(),
        }
    }

    /// Satisfied by the first alternative whose axioms all hold.
    fn from_axioms(name: impl Into<String>, ring: &RingSpec, alternatives: &[&[Axiom]]) -> Self {
        let via = alternatives
            .iter()
            .find(|alt| alt.iter().all(|a| ring.has(*a)))
            .map(|alt| alt.to_vec());
        Hypothesis {
            name: name.into(),
            satisfied: via.is_some(),
            via: via.unwrap_or_default(),
        }
    }

    fn assumed(name: impl Into<String>) -> Self {
        Hypothesis {
            name: name.into(),
            satisfied: false,
            via: Vec::new(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    pub theorem: TheoremId,
    pub statement: String,
    pub hypotheses: Vec<Hypothesis>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub rules: Vec<Rule>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    pub conditional: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResultRow {
    pub degree: i64,
    pub expr: GradedExpr,
    pub provenance: Provenance,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct QueryOptions {
    pub localize2: bool,
    pub structure_set_preset: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Query {
    pub group: GroupDesc,
    pub ring: RingSpec,
    pub theory: Theory,
    pub decoration: Option<Decoration>,
    pub degrees: RangeInclusive<i64>,
    pub options: QueryOptions,
}

impl Query {
    pub fn new(group: GroupDesc, ring: RingSpec, theory: Theory, degrees: RangeInclusive<i64>) -> Self {
        Query {
            group,
            ring,
            theory,
            decoration: None,
            degrees,
            options: QueryOptions::default(),
        }
    }

    pub fn with_decoration(mut self, decoration: Decoration) -> Self {
        self.decoration = Some(decoration);
        self
    }

    pub fn with_options(mut self, options: QueryOptions) -> Self {
        self.options = options;
        self
    }

    pub fn validate(&self) -> Result<(), AssemblyError> {
        if self.decoration.is_some() && !self.theory.takes_decoration() {
            return Err(AssemblyError::InvalidQuery(format!(
                "theory {} takes no decoration",
                self.theory
            )));
        }
        let (lo, hi) = (*self.degrees.start(), *self.degrees.end());
        if lo > hi {
            return Err(AssemblyError::InvalidQuery(format!("empty degree range {lo}..{hi}")));
        }
        if hi.saturating_sub(lo) >= MAX_DEGREES {
            return Err(AssemblyError::InvalidQuery(format!(
                "degree range {lo}..{hi} exceeds {MAX_DEGREES} degrees"
            )));
        }
        self.group.validate()?;
        Ok(())
    }
}

type Builder<'a> = Box<dyn Fn(i64) -> Result<(GradedExpr, Vec<String>), AssemblyError> + 'a>;

struct Plan<'a> {
    theorem: TheoremId,
    hypotheses: Vec<Hypothesis>,
    notes: Vec<String>,
    build: Builder<'a>,
}

impl<'a> Plan<'a> {
    fn new(theorem: TheoremId, build: impl Fn(i64) -> GradedExpr + 'a) -> Self {
        Plan {
            theorem,
            hypotheses: Vec::new(),
            notes: Vec::new(),
            build: Box::new(move |n| Ok((build(n), Vec::new()))),
        }
    }

    fn fallible(theorem: TheoremId, build: impl Fn(i64) -> Result<GradedExpr, AssemblyError> + 'a) -> Self {
        Plan {
            theorem,
            hypotheses: Vec::new(),
            notes: Vec::new(),
            build: Box::new(move |n| build(n).map(|e| (e, Vec::new()))),
        }
    }

    fn hypothesis(mut self, h: Hypothesis) -> Self {
        self.hypotheses.push(h);
        self
    }

    fn note(mut self, note: impl Into<String>) -> Self {
        self.notes.push(note.into());
        self
    }
}

const LOWER_K_VANISHING: &str = "K_n(RV) = 0 for n <= n0 <= -2 and every virtually cyclic V";
const SPLIT_HOMOLOGY: &str = "Atiyah-Hirzebruch spectral sequence for BG collapses and splits";

pub(crate) const SURFACE_TABLE_NOTE: &str = "exponent 2g from the splitting formula; differs from the g in the closed-form table for odd degrees";

fn no_theorem(group: &GroupDesc, theory: Theory, why: &str) -> AssemblyError {
    AssemblyError::NoApplicableTheorem(format!("{theory} of {} ({}): {why}", group, group.kind()))
}

/// Decorations other than `<-oo>` for the L-theory of a torsion-free group.
/// The trivial group takes any decoration; the other groups with a covering
/// statement take `h`, `p` and `<j>` over `Z`.
fn check_torsion_free_decoration(
    group: &GroupDesc,
    theory: Theory,
    ring: &RingSpec,
    decoration: Decoration,
) -> Result<(), AssemblyError> {
    if decoration == Decoration::MinusInfinity {
        return Ok(());
    }
    let trivial = matches!(group, GroupDesc::Zd { d: 0 } | GroupDesc::Surface { g: 0 });
    if trivial {
        return Ok(());
    }
    let covered = match group {
        GroupDesc::Zd { d } => *d <= 1,
        GroupDesc::Surface { g } => *g >= 2,
        GroupDesc::Free { .. } | GroupDesc::TfHyperbolic { .. } => true,
        _ => false,
    };
    if !covered {
        return Err(no_theorem(
            group,
            theory,
            "only the decoration <-oo> is covered for this group",
        ));
    }
    if !ring.has(Axiom::IsZ) {
        return Err(AssemblyError::DecorationNeedsZ);
    }
    if decoration == Decoration::S {
        return Err(no_theorem(group, theory, "the decoration s is not covered; use h, p, <j> or <-oo>"));
    }
    Ok(())
}

fn plan<'a>(q: &'a Query, ring: &'a RingExpr) -> Result<Plan<'a>, AssemblyError> {
    let deco = q.decoration.unwrap_or(Decoration::MinusInfinity);
    let theory = q.theory;
    let spec = &q.ring;
    let g = &q.group;

    if g.is_torsion_free() && theory.takes_decoration() {
        check_torsion_free_decoration(g, theory, spec, deco)?;
    }
    let decoration_note = |p: Plan<'a>| {
        if theory.takes_decoration() && deco != Decoration::MinusInfinity {
            p.note(format!("decoration {deco} agrees with <-oo> here"))
        } else {
            p
        }
    };

    let plan = match g {
        GroupDesc::Zd { d } if theory == Theory::Sper || (*d == 0 && theory == Theory::Wh) => {
            Plan::new(TheoremId::TorsionFreeAssembly, |_| GradedExpr::zero())
        }
        GroupDesc::Zd { d: 0 } => Plan::new(TheoremId::TrivialGroup, move |n| surface_group(0, ring, theory, n, deco)),
        GroupDesc::Zd { d } => {
            let d = *d as u64;
            Plan::new(TheoremId::FreeAbelian, move |n| match theory {
                Theory::K => k_zd(d, ring, n),
                Theory::Wh => wh_zd(d, ring, n),
                _ => l_zd(d, ring, n, deco),
            })
        }
        GroupDesc::Free { .. } | GroupDesc::Surface { .. } | GroupDesc::TfHyperbolic { .. }
            if theory == Theory::Sper =>
        {
            Plan::new(TheoremId::TorsionFreeAssembly, |_| GradedExpr::zero())
        }
        GroupDesc::Free { r } => {
            let r = *r as u64;
            Plan::new(TheoremId::FreeGroup, move |n| free_group(r, ring, theory, n, deco))
        }
        GroupDesc::Surface { g: genus } => {
            let genus = *genus as u64;
            let theorem = match genus {
                0 => TheoremId::TrivialGroup,
                1 => TheoremId::FreeAbelian,
                _ => TheoremId::SurfaceGroup,
            };
            let table_note = genus >= 2 && theory == Theory::L && spec.has(Axiom::IsZ);
            Plan {
                theorem,
                hypotheses: Vec::new(),
                notes: Vec::new(),
                build: Box::new(move |n| {
                    let notes = if table_note && n.rem_euclid(2) == 1 {
                        vec![SURFACE_TABLE_NOTE.to_string()]
                    } else {
                        Vec::new()
                    };
                    Ok((surface_group(genus, ring, theory, n, deco), notes))
                }),
            }
        }
        GroupDesc::TfHyperbolic { betti, micy_card } => Plan::new(TheoremId::TorsionFreeHyperbolic, move |n| {
            tf_hyperbolic(betti, micy_card, ring, theory, n, deco)
        })
        .hypothesis(Hypothesis::structural("G is torsion-free hyperbolic (asserted by the descriptor)"))
        .hypothesis(Hypothesis::assumed(SPLIT_HOMOLOGY))
        .note("assumes collapsed, split spectral sequence"),
        GroupDesc::Hyperbolic { micy_card } => match theory {
            Theory::K => Plan::new(TheoremId::Hyperbolic, move |n| {
                hyperbolic_skeleton(micy_card, ring, Theory::K, n)
            }),
            Theory::L => {
                if deco != Decoration::MinusInfinity {
                    return Err(no_theorem(g, theory, "only the decoration <-oo> is covered"));
                }
                Plan::new(TheoremId::Hyperbolic, move |n| {
                    hyperbolic_skeleton(micy_card, ring, Theory::L, n)
                })
                .hypothesis(Hypothesis::from_axioms(
                    LOWER_K_VANISHING,
                    spec,
                    &[&[Axiom::IsZ], &[Axiom::Regular, Axiom::ContainsQ]],
                ))
            }
            _ => return Err(no_theorem(g, theory, "only K and L are covered for general hyperbolic groups")),
        },
        GroupDesc::Product { d, factor } => match theory {
            Theory::K | Theory::Wh => {
                let d = *d as u64;
                Plan::new(TheoremId::ProductWithFreeAbelian, move |n| {
                    k_product_with_zd(d, factor, ring, theory, n)
                })
            }
            _ => return Err(no_theorem(g, theory, "only K and Wh are covered for products with Z^d")),
        },
        GroupDesc::CrystZp { .. } => plan_crystallographic(q, ring, deco)?,
    };
    let mut plan = decoration_note(plan);
    if g.is_torsion_free() && plan.theorem != TheoremId::TorsionFreeHyperbolic {
        plan.hypotheses.insert(0, Hypothesis::structural("G is torsion-free"));
    }
    Ok(plan)
}

fn plan_crystallographic<'a>(q: &'a Query, ring: &'a RingExpr, deco: Decoration) -> Result<Plan<'a>, AssemblyError> {
    let g = &q.group;
    let spec = &q.ring;
    let a: ActionAnalysis = g.analysis()?;
    a.require_j()?;
    let free = a.free_away_from_zero;
    let structural = |p: Plan<'a>, a: &ActionAnalysis| {
        let p = p.hypothesis(Hypothesis::structural(format!("Z/{} acts on Z^{} with fixed rank e = {}", a.p, a.d, a.e)));
        if a.free_away_from_zero {
            p.hypothesis(Hypothesis::structural("action is free away from 0"))
        } else {
            p
        }
    };
    let plan = match q.theory {
        Theory::Wh if free => {
            let a2 = a.clone();
            structural(Plan::fallible(TheoremId::FreeActionK, move |n| free_action_wh(&a2, ring, n)), &a)
        }
        Theory::Wh => {
            if !spec.has(Axiom::Regular) {
                return Err(AssemblyError::NotRegular);
            }
            let a2 = a.clone();
            structural(Plan::fallible(TheoremId::CyclicPrimeK, move |n| zp_wh(&a2, ring, n)), &a)
                .hypothesis(Hypothesis::from_axioms("R is regular", spec, &[&[Axiom::Regular]]))
        }
        Theory::Sper if deco == Decoration::MinusInfinity && free => {
            let a2 = a.clone();
            structural(Plan::fallible(TheoremId::FreeActionL, move |n| free_action_l(&a2, ring, n)), &a).hypothesis(
                Hypothesis::from_axioms(
                    LOWER_K_VANISHING,
                    spec,
                    &[&[Axiom::DedekindCharZero], &[Axiom::Regular, Axiom::ContainsQ]],
                ),
            )
        }
        Theory::Sper => {
            if a.p.is_multiple_of(2) {
                return Err(AssemblyError::EvenP { p: a.p });
            }
            let theorem = if deco == Decoration::MinusInfinity {
                TheoremId::OddPrimeL
            } else {
                if !spec.has(Axiom::IsZ) {
                    return Err(AssemblyError::DecorationNeedsZ);
                }
                TheoremId::OddPrimeLIntegral
            };
            let a2 = a.clone();
            let p = structural(Plan::fallible(theorem, move |n| zp_l(&a2, ring, n, deco)), &a);
            if theorem == TheoremId::OddPrimeLIntegral {
                p.hypothesis(Hypothesis::from_axioms("R = Z", spec, &[&[Axiom::IsZ]]))
            } else {
                p
            }
        }
        Theory::K | Theory::L => {
            return Err(no_theorem(
                g,
                q.theory,
                "only the relative terms Wh and Sper are covered for extensions of Z^d by Z/p",
            ))
        }
    };
    Ok(plan)
}

/// Evaluates a query degree by degree.
pub fn evaluate(q: &Query) -> Result<Vec<ResultRow>, AssemblyError> {
    q.validate()?;
    let ring = RingExpr::base(q.ring.name());
    let plan = plan(q, &ring)?;
    let simplifier = Simplifier::new(&q.ring).structure_set_preset(q.options.structure_set_preset);
    let mut rows = Vec::new();
    for n in q.degrees.clone() {
        let (raw, extra_notes) = (plan.build)(n)?;
        let (mut expr, fired) = simplifier.simplify_traced(&raw);
        if q.options.localize2 {
            expr = expr.localize_away_from_2();
        }
        let mut hypotheses = plan.hypotheses.clone();
        for rule in &fired {
            hypotheses.push(Hypothesis {
                name: format!("rewrite: {}", rule.describe()),
                satisfied: true,
                via: rule.axioms().to_vec(),
            });
        }
        let mut notes = plan.notes.clone();
        notes.extend(extra_notes);
        if fired.contains(&Rule::StructureSetPreset) {
            notes.push("uses the opt-in structure-set closed form".into());
        }
        let conditional = hypotheses.iter().any(|h| !h.satisfied);
        rows.push(ResultRow {
            degree: n,
            expr,
            provenance: Provenance {
                theorem: plan.theorem,
                statement: plan.theorem.summary().to_string(),
                hypotheses,
                rules: fired.into_iter().collect(),
                notes,
                conditional,
            },
        });
    }
    Ok(rows)
}

/// Evaluates one degree and returns only the expression.
pub fn evaluate_one(
    group: &GroupDesc,
    ring: &RingSpec,
    theory: Theory,
    decoration: Option<Decoration>,
    n: i64,
) -> Result<GradedExpr, AssemblyError> {
    let mut q = Query::new(group.clone(), ring.clone(), theory, n..=n);
    q.decoration = decoration;
    Ok(evaluate(&q)?.remove(0).expr)
}

/// Applies a ring's rewrite rules to a formula result.
pub fn simplified(e: &GradedExpr, ring: &RingSpec) -> GradedExpr {
    Simplifier::new(ring).simplify(e)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formal::{render, Atom, Card, Format, GroupTag};
    use crate::groupcat::{cyclotomic_companion, cyclic_permutation, minus_identity};
    use crate::intlattice::IntMatrix;

    fn z() -> RingSpec {
        RingSpec::integers()
    }

    fn rows(g: GroupDesc, ring: RingSpec, theory: Theory, degrees: RangeInclusive<i64>) -> Vec<ResultRow> {
        evaluate(&Query::new(g, ring, theory, degrees)).unwrap()
    }

    fn text(r: &ResultRow) -> String {
        render(&r.expr, Format::Text)
    }

    #[test]
    fn zd_l_over_integers() {
        let out = rows(GroupDesc::Zd { d: 2 }, z(), Theory::L, 0..=3);
        let got: Vec<String> = out.iter().map(text).collect();
        assert_eq!(got, ["Z + Z/2", "Z^2", "Z + Z/2", "(Z/2)^2"]);
        let out = rows(GroupDesc::Zd { d: 3 }, z(), Theory::L, 0..=0);
        assert_eq!(text(&out[0]), "Z + (Z/2)^3");
    }

    #[test]
    fn surface_table_and_note() {
        let out = rows(GroupDesc::Surface { g: 2 }, z(), Theory::L, 0..=3);
        let got: Vec<String> = out.iter().map(text).collect();
        assert_eq!(got, ["Z + Z/2", "Z^4", "Z + Z/2", "(Z/2)^4"]);
        assert!(out[0].provenance.notes.is_empty());
        assert_eq!(out[1].provenance.notes, vec![SURFACE_TABLE_NOTE.to_string()]);
        assert_eq!(out[1].provenance.theorem, TheoremId::SurfaceGroup);
    }

    #[test]
    fn nonsplit_without_j_fails() {
        let g = GroupDesc::CrystZp {
            d: 2,
            p: 3,
            rho: cyclotomic_companion(3),
            split: false,
            j_card: None,
        };
        let q = Query::new(g, z(), Theory::Wh, 0..=0);
        assert_eq!(evaluate(&q), Err(AssemblyError::UnknownJ));
    }

    #[test]
    fn crystallographic_dispatch() {
        let dinf = GroupDesc::CrystZp {
            d: 1,
            p: 2,
            rho: minus_identity(1),
            split: true,
            j_card: None,
        };
        let out = rows(dinf.clone(), z(), Theory::Wh, 1..=1);
        assert_eq!(out[0].provenance.theorem, TheoremId::FreeActionK);
        assert_eq!(text(&out[0]), "Wh_1(Z/2;Z)^2");
        let generic = RingSpec::generic();
        let q = Query::new(dinf.clone(), generic.clone(), Theory::Sper, 0..=0);
        let out = evaluate(&q).unwrap();
        assert!(out[0].provenance.conditional);
        assert_eq!(
            evaluate(&Query::new(dinf.clone(), z(), Theory::K, 0..=0)).unwrap_err(),
            no_theorem(&dinf, Theory::K, "only the relative terms Wh and Sper are covered for extensions of Z^d by Z/p")
        );

        let cyc3 = GroupDesc::CrystZp {
            d: 3,
            p: 3,
            rho: cyclic_permutation(3),
            split: true,
            j_card: None,
        };
        let q = Query::new(cyc3.clone(), generic, Theory::Wh, 0..=0);
        assert_eq!(evaluate(&q), Err(AssemblyError::NotRegular));
        let out = rows(cyc3, RingSpec::preset("regular").unwrap(), Theory::Wh, 0..=0);
        assert_eq!(out[0].provenance.theorem, TheoremId::CyclicPrimeK);
        assert_eq!(text(&out[0]), "NK_0(R[Z/3])^2 + Wh_0(Z/3;R) + Wh_-1(Z/3;R)");
    }

    #[test]
    fn decorated_structure_groups() {
        let g = GroupDesc::CrystZp {
            d: 1,
            p: 5,
            rho: IntMatrix::identity(1),
            split: true,
            j_card: None,
        };
        let q = Query::new(g.clone(), z(), Theory::Sper, 0..=1)
            .with_decoration(Decoration::S)
            .with_options(QueryOptions {
                localize2: false,
                structure_set_preset: true,
            });
        let out = evaluate(&q).unwrap();
        assert_eq!(out[0].provenance.theorem, TheoremId::OddPrimeLIntegral);
        assert_eq!(text(&out[0]), "Z[1/5]^2");
        assert_eq!(text(&out[1]), "Z[1/5]^2");
        let q = Query::new(g, RingSpec::preset("regular").unwrap(), Theory::Sper, 0..=0).with_decoration(Decoration::H);
        assert_eq!(evaluate(&q), Err(AssemblyError::DecorationNeedsZ));
    }

    #[test]
    fn decoration_rules_for_torsion_free_groups() {
        let h = |g: GroupDesc, ring: RingSpec| {
            evaluate(&Query::new(g, ring, Theory::L, 0..=0).with_decoration(Decoration::H))
        };
        assert!(h(GroupDesc::Surface { g: 3 }, z()).is_ok());
        assert!(h(GroupDesc::Free { r: 2 }, z()).is_ok());
        assert!(h(GroupDesc::Zd { d: 0 }, RingSpec::generic()).is_ok());
        assert!(matches!(h(GroupDesc::Zd { d: 2 }, z()), Err(AssemblyError::NoApplicableTheorem(_))));
        assert_eq!(h(GroupDesc::Free { r: 2 }, RingSpec::generic()), Err(AssemblyError::DecorationNeedsZ));
        let s = evaluate(&Query::new(GroupDesc::Free { r: 2 }, z(), Theory::L, 0..=0).with_decoration(Decoration::S));
        assert!(matches!(s, Err(AssemblyError::NoApplicableTheorem(_))));
        let k = evaluate(&Query::new(GroupDesc::Free { r: 2 }, z(), Theory::K, 0..=0).with_decoration(Decoration::S));
        assert!(matches!(k, Err(AssemblyError::InvalidQuery(_))));
    }

    #[test]
    fn hyperbolic_l_is_conditional_without_vanishing() {
        let g = GroupDesc::Hyperbolic { micy_card: Card::Omega };
        let out = rows(g.clone(), RingSpec::generic(), Theory::L, 0..=0);
        assert!(out[0].provenance.conditional);
        let out = rows(g.clone(), RingSpec::preset("regularQ").unwrap(), Theory::L, 0..=0);
        assert!(!out[0].provenance.conditional);
        let out = rows(g, z(), Theory::K, 0..=0);
        assert!(!out[0].provenance.conditional);
    }

    #[test]
    fn tf_hyperbolic_rows_are_conditional() {
        let g = GroupDesc::TfHyperbolic {
            betti: vec![1, 4, 1],
            micy_card: Card::Omega,
        };
        let out = rows(g, z(), Theory::K, 0..=0);
        assert!(out[0].provenance.conditional);
        assert!(out[0].provenance.notes.iter().any(|n| n.contains("split")));
    }

    #[test]
    fn satisfied_hypotheses_use_ring_axioms() {
        let out = rows(GroupDesc::Zd { d: 2 }, z(), Theory::K, -2..=2);
        for row in out {
            for h in &row.provenance.hypotheses {
                assert!(h.via.iter().all(|a| z().has(*a)));
            }
        }
    }

    #[test]
    fn product_rows() {
        let g = GroupDesc::Product {
            d: 1,
            factor: GroupTag::Cyclic(3),
        };
        let out = rows(g, RingSpec::preset("dedekind0").unwrap(), Theory::K, -3..=-3);
        // K_-3 and K_-4 of R[Z/3] vanish; NK_-3(R[Z/3]) is not covered by any rule
        assert_eq!(
            out[0].expr,
            GradedExpr::term(
                Atom::nk(&RingExpr::group_ring("R", GroupTag::Cyclic(3)), -3),
                Card::fin(2)
            )
        );
    }
}
