//! Formal graded abelian groups.
//!
//! A [`GradedExpr`] is a finite direct sum of [`Atom`]s, each carrying a
//! cardinal multiplicity ([`Card`]). Atoms are either concrete groups
//! (`Z`, `Z/m`, a named concrete group such as `Z[1/5]`) or symbolic
//! K-/L-theoretic groups of a ring (`K_n(R)`, `NK_n(R)`, `L_n^e(R)`, ...).
//! Expressions are kept in canonical form: terms sorted by atom, equal atoms
//! merged, zero multiplicities dropped, so equality is structural.

mod render;
mod ring;
mod simplify;

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul};
use std::str::FromStr;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::bigjson::{biguint, BigUintJson};

pub use render::{parse_concrete, parse_json, render, Format};
pub use ring::{Axiom, RingSpec, TableKind, ValueTable};
pub use simplify::{simplify, Rule, Simplifier};
pub(crate) use simplify::is_prime;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormalError {
    #[error("cannot parse {what} from {input:?}")]
    Parse { what: &'static str, input: String },
    #[error("invalid ring spec: {0}")]
    InvalidRing(String),
    #[error("invalid JSON: {0}")]
    Json(String),
}

impl FormalError {
    fn parse(what: &'static str, input: &str) -> Self {
        FormalError::Parse {
            what,
            input: input.to_string(),
        }
    }
}

/// Cardinal multiplicity: a finite count or countably infinite.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Card {
    Fin(BigUint),
    Omega,
}

impl Card {
    pub fn fin(n: u64) -> Self {
        Card::Fin(BigUint::from(n))
    }

    pub fn zero() -> Self {
        Card::fin(0)
    }

    pub fn one() -> Self {
        Card::fin(1)
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Card::Fin(n) if n.is_zero())
    }

    pub fn is_omega(&self) -> bool {
        matches!(self, Card::Omega)
    }

    pub fn as_u64(&self) -> Option<u64> {
        match self {
            Card::Fin(n) => n.to_u64(),
            Card::Omega => None,
        }
    }
}

impl Add for &Card {
    type Output = Card;

    fn add(self, rhs: &Card) -> Card {
        match (self, rhs) {
            (Card::Fin(a), Card::Fin(b)) => Card::Fin(a + b),
            _ => Card::Omega,
        }
    }
}

impl Add for Card {
    type Output = Card;

    fn add(self, rhs: Card) -> Card {
        &self + &rhs
    }
}

impl Mul for &Card {
    type Output = Card;

    fn mul(self, rhs: &Card) -> Card {
        match (self, rhs) {
            (Card::Fin(a), Card::Fin(b)) => Card::Fin(a * b),
            (c, Card::Omega) | (Card::Omega, c) if c.is_zero() => Card::zero(),
            _ => Card::Omega,
        }
    }
}

impl Mul for Card {
    type Output = Card;

    fn mul(self, rhs: Card) -> Card {
        &self * &rhs
    }
}

impl fmt::Display for Card {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Card::Fin(n) => write!(f, "{n}"),
            Card::Omega => write!(f, "omega"),
        }
    }
}

impl FromStr for Card {
    type Err = FormalError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "omega" | "oo" | "ω" | "inf" => Ok(Card::Omega),
            t => t
                .parse::<BigUint>()
                .map(Card::Fin)
                .map_err(|_| FormalError::parse("cardinal", s)),
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum CardJson {
    Fin { fin: BigUintJson },
    Word(String),
}

impl Serialize for Card {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Card::Fin(n) => CardJson::Fin { fin: n.into() }.serialize(s),
            Card::Omega => CardJson::Word("omega".into()).serialize(s),
        }
    }
}

impl<'de> Deserialize<'de> for Card {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        match CardJson::deserialize(d)? {
            CardJson::Fin { fin } => fin.to_biguint().map(Card::Fin).map_err(serde::de::Error::custom),
            CardJson::Word(w) if w == "omega" => Ok(Card::Omega),
            CardJson::Word(w) => Err(serde::de::Error::custom(format!("unknown cardinal {w:?}"))),
        }
    }
}

/// L-theory decoration: `s`, `h = <1>`, `p = <0>`, `<j>` for `j <= -1`, `<-oo>`.
///
/// Ordered `s < h < p < <-1> < <-2> < ... < <-oo>`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Decoration {
    S,
    H,
    P,
    Lower(i64),
    MinusInfinity,
}

impl Decoration {
    /// `<j>` for `j <= 1`; `<1>` is `h` and `<0>` is `p`.
    pub fn angle(j: i64) -> Option<Self> {
        match j {
            1 => Some(Decoration::H),
            0 => Some(Decoration::P),
            j if j < 0 => Some(Decoration::Lower(j)),
            _ => None,
        }
    }

    /// True for the `<j>` family (including `h`, `p` and `<-oo>`); false for `s`.
    pub fn is_angle(self) -> bool {
        !matches!(self, Decoration::S)
    }

    fn sort_key(self) -> (u8, i64) {
        match self {
            Decoration::S => (0, 0),
            Decoration::H => (1, 0),
            Decoration::P => (2, 0),
            Decoration::Lower(j) => (3, -j),
            Decoration::MinusInfinity => (4, 0),
        }
    }
}

impl PartialOrd for Decoration {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Decoration {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.sort_key().cmp(&other.sort_key())
    }
}

impl fmt::Display for Decoration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Decoration::S => write!(f, "s"),
            Decoration::H => write!(f, "h"),
            Decoration::P => write!(f, "p"),
            Decoration::Lower(j) => write!(f, "<{j}>"),
            Decoration::MinusInfinity => write!(f, "<-oo>"),
        }
    }
}

impl FromStr for Decoration {
    type Err = FormalError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        let inner = t.strip_prefix('<').and_then(|x| x.strip_suffix('>')).unwrap_or(t);
        match inner {
            "s" => Ok(Decoration::S),
            "h" => Ok(Decoration::H),
            "p" => Ok(Decoration::P),
            "-oo" | "-inf" | "-infinity" => Ok(Decoration::MinusInfinity),
            j => j
                .parse::<i64>()
                .ok()
                .and_then(Decoration::angle)
                .ok_or_else(|| FormalError::parse("decoration", s)),
        }
    }
}

impl Serialize for Decoration {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Decoration {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

/// A group appearing inside an atom or a group ring: trivial, cyclic of
/// order `n`, or an arbitrary named group.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GroupTag {
    Trivial,
    Cyclic(u64),
    Named(String),
}

impl GroupTag {
    pub fn is_finite(&self) -> bool {
        matches!(self, GroupTag::Trivial | GroupTag::Cyclic(_))
    }
}

impl fmt::Display for GroupTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupTag::Trivial => write!(f, "1"),
            GroupTag::Cyclic(n) => write!(f, "Z/{n}"),
            GroupTag::Named(s) => write!(f, "{s}"),
        }
    }
}

impl FromStr for GroupTag {
    type Err = FormalError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        if t == "1" || t == "{1}" {
            return Ok(GroupTag::Trivial);
        }
        if let Some(n) = t.strip_prefix("Z/") {
            return match n.parse::<u64>() {
                Ok(0) | Err(_) => Err(FormalError::parse("group", s)),
                Ok(1) => Ok(GroupTag::Trivial),
                Ok(n) => Ok(GroupTag::Cyclic(n)),
            };
        }
        let ok = !t.is_empty()
            && t.chars().all(|c| c.is_alphanumeric() || "_'^*x".contains(c))
            && t != "Z";
        if ok {
            Ok(GroupTag::Named(t.to_string()))
        } else {
            Err(FormalError::parse("group", s))
        }
    }
}

impl Serialize for GroupTag {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for GroupTag {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

/// Coefficient ring of a symbolic atom: a base ring `R` (by name) or a group
/// ring `R[F]`. `R[1]` is normalized to `R`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RingExpr {
    base: String,
    group: Option<GroupTag>,
}

impl RingExpr {
    pub fn base(name: impl Into<String>) -> Self {
        RingExpr {
            base: name.into(),
            group: None,
        }
    }

    pub fn group_ring(name: impl Into<String>, group: GroupTag) -> Self {
        RingExpr {
            base: name.into(),
            group: (group != GroupTag::Trivial).then_some(group),
        }
    }

    pub fn base_name(&self) -> &str {
        &self.base
    }

    pub fn group(&self) -> Option<&GroupTag> {
        self.group.as_ref()
    }
}

impl fmt::Display for RingExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.group {
            None => write!(f, "{}", self.base),
            Some(g) => write!(f, "{}[{}]", self.base, g),
        }
    }
}

impl FromStr for RingExpr {
    type Err = FormalError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        let valid_base = |b: &str| !b.is_empty() && !b.contains(['[', ']', '(', ')', ' ', ';', ',']);
        match t.split_once('[') {
            None if valid_base(t) => Ok(RingExpr::base(t)),
            Some((b, rest)) if valid_base(b) => {
                let g = rest
                    .strip_suffix(']')
                    .ok_or_else(|| FormalError::parse("ring", s))?;
                Ok(RingExpr::group_ring(b, g.parse()?))
            }
            _ => Err(FormalError::parse("ring", s)),
        }
    }
}

impl Serialize for RingExpr {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for RingExpr {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

/// A single summand.
///
/// Canonical order (used for sorting terms): kind in declaration order, then
/// ring, then degree (descending), then decoration, then cyclic modulus,
/// then group, then label.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum Atom {
    /// The infinite cyclic group `Z`.
    #[serde(rename = "Z")]
    Free,
    /// `Z/m`, `m >= 2`.
    #[serde(rename = "cyclic")]
    Cyclic {
        #[serde(with = "biguint")]
        modulus: BigUint,
    },
    /// A concrete group known only by name, e.g. `Z[1/5]`. Unaffected by shifts.
    #[serde(rename = "named")]
    Named { label: String },
    K { ring: RingExpr, degree: i64 },
    NK { ring: RingExpr, degree: i64 },
    L {
        ring: RingExpr,
        degree: i64,
        decoration: Decoration,
    },
    Wh {
        group: GroupTag,
        ring: RingExpr,
        degree: i64,
    },
    Sper {
        group: GroupTag,
        ring: RingExpr,
        degree: i64,
        decoration: Decoration,
    },
    /// `UNil_n(D_oo; R)`. The decoration is omitted: the `h` and `<-oo>`
    /// versions agree whenever the lower K-groups of `R`, `R[Z/2]` and
    /// `R[D_oo]` vanish (for instance over `Z`).
    UNil { ring: RingExpr, degree: i64 },
    /// A symbolic group that the engine does not decompose further.
    Opaque {
        label: String,
        ring: RingExpr,
        degree: i64,
    },
}

type AtomKey<'a> = (
    u8,
    Option<&'a RingExpr>,
    Option<std::cmp::Reverse<i64>>,
    Option<Decoration>,
    Option<&'a BigUint>,
    Option<&'a GroupTag>,
    Option<&'a str>,
);

impl Atom {
    pub fn cyclic(m: u64) -> Self {
        assert!(m >= 2, "Z/m needs m >= 2");
        Atom::Cyclic {
            modulus: BigUint::from(m),
        }
    }

    pub fn k(ring: &RingExpr, degree: i64) -> Self {
        Atom::K {
            ring: ring.clone(),
            degree,
        }
    }

    pub fn nk(ring: &RingExpr, degree: i64) -> Self {
        Atom::NK {
            ring: ring.clone(),
            degree,
        }
    }

    pub fn l(ring: &RingExpr, degree: i64, decoration: Decoration) -> Self {
        Atom::L {
            ring: ring.clone(),
            degree,
            decoration,
        }
    }

    pub fn wh(group: GroupTag, ring: &RingExpr, degree: i64) -> Self {
        Atom::Wh {
            group,
            ring: ring.clone(),
            degree,
        }
    }

    pub fn sper(group: GroupTag, ring: &RingExpr, degree: i64, decoration: Decoration) -> Self {
        Atom::Sper {
            group,
            ring: ring.clone(),
            degree,
            decoration,
        }
    }

    pub fn unil(ring: &RingExpr, degree: i64) -> Self {
        Atom::UNil {
            ring: ring.clone(),
            degree,
        }
    }

    pub fn opaque(label: impl Into<String>, ring: &RingExpr, degree: i64) -> Self {
        Atom::Opaque {
            label: label.into(),
            ring: ring.clone(),
            degree,
        }
    }

    pub fn is_concrete(&self) -> bool {
        matches!(self, Atom::Free | Atom::Cyclic { .. } | Atom::Named { .. })
    }

    pub fn degree(&self) -> Option<i64> {
        match self {
            Atom::Free | Atom::Cyclic { .. } | Atom::Named { .. } => None,
            Atom::K { degree, .. }
            | Atom::NK { degree, .. }
            | Atom::L { degree, .. }
            | Atom::Wh { degree, .. }
            | Atom::Sper { degree, .. }
            | Atom::UNil { degree, .. }
            | Atom::Opaque { degree, .. } => Some(*degree),
        }
    }

    pub fn ring(&self) -> Option<&RingExpr> {
        match self {
            Atom::Free | Atom::Cyclic { .. } | Atom::Named { .. } => None,
            Atom::K { ring, .. }
            | Atom::NK { ring, .. }
            | Atom::L { ring, .. }
            | Atom::Wh { ring, .. }
            | Atom::Sper { ring, .. }
            | Atom::UNil { ring, .. }
            | Atom::Opaque { ring, .. } => Some(ring),
        }
    }

    pub fn decoration(&self) -> Option<Decoration> {
        match self {
            Atom::L { decoration, .. } | Atom::Sper { decoration, .. } => Some(*decoration),
            _ => None,
        }
    }

    /// Same atom with degree lowered by `k`; concrete atoms are unchanged.
    pub fn shifted(&self, k: i64) -> Atom {
        let mut a = self.clone();
        match &mut a {
            Atom::Free | Atom::Cyclic { .. } | Atom::Named { .. } => {}
            Atom::K { degree, .. }
            | Atom::NK { degree, .. }
            | Atom::L { degree, .. }
            | Atom::Wh { degree, .. }
            | Atom::Sper { degree, .. }
            | Atom::UNil { degree, .. }
            | Atom::Opaque { degree, .. } => *degree -= k,
        }
        a
    }

    fn kind_rank(&self) -> u8 {
        match self {
            Atom::Free => 0,
            Atom::Cyclic { .. } => 1,
            Atom::Named { .. } => 2,
            Atom::K { .. } => 3,
            Atom::NK { .. } => 4,
            Atom::L { .. } => 5,
            Atom::Wh { .. } => 6,
            Atom::Sper { .. } => 7,
            Atom::UNil { .. } => 8,
            Atom::Opaque { .. } => 9,
        }
    }

    fn sort_key(&self) -> AtomKey<'_> {
        let modulus = match self {
            Atom::Cyclic { modulus } => Some(modulus),
            _ => None,
        };
        let group = match self {
            Atom::Wh { group, .. } | Atom::Sper { group, .. } => Some(group),
            _ => None,
        };
        let label = match self {
            Atom::Named { label } | Atom::Opaque { label, .. } => Some(label.as_str()),
            _ => None,
        };
        (
            self.kind_rank(),
            self.ring(),
            self.degree().map(std::cmp::Reverse),
            self.decoration(),
            modulus,
            group,
            label,
        )
    }
}

impl PartialOrd for Atom {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Atom {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.sort_key().cmp(&other.sort_key())
    }
}

/// A formal direct sum `⊕ atom^mult` in canonical form.
///
/// `localized` marks expressions that have had 2 inverted; it takes part in
/// equality.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct GradedExpr {
    terms: BTreeMap<Atom, Card>,
    localized: bool,
}

impl GradedExpr {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn atom(a: Atom) -> Self {
        Self::term(a, Card::one())
    }

    pub fn term(a: Atom, mult: Card) -> Self {
        let mut e = Self::zero();
        e.insert(a, mult);
        e
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Atom, Card)>) -> Self {
        let mut e = Self::zero();
        for (a, c) in terms {
            e.insert(a, c);
        }
        e
    }

    /// `Z`
    pub fn free() -> Self {
        Self::atom(Atom::Free)
    }

    /// `Z/m` (zero for `m = 1`)
    pub fn cyclic(m: u64) -> Self {
        if m == 1 {
            Self::zero()
        } else {
            Self::atom(Atom::cyclic(m))
        }
    }

    fn insert(&mut self, a: Atom, mult: Card) {
        if mult.is_zero() {
            return;
        }
        let slot = self.terms.entry(a).or_insert_with(Card::zero);
        *slot = &*slot + &mult;
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_localized(&self) -> bool {
        self.localized
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Atom, &Card)> {
        self.terms.iter()
    }

    pub fn atoms(&self) -> impl Iterator<Item = &Atom> {
        self.terms.keys()
    }

    pub fn multiplicity(&self, a: &Atom) -> Card {
        self.terms.get(a).cloned().unwrap_or_else(Card::zero)
    }

    pub fn any_atom(&self, pred: impl Fn(&Atom) -> bool) -> bool {
        self.terms.keys().any(pred)
    }

    pub fn is_concrete(&self) -> bool {
        self.terms.keys().all(Atom::is_concrete)
    }

    /// Direct sum.
    pub fn dsum(&self, other: &GradedExpr) -> GradedExpr {
        let mut out = self.clone();
        for (a, c) in &other.terms {
            out.insert(a.clone(), c.clone());
        }
        out.localized |= other.localized;
        out
    }

    /// Multiplies every multiplicity by `c`.
    pub fn scale(&self, c: &Card) -> GradedExpr {
        let mut out = GradedExpr {
            terms: BTreeMap::new(),
            localized: self.localized,
        };
        for (a, m) in &self.terms {
            out.insert(a.clone(), m * c);
        }
        out
    }

    pub fn scale_by(&self, n: u64) -> GradedExpr {
        self.scale(&Card::fin(n))
    }

    /// Lowers every symbolic degree by `k`.
    pub fn shift(&self, k: i64) -> GradedExpr {
        let mut out = GradedExpr {
            terms: BTreeMap::new(),
            localized: self.localized,
        };
        for (a, m) in &self.terms {
            out.insert(a.shifted(k), m.clone());
        }
        out
    }

    /// Replaces each atom by an expression, multiplicities carried over.
    pub fn flat_map(&self, mut f: impl FnMut(&Atom) -> GradedExpr) -> GradedExpr {
        let mut out = GradedExpr {
            terms: BTreeMap::new(),
            localized: self.localized,
        };
        for (a, m) in &self.terms {
            let image = f(a);
            out.localized |= image.localized;
            for (b, k) in image.terms {
                out.insert(b, &k * m);
            }
        }
        out
    }

    /// Inverts 2: drops every UNil atom, removes the 2-primary part of each
    /// cyclic atom, and marks the result as localized.
    pub fn localize_away_from_2(&self) -> GradedExpr {
        let mut out = self.flat_map(|a| match a {
            Atom::UNil { .. } => GradedExpr::zero(),
            Atom::Cyclic { modulus } => {
                let mut m = modulus.clone();
                let two = BigUint::from(2u32);
                while m.is_even() && !m.is_zero() {
                    m /= &two;
                }
                if m.is_one() {
                    GradedExpr::zero()
                } else {
                    GradedExpr::atom(Atom::Cyclic { modulus: m })
                }
            }
            other => GradedExpr::atom(other.clone()),
        });
        out.localized = true;
        out
    }
}

impl Add for GradedExpr {
    type Output = GradedExpr;

    fn add(self, rhs: GradedExpr) -> GradedExpr {
        self.dsum(&rhs)
    }
}

impl std::iter::Sum for GradedExpr {
    fn sum<I: Iterator<Item = GradedExpr>>(iter: I) -> GradedExpr {
        iter.fold(GradedExpr::zero(), |acc, e| acc.dsum(&e))
    }
}

impl fmt::Display for GradedExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render(self, Format::Text))
    }
}

pub fn dsum(a: &GradedExpr, b: &GradedExpr) -> GradedExpr {
    a.dsum(b)
}

pub fn scale(e: &GradedExpr, c: &Card) -> GradedExpr {
    e.scale(c)
}

pub fn shift(e: &GradedExpr, k: i64) -> GradedExpr {
    e.shift(k)
}

pub fn localize_away_from_2(e: &GradedExpr) -> GradedExpr {
    e.localize_away_from_2()
}

/// Structural equality of canonical forms.
pub fn equal(a: &GradedExpr, b: &GradedExpr) -> bool {
    a == b
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    atom: Atom,
    mult: Card,
}

#[derive(Serialize, Deserialize)]
struct ExprJson {
    terms: Vec<TermJson>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    localized: bool,
}

impl Serialize for GradedExpr {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        ExprJson {
            terms: self
                .terms
                .iter()
                .map(|(a, m)| TermJson {
                    atom: a.clone(),
                    mult: m.clone(),
                })
                .collect(),
            localized: self.localized,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for GradedExpr {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = ExprJson::deserialize(d)?;
        for t in &raw.terms {
            if let Atom::Cyclic { modulus } = &t.atom {
                if *modulus < BigUint::from(2u32) {
                    return Err(serde::de::Error::custom("cyclic modulus must be >= 2"));
                }
            }
        }
        let mut e = GradedExpr::from_terms(raw.terms.into_iter().map(|t| (t.atom, t.mult)));
        e.localized = raw.localized;
        Ok(e)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r() -> RingExpr {
        RingExpr::base("R")
    }

    #[test]
    fn card_arithmetic() {
        assert_eq!(Card::fin(2) + Card::fin(3), Card::fin(5));
        assert_eq!(Card::Omega + Card::fin(3), Card::Omega);
        assert_eq!(Card::fin(2) * Card::fin(3), Card::fin(6));
        assert_eq!(Card::Omega * Card::fin(4), Card::Omega);
        assert_eq!(Card::Omega * Card::zero(), Card::zero());
        assert_eq!(Card::zero() * Card::Omega, Card::zero());
        assert_eq!(Card::Omega * Card::Omega, Card::Omega);
    }

    #[test]
    fn dsum_examples() {
        let z = GradedExpr::free();
        assert_eq!(z.dsum(&GradedExpr::zero()), z);
        let z2 = GradedExpr::cyclic(2);
        assert_eq!(z2.dsum(&z2), GradedExpr::term(Atom::cyclic(2), Card::fin(2)));
        let nk = Atom::nk(&r(), 0);
        let a = GradedExpr::term(nk.clone(), Card::Omega);
        let b = GradedExpr::term(nk.clone(), Card::fin(3));
        assert_eq!(a.dsum(&b), GradedExpr::term(nk, Card::Omega));
    }

    #[test]
    fn scale_examples() {
        let nk1 = Atom::nk(&r(), 1);
        let e = GradedExpr::term(nk1.clone(), Card::fin(2));
        assert_eq!(e.scale(&Card::Omega), GradedExpr::term(nk1, Card::Omega));
        assert!(e.scale(&Card::zero()).is_zero());
        let mixed = GradedExpr::free().dsum(&GradedExpr::cyclic(2));
        assert_eq!(
            mixed.scale_by(3),
            GradedExpr::from_terms([(Atom::Free, Card::fin(3)), (Atom::cyclic(2), Card::fin(3))])
        );
    }

    #[test]
    fn shift_examples() {
        assert_eq!(
            GradedExpr::atom(Atom::k(&r(), 0)).shift(1),
            GradedExpr::atom(Atom::k(&r(), -1))
        );
        assert!(GradedExpr::zero().shift(5).is_zero());
        let l2 = GradedExpr::atom(Atom::l(&r(), 2, Decoration::MinusInfinity));
        assert_eq!(l2.shift(2), GradedExpr::atom(Atom::l(&r(), 0, Decoration::MinusInfinity)));
        assert_eq!(GradedExpr::free().shift(3), GradedExpr::free());
    }

    #[test]
    fn localization() {
        let unil = GradedExpr::atom(Atom::unil(&RingExpr::base("Z"), 3));
        let out = unil.localize_away_from_2();
        assert!(out.is_zero() && out.is_localized());
        assert_eq!(GradedExpr::free().localize_away_from_2().to_string(), "Z[1/2]");
        let z3 = GradedExpr::cyclic(3).localize_away_from_2();
        assert_eq!(z3.to_string(), "(Z/3)[1/2]");
        assert!(z3.any_atom(|a| *a == Atom::cyclic(3)));
        let z12 = GradedExpr::cyclic(12).localize_away_from_2();
        assert_eq!(z12.atoms().next(), Some(&Atom::cyclic(3)));
        assert!(GradedExpr::cyclic(8).localize_away_from_2().is_zero());
    }

    #[test]
    fn equality_is_order_independent() {
        let a = GradedExpr::free().dsum(&GradedExpr::cyclic(2));
        let b = GradedExpr::cyclic(2).dsum(&GradedExpr::free());
        assert!(equal(&a, &b));
        let nk = Atom::nk(&r(), 0);
        assert!(!equal(
            &GradedExpr::term(nk.clone(), Card::Omega),
            &GradedExpr::term(nk, Card::fin(5))
        ));
        assert!(equal(&GradedExpr::zero(), &GradedExpr::zero()));
    }

    #[test]
    fn decorations_parse_and_order() {
        for s in ["s", "h", "p", "<-1>", "<-7>", "<-oo>"] {
            let d: Decoration = s.parse().unwrap();
            assert_eq!(d.to_string(), s);
        }
        assert_eq!("<1>".parse::<Decoration>().unwrap(), Decoration::H);
        assert_eq!("<0>".parse::<Decoration>().unwrap(), Decoration::P);
        assert!("<2>".parse::<Decoration>().is_err());
        assert!(Decoration::S < Decoration::H);
        assert!(Decoration::Lower(-1) < Decoration::Lower(-2));
        assert!(Decoration::Lower(-100) < Decoration::MinusInfinity);
    }

    #[test]
    fn ring_expr_forms() {
        let r3: RingExpr = "R[Z/3]".parse().unwrap();
        assert_eq!(r3, RingExpr::group_ring("R", GroupTag::Cyclic(3)));
        assert_eq!("R[1]".parse::<RingExpr>().unwrap(), RingExpr::base("R"));
        assert_eq!(r3.to_string(), "R[Z/3]");
        assert!("R[".parse::<RingExpr>().is_err());
    }
}
