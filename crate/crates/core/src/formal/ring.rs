use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::render::{parse_concrete, render, Format};
use super::{Decoration, FormalError, GradedExpr};

/// Facts known about a coefficient ring.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Axiom {
    /// The ring is the integers.
    IsZ,
    Regular,
    ContainsQ,
    DedekindCharZero,
}

impl Axiom {
    pub fn name(self) -> &'static str {
        match self {
            Axiom::IsZ => "IsZ",
            Axiom::Regular => "Regular",
            Axiom::ContainsQ => "ContainsQ",
            Axiom::DedekindCharZero => "DedekindCharZero",
        }
    }
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Kinds of atoms a value table may assign.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum TableKind {
    K,
    NK,
    L,
}

impl FromStr for TableKind {
    type Err = FormalError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "K" => Ok(TableKind::K),
            "NK" => Ok(TableKind::NK),
            "L" => Ok(TableKind::L),
            _ => Err(FormalError::parse("table kind", s)),
        }
    }
}

/// User-supplied values of K-, NK- and L-groups of the base ring, each a
/// concrete expression. L entries may be keyed by degree alone (any
/// decoration) or by `degree:decoration`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValueTable {
    vanishing: BTreeSet<TableKind>,
    entries: BTreeMap<(TableKind, i64, Option<Decoration>), GradedExpr>,
}

impl ValueTable {
    pub fn is_empty(&self) -> bool {
        self.vanishing.is_empty() && self.entries.is_empty()
    }

    /// Marks every degree of `kind` as zero.
    pub fn set_vanishing(&mut self, kind: TableKind) {
        self.vanishing.insert(kind);
    }

    pub fn insert(
        &mut self,
        kind: TableKind,
        degree: i64,
        decoration: Option<Decoration>,
        value: GradedExpr,
    ) -> Result<(), FormalError> {
        if !value.is_concrete() {
            return Err(FormalError::InvalidRing(format!(
                "value for {kind:?} in degree {degree} is not concrete"
            )));
        }
        if decoration.is_some() && kind != TableKind::L {
            return Err(FormalError::InvalidRing(format!("{kind:?} values take no decoration")));
        }
        self.entries.insert((kind, degree, decoration), value);
        Ok(())
    }

    pub fn lookup(&self, kind: TableKind, degree: i64, decoration: Option<Decoration>) -> Option<GradedExpr> {
        if self.vanishing.contains(&kind) {
            return Some(GradedExpr::zero());
        }
        if decoration.is_some() {
            if let Some(v) = self.entries.get(&(kind, degree, decoration)) {
                return Some(v.clone());
            }
        }
        self.entries.get(&(kind, degree, None)).cloned()
    }
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum TableEntryJson {
    Word(String),
    Degrees(BTreeMap<String, String>),
}

impl Serialize for ValueTable {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut out: BTreeMap<String, TableEntryJson> = BTreeMap::new();
        for kind in &self.vanishing {
            out.insert(format!("{kind:?}"), TableEntryJson::Word("zero".into()));
        }
        for ((kind, degree, deco), value) in &self.entries {
            if self.vanishing.contains(kind) {
                continue;
            }
            let key = match deco {
                None => degree.to_string(),
                Some(d) => format!("{degree}:{d}"),
            };
            let slot = out
                .entry(format!("{kind:?}"))
                .or_insert_with(|| TableEntryJson::Degrees(BTreeMap::new()));
            if let TableEntryJson::Degrees(m) = slot {
                m.insert(key, render(value, Format::Text));
            }
        }
        out.serialize(s)
    }
}

impl<'de> Deserialize<'de> for ValueTable {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let raw: BTreeMap<String, TableEntryJson> = BTreeMap::deserialize(d)?;
        let mut table = ValueTable::default();
        for (kind, entry) in raw {
            let kind: TableKind = kind.parse().map_err(D::Error::custom)?;
            match entry {
                TableEntryJson::Word(w) if w == "zero" => table.set_vanishing(kind),
                TableEntryJson::Word(w) => {
                    return Err(D::Error::custom(format!("expected \"zero\" or a degree map, got {w:?}")))
                }
                TableEntryJson::Degrees(m) => {
                    for (key, value) in m {
                        let (deg, deco) = match key.split_once(':') {
                            Some((a, b)) => (a, Some(b.parse::<Decoration>().map_err(D::Error::custom)?)),
                            None => (key.as_str(), None),
                        };
                        let degree: i64 = deg
                            .trim()
                            .parse()
                            .map_err(|_| D::Error::custom(format!("bad degree {key:?}")))?;
                        let value = parse_concrete(&value).map_err(D::Error::custom)?;
                        table.insert(kind, degree, deco, value).map_err(D::Error::custom)?;
                    }
                }
            }
        }
        Ok(table)
    }
}

/// Description of a coefficient ring: a name, the axioms it satisfies, and
/// optional known values.
///
/// Axioms are closed under implication on construction: `IsZ` implies
/// `Regular` and `DedekindCharZero`, and `DedekindCharZero` implies `Regular`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RingSpecJson", into = "RingSpecJson")]
pub struct RingSpec {
    name: String,
    axioms: BTreeSet<Axiom>,
    values: ValueTable,
}

#[derive(Serialize, Deserialize)]
struct RingSpecJson {
    name: String,
    #[serde(default)]
    axioms: BTreeSet<Axiom>,
    #[serde(default, skip_serializing_if = "ValueTable::is_empty")]
    values: ValueTable,
}

impl TryFrom<RingSpecJson> for RingSpec {
    type Error = FormalError;

    fn try_from(raw: RingSpecJson) -> Result<Self, Self::Error> {
        Ok(RingSpec::new(&raw.name, raw.axioms)?.with_values(raw.values))
    }
}

impl From<RingSpec> for RingSpecJson {
    fn from(r: RingSpec) -> Self {
        RingSpecJson {
            name: r.name,
            axioms: r.axioms,
            values: r.values,
        }
    }
}

impl RingSpec {
    pub fn new(name: &str, axioms: impl IntoIterator<Item = Axiom>) -> Result<Self, FormalError> {
        let name = name.trim();
        if name.is_empty() || name.contains(['[', ']', '(', ')', ' ', ';', ',']) {
            return Err(FormalError::InvalidRing(format!("bad ring name {name:?}")));
        }
        let mut axioms: BTreeSet<Axiom> = axioms.into_iter().collect();
        if axioms.contains(&Axiom::IsZ) {
            axioms.insert(Axiom::DedekindCharZero);
        }
        if axioms.contains(&Axiom::DedekindCharZero) {
            axioms.insert(Axiom::Regular);
        }
        Ok(RingSpec {
            name: name.to_string(),
            axioms,
            values: ValueTable::default(),
        })
    }

    pub fn with_values(mut self, values: ValueTable) -> Self {
        self.values = values;
        self
    }

    /// Shipped presets: `Z`, `regular`, `regularQ`, `dedekind0`, `generic`.
    pub fn preset(name: &str) -> Option<RingSpec> {
        let (ring, axioms): (&str, &[Axiom]) = match name {
            "Z" => ("Z", &[Axiom::IsZ]),
            "regular" => ("R", &[Axiom::Regular]),
            "regularQ" => ("R", &[Axiom::Regular, Axiom::ContainsQ]),
            "dedekind0" => ("R", &[Axiom::DedekindCharZero]),
            "generic" => ("R", &[]),
            _ => return None,
        };
        RingSpec::new(ring, axioms.iter().copied()).ok()
    }

    pub fn preset_names() -> &'static [&'static str] {
        &["Z", "regular", "regularQ", "dedekind0", "generic"]
    }

    pub fn integers() -> RingSpec {
        Self::preset("Z").expect("preset")
    }

    pub fn generic() -> RingSpec {
        Self::preset("generic").expect("preset")
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn axioms(&self) -> &BTreeSet<Axiom> {
        &self.axioms
    }

    pub fn has(&self, axiom: Axiom) -> bool {
        self.axioms.contains(&axiom)
    }

    pub fn values(&self) -> &ValueTable {
        &self.values
    }

    pub fn from_json(s: &str) -> Result<RingSpec, FormalError> {
        serde_json::from_str(s).map_err(|e| FormalError::Json(e.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formal::Atom;

    #[test]
    fn axiom_closure() {
        let z = RingSpec::integers();
        assert!(z.has(Axiom::Regular) && z.has(Axiom::DedekindCharZero));
        assert!(!z.has(Axiom::ContainsQ));
        let d = RingSpec::preset("dedekind0").unwrap();
        assert!(d.has(Axiom::Regular));
        assert!(RingSpec::generic().axioms().is_empty());
        assert!(RingSpec::preset("nope").is_none());
    }

    #[test]
    fn ring_file_roundtrip() {
        let text = r#"{"name": "Z", "axioms": ["IsZ"],
            "values": {"K": {"0": "Z", "1": "Z/2"}, "NK": "zero", "L": {"0": "Z", "2:s": "Z/2"}}}"#;
        let spec = RingSpec::from_json(text).unwrap();
        assert!(spec.has(Axiom::Regular));
        let v = spec.values();
        assert_eq!(v.lookup(TableKind::K, 1, None), Some(GradedExpr::cyclic(2)));
        assert_eq!(v.lookup(TableKind::NK, 7, None), Some(GradedExpr::zero()));
        assert_eq!(v.lookup(TableKind::L, 2, Some(Decoration::S)), Some(GradedExpr::cyclic(2)));
        assert_eq!(v.lookup(TableKind::L, 2, Some(Decoration::H)), None);
        assert_eq!(v.lookup(TableKind::L, 0, Some(Decoration::H)), Some(GradedExpr::free()));

        let back = serde_json::to_string(&spec).unwrap();
        assert_eq!(RingSpec::from_json(&back).unwrap(), spec);
    }

    #[test]
    fn ring_file_rejects_symbolic_values() {
        let text = r#"{"name": "R", "values": {"K": {"0": "K_0(R)"}}}"#;
        assert!(RingSpec::from_json(text).is_err());
        let text = r#"{"name": "R", "values": {"K": "sometimes"}}"#;
        assert!(RingSpec::from_json(text).is_err());
        assert!(RingSpec::new("R[x]", []).is_err());
        let mut t = ValueTable::default();
        let sym = GradedExpr::atom(Atom::k(&crate::formal::RingExpr::base("R"), 0));
        assert!(t.insert(TableKind::K, 0, None, sym).is_err());
    }
}
