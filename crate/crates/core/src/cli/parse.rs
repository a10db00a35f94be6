use std::fs;
use std::ops::RangeInclusive;

use serde_json::Value;

use crate::formal::{Card, GroupTag, RingSpec};
use crate::groupcat::GroupDesc;

fn read_source(s: &str) -> Result<String, String> {
    match s.strip_prefix('@') {
        Some(path) => fs::read_to_string(path).map_err(|e| format!("cannot read {path}: {e}")),
        None => Ok(s.to_string()),
    }
}

fn int(what: &str, s: &str) -> Result<i64, String> {
    s.trim()
        .parse()
        .map_err(|_| format!("{what}: expected an integer, got {s:?}"))
}

fn card(s: &str) -> Result<Card, String> {
    s.trim()
        .parse()
        .map_err(|_| format!("expected a cardinal (a number or omega), got {s:?}"))
}

fn micy_option(s: &str) -> Result<Card, String> {
    card(s.strip_prefix("micy=").unwrap_or(s))
}

/// Parses a group descriptor: inline JSON, `@file`, or one of the shorthands
/// `zd:D`, `free:R`, `surface:G`, `tfhyp:B0,B1,..[:micy=N|omega]`,
/// `hyp:micy=N|omega`, `prod:D:G`, `crystZp:{json}`.
pub fn parse_group(s: &str) -> Result<GroupDesc, String> {
    let text = read_source(s.trim())?;
    let text = text.trim();
    if text.starts_with('{') {
        return group_from_json(text, None);
    }
    let (kind, rest) = text
        .split_once(':')
        .ok_or_else(|| format!("unrecognized group {text:?}"))?;
    let g = match kind {
        "zd" => GroupDesc::Zd { d: int("zd rank", rest)? },
        "free" => GroupDesc::Free { r: int("free rank", rest)? },
        "surface" => GroupDesc::Surface { g: int("genus", rest)? },
        "tfhyp" => {
            let (betti, micy) = match rest.split_once(':') {
                Some((b, m)) => (b, micy_option(m)?),
                None => (rest, Card::Omega),
            };
            let betti = betti
                .split(',')
                .map(|b| b.trim().parse::<u64>().map_err(|_| format!("bad betti number {b:?}")))
                .collect::<Result<Vec<_>, _>>()?;
            GroupDesc::TfHyperbolic { betti, micy_card: micy }
        }
        "hyp" => GroupDesc::Hyperbolic {
            micy_card: micy_option(rest)?,
        },
        "prod" => {
            let (d, factor) = rest
                .split_once(':')
                .ok_or_else(|| format!("expected prod:D:G, got {text:?}"))?;
            let factor: GroupTag = factor.parse().map_err(|e| format!("{e}"))?;
            GroupDesc::Product {
                d: int("product rank", d)?,
                factor,
            }
        }
        "crystZp" | "cryst" => group_from_json(&read_source(rest)?, Some("crystZp"))?,
        _ => return Err(format!("unknown group kind {kind:?}")),
    };
    g.validate().map_err(|e| e.to_string())?;
    Ok(g)
}

fn group_from_json(text: &str, kind: Option<&str>) -> Result<GroupDesc, String> {
    let mut v: Value = serde_json::from_str(text).map_err(|e| format!("group JSON: {e}"))?;
    if let (Some(kind), Value::Object(map)) = (kind, &mut v) {
        map.entry("type").or_insert_with(|| Value::String(kind.into()));
    }
    let g: GroupDesc = serde_json::from_value(v).map_err(|e| format!("group JSON: {e}"))?;
    g.validate().map_err(|e| e.to_string())?;
    Ok(g)
}

/// A preset name, inline JSON, or a path to a ring file (optionally prefixed
/// with `@`).
pub fn parse_ring(s: &str) -> Result<RingSpec, String> {
    if let Some(r) = RingSpec::preset(s) {
        return Ok(r);
    }
    let text = if s.trim_start().starts_with('{') {
        s.to_string()
    } else {
        let path = s.strip_prefix('@').unwrap_or(s);
        fs::read_to_string(path).map_err(|e| {
            format!(
                "ring {s:?} is neither a preset ({}) nor a readable file: {e}",
                RingSpec::preset_names().join(", ")
            )
        })?
    };
    RingSpec::from_json(&text).map_err(|e| format!("ring file: {e}"))
}

/// `N` or `A..B` (inclusive).
pub fn parse_range(s: &str) -> Result<RangeInclusive<i64>, String> {
    match s.split_once("..") {
        Some((a, b)) => {
            let b = b.strip_prefix('=').unwrap_or(b);
            Ok(int("range start", a)?..=int("range end", b)?)
        }
        None => {
            let n = int("degree", s)?;
            Ok(n..=n)
        }
    }
}

/// A family `KIND:A..B` of groups indexed by one integer, for `zd`, `free`
/// and `surface`. A reversed range is an empty family.
pub fn parse_family(s: &str) -> Result<Vec<(String, GroupDesc)>, String> {
    let (kind, range) = s
        .split_once(':')
        .ok_or_else(|| format!("expected KIND:A..B, got {s:?}"))?;
    let range = parse_range(range)?;
    let make = |k: i64| -> Result<GroupDesc, String> {
        let g = match kind {
            "zd" => GroupDesc::Zd { d: k },
            "free" => GroupDesc::Free { r: k },
            "surface" => GroupDesc::Surface { g: k },
            _ => return Err(format!("family kind must be zd, free or surface, got {kind:?}")),
        };
        g.validate().map_err(|e| e.to_string())?;
        Ok(g)
    };
    make(*range.start()).or_else(|e| if range.is_empty() { Ok(GroupDesc::Zd { d: 0 }) } else { Err(e) })?;
    range.map(|k| Ok((format!("{kind}:{k}"), make(k)?))).collect()
}
