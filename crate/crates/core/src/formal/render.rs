use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use super::{Atom, Card, Decoration, FormalError, GradedExpr, GroupTag};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Text,
    Latex,
    Json,
}

/// Deterministic serialization. `Text` and `Latex` are for reading; `Json`
/// round-trips through [`parse_json`].
pub fn render(e: &GradedExpr, format: Format) -> String {
    match format {
        Format::Text => render_text(e),
        Format::Latex => render_latex(e),
        Format::Json => serde_json::to_string(e).expect("expression serializes"),
    }
}

pub fn parse_json(s: &str) -> Result<GradedExpr, FormalError> {
    serde_json::from_str(s).map_err(|err| FormalError::Json(err.to_string()))
}

fn atom_text(a: &Atom) -> String {
    match a {
        Atom::Free => "Z".into(),
        Atom::Cyclic { modulus } => format!("Z/{modulus}"),
        Atom::Named { label } => label.clone(),
        Atom::K { ring, degree } => format!("K_{degree}({ring})"),
        Atom::NK { ring, degree } => format!("NK_{degree}({ring})"),
        Atom::L {
            ring,
            degree,
            decoration,
        } => format!("L_{degree}^{decoration}({ring})"),
        Atom::Wh { group, ring, degree } => format!("Wh_{degree}({group};{ring})"),
        Atom::Sper {
            group,
            ring,
            degree,
            decoration,
        } => format!("S^per,{decoration}_{degree}({group};{ring})"),
        Atom::UNil { ring, degree } => format!("UNil_{degree}(D_oo;{ring})"),
        Atom::Opaque { label, ring, degree } => format!("{label}_{degree}({ring})"),
    }
}

fn render_text(e: &GradedExpr) -> String {
    if e.is_zero() {
        return "0".into();
    }
    let body = e
        .terms()
        .map(|(a, m)| {
            let base = atom_text(a);
            match m {
                Card::Fin(n) if *n == BigUint::from(1u32) => base,
                Card::Fin(n) => format!("{}^{n}", paren_if_cyclic(a, base)),
                Card::Omega => format!("{}^(oo)", paren_if_cyclic(a, base)),
            }
        })
        .collect::<Vec<_>>()
        .join(" + ");
    if !e.is_localized() {
        body
    } else if body == "Z" {
        "Z[1/2]".into()
    } else {
        format!("({body})[1/2]")
    }
}

fn paren_if_cyclic(a: &Atom, s: String) -> String {
    if matches!(a, Atom::Cyclic { .. }) {
        format!("({s})")
    } else {
        s
    }
}

fn latex_group(g: &GroupTag) -> String {
    match g {
        GroupTag::Trivial => "\\{1\\}".into(),
        GroupTag::Cyclic(n) => format!("\\mathbb{{Z}}/{n}"),
        GroupTag::Named(s) => s.clone(),
    }
}

fn latex_ring(r: &super::RingExpr) -> String {
    let base = if r.base_name() == "Z" {
        "\\mathbb{Z}".to_string()
    } else {
        r.base_name().to_string()
    };
    match r.group() {
        None => base,
        Some(g) => format!("{base}[{}]", latex_group(g)),
    }
}

fn latex_decoration(d: Decoration) -> String {
    match d {
        Decoration::S => "s".into(),
        Decoration::H => "h".into(),
        Decoration::P => "p".into(),
        Decoration::Lower(j) => format!("\\langle {j} \\rangle"),
        Decoration::MinusInfinity => "\\langle -\\infty \\rangle".into(),
    }
}

fn atom_latex(a: &Atom) -> String {
    match a {
        Atom::Free => "\\mathbb{Z}".into(),
        Atom::Cyclic { modulus } => format!("\\mathbb{{Z}}/{modulus}"),
        Atom::Named { label } => format!("\\mathrm{{{label}}}"),
        Atom::K { ring, degree } => format!("K_{{{degree}}}({})", latex_ring(ring)),
        Atom::NK { ring, degree } => format!("N\\!K_{{{degree}}}({})", latex_ring(ring)),
        Atom::L {
            ring,
            degree,
            decoration,
        } => format!(
            "L_{{{degree}}}^{{{}}}({})",
            latex_decoration(*decoration),
            latex_ring(ring)
        ),
        Atom::Wh { group, ring, degree } => format!(
            "\\operatorname{{Wh}}_{{{degree}}}({};{})",
            latex_group(group),
            latex_ring(ring)
        ),
        Atom::Sper {
            group,
            ring,
            degree,
            decoration,
        } => format!(
            "\\mathcal{{S}}^{{\\mathrm{{per}},{}}}_{{{degree}}}({};{})",
            latex_decoration(*decoration),
            latex_group(group),
            latex_ring(ring)
        ),
        Atom::UNil { ring, degree } => format!(
            "\\operatorname{{UNil}}_{{{degree}}}(D_\\infty;{})",
            latex_ring(ring)
        ),
        Atom::Opaque { label, ring, degree } => {
            format!("\\mathrm{{{label}}}_{{{degree}}}({})", latex_ring(ring))
        }
    }
}

fn render_latex(e: &GradedExpr) -> String {
    if e.is_zero() {
        return "0".into();
    }
    let body = e
        .terms()
        .map(|(a, m)| {
            let base = atom_latex(a);
            let base = if matches!(a, Atom::Cyclic { .. }) && *m != Card::one() {
                format!("({base})")
            } else {
                base
            };
            match m {
                Card::Fin(n) if *n == BigUint::from(1u32) => base,
                Card::Fin(n) => format!("{base}^{{{n}}}"),
                Card::Omega => format!("{base}^{{(\\omega)}}"),
            }
        })
        .collect::<Vec<_>>()
        .join(" \\oplus ");
    if e.is_localized() {
        format!("\\left({body}\\right)[1/2]")
    } else {
        body
    }
}

/// Parses a concrete expression in the text syntax: `0`, or terms such as
/// `Z`, `Z/2`, `(Z/2)^3`, `Z^4`, `Z[1/5]^2` joined by `+`.
pub fn parse_concrete(s: &str) -> Result<GradedExpr, FormalError> {
    let err = || FormalError::parse("concrete expression", s);
    let t = s.trim();
    if t == "0" {
        return Ok(GradedExpr::zero());
    }
    let mut out = GradedExpr::zero();
    for term in t.split('+') {
        let term = term.trim();
        let (base, mult) = match term.rsplit_once('^') {
            Some((b, m)) if !b.ends_with('[') => {
                let m = m.trim();
                let mult = if m == "(oo)" || m == "oo" {
                    Card::Omega
                } else {
                    m.parse::<Card>().map_err(|_| err())?
                };
                (b.trim(), mult)
            }
            _ => (term, Card::one()),
        };
        let base = base
            .strip_prefix('(')
            .and_then(|b| b.strip_suffix(')'))
            .unwrap_or(base)
            .trim();
        let atom = if base == "Z" {
            Atom::Free
        } else if let Some(m) = base.strip_prefix("Z/") {
            let m: BigUint = m.parse().map_err(|_| err())?;
            if m < BigUint::from(2u32) {
                if m == BigUint::from(1u32) {
                    continue;
                }
                return Err(err());
            }
            Atom::Cyclic { modulus: m }
        } else if !base.is_empty() && !base.contains(['_', '(', ')', ' ', ';']) {
            Atom::Named {
                label: base.to_string(),
            }
        } else {
            return Err(err());
        };
        out = out.dsum(&GradedExpr::term(atom, mult));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formal::RingExpr;

    #[test]
    fn text_examples() {
        let e = GradedExpr::free().dsum(&GradedExpr::cyclic(2).scale_by(3));
        assert_eq!(render(&e, Format::Text), "Z + (Z/2)^3");
        assert_eq!(render(&GradedExpr::zero(), Format::Text), "0");
        let nk = GradedExpr::term(Atom::nk(&RingExpr::base("R"), 2), Card::Omega);
        assert_eq!(render(&nk, Format::Text), "NK_2(R)^(oo)");
    }

    #[test]
    fn text_for_each_kind() {
        let r = RingExpr::base("R");
        let rz3 = RingExpr::group_ring("R", GroupTag::Cyclic(3));
        let cases = [
            (Atom::k(&r, -1), "K_-1(R)"),
            (Atom::nk(&rz3, 0), "NK_0(R[Z/3])"),
            (Atom::l(&RingExpr::base("Z"), 6, Decoration::S), "L_6^s(Z)"),
            (Atom::wh(GroupTag::Cyclic(2), &r, 1), "Wh_1(Z/2;R)"),
            (
                Atom::sper(GroupTag::Cyclic(3), &r, 0, Decoration::MinusInfinity),
                "S^per,<-oo>_0(Z/3;R)",
            ),
            (Atom::unil(&r, 3), "UNil_3(D_oo;R)"),
        ];
        for (a, want) in cases {
            assert_eq!(render(&GradedExpr::atom(a), Format::Text), want);
        }
    }

    #[test]
    fn latex_form() {
        let e = GradedExpr::free().dsum(&GradedExpr::cyclic(2).scale_by(3));
        assert_eq!(render(&e, Format::Latex), "\\mathbb{Z} \\oplus (\\mathbb{Z}/2)^{3}");
        let w = GradedExpr::term(Atom::nk(&RingExpr::base("R"), 0), Card::Omega);
        assert_eq!(render(&w, Format::Latex), "N\\!K_{0}(R)^{(\\omega)}");
    }

    #[test]
    fn json_schema_shape() {
        let e = GradedExpr::free().dsum(&GradedExpr::term(Atom::nk(&RingExpr::base("R"), 1), Card::Omega));
        let s = render(&e, Format::Json);
        assert_eq!(
            s,
            r#"{"terms":[{"atom":{"kind":"Z"},"mult":{"fin":1}},{"atom":{"kind":"NK","ring":"R","degree":1},"mult":"omega"}]}"#
        );
        assert_eq!(parse_json(&s).unwrap(), e);
    }

    #[test]
    fn concrete_parser() {
        assert_eq!(parse_concrete("0").unwrap(), GradedExpr::zero());
        assert_eq!(
            parse_concrete("Z + (Z/2)^3").unwrap(),
            GradedExpr::free().dsum(&GradedExpr::cyclic(2).scale_by(3))
        );
        assert_eq!(parse_concrete("Z^(oo)").unwrap(), GradedExpr::term(Atom::Free, Card::Omega));
        assert_eq!(
            parse_concrete("Z[1/5]^2").unwrap(),
            GradedExpr::term(Atom::Named { label: "Z[1/5]".into() }, Card::fin(2))
        );
        assert!(parse_concrete("K_0(R)").is_err());
        assert!(parse_concrete("Z/0").is_err());
    }
}
