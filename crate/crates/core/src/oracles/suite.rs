use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use super::{
    bhs_iterate, count_maximal_cyclic_classes, count_primitive_lines, h1_coset_enum, l_periodic_table,
    primitive_orbit_probe, random_order_p_matrix, OracleReport, DEFAULT_BOUND,
};
use crate::assembly::k_zd;
use crate::formal::{Atom, Card, Decoration, GradedExpr, RingExpr, RingSpec, Simplifier};
use crate::groupcat::{analyze_action, cyclotomic_companion, micy_card_free_group, micy_card_of, minus_identity};
use crate::intlattice::{h1_cyclic, FiniteAbelian, IntMatrix};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SuiteConfig {
    pub seed: u64,
    /// Run a small subset of each family.
    pub quick: bool,
    /// Corrupt one engine value, to check that disagreements are reported.
    pub inject_fault: bool,
    /// Cap on coset enumeration.
    pub bound: u64,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            seed: 0,
            quick: false,
            inject_fault: false,
            bound: DEFAULT_BOUND,
        }
    }
}

fn to_json<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("serializable")
}

fn group_json(g: &Result<FiniteAbelian, String>) -> Value {
    match g {
        Ok(g) => json!(g.to_string()),
        Err(e) => json!({ "error": e }),
    }
}

fn h1_reports(cfg: &SuiteConfig, out: &mut Vec<OracleReport>) {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let count = if cfg.quick { 24 } else { 200 };
    for k in 0..count {
        let p = [2u64, 3, 5][k % 3];
        let max_dim = rng.gen_range(1..=6).max((p - 1) as usize);
        let (rho, _) = random_order_p_matrix(&mut rng, p, max_dim);
        let input = json!({ "rho": to_json(&rho), "p": p });
        let main = h1_cyclic(&rho, p).map_err(|e| e.to_string());
        let oracle = h1_coset_enum(&rho, p, cfg.bound).map_err(|e| e.to_string());
        out.push(OracleReport::compare(format!("h1/{k}"), &input, group_json(&main), group_json(&oracle)));
        if let Ok(g) = &main {
            let divisors: Vec<String> = g.invariant_factors().iter().map(ToString::to_string).collect();
            let expected: Vec<String> = divisors.iter().map(|_| p.to_string()).collect();
            out.push(OracleReport::compare(format!("h1-exponent/{k}"), &input, json!(divisors), json!(expected)));
        }
    }
}

fn bhs_reports(cfg: &SuiteConfig, out: &mut Vec<OracleReport>) {
    let ring = RingSpec::preset("regular").expect("preset");
    let simplifier = Simplifier::new(&ring);
    let base = RingExpr::base(ring.name());
    let max_d = if cfg.quick { 4 } else { 8 };
    for d in 0..=max_d {
        for n in -5..=5 {
            let input = json!({ "d": d, "n": n, "ring": ring.name() });
            let main = simplifier.simplify(&k_zd(d, &base, n));
            let oracle = bhs_iterate(d, &ring, n).expect("regular ring");
            out.push(OracleReport::compare(format!("bhs/d={d}/n={n}"), &input, to_json(&main), to_json(&oracle)));
        }
    }
}

fn decorations() -> Vec<Decoration> {
    vec![
        Decoration::S,
        Decoration::H,
        Decoration::P,
        Decoration::Lower(-1),
        Decoration::Lower(-2),
        Decoration::MinusInfinity,
    ]
}

fn l_table_reports(cfg: &SuiteConfig, out: &mut Vec<OracleReport>) {
    let z = RingSpec::integers();
    let simplifier = Simplifier::new(&z);
    let base = RingExpr::base("Z");
    for deco in decorations() {
        for n in -8..=8 {
            let input = json!({ "n": n, "decoration": deco.to_string() });
            let mut main = simplifier.simplify(&GradedExpr::atom(Atom::l(&base, n, deco)));
            if cfg.inject_fault && n == 2 && deco == Decoration::S {
                main = main.dsum(&GradedExpr::free());
            }
            let oracle = l_periodic_table(n, deco);
            out.push(OracleReport::compare(format!("l-table/{deco}/n={n}"), &input, to_json(&main), to_json(&oracle)));
        }
    }
}

fn orbit_reports(cfg: &SuiteConfig, out: &mut Vec<OracleReport>) {
    let bound = if cfg.quick { 3 } else { 5 };
    let cases: Vec<(IntMatrix, u64)> = vec![
        (minus_identity(1), 2),
        (minus_identity(2), 2),
        (minus_identity(3), 2),
        (cyclotomic_companion(3), 3),
        (cyclotomic_companion(5), 5),
    ];
    for (rho, p) in cases {
        let input = json!({ "rho": to_json(&rho), "p": p, "bound": bound });
        let a = analyze_action(&rho, p).expect("valid action");
        let probe = primitive_orbit_probe(&rho, p, bound).expect("free action");
        let stabilizer = |empty_i1: bool| if empty_i1 { "Z/2" } else { "1" };
        let main = json!({
            "stabilizers": stabilizer(a.i1_card.as_ref().is_some_and(Card::is_zero)),
        });
        let observed = if probe.other_stabilizers > 0 || (probe.trivial_stabilizers > 0 && probe.order_two_stabilizers > 0)
        {
            "mixed"
        } else if probe.order_two_stabilizers > 0 {
            "Z/2"
        } else {
            "1"
        };
        let oracle = json!({ "stabilizers": observed });
        out.push(OracleReport::compare(format!("orbits/d={}/p={p}", rho.rows()), &input, main, oracle));
    }
}

fn jc_reports(out: &mut Vec<OracleReport>) {
    for d in 1..=10usize {
        let input = json!({ "d": d });
        let a = analyze_action(&minus_identity(d), 2).expect("valid action");
        let main = to_json(&a.jc_size);
        let h1 = h1_cyclic(&minus_identity(d - 1), 2).expect("order two");
        let oracle = to_json(&Some(Card::Fin(h1.order().to_biguint().expect("positive"))));
        out.push(OracleReport::compare(format!("jc-size/d={d}"), &input, main, oracle));
    }
}

/// `Omega` when the enumerated counts keep growing, otherwise the last count.
fn growth(counts: &[usize]) -> Card {
    if counts.windows(2).all(|w| w[1] > w[0]) {
        Card::Omega
    } else {
        Card::fin(*counts.last().expect("nonempty") as u64)
    }
}

fn micy_reports(cfg: &SuiteConfig, out: &mut Vec<OracleReport>) {
    let depth = if cfg.quick { 4 } else { 6 };
    for d in 0..=3usize {
        let counts: Vec<usize> = (1..=depth).map(|b| count_primitive_lines(d, b as u64)).collect();
        let input = json!({ "zd": d });
        out.push(OracleReport::compare(
            format!("micy/zd={d}"),
            &input,
            to_json(&micy_card_of(d as u64)),
            to_json(&growth(&counts)),
        ));
    }
    for r in 1..=3u8 {
        let counts: Vec<usize> = (1..=depth).map(|l| count_maximal_cyclic_classes(r, l)).collect();
        let input = json!({ "free": r });
        out.push(OracleReport::compare(
            format!("micy/free={r}"),
            &input,
            to_json(&micy_card_free_group(r as u64)),
            to_json(&growth(&counts)),
        ));
    }
}

/// Runs every oracle family and returns one report per checked input.
pub fn run_suite(cfg: &SuiteConfig) -> Vec<OracleReport> {
    let mut out = Vec::new();
    h1_reports(cfg, &mut out);
    bhs_reports(cfg, &mut out);
    l_table_reports(cfg, &mut out);
    orbit_reports(cfg, &mut out);
    jc_reports(&mut out);
    micy_reports(cfg, &mut out);
    out
}
