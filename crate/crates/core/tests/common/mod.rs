#![allow(dead_code)]

use std::process::{Command, Output};

use kla::formal::{Atom, Card, Decoration, GradedExpr, GroupTag, RingExpr};
use kla::groupcat::GroupDesc;
use num_bigint::BigUint;
use rand::Rng;

pub fn kla(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kla"))
        .args(args)
        .env_remove("KLA_ORACLE_BOUND")
        .output()
        .expect("binary runs")
}

pub fn random_group_tag(rng: &mut impl Rng) -> GroupTag {
    match rng.gen_range(0..3) {
        0 => GroupTag::Trivial,
        1 => GroupTag::Cyclic(rng.gen_range(2..12)),
        _ => GroupTag::Named(["G", "D_oo", "Q8"][rng.gen_range(0..3)].to_string()),
    }
}

pub fn random_ring(rng: &mut impl Rng) -> RingExpr {
    let base = ["R", "Z", "S"][rng.gen_range(0..3)];
    if rng.gen_bool(0.5) {
        RingExpr::base(base)
    } else {
        RingExpr::group_ring(base, random_group_tag(rng))
    }
}

pub fn random_decoration(rng: &mut impl Rng) -> Decoration {
    match rng.gen_range(0..5) {
        0 => Decoration::S,
        1 => Decoration::H,
        2 => Decoration::P,
        3 => Decoration::Lower(-rng.gen_range(1..6)),
        _ => Decoration::MinusInfinity,
    }
}

pub fn random_atom(rng: &mut impl Rng) -> Atom {
    let n = rng.gen_range(-6..7);
    let ring = random_ring(rng);
    match rng.gen_range(0..10) {
        0 => Atom::Free,
        1 => Atom::Cyclic {
            modulus: BigUint::from(rng.gen_range(2u64..40)),
        },
        2 => Atom::Named {
            label: ["Z[1/3]", "Z[1/5]", "Q"][rng.gen_range(0..3)].to_string(),
        },
        3 => Atom::k(&ring, n),
        4 => Atom::nk(&ring, n),
        5 => Atom::l(&ring, n, random_decoration(rng)),
        6 => Atom::wh(random_group_tag(rng), &ring, n),
        7 => Atom::sper(random_group_tag(rng), &ring, n, random_decoration(rng)),
        8 => Atom::unil(&ring, n),
        _ => Atom::opaque(["H^G[EG;K]", "H^V[EV->pt;L]"][rng.gen_range(0..2)], &ring, n),
    }
}

pub fn random_card(rng: &mut impl Rng) -> Card {
    match rng.gen_range(0..8) {
        0 => Card::Omega,
        1 => Card::Fin(BigUint::from(rng.gen::<u64>()) * BigUint::from(rng.gen::<u64>())),
        _ => Card::fin(rng.gen_range(1..6)),
    }
}

pub fn random_expr(rng: &mut impl Rng) -> GradedExpr {
    let len = rng.gen_range(0..7);
    GradedExpr::from_terms((0..len).map(|_| (random_atom(rng), random_card(rng))).collect::<Vec<_>>())
}

/// Torsion-free groups covered by the catalog.
pub fn torsion_free_catalog() -> Vec<GroupDesc> {
    let mut out = Vec::new();
    out.extend((0..=5).map(|d| GroupDesc::Zd { d }));
    out.extend((1..=4).map(|r| GroupDesc::Free { r }));
    out.extend((0..=4).map(|g| GroupDesc::Surface { g }));
    out.push(GroupDesc::TfHyperbolic {
        betti: vec![1, 4, 1],
        micy_card: Card::Omega,
    });
    out.push(GroupDesc::TfHyperbolic {
        betti: vec![1, 3, 3, 1],
        micy_card: Card::fin(7),
    });
    out
}
