//! Helpers shared by the integration suites: small named posets, a seeded
//! ideal sampler, and an assembler that builds a poset from per-element
//! fibers over a target together with its labelling map.
#![allow(dead_code)]

use std::sync::Arc;

use poset_games::compression::{CompressionMap, VerifyOutcome};
use poset_games::{antichain, chain, Poset, Position, Solver};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

pub fn vee() -> Poset {
    Poset::from_covers("vee", &["a0", "a1", "t"], &[("a0", "t"), ("a1", "t")]).unwrap()
}

pub fn wedge() -> Poset {
    Poset::from_covers("wedge", &["b", "t0", "t1"], &[("b", "t0"), ("b", "t1")]).unwrap()
}

pub fn double_wedge() -> Poset {
    Poset::from_covers(
        "double_wedge",
        &["u0", "u1", "v0", "v1", "v2"],
        &[("u0", "v0"), ("u0", "v1"), ("u1", "v1"), ("u1", "v2")],
    )
    .unwrap()
}

pub fn diamond() -> Poset {
    Poset::from_covers(
        "diamond",
        &["b", "l", "r", "t"],
        &[("b", "l"), ("b", "r"), ("l", "t"), ("r", "t")],
    )
    .unwrap()
}

pub fn zigzag() -> Poset {
    Poset::from_covers(
        "zigzag",
        &["u0", "u1", "v0", "v1"],
        &[("u0", "v0"), ("u1", "v0"), ("u1", "v1")],
    )
    .unwrap()
}

pub fn crossed() -> Poset {
    Poset::from_covers(
        "crossed",
        &["u0", "u1", "v0", "v1"],
        &[("u0", "v0"), ("u0", "v1"), ("u1", "v0"), ("u1", "v1")],
    )
    .unwrap()
}

/// A position whose live set is a uniformly chosen reachable ideal.
pub fn random_ideal<R: Rng>(root: &Arc<Poset>, rng: &mut R) -> Position {
    let mut pos = Position::full(root.clone());
    let steps = rng.gen_range(0..=root.len());
    for _ in 0..steps {
        let options = pos.one_move_options();
        if options.is_empty() {
            break;
        }
        pos = options[rng.gen_range(0..options.len())].clone();
    }
    pos
}

/// Assembles the poset whose fiber over each target element `q` is
/// `fibers[q]`, with every element of a lower fiber placed below every
/// element of a higher one, and returns it with the labelling map.
pub fn assemble(target: &Arc<Poset>, fibers: &[Poset], name: &str) -> (Arc<Poset>, CompressionMap) {
    assert_eq!(fibers.len(), target.len());
    let mut element_names: Vec<String> = Vec::new();
    let mut labels = Vec::new();
    let mut per_fiber: Vec<Vec<String>> = Vec::new();
    for (q, fiber) in fibers.iter().enumerate() {
        let mut mine = Vec::new();
        for i in 0..fiber.len() {
            let n = format!("q{}x{}", q, i);
            element_names.push(n.clone());
            mine.push(n);
            labels.push(q);
        }
        per_fiber.push(mine);
    }
    let mut covers: Vec<(String, String)> = Vec::new();
    for (q, fiber) in fibers.iter().enumerate() {
        for (a, b) in fiber.cover_pairs() {
            covers.push((per_fiber[q][a].clone(), per_fiber[q][b].clone()));
        }
    }
    for lo in 0..target.len() {
        for hi in 0..target.len() {
            if target.lt(lo, hi) {
                for a in &per_fiber[lo] {
                    for b in &per_fiber[hi] {
                        covers.push((a.clone(), b.clone()));
                    }
                }
            }
        }
    }
    let source = Poset::from_covers(name, &element_names, &covers)
        .unwrap()
        .arc();
    let map = CompressionMap::from_indices(source.clone(), target.clone(), labels).unwrap();
    (source, map)
}

pub fn verified(map: CompressionMap) -> CompressionMap {
    match map.verify() {
        VerifyOutcome::Verified(m) => m,
        VerifyOutcome::Rejected(r) => panic!("map should verify, got violation {:?}", r),
    }
}

/// Groups of posets sharing an option value set, validated before use.
pub fn option_set_classes() -> Vec<Vec<Poset>> {
    let classes = vec![
        vec![chain(1).unwrap(), antichain(3).unwrap()],
        vec![antichain(2).unwrap(), antichain(4).unwrap()],
        vec![chain(2).unwrap(), vee()],
        vec![wedge(), double_wedge()],
        vec![chain(3).unwrap(), diamond()],
    ];
    let mut solver = Solver::new();
    for class in &classes {
        let sets: Vec<_> = class
            .iter()
            .map(|p| solver.option_value_set(&Position::full(p.clone().arc())))
            .collect();
        assert!(
            sets.windows(2).all(|w| w[0] == w[1]),
            "pool class is not uniform"
        );
    }
    classes
}
