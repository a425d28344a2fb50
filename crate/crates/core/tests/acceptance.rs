//! The pinned acceptance gate. Each test is one criterion and prints a
//! single pass or fail line; run with `--nocapture` to see the lines on a
//! fully green suite. Timing ceilings are asserted inside the criteria.

mod common;

use std::collections::BTreeSet;
use std::panic::AssertUnwindSafe;
use std::time::{Duration, Instant};

use common::{assemble, option_set_classes, rng, vee, verified, wedge};
use poset_games::canon::{
    enumerate_aligned_posets, enumerate_posets, is_isomorphic, random_poset, relabel,
};
use poset_games::compression::{
    all_zero_factor_classify, blow_up, check_factor_equivalence, check_option_set_preservation,
    replace_factor, Factorization, VerifyOutcome, ZeroFactorVerdict,
};
use poset_games::conjecture::{conjecture_sweep, BReading, SampleMode, SweepParams};
use poset_games::fixtures::{load_fixture_map, load_fixture_poset};
use poset_games::{
    antichain, chain, chomp, grundy_naive, nim, nim_value, ordinal_sum, Nimber, OptionValueSet,
    Poset, Position, Solver,
};
use rand::Rng;

fn criterion<F>(name: &str, f: F)
where
    F: FnOnce() -> String,
{
    let started = Instant::now();
    match std::panic::catch_unwind(AssertUnwindSafe(f)) {
        Ok(detail) if detail.is_empty() => {
            println!("acceptance pass: {} [{:.1?}]", name, started.elapsed());
        }
        Ok(detail) => {
            println!(
                "acceptance pass: {} ({}) [{:.1?}]",
                name,
                detail,
                started.elapsed()
            );
        }
        Err(cause) => {
            println!("acceptance FAIL: {}", name);
            std::panic::resume_unwind(cause);
        }
    }
}

fn value_of(p: &Poset, solver: &mut Solver) -> u32 {
    solver.grundy(&Position::full(p.clone().arc())).0
}

#[test]
fn small_fixture_values() {
    criterion(
        "fig5_A has value 2 and fig5_B has value 1, each under 1ms",
        || {
            let a = load_fixture_poset("fig5_A").unwrap().arc();
            let b = load_fixture_poset("fig5_B").unwrap().arc();
            let mut solver = Solver::new();
            let t = Instant::now();
            let va = solver.grundy(&Position::full(a));
            assert!(t.elapsed() < Duration::from_millis(1));
            let t = Instant::now();
            let vb = solver.grundy(&Position::full(b));
            assert!(t.elapsed() < Duration::from_millis(1));
            assert_eq!(va, Nimber(2));
            assert_eq!(vb, Nimber(1));
            String::new()
        },
    );
}

#[test]
fn equal_valued_trio() {
    criterion(
        "fig7 trio all value 3, red fibers share option set {0,2}",
        || {
            let maps: Vec<_> = ["fig7_left", "fig7_mid", "fig7_right"]
                .iter()
                .map(|n| verified(load_fixture_map(n).unwrap()))
                .collect();
            let mut solver = Solver::new();
            let mut expected = OptionValueSet::new();
            expected.insert(Nimber(0));
            expected.insert(Nimber(2));
            for m in &maps {
                assert_eq!(
                    solver.grundy(&Position::full(m.source().clone())),
                    Nimber(3)
                );
                let red = m.target().index_of("qr").unwrap();
                let fiber = m.source().induced(m.fiber_mask(red), "red").arc();
                assert_eq!(solver.option_value_set(&Position::full(fiber)), expected);
            }
            // left and middle replace one red fiber with another of equal
            // option set, so the hypothesis holds across every fiber
            assert!(check_option_set_preservation(&maps[0], &maps[1]).unwrap());
            // the right map shrinks the blue fiber to a point of equal value
            // but smaller option set, so the hypothesis correctly fails there
            assert!(!check_option_set_preservation(&maps[1], &maps[2]).unwrap());
            let fz = Factorization::new(maps[1].clone()).unwrap();
            let blue = maps[1].target().index_of("qb").unwrap();
            let (reduced, g) = replace_factor(&fz, blue, &chain(1).unwrap()).unwrap();
            assert!(g.is_verified());
            assert_eq!(solver.grundy(&Position::full(reduced.clone())), Nimber(3));
            assert!(is_isomorphic(&reduced, maps[2].source()));
            String::new()
        },
    );
}

#[test]
fn zero_fiber_shortcut_on_the_large_fixture() {
    criterion(
        "fig6 fibers all zero, verdict P, full value 0, under 10s",
        || {
            let t = Instant::now();
            let map = verified(load_fixture_map("fig6").unwrap());
            let fz = Factorization::new(map.clone()).unwrap();
            let mut solver = Solver::new();
            for q in 0..map.target().len() {
                assert_eq!(value_of(&fz.factor(q).unwrap(), &mut solver), 0);
            }
            assert_eq!(
                all_zero_factor_classify(&fz).unwrap(),
                ZeroFactorVerdict::PreviousPlayerWins
            );
            assert_eq!(
                solver.grundy(&Position::full(map.source().clone())),
                Nimber(0)
            );
            assert!(t.elapsed() < Duration::from_secs(10));
            String::new()
        },
    );
}

#[test]
fn verification_verdicts_on_the_map_fixtures() {
    criterion(
        "fig3 map verifies, fig4 map rejected with replayable witness",
        || {
            match load_fixture_map("fig3_map").unwrap().verify() {
                VerifyOutcome::Verified(_) => {}
                VerifyOutcome::Rejected(r) => panic!("expected a verifying map, got {:?}", r),
            }
            let bad = load_fixture_map("fig4_map").unwrap();
            match bad.clone().verify() {
                VerifyOutcome::Verified(_) => panic!("expected a rejection"),
                VerifyOutcome::Rejected(r) => {
                    assert_eq!(bad.check_triple(r.x, r.y, r.z), Some(r.condition));
                    assert_eq!(bad.source().element_name(r.x), r.x_name);
                    assert_eq!(bad.source().element_name(r.y), r.y_name);
                    assert_eq!(bad.source().element_name(r.z), r.z_name);
                }
            }
            String::new()
        },
    );
}

#[test]
fn nim_follows_the_xor_rule() {
    criterion(
        "nim piles up to 3x7 all match the xor fold, under 30s",
        || {
            let t = Instant::now();
            let mut solver = Solver::new();
            let mut vectors: Vec<Vec<usize>> = vec![vec![]];
            for len in 1..=3usize {
                let mut stack = vec![Vec::with_capacity(len)];
                while let Some(v) = stack.pop() {
                    if v.len() == len {
                        vectors.push(v);
                        continue;
                    }
                    for h in 0..=7usize {
                        let mut next = v.clone();
                        next.push(h);
                        stack.push(next);
                    }
                }
            }
            assert_eq!(vectors.len(), 1 + 8 + 64 + 512);
            for hs in &vectors {
                let expected = hs.iter().fold(0usize, |acc, h| acc ^ h) as u32;
                assert_eq!(nim_value(hs), Nimber(expected));
                let board = nim(hs).unwrap().arc();
                assert_eq!(solver.grundy(&Position::full(board)), Nimber(expected));
            }
            assert!(t.elapsed() < Duration::from_secs(30));
            String::new()
        },
    );
}

/// Every poset on `n` named elements, produced by relabelling the
/// order-respecting ones every possible way.
fn all_labeled_posets(n: usize) -> Vec<Poset> {
    fn permutations(n: usize) -> Vec<Vec<usize>> {
        let mut out = vec![vec![]];
        for _ in 0..n {
            let mut grown = Vec::new();
            for p in &out {
                for slot in 0..=p.len() {
                    let mut q = p.clone();
                    q.insert(slot, p.len());
                    grown.push(q);
                }
            }
            out = grown;
        }
        out
    }
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for p in enumerate_aligned_posets(n) {
        for perm in permutations(n) {
            let q = relabel(&p, &perm);
            let key: Vec<u64> = (0..n).map(|i| q.up_mask(i)).collect();
            if seen.insert(key) {
                out.push(q);
            }
        }
    }
    out
}

#[test]
fn engine_matches_the_reference_solver() {
    criterion(
        "engine equals reference on every poset to 5 elements and 500 random ones, under 2min",
        || {
            let t = Instant::now();
            let mut solver = Solver::new();
            let expected_counts = [1usize, 1, 3, 19, 219, 4231];
            for (n, &want) in expected_counts.iter().enumerate() {
                let all = all_labeled_posets(n);
                assert_eq!(all.len(), want);
                for p in all {
                    let pos = Position::full(p.arc());
                    assert_eq!(solver.grundy(&pos), grundy_naive(&pos));
                }
            }
            let mut r = rng(201);
            for i in 0..500usize {
                let n = 6 + i % 5;
                let p = random_poset(n, r.gen_range(0.15..0.85), &mut r).arc();
                let pos = Position::full(p);
                assert_eq!(solver.grundy(&pos), grundy_naive(&pos));
            }
            assert!(t.elapsed() < Duration::from_secs(120));
            format!("{} positions explored", solver.positions_explored())
        },
    );
}

#[test]
fn ordinal_shortcut_matches_direct_construction() {
    criterion(
        "ordinal sum value shortcut agrees on 200 random pairs",
        || {
            let mut r = rng(202);
            let mut solver = Solver::new();
            for _ in 0..200 {
                let a = random_poset(r.gen_range(1..=5), r.gen_range(0.1..0.9), &mut r);
                let b = random_poset(r.gen_range(1..=5), r.gen_range(0.1..0.9), &mut r);
                let shortcut = solver.ordinal_sum_grundy(&a, &b).unwrap();
                let direct = grundy_naive(&Position::full(ordinal_sum(&a, &b).unwrap().arc()));
                assert_eq!(shortcut, direct);
            }
            String::new()
        },
    );
}

#[test]
fn fiber_value_equivalence_suite() {
    criterion(
        "fiber value equivalence is an exact iff on 120 instances",
        || {
            let mut r = rng(203);
            let targets = [chain(2).unwrap().arc(), vee().arc(), wedge().arc()];
            let pool = [
                chain(0).unwrap(),
                chain(1).unwrap(),
                chain(2).unwrap(),
                chain(3).unwrap(),
                antichain(2).unwrap(),
                antichain(3).unwrap(),
                vee(),
                wedge(),
            ];
            let mut solver = Solver::new();
            let mut checked = 0usize;
            for i in 0..120 {
                let target = &targets[i % targets.len()];
                let maximal: Vec<usize> = (0..target.len())
                    .filter(|&q| target.is_maximal(q))
                    .collect();
                let alpha = maximal[r.gen_range(0..maximal.len())];
                let mut fibers: Vec<Poset> = (0..target.len())
                    .map(|_| pool[r.gen_range(0..pool.len())].clone())
                    .collect();
                let (a, f) = assemble(target, &fibers, "lhs");
                let f = verified(f);
                fibers[alpha] = pool[r.gen_range(0..pool.len())].clone();
                let (b, g) = assemble(target, &fibers, "rhs");
                let g = verified(g);
                let (sources_equal, fibers_equal) =
                    check_factor_equivalence(&f, &g, alpha).unwrap();
                assert_eq!(sources_equal, fibers_equal);
                let direct = solver.grundy(&Position::full(a)) == solver.grundy(&Position::full(b));
                assert_eq!(sources_equal, direct);
                checked += 1;
            }
            assert!(checked >= 100);
            format!("{} instances", checked)
        },
    );
}

#[test]
fn fiber_option_set_preservation_suite() {
    criterion(
        "matching fiber option sets preserve source option sets on 120 instances",
        || {
            let classes = option_set_classes();
            let targets = [
                chain(2).unwrap().arc(),
                chain(3).unwrap().arc(),
                wedge().arc(),
            ];
            let mut r = rng(204);
            let mut checked = 0usize;
            for i in 0..120 {
                let target = &targets[i % targets.len()];
                let mut fibers_f = Vec::new();
                let mut fibers_g = Vec::new();
                for _ in 0..target.len() {
                    let class = &classes[r.gen_range(0..classes.len())];
                    fibers_f.push(class[r.gen_range(0..class.len())].clone());
                    fibers_g.push(class[r.gen_range(0..class.len())].clone());
                }
                let (_, f) = assemble(target, &fibers_f, "lhs");
                let (_, g) = assemble(target, &fibers_g, "rhs");
                assert!(check_option_set_preservation(&verified(f), &verified(g)).unwrap());
                checked += 1;
            }
            assert!(checked >= 100);
            format!("{} instances", checked)
        },
    );
}

#[test]
fn antichain_blow_up_preserves_option_sets() {
    criterion(
        "antichain copies preserve option sets on every poset to 5 elements",
        || {
            let mut solver = Solver::new();
            let mut checked = 0usize;
            for n in 1..=5 {
                for p in enumerate_posets(n) {
                    let original = solver.option_value_set(&Position::full(p.clone().arc()));
                    for q in 0..n {
                        for copies in 1..=2usize {
                            let grown = blow_up(&p, q, copies).unwrap();
                            let set = solver.option_value_set(&Position::full(grown.arc()));
                            assert_eq!(set, original);
                            checked += 1;
                        }
                    }
                }
            }
            format!("{} blow-ups", checked)
        },
    );
}

#[test]
fn product_sweep_with_point_second_factor() {
    criterion(
        "product sweep against a single point confirms every pair to size 5",
        || {
            let report = conjecture_sweep(&SweepParams {
                max_a: 5,
                max_b: 1,
                sample: SampleMode::Exhaustive,
                seed: 0,
                reading: BReading::Nimber,
            })
            .unwrap();
            assert_eq!(report.counts.pairs, 87);
            assert_eq!(report.counts.admissible, 87);
            assert_eq!(report.counts.confirmed, 87);
            assert_eq!(report.counts.violated, 0);
            assert_eq!(report.counts.skipped, 0);
            assert!(report.counterexamples.is_empty());
            String::new()
        },
    );
}

#[test]
fn performance_smoke_on_chomp() {
    criterion("chomp(4,5) solves under 5s", || {
        let board = chomp(4, 5).unwrap().arc();
        assert_eq!(board.len(), 19);
        let mut solver = Solver::new();
        let t = Instant::now();
        let value = solver.grundy(&Position::full(board));
        assert!(t.elapsed() < Duration::from_secs(5));
        format!(
            "value {}, {} positions explored, {} memo hits",
            value,
            solver.positions_explored(),
            solver.memo_hits()
        )
    });
}
