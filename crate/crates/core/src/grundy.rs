//! Nimber computation for poset take-away positions.
//!
//! `Solver` memoizes per (root poset, alive set) and decomposes positions
//! into connected components, XOR-combining component values. Inside a
//! component it additionally looks for an ordinal cut (a level below which
//! everything relates to everything above), which reduces the value to an
//! iterated mex of the lower part's option values.
//!
//! Concurrency contract: a `Solver` is single-threaded (all methods take
//! `&mut self`). The free functions build a fresh solver per call, so
//! different positions may be analyzed concurrently from different threads.
//! `grundy_naive` is an independent oracle and shares no state with any
//! solver.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::sync::Arc;

use serde_json::json;

use crate::error::Result;
use crate::poset::{mask_iter, Mask, Poset};
use crate::position::{component_masks, Position};

/// A Sprague-Grundy value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Nimber(pub u32);

impl fmt::Display for Nimber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl From<u32> for Nimber {
    fn from(v: u32) -> Nimber {
        Nimber(v)
    }
}

impl std::ops::BitXor for Nimber {
    type Output = Nimber;
    fn bitxor(self, rhs: Nimber) -> Nimber {
        Nimber(self.0 ^ rhs.0)
    }
}

/// Who wins with best play: the previous player (`P`) or the next (`N`).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    P,
    N,
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Outcome::P => write!(f, "P"),
            Outcome::N => write!(f, "N"),
        }
    }
}

/// The set of nimbers reachable in one move. Empty exactly for the empty
/// position.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct OptionValueSet(BTreeSet<Nimber>);

impl OptionValueSet {
    pub fn new() -> OptionValueSet {
        OptionValueSet::default()
    }

    pub fn insert(&mut self, v: Nimber) {
        self.0.insert(v);
    }

    pub fn contains(&self, v: Nimber) -> bool {
        self.0.contains(&v)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = Nimber> + '_ {
        self.0.iter().copied()
    }

    /// Least non-negative value not in the set.
    pub fn mex(&self) -> Nimber {
        let mut v = 0;
        for n in self.iter() {
            if n.0 == v {
                v += 1;
            } else if n.0 > v {
                break;
            }
        }
        Nimber(v)
    }

    /// The (k+1)-th smallest non-negative value missing from the set;
    /// `mex_k(S, 0)` is the ordinary mex.
    pub fn mex_k(&self, k: u32) -> Nimber {
        let mut missing = 0u32;
        let mut v = 0u32;
        loop {
            if !self.contains(Nimber(v)) {
                if missing == k {
                    return Nimber(v);
                }
                missing += 1;
            }
            v += 1;
        }
    }
}

impl FromIterator<Nimber> for OptionValueSet {
    fn from_iter<I: IntoIterator<Item = Nimber>>(iter: I) -> OptionValueSet {
        OptionValueSet(iter.into_iter().collect())
    }
}

impl fmt::Display for OptionValueSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, v) in self.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "}}")
    }
}

pub fn mex(s: &OptionValueSet) -> Nimber {
    s.mex()
}

pub fn mex_k(s: &OptionValueSet, k: u32) -> Nimber {
    s.mex_k(k)
}

/// XOR fold of Nim pile heights; the value of the matching disjoint-chain
/// poset.
pub fn nim_value(heights: &[usize]) -> Nimber {
    Nimber(heights.iter().fold(0u32, |acc, &h| acc ^ h as u32))
}

/// Full verdict for one position.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnalysisReport {
    pub nimber: Nimber,
    pub option_values: OptionValueSet,
    pub weakly_canonical: bool,
    pub outcome: Outcome,
    /// Moves to nimber-0 options, ascending element index.
    pub winning_moves: Vec<usize>,
    pub positions_explored: u64,
    pub memo_hits: u64,
}

impl AnalysisReport {
    pub fn to_json(&self, root: &Poset) -> serde_json::Value {
        let mut names: Vec<&str> = self
            .winning_moves
            .iter()
            .map(|&i| root.element_name(i))
            .collect();
        names.sort_unstable();
        json!({
            "nimber": self.nimber.0,
            "optionValues": self.option_values.iter().map(|n| n.0).collect::<Vec<_>>(),
            "weaklyCanonical": self.weakly_canonical,
            "outcome": self.outcome.to_string(),
            "winningMoves": names,
            "positionsExplored": self.positions_explored,
            "memoHits": self.memo_hits,
        })
    }
}

type RootKey = usize;

/// Memoizing nimber engine. Keyed by root poset identity plus alive set, so
/// positions of distinct posets never collide; solvers keep every root they
/// have seen alive for the lifetime of the table.
pub struct Solver {
    memo: HashMap<(RootKey, Mask), u32>,
    roots: HashMap<RootKey, Arc<Poset>>,
    positions_explored: u64,
    memo_hits: u64,
}

impl Default for Solver {
    fn default() -> Solver {
        Solver::new()
    }
}

impl Solver {
    pub fn new() -> Solver {
        Solver {
            memo: HashMap::new(),
            roots: HashMap::new(),
            positions_explored: 0,
            memo_hits: 0,
        }
    }

    pub fn positions_explored(&self) -> u64 {
        self.positions_explored
    }

    pub fn memo_hits(&self) -> u64 {
        self.memo_hits
    }

    fn register(&mut self, root: &Arc<Poset>) -> RootKey {
        let key = Arc::as_ptr(root) as usize;
        self.roots.entry(key).or_insert_with(|| root.clone());
        key
    }

    pub fn grundy(&mut self, pos: &Position) -> Nimber {
        let key = self.register(pos.root());
        let root = pos.root().clone();
        Nimber(self.eval_mask(&root, key, pos.alive_mask()))
    }

    pub fn option_value_set(&mut self, pos: &Position) -> OptionValueSet {
        let key = self.register(pos.root());
        let root = pos.root().clone();
        self.option_values_of_mask(&root, key, pos.alive_mask())
    }

    pub fn is_weakly_canonical(&mut self, pos: &Position) -> bool {
        let g = self.grundy(pos);
        let opts = self.option_value_set(pos);
        opts.len() as u32 == g.0
    }

    pub fn classify(&mut self, pos: &Position) -> Outcome {
        if self.grundy(pos).0 == 0 {
            Outcome::P
        } else {
            Outcome::N
        }
    }

    /// Elements whose move lands on a nimber-0 option, ascending index.
    pub fn winning_moves(&mut self, pos: &Position) -> Vec<usize> {
        let key = self.register(pos.root());
        let root = pos.root().clone();
        let alive = pos.alive_mask();
        mask_iter(alive)
            .filter(|&p| {
                let child = alive & !root.up_set_mask(p);
                self.eval_mask(&root, key, child) == 0
            })
            .collect()
    }

    pub fn analyze(&mut self, pos: &Position) -> AnalysisReport {
        let e0 = self.positions_explored;
        let h0 = self.memo_hits;
        let nimber = self.grundy(pos);
        let option_values = self.option_value_set(pos);
        let winning_moves = self.winning_moves(pos);
        AnalysisReport {
            nimber,
            weakly_canonical: option_values.len() as u32 == nimber.0,
            outcome: if nimber.0 == 0 {
                Outcome::P
            } else {
                Outcome::N
            },
            option_values,
            winning_moves,
            positions_explored: self.positions_explored - e0,
            memo_hits: self.memo_hits - h0,
        }
    }

    /// Value of the ordinal sum `A : B` computed without building it:
    /// the iterated mex of A's option values, iterated G(B) times.
    pub fn ordinal_sum_grundy(&mut self, a: &Poset, b: &Poset) -> Result<Nimber> {
        let a_full = Position::full(a.clone().arc());
        let b_full = Position::full(b.clone().arc());
        let a_opts = self.option_value_set(&a_full);
        let gb = self.grundy(&b_full);
        Ok(a_opts.mex_k(gb.0))
    }

    fn eval_mask(&mut self, root: &Arc<Poset>, key: RootKey, mask: Mask) -> u32 {
        let mut total = 0;
        for comp in component_masks(root, mask) {
            total ^= self.eval_component(root, key, comp);
        }
        total
    }

    fn option_values_of_mask(
        &mut self,
        root: &Arc<Poset>,
        key: RootKey,
        mask: Mask,
    ) -> OptionValueSet {
        let mut children: Vec<Mask> = mask_iter(mask)
            .map(|p| mask & !root.up_set_mask(p))
            .collect();
        children.sort_unstable_by_key(|&m| (m.count_ones(), m));
        children.dedup();
        children
            .into_iter()
            .map(|m| Nimber(self.eval_mask(root, key, m)))
            .collect()
    }

    fn eval_component(&mut self, root: &Arc<Poset>, key: RootKey, comp: Mask) -> u32 {
        if comp == 0 {
            return 0;
        }
        if let Some(&v) = self.memo.get(&(key, comp)) {
            self.memo_hits += 1;
            return v;
        }
        self.positions_explored += 1;
        let v = if let Some((low, high)) = ordinal_cut(root, comp) {
            let opts = self.option_values_of_mask(root, key, low);
            let gh = self.eval_mask(root, key, high);
            opts.mex_k(gh).0
        } else {
            self.option_values_of_mask(root, key, comp).mex().0
        };
        self.memo.insert((key, comp), v);
        v
    }
}

/// Splits `comp` at an ordinal cut: a partition (low, high), both nonempty,
/// with every high element strictly above every low element. Returns the cut
/// with the smallest low part, if any exists.
fn ordinal_cut(root: &Poset, comp: Mask) -> Option<(Mask, Mask)> {
    let m = comp.count_ones() as usize;
    if m < 2 {
        return None;
    }
    // In a valid cut of size k, the low part is exactly the k elements with
    // the fewest live predecessors.
    let mut elems: Vec<(u32, usize)> = mask_iter(comp)
        .map(|i| ((root.down_mask(i) & comp).count_ones(), i))
        .collect();
    elems.sort_unstable();
    let mut low: Mask = 0;
    for k in 1..m {
        low |= 1 << elems[k - 1].1;
        if (elems[k - 1].0 as usize) < k && (elems[k].0 as usize) >= k {
            let all_above = elems[k..]
                .iter()
                .all(|&(_, b)| root.down_mask(b) & low == low);
            if all_above {
                return Some((low, comp & !low));
            }
        }
    }
    None
}

/// Brute-force oracle: plain memoized recursion over one-move options with
/// no component decomposition and no ordinal shortcut. Exponential; intended
/// for small positions and cross-checking.
pub fn grundy_naive(pos: &Position) -> Nimber {
    fn go(root: &Poset, mask: Mask, memo: &mut HashMap<Mask, u32>) -> u32 {
        if mask == 0 {
            return 0;
        }
        if let Some(&v) = memo.get(&mask) {
            return v;
        }
        let mut children: Vec<Mask> = mask_iter(mask)
            .map(|p| mask & !root.up_set_mask(p))
            .collect();
        children.sort_unstable();
        children.dedup();
        let vals: OptionValueSet = children
            .into_iter()
            .map(|c| Nimber(go(root, c, memo)))
            .collect();
        let v = vals.mex().0;
        memo.insert(mask, v);
        v
    }
    let mut memo = HashMap::new();
    Nimber(go(pos.root(), pos.alive_mask(), &mut memo))
}

pub fn grundy(pos: &Position) -> Nimber {
    Solver::new().grundy(pos)
}

pub fn option_value_set(pos: &Position) -> OptionValueSet {
    Solver::new().option_value_set(pos)
}

pub fn is_weakly_canonical(pos: &Position) -> bool {
    Solver::new().is_weakly_canonical(pos)
}

pub fn classify(pos: &Position) -> Outcome {
    Solver::new().classify(pos)
}

pub fn winning_moves(pos: &Position) -> Vec<usize> {
    Solver::new().winning_moves(pos)
}

pub fn analyze(pos: &Position) -> AnalysisReport {
    Solver::new().analyze(pos)
}

pub fn ordinal_sum_grundy(a: &Poset, b: &Poset) -> Result<Nimber> {
    Solver::new().ordinal_sum_grundy(a, b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poset::{antichain, chain, chomp, disjoint_sum, fence, nim, ordinal_sum, Poset};

    fn full(p: Poset) -> Position {
        Position::full(p.arc())
    }

    fn set(vals: &[u32]) -> OptionValueSet {
        vals.iter().map(|&v| Nimber(v)).collect()
    }

    #[test]
    fn mex_basics() {
        assert_eq!(set(&[]).mex(), Nimber(0));
        assert_eq!(set(&[0, 1, 3]).mex(), Nimber(2));
        assert_eq!(set(&[1, 2]).mex(), Nimber(0));
    }

    #[test]
    fn mex_k_is_iterated_mex() {
        let s = set(&[0, 1, 3]);
        assert_eq!(s.mex_k(0), s.mex());
        assert_eq!(s.mex_k(1), Nimber(4));
        assert_eq!(s.mex_k(2), Nimber(5));
        assert_eq!(set(&[]).mex_k(3), Nimber(3));
        assert_eq!(set(&[1]).mex_k(1), Nimber(2));
    }

    #[test]
    fn tiny_positions() {
        assert_eq!(grundy(&full(chain(0).unwrap())), Nimber(0));
        assert_eq!(grundy(&full(chain(1).unwrap())), Nimber(1));
        for k in 0..6 {
            assert_eq!(grundy(&full(chain(k).unwrap())), Nimber(k as u32));
            assert_eq!(grundy(&full(antichain(k).unwrap())), Nimber((k % 2) as u32));
        }
    }

    #[test]
    fn named_small_shapes() {
        // two minimal elements under one top
        let v = Poset::from_covers("V", &["a", "b", "t"], &[("a", "t"), ("b", "t")]).unwrap();
        assert_eq!(grundy(&full(v.clone())), Nimber(2));
        assert_eq!(option_value_set(&full(v)), set(&[0, 1]));

        // one minimal element under two tops
        let lam = Poset::from_covers("L", &["b", "s", "t"], &[("b", "s"), ("b", "t")]).unwrap();
        assert_eq!(grundy(&full(lam.clone())), Nimber(1));
        assert_eq!(option_value_set(&full(lam)), set(&[0, 2]));

        let d = Poset::from_covers(
            "diamond",
            &["bot", "l", "r", "top"],
            &[("bot", "l"), ("bot", "r"), ("l", "top"), ("r", "top")],
        )
        .unwrap();
        assert_eq!(grundy(&full(d)), Nimber(3));

        // fence on 5 points: three minimal elements under two tops
        assert_eq!(grundy(&full(fence(4).unwrap())), Nimber(1));
        assert_eq!(option_value_set(&full(fence(4).unwrap())), set(&[0, 2, 3]));

        // the mirrored fence (two minimal elements, three tops) shares the
        // value but drops 3 from the option set
        let w = Poset::from_covers(
            "W",
            &["u0", "u1", "v0", "v1", "v2"],
            &[("u0", "v0"), ("u0", "v1"), ("u1", "v1"), ("u1", "v2")],
        )
        .unwrap();
        assert_eq!(grundy(&full(w.clone())), Nimber(1));
        assert_eq!(option_value_set(&full(w)), set(&[0, 2]));
    }

    #[test]
    fn nim_is_xor() {
        assert_eq!(grundy(&full(nim(&[5, 3, 5]).unwrap())), Nimber(3));
        assert_eq!(nim_value(&[5, 3, 5]), Nimber(3));
        for a in 0..5usize {
            for b in 0..5usize {
                let p = nim(&[a, b]).unwrap();
                assert_eq!(grundy(&full(p)), nim_value(&[a, b]));
            }
        }
    }

    #[test]
    fn disjoint_sum_xors() {
        let shapes: Vec<Poset> = vec![
            chain(3).unwrap(),
            antichain(3).unwrap(),
            fence(4).unwrap(),
            chomp(2, 3).unwrap(),
        ];
        for a in &shapes {
            for b in &shapes {
                let s = disjoint_sum(a, b).unwrap();
                assert_eq!(
                    grundy(&full(s)),
                    grundy(&full(a.clone())) ^ grundy(&full(b.clone()))
                );
            }
        }
    }

    #[test]
    fn engine_matches_naive_oracle() {
        let shapes: Vec<Poset> = vec![
            chain(4).unwrap(),
            antichain(4).unwrap(),
            fence(5).unwrap(),
            chomp(3, 3).unwrap(),
            ordinal_sum(&antichain(2).unwrap(), &chain(2).unwrap()).unwrap(),
            disjoint_sum(&fence(2).unwrap(), &chain(2).unwrap()).unwrap(),
        ];
        for p in shapes {
            let pos = full(p);
            assert_eq!(grundy(&pos), grundy_naive(&pos), "mismatch on {pos:?}");
        }
    }

    #[test]
    fn ordinal_sum_shortcut_agrees_with_direct_evaluation() {
        let cases = [
            (chain(0).unwrap(), chain(3).unwrap(), 3),
            (chain(2).unwrap(), chain(3).unwrap(), 5),
            (antichain(2).unwrap(), chain(1).unwrap(), 2),
        ];
        for (a, b, expect) in cases {
            assert_eq!(ordinal_sum_grundy(&a, &b).unwrap(), Nimber(expect));
            let built = ordinal_sum(&a, &b).unwrap();
            assert_eq!(grundy(&full(built)), Nimber(expect));
        }
    }

    #[test]
    fn winning_moves_and_outcome() {
        let pos = full(nim(&[5, 3, 5]).unwrap());
        let root = pos.root().clone();
        let moves = winning_moves(&pos);
        let names: Vec<&str> = moves.iter().map(|&i| root.element_name(i)).collect();
        assert_eq!(names, vec!["p1_0"]);
        for &m in &moves {
            assert_eq!(grundy(&pos.make_move(m).unwrap()), Nimber(0));
        }
        assert_eq!(classify(&pos), Outcome::N);

        let balanced = full(nim(&[2, 2]).unwrap());
        assert_eq!(classify(&balanced), Outcome::P);
        assert!(winning_moves(&balanced).is_empty());
    }

    #[test]
    fn weakly_canonical_examples() {
        assert!(is_weakly_canonical(&full(chain(4).unwrap())));
        assert!(is_weakly_canonical(&full(chain(0).unwrap())));
        let lam = Poset::from_covers("L", &["b", "s", "t"], &[("b", "s"), ("b", "t")]).unwrap();
        assert!(!is_weakly_canonical(&full(lam))); // options {0,2}, value 1
    }

    #[test]
    fn analyze_is_deterministic_and_serializes() {
        let p = nim(&[5, 3, 5]).unwrap().arc();
        let pos = Position::full(p.clone());
        let r1 = analyze(&pos);
        let r2 = analyze(&pos);
        assert_eq!(r1.nimber, r2.nimber);
        assert_eq!(r1.option_values, r2.option_values);
        assert_eq!(r1.winning_moves, r2.winning_moves);
        assert_eq!(r1.outcome, r2.outcome);
        assert!(r1.positions_explored > 0);

        let js = r1.to_json(&p);
        assert_eq!(js["nimber"], 3);
        assert_eq!(js["outcome"], "N");
        assert_eq!(js["winningMoves"][0], "p1_0");
        assert!(js["optionValues"].is_array());
    }

    #[test]
    fn empty_position_has_empty_option_set() {
        let e = full(chain(0).unwrap());
        assert!(option_value_set(&e).is_empty());
        assert_eq!(grundy(&e), Nimber(0));
        assert_eq!(classify(&e), Outcome::P);
    }

    #[test]
    fn solver_reuse_matches_fresh_solver() {
        let mut solver = Solver::new();
        let roots = [
            nim(&[3, 2]).unwrap(),
            fence(6).unwrap(),
            chomp(3, 4).unwrap(),
        ];
        for p in roots {
            let pos = full(p);
            let fresh = grundy(&pos);
            assert_eq!(solver.grundy(&pos), fresh);
            assert_eq!(solver.grundy(&pos), fresh); // second call hits memo
        }
        assert!(solver.memo_hits() > 0);
    }
}
