//! Game positions: a shared root poset plus the set of still-alive elements.
//!
//! A move names a live element `p` and removes the whole up-set of `p`; the
//! alive sets reachable by legal play are exactly the order ideals
//! (downward closed subsets) of the root.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::poset::{mask_iter, Mask, Poset};

#[derive(Clone)]
pub struct Position {
    root: Arc<Poset>,
    alive: Mask,
}

impl Position {
    /// The starting position: every element alive.
    pub fn full(root: Arc<Poset>) -> Position {
        let alive = root.full_mask();
        Position { root, alive }
    }

    /// A position with an explicit alive set; the mask must be downward
    /// closed in the root.
    pub fn new(root: Arc<Poset>, alive: Mask) -> Result<Position> {
        if alive & !root.full_mask() != 0 {
            return Err(Error::NotAnIdeal);
        }
        if !is_ideal(&root, alive) {
            return Err(Error::NotAnIdeal);
        }
        Ok(Position { root, alive })
    }

    pub fn root(&self) -> &Arc<Poset> {
        &self.root
    }

    pub fn alive_mask(&self) -> Mask {
        self.alive
    }

    pub fn alive_elements(&self) -> Vec<usize> {
        mask_iter(self.alive).collect()
    }

    pub fn len(&self) -> usize {
        self.alive.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.alive == 0
    }

    pub fn is_alive(&self, p: usize) -> bool {
        p < self.root.len() && self.alive & (1 << p) != 0
    }

    /// Plays at `p`: removes `p` and every live element above it.
    pub fn make_move(&self, p: usize) -> Result<Position> {
        if p >= self.root.len() {
            return Err(Error::UnknownElement(p));
        }
        if self.alive & (1 << p) == 0 {
            return Err(Error::DeadElement(self.root.element_name(p).to_string()));
        }
        Ok(Position {
            root: self.root.clone(),
            alive: self.alive & !self.root.up_set_mask(p),
        })
    }

    /// Positions one move away, with duplicate alive sets collapsed.
    /// Ordered by the lowest move index that produces each alive set.
    pub fn one_move_options(&self) -> Vec<Position> {
        let mut seen = Vec::new();
        let mut out = Vec::new();
        for p in mask_iter(self.alive) {
            let next = self.alive & !self.root.up_set_mask(p);
            if !seen.contains(&next) {
                seen.push(next);
                out.push(Position {
                    root: self.root.clone(),
                    alive: next,
                });
            }
        }
        out
    }

    /// Every proper order ideal of the live subposet, each exactly once, in
    /// ascending mask order. The count is exponential in the worst case;
    /// meant for small posets and for cross-checking the move rules.
    pub fn followers(&self) -> Followers {
        Followers {
            root: self.root.clone(),
            alive: self.alive,
            next: Some(0),
        }
    }

    /// Connected components of the comparability graph on the live elements,
    /// ordered by their lowest element index.
    pub fn components(&self) -> Vec<Position> {
        component_masks(&self.root, self.alive)
            .into_iter()
            .map(|m| Position {
                root: self.root.clone(),
                alive: m,
            })
            .collect()
    }

    /// The live subposet as a standalone poset.
    pub fn induced(&self, name: &str) -> Poset {
        self.root.induced(self.alive, name)
    }
}

impl PartialEq for Position {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.root, &other.root) && self.alive == other.alive
    }
}

impl Eq for Position {}

impl std::fmt::Debug for Position {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let names: Vec<&str> = mask_iter(self.alive)
            .map(|i| self.root.element_name(i))
            .collect();
        write!(
            f,
            "Position[{}: {{{}}}]",
            self.root.name(),
            names.join(", ")
        )
    }
}

pub(crate) fn is_ideal(root: &Poset, mask: Mask) -> bool {
    // every live element has its full strict down-set alive
    mask_iter(mask).all(|i| root.down_mask(i) & !mask == 0)
}

pub(crate) fn component_masks(root: &Poset, alive: Mask) -> Vec<Mask> {
    let mut rest = alive;
    let mut out = Vec::new();
    while rest != 0 {
        let start = rest & rest.wrapping_neg();
        let mut comp = start;
        loop {
            let mut grown = comp;
            for i in mask_iter(comp) {
                grown |= (root.up_mask(i) | root.down_mask(i)) & alive;
            }
            if grown == comp {
                break;
            }
            comp = grown;
        }
        out.push(comp);
        rest &= !comp;
    }
    out
}

/// Lazily walks the submasks of the alive set, yielding the downward closed
/// ones and skipping the full set itself.
pub struct Followers {
    root: Arc<Poset>,
    alive: Mask,
    next: Option<Mask>,
}

impl Iterator for Followers {
    type Item = Position;

    fn next(&mut self) -> Option<Position> {
        while let Some(sub) = self.next {
            self.next = if sub == self.alive {
                None
            } else {
                Some((sub.wrapping_sub(self.alive)) & self.alive)
            };
            if sub != self.alive && is_ideal(&self.root, sub) {
                return Some(Position {
                    root: self.root.clone(),
                    alive: sub,
                });
            }
        }
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poset::{antichain, chain, nim, Poset};

    fn diamond() -> Arc<Poset> {
        Poset::from_covers(
            "diamond",
            &["bot", "l", "r", "top"],
            &[("bot", "l"), ("bot", "r"), ("l", "top"), ("r", "top")],
        )
        .unwrap()
        .arc()
    }

    #[test]
    fn moves_remove_up_sets() {
        let d = diamond();
        let full = Position::full(d.clone());
        let after = full.make_move(1).unwrap(); // play at l
        assert_eq!(after.alive_elements(), vec![0, 2]);
        assert!(after.make_move(1).is_err()); // l is dead now
        let wiped = full.make_move(0).unwrap();
        assert!(wiped.is_empty());
    }

    #[test]
    fn options_collapse_duplicates() {
        let d = diamond();
        let opts = Position::full(d).one_move_options();
        // bot -> {}, l -> {bot,r}, r -> {bot,l}, top -> {bot,l,r}
        assert_eq!(opts.len(), 4);
        let a2 = antichain(2).unwrap().arc();
        let opts = Position::full(a2).one_move_options();
        // both moves leave a single point, but different ones
        assert_eq!(opts.len(), 2);

        let c = chain(3).unwrap().arc();
        let opts = Position::full(c).one_move_options();
        assert_eq!(opts.len(), 3);
    }

    #[test]
    fn followers_are_exactly_the_proper_ideals() {
        let d = diamond();
        let full = Position::full(d.clone());
        let ideals: Vec<Mask> = full.followers().map(|p| p.alive_mask()).collect();
        // ideals of the diamond: {}, {bot}, {bot,l}, {bot,r}, {bot,l,r}
        assert_eq!(ideals, vec![0b0000, 0b0001, 0b0011, 0b0101, 0b0111]);

        // reachability by play gives the same set
        let mut reach = std::collections::BTreeSet::new();
        let mut stack = vec![full.clone()];
        while let Some(pos) = stack.pop() {
            for next in pos.one_move_options() {
                if reach.insert(next.alive_mask()) {
                    stack.push(next);
                }
            }
        }
        assert_eq!(reach.into_iter().collect::<Vec<_>>(), ideals);
    }

    #[test]
    fn followers_skip_non_ideals_and_self() {
        let c = chain(2).unwrap().arc();
        let full = Position::full(c);
        let got: Vec<Mask> = full.followers().map(|p| p.alive_mask()).collect();
        assert_eq!(got, vec![0b00, 0b01]); // not {c1} alone, not {c0,c1}
    }

    #[test]
    fn position_validation() {
        let c = chain(2).unwrap().arc();
        assert!(Position::new(c.clone(), 0b10).is_err()); // top without bottom
        assert!(Position::new(c.clone(), 0b01).is_ok());
        assert!(Position::new(c, 0b100).is_err()); // out of range bit
    }

    #[test]
    fn components_split_living_elements() {
        let n = nim(&[2, 1]).unwrap().arc();
        let full = Position::full(n.clone());
        let comps = full.components();
        assert_eq!(comps.len(), 2);
        assert_eq!(comps[0].alive_elements(), vec![0, 1]);
        assert_eq!(comps[1].alive_elements(), vec![2]);

        // empty position: no components
        let empty = Position::new(n, 0).unwrap();
        assert!(empty.components().is_empty());
    }
}
