//! Finite strict partial orders on at most 64 elements.
//!
//! The strict order is stored twice: as a transitive closure (bitmask rows)
//! and as its transitive reduction (the cover relation). Both are derived in
//! `from_covers` and kept consistent; a `Poset` is immutable after
//! construction.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Bitmask over element indices; bit i stands for element i.
pub type Mask = u64;

/// Largest ground set a single poset may have (alive sets are one machine word).
pub const MAX_ELEMENTS: usize = 64;

pub(crate) fn mask_iter(mask: Mask) -> impl Iterator<Item = usize> {
    std::iter::successors(if mask == 0 { None } else { Some(mask) }, |m| {
        let rest = m & (m - 1);
        if rest == 0 {
            None
        } else {
            Some(rest)
        }
    })
    .map(|m| m.trailing_zeros() as usize)
}

#[derive(Clone)]
pub struct Poset {
    name: String,
    names: Vec<String>,
    index: HashMap<String, usize>,
    /// up[i] = elements strictly above i (transitive closure).
    up: Vec<Mask>,
    /// down[i] = elements strictly below i.
    down: Vec<Mask>,
    /// cover_up[i] = elements covering i (transitive reduction).
    cover_up: Vec<Mask>,
}

fn valid_name(s: &str) -> bool {
    !s.is_empty() && s.bytes().all(|b| b.is_ascii_alphanumeric() || b == b'_')
}

impl Poset {
    /// Builds a poset from element names and cover pairs `(lower, upper)`.
    ///
    /// The cover list may contain redundant (transitively implied) pairs;
    /// the stored cover relation is always the transitive reduction of the
    /// resulting order.
    pub fn from_covers<S: AsRef<str>>(
        name: &str,
        elements: &[S],
        covers: &[(S, S)],
    ) -> Result<Poset> {
        let n = elements.len();
        if n > MAX_ELEMENTS {
            return Err(Error::PosetTooLarge(n));
        }
        let mut names = Vec::with_capacity(n);
        let mut index = HashMap::with_capacity(n);
        for e in elements {
            let e = e.as_ref();
            if !valid_name(e) {
                return Err(Error::InvalidName(e.to_string()));
            }
            if index.insert(e.to_string(), names.len()).is_some() {
                return Err(Error::DuplicateName(e.to_string()));
            }
            names.push(e.to_string());
        }
        let mut adj = vec![0u64; n];
        for (lo, hi) in covers {
            let (lo, hi) = (lo.as_ref(), hi.as_ref());
            let i = *index
                .get(lo)
                .ok_or_else(|| Error::UnknownName(lo.to_string()))?;
            let j = *index
                .get(hi)
                .ok_or_else(|| Error::UnknownName(hi.to_string()))?;
            if i == j {
                return Err(Error::CycleDetected);
            }
            adj[i] |= 1 << j;
        }
        let up = transitive_closure(&adj);
        for (i, &m) in up.iter().enumerate() {
            if m & (1 << i) != 0 {
                return Err(Error::CycleDetected);
            }
        }
        Ok(Poset::from_parts(name.to_string(), names, index, up))
    }

    /// Builds from an already transitively closed, irreflexive `up` table.
    /// Callers guarantee closure; antisymmetry is implied by irreflexivity
    /// plus closure.
    pub(crate) fn from_closure_unchecked(name: String, names: Vec<String>, up: Vec<Mask>) -> Poset {
        debug_assert!(names.len() <= MAX_ELEMENTS);
        debug_assert!(is_transitively_closed(&up));
        debug_assert!(up.iter().enumerate().all(|(i, &m)| m & (1 << i) == 0));
        let index = names
            .iter()
            .enumerate()
            .map(|(i, s)| (s.clone(), i))
            .collect();
        Poset::from_parts(name, names, index, up)
    }

    fn from_parts(
        name: String,
        names: Vec<String>,
        index: HashMap<String, usize>,
        up: Vec<Mask>,
    ) -> Poset {
        let n = names.len();
        let mut down = vec![0u64; n];
        for (i, &u) in up.iter().enumerate() {
            for j in mask_iter(u) {
                down[j] |= 1 << i;
            }
        }
        // cover (i, j) iff i < j and no k with i < k < j.
        let mut cover_up = vec![0u64; n];
        for i in 0..n {
            let mut via = 0u64;
            for k in mask_iter(up[i]) {
                via |= up[k];
            }
            cover_up[i] = up[i] & !via;
        }
        Poset {
            name,
            names,
            index,
            up,
            down,
            cover_up,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: &str) -> Poset {
        self.name = name.to_string();
        self
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    /// Bitmask covering every element.
    pub fn full_mask(&self) -> Mask {
        if self.names.is_empty() {
            0
        } else {
            (!0u64) >> (64 - self.names.len())
        }
    }

    pub fn element_name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn element_names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, name: &str) -> Result<usize> {
        self.index
            .get(name)
            .copied()
            .ok_or_else(|| Error::UnknownName(name.to_string()))
    }

    fn check_index(&self, p: usize) -> Result<()> {
        if p < self.len() {
            Ok(())
        } else {
            Err(Error::UnknownElement(p))
        }
    }

    /// True iff `a` is strictly below `b`.
    pub fn lt(&self, a: usize, b: usize) -> bool {
        self.up[a] & (1 << b) != 0
    }

    /// True iff `a` is below or equal to `b`.
    pub fn le(&self, a: usize, b: usize) -> bool {
        a == b || self.lt(a, b)
    }

    pub fn comparable(&self, a: usize, b: usize) -> bool {
        self.lt(a, b) || self.lt(b, a)
    }

    /// Elements strictly above `p`, as a mask.
    pub fn up_mask(&self, p: usize) -> Mask {
        self.up[p]
    }

    /// Elements strictly below `p`, as a mask.
    pub fn down_mask(&self, p: usize) -> Mask {
        self.down[p]
    }

    pub fn covers_mask(&self, p: usize) -> Mask {
        self.cover_up[p]
    }

    /// The up-set of `p`: `p` together with everything strictly above it.
    pub fn up_set(&self, p: usize) -> Result<Vec<usize>> {
        self.check_index(p)?;
        Ok(mask_iter(self.up_set_mask(p)).collect())
    }

    pub fn up_set_mask(&self, p: usize) -> Mask {
        self.up[p] | (1 << p)
    }

    /// Cover pairs `(lower, upper)` by index, sorted.
    pub fn cover_pairs(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 0..self.len() {
            for j in mask_iter(self.cover_up[i]) {
                out.push((i, j));
            }
        }
        out
    }

    pub fn maximal_mask(&self) -> Mask {
        let mut m = 0;
        for i in 0..self.len() {
            if self.up[i] == 0 {
                m |= 1 << i;
            }
        }
        m
    }

    pub fn minimal_mask(&self) -> Mask {
        let mut m = 0;
        for i in 0..self.len() {
            if self.down[i] == 0 {
                m |= 1 << i;
            }
        }
        m
    }

    pub fn is_maximal(&self, p: usize) -> bool {
        self.up[p] == 0
    }

    /// The subposet induced on `mask`. Element names are kept; indices are
    /// renumbered in ascending order of the old indices.
    pub fn induced(&self, mask: Mask, name: &str) -> Poset {
        let kept: Vec<usize> = mask_iter(mask & self.full_mask()).collect();
        let mut old_to_new = [usize::MAX; MAX_ELEMENTS];
        for (new, &old) in kept.iter().enumerate() {
            old_to_new[old] = new;
        }
        let names = kept.iter().map(|&i| self.names[i].clone()).collect();
        let up = kept
            .iter()
            .map(|&old| {
                let mut m = 0;
                for j in mask_iter(self.up[old] & mask) {
                    m |= 1 << old_to_new[j];
                }
                m
            })
            .collect();
        Poset::from_closure_unchecked(name.to_string(), names, up)
    }

    /// Structural equality including element names; the poset-level name is
    /// ignored.
    pub fn same_labeled_poset(&self, other: &Poset) -> bool {
        self.names == other.names && self.up == other.up
    }

    /// True iff every pair of elements is comparable.
    pub fn is_chain(&self) -> bool {
        (0..self.len()).all(|i| ((i + 1)..self.len()).all(|j| self.comparable(i, j)))
    }

    /// True iff the comparability graph on the whole ground set is connected.
    pub fn is_connected(&self) -> bool {
        if self.len() <= 1 {
            return true;
        }
        let full = self.full_mask();
        let mut seen = 1u64;
        loop {
            let mut grown = seen;
            for i in mask_iter(seen) {
                grown |= (self.up[i] | self.down[i]) & full;
            }
            if grown == seen {
                return seen == full;
            }
            seen = grown;
        }
    }

    pub fn arc(self) -> Arc<Poset> {
        Arc::new(self)
    }
}

impl PartialEq for Poset {
    fn eq(&self, other: &Self) -> bool {
        self.same_labeled_poset(other)
    }
}

impl Eq for Poset {}

impl fmt::Debug for Poset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poset({}: {} elements", self.name, self.len())?;
        let pairs = self.cover_pairs();
        if !pairs.is_empty() {
            write!(f, ";")?;
            for (a, b) in pairs {
                write!(f, " {}<{}", self.names[a], self.names[b])?;
            }
        }
        write!(f, ")")
    }
}

fn transitive_closure(adj: &[Mask]) -> Vec<Mask> {
    let mut up = adj.to_vec();
    let n = up.len();
    for k in 0..n {
        let row = up[k];
        for u in up.iter_mut() {
            if *u & (1 << k) != 0 {
                *u |= row;
            }
        }
    }
    up
}

fn is_transitively_closed(up: &[Mask]) -> bool {
    // a < b and b < c imply a < c
    (0..up.len()).all(|a| mask_iter(up[a]).all(|b| up[b] & !up[a] == 0))
}

/// Renames candidates so the result is duplicate free. If the candidate list
/// already has pairwise distinct entries it is returned untouched; otherwise
/// every entry gets its element index appended.
pub(crate) fn disambiguate(candidates: Vec<String>) -> Vec<String> {
    let mut seen = std::collections::HashSet::new();
    let unique = candidates.iter().all(|c| seen.insert(c.as_str()));
    if unique {
        candidates
    } else {
        candidates
            .into_iter()
            .enumerate()
            .map(|(i, c)| format!("{c}_{i}"))
            .collect()
    }
}

/// Disjoint union: no relations between the two sides. When the name sets
/// collide, left names get prefix `a_` and right names `b_`.
pub fn disjoint_sum(a: &Poset, b: &Poset) -> Result<Poset> {
    let n = a.len() + b.len();
    if n > MAX_ELEMENTS {
        return Err(Error::PosetTooLarge(n));
    }
    let collide = a.names.iter().any(|s| b.index.contains_key(s));
    let mut names: Vec<String> = Vec::with_capacity(n);
    for s in &a.names {
        names.push(if collide { format!("a_{s}") } else { s.clone() });
    }
    for s in &b.names {
        names.push(if collide { format!("b_{s}") } else { s.clone() });
    }
    let shift = a.len();
    let mut up = Vec::with_capacity(n);
    up.extend_from_slice(&a.up);
    up.extend(b.up.iter().map(|&m| m << shift));
    Ok(Poset::from_closure_unchecked("sum".into(), names, up))
}

/// Ordinal sum `A : B`: everything in `A` lies below everything in `B`.
pub fn ordinal_sum(a: &Poset, b: &Poset) -> Result<Poset> {
    let n = a.len() + b.len();
    if n > MAX_ELEMENTS {
        return Err(Error::PosetTooLarge(n));
    }
    let collide = a.names.iter().any(|s| b.index.contains_key(s));
    let mut names: Vec<String> = Vec::with_capacity(n);
    for s in &a.names {
        names.push(if collide { format!("a_{s}") } else { s.clone() });
    }
    for s in &b.names {
        names.push(if collide { format!("b_{s}") } else { s.clone() });
    }
    let shift = a.len();
    let top: Mask = if b.is_empty() {
        0
    } else {
        (b.full_mask()) << shift
    };
    let mut up = Vec::with_capacity(n);
    up.extend(a.up.iter().map(|&m| m | top));
    up.extend(b.up.iter().map(|&m| m << shift));
    Ok(Poset::from_closure_unchecked(
        "ordinal_sum".into(),
        names,
        up,
    ))
}

/// Lexicographic product `A ⊗ B`: pairs `(a, b)` with
/// `(a, b) < (a', b')` iff `a < a'`, or `a = a'` and `b < b'`.
/// Element `(i, j)` gets index `i * |B| + j` and name `<a>__<b>`.
pub fn lex_product(a: &Poset, b: &Poset) -> Result<Poset> {
    let n = a.len() * b.len();
    if n > MAX_ELEMENTS {
        return Err(Error::PosetTooLarge(n));
    }
    let nb = b.len();
    let mut names = Vec::with_capacity(n);
    let mut up = Vec::with_capacity(n);
    for i in 0..a.len() {
        // all pairs whose first coordinate is strictly above i
        let mut above_first: Mask = 0;
        for i2 in mask_iter(a.up[i]) {
            above_first |= b.full_mask() << (i2 * nb);
        }
        for j in 0..nb {
            names.push(format!("{}__{}", a.names[i], b.names[j]));
            up.push(above_first | (b.up[j] << (i * nb)));
        }
    }
    let names = disambiguate(names);
    Ok(Poset::from_closure_unchecked(
        "lex_product".into(),
        names,
        up,
    ))
}

/// Index of pair `(i, j)` in `lex_product`.
pub fn lex_index(b_len: usize, i: usize, j: usize) -> usize {
    i * b_len + j
}

// ---------------------------------------------------------------------------
// Generators
// ---------------------------------------------------------------------------

/// Total order on `m` elements `c0 < c1 < ... `.
pub fn chain(m: usize) -> Result<Poset> {
    pile("c", m, &format!("chain_{m}"))
}

fn pile(prefix: &str, h: usize, name: &str) -> Result<Poset> {
    if h > MAX_ELEMENTS {
        return Err(Error::PosetTooLarge(h));
    }
    let names: Vec<String> = (0..h).map(|i| format!("{prefix}{i}")).collect();
    let covers: Vec<(String, String)> = (1..h)
        .map(|i| (format!("{prefix}{}", i - 1), format!("{prefix}{i}")))
        .collect();
    Poset::from_covers(name, &names, &covers)
}

/// `k` pairwise incomparable elements.
pub fn antichain(k: usize) -> Result<Poset> {
    if k > MAX_ELEMENTS {
        return Err(Error::PosetTooLarge(k));
    }
    let names: Vec<String> = (0..k).map(|i| format!("a{i}")).collect();
    Poset::from_covers(&format!("antichain_{k}"), &names, &[])
}

/// Disjoint chains, one per pile height. Height 0 piles contribute nothing.
pub fn nim(heights: &[usize]) -> Result<Poset> {
    let total: usize = heights.iter().sum();
    if total > MAX_ELEMENTS {
        return Err(Error::PosetTooLarge(total));
    }
    let mut names = Vec::with_capacity(total);
    let mut covers = Vec::new();
    for (p, &h) in heights.iter().enumerate() {
        for j in 0..h {
            names.push(format!("p{p}_{j}"));
            if j > 0 {
                covers.push((format!("p{p}_{}", j - 1), format!("p{p}_{j}")));
            }
        }
    }
    let label = heights
        .iter()
        .map(|h| h.to_string())
        .collect::<Vec<_>>()
        .join("_");
    Poset::from_covers(&format!("nim_{label}"), &names, &covers)
}

/// Zigzag on `n + 1` points: `f0 < f1 > f2 < f3 > ...`.
pub fn fence(n: usize) -> Result<Poset> {
    let count = n + 1;
    if count > MAX_ELEMENTS {
        return Err(Error::PosetTooLarge(count));
    }
    let names: Vec<String> = (0..count).map(|i| format!("f{i}")).collect();
    let mut covers = Vec::new();
    for i in 0..n {
        if i % 2 == 0 {
            covers.push((format!("f{i}"), format!("f{}", i + 1)));
        } else {
            covers.push((format!("f{}", i + 1), format!("f{i}")));
        }
    }
    Poset::from_covers(&format!("fence_{n}"), &names, &covers)
}

/// Product order on an `m x n` grid; `x<i>y<j> <= x<i'>y<j'>` iff both
/// coordinates are.
pub fn grid(m: usize, n: usize) -> Result<Poset> {
    if m == 0 || n == 0 {
        return Err(Error::BadParameter("grid sides must be positive".into()));
    }
    if m * n > MAX_ELEMENTS {
        return Err(Error::PosetTooLarge(m * n));
    }
    let mut names = Vec::with_capacity(m * n);
    let mut covers = Vec::new();
    for i in 0..m {
        for j in 0..n {
            names.push(format!("x{i}y{j}"));
            if i > 0 {
                covers.push((format!("x{}y{j}", i - 1), format!("x{i}y{j}")));
            }
            if j > 0 {
                covers.push((format!("x{i}y{}", j - 1), format!("x{i}y{j}")));
            }
        }
    }
    Poset::from_covers(&format!("grid_{m}x{n}"), &names, &covers)
}

/// The `m x n` grid with its least element removed.
pub fn chomp(m: usize, n: usize) -> Result<Poset> {
    let g = grid(m, n)?;
    let least = g.index_of("x0y0")?;
    Ok(g.induced(g.full_mask() & !(1 << least), &format!("chomp_{m}x{n}")))
}

/// String-driven generator used by the command line: family name plus
/// numeric parameters.
pub fn generate(family: &str, params: &[usize]) -> Result<Poset> {
    let want = |k: usize| -> Result<()> {
        if params.len() == k {
            Ok(())
        } else {
            Err(Error::BadParameter(format!(
                "family `{family}` takes {k} parameter(s), got {}",
                params.len()
            )))
        }
    };
    match family {
        "chain" => {
            want(1)?;
            chain(params[0])
        }
        "antichain" => {
            want(1)?;
            antichain(params[0])
        }
        "nim" => {
            if params.is_empty() {
                return Err(Error::BadParameter(
                    "nim takes at least one pile height".into(),
                ));
            }
            nim(params)
        }
        "fence" => {
            want(1)?;
            fence(params[0])
        }
        "grid" => {
            want(2)?;
            grid(params[0], params[1])
        }
        "chomp" => {
            want(2)?;
            chomp(params[0], params[1])
        }
        other => Err(Error::BadParameter(format!("unknown family `{other}`"))),
    }
}

// ---------------------------------------------------------------------------
// Fences between elements
// ---------------------------------------------------------------------------

/// Direction of one comparability step along a fence.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FenceStep {
    /// `f[i] < f[i+1]`
    Up,
    /// `f[i] > f[i+1]`
    Down,
}

/// A shortest comparability path between two elements.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fence {
    pub elements: Vec<usize>,
    pub pattern: Vec<FenceStep>,
}

/// Shortest fence from `p1` to `p2`, or `None` when they sit in different
/// connected components. Steps record actual directions; on a shortest path
/// consecutive steps always alternate, since two like steps compose to a
/// single comparability.
pub fn find_fence(poset: &Poset, p1: usize, p2: usize) -> Result<Option<Fence>> {
    poset.check_index(p1)?;
    poset.check_index(p2)?;
    if p1 == p2 {
        return Ok(Some(Fence {
            elements: vec![p1],
            pattern: vec![],
        }));
    }
    let n = poset.len();
    let mut prev = vec![usize::MAX; n];
    let mut queue = std::collections::VecDeque::new();
    prev[p1] = p1;
    queue.push_back(p1);
    while let Some(v) = queue.pop_front() {
        if v == p2 {
            break;
        }
        for w in mask_iter(poset.up[v] | poset.down[v]) {
            if prev[w] == usize::MAX {
                prev[w] = v;
                queue.push_back(w);
            }
        }
    }
    if prev[p2] == usize::MAX {
        return Ok(None);
    }
    let mut elements = vec![p2];
    let mut cur = p2;
    while cur != p1 {
        cur = prev[cur];
        elements.push(cur);
    }
    elements.reverse();
    let pattern = elements
        .windows(2)
        .map(|w| {
            if poset.lt(w[0], w[1]) {
                FenceStep::Up
            } else {
                FenceStep::Down
            }
        })
        .collect();
    Ok(Some(Fence { elements, pattern }))
}
