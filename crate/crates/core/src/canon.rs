//! Isomorphism tools: canonical forms, explicit-bijection checks, and
//! exhaustive or random generation of small posets.

use rand::Rng;

use crate::poset::{mask_iter, Mask, Poset};

/// A renaming-invariant encoding of the strict order: two posets have equal
/// canonical forms iff they are isomorphic.
///
/// Entry k packs the relations between the k-th element of the canonical
/// ordering and its predecessors (two bits per predecessor). The form is the
/// lexicographically least such sequence over all orderings, found by
/// backtracking; pruning keeps only orderings that are still minimal and
/// collapses "twin" elements (identical relations to everything else).
/// Worst case remains exponential; intended for small posets.
pub fn canonical_form(p: &Poset) -> Vec<u128> {
    let n = p.len();
    if n == 0 {
        return Vec::new();
    }
    let mut best: Option<Vec<u128>> = None;
    let mut perm = Vec::with_capacity(n);
    let mut used: Mask = 0;
    let mut chunks = Vec::with_capacity(n);
    search(p, &mut perm, &mut used, &mut chunks, &mut best);
    best.expect("nonempty poset has at least one ordering")
}

fn chunk_for(p: &Poset, perm: &[usize], e: usize) -> u128 {
    let mut c = 0u128;
    for (j, &q) in perm.iter().enumerate() {
        if p.lt(q, e) {
            c |= 1 << (2 * j);
        }
        if p.lt(e, q) {
            c |= 1 << (2 * j + 1);
        }
    }
    c
}

fn search(
    p: &Poset,
    perm: &mut Vec<usize>,
    used: &mut Mask,
    chunks: &mut Vec<u128>,
    best: &mut Option<Vec<u128>>,
) {
    let n = p.len();
    let depth = perm.len();
    if depth == n {
        if best.as_ref().is_none_or(|b| chunks[..] < b[..]) {
            *best = Some(chunks.clone());
        }
        return;
    }
    let mut candidates: Vec<(u128, usize)> = (0..n)
        .filter(|&e| *used & (1 << e) == 0)
        .map(|e| (chunk_for(p, perm, e), e))
        .collect();
    candidates.sort_unstable();
    // only minimal chunks can start the lexicographically least continuation
    let min_chunk = candidates[0].0;
    let mut tried_twins: Vec<(Mask, Mask)> = Vec::new();
    for &(c, e) in candidates.iter().take_while(|&&(c, _)| c == min_chunk) {
        // twins: identical relations to every element are interchangeable
        let twin_key = (p.up_mask(e), p.down_mask(e));
        if tried_twins.contains(&twin_key) {
            continue;
        }
        tried_twins.push(twin_key);
        if let Some(b) = best.as_ref() {
            let prefix_worse = chunks
                .iter()
                .chain(std::iter::once(&c))
                .cmp(b[..=depth].iter())
                == std::cmp::Ordering::Greater;
            if prefix_worse {
                continue;
            }
        }
        perm.push(e);
        *used |= 1 << e;
        chunks.push(c);
        search(p, perm, used, chunks, best);
        chunks.pop();
        *used &= !(1 << e);
        perm.pop();
    }
}

pub fn is_isomorphic(a: &Poset, b: &Poset) -> bool {
    a.len() == b.len() && canonical_form(a) == canonical_form(b)
}

/// Checks whether `map` (index in `a` -> index in `b`) is an order
/// isomorphism.
pub fn isomorphic_by(a: &Poset, b: &Poset, map: &[usize]) -> bool {
    if a.len() != b.len() || map.len() != a.len() {
        return false;
    }
    let mut seen: Mask = 0;
    for &m in map {
        if m >= b.len() || seen & (1 << m) != 0 {
            return false;
        }
        seen |= 1 << m;
    }
    for i in 0..a.len() {
        for j in 0..a.len() {
            if a.lt(i, j) != b.lt(map[i], map[j]) {
                return false;
            }
        }
    }
    true
}

/// The poset with element `i` renamed to index `perm[i]` (names travel with
/// their elements).
pub fn relabel(p: &Poset, perm: &[usize]) -> Poset {
    assert_eq!(perm.len(), p.len());
    let n = p.len();
    let mut names = vec![String::new(); n];
    let mut up = vec![0u64; n];
    for i in 0..n {
        names[perm[i]] = p.element_name(i).to_string();
        let mut m = 0;
        for j in mask_iter(p.up_mask(i)) {
            m |= 1 << perm[j];
        }
        up[perm[i]] = m;
    }
    Poset::from_closure_unchecked(p.name().to_string(), names, up)
}

/// All posets on `n` elements whose identity order is a linear extension
/// (every relation goes from a lower index to a higher one). Every
/// isomorphism class on `n` elements appears at least once. Exponential in
/// `n choose 2`; keep `n` small.
pub fn enumerate_aligned_posets(n: usize) -> Vec<Poset> {
    assert!(
        n <= 6,
        "aligned enumeration walks 2^(n(n-1)/2) bit patterns; use n <= 6"
    );
    let names: Vec<String> = (0..n).map(|i| format!("e{i}")).collect();
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| ((i + 1)..n).map(move |j| (i, j)))
        .collect();
    let mut out = Vec::new();
    for bits in 0u64..(1 << pairs.len()) {
        let mut up = vec![0u64; n];
        for (k, &(i, j)) in pairs.iter().enumerate() {
            if bits & (1 << k) != 0 {
                up[i] |= 1 << j;
            }
        }
        let transitive = (0..n).all(|a| mask_iter(up[a]).all(|b| up[b] & !up[a] == 0));
        if transitive {
            out.push(Poset::from_closure_unchecked(
                format!("aligned_{n}_{bits}"),
                names.clone(),
                up,
            ));
        }
    }
    out
}

/// One representative per isomorphism class of posets on `n` elements.
pub fn enumerate_posets(n: usize) -> Vec<Poset> {
    let mut seen = std::collections::HashSet::new();
    let mut out = Vec::new();
    for p in enumerate_aligned_posets(n) {
        if seen.insert(canonical_form(&p)) {
            out.push(p);
        }
    }
    out
}

/// Random poset on `n` elements: random order bits on a random linear
/// extension, transitively closed, then randomly relabeled.
pub fn random_poset<R: Rng>(n: usize, edge_prob: f64, rng: &mut R) -> Poset {
    let names: Vec<String> = (0..n).map(|i| format!("e{i}")).collect();
    let mut up = vec![0u64; n];
    for (i, u) in up.iter_mut().enumerate() {
        for j in (i + 1)..n {
            if rng.gen_bool(edge_prob) {
                *u |= 1 << j;
            }
        }
    }
    // close transitively (indices already topologically sorted)
    for i in (0..n).rev() {
        for j in mask_iter(up[i]) {
            up[i] |= up[j];
        }
    }
    let aligned = Poset::from_closure_unchecked("random".into(), names, up);
    let mut perm: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        let j = rng.gen_range(0..=i);
        perm.swap(i, j);
    }
    relabel(&aligned, &perm)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poset::{antichain, chain, disjoint_sum, fence, Poset};
    use rand::rngs::StdRng;
    use rand::SeedableRng;

    #[test]
    fn canonical_form_separates_and_identifies() {
        let c3 = chain(3).unwrap();
        let a3 = antichain(3).unwrap();
        assert_ne!(canonical_form(&c3), canonical_form(&a3));

        // same shape, different labels and order of elements
        let x = Poset::from_covers("X", &["p", "q", "r"], &[("p", "q"), ("q", "r")]).unwrap();
        assert_eq!(canonical_form(&c3), canonical_form(&x));
        let y = Poset::from_covers("Y", &["p", "q", "r"], &[("r", "q"), ("q", "p")]).unwrap();
        assert_eq!(canonical_form(&c3), canonical_form(&y));

        assert!(is_isomorphic(&c3, &y));
        assert!(!is_isomorphic(&c3, &a3));
    }

    #[test]
    fn relabel_preserves_structure() {
        let f = fence(3).unwrap();
        let perm = vec![3, 1, 0, 2];
        let g = relabel(&f, &perm);
        assert!(is_isomorphic(&f, &g));
        assert!(isomorphic_by(&f, &g, &perm));
        assert_eq!(g.element_name(3), "f0");
    }

    #[test]
    fn isomorphic_by_rejects_wrong_maps() {
        let c = chain(2).unwrap();
        let a = antichain(2).unwrap();
        assert!(!isomorphic_by(&c, &a, &[0, 1]));
        assert!(isomorphic_by(&c, &c, &[0, 1]));
        assert!(!isomorphic_by(&c, &c, &[1, 0])); // reverses the order
        assert!(!isomorphic_by(&c, &c, &[0, 0])); // not a bijection
    }

    #[test]
    fn enumeration_counts_match_known_values() {
        // number of posets on n unlabeled points: 1, 1, 2, 5, 16, 63
        let counts: Vec<usize> = (0..=5).map(|n| enumerate_posets(n).len()).collect();
        assert_eq!(counts, vec![1, 1, 2, 5, 16, 63]);
    }

    #[test]
    fn twins_do_not_confuse_canonical_forms() {
        // antichain canonical form must be instant and stable
        let a6 = antichain(6).unwrap();
        let f = canonical_form(&a6);
        assert_eq!(f, canonical_form(&relabel(&a6, &[5, 4, 3, 2, 1, 0])));

        let two_edges = disjoint_sum(&chain(2).unwrap(), &chain(2).unwrap()).unwrap();
        let shuffled = relabel(&two_edges, &[2, 0, 3, 1]);
        assert!(is_isomorphic(&two_edges, &shuffled));
    }

    #[test]
    fn random_posets_are_valid_and_seeded() {
        let mut rng = StdRng::seed_from_u64(7);
        let p = random_poset(8, 0.4, &mut rng);
        assert_eq!(p.len(), 8);
        let mut rng2 = StdRng::seed_from_u64(7);
        let q = random_poset(8, 0.4, &mut rng2);
        assert!(p.same_labeled_poset(&q));
    }
}
