//! Order-compressing maps: labellings of a poset onto a smaller target that
//! collapse interchangeable regions, with a verifier, factor extraction,
//! factor replacement, blow-ups, and an exhaustive search for all such maps.

use std::sync::Arc;

use serde_json::json;

use crate::error::{Error, Result};
use crate::grundy::Solver;
use crate::poset::{mask_iter, Mask, Poset};
use crate::position::Position;

/// A total labelling of `source` elements by `target` elements.
///
/// The labelling is a candidate until [`CompressionMap::verify`] has checked
/// the collapse conditions; operations that rely on those conditions refuse
/// unverified maps.
#[derive(Clone)]
pub struct CompressionMap {
    source: Arc<Poset>,
    target: Arc<Poset>,
    labels: Vec<usize>,
    verified: bool,
}

/// Witness that two equally-labelled elements cannot be collapsed: `z` is the
/// first element (condition checked in the fixed order 1, 2, 3) whose
/// relations to `x` and `y` disagree with the label structure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ViolationReport {
    pub x: usize,
    pub y: usize,
    pub z: usize,
    pub x_name: String,
    pub y_name: String,
    pub z_name: String,
    /// 1: below both but label not weakly below; 2: below neither but label
    /// strictly below; 3: below exactly one but labelled differently.
    pub condition: u8,
}

impl ViolationReport {
    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "x": self.x_name,
            "y": self.y_name,
            "z": self.z_name,
            "condition": self.condition,
        })
    }
}

impl std::fmt::Display for ViolationReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "elements {} and {} share a label but {} fails condition {}",
            self.x_name, self.y_name, self.z_name, self.condition
        )
    }
}

/// Result of running the verifier over a candidate labelling.
pub enum VerifyOutcome {
    Verified(CompressionMap),
    Rejected(ViolationReport),
}

impl CompressionMap {
    /// Builds a candidate map from per-element label indices
    /// (`labels[i]` = target index for source element `i`).
    pub fn from_indices(
        source: Arc<Poset>,
        target: Arc<Poset>,
        labels: Vec<usize>,
    ) -> Result<CompressionMap> {
        if labels.len() != source.len() {
            return Err(Error::PartialLabeling(format!(
                "{} labels for {} elements",
                labels.len(),
                source.len()
            )));
        }
        for (i, &q) in labels.iter().enumerate() {
            if q >= target.len() {
                return Err(Error::LabelNotInTarget(format!(
                    "element {} labelled with out-of-range index {}",
                    source.element_name(i),
                    q
                )));
            }
        }
        Ok(CompressionMap {
            source,
            target,
            labels,
            verified: false,
        })
    }

    /// Builds a candidate map from `(element, label)` name pairs. Every
    /// source element must appear exactly once.
    pub fn from_named<S: AsRef<str>>(
        source: Arc<Poset>,
        target: Arc<Poset>,
        pairs: &[(S, S)],
    ) -> Result<CompressionMap> {
        let mut labels = vec![usize::MAX; source.len()];
        for (elem, lab) in pairs {
            let i = source.index_of(elem.as_ref())?;
            let q = target
                .index_of(lab.as_ref())
                .map_err(|_| Error::LabelNotInTarget(lab.as_ref().to_string()))?;
            if labels[i] != usize::MAX {
                return Err(Error::PartialLabeling(format!(
                    "element {} labelled more than once",
                    elem.as_ref()
                )));
            }
            labels[i] = q;
        }
        if let Some(i) = labels.iter().position(|&q| q == usize::MAX) {
            return Err(Error::PartialLabeling(format!(
                "element {} has no label",
                source.element_name(i)
            )));
        }
        Ok(CompressionMap {
            source,
            target,
            labels,
            verified: false,
        })
    }

    pub fn source(&self) -> &Arc<Poset> {
        &self.source
    }

    pub fn target(&self) -> &Arc<Poset> {
        &self.target
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn label_of(&self, elem: usize) -> usize {
        self.labels[elem]
    }

    pub fn is_verified(&self) -> bool {
        self.verified
    }

    /// Elements of `source` carrying label `q`.
    pub fn fiber_mask(&self, q: usize) -> Mask {
        let mut m = 0;
        for (i, &lab) in self.labels.iter().enumerate() {
            if lab == q {
                m |= 1 << i;
            }
        }
        m
    }

    /// Checks the collapse conditions on every pair of equally-labelled
    /// elements (pairs `x = y` included): each remaining element must sit
    /// below both or below neither, with a label positioned accordingly.
    ///
    /// On failure the report names the first witness found, scanning pairs
    /// `(x, y)` with `x <= y` in index order and witnesses `z` in index
    /// order.
    pub fn verify(mut self) -> VerifyOutcome {
        let n = self.source.len();
        let tn = self.target.len();
        let full = self.source.full_mask();
        let mut label_mask = vec![0 as Mask; tn];
        for (i, &q) in self.labels.iter().enumerate() {
            label_mask[q] |= 1 << i;
        }
        // le_mask[q]: sources whose label is weakly below q in the target
        let mut le_mask = vec![0 as Mask; tn];
        let mut lt_mask = vec![0 as Mask; tn];
        for q in 0..tn {
            le_mask[q] = label_mask[q];
            for r in mask_iter(self.target.down_mask(q)) {
                le_mask[q] |= label_mask[r];
                lt_mask[q] |= label_mask[r];
            }
        }
        for x in 0..n {
            for y in x..n {
                if self.labels[x] != self.labels[y] {
                    continue;
                }
                let q = self.labels[x];
                let dx = self.source.down_mask(x);
                let dy = self.source.down_mask(y);
                let below_both = dx & dy;
                let below_one = dx ^ dy;
                let below_neither = full & !(dx | dy) & !(1 << x) & !(1 << y);
                let v1 = below_both & !le_mask[q];
                let v2 = below_neither & lt_mask[q];
                let v3 = below_one & !label_mask[q];
                let bad = v1 | v2 | v3;
                if bad != 0 {
                    let z = bad.trailing_zeros() as usize;
                    let zbit = 1 << z;
                    let condition = if v1 & zbit != 0 {
                        1
                    } else if v2 & zbit != 0 {
                        2
                    } else {
                        3
                    };
                    return VerifyOutcome::Rejected(ViolationReport {
                        x,
                        y,
                        z,
                        x_name: self.source.element_name(x).to_string(),
                        y_name: self.source.element_name(y).to_string(),
                        z_name: self.source.element_name(z).to_string(),
                        condition,
                    });
                }
            }
        }
        self.verified = true;
        VerifyOutcome::Verified(self)
    }

    /// Replays the three collapse conditions for one `(x, y, z)` triple, as
    /// independent confirmation of a reported violation. Returns the first
    /// failing condition number, or `None` if all three hold.
    pub fn check_triple(&self, x: usize, y: usize, z: usize) -> Option<u8> {
        if self.labels[x] != self.labels[y] || z == x || z == y {
            return None;
        }
        let q = self.labels[x];
        let zx = self.source.lt(z, x);
        let zy = self.source.lt(z, y);
        let lz = self.labels[z];
        if zx && zy && !self.target.le(lz, q) {
            return Some(1);
        }
        if !zx && !zy && self.target.lt(lz, q) {
            return Some(2);
        }
        if zx != zy && lz != q {
            return Some(3);
        }
        None
    }

    /// The same labelling restricted to the elements of `mask`, as a fresh
    /// unverified candidate over the induced subposet.
    pub fn restrict(&self, mask: Mask, name: &str) -> Result<CompressionMap> {
        let sub = self.source.induced(mask & self.source.full_mask(), name);
        let labels = mask_iter(mask & self.source.full_mask())
            .map(|i| self.labels[i])
            .collect();
        CompressionMap::from_indices(Arc::new(sub), self.target.clone(), labels)
    }

    fn require_verified(&self) -> Result<()> {
        if self.verified {
            Ok(())
        } else {
            Err(Error::NotVerified)
        }
    }
}

/// A verified map viewed as a decomposition of its source into fibers.
pub struct Factorization {
    map: CompressionMap,
}

impl Factorization {
    pub fn new(map: CompressionMap) -> Result<Factorization> {
        map.require_verified()?;
        Ok(Factorization { map })
    }

    pub fn map(&self) -> &CompressionMap {
        &self.map
    }

    pub fn source(&self) -> &Arc<Poset> {
        self.map.source()
    }

    pub fn target(&self) -> &Arc<Poset> {
        self.map.target()
    }

    pub fn fiber_mask(&self, q: usize) -> Mask {
        self.map.fiber_mask(q)
    }

    /// The fiber over target element `q` as a standalone poset; may be
    /// empty.
    pub fn factor(&self, q: usize) -> Result<Poset> {
        if q >= self.target().len() {
            return Err(Error::UnknownElement(q));
        }
        Ok(fiber_poset(&self.map, q))
    }

    /// All fibers in target index order.
    pub fn factors(&self) -> Result<Vec<Poset>> {
        (0..self.target().len()).map(|q| self.factor(q)).collect()
    }
}

/// Replaces the fiber over `alpha` with the poset `replacement`, rebuilding
/// the source so that the new elements relate to the rest exactly as the old
/// fiber did. Requires `alpha` maximal in the target and the old fiber to be
/// an up-set of the source, and re-verifies the rebuilt labelling.
pub fn replace_factor(
    fz: &Factorization,
    alpha: usize,
    replacement: &Poset,
) -> Result<(Arc<Poset>, CompressionMap)> {
    let target = fz.target();
    if alpha >= target.len() {
        return Err(Error::UnknownElement(alpha));
    }
    if !target.is_maximal(alpha) {
        return Err(Error::AlphaNotMaximal(
            target.element_name(alpha).to_string(),
        ));
    }
    let source = fz.source();
    let fiber = fz.fiber_mask(alpha);
    // the fiber must be an up-set: nothing outside it sits above any member
    for i in mask_iter(fiber) {
        if source.up_mask(i) & !fiber != 0 {
            return Err(Error::FactorNotUpSet);
        }
    }
    // a kept element sits below the new fiber iff its label sits below alpha;
    // when the old fiber is nonempty the observed relations must agree
    let mut below_fiber: Mask = 0;
    for k in mask_iter(source.full_mask() & !fiber) {
        let should = target.lt(fz.map().label_of(k), alpha);
        let above_k = source.up_mask(k) & fiber;
        if fiber != 0 && above_k != if should { fiber } else { 0 } {
            return Err(Error::InconsistentExternalRelations(
                source.element_name(k).to_string(),
            ));
        }
        if should {
            below_fiber |= 1 << k;
        }
    }
    let kept: Vec<usize> = mask_iter(source.full_mask() & !fiber).collect();
    let keep_count = kept.len();
    let total = keep_count + replacement.len();
    if total > crate::poset::MAX_ELEMENTS {
        return Err(Error::PosetTooLarge(total));
    }
    let mut old_to_new = vec![usize::MAX; source.len()];
    for (new, &old) in kept.iter().enumerate() {
        old_to_new[old] = new;
    }
    let mut names: Vec<String> = kept
        .iter()
        .map(|&i| source.element_name(i).to_string())
        .collect();
    names.extend(replacement.element_names().iter().cloned());
    let mut up = vec![0 as Mask; total];
    for (new, &old) in kept.iter().enumerate() {
        for j in mask_iter(source.up_mask(old) & !fiber) {
            up[new] |= 1 << old_to_new[j];
        }
        if below_fiber & (1 << old) != 0 {
            for j in 0..replacement.len() {
                up[new] |= 1 << (keep_count + j);
            }
        }
    }
    for j in 0..replacement.len() {
        up[keep_count + j] = replacement.up_mask(j) << keep_count;
    }
    let name = format!("{}_repl", source.name());
    let new_source = Arc::new(Poset::from_closure_unchecked(
        name,
        crate::poset::disambiguate(names),
        up,
    ));
    let mut labels = vec![usize::MAX; total];
    for (new, &old) in kept.iter().enumerate() {
        labels[new] = fz.map().label_of(old);
    }
    for j in 0..replacement.len() {
        labels[keep_count + j] = alpha;
    }
    let candidate = CompressionMap::from_indices(new_source.clone(), target.clone(), labels)?;
    match candidate.verify() {
        VerifyOutcome::Verified(map) => Ok((new_source, map)),
        VerifyOutcome::Rejected(_) => Err(Error::ResultNotCompressing),
    }
}

fn require_same_target(f: &CompressionMap, g: &CompressionMap) -> Result<()> {
    if f.target().same_labeled_poset(g.target()) {
        Ok(())
    } else {
        Err(Error::TargetMismatch)
    }
}

fn fiber_poset(map: &CompressionMap, q: usize) -> Poset {
    let name = format!("{}_{}", map.source().name(), map.target().element_name(q));
    map.source().induced(map.fiber_mask(q), &name)
}

/// For two verified maps onto the same target that agree on every fiber
/// except the one over maximal element `alpha`, compares the sources' game
/// values against the `alpha`-fiber values. The two comparisons must agree;
/// a mismatch is reported as an internal inconsistency. Returns
/// `(sources_equal, alpha_fibers_equal)`.
pub fn check_factor_equivalence(
    f: &CompressionMap,
    g: &CompressionMap,
    alpha: usize,
) -> Result<(bool, bool)> {
    f.require_verified()?;
    g.require_verified()?;
    require_same_target(f, g)?;
    let target = f.target();
    if alpha >= target.len() {
        return Err(Error::UnknownElement(alpha));
    }
    if !target.is_maximal(alpha) {
        return Err(Error::HypothesesNotMet(format!(
            "{} is not maximal in the target",
            target.element_name(alpha)
        )));
    }
    for q in 0..target.len() {
        if q == alpha {
            continue;
        }
        let pf = fiber_poset(f, q);
        let pg = fiber_poset(g, q);
        if !pf.same_labeled_poset(&pg) {
            return Err(Error::HypothesesNotMet(format!(
                "fibers over {} differ",
                target.element_name(q)
            )));
        }
    }
    let mut solver = Solver::new();
    let fa = solver.grundy(&Position::full(Arc::new(fiber_poset(f, alpha))));
    let ga = solver.grundy(&Position::full(Arc::new(fiber_poset(g, alpha))));
    let sf = solver.grundy(&Position::full(f.source().clone()));
    let sg = solver.grundy(&Position::full(g.source().clone()));
    let fibers_equal = fa == ga;
    let sources_equal = sf == sg;
    if fibers_equal != sources_equal {
        return Err(Error::InternalInconsistency(format!(
            "fiber values {} vs {} but source values {} vs {}",
            fa, ga, sf, sg
        )));
    }
    Ok((sources_equal, fibers_equal))
}

/// Verdict available when every fiber of a factorization has value zero.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ZeroFactorVerdict {
    /// Every fiber has value zero, so the whole source does too.
    PreviousPlayerWins,
    /// Some fiber is nonzero; nothing follows from this test alone.
    Unknown,
}

/// Classifies the source from fiber values alone: all fibers zero forces the
/// previous player to win on the source. The converse direction is not
/// available, so a nonzero fiber yields `Unknown`.
pub fn all_zero_factor_classify(fz: &Factorization) -> Result<ZeroFactorVerdict> {
    let mut solver = Solver::new();
    for q in 0..fz.target().len() {
        let factor = fz.factor(q)?;
        if solver.grundy(&Position::full(Arc::new(factor))).0 != 0 {
            return Ok(ZeroFactorVerdict::Unknown);
        }
    }
    // cross-check: the claim is a theorem, so the direct value must be zero
    let direct = solver.grundy(&Position::full(fz.source().clone()));
    if direct.0 != 0 {
        return Err(Error::InternalInconsistency(format!(
            "all fibers are zero but the source has value {}",
            direct
        )));
    }
    Ok(ZeroFactorVerdict::PreviousPlayerWins)
}

/// For two verified maps onto the same target whose fibers pairwise have
/// equal option value sets, checks that the sources' option value sets are
/// equal too. Returns `Ok(false)` if the fiber hypothesis fails; a source
/// mismatch under a satisfied hypothesis is an internal inconsistency.
pub fn check_option_set_preservation(f: &CompressionMap, g: &CompressionMap) -> Result<bool> {
    f.require_verified()?;
    g.require_verified()?;
    require_same_target(f, g)?;
    let mut solver = Solver::new();
    for q in 0..f.target().len() {
        let of = solver.option_value_set(&Position::full(Arc::new(fiber_poset(f, q))));
        let og = solver.option_value_set(&Position::full(Arc::new(fiber_poset(g, q))));
        if of != og {
            return Ok(false);
        }
    }
    let sf = solver.option_value_set(&Position::full(f.source().clone()));
    let sg = solver.option_value_set(&Position::full(g.source().clone()));
    if sf != sg {
        return Err(Error::InternalInconsistency(format!(
            "fiber option sets all agree but source sets are {} and {}",
            sf, sg
        )));
    }
    Ok(true)
}

/// Under the hypotheses of [`check_option_set_preservation`] plus matching
/// moves `a` (in `f`'s source) and `b` (in `g`'s source), both in the fiber
/// over `alpha` and leaving fibers of equal value, checks that the moves
/// leave whole positions of equal value.
pub fn check_move_correspondence(
    f: &CompressionMap,
    g: &CompressionMap,
    alpha: usize,
    a: usize,
    b: usize,
) -> Result<bool> {
    f.require_verified()?;
    g.require_verified()?;
    require_same_target(f, g)?;
    let target = f.target();
    if alpha >= target.len() {
        return Err(Error::UnknownElement(alpha));
    }
    if a >= f.source().len() {
        return Err(Error::UnknownElement(a));
    }
    if b >= g.source().len() {
        return Err(Error::UnknownElement(b));
    }
    if f.label_of(a) != alpha || g.label_of(b) != alpha {
        return Err(Error::HypothesesNotMet(
            "chosen moves are not in the named fiber".into(),
        ));
    }
    let mut solver = Solver::new();
    for q in 0..target.len() {
        let of = solver.option_value_set(&Position::full(Arc::new(fiber_poset(f, q))));
        let og = solver.option_value_set(&Position::full(Arc::new(fiber_poset(g, q))));
        if of != og {
            return Err(Error::HypothesesNotMet(format!(
                "fibers over {} have different option value sets",
                target.element_name(q)
            )));
        }
    }
    // fiber-local values after the moves must already agree
    let fa = fiber_after_move(f, alpha, a, &mut solver)?;
    let gb = fiber_after_move(g, alpha, b, &mut solver)?;
    if fa != gb {
        return Err(Error::HypothesesNotMet(format!(
            "moves leave fibers of different values {} and {}",
            fa, gb
        )));
    }
    let pa = Position::full(f.source().clone()).make_move(a)?;
    let pb = Position::full(g.source().clone()).make_move(b)?;
    let va = solver.grundy(&pa);
    let vb = solver.grundy(&pb);
    if va != vb {
        return Err(Error::InternalInconsistency(format!(
            "corresponding moves leave values {} and {}",
            va, vb
        )));
    }
    Ok(true)
}

fn fiber_after_move(
    map: &CompressionMap,
    q: usize,
    elem: usize,
    solver: &mut Solver,
) -> Result<crate::grundy::Nimber> {
    let fiber = Arc::new(fiber_poset(map, q));
    let local = fiber.index_of(map.source().element_name(elem))?;
    let pos = Position::full(fiber).make_move(local)?;
    Ok(solver.grundy(&pos))
}

/// Replaces target element `q` by `2n + 1` pairwise-incomparable copies,
/// each related to the rest exactly as `q` was. Copy `i` of element `e` is
/// named `e_i`.
pub fn blow_up(target: &Poset, q: usize, n: usize) -> Result<Poset> {
    if q >= target.len() {
        return Err(Error::UnknownElement(q));
    }
    let copies = 2 * n + 1;
    let total = target.len() - 1 + copies;
    if total > crate::poset::MAX_ELEMENTS {
        return Err(Error::PosetTooLarge(total));
    }
    let kept: Vec<usize> = (0..target.len()).filter(|&i| i != q).collect();
    let mut old_to_new = vec![usize::MAX; target.len()];
    for (new, &old) in kept.iter().enumerate() {
        old_to_new[old] = new;
    }
    let mut names: Vec<String> = kept
        .iter()
        .map(|&i| target.element_name(i).to_string())
        .collect();
    for c in 0..copies {
        names.push(format!("{}_{}", target.element_name(q), c));
    }
    let keep_count = kept.len();
    let mut up = vec![0 as Mask; total];
    for (new, &old) in kept.iter().enumerate() {
        for j in mask_iter(target.up_mask(old)) {
            if j == q {
                for c in 0..copies {
                    up[new] |= 1 << (keep_count + c);
                }
            } else {
                up[new] |= 1 << old_to_new[j];
            }
        }
    }
    let mut q_up: Mask = 0;
    for j in mask_iter(target.up_mask(q)) {
        q_up |= 1 << old_to_new[j];
    }
    for c in 0..copies {
        up[keep_count + c] = q_up;
    }
    let name = format!("{}_blowup", target.name());
    Ok(Poset::from_closure_unchecked(
        name,
        crate::poset::disambiguate(names),
        up,
    ))
}

/// Exhaustively finds every verified map from `p` onto some target with at
/// most `max_factors` elements, one per partition of `p`'s elements into
/// collapsible fibers. Targets are named `q0, q1, ...` in order of first
/// appearance; results come in a fixed order (lexicographic over the
/// per-element block assignments). Capped at 12 source elements.
pub fn find_compressions(p: &Arc<Poset>, max_factors: usize) -> Result<Vec<CompressionMap>> {
    const CAP: usize = 12;
    let n = p.len();
    if n > CAP {
        return Err(Error::PosetTooLargeForSearch(n, CAP));
    }
    if n == 0 {
        let target = Arc::new(Poset::from_covers::<&str>("Q", &[], &[])?);
        let map = CompressionMap::from_indices(p.clone(), target, Vec::new())?;
        return match map.verify() {
            VerifyOutcome::Verified(m) => Ok(vec![m]),
            VerifyOutcome::Rejected(_) => unreachable!("empty map always verifies"),
        };
    }
    let mut out = Vec::new();
    let mut blocks: Vec<Mask> = Vec::new();
    let mut relations: Vec<Vec<BlockRel>> = Vec::new();
    let mut assignment = vec![0usize; n];
    search_partitions(
        p,
        0,
        max_factors,
        &mut blocks,
        &mut relations,
        &mut assignment,
        &mut out,
    )?;
    Ok(out)
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum BlockRel {
    Below,
    Above,
    Incomparable,
}

/// Relation of element `e` to every member of `block`, if uniform.
fn uniform_relation(p: &Poset, e: usize, block: Mask) -> Option<BlockRel> {
    let above = p.up_mask(e) & block;
    let below = p.down_mask(e) & block;
    if above == block {
        Some(BlockRel::Below)
    } else if below == block {
        Some(BlockRel::Above)
    } else if above == 0 && below == 0 {
        Some(BlockRel::Incomparable)
    } else {
        None
    }
}

fn search_partitions(
    p: &Arc<Poset>,
    e: usize,
    max_factors: usize,
    blocks: &mut Vec<Mask>,
    relations: &mut Vec<Vec<BlockRel>>,
    assignment: &mut [usize],
    out: &mut Vec<CompressionMap>,
) -> Result<()> {
    if e == p.len() {
        out.push(build_map(p, blocks, relations, assignment)?);
        return Ok(());
    }
    for b in 0..blocks.len() {
        let placeable = (0..blocks.len()).all(|j| {
            j == b || uniform_relation(p, e, blocks[j]).is_some_and(|rel| rel == relations[b][j])
        });
        if placeable {
            blocks[b] |= 1 << e;
            assignment[e] = b;
            search_partitions(p, e + 1, max_factors, blocks, relations, assignment, out)?;
            blocks[b] &= !(1 << e);
        }
    }
    if blocks.len() < max_factors {
        let mut rels = Vec::with_capacity(blocks.len());
        let mut ok = true;
        for &block in blocks.iter() {
            match uniform_relation(p, e, block) {
                Some(rel) => rels.push(rel),
                None => {
                    ok = false;
                    break;
                }
            }
        }
        if ok {
            let b = blocks.len();
            for (row, &rel) in relations.iter_mut().zip(&rels) {
                row.push(rel.flip());
            }
            rels.push(BlockRel::Incomparable); // self entry, never read
            relations.push(rels);
            blocks.push(1 << e);
            assignment[e] = b;
            search_partitions(p, e + 1, max_factors, blocks, relations, assignment, out)?;
            blocks.pop();
            relations.pop();
            for row in relations.iter_mut().take(b) {
                row.pop();
            }
        }
    }
    Ok(())
}

impl BlockRel {
    fn flip(self) -> BlockRel {
        match self {
            BlockRel::Below => BlockRel::Above,
            BlockRel::Above => BlockRel::Below,
            BlockRel::Incomparable => BlockRel::Incomparable,
        }
    }
}

fn build_map(
    p: &Arc<Poset>,
    blocks: &[Mask],
    relations: &[Vec<BlockRel>],
    assignment: &[usize],
) -> Result<CompressionMap> {
    let k = blocks.len();
    let names: Vec<String> = (0..k).map(|i| format!("q{i}")).collect();
    let mut up = vec![0 as Mask; k];
    for (i, row) in relations.iter().enumerate() {
        for (j, &rel) in row.iter().enumerate() {
            if i != j && rel == BlockRel::Below {
                up[i] |= 1 << j;
            }
        }
    }
    let target = Arc::new(Poset::from_closure_unchecked(
        format!("{}_q", p.name()),
        names,
        up,
    ));
    let map = CompressionMap::from_indices(p.clone(), target, assignment.to_vec())?;
    match map.verify() {
        VerifyOutcome::Verified(m) => Ok(m),
        VerifyOutcome::Rejected(r) => Err(Error::InternalInconsistency(format!(
            "uniform partition failed verification: {}",
            r
        ))),
    }
}
