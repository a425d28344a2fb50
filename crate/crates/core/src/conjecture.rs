//! Checks of the product-decomposition conjecture: for suitable second
//! factors, every move in a lexicographic product leaves a value that
//! combines the per-factor values by ordinary place-value arithmetic.

use std::sync::Arc;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde_json::json;

use crate::canon::{enumerate_posets, random_poset};
use crate::error::{Error, Result};
use crate::format::serialize_poset;
use crate::grundy::{Nimber, Solver};
use crate::poset::{lex_index, lex_product, Poset, MAX_ELEMENTS};
use crate::position::Position;

/// Which second factors a sweep admits.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BReading {
    /// Game value a power of two and option values forming a full range.
    Nimber,
    /// A chain whose length is a power of two (a strict subset of `Nimber`).
    Chain,
}

/// How a sweep picks instances.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SampleMode {
    /// Every isomorphism class within the size bounds.
    Exhaustive,
    /// `count` seeded random pairs within the size bounds.
    Random { count: u64 },
}

/// An admitted instance: `b` has value `2^n` and is weakly canonical.
pub struct ConjectureInstance {
    pub a: Poset,
    pub b: Poset,
    pub n: u32,
    pub b_weakly_canonical: bool,
}

/// One move pair where the claimed identity failed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConjectureViolation {
    pub a_elem: usize,
    pub b_elem: usize,
    pub lhs: u32,
    pub rhs: u64,
}

/// Outcome of checking every move pair of one instance.
pub struct ConjectureResult {
    pub instance: ConjectureInstance,
    pub a_nimber: Nimber,
    pub b_nimber: Nimber,
    pub product_nimber: Nimber,
    pub checked_pairs: usize,
    pub violations: Vec<ConjectureViolation>,
    pub corollary_holds: bool,
}

impl ConjectureResult {
    pub fn holds(&self) -> bool {
        self.violations.is_empty() && self.corollary_holds
    }

    pub fn to_json(&self) -> serde_json::Value {
        let inst = &self.instance;
        json!({
            "a": serialize_poset(&inst.a),
            "b": serialize_poset(&inst.b),
            "n": inst.n,
            "bWeaklyCanonical": inst.b_weakly_canonical,
            "aNimber": self.a_nimber.0,
            "bNimber": self.b_nimber.0,
            "productNimber": self.product_nimber.0,
            "checkedPairs": self.checked_pairs,
            "violations": self.violations.iter().map(|v| json!({
                "aElem": inst.a.element_name(v.a_elem),
                "bElem": inst.b.element_name(v.b_elem),
                "lhs": v.lhs,
                "rhs": v.rhs,
            })).collect::<Vec<_>>(),
            "corollaryHolds": self.corollary_holds,
        })
    }
}

fn power_of_two_exponent(v: u32) -> Option<u32> {
    (v != 0 && v & (v - 1) == 0).then(|| v.trailing_zeros())
}

/// Game value, weak canonicity, and admissibility exponent of `b`.
fn admissibility(b: &Arc<Poset>, solver: &mut Solver) -> (Nimber, bool, Option<u32>) {
    let pos = Position::full(b.clone());
    let gb = solver.grundy(&pos);
    let wc = solver.is_weakly_canonical(&pos);
    let n = if wc {
        power_of_two_exponent(gb.0)
    } else {
        None
    };
    (gb, wc, n)
}

/// Checks the identity on every move pair of `a` and `b`, plus the product
/// value itself. `b` must be admissible: value exactly a power of two and
/// weakly canonical.
pub fn conjecture_check(a: &Poset, b: &Poset) -> Result<ConjectureResult> {
    let a = Arc::new(a.clone());
    let b = Arc::new(b.clone());
    let mut solver = Solver::new();
    let (gb, wc, n) = admissibility(&b, &mut solver);
    let Some(n) = n else {
        return Err(Error::InadmissibleB(if wc {
            format!("game value {gb} is not a power of two")
        } else {
            format!(
                "not weakly canonical: value {gb} with option set of size {}",
                solver.option_value_set(&Position::full(b.clone())).len()
            )
        }));
    };
    let product = Arc::new(lex_product(&a, &b)?);
    let ga = solver.grundy(&Position::full(a.clone()));
    let scale = 1u64 << n;
    let mut violations = Vec::new();
    let mut checked_pairs = 0;
    for i in 0..a.len() {
        let pa = Position::full(a.clone()).make_move(i)?;
        let ra = solver.grundy(&pa).0 as u64;
        for j in 0..b.len() {
            checked_pairs += 1;
            let moved = Position::full(product.clone()).make_move(lex_index(b.len(), i, j))?;
            let lhs = solver.grundy(&moved);
            let pb = Position::full(b.clone()).make_move(j)?;
            let rhs = scale * ra + solver.grundy(&pb).0 as u64;
            if lhs.0 as u64 != rhs {
                violations.push(ConjectureViolation {
                    a_elem: i,
                    b_elem: j,
                    lhs: lhs.0,
                    rhs,
                });
            }
        }
    }
    let product_nimber = solver.grundy(&Position::full(product));
    let corollary_holds = product_nimber.0 as u64 == ga.0 as u64 * gb.0 as u64;
    Ok(ConjectureResult {
        instance: ConjectureInstance {
            a: (*a).clone(),
            b: (*b).clone(),
            n,
            b_weakly_canonical: wc,
        },
        a_nimber: ga,
        b_nimber: gb,
        product_nimber,
        checked_pairs,
        violations,
        corollary_holds,
    })
}

#[derive(Clone, Copy, Debug)]
pub struct SweepParams {
    pub max_a: usize,
    pub max_b: usize,
    pub sample: SampleMode,
    pub seed: u64,
    pub reading: BReading,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SweepCounts {
    /// Pairs drawn or enumerated.
    pub pairs: u64,
    /// Pairs whose second factor passed the reading's gate.
    pub admissible: u64,
    /// Pairs dropped: gate failed or the product would exceed the size cap.
    pub skipped: u64,
    pub confirmed: u64,
    pub violated: u64,
}

pub struct SweepReport {
    pub params: SweepParams,
    pub counts: SweepCounts,
    pub counterexamples: Vec<ConjectureResult>,
}

impl SweepReport {
    pub fn to_json(&self) -> serde_json::Value {
        let sample = match self.params.sample {
            SampleMode::Exhaustive => json!("exhaustive"),
            SampleMode::Random { count } => json!({ "random": count }),
        };
        let reading = match self.params.reading {
            BReading::Nimber => "nimber",
            BReading::Chain => "chain",
        };
        json!({
            "params": {
                "maxA": self.params.max_a,
                "maxB": self.params.max_b,
                "sample": sample,
                "seed": self.params.seed,
                "bReading": reading,
            },
            "counts": {
                "pairs": self.counts.pairs,
                "admissible": self.counts.admissible,
                "skipped": self.counts.skipped,
                "confirmed": self.counts.confirmed,
                "violated": self.counts.violated,
            },
            "counterexamples": self.counterexamples.iter()
                .map(|r| r.to_json())
                .collect::<Vec<_>>(),
        })
    }
}

const EXHAUSTIVE_SIZE_CAP: usize = 6;

fn admitted(b: &Arc<Poset>, reading: BReading, solver: &mut Solver) -> bool {
    match reading {
        BReading::Nimber => admissibility(b, solver).2.is_some(),
        BReading::Chain => b.is_chain() && power_of_two_exponent(b.len() as u32).is_some(),
    }
}

/// Runs the check over many instances; every violation is kept in the
/// report with its instances embedded in document form for replay.
pub fn conjecture_sweep(params: &SweepParams) -> Result<SweepReport> {
    if params.max_a == 0 || params.max_b == 0 {
        return Err(Error::BadParameter(
            "sweep size bounds must be at least 1".into(),
        ));
    }
    let mut counts = SweepCounts::default();
    let mut counterexamples = Vec::new();
    let mut run_pair = |a: &Poset, b: &Arc<Poset>, solver: &mut Solver| -> Result<()> {
        counts.pairs += 1;
        if a.len() * b.len() > MAX_ELEMENTS || !admitted(b, params.reading, solver) {
            counts.skipped += 1;
            return Ok(());
        }
        counts.admissible += 1;
        let result = conjecture_check(a, b)?;
        if result.holds() {
            counts.confirmed += 1;
        } else {
            counts.violated += 1;
            counterexamples.push(result);
        }
        Ok(())
    };
    let mut solver = Solver::new();
    match params.sample {
        SampleMode::Exhaustive => {
            let cap = EXHAUSTIVE_SIZE_CAP;
            if params.max_a > cap || params.max_b > cap {
                return Err(Error::PosetTooLargeForSearch(
                    params.max_a.max(params.max_b),
                    cap,
                ));
            }
            for nb in 1..=params.max_b {
                for b in enumerate_posets(nb) {
                    let b = Arc::new(b);
                    for na in 1..=params.max_a {
                        for a in enumerate_posets(na) {
                            run_pair(&a, &b, &mut solver)?;
                        }
                    }
                }
            }
        }
        SampleMode::Random { count } => {
            let mut rng = StdRng::seed_from_u64(params.seed);
            for _ in 0..count {
                let na = rng.gen_range(1..=params.max_a);
                let nb = rng.gen_range(1..=params.max_b);
                let da = rng.gen_range(0.15..0.85);
                let db = rng.gen_range(0.15..0.85);
                let a = random_poset(na, da, &mut rng);
                let b = Arc::new(random_poset(nb, db, &mut rng));
                run_pair(&a, &b, &mut solver)?;
            }
        }
    }
    Ok(SweepReport {
        params: *params,
        counts,
        counterexamples,
    })
}
