//! Deciding whether a class is a `(-1)` class.
//!
//! [`classify_minus_one`] runs the degree-reduction loop: while the class is
//! not an exceptional divisor, apply the Cremona step at the `n + 1` largest
//! multiplicities. A numerical `(-1)` class that is effective reaches an
//! exceptional class this way; the guards name the first obstruction hit
//! otherwise. [`pairing_obstruction`] is the independent numerical test: a
//! `(-1)` class of smaller degree pairing negatively with the input.

use serde::{Deserialize, Serialize};

use crate::cremona::{
    apply_positions, excess, largest_positions, multiplicity_order, noether_indices, IndexSet,
    WeylWord,
};
use crate::error::{add, mul, sub, Error, Result};
use crate::lattice::{adeg, mukai_pairing, DivisorClass};
use crate::orbit::{enumerate, OrbitTable};

/// Default iteration budget for [`base_locus_peel`].
pub const DEFAULT_PEEL_BUDGET: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Verdict {
    MinusOneClass,
    NotNumerical,
    NegativeMultiplicity,
    MultiplicityExceedsDegree,
    StuckNoNoetherSet,
    DegenerateDegree,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClassificationResult {
    pub verdict: Verdict,
    /// Present iff accepted; `apply_word(terminal, witness)` is the input.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<WeylWord>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub terminal: Option<DivisorClass>,
    /// Number of Cremona steps taken.
    pub steps: usize,
    /// The class the loop stopped at.
    pub reached: DivisorClass,
}

impl ClassificationResult {
    pub fn is_accepted(&self) -> bool {
        self.verdict == Verdict::MinusOneClass
    }
}

/// `(n-1)d² - Σ m_i² = -1` and `(n+1)d - Σ m_i = 1`.
pub fn numeric_minus_one(dc: &DivisorClass) -> Result<bool> {
    Ok(mukai_pairing(dc, dc)? == -1 && adeg(dc)? == 1)
}

pub fn classify_minus_one(dc: &DivisorClass) -> Result<ClassificationResult> {
    let n = dc.n();
    let mut current = dc.clone();
    let mut applied: Vec<IndexSet> = Vec::new();

    let finish = |verdict: Verdict, current: DivisorClass, applied: Vec<IndexSet>| {
        let accepted = verdict == Verdict::MinusOneClass;
        ClassificationResult {
            verdict,
            steps: applied.len(),
            witness: accepted.then(|| WeylWord::new(applied)),
            terminal: accepted.then(|| current.clone()),
            reached: current,
        }
    };

    loop {
        // a hyperplane through n points is terminal only when no Cremona step exists
        if current.is_exceptional()
            || (current.is_hyperplane_through_n_points() && current.s() < n + 1)
        {
            return Ok(finish(Verdict::MinusOneClass, current, applied));
        }
        let verdict = if !numeric_minus_one(&current)? {
            Some(Verdict::NotNumerical)
        } else if current.m().iter().any(|&x| x < 0) {
            Some(Verdict::NegativeMultiplicity)
        } else if current.m().iter().any(|&x| x > current.d()) {
            Some(Verdict::MultiplicityExceedsDegree)
        } else if current.d() <= 0 {
            Some(Verdict::DegenerateDegree)
        } else {
            None
        };
        if let Some(v) = verdict {
            return Ok(finish(v, current, applied));
        }
        let Some(set) = noether_indices(&current)? else {
            return Ok(finish(Verdict::StuckNoNoetherSet, current, applied));
        };
        current = apply_positions(&current, set.indices())?;
        applied.push(set);
    }
}

/// A `(-1)` class pairing negatively with a given class.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Obstruction {
    pub obstructor: DivisorClass,
    pub pairing: i64,
    /// `-pairing`, the multiplicity with which the obstructor sits in the base locus.
    pub k: i64,
}

/// Searches a precomputed census for negatively pairing `(-1)` classes.
///
/// Entries are scanned in census order (degree, then multiplicities). Within
/// one entry the permutation aligning its largest multiplicities with the
/// largest multiplicities of the input is chosen; by the rearrangement
/// inequality that permutation has the most negative pairing.
#[derive(Debug, Clone)]
pub struct ObstructionSearch {
    table: OrbitTable,
}

impl ObstructionSearch {
    pub fn new(n: usize, s: usize, max_degree: i64) -> Result<Self> {
        Ok(Self {
            table: enumerate(n, s, max_degree.max(0))?,
        })
    }

    pub fn from_table(table: OrbitTable) -> Self {
        Self { table }
    }

    pub fn table(&self) -> &OrbitTable {
        &self.table
    }

    /// First `(-1)` class `F` with `0 < deg F < min(deg D, max_degree + 1)`, or
    /// exceptional, such that `⟨D, F⟩ < 0`.
    pub fn find(&self, dc: &DivisorClass, max_degree: i64) -> Result<Option<Obstruction>> {
        if dc.n() != self.table.n {
            return Err(Error::DimensionMismatch {
                left: dc.n(),
                right: self.table.n,
            });
        }
        if dc.s() != self.table.s {
            return Err(Error::Precondition(format!(
                "census is for s = {}, class has s = {}",
                self.table.s,
                dc.s()
            )));
        }
        let limit = dc.d().min(max_degree.saturating_add(1));
        let order = multiplicity_order(dc);
        let n1 = dc.n() as i64 - 1;
        for entry in &self.table.entries {
            if entry.d != 0 && entry.d >= limit {
                continue;
            }
            let mut dot: i64 = 0;
            for (&pos, &f) in order.iter().zip(&entry.m) {
                dot = add(dot, mul(dc.multiplicity(pos), f)?)?;
            }
            let pairing = sub(mul(mul(n1, dc.d())?, entry.d)?, dot)?;
            if pairing < 0 {
                let mut m = vec![0; dc.s()];
                for (&pos, &f) in order.iter().zip(&entry.m) {
                    m[pos - 1] = f;
                }
                let obstructor = DivisorClass::new(dc.n(), entry.d, m)?;
                debug_assert_eq!(mukai_pairing(dc, &obstructor), Ok(pairing));
                return Ok(Some(Obstruction {
                    obstructor,
                    pairing,
                    k: -pairing,
                }));
            }
        }
        Ok(None)
    }
}

/// Looks for a `(-1)` class of degree below `min(deg D, max_degree + 1)`
/// (exceptional classes always included) pairing negatively with `dc`.
pub fn pairing_obstruction(dc: &DivisorClass, max_degree: i64) -> Result<Option<Obstruction>> {
    if max_degree < 0 {
        return Err(Error::Precondition("max_degree must be >= 0".into()));
    }
    if dc.s() == 0 {
        return Ok(None);
    }
    let bound = (dc.d() - 1).min(max_degree).max(0);
    ObstructionSearch::new(dc.n(), dc.s(), bound)?.find(dc, max_degree)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PeelComponent {
    pub obstructor: DivisorClass,
    pub multiplicity: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PeelResult {
    pub components: Vec<PeelComponent>,
    pub residual: DivisorClass,
    /// True when the iteration budget ran out before the obstructions did.
    pub exhausted: bool,
}

impl PeelResult {
    /// `residual + Σ multiplicity · obstructor`.
    pub fn recompose(&self) -> Result<DivisorClass> {
        self.components
            .iter()
            .try_fold(self.residual.clone(), |acc, c| {
                acc.checked_add(&c.obstructor.checked_scale(c.multiplicity)?)
            })
    }
}

/// Repeatedly subtracts `k_F · F` for an obstruction `⟨D, F⟩ = -k_F < 0`.
pub fn base_locus_peel(
    dc: &DivisorClass,
    max_degree: i64,
    max_iterations: usize,
) -> Result<PeelResult> {
    if max_iterations == 0 {
        return Err(Error::Precondition("max_iterations must be >= 1".into()));
    }
    if max_degree < 0 {
        return Err(Error::Precondition("max_degree must be >= 0".into()));
    }
    let mut residual = dc.clone();
    let mut components = Vec::new();
    if dc.s() == 0 {
        return Ok(PeelResult {
            components,
            residual,
            exhausted: false,
        });
    }
    // subtracting classes of non-negative degree never raises the degree
    let search = ObstructionSearch::new(dc.n(), dc.s(), (dc.d() - 1).min(max_degree).max(0))?;
    for _ in 0..max_iterations {
        match search.find(&residual, max_degree)? {
            None => {
                return Ok(PeelResult {
                    components,
                    residual,
                    exhausted: false,
                })
            }
            Some(ob) => {
                residual = residual.checked_sub(&ob.obstructor.checked_scale(ob.k)?)?;
                components.push(PeelComponent {
                    obstructor: ob.obstructor,
                    multiplicity: ob.k,
                });
            }
        }
    }
    let exhausted = search.find(&residual, max_degree)?.is_some();
    Ok(PeelResult {
        components,
        residual,
        exhausted,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ReduceStatus {
    /// The maximal `(n+1)`-subset has non-positive excess.
    Reduced,
    /// The degree went negative; the input cannot be effective.
    NegativeDegree,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReduceOutcome {
    pub class: DivisorClass,
    /// `apply_word(input, word) == class`.
    pub word: WeylWord,
    pub status: ReduceStatus,
}

/// Greedy Cremona reduction at the maximal multiplicities while the excess is positive.
pub fn cremona_reduce(dc: &DivisorClass) -> Result<ReduceOutcome> {
    reduce_until(dc, |_| false).map(|(outcome, _)| outcome)
}

/// Runs the reduction loop, stopping early when `stop` holds for the current class.
/// The flag reports whether `stop` fired.
fn reduce_until(
    dc: &DivisorClass,
    stop: impl Fn(&DivisorClass) -> bool,
) -> Result<(ReduceOutcome, bool)> {
    let n = dc.n();
    let mut current = dc.clone();
    let mut applied: Vec<IndexSet> = Vec::new();
    let done = |class: DivisorClass, mut applied: Vec<IndexSet>, status, stopped| {
        applied.reverse();
        Ok((
            ReduceOutcome {
                class,
                word: WeylWord::new(applied),
                status,
            },
            stopped,
        ))
    };
    loop {
        if stop(&current) {
            return done(current, applied, ReduceStatus::Reduced, true);
        }
        if current.s() < n + 1 {
            return done(current, applied, ReduceStatus::Reduced, false);
        }
        let set = IndexSet::new(largest_positions(&current, n + 1), n, current.s())?;
        if excess(&current, &set)? <= 0 {
            return done(current, applied, ReduceStatus::Reduced, false);
        }
        current = apply_positions(&current, set.indices())?;
        applied.push(set);
        if current.d() < 0 {
            return done(current, applied, ReduceStatus::NegativeDegree, false);
        }
    }
}

/// Degree one with at least `n + 1` unit multiplicities: a hyperplane through
/// `n + 1` general points, which cannot exist.
pub fn is_dependent_hyperplane_shape(dc: &DivisorClass) -> bool {
    dc.d() == 1 && dc.m().iter().filter(|&&x| x == 1).count() > dc.n()
}

/// For `d ≥ m_i ≥ 0`, `⟨D,D⟩ = r ∈ {-4,-3,-2}` and `adeg D = -2 - r`: reduces
/// `D` and reports whether the hyperplane-through-`n+1`-points shape appears.
pub fn dolgachev_shape_check(dc: &DivisorClass) -> Result<bool> {
    if dc.m().iter().any(|&x| x < 0 || x > dc.d()) {
        return Err(Error::Precondition("requires d >= m_i >= 0".into()));
    }
    let r = mukai_pairing(dc, dc)?;
    if !(-4..=-2).contains(&r) {
        return Err(Error::Precondition(format!(
            "self-pairing {r} outside {{-4,-3,-2}}"
        )));
    }
    let a = adeg(dc)?;
    if a != -2 - r {
        return Err(Error::Precondition(format!(
            "adeg {a} differs from -2 - ({r})"
        )));
    }
    reduce_until(dc, is_dependent_hyperplane_shape).map(|(_, hit)| hit)
}
