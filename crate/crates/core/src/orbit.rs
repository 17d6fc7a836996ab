//! Bounded enumeration of the Weyl orbit of an exceptional divisor, which is
//! exactly the set of `(-1)` classes on `X_{n,s}`.
//!
//! Classes are stored up to permutation of the points: a [`CanonicalForm`]
//! keeps the multiplicities sorted in descending order and an [`OrbitEntry`]
//! records how many distinct classes it stands for.

use std::collections::{BTreeMap, HashSet};
use std::io::{BufRead, Write};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::classify::{classify_minus_one, numeric_minus_one, Verdict};
use crate::cremona::apply_positions;
use crate::error::{Error, Result};
use crate::lattice::DivisorClass;

/// Default cap on the number of canonical forms held during a census.
pub const DEFAULT_MAX_ENTRIES: usize = 5_000_000;

/// A class up to permutation of its multiplicities.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalForm {
    pub d: i64,
    pub m: Vec<i64>,
}

impl CanonicalForm {
    pub fn of(dc: &DivisorClass) -> Self {
        let mut m = dc.m().to_vec();
        m.sort_unstable_by(|a, b| b.cmp(a));
        Self { d: dc.d(), m }
    }

    pub fn to_class(&self, n: usize) -> Result<DivisorClass> {
        DivisorClass::new(n, self.d, self.m.clone())
    }

    /// Number of distinct classes obtained by permuting the multiplicities.
    pub fn permutation_count(&self) -> Result<u64> {
        let mut count: u128 = 1;
        let mut remaining = self.m.len() as u128;
        for (_, group) in self.m.iter().copied().chunk_by_value() {
            let c = group as u128;
            // multinomial as a product of binomials binom(remaining, c)
            let mut b: u128 = 1;
            for i in 0..c {
                b = b * (remaining - i) / (i + 1);
            }
            count = count
                .checked_mul(b)
                .filter(|&v| v <= u64::MAX as u128)
                .ok_or(Error::Overflow("permutation count"))?;
            remaining -= c;
        }
        Ok(count as u64)
    }
}

trait ChunkByValue {
    fn chunk_by_value(self) -> Vec<(i64, usize)>;
}

impl<I: Iterator<Item = i64>> ChunkByValue for I {
    /// Run-length encoding of consecutive equal values.
    fn chunk_by_value(self) -> Vec<(i64, usize)> {
        let mut out: Vec<(i64, usize)> = Vec::new();
        for v in self {
            match out.last_mut() {
                Some((last, c)) if *last == v => *c += 1,
                _ => out.push((v, 1)),
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitEntry {
    pub d: i64,
    pub m: Vec<i64>,
    pub perms: u64,
}

impl OrbitEntry {
    pub fn form(&self) -> CanonicalForm {
        CanonicalForm {
            d: self.d,
            m: self.m.clone(),
        }
    }

    /// Every distinct class in this entry's permutation class.
    pub fn classes(&self, n: usize) -> Result<Vec<DivisorClass>> {
        distinct_permutations(&self.m)
            .into_iter()
            .map(|m| DivisorClass::new(n, self.d, m))
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusHeader {
    pub n: usize,
    pub s: usize,
    pub max_degree: i64,
    pub complete: bool,
}

/// Census of `(-1)` classes on `X_{n,s}` with degree at most `max_degree`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitTable {
    pub n: usize,
    pub s: usize,
    pub max_degree: i64,
    /// False when the entry budget was exhausted before the closure finished.
    pub complete: bool,
    /// Sorted by `(d, m)` with `m` compared lexicographically.
    pub entries: Vec<OrbitEntry>,
}

impl OrbitTable {
    pub fn total(&self) -> u64 {
        self.entries.iter().map(|e| e.perms).sum()
    }

    pub fn contains(&self, dc: &DivisorClass) -> bool {
        if dc.n() != self.n || dc.s() != self.s {
            return false;
        }
        let form = CanonicalForm::of(dc);
        self.entries
            .binary_search_by(|e| (e.d, &e.m).cmp(&(form.d, &form.m)))
            .is_ok()
    }

    pub fn header(&self) -> CensusHeader {
        CensusHeader {
            n: self.n,
            s: self.s,
            max_degree: self.max_degree,
            complete: self.complete,
        }
    }

    /// Writes the census as JSON Lines: header first, then one entry per line.
    pub fn write_jsonl<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        serde_json::to_writer(&mut out, &self.header())?;
        out.write_all(b"\n")?;
        for e in &self.entries {
            serde_json::to_writer(&mut out, e)?;
            out.write_all(b"\n")?;
        }
        Ok(())
    }

    pub fn read_jsonl<R: BufRead>(input: R) -> Result<Self> {
        let census = |msg: String| Error::Census(msg);
        let mut lines = input.lines();
        let header_line = lines
            .next()
            .ok_or_else(|| census("empty file".into()))?
            .map_err(|e| census(e.to_string()))?;
        let header: CensusHeader =
            serde_json::from_str(&header_line).map_err(|e| census(format!("bad header: {e}")))?;
        if header.n < 2 {
            return Err(Error::InvalidDimension(header.n));
        }
        let mut entries = Vec::new();
        for (lineno, line) in lines.enumerate() {
            let line = line.map_err(|e| census(e.to_string()))?;
            if line.trim().is_empty() {
                continue;
            }
            let entry: OrbitEntry = serde_json::from_str(&line)
                .map_err(|e| census(format!("line {}: {e}", lineno + 2)))?;
            if entry.m.len() != header.s {
                return Err(census(format!(
                    "line {}: expected {} multiplicities",
                    lineno + 2,
                    header.s
                )));
            }
            entries.push(entry);
        }
        Ok(Self {
            n: header.n,
            s: header.s,
            max_degree: header.max_degree,
            complete: header.complete,
            entries,
        })
    }
}

/// Census of the Weyl orbit of `E_1` up to degree `max_degree`.
pub fn enumerate(n: usize, s: usize, max_degree: i64) -> Result<OrbitTable> {
    enumerate_with_budget(n, s, max_degree, DEFAULT_MAX_ENTRIES)
}

/// Breadth-first closure over canonical forms.
///
/// Every `(-1)` class reduces to an exceptional class along a path of strictly
/// decreasing degree, so pruning images of degree above `max_degree` loses
/// nothing below the bound.
pub fn enumerate_with_budget(
    n: usize,
    s: usize,
    max_degree: i64,
    max_entries: usize,
) -> Result<OrbitTable> {
    if n < 2 {
        return Err(Error::InvalidDimension(n));
    }
    if s == 0 {
        return Err(Error::Precondition("the census needs s >= 1".into()));
    }
    if max_degree < 0 {
        return Err(Error::Precondition("max_degree must be >= 0".into()));
    }

    let mut seeds = Vec::new();
    let mut e = vec![0; s];
    e[s - 1] = -1;
    seeds.push(CanonicalForm { d: 0, m: e });
    if s >= n && max_degree >= 1 {
        let mut m = vec![0; s];
        m[..n].fill(1);
        seeds.push(CanonicalForm { d: 1, m });
    }

    let mut seen: HashSet<CanonicalForm> = seeds.iter().cloned().collect();
    let mut frontier = seeds;
    let mut complete = true;

    while !frontier.is_empty() {
        if s < n + 1 {
            break;
        }
        let images: Vec<CanonicalForm> = frontier
            .par_iter()
            .map(|f| neighbours(n, f, max_degree))
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .flatten()
            .collect();
        let mut next = Vec::new();
        for img in images {
            if seen.len() >= max_entries {
                complete = false;
                break;
            }
            if seen.insert(img.clone()) {
                next.push(img);
            }
        }
        if !complete {
            break;
        }
        next.sort();
        frontier = next;
    }

    let mut forms: Vec<CanonicalForm> = seen.into_iter().collect();
    forms.sort();
    let entries = forms
        .into_iter()
        .map(|f| {
            Ok(OrbitEntry {
                perms: f.permutation_count()?,
                d: f.d,
                m: f.m,
            })
        })
        .collect::<Result<_>>()?;
    Ok(OrbitTable {
        n,
        s,
        max_degree,
        complete,
        entries,
    })
}

/// Cremona images of `form` at every `(n+1)`-subset, up to permutation.
///
/// Subsets of a sorted vector that pick the same multiset of values give the
/// same canonical image, so only one subset per value pattern is tried.
fn neighbours(n: usize, form: &CanonicalForm, max_degree: i64) -> Result<Vec<CanonicalForm>> {
    let groups = form.m.iter().copied().chunk_by_value();
    let mut starts = Vec::with_capacity(groups.len());
    let mut pos = 0;
    for &(_, c) in &groups {
        starts.push(pos);
        pos += c;
    }
    let class = form.to_class(n)?;
    let mut out = Vec::new();
    let mut picks = vec![0usize; groups.len()];
    choose_from_groups(&groups, 0, n + 1, &mut picks, &mut |picks| {
        let positions: Vec<usize> = picks
            .iter()
            .enumerate()
            .flat_map(|(g, &c)| starts[g] + 1..=starts[g] + c)
            .collect();
        let img = apply_positions(&class, &positions)?;
        if (0..=max_degree).contains(&img.d()) {
            out.push(CanonicalForm::of(&img));
        }
        Ok(())
    })?;
    Ok(out)
}

fn choose_from_groups(
    groups: &[(i64, usize)],
    g: usize,
    remaining: usize,
    picks: &mut Vec<usize>,
    visit: &mut dyn FnMut(&[usize]) -> Result<()>,
) -> Result<()> {
    if remaining == 0 {
        return visit(picks);
    }
    if g == groups.len() {
        return Ok(());
    }
    let avail: usize = groups[g..].iter().map(|&(_, c)| c).sum();
    if avail < remaining {
        return Ok(());
    }
    for c in (0..=groups[g].1.min(remaining)).rev() {
        picks[g] = c;
        choose_from_groups(groups, g + 1, remaining - c, picks, visit)?;
    }
    picks[g] = 0;
    Ok(())
}

/// Class counts per degree, permutations included.
pub fn degree_histogram(table: &OrbitTable) -> BTreeMap<i64, u64> {
    let mut hist = BTreeMap::new();
    for e in &table.entries {
        *hist.entry(e.d).or_insert(0) += e.perms;
    }
    hist
}

/// Entries of `table` that fail the numeric conditions or the decision procedure.
pub fn failing_entries(table: &OrbitTable) -> Vec<OrbitEntry> {
    table
        .entries
        .par_iter()
        .filter(|e| !entry_is_minus_one(table.n, e))
        .cloned()
        .collect()
}

fn entry_is_minus_one(n: usize, e: &OrbitEntry) -> bool {
    let Ok(dc) = DivisorClass::new(n, e.d, e.m.clone()) else {
        return false;
    };
    matches!(numeric_minus_one(&dc), Ok(true))
        && matches!(classify_minus_one(&dc), Ok(r) if r.verdict == Verdict::MinusOneClass)
}

/// True when every entry is a `(-1)` class.
pub fn verify_table(table: &OrbitTable) -> bool {
    failing_entries(table).is_empty()
}

/// All distinct orderings of `values`, in lexicographic order.
pub fn distinct_permutations(values: &[i64]) -> Vec<Vec<i64>> {
    let mut cur = values.to_vec();
    cur.sort_unstable();
    let mut out = vec![cur.clone()];
    while next_permutation(&mut cur) {
        out.push(cur.clone());
    }
    out
}

fn next_permutation(v: &mut [i64]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}
