//! Standard Cremona transformations, the simple reflections generating the
//! Weyl group `W_{n,s}`, Weyl words and the Noether index selector.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{add, mul, sub, Error, Result};
use crate::lattice::DivisorClass;

/// A set of `n + 1` distinct 1-based point indices, stored in increasing order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct IndexSet(Vec<usize>);

impl IndexSet {
    /// Validates `indices` for `X_{n,s}`: exactly `n + 1` distinct values in `1..=s`.
    pub fn new(mut indices: Vec<usize>, n: usize, s: usize) -> Result<Self> {
        indices.sort_unstable();
        if indices.len() != n + 1 {
            return Err(Error::InvalidIndexSet(format!(
                "expected {} indices, got {}",
                n + 1,
                indices.len()
            )));
        }
        if indices.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidIndexSet("repeated index".into()));
        }
        if let Some(&bad) = indices.iter().find(|&&i| i == 0 || i > s) {
            return Err(Error::InvalidIndexSet(format!(
                "index {bad} outside 1..={s}"
            )));
        }
        Ok(Self(indices))
    }

    /// `{1, ..., n+1}`.
    pub fn first(n: usize, s: usize) -> Result<Self> {
        Self::new((1..=n + 1).collect(), n, s)
    }

    pub fn indices(&self) -> &[usize] {
        &self.0
    }

    pub fn contains(&self, i: usize) -> bool {
        self.0.binary_search(&i).is_ok()
    }

    /// Re-checks this set against a class's `(n, s)`.
    pub fn check_for(&self, dc: &DivisorClass) -> Result<()> {
        Self::new(self.0.clone(), dc.n(), dc.s()).map(|_| ())
    }
}

impl fmt::Display for IndexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|i| i.to_string()).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

/// A composition `Cr_{I_1} ∘ Cr_{I_2} ∘ ... ∘ Cr_{I_t}`; the last step is applied first.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct WeylWord {
    steps: Vec<IndexSet>,
}

impl WeylWord {
    pub fn new(steps: Vec<IndexSet>) -> Self {
        Self { steps }
    }

    pub fn identity() -> Self {
        Self::default()
    }

    pub fn steps(&self) -> &[IndexSet] {
        &self.steps
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// Parses the JSON array-of-arrays form, validating every step for `X_{n,s}`.
    pub fn from_json(text: &str, n: usize, s: usize) -> Result<Self> {
        let raw: Vec<Vec<usize>> = serde_json::from_str(text)
            .map_err(|e| Error::InvalidIndexSet(format!("bad word JSON: {e}")))?;
        let steps = raw
            .into_iter()
            .map(|v| IndexSet::new(v, n, s))
            .collect::<Result<_>>()?;
        Ok(Self { steps })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("index sets serialize")
    }
}

/// `k = Σ_{i∈I} m_i - (n-1)d`.
pub fn excess(dc: &DivisorClass, set: &IndexSet) -> Result<i64> {
    set.check_for(dc)?;
    excess_unchecked(dc, set.indices())
}

fn excess_unchecked(dc: &DivisorClass, indices: &[usize]) -> Result<i64> {
    let mut acc = 0i64;
    for &i in indices {
        acc = add(acc, dc.multiplicity(i))?;
    }
    sub(acc, mul(dc.n() as i64 - 1, dc.d())?)
}

/// `Cr_I(D) = (d-k)H - Σ_{i∈I}(m_i-k)E_i - Σ_{i∉I} m_i E_i`.
pub fn cremona_apply(dc: &DivisorClass, set: &IndexSet) -> Result<DivisorClass> {
    if dc.s() < dc.n() + 1 {
        return Err(Error::TooFewPoints {
            n: dc.n(),
            s: dc.s(),
        });
    }
    set.check_for(dc)?;
    apply_positions(dc, set.indices())
}

/// Applies the Cremona step at already-validated 1-based positions.
pub(crate) fn apply_positions(dc: &DivisorClass, indices: &[usize]) -> Result<DivisorClass> {
    let k = excess_unchecked(dc, indices)?;
    let mut m = dc.m().to_vec();
    for &i in indices {
        m[i - 1] = sub(m[i - 1], k)?;
    }
    DivisorClass::new(dc.n(), sub(dc.d(), k)?, m)
}

/// Simple reflection `T_i`: a transposition of `m_i, m_{i+1}` for `i < s`,
/// the Cremona step at `{1, ..., n+1}` for `i = s`.
pub fn simple_reflection(dc: &DivisorClass, i: usize) -> Result<DivisorClass> {
    let s = dc.s();
    if i == 0 || i > s {
        return Err(Error::GeneratorOutOfRange { index: i, s });
    }
    if i < s {
        let (n, d, mut m) = dc.clone().into_parts();
        m.swap(i - 1, i);
        return DivisorClass::new(n, d, m);
    }
    if s < dc.n() + 1 {
        return Err(Error::TooFewPoints { n: dc.n(), s });
    }
    cremona_apply(dc, &IndexSet::first(dc.n(), s)?)
}

/// Applies `w` to `dc`, rightmost step first.
pub fn apply_word(dc: &DivisorClass, word: &WeylWord) -> Result<DivisorClass> {
    word.steps
        .iter()
        .rev()
        .try_fold(dc.clone(), |acc, set| cremona_apply(&acc, set))
}

/// Every `Cr_I` is an involution, so the inverse is the reversed word.
pub fn invert_word(word: &WeylWord) -> WeylWord {
    WeylWord {
        steps: word.steps.iter().rev().cloned().collect(),
    }
}

/// 1-based indices of the `count` largest multiplicities, ties to the smaller index.
/// Positions by decreasing multiplicity, ties by increasing index.
pub(crate) fn multiplicity_order(dc: &DivisorClass) -> Vec<usize> {
    let mut order: Vec<usize> = (1..=dc.s()).collect();
    order.sort_by_key(|&i| (std::cmp::Reverse(dc.multiplicity(i)), i));
    order
}

/// The `count` largest multiplicities' positions, in increasing index order.
pub(crate) fn largest_positions(dc: &DivisorClass, count: usize) -> Vec<usize> {
    let mut order = multiplicity_order(dc);
    order.truncate(count);
    order.sort_unstable();
    order
}

/// The `n + 1` largest multiplicities, when their sum exceeds `(n-1)d`.
pub fn noether_indices(dc: &DivisorClass) -> Result<Option<IndexSet>> {
    let n = dc.n();
    if dc.s() < n + 1 {
        return Err(Error::TooFewPoints { n, s: dc.s() });
    }
    let positions = largest_positions(dc, n + 1);
    if excess_unchecked(dc, &positions)? > 0 {
        Ok(Some(IndexSet(positions)))
    } else {
        Ok(None)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dc(s: &str) -> DivisorClass {
        s.parse().unwrap()
    }

    fn set(v: &[usize], n: usize, s: usize) -> IndexSet {
        IndexSet::new(v.to_vec(), n, s).unwrap()
    }

    #[test]
    fn index_set_validation() {
        assert!(IndexSet::new(vec![1, 2, 3], 2, 3).is_ok());
        assert_eq!(set(&[3, 1, 2], 2, 3).indices(), &[1, 2, 3]);
        assert!(IndexSet::new(vec![1, 2], 2, 3).is_err());
        assert!(IndexSet::new(vec![1, 1, 2], 2, 3).is_err());
        assert!(IndexSet::new(vec![0, 1, 2], 2, 3).is_err());
        assert!(IndexSet::new(vec![1, 2, 4], 2, 3).is_err());
    }

    #[test]
    fn excess_examples() {
        let d = dc("3:10:7,6,6,6,6,1,1,1,1,1,1,1,1");
        assert_eq!(excess(&d, &set(&[1, 2, 3, 4], 3, 13)), Ok(5));
        let e1 = DivisorClass::exceptional(3, 4, 1).unwrap();
        assert_eq!(excess(&e1, &set(&[1, 2, 3, 4], 3, 4)), Ok(-1));
        let conic = dc("2:2:1,1,1,1,1");
        assert_eq!(excess(&conic, &set(&[1, 2, 3], 2, 5)), Ok(1));
        assert!(excess(&conic, &set(&[1, 2, 3, 4], 3, 5)).is_err());
    }

    #[test]
    fn cremona_examples() {
        let e3 = DivisorClass::exceptional(4, 7, 3).unwrap();
        assert_eq!(
            cremona_apply(&e3, &set(&[3, 4, 5, 6, 7], 4, 7)),
            Ok(dc("4:1:0,0,0,1,1,1,1"))
        );
        let d = dc("3:10:7,6,6,6,6,1,1,1,1,1,1,1,1");
        assert_eq!(
            cremona_apply(&d, &set(&[1, 2, 3, 4], 3, 13)),
            Ok(dc("3:5:2,1,1,1,6,1,1,1,1,1,1,1,1"))
        );
        // zero excess is a fixed point
        let fixed = dc("2:2:1,1,0,1");
        assert_eq!(cremona_apply(&fixed, &set(&[1, 2, 3], 2, 4)), Ok(fixed));
    }

    #[test]
    fn cremona_needs_enough_points() {
        let d = dc("3:2:1,1,1");
        assert_eq!(
            cremona_apply(&d, &IndexSet(vec![1, 2, 3, 4])),
            Err(Error::TooFewPoints { n: 3, s: 3 })
        );
    }

    #[test]
    fn simple_reflection_examples() {
        assert_eq!(simple_reflection(&dc("2:5:3,1,1"), 1), Ok(dc("2:5:1,3,1")));
        assert_eq!(simple_reflection(&dc("2:1:0,0,0"), 3), Ok(dc("2:2:1,1,1")));
        let d = dc("3:7:4,3,2,2,1");
        assert_eq!(
            simple_reflection(&simple_reflection(&d, 5).unwrap(), 5),
            Ok(d.clone())
        );
        assert!(matches!(
            simple_reflection(&d, 6),
            Err(Error::GeneratorOutOfRange { .. })
        ));
        assert!(matches!(
            simple_reflection(&dc("3:1:1,1,1"), 3),
            Err(Error::TooFewPoints { .. })
        ));
    }

    #[test]
    fn word_examples() {
        let w = WeylWord::new(vec![
            set(&[1, 2, 3, 4, 5], 4, 7),
            set(&[1, 2, 3, 6, 7], 4, 7),
            set(&[3, 4, 5, 6, 7], 4, 7),
        ]);
        let e3 = DivisorClass::exceptional(4, 7, 3).unwrap();
        let image = apply_word(&e3, &w).unwrap();
        assert_eq!(image, dc("4:3:2,2,2,2,2,2,2"));
        assert_eq!(apply_word(&image, &invert_word(&w)), Ok(e3.clone()));
        assert_eq!(apply_word(&e3, &WeylWord::identity()), Ok(e3));
        assert_eq!(w.to_json(), "[[1,2,3,4,5],[1,2,3,6,7],[3,4,5,6,7]]");
        assert_eq!(WeylWord::from_json(&w.to_json(), 4, 7), Ok(w.clone()));
        assert!(WeylWord::from_json("[[1,2,3]]", 4, 7).is_err());
    }

    #[test]
    fn invert_examples() {
        let a = set(&[1, 2, 3], 2, 5);
        let b = set(&[2, 3, 4], 2, 5);
        let c = set(&[3, 4, 5], 2, 5);
        let w = WeylWord::new(vec![a.clone(), b.clone(), c.clone()]);
        assert_eq!(invert_word(&w), WeylWord::new(vec![c, b, a]));
        assert_eq!(invert_word(&WeylWord::identity()), WeylWord::identity());
        assert_eq!(invert_word(&invert_word(&w)), w);
    }

    #[test]
    fn noether_examples() {
        let d = dc("3:10:7,6,6,6,6,1,1,1,1,1,1,1,1");
        assert_eq!(noether_indices(&d), Ok(Some(set(&[1, 2, 3, 4], 3, 13))));
        let not_eff = dc("3:5:6,2,1,1,1,1,1,1,1,1,1,1,1");
        assert_eq!(noether_indices(&not_eff), Ok(None));
        let conic = dc("2:2:1,1,1,1,1");
        assert_eq!(noether_indices(&conic), Ok(Some(set(&[1, 2, 3], 2, 5))));
        assert!(noether_indices(&dc("3:2:1,1")).is_err());
    }

    #[test]
    fn noether_ties_prefer_small_indices() {
        let d = dc("2:3:1,2,1,2,1");
        assert_eq!(noether_indices(&d), Ok(Some(set(&[1, 2, 4], 2, 5))));
    }
}
