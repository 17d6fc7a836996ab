#![allow(dead_code)]

use blowup_core::DivisorClass;
use proptest::prelude::*;

/// Non-increasing sequences of length `len` with entries in `lo..=hi`.
pub fn sorted_vectors(len: usize, lo: i64, hi: i64) -> Vec<Vec<i64>> {
    fn rec(cur: &mut Vec<i64>, len: usize, lo: i64, hi: i64, out: &mut Vec<Vec<i64>>) {
        if cur.len() == len {
            out.push(cur.clone());
            return;
        }
        let top = cur.last().copied().unwrap_or(hi);
        for v in (lo..=top).rev() {
            cur.push(v);
            rec(cur, len, lo, hi, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), len, lo, hi, &mut out);
    out
}

/// Calls `f` on every vector of length `len` with entries in `lo..=hi`.
pub fn for_each_vector(len: usize, lo: i64, hi: i64, mut f: impl FnMut(&[i64])) {
    if lo > hi {
        return;
    }
    let mut cur = vec![lo; len];
    loop {
        f(&cur);
        let mut i = 0;
        loop {
            if i == len {
                return;
            }
            if cur[i] < hi {
                cur[i] += 1;
                break;
            }
            cur[i] = lo;
            i += 1;
        }
    }
}

/// Number of distinct orderings of `values`, by factorials.
pub fn orderings(values: &[i64]) -> u64 {
    let fact = |k: usize| (1..=k as u64).product::<u64>();
    let mut sorted = values.to_vec();
    sorted.sort_unstable();
    let mut denom = 1u64;
    let mut run = 1usize;
    for w in sorted.windows(2) {
        if w[0] == w[1] {
            run += 1;
        } else {
            denom *= fact(run);
            run = 1;
        }
    }
    denom *= fact(run);
    fact(values.len()) / denom
}

pub fn class(n: usize, d: i64, m: Vec<i64>) -> DivisorClass {
    DivisorClass::new(n, d, m).unwrap()
}

/// Classes in `X_{n,s}` with small entries.
pub fn arb_class(n: usize, s: usize) -> impl Strategy<Value = DivisorClass> {
    (-4i64..=9, prop::collection::vec(-3i64..=7, s)).prop_map(move |(d, m)| class(n, d, m))
}

/// `(n, s)` with enough points for a Cremona step.
pub fn arb_dims() -> impl Strategy<Value = (usize, usize)> {
    (2usize..=5).prop_flat_map(|n| (Just(n), n + 1..=n + 5))
}

/// An `(n+1)`-subset of `1..=s`, as 1-based indices.
pub fn arb_index_set(n: usize, s: usize) -> impl Strategy<Value = Vec<usize>> {
    prop::sample::subsequence((1..=s).collect::<Vec<_>>(), n + 1)
}
