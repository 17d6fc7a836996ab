//! Expected dimensions of linear systems: the planar count corrected by
//! `(-1)` curves, and the secant-cone formula for at most `n + 3` points.
//!
//! Both are conjectural predictions of `h⁰`; the oracle module measures `h⁰`.

use itertools::Itertools;
use serde::Serialize;

use crate::error::{add, binom, mul, sub, Error, Result};
use crate::lattice::{chi, mukai_pairing, DivisorClass};
use crate::orbit::enumerate;

/// Cone `J(L_I, σ_t)` over the `t`-secant variety of the rational normal curve
/// through `n + 3` points, with vertex spanned by the points in `I`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConeStratum {
    /// 1-based, increasing, within `1..=n+3`.
    pub indices: Vec<usize>,
    pub t: usize,
    /// Dimension `|I| + 2t - 1`.
    pub r: i64,
    /// Multiplicity of containment in the base locus.
    pub k: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StratumTerm {
    #[serde(flatten)]
    pub stratum: ConeStratum,
    /// `(-1)^{|I|} binom(n + k - r - 1, n)`.
    pub term: i64,
}

/// Largest admissible `t`: `l + ε` where `n = 2l + ε`, `ε = n mod 2`.
pub fn max_secant_order(n: usize) -> usize {
    n / 2 + n % 2
}

fn padded_multiplicities(dc: &DivisorClass) -> Result<Vec<i64>> {
    let max = dc.n() + 3;
    if dc.s() > max {
        return Err(Error::TooManyPoints { s: dc.s(), max });
    }
    Ok(dc.padded(max).m().to_vec())
}

pub fn stratum_data(dc: &DivisorClass, indices: &[usize], t: usize) -> Result<ConeStratum> {
    let m = padded_multiplicities(dc)?;
    let n = dc.n();
    let mut sorted = indices.to_vec();
    sorted.sort_unstable();
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::InvalidIndexSet("repeated index".into()));
    }
    if let Some(&bad) = sorted.iter().find(|&&i| i == 0 || i > n + 3) {
        return Err(Error::InvalidIndexSet(format!(
            "index {bad} outside 1..={}",
            n + 3
        )));
    }
    if t > max_secant_order(n) || sorted.len() + 2 * t > n {
        return Err(Error::Precondition(format!(
            "stratum (|I| = {}, t = {t}) violates |I| <= n - 2t, t <= {}",
            sorted.len(),
            max_secant_order(n)
        )));
    }
    stratum_unchecked(n, dc.d(), &m, sorted, t)
}

fn stratum_unchecked(
    n: usize,
    d: i64,
    m: &[i64],
    indices: Vec<usize>,
    t: usize,
) -> Result<ConeStratum> {
    let t64 = t as i64;
    let size = indices.len() as i64;
    let total = m.iter().try_fold(0i64, |acc, &x| add(acc, x))?;
    let on_vertex = indices
        .iter()
        .try_fold(0i64, |acc, &i| add(acc, m[i - 1]))?;
    let coeff = (n as i64 + 1) * t64 + size - 1;
    let k = sub(add(mul(t64, total)?, on_vertex)?, mul(coeff, d)?)?;
    Ok(ConeStratum {
        indices,
        t,
        r: size + 2 * t64 - 1,
        k,
    })
}

/// Every admissible stratum with its signed contribution, ordered by `t`,
/// then `|I|`, then lexicographically by `I`.
pub fn rnc_strata(dc: &DivisorClass) -> Result<Vec<StratumTerm>> {
    let m = padded_multiplicities(dc)?;
    if let Some((i, &x)) = dc.m().iter().enumerate().find(|(_, &x)| x < 0) {
        return Err(Error::NegativeMultiplicity {
            index: i + 1,
            value: x,
        });
    }
    let n = dc.n();
    let nn = n as i64;
    let mut out = Vec::new();
    for t in 0..=max_secant_order(n) {
        if 2 * t > n {
            break;
        }
        for size in 0..=(n - 2 * t) {
            for subset in (1..=n + 3).combinations(size) {
                let stratum = stratum_unchecked(n, dc.d(), &m, subset, t)?;
                let magnitude = binom(sub(add(nn, stratum.k)?, stratum.r + 1)?, nn)?;
                let term = if size % 2 == 0 { magnitude } else { -magnitude };
                out.push(StratumTerm { stratum, term });
            }
        }
    }
    Ok(out)
}

/// `Σ_{I,t} (-1)^{|I|} binom(n + k_{I,t} - r_{I,t} - 1, n)` for at most `n + 3` points.
pub fn rnc_expected_dim(dc: &DivisorClass) -> Result<i64> {
    rnc_strata(dc)?
        .iter()
        .try_fold(0i64, |acc, s| add(acc, s.term))
}

/// `χ(D) + Σ binom(k_C, 2)` over `(-1)` curves `C` of degree at most
/// `max_degree` with `k_C = -D·C > 0`.
pub fn ghh_expected_dim(dc: &DivisorClass, max_degree: i64) -> Result<i64> {
    if dc.n() != 2 {
        return Err(Error::NotPlanar(dc.n()));
    }
    if let Some((i, &x)) = dc.m().iter().enumerate().find(|(_, &x)| x < 0) {
        return Err(Error::NegativeMultiplicity {
            index: i + 1,
            value: x,
        });
    }
    let mut total = chi(dc)?;
    if dc.s() == 0 || max_degree < 0 {
        return Ok(total);
    }
    let table = enumerate(2, dc.s(), max_degree)?;
    for entry in &table.entries {
        for curve in entry.classes(2)? {
            let k = -mukai_pairing(dc, &curve)?;
            if k > 0 {
                total = add(total, binom(k, 2)?)?;
            }
        }
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dc(s: &str) -> DivisorClass {
        s.parse().unwrap()
    }

    #[test]
    fn stratum_examples() {
        let s = stratum_data(&dc("3:1:"), &[], 0).unwrap();
        assert_eq!((s.r, s.k), (-1, 1));
        for d in 0..7 {
            let h = DivisorClass::new(4, d, vec![]).unwrap();
            assert_eq!(stratum_data(&h, &[], 0).unwrap().k, d);
        }
        assert!(matches!(
            stratum_data(&dc("3:2:1,1,1,1,1,1,1,1,1"), &[], 0),
            Err(Error::TooManyPoints { s: 9, max: 6 })
        ));
        // line through two points: k = m_1 + m_2 - d
        let s = stratum_data(&dc("2:4:3,3"), &[1, 2], 0).unwrap();
        assert_eq!((s.r, s.k), (1, 2));
        // conic through five points: k = Σ m - 2d
        let s = stratum_data(&dc("2:4:2,2,2,2,2"), &[], 1).unwrap();
        assert_eq!((s.r, s.k), (1, 2));
        // twisted cubic cone with vertex p_1 in P^3
        let s = stratum_data(&dc("3:4:3,2,2,2,2,2"), &[1], 1).unwrap();
        assert_eq!((s.r, s.k), (2, 13 + 3 - 16));
        assert!(stratum_data(&dc("2:1:"), &[1, 2, 3], 0).is_err());
        assert!(stratum_data(&dc("2:1:"), &[1], 1).is_err());
        assert!(stratum_data(&dc("2:1:"), &[6], 0).is_err());
    }

    #[test]
    fn rnc_examples() {
        assert_eq!(rnc_expected_dim(&dc("3:1:0,0,0,0,0,0")), Ok(4));
        assert_eq!(rnc_expected_dim(&dc("2:2:1,1,1,1,1")), Ok(1));
        assert!(rnc_expected_dim(&dc("2:2:1,-1")).is_err());
        assert!(rnc_expected_dim(&dc("2:2:1,1,1,1,1,1")).is_err());
    }

    #[test]
    fn rnc_strata_vanish_when_k_at_most_r() {
        let d = dc("2:3:1,1,1,1,1");
        for s in rnc_strata(&d).unwrap() {
            if s.stratum.k <= s.stratum.r {
                assert_eq!(s.term, 0, "{s:?}");
            }
        }
    }

    /// Hand expansion for `4H - 3E1 - 3E2` in the plane: χ = 15 - 6 - 6 = 3,
    /// the line through p1, p2 has k = 2 and contributes binom(2, 2) = 1; the
    /// lines through p_i and an unused point have k = -1; the conic has k = -2.
    #[test]
    fn rnc_hand_expansion_planar() {
        let d = dc("2:4:3,3");
        let strata = rnc_strata(&d).unwrap();
        // t = 0: 1 + 5 + 10 subsets; t = 1: the empty set only
        assert_eq!(strata.len(), 17);
        let nonzero: Vec<_> = strata
            .iter()
            .filter(|s| s.term != 0)
            .map(|s| (s.stratum.indices.clone(), s.stratum.t, s.term))
            .collect();
        assert_eq!(
            nonzero,
            vec![
                (vec![], 0, 15),
                (vec![1], 0, -6),
                (vec![2], 0, -6),
                (vec![1, 2], 0, 1)
            ]
        );
        assert_eq!(rnc_expected_dim(&d), Ok(4));
    }

    /// Hand expansion for `2H - 2E1 - 2E2 - 2E3` in P^3 (a double plane):
    /// binom(5,3) - 3 binom(4,3) + 3 binom(3,3) + binom(2,3) = 10 - 12 + 3 + 0.
    #[test]
    fn rnc_hand_expansion_double_plane() {
        let d = dc("3:2:2,2,2");
        assert_eq!(rnc_expected_dim(&d), Ok(1));
        let plane = rnc_strata(&d)
            .unwrap()
            .into_iter()
            .find(|s| s.stratum.indices == vec![1, 2, 3] && s.stratum.t == 0)
            .unwrap();
        assert_eq!((plane.stratum.r, plane.stratum.k, plane.term), (2, 2, 0));
    }

    #[test]
    fn rnc_is_symmetric() {
        let a = rnc_expected_dim(&dc("3:4:3,2,1,0,2,1")).unwrap();
        let b = rnc_expected_dim(&dc("3:4:1,2,0,3,1,2")).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn ghh_examples() {
        assert_eq!(ghh_expected_dim(&dc("2:6:2,2,2,2,2,2,2,2,2"), 6), Ok(1));
        let d = dc("2:5:3,3,1,1,1,1,1,1,1,1");
        assert_eq!(ghh_expected_dim(&d, 5), chi(&d));
        for deg in 0..6 {
            let free = DivisorClass::new(2, deg, vec![]).unwrap();
            assert_eq!(ghh_expected_dim(&free, deg), binom(deg + 2, 2));
        }
        assert_eq!(ghh_expected_dim(&dc("2:4:3,3"), 4), Ok(4));
        assert!(ghh_expected_dim(&dc("3:4:3,3"), 4).is_err());
    }
}
