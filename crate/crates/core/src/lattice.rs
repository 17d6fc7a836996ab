//! Divisor classes `dH - Σ m_i E_i` on the blow-up `X_{n,s}` of `P^n` at `s`
//! general points, together with the Mukai pairing and the numerical
//! functionals built on it.
//!
//! All arithmetic is checked `i64`; overflow surfaces as [`Error::Overflow`].

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{add, binom, mul, sub, Error, Result};

/// An element `dH - Σ m_i E_i` of `Pic(X_{n,s})`.
///
/// The exceptional divisor `E_i` has `d = 0` and `m_i = -1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawDivisor")]
pub struct DivisorClass {
    n: usize,
    d: i64,
    m: Vec<i64>,
}

#[derive(Deserialize)]
struct RawDivisor {
    n: usize,
    d: i64,
    m: Vec<i64>,
}

impl TryFrom<RawDivisor> for DivisorClass {
    type Error = Error;

    fn try_from(raw: RawDivisor) -> Result<Self> {
        DivisorClass::new(raw.n, raw.d, raw.m)
    }
}

impl DivisorClass {
    pub fn new(n: usize, d: i64, m: Vec<i64>) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidDimension(n));
        }
        Ok(Self { n, d, m })
    }

    /// The zero class on `X_{n,s}`.
    pub fn zero(n: usize, s: usize) -> Result<Self> {
        Self::new(n, 0, vec![0; s])
    }

    pub fn hyperplane(n: usize, s: usize) -> Result<Self> {
        Self::new(n, 1, vec![0; s])
    }

    /// `E_i` for a 1-based index `i`.
    pub fn exceptional(n: usize, s: usize, i: usize) -> Result<Self> {
        if i == 0 || i > s {
            return Err(Error::Precondition(format!(
                "exceptional index {i} outside 1..={s}"
            )));
        }
        let mut m = vec![0; s];
        m[i - 1] = -1;
        Self::new(n, 0, m)
    }

    /// `K = -(n+1)H + (n-1)ΣE_i`.
    pub fn canonical(n: usize, s: usize) -> Result<Self> {
        let nn = n as i64;
        Self::new(n, -(nn + 1), vec![-(nn - 1); s])
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> i64 {
        self.d
    }

    pub fn m(&self) -> &[i64] {
        &self.m
    }

    /// Number of blown-up points carried by this class.
    pub fn s(&self) -> usize {
        self.m.len()
    }

    /// Multiplicity at a 1-based index; indices past the end read as zero.
    pub fn multiplicity(&self, i: usize) -> i64 {
        i.checked_sub(1)
            .and_then(|j| self.m.get(j).copied())
            .unwrap_or(0)
    }

    pub fn into_parts(self) -> (usize, i64, Vec<i64>) {
        (self.n, self.d, self.m)
    }

    /// Zero-pads the multiplicity vector to length `s` (no-op if already longer).
    pub fn padded(&self, s: usize) -> Self {
        let mut m = self.m.clone();
        if m.len() < s {
            m.resize(s, 0);
        }
        Self {
            n: self.n,
            d: self.d,
            m,
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.combine(other, add)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.combine(other, sub)
    }

    pub fn checked_scale(&self, k: i64) -> Result<Self> {
        let m = self.m.iter().map(|&x| mul(x, k)).collect::<Result<_>>()?;
        Ok(Self {
            n: self.n,
            d: mul(self.d, k)?,
            m,
        })
    }

    pub fn checked_neg(&self) -> Result<Self> {
        self.checked_scale(-1)
    }

    fn combine(&self, other: &Self, op: fn(i64, i64) -> Result<i64>) -> Result<Self> {
        check_same_n(self, other)?;
        let s = self.s().max(other.s());
        let (a, b) = (self.padded(s), other.padded(s));
        let m =
            a.m.iter()
                .zip(&b.m)
                .map(|(&x, &y)| op(x, y))
                .collect::<Result<_>>()?;
        Ok(Self {
            n: self.n,
            d: op(self.d, other.d)?,
            m,
        })
    }

    /// True for `E_i`: `d = 0`, exactly one entry `-1`, the rest zero.
    pub fn is_exceptional(&self) -> bool {
        self.d == 0
            && self.m.iter().filter(|&&x| x == -1).count() == 1
            && self.m.iter().all(|&x| x == 0 || x == -1)
    }

    /// True for a hyperplane through exactly `n` of the points.
    pub fn is_hyperplane_through_n_points(&self) -> bool {
        self.d == 1
            && self.m.iter().filter(|&&x| x == 1).count() == self.n
            && self.m.iter().all(|&x| x == 0 || x == 1)
    }

    /// Human-readable form such as `4H - 3E1 - 3E2 - E4`.
    pub fn pretty(&self) -> String {
        let mut out = String::new();
        if self.d != 0 {
            out.push_str(&coefficient(self.d));
            out.push('H');
        }
        for (i, &mi) in self.m.iter().enumerate() {
            if mi == 0 {
                continue;
            }
            // the class stores -m_i as the coefficient of E_i
            let (sign, mag) = if mi > 0 { ("-", mi) } else { ("+", -mi) };
            if out.is_empty() {
                if sign == "-" {
                    out.push('-');
                }
            } else {
                out.push(' ');
                out.push_str(sign);
                out.push(' ');
            }
            if mag != 1 {
                out.push_str(&mag.to_string());
            }
            out.push_str(&format!("E{}", i + 1));
        }
        if out.is_empty() {
            out.push('0');
        }
        out
    }
}

fn coefficient(c: i64) -> String {
    match c {
        1 => String::new(),
        -1 => "-".to_string(),
        _ => c.to_string(),
    }
}

fn check_same_n(a: &DivisorClass, b: &DivisorClass) -> Result<()> {
    if a.n != b.n {
        return Err(Error::DimensionMismatch {
            left: a.n,
            right: b.n,
        });
    }
    Ok(())
}

/// Compact literal `n:d:m1,m2,...,ms`.
impl fmt::Display for DivisorClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:", self.n, self.d)?;
        for (i, x) in self.m.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{x}")?;
        }
        Ok(())
    }
}

impl FromStr for DivisorClass {
    type Err = Error;

    fn from_str(input: &str) -> Result<Self> {
        let fail = |reason: &str| Error::Parse {
            input: input.to_string(),
            reason: reason.to_string(),
        };
        let fields: Vec<&str> = input.split(':').collect();
        if fields.len() != 3 {
            return Err(fail("expected three colon-separated fields n:d:m1,...,ms"));
        }
        let n = parse_int(fields[0]).ok_or_else(|| fail("n is not an integer"))?;
        let n = usize::try_from(n).map_err(|_| fail("n must be non-negative"))?;
        let d = parse_int(fields[1]).ok_or_else(|| fail("d is not an integer"))?;
        let m = if fields[2].is_empty() {
            Vec::new()
        } else {
            fields[2]
                .split(',')
                .map(|t| parse_int(t).ok_or_else(|| fail("multiplicity is not an integer")))
                .collect::<Result<Vec<_>>>()?
        };
        DivisorClass::new(n, d, m).map_err(|e| fail(&e.to_string()))
    }
}

/// Strict integer grammar: optional leading `-`, then ASCII digits only.
fn parse_int(t: &str) -> Option<i64> {
    let digits = t.strip_prefix('-').unwrap_or(t);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    t.parse().ok()
}

/// Parses either the compact literal or the JSON object form `{"n":..,"d":..,"m":[..]}`.
pub fn parse_divisor(input: &str) -> Result<DivisorClass> {
    if input.trim_start().starts_with('{') {
        serde_json::from_str(input).map_err(|e| Error::Parse {
            input: input.to_string(),
            reason: e.to_string(),
        })
    } else {
        input.parse()
    }
}

/// `⟨a, b⟩ = (n-1) d_a d_b - Σ m_i p_i`, zero-padding the shorter multiplicity vector.
pub fn mukai_pairing(a: &DivisorClass, b: &DivisorClass) -> Result<i64> {
    check_same_n(a, b)?;
    let mut acc = mul(mul(a.n as i64 - 1, a.d)?, b.d)?;
    for (&x, &y) in a.m.iter().zip(&b.m) {
        acc = sub(acc, mul(x, y)?)?;
    }
    Ok(acc)
}

/// Anticanonical degree `(n+1)d - Σ m_i`.
pub fn adeg(dc: &DivisorClass) -> Result<i64> {
    let mut acc = mul(dc.n as i64 + 1, dc.d)?;
    for &x in &dc.m {
        acc = sub(acc, x)?;
    }
    Ok(acc)
}

/// The coefficient `d` of `H`.
pub fn degree(dc: &DivisorClass) -> i64 {
    dc.d
}

/// Cone over `dc` with a new vertex point `E_0`, placed at index 1 of the result
/// in `Pic(X_{n+1,s+1})`.
pub fn cone(dc: &DivisorClass) -> DivisorClass {
    let mut m = Vec::with_capacity(dc.m.len() + 1);
    m.push(dc.d);
    m.extend_from_slice(&dc.m);
    DivisorClass {
        n: dc.n + 1,
        d: dc.d,
        m,
    }
}

/// Virtual dimension `binom(d+n, n) - Σ binom(m_i+n-1, n)`.
pub fn chi(dc: &DivisorClass) -> Result<i64> {
    let n = dc.n as i64;
    let mut acc = binom(add(dc.d, n)?, n)?;
    for &x in &dc.m {
        acc = sub(acc, binom(add(x, n - 1)?, n)?)?;
    }
    Ok(acc)
}

/// Arithmetic genus `(d-1)(d-2)/2 - Σ m_i(m_i-1)/2` of a plane curve class.
///
/// Both products are always even, so the value is an integer.
pub fn planar_genus(dc: &DivisorClass) -> Result<i64> {
    if dc.n != 2 {
        return Err(Error::NotPlanar(dc.n));
    }
    let mut acc = mul(sub(dc.d, 1)?, sub(dc.d, 2)?)? / 2;
    for &x in &dc.m {
        acc = sub(acc, mul(x, sub(x, 1)?)? / 2)?;
    }
    Ok(acc)
}

/// The four planar conditions that characterize `(-1)` curves numerically.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct PlanarConditions {
    pub self_pairing_minus_one: bool,
    pub genus_zero: bool,
    pub adeg_one: bool,
    pub chi_one: bool,
}

impl PlanarConditions {
    pub fn count(&self) -> usize {
        [
            self.self_pairing_minus_one,
            self.genus_zero,
            self.adeg_one,
            self.chi_one,
        ]
        .iter()
        .filter(|&&b| b)
        .count()
    }
}

pub fn planar_conditions(dc: &DivisorClass) -> Result<PlanarConditions> {
    if dc.n != 2 {
        return Err(Error::NotPlanar(dc.n));
    }
    Ok(PlanarConditions {
        self_pairing_minus_one: mukai_pairing(dc, dc)? == -1,
        genus_zero: planar_genus(dc)? == 0,
        adeg_one: adeg(dc)? == 1,
        chi_one: chi(dc)? == 1,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dc(s: &str) -> DivisorClass {
        s.parse().unwrap()
    }

    #[test]
    fn pairing_examples() {
        let h = DivisorClass::hyperplane(3, 0).unwrap();
        assert_eq!(mukai_pairing(&h, &h), Ok(2));
        let d = dc("3:4:3,3,3,1,1,1,1,1,1");
        assert_eq!(mukai_pairing(&d, &d), Ok(-1));
        for n in 2..6 {
            let e1 = DivisorClass::exceptional(n, 3, 1).unwrap();
            let e2 = DivisorClass::exceptional(n, 3, 2).unwrap();
            assert_eq!(mukai_pairing(&e1, &e2), Ok(0));
            assert_eq!(mukai_pairing(&e1, &e1), Ok(-1));
        }
    }

    #[test]
    fn pairing_zero_pads_and_checks_dimension() {
        let a = dc("2:5:3,3,1,1");
        let b = dc("2:1:1,1");
        assert_eq!(mukai_pairing(&a, &b), Ok(-1));
        assert_eq!(mukai_pairing(&b, &a), Ok(-1));
        let c = dc("3:1:1,1");
        assert_eq!(
            mukai_pairing(&a, &c),
            Err(Error::DimensionMismatch { left: 2, right: 3 })
        );
    }

    #[test]
    fn pairing_overflow_is_an_error() {
        let big = DivisorClass::new(3, i64::MAX / 2, vec![]).unwrap();
        assert!(matches!(mukai_pairing(&big, &big), Err(Error::Overflow(_))));
    }

    #[test]
    fn adeg_examples() {
        assert_eq!(adeg(&dc("3:10:7,6,6,6,6,1,1,1,1,1,1,1,1")), Ok(1));
        assert_eq!(adeg(&dc("3:2:1,1,1,1,1,1,1,1,1")), Ok(-1));
        assert_eq!(adeg(&DivisorClass::zero(4, 3).unwrap()), Ok(0));
    }

    #[test]
    fn degree_reads_coefficient() {
        assert_eq!(degree(&dc("2:5:3,3")), 5);
        assert_eq!(degree(&DivisorClass::exceptional(3, 2, 1).unwrap()), 0);
        let anti = DivisorClass::canonical(3, 2)
            .unwrap()
            .checked_neg()
            .unwrap();
        assert_eq!(degree(&anti), 4);
    }

    #[test]
    fn cone_unfolds_definition() {
        let d = dc("2:2:1,1,1,1,1");
        let c = cone(&d);
        assert_eq!(c, dc("3:2:2,1,1,1,1,1"));
        let f = dc("2:1:1,1");
        assert_eq!(
            mukai_pairing(&cone(&d), &cone(&f)).unwrap(),
            mukai_pairing(&d, &f).unwrap()
        );
        assert_eq!(adeg(&d), Ok(1));
        assert_eq!(adeg(&c), Ok(1));
    }

    #[test]
    fn chi_examples() {
        assert_eq!(chi(&dc("4:3:2,2,2,2,2,2,2")), Ok(0));
        assert_eq!(chi(&dc("3:2:1,1,1,1,1,1,1,1,1")), Ok(1));
        assert_eq!(chi(&dc("3:3:2,2,2,1,1,1,1,1,1")), Ok(2));
        assert_eq!(chi(&dc("4:2:1,1,1,1,1,1,1,1,1,1,1,1,1,1")), Ok(1));
    }

    #[test]
    fn genus_examples() {
        assert_eq!(planar_genus(&dc("2:3:1,1,1,1,1,1,1,1,1")), Ok(1));
        assert_eq!(planar_genus(&dc("2:1:")), Ok(0));
        assert_eq!(planar_genus(&dc("2:6:2,2,2,2,2,2,2,2,2")), Ok(1));
        assert_eq!(planar_genus(&dc("3:1:")), Err(Error::NotPlanar(3)));
    }

    #[test]
    fn planar_condition_examples() {
        let all = PlanarConditions {
            self_pairing_minus_one: true,
            genus_zero: true,
            adeg_one: true,
            chi_one: true,
        };
        assert_eq!(planar_conditions(&dc("2:1:1,1")), Ok(all));
        assert_eq!(planar_conditions(&dc("2:5:3,3,1,1,1,1,1,1,1,1")), Ok(all));
        // only the Euler characteristic condition holds for the double cubic
        let sextic = planar_conditions(&dc("2:6:2,2,2,2,2,2,2,2,2")).unwrap();
        assert_eq!(
            sextic,
            PlanarConditions {
                self_pairing_minus_one: false,
                genus_zero: false,
                adeg_one: false,
                chi_one: true,
            }
        );
        assert!(planar_conditions(&dc("4:1:1")).is_err());
    }

    #[test]
    fn literal_grammar() {
        let d = dc("3:10:7,6,6,6,6,1,1,1,1,1,1,1,1");
        assert_eq!(d.to_string(), "3:10:7,6,6,6,6,1,1,1,1,1,1,1,1");
        assert_eq!(dc("2:-3:"), DivisorClass::new(2, -3, vec![]).unwrap());
        assert_eq!(dc("3:0:0,-1").m(), &[0, -1]);
        for bad in [
            "", "3:1", "3:1:1:1", "3: 1:1", "3:1:1,", "3:1:,1", "3:+1:1", "1:1:1", "-3:1:1",
            "3:1:1, 2", "3:1:--1", "3:1:1.0",
        ] {
            assert!(bad.parse::<DivisorClass>().is_err(), "{bad:?} accepted");
        }
    }

    #[test]
    fn json_form() {
        let d = dc("3:4:3,3,3,1");
        let js = serde_json::to_string(&d).unwrap();
        assert_eq!(js, r#"{"n":3,"d":4,"m":[3,3,3,1]}"#);
        assert_eq!(parse_divisor(&js).unwrap(), d);
        assert!(parse_divisor(r#"{"n":1,"d":4,"m":[]}"#).is_err());
    }

    #[test]
    fn pretty_printing() {
        assert_eq!(dc("3:4:3,3,3,1,0").pretty(), "4H - 3E1 - 3E2 - 3E3 - E4");
        assert_eq!(dc("3:0:0,-1").pretty(), "E2");
        assert_eq!(dc("3:-4:-2,-2").pretty(), "-4H + 2E1 + 2E2");
        assert_eq!(dc("3:0:").pretty(), "0");
        assert_eq!(dc("3:0:1").pretty(), "-E1");
    }
}
