//! Ground-truth `h⁰` by exact rank computation over a prime field.
//!
//! A point of multiplicity `m` imposes the vanishing of every Taylor
//! coefficient of order `< m` at that point. The conditions are assembled in
//! an affine chart against the monomial basis of degree `≤ d`.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::cremona::{cremona_apply, IndexSet};
use crate::error::{binom, Error, Result};
use crate::lattice::{chi, DivisorClass};

pub const DEFAULT_PRIME: u64 = 2_147_483_647;
pub const DEFAULT_TRIALS: usize = 3;
pub const DEFAULT_SEED: u64 = 0;

/// Upper bound on matrix entries (rows × columns) accepted by the oracle.
pub const MAX_MATRIX_ENTRIES: usize = 50_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleOptions {
    pub seed: u64,
    pub trials: usize,
    pub prime: u64,
}

impl Default for OracleOptions {
    fn default() -> Self {
        Self {
            seed: DEFAULT_SEED,
            trials: DEFAULT_TRIALS,
            prime: DEFAULT_PRIME,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct H0Result {
    pub h0: i64,
    pub trials: usize,
    /// Every trial produced the same rank.
    pub confident: bool,
    pub ranks: Vec<usize>,
    pub chi: i64,
    /// `h⁰ - χ`; equals `h¹` only if higher cohomology vanishes.
    pub h1_lower_bound_estimate: i64,
}

/// One random realisation of the conditions imposed by a divisor class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InterpolationSystem {
    pub n: usize,
    pub d: i64,
    pub points: Vec<Vec<u64>>,
    pub multiplicities: Vec<i64>,
    pub prime: u64,
    pub seed: u64,
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut f = 2u64;
    while f * f <= p {
        if p.is_multiple_of(f) {
            return false;
        }
        f += 1;
    }
    true
}

fn check_options(dc: &DivisorClass, opts: &OracleOptions) -> Result<()> {
    if dc.d() < 0 {
        return Err(Error::Precondition(format!("degree {} < 0", dc.d())));
    }
    if let Some((i, &x)) = dc.m().iter().enumerate().find(|(_, &x)| x < 0) {
        return Err(Error::NegativeMultiplicity {
            index: i + 1,
            value: x,
        });
    }
    if opts.trials == 0 {
        return Err(Error::Precondition("at least one trial required".into()));
    }
    if opts.prime >= 1 << 32 || !is_prime(opts.prime) {
        return Err(Error::Precondition(format!(
            "modulus {} must be a prime below 2^32",
            opts.prime
        )));
    }
    let max_m = dc.m().iter().copied().max().unwrap_or(0).max(1);
    if (opts.prime as i128) <= dc.d() as i128 * max_m as i128 {
        return Err(Error::Precondition(format!(
            "modulus {} must exceed d * max m = {}",
            opts.prime,
            dc.d() as i128 * max_m as i128
        )));
    }
    Ok(())
}

/// Exponent vectors in `n` variables with total degree `≤ d`, in graded
/// lexicographic order.
fn exponents(n: usize, d: usize) -> Vec<Vec<usize>> {
    // every vector of length `cur.len()` summing to exactly `left`
    fn fill(pos: usize, left: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if pos + 1 == cur.len() {
            cur[pos] = left;
            out.push(cur.clone());
            return;
        }
        for e in (0..=left).rev() {
            cur[pos] = e;
            fill(pos + 1, left - e, cur, out);
        }
    }
    let mut out = Vec::new();
    if n == 0 {
        out.push(Vec::new());
        return out;
    }
    let mut cur = vec![0; n];
    for total in 0..=d {
        fill(0, total, &mut cur, &mut out);
    }
    out
}

fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        exp >>= 1;
    }
    acc
}

impl InterpolationSystem {
    pub fn sample(dc: &DivisorClass, prime: u64, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = dc.n();
        let multiplicities: Vec<i64> = dc.m().iter().copied().filter(|&m| m > 0).collect();
        let points = multiplicities
            .iter()
            .map(|_| (0..n).map(|_| rng.gen_range(1..prime)).collect())
            .collect();
        Self {
            n,
            d: dc.d(),
            points,
            multiplicities,
            prime,
            seed,
        }
    }

    pub fn columns(&self) -> usize {
        binom(self.d + self.n as i64, self.n as i64).unwrap_or(0) as usize
    }

    pub fn rows(&self) -> usize {
        self.multiplicities
            .iter()
            .map(|&m| binom(m + self.n as i64 - 1, self.n as i64).unwrap_or(0) as usize)
            .sum()
    }

    /// Row `(point, α)` holds `∂^α x^β / α!` evaluated at the point, i.e.
    /// `Π_j binom(β_j, α_j) p_j^{β_j - α_j}`, for every monomial `x^β`.
    pub fn matrix(&self) -> Vec<Vec<u64>> {
        let p = self.prime;
        let d = self.d as usize;
        let monomials = exponents(self.n, d);
        let mut rows = Vec::with_capacity(self.rows());
        for (point, &m) in self.points.iter().zip(&self.multiplicities) {
            let order = (m as usize).min(d + 1);
            // powers[j][e] = point_j^e mod p
            let powers: Vec<Vec<u64>> = point
                .iter()
                .map(|&c| {
                    let mut v = vec![1u64; d + 1];
                    for e in 1..=d {
                        v[e] = v[e - 1] * c % p;
                    }
                    v
                })
                .collect();
            for alpha in exponents(self.n, order.saturating_sub(1)) {
                let row = monomials
                    .iter()
                    .map(|beta| {
                        let mut acc = 1u64;
                        for j in 0..self.n {
                            if beta[j] < alpha[j] {
                                return 0;
                            }
                            let c = binom(beta[j] as i64, alpha[j] as i64).unwrap_or(0) as u64 % p;
                            acc = acc * c % p * powers[j][beta[j] - alpha[j]] % p;
                        }
                        acc
                    })
                    .collect();
                rows.push(row);
            }
            // orders ≥ d + 1 impose nothing on degree-d polynomials; keep the
            // row count faithful with zero rows
            let full = binom(m + self.n as i64 - 1, self.n as i64).unwrap_or(0) as usize;
            let built =
                binom(order as i64 + self.n as i64 - 1, self.n as i64).unwrap_or(0) as usize;
            let width = monomials.len();
            rows.extend((built..full).map(|_| vec![0u64; width]));
        }
        rows
    }
}

/// Rank over `F_p` by Gaussian elimination; entries must be reduced mod `p`.
pub fn rank_mod_p(mut matrix: Vec<Vec<u64>>, p: u64) -> usize {
    let cols = matrix.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..cols {
        let Some(pivot) = (rank..matrix.len()).find(|&r| matrix[r][col] != 0) else {
            continue;
        };
        matrix.swap(rank, pivot);
        let inv = pow_mod(matrix[rank][col], p - 2, p);
        for x in matrix[rank][col..].iter_mut() {
            *x = *x * inv % p;
        }
        let (head, tail) = matrix.split_at_mut(rank + 1);
        let pivot_row = &head[rank];
        for row in tail.iter_mut() {
            let f = row[col];
            if f == 0 {
                continue;
            }
            for (x, &y) in row[col..].iter_mut().zip(&pivot_row[col..]) {
                *x = (*x + p - f * y % p) % p;
            }
        }
        rank += 1;
        if rank == matrix.len() {
            break;
        }
    }
    rank
}

pub fn h0_dimension(dc: &DivisorClass, seed: u64, trials: usize) -> Result<H0Result> {
    h0_dimension_with(
        dc,
        &OracleOptions {
            seed,
            trials,
            ..OracleOptions::default()
        },
    )
}

pub fn h0_dimension_with(dc: &DivisorClass, opts: &OracleOptions) -> Result<H0Result> {
    check_options(dc, opts)?;
    let chi_value = chi(dc)?;
    let cols = binom(dc.d() + dc.n() as i64, dc.n() as i64)?;
    let probe = InterpolationSystem::sample(dc, opts.prime, opts.seed);
    if (probe.rows() as u128) * (cols as u128) > MAX_MATRIX_ENTRIES as u128 {
        return Err(Error::Precondition(format!(
            "condition matrix {}x{cols} exceeds the oracle size limit",
            probe.rows()
        )));
    }
    let ranks: Vec<usize> = (0..opts.trials)
        .into_par_iter()
        .map(|trial| {
            let system =
                InterpolationSystem::sample(dc, opts.prime, opts.seed.wrapping_add(trial as u64));
            rank_mod_p(system.matrix(), opts.prime)
        })
        .collect();
    let best = ranks.iter().copied().max().unwrap_or(0);
    let h0 = cols - best as i64;
    Ok(H0Result {
        h0,
        trials: opts.trials,
        confident: ranks.iter().all(|&r| r == best),
        ranks,
        chi: chi_value,
        h1_lower_bound_estimate: h0 - chi_value,
    })
}

/// Compares `h⁰(D)` with `h⁰(Cr_I D)`.
pub fn cremona_h0_check(dc: &DivisorClass, set: &IndexSet, seed: u64) -> Result<bool> {
    let image = cremona_apply(dc, set)?;
    for side in [dc, &image] {
        if side.d() < 0 || side.m().iter().any(|&m| m < 0) {
            return Err(Error::Precondition(format!(
                "{} has negative degree or multiplicity",
                side.pretty()
            )));
        }
    }
    let a = h0_dimension(dc, seed, DEFAULT_TRIALS)?;
    let b = h0_dimension(&image, seed, DEFAULT_TRIALS)?;
    Ok(a.h0 == b.h0)
}
