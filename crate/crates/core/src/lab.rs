//! Experiment harness: instance generation (optionally with a planted
//! divisibility triple), exhaustive first-window tables, and the two
//! statistics the search's cost model leans on — congruence-hit density in
//! the first window and the 2-adic valuation profile of a − 1 over primes.

use crate::arith;
use crate::engine::{self, decimal, AttemptStatus, Witness};
use crate::pairs;
use crate::primes;
use num_bigint::{BigInt, BigUint, RandBigInt};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LabError {
    /// A parameter fell outside the range the harness supports.
    #[error("parameter out of range: {0}")]
    OutOfRange(&'static str),
    /// Random search for a conforming instance exhausted its retry budget.
    #[error("instance generation failed within the retry budget")]
    GenerationFailed,
}

/// A (a, α, β) triple: `a` divides β·V − α·U for the instance it accompanies.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlantedTriple {
    #[serde(with = "decimal")]
    pub a: BigUint,
    pub alpha: i64,
    pub beta: i64,
}

/// A generated test instance N = U·V, with the planted triple when one was
/// requested.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratedInstance {
    #[serde(with = "decimal")]
    pub n: BigUint,
    #[serde(with = "decimal")]
    pub u: BigUint,
    #[serde(with = "decimal")]
    pub v: BigUint,
    pub planted: Option<PlantedTriple>,
}

/// Census of congruence hits in the first window: for each prime
/// X < a < 2X (X = ⌊(2N)^¼⌋) and each pair in S(β_max), does a divide
/// β·V − α·U in either orientation of (U, V)?
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DensityReport {
    pub triples_found: u64,
    /// Heuristic prediction 2·|S(β_max)|·ln 2 / ln X.
    pub expected: f64,
    pub x_floor: u64,
    pub beta_max: i64,
    /// found / expected.
    pub ratio: f64,
    pub triples: Vec<PlantedTriple>,
}

/// Distribution of r = v₂(a − 1) over primes in (A, 2A].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RStatReport {
    pub lower: u64,
    pub prime_count: u64,
    /// Empirical mean of r; heuristically Σ r·2^−r = 2.
    pub mean_r: f64,
    pub histogram: BTreeMap<u32, u64>,
}

const ORACLE_LIMIT: u64 = 1 << 42;
const GENERATION_RETRIES: u32 = 64;

/// Baseline factorization by trial division, for cross-checking search
/// results. Returns the prime factors ascending with multiplicity.
/// Supports 2 ≤ n ≤ 2⁴² (divisor scan stays below 2²¹).
pub fn oracle_factor(n: u64) -> Result<Vec<u64>, LabError> {
    if !(2..=ORACLE_LIMIT).contains(&n) {
        return Err(LabError::OutOfRange("oracle_factor supports 2 <= n <= 2^42"));
    }
    let mut rest = n;
    let mut out = Vec::new();
    for d in [2u64, 3] {
        while rest % d == 0 {
            out.push(d);
            rest /= d;
        }
    }
    let mut d = 5u64;
    while d * d <= rest {
        for cand in [d, d + 2] {
            while rest % cand == 0 {
                out.push(cand);
                rest /= cand;
            }
        }
        d += 6;
    }
    if rest > 1 {
        out.push(rest);
    }
    Ok(out)
}

fn random_prime(rng: &mut ChaCha8Rng, bits: u32, rounds: u32) -> Option<BigUint> {
    // random odd start with the top bit set, then the next prime above it;
    // reject if the scan overflowed the requested width
    let mut cand = rng.gen_biguint(bits as u64)
        | (BigUint::one() << (bits - 1) as u64)
        | BigUint::one();
    if primes::is_prime_with(&cand, rounds) {
        return Some(cand);
    }
    cand = primes::next_prime_with(&cand, rounds);
    (cand.bits() == bits as u64).then_some(cand)
}

/// Deterministically generate N = U·V from `seed`: U a `u_bits`-bit prime,
/// V either a `v_bits`-bit prime (plant = false) or a `v_bits`-bit cofactor
/// adjusted so that a planted triple (a, α, β) with (2-digit-wide) a and a
/// pair from S(16) satisfies a | β·V − α·U (plant = true).
///
/// Bit widths must lie in 8..=128.
pub fn generate_instance(
    u_bits: u32,
    v_bits: u32,
    plant: bool,
    seed: u64,
) -> Result<GeneratedInstance, LabError> {
    if !(8..=128).contains(&u_bits) || !(8..=128).contains(&v_bits) {
        return Err(LabError::OutOfRange("bit widths must lie in 8..=128"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rounds = primes::DEFAULT_MR_ROUNDS;
    let pair_pool = pairs::enumerate(16).expect("16 is a valid bound");

    for _ in 0..GENERATION_RETRIES {
        let Some(u) = random_prime(&mut rng, u_bits, rounds) else { continue };

        if !plant {
            let Some(v) = random_prime(&mut rng, v_bits, rounds) else { continue };
            if u == v {
                continue;
            }
            let n = &u * &v;
            return Ok(GeneratedInstance { n, u, v, planted: None });
        }

        let pair = pair_pool.members()[rng.gen_range(0..pair_pool.len())];
        let v0_draft = rng.gen_biguint(v_bits as u64) | (BigUint::one() << (v_bits - 1) as u64);

        // a just above √max(U, V): both factors then have at most two digits
        // base a, and the planted congruence survives digit extraction
        let (sq, _) = arith::isqrt(&u.clone().max(v0_draft.clone()));
        let a = primes::next_prime_with(&sq, rounds);
        if a > (&sq << 1u32) {
            continue;
        }
        let a_int = BigInt::from(a.clone());
        let alpha = BigInt::from(pair.alpha);
        let beta = BigInt::from(pair.beta);
        if alpha.mod_floor(&a_int).is_zero()
            || beta.mod_floor(&a_int).is_zero()
            || (&u % &a).is_zero()
        {
            continue;
        }

        // shift V to the residue class β⁻¹·α·U (mod a), rounding toward the
        // nearer representative to preserve the bit width
        let beta_inv = match arith::mod_inverse(&beta, &a) {
            Ok(x) => x,
            Err(_) => continue,
        };
        let rho = (BigInt::from(beta_inv) * &alpha * BigInt::from(u.clone()))
            .mod_floor(&a_int)
            .to_biguint()
            .expect("mod_floor is nonnegative");
        if rho.is_zero() {
            continue;
        }
        let v0_int = BigInt::from(v0_draft.clone());
        let delta = (&v0_int - BigInt::from(rho)).mod_floor(&a_int);
        let mut v_int = &v0_int - &delta;
        if &delta << 1u32 > a_int {
            v_int += &a_int;
        }
        let Some(v) = v_int.to_biguint() else { continue };
        if v.bits() != v_bits as u64 || v <= BigUint::one() {
            continue;
        }
        if u.gcd(&v) != BigUint::one() {
            continue;
        }
        let (sq_check, _) = arith::isqrt(&u.clone().max(v.clone()));
        if a <= sq_check {
            continue;
        }
        let n = &u * &v;
        debug_assert!(
            (&beta * BigInt::from(v.clone()) - &alpha * BigInt::from(u.clone()))
                .mod_floor(&a_int)
                .is_zero()
        );
        return Ok(GeneratedInstance {
            n,
            u,
            v,
            planted: Some(PlantedTriple { a, alpha: pair.alpha, beta: pair.beta }),
        });
    }
    Err(LabError::GenerationFailed)
}

/// Count, for coprime (U, V), how many (a, pair) cells in the first window
/// satisfy the divisibility in either orientation, against the heuristic
/// prediction. Requires X = ⌊(2UV)^¼⌋ ≥ 100 and a sieve-friendly window.
pub fn triple_density(
    u: &BigUint,
    v: &BigUint,
    beta_max: i64,
) -> Result<DensityReport, LabError> {
    if u.gcd(v) != BigUint::one() {
        return Err(LabError::OutOfRange("U and V must be coprime"));
    }
    let set = pairs::enumerate(beta_max)
        .map_err(|_| LabError::OutOfRange("beta_max must be even and >= 2"))?;
    let n = u * v;
    let (lo, hi) = engine::window_bounds(&n, 1, (1, 2));
    let (Some(lo), Some(hi)) = (lo.to_u64(), hi.to_u64()) else {
        return Err(LabError::OutOfRange("instance too large for the density scan"));
    };
    if lo < 100 {
        return Err(LabError::OutOfRange("window floor must be at least 100"));
    }
    let window = primes::sieve_interval_u64(lo, hi);
    let members = set.members();

    let per_prime: Vec<Vec<PlantedTriple>> = window
        .par_iter()
        .map(|&a| {
            let um = (u % a).to_u64().expect("residue fits");
            let vm = (v % a).to_u64().expect("residue fits");
            let a_i = a as i128;
            members
                .iter()
                .filter(|p| {
                    let al = p.alpha as i128;
                    let be = p.beta as i128;
                    (be * vm as i128 - al * um as i128).rem_euclid(a_i) == 0
                        || (be * um as i128 - al * vm as i128).rem_euclid(a_i) == 0
                })
                .map(|p| PlantedTriple { a: BigUint::from(a), alpha: p.alpha, beta: p.beta })
                .collect()
        })
        .collect();

    let triples: Vec<PlantedTriple> = per_prime.into_iter().flatten().collect();
    let expected = 2.0 * set.len() as f64 * std::f64::consts::LN_2 / (lo as f64).ln();
    let found = triples.len() as u64;
    Ok(DensityReport {
        triples_found: found,
        expected,
        x_floor: lo,
        beta_max,
        ratio: found as f64 / expected,
        triples,
    })
}

/// Tabulate r = v₂(a − 1) over all primes in (A, 2A], A = `lower` ≥ 1000.
pub fn avg_r(lower: u64) -> Result<RStatReport, LabError> {
    if lower < 1000 {
        return Err(LabError::OutOfRange("lower bound must be at least 1000"));
    }
    if lower > u64::MAX / 2 - 1 {
        return Err(LabError::OutOfRange("lower bound too large"));
    }
    let window = primes::sieve_interval_u64(lower, 2 * lower + 1);
    let mut histogram = BTreeMap::new();
    let mut total = 0u64;
    for &a in &window {
        let r = (a - 1).trailing_zeros();
        *histogram.entry(r).or_insert(0u64) += 1;
        total += r as u64;
    }
    let prime_count = window.len() as u64;
    Ok(RStatReport {
        lower,
        prime_count,
        mean_r: total as f64 / prime_count as f64,
        histogram,
    })
}

/// Run every (prime, pair) cell of the first window over an explicit
/// coefficient box (α ∈ [1, alpha_max], β ∈ [beta_lo, beta_hi] \ {0},
/// gcd(α, β) = 1) and collect every witness found, ordered by (a, α, β).
/// Primes dividing N are skipped — they belong to the gcd short-circuit, not
/// the table.
pub fn reproduce_table(
    n: &BigUint,
    alpha_max: i64,
    beta_lo: i64,
    beta_hi: i64,
) -> Result<Vec<Witness>, LabError> {
    if alpha_max < 1 || beta_lo > beta_hi {
        return Err(LabError::OutOfRange("box must satisfy alpha_max >= 1, beta_lo <= beta_hi"));
    }
    if *n < BigUint::from(4u32) {
        return Err(LabError::OutOfRange("N must be at least 4"));
    }
    let mut box_pairs = Vec::new();
    for alpha in 1..=alpha_max {
        for beta in beta_lo..=beta_hi {
            if beta != 0 && alpha.gcd(&beta.abs()) == 1 {
                box_pairs.push((alpha, beta));
            }
        }
    }
    // the s-band must cover every pair in the box, as it would at the
    // smallest standard bound containing it
    let needed = [2 * alpha_max, beta_lo.abs(), 2 * beta_hi.max(0), 2]
        .into_iter()
        .max()
        .expect("nonempty");
    let beta_max = if needed % 2 == 0 { needed } else { needed + 1 };

    let (lo, hi) = engine::window_bounds(n, 1, (1, 2));
    let window: Vec<BigUint> =
        primes::PrimeWindow::new(lo, hi).collect();

    let per_prime: Vec<Result<Vec<Witness>, LabError>> = window
        .par_iter()
        .map(|a| {
            if !n.gcd(a).is_one() {
                return Ok(Vec::new());
            }
            let mut rows = Vec::new();
            for &(alpha, beta) in &box_pairs {
                if divides_coeff(a, alpha) || divides_coeff(a, beta) {
                    continue;
                }
                let outcome = engine::attempt(n, a, alpha, beta, beta_max)
                    .map_err(|_| LabError::OutOfRange("attempt rejected a table cell"))?;
                if let AttemptStatus::Found(w) = outcome.status {
                    rows.push(w);
                }
            }
            Ok(rows)
        })
        .collect();

    let mut out = Vec::new();
    for rows in per_prime {
        out.extend(rows?);
    }
    Ok(out)
}

fn divides_coeff(a: &BigUint, coeff: i64) -> bool {
    match a.to_u64() {
        Some(a_u) => coeff.unsigned_abs() % a_u == 0,
        None => false,
    }
}
