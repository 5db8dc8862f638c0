//! Primality testing, interval sieving, and prime-window iteration.

use num_bigint::{BigUint, RandBigInt};
use num_integer::{Integer, Roots};
use num_traits::{One, ToPrimitive, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::VecDeque;
use std::sync::OnceLock;

/// Rounds used by [`is_prime`] above the deterministic range.
pub const DEFAULT_MR_ROUNDS: u32 = 40;

const SMALL_PRIMES: [u64; 13] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41];

// Below this bound the 13 fixed bases form a complete Miller–Rabin witness
// set, so answers are exact rather than probabilistic.
fn deterministic_bound() -> &'static BigUint {
    static BOUND: OnceLock<BigUint> = OnceLock::new();
    BOUND.get_or_init(|| "3317044064679887385961981".parse().unwrap())
}

/// Primality with the default round count.
pub fn is_prime(n: &BigUint) -> bool {
    is_prime_with(n, DEFAULT_MR_ROUNDS)
}

/// Miller–Rabin: exact below ~3.3·10²⁴ via the 13 fixed bases, otherwise
/// `rounds` extra bases drawn from a stream seeded by n itself (so equal
/// inputs always classify identically).
pub fn is_prime_with(n: &BigUint, rounds: u32) -> bool {
    if *n < BigUint::from(2u32) {
        return false;
    }
    for p in SMALL_PRIMES {
        let p = BigUint::from(p);
        if *n == p {
            return true;
        }
        if (n % &p).is_zero() {
            return false;
        }
    }

    let n_minus_1 = n - 1u32;
    let s = n_minus_1.trailing_zeros().expect("n - 1 > 0");
    let d = &n_minus_1 >> s;

    let witnessed = |base: &BigUint| -> bool {
        // true when `base` proves n composite
        let mut x = base.modpow(&d, n);
        if x.is_one() || x == n_minus_1 {
            return false;
        }
        for _ in 1..s {
            x = &x * &x % n;
            if x == n_minus_1 {
                return false;
            }
        }
        true
    };

    for b in SMALL_PRIMES {
        if witnessed(&BigUint::from(b)) {
            return false;
        }
    }
    if n <= deterministic_bound() {
        return true;
    }

    let seed = n.iter_u64_digits().next().unwrap_or(0) ^ (n.bits().rotate_left(32));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let lo = BigUint::from(2u32);
    let hi = &n_minus_1 - 1u32;
    for _ in 0..rounds.max(1) {
        let base = rng.gen_biguint_range(&lo, &hi);
        if witnessed(&base) {
            return false;
        }
    }
    true
}

/// Smallest prime strictly greater than n.
pub fn next_prime(n: &BigUint) -> BigUint {
    next_prime_with(n, DEFAULT_MR_ROUNDS)
}

/// [`next_prime`] with an explicit round count for the probabilistic range.
pub fn next_prime_with(n: &BigUint, rounds: u32) -> BigUint {
    if *n < BigUint::from(2u32) {
        return BigUint::from(2u32);
    }
    let mut c = n + 1u32;
    if c.is_even() {
        c += 1u32;
    }
    while !is_prime_with(&c, rounds) {
        c += 2u32;
    }
    c
}

// Sieve segments hold 2^20 candidates; base primes stay cached per window.
const SEGMENT_SPAN: u64 = 1 << 20;
// Base-prime storage is O(√hi) — cap intervals where that would stop being
// sieve-friendly (callers fall back to scanning).
const SIEVE_HI_LIMIT: u64 = 1 << 52;

fn simple_sieve(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let size = (limit + 1) as usize;
    let mut composite = vec![false; size];
    let mut p = 2u64;
    while p * p <= limit {
        if !composite[p as usize] {
            let mut m = p * p;
            while m <= limit {
                composite[m as usize] = true;
                m += p;
            }
        }
        p += 1;
    }
    (2..=limit).filter(|&k| !composite[k as usize]).collect()
}

// Primes in [start, end), marking multiples of the cached base primes.
fn sieve_segment(base: &[u64], start: u64, end: u64) -> Vec<u64> {
    if end <= start {
        return Vec::new();
    }
    let len = (end - start) as usize;
    let mut composite = vec![false; len];
    for &p in base {
        if p * p >= end {
            break;
        }
        let mut m = (p * p).max(p * start.div_ceil(p));
        while m < end {
            if m >= start {
                composite[(m - start) as usize] = true;
            }
            m += p;
        }
    }
    (start..end)
        .filter(|&k| k >= 2 && !composite[(k - start) as usize])
        .collect()
}

/// Primes p with lo < p < hi (both bounds exclusive), by segmented sieve.
///
/// Storage stays O(√hi + segment) regardless of interval width. Panics when
/// hi exceeds 2⁵², where the base table would no longer be sieve-friendly —
/// use a scanning [`PrimeWindow`] there instead.
pub fn sieve_interval(lo: &BigUint, hi: &BigUint) -> Vec<BigUint> {
    let hi_u = hi
        .to_u64()
        .filter(|&h| h <= SIEVE_HI_LIMIT)
        .unwrap_or_else(|| panic!("sieve_interval bound {hi} exceeds the sieve-friendly range"));
    let lo_u = lo.to_u64().unwrap_or(u64::MAX);
    sieve_interval_u64(lo_u, hi_u).into_iter().map(BigUint::from).collect()
}

/// u64 worker behind [`sieve_interval`]; same open-interval convention.
pub fn sieve_interval_u64(lo: u64, hi: u64) -> Vec<u64> {
    if hi <= lo + 1 {
        return Vec::new();
    }
    let start = lo + 1;
    let base = simple_sieve((hi - 1).sqrt());
    let mut out = Vec::new();
    let mut s = start;
    while s < hi {
        let e = hi.min(s + SEGMENT_SPAN);
        out.extend(sieve_segment(&base, s, e));
        s = e;
    }
    out
}

/// How a [`PrimeWindow`] enumerates its primes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WindowStrategy {
    /// Sieve when the window is u64-sized and expects more than 64 primes,
    /// otherwise scan.
    Auto,
    /// Segmented sieve (window must fit the sieve-friendly range).
    Sieve,
    /// Miller–Rabin next-prime scanning; works at any size.
    Scan,
}

/// Iterator over the primes in (lo, hi), in ascending order.
pub struct PrimeWindow {
    hi: BigUint,
    cursor: BigUint,
    sieve: bool,
    rounds: u32,
    // sieve-mode state
    buf: VecDeque<u64>,
    seg_next: u64,
    seg_hi: u64,
    base: Option<Vec<u64>>,
}

impl PrimeWindow {
    pub fn new(lo: BigUint, hi: BigUint) -> Self {
        Self::with_strategy(lo, hi, WindowStrategy::Auto, DEFAULT_MR_ROUNDS)
    }

    pub fn with_strategy(lo: BigUint, hi: BigUint, strategy: WindowStrategy, rounds: u32) -> Self {
        let sieve = match strategy {
            WindowStrategy::Sieve => true,
            WindowStrategy::Scan => false,
            WindowStrategy::Auto => match (lo.to_f64(), hi.to_u64()) {
                (Some(lo_f), Some(hi_u)) if hi_u <= SIEVE_HI_LIMIT => {
                    let expected = (hi_u as f64 - lo_f) / lo_f.max(2.0).ln();
                    expected > 64.0
                }
                _ => false,
            },
        };
        let (seg_next, seg_hi) = if sieve {
            let hi_u = hi
                .to_u64()
                .filter(|&h| h <= SIEVE_HI_LIMIT)
                .unwrap_or_else(|| panic!("sieve window bound {hi} exceeds the sieve-friendly range"));
            (lo.to_u64().map_or(u64::MAX, |l| l + 1), hi_u)
        } else {
            (0, 0)
        };
        PrimeWindow {
            hi,
            cursor: lo,
            sieve,
            rounds,
            buf: VecDeque::new(),
            seg_next,
            seg_hi,
            base: None,
        }
    }
}

impl Iterator for PrimeWindow {
    type Item = BigUint;

    fn next(&mut self) -> Option<BigUint> {
        if self.sieve {
            while self.buf.is_empty() && self.seg_next < self.seg_hi {
                let base = self
                    .base
                    .get_or_insert_with(|| simple_sieve((self.seg_hi - 1).sqrt()));
                let end = self.seg_hi.min(self.seg_next + SEGMENT_SPAN);
                self.buf = sieve_segment(base, self.seg_next, end).into();
                self.seg_next = end;
            }
            self.buf.pop_front().map(BigUint::from)
        } else {
            let p = next_prime_with(&self.cursor, self.rounds);
            if p < self.hi {
                self.cursor = p.clone();
                Some(p)
            } else {
                // park the cursor so later calls stay cheap
                self.cursor = self.hi.clone();
                None
            }
        }
    }
}
