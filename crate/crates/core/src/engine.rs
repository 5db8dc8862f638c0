//! The factor search: per-(a, α, β) digit recovery, and the two drivers that
//! sweep prime windows and pair sets until a witness appears.

use crate::arith::{self, ArithError};
use crate::pairs::{self, CandidatePair, PairSet};
use crate::primes::PrimeWindow;
use crate::primes::WindowStrategy;
use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EngineError {
    /// A caller broke an attempt precondition — a driver bug, not a search
    /// outcome.
    #[error("precondition violated: {0}")]
    PreconditionViolated(&'static str),
    /// The configured search space was exhausted.
    #[error("no factorization found within the configured bounds")]
    NoFactorFound,
    /// N < 4 admits no nontrivial splitting.
    #[error("input has no nontrivial factorization")]
    InputIsUnit,
}

/// Which driver runs the search.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Variant {
    /// Fixed window ((2N)^¼, 2(2N)^¼), growing β_max, new pairs only per
    /// round. Assumes max(U, V) < (2N)^½.
    A,
    /// Doubling windows (2^(j−1)X, 2^j X) with β_max = ⌈j·ln N⌉ (rounded up
    /// to even) and the full pair set each round. No balance assumption.
    B,
}

/// Driver knobs; `Default` gives the variant-A search with its usual bounds.
#[derive(Debug, Clone)]
pub struct EngineConfig {
    pub variant: Variant,
    /// First β_max tried by variant A (even, ≥ 2).
    pub beta_max_init: i64,
    /// Round-to-round β_max increment for variant A (even, ≥ 2).
    pub beta_max_step: i64,
    /// Window edges as multiples of X = (2N)^¼; (1, 2) is the standard
    /// window, doubled j−1 times by variant B.
    pub window_base_multiplier: (u32, u32),
    /// Fail-closed round cap for variant B.
    pub max_j: u32,
    /// Report the canonically first witness regardless of worker scheduling.
    pub deterministic: bool,
    /// Allow sieved windows (otherwise every window scans via next-prime).
    pub use_sieve: bool,
    /// Rounds for primality checks beyond the deterministic range.
    pub miller_rabin_rounds: u32,
    /// Emit per-attempt trace events (forces a single-threaded scan so event
    /// order is reproducible).
    pub trace: bool,
}

impl Default for EngineConfig {
    fn default() -> Self {
        EngineConfig {
            variant: Variant::A,
            beta_max_init: 2,
            beta_max_step: 2,
            window_base_multiplier: (1, 2),
            max_j: 20,
            deterministic: true,
            use_sieve: true,
            miller_rabin_rounds: crate::primes::DEFAULT_MR_ROUNDS,
            trace: false,
        }
    }
}

impl EngineConfig {
    pub fn variant_a() -> Self {
        EngineConfig::default()
    }

    pub fn variant_b() -> Self {
        EngineConfig { variant: Variant::B, ..EngineConfig::default() }
    }
}

/// A complete factorization certificate: N = U·V with U = u1·a + u0 and
/// V = v1·a + v0, tied to the (a, α, β) that produced it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    #[serde(with = "decimal")]
    pub a: BigUint,
    pub alpha: i64,
    pub beta: i64,
    #[serde(with = "decimal")]
    pub u0: BigUint,
    #[serde(with = "decimal")]
    pub v0: BigUint,
    #[serde(with = "decimal")]
    pub s: BigInt,
    #[serde(with = "decimal")]
    pub u1: BigUint,
    #[serde(with = "decimal")]
    pub v1: BigUint,
    #[serde(rename = "U", with = "decimal")]
    pub u: BigUint,
    #[serde(rename = "V", with = "decimal")]
    pub v: BigUint,
}

/// How one attempt ended.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AttemptStatus {
    Found(Witness),
    NotFound,
    /// A window prime divided N outright (driver gcd check).
    TrivialDivisor(BigUint),
}

/// Outcome and effort counters for one attempt.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AttemptOutcome {
    pub status: AttemptStatus,
    /// Square roots examined (0, 1, or 2).
    pub roots_tried: u32,
    /// Digit-sum candidates examined, over all roots; each root's band holds
    /// at most 2·β_max of them.
    pub s_candidates_tried: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TraceOutcome {
    Found,
    NotFound,
    TrivialDivisor,
}

/// One line of the search log: the cell tried and what it cost.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceEvent {
    #[serde(with = "decimal")]
    pub a: BigUint,
    pub alpha: i64,
    pub beta: i64,
    pub outcome: TraceOutcome,
    pub roots_tried: u32,
    pub s_candidates_tried: u64,
}

pub(crate) mod decimal {
    use serde::de::Error as _;
    use serde::{Deserialize, Deserializer, Serializer};
    use std::fmt::Display;
    use std::str::FromStr;

    pub fn serialize<T: Display, S: Serializer>(v: &T, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(v)
    }

    pub fn deserialize<'de, T, D>(d: D) -> Result<T, D::Error>
    where
        T: FromStr,
        T::Err: Display,
        D: Deserializer<'de>,
    {
        String::deserialize(d)?.parse().map_err(D::Error::custom)
    }
}

fn pv(msg: &'static str) -> EngineError {
    EngineError::PreconditionViolated(msg)
}

/// Try to factor N through the single cell (a, α, β): solve
/// u0² ≡ α⁻¹βN (mod a), derive v0 = β⁻¹αu0, then walk the ≤ 2·β_max digit
/// sums s ≡ t (mod a) in (−β_max·a, β_max·a) per root, solving the quadratic
/// each β-multiplied digit identity reduces to. Roots ascend, s ascends, so
/// outcomes are canonical.
///
/// Requires: a an odd prime not dividing α, β, or N; α ≥ 1; β ≠ 0; β_max
/// even ≥ 2.
pub fn attempt(
    n: &BigUint,
    a: &BigUint,
    alpha: i64,
    beta: i64,
    beta_max: i64,
) -> Result<AttemptOutcome, EngineError> {
    if beta_max < 2 || beta_max % 2 != 0 {
        return Err(pv("beta_max must be even and >= 2"));
    }
    if alpha < 1 || beta == 0 {
        return Err(pv("pair must satisfy alpha >= 1, beta != 0"));
    }
    if a.is_even() || *a < BigUint::from(3u32) {
        return Err(pv("a must be an odd prime"));
    }
    let a_int = BigInt::from(a.clone());
    let alpha_int = BigInt::from(alpha);
    let beta_int = BigInt::from(beta);
    if alpha_int.mod_floor(&a_int).is_zero() {
        return Err(pv("a must not divide alpha"));
    }
    if beta_int.mod_floor(&a_int).is_zero() {
        return Err(pv("a must not divide beta"));
    }
    if (n % a).is_zero() {
        return Err(pv("a must not divide N"));
    }

    let n_int = BigInt::from(n.clone());
    let alpha_inv = arith::mod_inverse(&alpha_int, a).map_err(|_| pv("alpha not invertible"))?;
    let beta_inv = arith::mod_inverse(&beta_int, a).map_err(|_| pv("beta not invertible"))?;

    let m = (BigInt::from(alpha_inv) * &beta_int * &n_int)
        .mod_floor(&a_int)
        .to_biguint()
        .expect("mod_floor is nonnegative");
    debug_assert!(!m.is_zero());

    let sqrt = match arith::tonelli_shanks(&m, a) {
        Ok(s) => s,
        Err(ArithError::NoRoot(_)) => {
            return Ok(AttemptOutcome {
                status: AttemptStatus::NotFound,
                roots_tried: 0,
                s_candidates_tried: 0,
            })
        }
        Err(_) => return Err(pv("square root inputs out of domain")),
    };

    let mut roots_tried = 0u32;
    let mut s_tried = 0u64;
    let neg_alpha_a = -&alpha_int * &a_int; // leading quadratic coefficient
    let four_a = &neg_alpha_a << 2;
    let a_sq = &a_int * &a_int;
    let a_4 = &a_sq * &a_sq;
    let two_a_4 = &a_4 << 1;

    for u0 in [&sqrt.root, &sqrt.other_root] {
        roots_tried += 1;
        let u0_int = BigInt::from(u0.clone());
        let u0_a = &u0_int * &a_int;
        let v0 = (BigInt::from(beta_inv.clone()) * &alpha_int * &u0_int)
            .mod_floor(&a_int)
            .to_biguint()
            .expect("mod_floor is nonnegative");
        debug_assert!(!v0.is_zero() && v0 < *a);
        let v0_int = BigInt::from(v0.clone());

        // (N − u0·v0) is divisible by a by construction of v0
        let q = (&n_int - &u0_int * &v0_int) / &a_int;
        let u0_inv = arith::mod_inverse(&u0_int, a).map_err(|_| pv("u0 not invertible"))?;
        let t = (&beta_int * BigInt::from(u0_inv) * &q).mod_floor(&a_int);

        // s = t + k·a over the open band (−β_max·a, β_max·a); when t = 0 the
        // k = −β_max endpoint touches the band edge and is excluded
        let k_min = if t.is_zero() { -beta_max + 1 } else { -beta_max };
        let k_max = beta_max - 1;

        // the quadratic in u1, divided through by a:
        //   (−α·a)u1² + (s·a + βv0 − αu0)u1 + (u0·s − β·q) = 0
        // Stepping k → k+1 adds a to s, a² to the linear coefficient, and
        // u0·a to the constant term, so the discriminant moves by a quadratic
        // in k; tracking it with second differences costs two additions per
        // candidate instead of three multiplications.
        let c1 = &beta_int * &v0_int - &alpha_int * &u0_int;
        let c2 = -&beta_int * &q;

        let mut s = &t + BigInt::from(k_min) * &a_int;
        let mut b_coeff = &s * &a_int + &c1;
        let c_start = &u0_int * &s + &c2;
        let mut disc = &b_coeff * &b_coeff - &four_a * &c_start;
        let mut disc_step = (&b_coeff << 1) * &a_sq + &a_4 - &four_a * &u0_a;

        for _ in k_min..=k_max {
            s_tried += 1;
            for u1 in arith::quadratic_roots_from_discriminant(&neg_alpha_a, &b_coeff, &disc) {
                if u1.is_negative() {
                    continue;
                }
                let (v1, rem) = (&s - &alpha_int * &u1).div_rem(&beta_int);
                if !rem.is_zero() || v1.is_negative() {
                    continue;
                }
                let u_cand = (&u1 * &a_int + &u0_int).to_biguint().expect("nonnegative");
                let v_cand = (&v1 * &a_int + &v0_int).to_biguint().expect("nonnegative");
                if u_cand > BigUint::one() && v_cand > BigUint::one() && &u_cand * &v_cand == *n {
                    let witness = Witness {
                        a: a.clone(),
                        alpha,
                        beta,
                        u0: u0.clone(),
                        v0,
                        s: s.clone(),
                        u1: u1.to_biguint().expect("nonnegative"),
                        v1: v1.to_biguint().expect("nonnegative"),
                        u: u_cand,
                        v: v_cand,
                    };
                    return Ok(AttemptOutcome {
                        status: AttemptStatus::Found(witness),
                        roots_tried,
                        s_candidates_tried: s_tried,
                    });
                }
            }
            s += &a_int;
            b_coeff += &a_sq;
            disc += &disc_step;
            disc_step += &two_a_4;
        }
    }

    Ok(AttemptOutcome {
        status: AttemptStatus::NotFound,
        roots_tried,
        s_candidates_tried: s_tried,
    })
}

/// Recheck every witness claim against N from scratch: the product, the digit
/// identities, the digit ranges (0 < u0, v0 < a), the pair congruence
/// βv0 ≡ αu0 (mod a), the digit sum s = αu1 + βv1, and a | βV − αU.
///
/// Trivial-divisor witnesses (from the drivers' gcd short-circuit) carry
/// u0 = 0 and deliberately fail this strict check.
pub fn verify(n: &BigUint, w: &Witness) -> bool {
    let one = BigUint::one();
    if w.u <= one || w.v <= one || &w.u * &w.v != *n {
        return false;
    }
    if w.u0.is_zero() || w.u0 >= w.a || w.v0.is_zero() || w.v0 >= w.a {
        return false;
    }
    if &w.u1 * &w.a + &w.u0 != w.u || &w.v1 * &w.a + &w.v0 != w.v {
        return false;
    }
    let a = BigInt::from(w.a.clone());
    let alpha = BigInt::from(w.alpha);
    let beta = BigInt::from(w.beta);
    let u0 = BigInt::from(w.u0.clone());
    let v0 = BigInt::from(w.v0.clone());
    let u1 = BigInt::from(w.u1.clone());
    let v1 = BigInt::from(w.v1.clone());
    if !(&beta * &v0 - &alpha * &u0).mod_floor(&a).is_zero() {
        return false;
    }
    if &alpha * &u1 + &beta * &v1 != w.s {
        return false;
    }
    let u = BigInt::from(w.u.clone());
    let v = BigInt::from(w.v.clone());
    (&beta * &v - &alpha * &u).mod_floor(&a).is_zero()
}

/// Fixed-window driver (variant A). See [`Variant::A`].
pub fn factor_a(n: &BigUint, config: &EngineConfig) -> Result<Witness, EngineError> {
    run_variant(n, config, Variant::A, None)
}

/// Doubling-window driver (variant B). See [`Variant::B`].
pub fn factor_b(n: &BigUint, config: &EngineConfig) -> Result<Witness, EngineError> {
    run_variant(n, config, Variant::B, None)
}

/// Driver dispatch on `config.variant`.
pub fn factor(n: &BigUint, config: &EngineConfig) -> Result<Witness, EngineError> {
    run_variant(n, config, config.variant, None)
}

/// [`factor`] with a per-attempt trace sink; the scan runs single-threaded so
/// deterministic runs produce identical event sequences.
pub fn factor_traced(
    n: &BigUint,
    config: &EngineConfig,
    sink: &mut dyn FnMut(&TraceEvent),
) -> Result<Witness, EngineError> {
    run_variant(n, config, config.variant, Some(sink))
}

fn run_variant(
    n: &BigUint,
    config: &EngineConfig,
    variant: Variant,
    sink: Option<&mut (dyn FnMut(&TraceEvent) + '_)>,
) -> Result<Witness, EngineError> {
    if *n < BigUint::from(4u32) {
        return Err(EngineError::InputIsUnit);
    }
    // config.trace forces the sequential traced path even without a sink to
    // feed; a provided sink implies tracing
    match (sink, config.trace) {
        (Some(s), _) => dispatch(n, config, variant, Some(s)),
        (None, true) => {
            let mut discard = |_: &TraceEvent| {};
            dispatch(n, config, variant, Some(&mut discard))
        }
        (None, false) => dispatch(n, config, variant, None),
    }
}

fn dispatch(
    n: &BigUint,
    config: &EngineConfig,
    variant: Variant,
    sink: Option<&mut (dyn FnMut(&TraceEvent) + '_)>,
) -> Result<Witness, EngineError> {
    match variant {
        Variant::A => run_a(n, config, sink),
        Variant::B => run_b(n, config, sink),
    }
}

// Window edges for round j: primes p with m0·2^(j−1)·X < p < m1·2^(j−1)·X,
// X = (2N)^¼, decided exactly on fourth powers. Returns (lo, hi) with both
// bounds exclusive-as-floored: lo = ⌊lower⌋ and hi the least integer with
// p < hi ⟺ p < upper.
pub(crate) fn window_bounds(n: &BigUint, j: u32, mult: (u32, u32)) -> (BigUint, BigUint) {
    let two_n = n << 1u32;
    let shift = (4 * (j - 1)) as u64;
    let lo4 = (&two_n * BigUint::from(mult.0).pow(4)) << shift;
    let hi4 = (&two_n * BigUint::from(mult.1).pow(4)) << shift;
    let lo = lo4.nth_root(4);
    let hr = hi4.nth_root(4);
    let hi = if hr.pow(4) == hi4 { hr } else { hr + 1u32 };
    (lo, hi)
}

fn validate_even(value: i64, what: &'static str) -> Result<(), EngineError> {
    if value < 2 || value % 2 != 0 {
        return Err(pv(what));
    }
    Ok(())
}

fn run_a(
    n: &BigUint,
    config: &EngineConfig,
    mut sink: Option<&mut (dyn FnMut(&TraceEvent) + '_)>,
) -> Result<Witness, EngineError> {
    validate_even(config.beta_max_init, "beta_max_init must be even and >= 2")?;
    validate_even(config.beta_max_step, "beta_max_step must be even and >= 2")?;
    let two_n = n << 1u32;
    let mut beta_max = config.beta_max_init;
    let mut old = PairSet::empty();
    let mut first_round = true;
    loop {
        let current = pairs::enumerate(beta_max).map_err(|_| pv("beta_max out of range"))?;
        let fresh = pairs::difference(&current, &old);
        if let Some(w) =
            scan_window(n, 1, &fresh, beta_max, first_round, config, sink.as_deref_mut())?
        {
            return Ok(w);
        }
        let next = beta_max + config.beta_max_step;
        // continue only while β_max + step < (2N)^¼, tested on fourth powers
        if BigUint::from(next as u64).pow(4) >= two_n {
            return Err(EngineError::NoFactorFound);
        }
        old = current;
        beta_max = next;
        first_round = false;
    }
}

fn run_b(
    n: &BigUint,
    config: &EngineConfig,
    mut sink: Option<&mut (dyn FnMut(&TraceEvent) + '_)>,
) -> Result<Witness, EngineError> {
    let ln_n = ln_big(n);
    for j in 1..=config.max_j {
        let raw = (j as f64 * ln_n).ceil() as i64;
        let beta_max = if raw % 2 == 0 { raw } else { raw + 1 }.max(2);
        let current = pairs::enumerate(beta_max).map_err(|_| pv("beta_max out of range"))?;
        if let Some(w) = scan_window(
            n,
            j,
            current.members(),
            beta_max,
            true,
            config,
            sink.as_deref_mut(),
        )? {
            return Ok(w);
        }
    }
    Err(EngineError::NoFactorFound)
}

fn ln_big(n: &BigUint) -> f64 {
    match n.to_f64() {
        Some(f) if f.is_finite() && f > 0.0 => f.ln(),
        _ => n.bits() as f64 * std::f64::consts::LN_2,
    }
}

const CHUNK: usize = 128;

fn scan_window(
    n: &BigUint,
    j: u32,
    pair_list: &[CandidatePair],
    beta_max: i64,
    gcd_check: bool,
    config: &EngineConfig,
    mut sink: Option<&mut (dyn FnMut(&TraceEvent) + '_)>,
) -> Result<Option<Witness>, EngineError> {
    let (lo, hi) = window_bounds(n, j, config.window_base_multiplier);
    let strategy = if config.use_sieve { WindowStrategy::Auto } else { WindowStrategy::Scan };
    let mut window =
        PrimeWindow::with_strategy(lo, hi, strategy, config.miller_rabin_rounds);

    if let Some(sink) = sink.as_deref_mut() {
        for a in window {
            if let Some(w) =
                process_prime(n, &a, pair_list, beta_max, gcd_check, Some(&mut *sink))?
            {
                return Ok(Some(w));
            }
        }
        return Ok(None);
    }

    loop {
        let chunk: Vec<BigUint> = window.by_ref().take(CHUNK).collect();
        if chunk.is_empty() {
            return Ok(None);
        }
        if config.deterministic {
            // workers race freely; ordering is restored by taking the
            // lowest prime index that produced a witness
            let results: Vec<Result<Option<(usize, Witness)>, EngineError>> = chunk
                .par_iter()
                .enumerate()
                .map(|(i, a)| {
                    process_prime(n, a, pair_list, beta_max, gcd_check, None)
                        .map(|o| o.map(|w| (i, w)))
                })
                .collect();
            let mut best: Option<(usize, Witness)> = None;
            for r in results {
                if let Some((i, w)) = r? {
                    if best.as_ref().map_or(true, |(bi, _)| i < *bi) {
                        best = Some((i, w));
                    }
                }
            }
            if let Some((_, w)) = best {
                return Ok(Some(w));
            }
        } else {
            let hit = chunk
                .par_iter()
                .find_map_any(|a| {
                    process_prime(n, a, pair_list, beta_max, gcd_check, None).transpose()
                })
                .transpose()?;
            if let Some(w) = hit {
                return Ok(Some(w));
            }
        }
    }
}

fn process_prime(
    n: &BigUint,
    a: &BigUint,
    pair_list: &[CandidatePair],
    beta_max: i64,
    gcd_check: bool,
    mut sink: Option<&mut (dyn FnMut(&TraceEvent) + '_)>,
) -> Result<Option<Witness>, EngineError> {
    if gcd_check {
        let d = n.gcd(a);
        if !d.is_one() {
            if let Some(sink) = sink.as_deref_mut() {
                sink(&TraceEvent {
                    a: a.clone(),
                    alpha: 1,
                    beta: 1,
                    outcome: TraceOutcome::TrivialDivisor,
                    roots_tried: 0,
                    s_candidates_tried: 0,
                });
            }
            return Ok(Some(trivial_witness(n, a)));
        }
    }
    if *a == BigUint::from(2u32) {
        // square-root recovery needs an odd prime; the gcd check above is
        // all that a = 2 can contribute
        return Ok(None);
    }
    for pair in pair_list {
        if divides(a, pair.alpha) || divides(a, pair.beta) {
            continue;
        }
        let outcome = attempt(n, a, pair.alpha, pair.beta, beta_max)?;
        if let Some(sink) = sink.as_deref_mut() {
            sink(&TraceEvent {
                a: a.clone(),
                alpha: pair.alpha,
                beta: pair.beta,
                outcome: match outcome.status {
                    AttemptStatus::Found(_) => TraceOutcome::Found,
                    AttemptStatus::NotFound => TraceOutcome::NotFound,
                    AttemptStatus::TrivialDivisor(_) => TraceOutcome::TrivialDivisor,
                },
                roots_tried: outcome.roots_tried,
                s_candidates_tried: outcome.s_candidates_tried,
            });
        }
        if let AttemptStatus::Found(w) = outcome.status {
            return Ok(Some(w));
        }
    }
    Ok(None)
}

fn divides(a: &BigUint, coeff: i64) -> bool {
    let c = coeff.unsigned_abs();
    match a.to_u64() {
        Some(a_u) => c % a_u == 0,
        None => false, // a exceeds any coefficient
    }
}

// gcd(N, a) = a here (a prime), so U = a with digits (u1, u0) = (1, 0); the
// cofactor's digits come from plain division. Fails strict verify by design.
fn trivial_witness(n: &BigUint, a: &BigUint) -> Witness {
    let v = n / a;
    let (v1, v0) = v.div_rem(a);
    let s = BigInt::from(&v1 + 1u32);
    Witness {
        a: a.clone(),
        alpha: 1,
        beta: 1,
        u0: BigUint::zero(),
        v0,
        s,
        u1: BigUint::one(),
        v1,
        u: a.clone(),
        v,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::str::FromStr;

    fn big(s: &str) -> BigUint {
        BigUint::from_str(s).unwrap()
    }

    const REF_N: &str = "23713634802068266491347";

    #[test]
    fn attempt_recovers_reference_row() {
        let n = big(REF_N);
        let out = attempt(&n, &big("804901"), 1, 3, 16).unwrap();
        let w = match out.status {
            AttemptStatus::Found(w) => w,
            other => panic!("expected Found, got {other:?}"),
        };
        assert_eq!(w.u0, big("523125"));
        assert_eq!(w.v0, big("174375"));
        assert_eq!(w.s, BigInt::from(702160));
        assert_eq!(w.u1, big("235108"));
        assert_eq!(w.v1, big("155684"));
        assert_eq!(w.u, big("189239187433"));
        assert_eq!(w.v, big("125310381659"));
        assert_eq!(out.roots_tried, 2); // 281776 fails first
        assert!(verify(&n, &w));
    }

    #[test]
    fn attempt_negative_beta_row() {
        let n = big(REF_N);
        let out = attempt(&n, &big("743161"), 7, -16, 16).unwrap();
        let w = match out.status {
            AttemptStatus::Found(w) => w,
            other => panic!("expected Found, got {other:?}"),
        };
        assert_eq!(w.s, BigInt::from(-2893914i64));
        assert_eq!(w.u, big("125310381659"));
        assert_eq!(w.v, big("189239187433"));
        assert!(verify(&n, &w));
    }

    #[test]
    fn attempt_miss_is_bounded() {
        let n = big(REF_N);
        let out = attempt(&n, &big("601291"), 1, 3, 16).unwrap();
        assert_eq!(out.status, AttemptStatus::NotFound);
        assert!(out.s_candidates_tried <= out.roots_tried as u64 * 32);
        // the congruence really has no solution in either orientation
        let u = BigInt::from(big("189239187433"));
        let v = BigInt::from(big("125310381659"));
        let a = BigInt::from(601291);
        let three = BigInt::from(3);
        assert!(!(&three * &v - &u).mod_floor(&a).is_zero());
        assert!(!(&three * &u - &v).mod_floor(&a).is_zero());
    }

    #[test]
    fn attempt_swapped_pair_swaps_factors() {
        let n = big(REF_N);
        let w13 = match attempt(&n, &big("804901"), 1, 3, 16).unwrap().status {
            AttemptStatus::Found(w) => w,
            other => panic!("{other:?}"),
        };
        let w31 = match attempt(&n, &big("804901"), 3, 1, 16).unwrap().status {
            AttemptStatus::Found(w) => w,
            other => panic!("{other:?}"),
        };
        assert_eq!(w13.u, w31.v);
        assert_eq!(w13.v, w31.u);
        assert_eq!(w13.u0, w31.v0);
        assert_eq!(w13.s, w31.s);
    }

    #[test]
    fn attempt_precondition_errors() {
        let n = big("1000076001443");
        assert!(matches!(
            attempt(&n, &big("8"), 1, 1, 16),
            Err(EngineError::PreconditionViolated(_))
        ));
        assert!(matches!(
            attempt(&n, &big("7"), 7, 1, 16),
            Err(EngineError::PreconditionViolated(_))
        ));
        assert!(matches!(
            attempt(&n, &big("7"), 1, -14, 16),
            Err(EngineError::PreconditionViolated(_))
        ));
        assert!(matches!(
            attempt(&big("1000037"), &big("1000037"), 1, 1, 16),
            Err(EngineError::PreconditionViolated(_))
        ));
        assert!(matches!(
            attempt(&n, &big("7"), 1, 1, 15),
            Err(EngineError::PreconditionViolated(_))
        ));
    }

    #[test]
    fn verify_rejects_perturbations() {
        let n = big(REF_N);
        let w = match attempt(&n, &big("804901"), 1, 3, 16).unwrap().status {
            AttemptStatus::Found(w) => w,
            other => panic!("{other:?}"),
        };
        assert!(verify(&n, &w));
        let mut bad = w.clone();
        bad.u1 += 1u32;
        assert!(!verify(&n, &bad));
        let mut bad = w.clone();
        bad.u0 = BigUint::zero();
        assert!(!verify(&n, &bad));
        let mut bad = w.clone();
        bad.s += 1;
        assert!(!verify(&n, &bad));
        let mut bad = w;
        bad.alpha = 2;
        assert!(!verify(&n, &bad));
    }

    #[test]
    fn factor_small_composites() {
        let w = factor_a(&big("6"), &EngineConfig::variant_a()).unwrap();
        assert_eq!((w.u.clone(), w.v.clone()), (big("2"), big("3")));
        // trivial-divisor shape: u0 = 0, strict verify refuses it
        assert!(w.u0.is_zero());
        assert!(!verify(&big("6"), &w));
        assert_eq!(&w.u1 * &w.a + &w.u0, w.u);
        assert_eq!(&w.v1 * &w.a + &w.v0, w.v);

        let w = factor_b(&big("77"), &EngineConfig::variant_b()).unwrap();
        let mut f = [w.u.clone(), w.v.clone()];
        f.sort();
        assert_eq!(f, [big("7"), big("11")]);
        assert_eq!(w.a, big("5"));
        assert!(verify(&big("77"), &w));
    }

    #[test]
    fn factor_rejects_tiny_inputs() {
        for n in ["0", "1", "2", "3"] {
            assert!(matches!(
                factor_a(&big(n), &EngineConfig::variant_a()),
                Err(EngineError::InputIsUnit)
            ));
        }
    }

    #[test]
    fn factor_a_gives_up_on_primes() {
        assert!(matches!(
            factor_a(&big("17"), &EngineConfig::variant_a()),
            Err(EngineError::NoFactorFound)
        ));
    }

    #[test]
    fn square_of_prime_still_factors() {
        // nothing in the recovery needs gcd(U, V) = 1: for N = k² the residue
        // is always a square and the equal split is found immediately
        let w = factor_b(&big("25"), &EngineConfig::variant_b()).unwrap();
        assert_eq!((w.u.clone(), w.v.clone()), (big("5"), big("5")));
        assert!(verify(&big("25"), &w));
    }

    #[test]
    fn twin_prime_product_variant_a() {
        let n = big("1000076001443"); // 1000037 · 1000039
        let w = factor_a(&n, &EngineConfig::variant_a()).unwrap();
        let mut f = [w.u.clone(), w.v.clone()];
        f.sort();
        assert_eq!(f, [big("1000037"), big("1000039")]);
        assert!(verify(&n, &w));
    }

    #[test]
    fn deterministic_runs_and_traces_agree() {
        let n = big("1000076001443");
        let cfg = EngineConfig { trace: true, ..EngineConfig::variant_a() };
        let mut t1 = Vec::new();
        let w1 = factor_traced(&n, &cfg, &mut |e| t1.push(e.clone())).unwrap();
        let mut t2 = Vec::new();
        let w2 = factor_traced(&n, &cfg, &mut |e| t2.push(e.clone())).unwrap();
        assert_eq!(w1, w2);
        assert!(!t1.is_empty());
        assert_eq!(t1, t2);
        // the last event is the hit
        assert_eq!(t1.last().unwrap().outcome, TraceOutcome::Found);
        // parallel run lands on the same witness
        let w3 = factor_a(&n, &EngineConfig::variant_a()).unwrap();
        assert_eq!(w1, w3);
    }

    #[test]
    fn unbalanced_factors_need_variant_b() {
        // U ≈ 2^10, V ≈ 2^22: max(U,V) far beyond (2N)^(1/2)
        let u = big("1021");
        let v = big("4194301");
        let n = &u * &v;
        let w = factor_b(&n, &EngineConfig::variant_b()).unwrap();
        let mut f = [w.u.clone(), w.v.clone()];
        f.sort();
        assert_eq!(f, [u, v]);
        assert!(verify(&n, &w));
    }

    #[test]
    fn variant_b_caps_out() {
        let cfg = EngineConfig { max_j: 2, ..EngineConfig::variant_b() };
        // a prime input is a guaranteed miss in every round
        assert!(matches!(
            factor_b(&big("1000000007"), &cfg),
            Err(EngineError::NoFactorFound)
        ));
    }

    #[test]
    fn witness_round_trips_through_json() {
        let n = big(REF_N);
        let w = match attempt(&n, &big("804901"), 1, 3, 16).unwrap().status {
            AttemptStatus::Found(w) => w,
            other => panic!("{other:?}"),
        };
        let text = serde_json::to_string(&w).unwrap();
        assert!(text.contains("\"U\":\"189239187433\""));
        let back: Witness = serde_json::from_str(&text).unwrap();
        assert_eq!(w, back);
        assert!(verify(&n, &back));
    }
}
