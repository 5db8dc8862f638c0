//! Modular arithmetic and exact integer root extraction.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArithError {
    /// The element shares a factor with the modulus.
    #[error("element not invertible modulo {0}")]
    NotInvertible(BigUint),
    /// `tonelli_shanks` was handed a quadratic nonresidue.
    #[error("no square root modulo {0}")]
    NoRoot(BigUint),
    /// Even modulus, modulus < 3, or residue ≡ 0.
    #[error("modulus must be an odd prime ≥ 3 and the residue nonzero")]
    InvalidModulus,
}

/// Both square roots of a residue, plus the 2-adic valuation of a−1 that the
/// root-finding loop ran under.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SqrtResult {
    /// The smaller of the two roots.
    pub root: BigUint,
    /// The companion root a − root.
    pub other_root: BigUint,
    /// r with a − 1 = q·2^r, q odd.
    pub r_exponent: u32,
}

/// Greatest common divisor; gcd(0, y) = y.
pub fn gcd(x: &BigUint, y: &BigUint) -> BigUint {
    x.gcd(y)
}

// u64 specializations of the modular kernels. The search spends nearly all
// of its time on moduli far below 2^64, where u128 intermediates beat
// heap-allocated bignum temporaries by an order of magnitude; each fast path
// runs the exact same algorithm as its bignum twin, so results are identical.

fn mod_inverse_u64(x: u64, m: u64) -> Option<u64> {
    if x == 0 {
        return None;
    }
    let (mut old_r, mut r) = (x as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let quot = old_r / r;
        (old_r, r) = (r, old_r - quot * r);
        (old_s, s) = (s, old_s - quot * s);
    }
    if old_r != 1 {
        return None;
    }
    Some(old_s.rem_euclid(m as i128) as u64)
}

fn mod_pow_u64(base: u64, mut exp: u64, m: u64) -> u64 {
    let m = m as u128;
    let mut b = base as u128 % m;
    let mut acc = 1u128 % m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        exp >>= 1;
    }
    acc as u64
}

fn legendre_u64(n: u64, a: u64) -> i8 {
    let e = mod_pow_u64(n % a, (a - 1) >> 1, a);
    if e == 0 {
        0
    } else if e == 1 {
        1
    } else {
        -1
    }
}

/// Inverse of x modulo a (a ≥ 2), as the representative in (0, a).
pub fn mod_inverse(x: &BigInt, a: &BigUint) -> Result<BigUint, ArithError> {
    let m = BigInt::from(a.clone());
    let r = x.mod_floor(&m);
    if let (Some(r64), Some(a64)) = (r.to_u64(), a.to_u64()) {
        return mod_inverse_u64(r64, a64)
            .map(BigUint::from)
            .ok_or_else(|| ArithError::NotInvertible(a.clone()));
    }
    if r.is_zero() {
        return Err(ArithError::NotInvertible(a.clone()));
    }
    let eg = r.extended_gcd(&m);
    if !eg.gcd.is_one() {
        return Err(ArithError::NotInvertible(a.clone()));
    }
    Ok(eg.x.mod_floor(&m).to_biguint().expect("mod_floor of positive modulus is nonnegative"))
}

/// base^exp mod a, by square-and-multiply.
pub fn mod_pow(base: &BigUint, exp: &BigUint, a: &BigUint) -> BigUint {
    if let (Some(a64), Some(e64)) = (a.to_u64(), exp.to_u64()) {
        let b64 = (base % a).to_u64().expect("reduced below a u64 modulus");
        return BigUint::from(mod_pow_u64(b64, e64, a64));
    }
    base.modpow(exp, a)
}

/// Legendre symbol (n/a) for odd prime a, via Euler's criterion: +1, −1, or 0.
pub fn legendre(n: &BigUint, a: &BigUint) -> i8 {
    if let Some(a64) = a.to_u64() {
        let n64 = (n % a).to_u64().expect("reduced below a u64 modulus");
        return legendre_u64(n64, a64);
    }
    let e = (n % a).modpow(&((a - 1u32) >> 1), a);
    if e.is_zero() {
        0
    } else if e.is_one() {
        1
    } else {
        -1
    }
}

/// Square root of n modulo an odd prime a, Tonelli–Shanks.
///
/// The nonresidue needed by the reduction ladder is found by scanning
/// c = 2, 3, 4, … for the first with (c/a) = −1, so runs are deterministic.
/// Cost is O(log a) multiplications plus O(r²) ladder steps, r the 2-adic
/// valuation of a − 1.
pub fn tonelli_shanks(n: &BigUint, a: &BigUint) -> Result<SqrtResult, ArithError> {
    if a.is_even() || *a < BigUint::from(3u32) {
        return Err(ArithError::InvalidModulus);
    }
    let n = n % a;
    if n.is_zero() {
        return Err(ArithError::InvalidModulus);
    }
    if let Some(a64) = a.to_u64() {
        let n64 = n.to_u64().expect("reduced below a u64 modulus");
        return match tonelli_shanks_u64(n64, a64) {
            Some((root, other_root, r_exponent)) => Ok(SqrtResult {
                root: BigUint::from(root),
                other_root: BigUint::from(other_root),
                r_exponent,
            }),
            None => Err(ArithError::NoRoot(a.clone())),
        };
    }
    let a_minus_1 = a - 1u32;
    let r = a_minus_1.trailing_zeros().expect("a - 1 > 0") as u32;
    let q = &a_minus_1 >> r;

    let mut t = n.modpow(&q, a);
    let mut x;
    if t.is_one() {
        x = n.modpow(&((&q + 1u32) >> 1), a);
    } else {
        // n is a residue iff ord(t) < 2^r; walking t through ≤ r squarings
        // decides that before any ladder work.
        let mut probe = t.clone();
        let mut i = 0u32;
        while !probe.is_one() && i < r {
            probe = &probe * &probe % a;
            i += 1;
        }
        if !probe.is_one() || i == r {
            return Err(ArithError::NoRoot(a.clone()));
        }

        let mut c_base = BigUint::from(2u32);
        while legendre(&c_base, a) != -1 {
            c_base += 1u32;
        }
        let mut c = c_base.modpow(&q, a);
        let mut m = r;
        x = n.modpow(&((&q + 1u32) >> 1), a);
        while !t.is_one() {
            let mut i = 0u32;
            let mut probe = t.clone();
            while !probe.is_one() {
                probe = &probe * &probe % a;
                i += 1;
            }
            debug_assert!(i < m);
            let b = c.modpow(&(BigUint::one() << (m - i - 1) as u64), a);
            x = x * &b % a;
            c = &b * &b % a;
            t = t * &c % a;
            m = i;
        }
    }

    let other = a - &x;
    let (root, other_root) = if x <= other { (x, other) } else { (other, x) };
    debug_assert_eq!(&root * &root % a, n);
    Ok(SqrtResult { root, other_root, r_exponent: r })
}

// The same ladder in machine words; n already reduced mod a and nonzero,
// a odd and ≥ 3. Returns None for a nonresidue.
fn tonelli_shanks_u64(n: u64, a: u64) -> Option<(u64, u64, u32)> {
    let wide = a as u128;
    let mul = |x: u64, y: u64| (x as u128 * y as u128 % wide) as u64;
    let a_minus_1 = a - 1;
    let r = a_minus_1.trailing_zeros();
    let q = a_minus_1 >> r;

    let mut t = mod_pow_u64(n, q, a);
    let x;
    if t == 1 {
        x = mod_pow_u64(n, (q + 1) >> 1, a);
    } else {
        let mut probe = t;
        let mut i = 0u32;
        while probe != 1 && i < r {
            probe = mul(probe, probe);
            i += 1;
        }
        if probe != 1 || i == r {
            return None;
        }

        let mut c_base = 2u64;
        while legendre_u64(c_base, a) != -1 {
            c_base += 1;
        }
        let mut c = mod_pow_u64(c_base, q, a);
        let mut m = r;
        let mut walker = mod_pow_u64(n, (q + 1) >> 1, a);
        while t != 1 {
            let mut i = 0u32;
            let mut probe = t;
            while probe != 1 {
                probe = mul(probe, probe);
                i += 1;
            }
            debug_assert!(i < m);
            let b = mod_pow_u64(c, 1u64 << (m - i - 1), a);
            walker = mul(walker, b);
            c = mul(b, b);
            t = mul(t, c);
            m = i;
        }
        x = walker;
    }

    let other = a - x;
    let (root, other_root) = if x <= other { (x, other) } else { (other, x) };
    debug_assert_eq!(mul(root, root), n);
    Some((root, other_root, r))
}

/// Floor square root and whether it is exact.
pub fn isqrt(n: &BigUint) -> (BigUint, bool) {
    let root = n.sqrt();
    let exact = &(&root * &root) == n;
    (root, exact)
}

// Bits set at the quadratic residues of 64; squares can be rejected by their
// low six bits before paying for an exact root.
const SQUARE_MOD_64: u64 = {
    let mut mask = 0u64;
    let mut k = 0u64;
    while k < 64 {
        mask |= 1 << ((k * k) % 64);
        k += 1;
    }
    mask
};

fn maybe_square(d: &BigInt) -> bool {
    let low = d.magnitude().iter_u64_digits().next().unwrap_or(0);
    (SQUARE_MOD_64 >> (low & 63)) & 1 == 1
}

/// All integer roots of a2·x² + a1·x + a0 (a2 ≠ 0), ascending and deduped.
pub fn solve_quadratic_integer(a2: &BigInt, a1: &BigInt, a0: &BigInt) -> Vec<BigInt> {
    assert!(!a2.is_zero(), "leading coefficient must be nonzero");
    let disc = a1 * a1 - BigInt::from(4) * a2 * a0;
    quadratic_roots_from_discriminant(a2, a1, &disc)
}

/// Integer roots of a2·x² + a1·x + a0 when the discriminant a1² − 4·a2·a0 has
/// already been computed — callers scanning a family of quadratics can update
/// it incrementally instead of paying three multiplications per candidate.
pub(crate) fn quadratic_roots_from_discriminant(
    a2: &BigInt,
    a1: &BigInt,
    disc: &BigInt,
) -> Vec<BigInt> {
    if disc.is_negative() || !maybe_square(disc) {
        return Vec::new();
    }
    let (droot, exact) = isqrt(disc.magnitude());
    if !exact {
        return Vec::new();
    }
    let d = BigInt::from(droot);
    let two_a = a2 * 2;
    let mut out = Vec::with_capacity(2);
    for num in [&d - a1, -&d - a1] {
        let (quot, rem) = num.div_rem(&two_a);
        if rem.is_zero() {
            out.push(quot);
        }
    }
    out.sort();
    out.dedup();
    out
}
