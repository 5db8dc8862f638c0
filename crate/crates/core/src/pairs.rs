//! The admissible coefficient pairs S(β_max) tried against each prime.
//!
//! S(β_max) = {(α, β) : gcd(α, β) = 1, 1 ≤ α ≤ β_max/2, −β_max ≤ β ≤ β_max/2,
//! β ≠ 0}. The asymmetric β range keeps the digit sum s = αu1 + βv1 inside
//! (−β_max·a, β_max·a) whenever the high digits are below a.

use num_integer::Integer;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PairError {
    #[error("beta_max must be an even integer >= 2, got {0}")]
    InvalidBound(i64),
}

/// One coefficient pair; ordering is lexicographic (α, then β).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct CandidatePair {
    pub alpha: i64,
    pub beta: i64,
}

/// The pairs of S(β_max), in canonical ascending order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairSet {
    beta_max: i64,
    members: Vec<CandidatePair>,
}

impl PairSet {
    /// The empty exclusion set used before the first search round.
    pub fn empty() -> PairSet {
        PairSet { beta_max: 0, members: Vec::new() }
    }

    pub fn beta_max(&self) -> i64 {
        self.beta_max
    }

    pub fn members(&self) -> &[CandidatePair] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    // Box membership is a constraint check: any coprime (α, β≠0) lies in
    // S(b) iff it fits the α and β ranges.
    fn contains(&self, p: &CandidatePair) -> bool {
        p.alpha <= self.beta_max / 2 && p.beta >= -self.beta_max && p.beta <= self.beta_max / 2
    }
}

/// Enumerate S(β_max) in ascending (α, β) order.
pub fn enumerate(beta_max: i64) -> Result<PairSet, PairError> {
    if beta_max < 2 || beta_max % 2 != 0 {
        return Err(PairError::InvalidBound(beta_max));
    }
    let mut members = Vec::new();
    for alpha in 1..=beta_max / 2 {
        for beta in -beta_max..=beta_max / 2 {
            if beta != 0 && alpha.gcd(&beta) == 1 {
                members.push(CandidatePair { alpha, beta });
            }
        }
    }
    Ok(PairSet { beta_max, members })
}

/// The pairs of `current` not already searched under `old`; `old` must be a
/// smaller S(β_max) (or the empty set), so membership reduces to its box
/// constraints.
pub fn difference(current: &PairSet, old: &PairSet) -> Vec<CandidatePair> {
    debug_assert!(old.beta_max < current.beta_max || old.members.is_empty());
    current.members.iter().filter(|p| !old.contains(p)).copied().collect()
}

/// Leading-order size of S(β_max): (6/π²)·(3/4)·β_max².
pub fn count_asymptotic(beta_max: i64) -> f64 {
    let b = beta_max as f64;
    (6.0 / (std::f64::consts::PI * std::f64::consts::PI)) * 0.75 * b * b
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn smallest_set() {
        let s2 = enumerate(2).unwrap();
        let pairs: Vec<(i64, i64)> = s2.members().iter().map(|p| (p.alpha, p.beta)).collect();
        assert_eq!(pairs, vec![(1, -2), (1, -1), (1, 1)]);
    }

    #[test]
    fn invalid_bounds() {
        assert!(matches!(enumerate(0), Err(PairError::InvalidBound(0))));
        assert!(matches!(enumerate(3), Err(PairError::InvalidBound(3))));
        assert!(matches!(enumerate(-4), Err(PairError::InvalidBound(-4))));
    }

    #[test]
    fn known_members() {
        let s16 = enumerate(16).unwrap();
        for (a, b) in [(1, 3), (3, 1), (7, -16), (4, -5)] {
            assert!(s16.members().contains(&CandidatePair { alpha: a, beta: b }), "({a},{b})");
        }
        // bounds respected, ordered, no duplicates
        let mut last = None;
        for p in s16.members() {
            assert!(p.alpha >= 1 && p.alpha <= 8);
            assert!(p.beta >= -16 && p.beta <= 8 && p.beta != 0);
            assert_eq!(p.alpha.gcd(&p.beta), 1);
            if let Some(prev) = last {
                assert!(*p > prev);
            }
            last = Some(*p);
        }
    }

    #[test]
    fn difference_rounds() {
        let s2 = enumerate(2).unwrap();
        let s4 = enumerate(4).unwrap();
        let fresh = difference(&s4, &s2);
        assert!(fresh.contains(&CandidatePair { alpha: 1, beta: 2 }));
        assert!(fresh.contains(&CandidatePair { alpha: 2, beta: -3 }));
        assert!(!fresh.contains(&CandidatePair { alpha: 1, beta: 1 }));
        assert_eq!(fresh.len(), s4.len() - s2.len());

        assert_eq!(difference(&s2, &PairSet::empty()), s2.members().to_vec());
    }

    #[test]
    fn brute_force_count_and_asymptotic() {
        for bm in (2..=200).step_by(2) {
            let fast = enumerate(bm).unwrap().len();
            let mut slow = 0usize;
            for alpha in 1..=bm / 2 {
                for beta in -bm..=bm / 2 {
                    if beta != 0 && alpha.gcd(&beta) == 1 {
                        slow += 1;
                    }
                }
            }
            assert_eq!(fast, slow, "beta_max = {bm}");
        }
        let s1000 = enumerate(1000).unwrap().len() as f64;
        let asym = count_asymptotic(1000);
        assert!((s1000 / asym - 1.0).abs() < 0.02, "{s1000} vs {asym}");
    }
}
