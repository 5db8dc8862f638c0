//! Search for coprime factors U·V = N by fixing a prime `a` and a small
//! coprime pair (α, β) with a | βV − αU, then recovering the base-`a` digits
//! of U and V from a modular square root and an integer quadratic.
//!
//! Writing U = u1·a + u0 and V = v1·a + v0 with 0 < u0, v0 < a, the
//! divisibility condition forces u0² ≡ α⁻¹βN (mod a), so u0 comes from a
//! Tonelli–Shanks square root, v0 follows as β⁻¹αu0, and the remaining
//! digits solve a quadratic over ℤ once the combined digit sum s = αu1 + βv1
//! is guessed inside its ±β_max·a band. Primes are drawn from windows around
//! (2N)^(1/4); pairs from the admissible set S(β_max).
//!
//! Modules:
//! - [`arith`]: modular arithmetic, square roots, exact quadratics
//! - [`primes`]: Miller–Rabin, segmented sieving, window iteration
//! - [`pairs`]: the S(β_max) pair sets and their round-to-round differences
//! - [`engine`]: the per-triple attempt and the two window drivers
//! - [`lab`]: instance generation, oracles, and heuristic statistics

pub mod arith;
pub mod engine;
pub mod lab;
pub mod pairs;
pub mod primes;

pub use arith::{ArithError, SqrtResult};
pub use engine::{
    attempt, factor, factor_a, factor_b, factor_traced, verify, AttemptOutcome, AttemptStatus,
    EngineConfig, EngineError, TraceEvent, TraceOutcome, Variant, Witness,
};
pub use lab::{DensityReport, GeneratedInstance, LabError, PlantedTriple, RStatReport};
pub use pairs::{CandidatePair, PairError, PairSet};
pub use primes::{PrimeWindow, WindowStrategy};

pub use num_bigint::{BigInt, BigUint};
