//! Numerical tolerances, collected in one place so every check in the crate
//! (and in the test suites) reads from the same constants.
//!
//! Two regimes: identities that are exact in exact arithmetic get tight
//! double-precision budgets scaled to how the rounding error accumulates;
//! anything passing through the length-(q−1) chirp-z transform gets a looser
//! budget because the convolution mixes ~q rounding events per output.

/// Pointwise complex checks: unit modulus, multiplicativity of characters
/// and coefficient values. A handful of float ops per value.
pub const EXACT_COMPLEX: f64 = 1e-12;

/// |M1_direct − M1_identity| / M1_identity. M1 sums q−1 nonnegative terms,
/// so cancellation is impossible and even the bulk path stays well inside.
pub const M1_EQUIV_REL: f64 = 1e-8;

/// |M2_direct − M2_identity| / M2_identity. The direct side multiplies two
/// transformed sums per character; budget widened accordingly.
pub const M2_EQUIV_REL: f64 = 1e-6;

/// Bulk transform vs. naive per-character summation, entrywise relative.
pub const BULK_NAIVE_REL: f64 = 1e-6;

/// Orthogonality sums are asserted to within this times (q−1), absolute.
pub const ORTHOGONALITY_REL: f64 = 1e-6;

/// Slack in the payoff inequality brute_max ≥ √(M2/M1)·(1 − slack). The
/// inequality is tight only in degenerate cells (N = 1), where both sides
/// come from the same accumulations; elsewhere the margin is macroscopic.
pub const THEOREM_SLACK: f64 = 1e-9;

/// Pair formula vs. brute-force quadruple enumeration (small X, N): every
/// term is reproduced exactly, only the summation order differs.
pub const QUADRUPLE_ORACLE_REL: f64 = 1e-12;

/// quadruple_sum ≥ N·ℓ² (the diagonal a = b alone gives equality terms).
pub const DIAGONAL_REL: f64 = 1e-10;

/// Resonator ℓ² mass vs. brute-force filtered summation.
pub const L2_ORACLE_REL: f64 = 1e-10;

/// Principal-term bounds |R_χ₀|² ≤ X·ℓ² and |D_χ₀| ≤ N hold in exact
/// arithmetic; this absorbs the float slack on both sides.
pub const PRINCIPAL_BOUND_REL: f64 = 1e-12;

/// Relative error |a − b| / max(|b|, floor). The floor keeps comparisons
/// against exact zeros meaningful.
pub fn rel_err(a: f64, b: f64) -> f64 {
    let denom = if b.abs() > 1e-300 { b.abs() } else { 1.0 };
    (a - b).abs() / denom
}
