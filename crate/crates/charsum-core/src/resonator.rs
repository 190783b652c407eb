//! The resonator: a multiplicative weight r supported on squarefree products
//! of primes from a narrow band [P_lo, P_hi], truncated at X. The canonical
//! parameters are
//!
//!   λ = √(log X · log log X),   band = [λ, exp((log λ)²)],
//!   r(p) = λ / (√p · log p)   on band primes,
//!
//! with an alternative normalization λ / (√q · log p) available behind a
//! switch. At desk scale the canonical band often contains no primes at all;
//! the support then degenerates to {1}, which every identity downstream
//! handles (and which makes several closed forms exactly checkable).
//!
//! The quantity the moments need is the quadruple sum
//! Σ r(a)r(b) over m, n ≤ N, a, b ≤ X with an = bm. Fixing (a, b) and
//! writing g = gcd(a, b), the solutions are n = (b/g)t, m = (a/g)t for
//! t ≤ N·g/max(a, b), so the whole thing collapses to the pair formula
//!
//!   Σ_{a,b ∈ supp} r(a)·r(b)·⌊N·g / max(a, b)⌋,
//!
//! computed here with binary gcd and 128-bit products.

use alloc::vec::Vec;

use crate::ntcore::{gcd, sieve_primes};
use crate::sum::{pairwise_sum_by, pairwise_sum};
use crate::{Error, Result};

/// Refuse to enumerate supports larger than this (memory predictability).
pub const DEFAULT_SUPPORT_CAP: usize = 10_000_000;

/// How r(p) is computed on band primes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Normalization {
    /// r(p) = λ / (√p · log p) — the default.
    SqrtP,
    /// r(p) = λ / (√q · log p) for the modulus q of the run: kept available
    /// for side-by-side comparison with the √p rule.
    SqrtQLiteral { q: u64 },
}

/// Parameters of a resonator: truncation X, weight scale λ, prime band
/// (inclusive; empty when lo > hi), and the normalization rule.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResonatorSpec {
    pub x: u64,
    pub lambda: f64,
    pub band_lo: u64,
    pub band_hi: u64,
    pub normalization: Normalization,
}

/// λ(X) = √(log X · log log X); NaN-free only for X ≥ 3.
pub fn canonical_lambda(x: u64) -> f64 {
    let lx = libm::log(x as f64);
    libm::sqrt(lx * libm::log(lx))
}

impl ResonatorSpec {
    /// The canonical spec for truncation X: λ = λ(X), band
    /// [⌈λ⌉, ⌊exp((log λ)²)⌋], √p normalization. X < 3 has log log X ≤ 0
    /// and is rejected.
    pub fn canonical(x: u64) -> Result<ResonatorSpec> {
        if x < 3 {
            return Err(Error::Domain("canonical resonator needs X >= 3"));
        }
        let lambda = canonical_lambda(x);
        let ll = libm::log(lambda);
        let hi = libm::floor(libm::exp(ll * ll));
        Ok(ResonatorSpec {
            x,
            lambda,
            band_lo: libm::ceil(lambda) as u64,
            band_hi: hi as u64,
            normalization: Normalization::SqrtP,
        })
    }

    /// Degenerate spec with an empty band: support is exactly {1}. Used for
    /// X too small for the canonical formulas, and for closed-form checks.
    pub fn trivial(x: u64) -> ResonatorSpec {
        ResonatorSpec {
            x,
            lambda: 1.0,
            band_lo: 2,
            band_hi: 1,
            normalization: Normalization::SqrtP,
        }
    }

    /// Same spec with the band replaced (lo > hi is a valid empty band).
    pub fn with_band(self, lo: u64, hi: u64) -> ResonatorSpec {
        ResonatorSpec {
            band_lo: lo,
            band_hi: hi,
            ..self
        }
    }

    /// Same spec with the normalization replaced.
    pub fn with_normalization(self, normalization: Normalization) -> ResonatorSpec {
        ResonatorSpec {
            normalization,
            ..self
        }
    }

    /// r(p) on a band prime.
    pub fn prime_weight(&self, p: u64) -> f64 {
        let lp = libm::log(p as f64);
        match self.normalization {
            Normalization::SqrtP => self.lambda / (libm::sqrt(p as f64) * lp),
            Normalization::SqrtQLiteral { q } => self.lambda / (libm::sqrt(q as f64) * lp),
        }
    }
}

/// A built resonator: its spec and the explicit ascending support list
/// of (n, r(n)) pairs. (1, 1) is always present — the empty product.
#[derive(Debug, Clone)]
pub struct Resonator {
    pub spec: ResonatorSpec,
    pub support: Vec<(u64, f64)>,
}

impl Resonator {
    pub fn build(spec: ResonatorSpec) -> Result<Resonator> {
        Resonator::build_capped(spec, DEFAULT_SUPPORT_CAP)
    }

    /// Depth-first enumeration of squarefree band-prime products ≤ X. Each
    /// support element carries its weight Π r(p) built along the path.
    pub fn build_capped(spec: ResonatorSpec, cap: usize) -> Result<Resonator> {
        let primes: Vec<u64> = if spec.band_lo > spec.band_hi {
            Vec::new()
        } else {
            sieve_primes(spec.band_hi)
                .into_iter()
                .filter(|&p| p >= spec.band_lo && p <= spec.x)
                .collect()
        };
        let weights: Vec<f64> = primes.iter().map(|&p| spec.prime_weight(p)).collect();
        let walk = Walk {
            primes: &primes,
            weights: &weights,
            x: spec.x,
            cap,
        };
        let mut support: Vec<(u64, f64)> = Vec::new();
        dfs(&walk, 0, 1, 1.0, &mut support)?;
        support.sort_unstable_by_key(|&(n, _)| n);
        Ok(Resonator { spec, support })
    }

    /// ℓ² mass Σ r(n)² over the support; ≥ 1 always (the n = 1 term).
    pub fn l2(&self) -> f64 {
        support_l2(&self.support)
    }

    /// Σ_{an=bm, m,n≤N, a,b in support} r(a)r(b) by the pair formula.
    pub fn quadruple_sum(&self, n: u64) -> f64 {
        pair_quadruple_sum(&self.support, n)
    }

    /// The side condition log N > 3λ·log log λ, evaluated with both sides
    /// reported. Outside its domain (N < 3 or λ ≤ e) the answer is
    /// indeterminate, not false.
    pub fn lemma_condition(&self, n: u64) -> ConditionReport {
        let lambda = self.spec.lambda;
        let lhs = if n >= 1 { libm::log(n as f64) } else { f64::NAN };
        if n < 3 || lambda <= core::f64::consts::E {
            return ConditionReport {
                status: ConditionStatus::Indeterminate,
                lhs,
                rhs: f64::NAN,
            };
        }
        let rhs = 3.0 * lambda * libm::log(libm::log(lambda));
        let status = if lhs > rhs {
            ConditionStatus::Holds
        } else {
            ConditionStatus::Fails
        };
        ConditionReport { status, lhs, rhs }
    }
}

/// Fixed inputs of the support enumeration.
struct Walk<'a> {
    primes: &'a [u64],
    weights: &'a [f64],
    x: u64,
    cap: usize,
}

fn dfs(walk: &Walk<'_>, start: usize, value: u64, weight: f64, out: &mut Vec<(u64, f64)>) -> Result<()> {
    if out.len() >= walk.cap {
        return Err(Error::SupportCap { cap: walk.cap });
    }
    out.push((value, weight));
    for i in start..walk.primes.len() {
        let p = walk.primes[i];
        if value > walk.x / p {
            // value·p > X, and later primes are larger
            break;
        }
        dfs(walk, i + 1, value * p, weight * walk.weights[i], out)?;
    }
    Ok(())
}

/// Σ r(n)² over an explicit support list.
pub fn support_l2(support: &[(u64, f64)]) -> f64 {
    pairwise_sum_by(0, support.len(), &|i| support[i].1 * support[i].1)
}

/// The pair formula Σ_{a,b} r(a)r(b)·⌊N·gcd(a,b)/max(a,b)⌋ over any support
/// of distinct positive integers with real weights. Equals the brute-force
/// quadruple enumeration for every such support (tested both ways); N = 0
/// gives 0. Summed pairwise in a fixed tree, so the result is bit-stable.
pub fn pair_quadruple_sum(support: &[(u64, f64)], n: u64) -> f64 {
    let s = support.len();
    pairwise_sum_by(0, s, &|i| {
        let (a, ra) = support[i];
        pairwise_sum_by(0, s, &|j| {
            let (b, rb) = support[j];
            let g = gcd(a, b);
            let m = a.max(b);
            let count = (n as u128 * g as u128 / m as u128) as f64;
            ra * rb * count
        })
    })
}

/// Brute-force quadruple enumeration: Σ over all (m, n, a, b) with
/// m, n ≤ limit and an = bm of r(a)r(b). O(|S|²·N²); the oracle the pair
/// formula is validated against.
pub fn brute_quadruple_sum(support: &[(u64, f64)], limit: u64) -> f64 {
    let mut terms: Vec<f64> = Vec::new();
    for &(a, ra) in support {
        for &(b, rb) in support {
            for n in 1..=limit {
                for m in 1..=limit {
                    if a * n == b * m {
                        terms.push(ra * rb);
                    }
                }
            }
        }
    }
    pairwise_sum(&terms)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConditionStatus {
    Holds,
    Fails,
    /// N < 3 or λ ≤ e: the right-hand side is not meaningfully defined.
    Indeterminate,
}

/// Both sides of the lemma condition plus the verdict; rhs is NaN when
/// indeterminate.
#[derive(Debug, Clone, Copy)]
pub struct ConditionReport {
    pub status: ConditionStatus,
    /// log N.
    pub lhs: f64,
    /// 3λ·log log λ.
    pub rhs: f64,
}
