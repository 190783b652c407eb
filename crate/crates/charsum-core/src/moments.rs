//! The two moments of a resonator against weighted character sums,
//!
//!   M1 = Σ_{χ≠χ₀} |R_χ|²,    M2 = Σ_{χ≠χ₀} |D_χ|²·|R_χ|²,
//!
//! where D_χ = Σ_{n≤N} f(n)χ(n) and R_χ = Σ_{n≤X} f(n)r(n)χ(n), each
//! computed two independent ways:
//!
//! * **direct** — from the vectors of all q−1 character sums;
//! * **identity** — in closed form from orthogonality. Summing over *all*
//!   characters, Σ_χ χ(a)conj(χ(b)) = (q−1)[a ≡ b], and because every
//!   product an, bm lies in [1, N·X] ⊆ [1, q], the congruence an ≡ bm (mod q)
//!   collapses to the equality an = bm (terms divisible by q vanish under
//!   every character and are excluded). Complete multiplicativity and
//!   |f| = 1 then cancel f entirely: f(a)f(n)·conj(f(b)f(m)) =
//!   f(an)·conj(f(bm)) = 1.
//!
//! Subtracting the principal character gives
//!
//! ```text
//! M1 = (q−1)·Σ_{n≤X} r(n)² − |R_χ₀|²,
//! M2 = (q−1)·Σ_{an=bm} r(a)r(b) − |D_χ₀|²·|R_χ₀|².
//! ```
//!
//! The payoff is max_{χ≠χ₀} |D_χ| ≥ √(M2/M1), checked against the
//! brute-force maximum on every run. Note that while M2 itself depends on f
//! through the principal term, the all-character sum Σ_χ |D_χ|²|R_χ|² =
//! (q−1)·Σ_{an=bm} r(a)r(b) does not — it is the same for every unimodular
//! completely multiplicative f, which [`m2_all_direct`] / [`m2_all_identity`]
//! expose for testing.

use alloc::borrow::Cow;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::characters::{CharacterIndex, CoefficientVector};
use crate::coefficients::CoefficientFunction;
use crate::resonator::{pair_quadruple_sum, support_l2, ConditionReport, Resonator};
use crate::sum::{pairwise_csum, pairwise_sum_by};
use crate::{Error, Result};

/// The resonator's coefficient vector r_f(n) = f(n)·r(n): length X, entry
/// n−1 carries f(n)r(n) on support elements and 0 elsewhere.
pub fn resonator_coefficients(
    r: &Resonator,
    f: &CoefficientFunction,
) -> Result<CoefficientVector> {
    let x = r.spec.x;
    if f.cap() < x {
        return Err(Error::AboveCap { n: x, cap: f.cap() });
    }
    let mut c = alloc::vec![Complex64::new(0.0, 0.0); x as usize];
    for &(n, w) in &r.support {
        c[n as usize - 1] = f.eval(n)? * w;
    }
    Ok(c)
}

/// Support with multiples of q removed. Under X ≤ q the only candidate is
/// n = q itself (q prime), whose terms vanish under every character; the
/// identity path must drop it to stay exact.
fn support_coprime_to_q(r: &Resonator, q: u64) -> Cow<'_, [(u64, f64)]> {
    if r.support.iter().any(|&(n, _)| n % q == 0) {
        Cow::Owned(
            r.support
                .iter()
                .copied()
                .filter(|&(n, _)| n % q != 0)
                .collect(),
        )
    } else {
        Cow::Borrowed(&r.support[..])
    }
}

fn check_identity_domain(q: u64, x: u64) -> Result<()> {
    if x > q {
        return Err(Error::Domain("identity path needs X <= q"));
    }
    Ok(())
}

/// R_χ₀ = Σ_{n≤X, q∤n} f(n)·r(n).
pub fn principal_resonator_sum(
    q: u64,
    r: &Resonator,
    f: &CoefficientFunction,
) -> Result<Complex64> {
    check_identity_domain(q, r.spec.x)?;
    let supp = support_coprime_to_q(r, q);
    let mut terms: Vec<Complex64> = Vec::with_capacity(supp.len());
    for &(n, w) in supp.iter() {
        terms.push(f.eval(n)? * w);
    }
    Ok(pairwise_csum(&terms))
}

/// D_χ₀ = Σ_{n≤N} f(n); callers keep N < q so no term vanishes.
pub fn principal_direct_sum(f: &CoefficientFunction, n: u64) -> Result<Complex64> {
    let v = f.vector(n)?;
    Ok(pairwise_csum(&v))
}

/// M1 from the vector of all resonator sums (entry j = R_{χ_j}): the
/// nonprincipal ℓ² mass Σ_{j≠0} |R_j|².
pub fn m1_direct(r_sums: &[Complex64]) -> f64 {
    pairwise_sum_by(1, r_sums.len(), &|j| r_sums[j].norm_sqr())
}

/// M1 by orthogonality: (q−1)·Σ r(n)² − |R_χ₀|², exact for X ≤ q.
pub fn m1_identity(q: u64, r: &Resonator, f: &CoefficientFunction) -> Result<f64> {
    check_identity_domain(q, r.spec.x)?;
    let supp = support_coprime_to_q(r, q);
    let l2 = support_l2(&supp);
    let r0 = principal_resonator_sum(q, r, f)?;
    Ok((q - 1) as f64 * l2 - r0.norm_sqr())
}

/// M2 from the two sum vectors: Σ_{j≠0} |D_j|²·|R_j|².
pub fn m2_direct(d_sums: &[Complex64], r_sums: &[Complex64]) -> f64 {
    debug_assert_eq!(d_sums.len(), r_sums.len());
    pairwise_sum_by(1, d_sums.len(), &|j| {
        d_sums[j].norm_sqr() * r_sums[j].norm_sqr()
    })
}

/// Like [`m2_direct`] but over *all* characters including the principal one.
/// This is the f-invariant quantity: it equals (q−1)·Σ_{an=bm} r(a)r(b)
/// for every unimodular completely multiplicative f.
pub fn m2_all_direct(d_sums: &[Complex64], r_sums: &[Complex64]) -> f64 {
    debug_assert_eq!(d_sums.len(), r_sums.len());
    pairwise_sum_by(0, d_sums.len(), &|j| {
        d_sums[j].norm_sqr() * r_sums[j].norm_sqr()
    })
}

fn check_m2_domain(q: u64, x: u64, n: u64) -> Result<()> {
    check_identity_domain(q, x)?;
    if n < 1 {
        return Err(Error::Domain("M2 needs N >= 1"));
    }
    if n >= q {
        return Err(Error::LengthRange { n, q });
    }
    if n as u128 * x as u128 > q as u128 {
        return Err(Error::Domain(
            "M2 identity needs N*X <= q (else an = bm collapse fails)",
        ));
    }
    Ok(())
}

/// M2 by orthogonality: (q−1)·Σ_{an=bm} r(a)r(b) − |D_χ₀|²·|R_χ₀|²,
/// exact whenever N·X ≤ q (the collapse region).
pub fn m2_identity(q: u64, r: &Resonator, f: &CoefficientFunction, n: u64) -> Result<f64> {
    check_m2_domain(q, r.spec.x, n)?;
    let supp = support_coprime_to_q(r, q);
    let q4 = pair_quadruple_sum(&supp, n);
    let d0 = principal_direct_sum(f, n)?;
    let r0 = principal_resonator_sum(q, r, f)?;
    Ok((q - 1) as f64 * q4 - d0.norm_sqr() * r0.norm_sqr())
}

/// The all-character M2 in closed form: (q−1)·Σ_{an=bm} r(a)r(b). Never
/// evaluates f — bit-identical across seeds by construction.
pub fn m2_all_identity(q: u64, r: &Resonator, n: u64) -> Result<f64> {
    check_m2_domain(q, r.spec.x, n)?;
    let supp = support_coprime_to_q(r, q);
    Ok((q - 1) as f64 * pair_quadruple_sum(&supp, n))
}

/// √(M2/M1). None when M1 is not positive; a negative M2 (float cancellation
/// of an exact zero) clamps to 0.
pub fn resonance_lower_bound(m1: f64, m2: f64) -> Option<f64> {
    if m1 <= 0.0 {
        return None;
    }
    Some(libm::sqrt(m2.max(0.0) / m1))
}

/// max over j ≠ 0 of |D_j|, with the smallest maximizing index. Input is the
/// vector of all q−1 sums; comparison is strict, so ties resolve downward.
pub fn brute_force_max(d_sums: &[Complex64]) -> (f64, CharacterIndex) {
    debug_assert!(d_sums.len() >= 2);
    let mut best = f64::NEG_INFINITY;
    let mut best_j = 1u64;
    for (j, s) in d_sums.iter().enumerate().skip(1) {
        let v = s.norm_sqr();
        if v > best {
            best = v;
            best_j = j as u64;
        }
    }
    (libm::sqrt(best), CharacterIndex(best_j))
}

/// Reference growth curve √N·exp(√(log(q/N)/log log(q/N))) with the o(1)
/// term set to 0. Defined only for q/N > e^e; a reported comparison, never
/// an assertion.
pub fn theory_curve(q: u64, n: u64) -> Option<f64> {
    let x = q as f64 / n as f64;
    if x <= libm::exp(core::f64::consts::E) {
        return None;
    }
    let lx = libm::log(x);
    Some(libm::sqrt(n as f64) * libm::exp(libm::sqrt(lx / libm::log(lx))))
}

/// The admissible-range check exp((log q)^{1/2+δ}) ≤ N ≤ √q with both
/// bounds reported.
#[derive(Debug, Clone, Copy)]
pub struct RangeReport {
    pub ok: bool,
    pub n: u64,
    pub lower: f64,
    pub upper: f64,
}

/// δ must lie strictly inside (0, 1/100).
pub fn validate_range(q: u64, n: u64, delta: f64) -> Result<RangeReport> {
    if !(delta > 0.0 && delta < 0.01) {
        return Err(Error::Domain("delta must lie in (0, 1/100)"));
    }
    let lower = libm::exp(libm::pow(libm::log(q as f64), 0.5 + delta));
    let upper = libm::sqrt(q as f64);
    let nf = n as f64;
    Ok(RangeReport {
        ok: nf >= lower && nf <= upper,
        n,
        lower,
        upper,
    })
}

/// Everything one (q, N, f, resonator) evaluation produces. The direct-path
/// fields are optional because the D-pass (M2_direct, brute force) can be
/// skipped for large sweeps; the identity path is always present.
#[derive(Debug, Clone)]
pub struct MomentReport {
    pub q: u64,
    pub n: u64,
    /// Support bound X = ⌊q/N⌋.
    pub x: u64,
    pub m1_direct: f64,
    pub m1_identity: f64,
    pub m2_direct: Option<f64>,
    pub m2_identity: f64,
    pub m2_all_direct: Option<f64>,
    pub m2_all_identity: f64,
    /// D_χ₀ — bounded by N in modulus.
    pub principal_d: Complex64,
    /// R_χ₀ — bounded by √(X·ℓ²) in modulus.
    pub principal_r: Complex64,
    /// √(M2/M1), from the direct pair when the D-pass ran, else identity.
    pub lower_bound: Option<f64>,
    pub brute_max: Option<f64>,
    pub argmax_j: Option<CharacterIndex>,
    pub theory_curve: Option<f64>,
    /// quadruple_sum / ℓ² over the full support; always ≥ N.
    pub ratio_bound: f64,
    pub condition: ConditionReport,
    pub range: RangeReport,
}
