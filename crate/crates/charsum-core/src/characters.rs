//! Dirichlet characters mod a prime q, indexed by j in [0, q−2]:
//!
//!   χ_j(n) = e(+2πi · j·ind[n] / (q−1))   for q ∤ n,   χ_j(n) = 0 otherwise.
//!
//! j = 0 is the principal character; the conjugate of χ_j is χ_{(q−1−j) mod (q−1)}.
//! All values are read from one precomputed table of (q−1)-th roots of unity,
//! so repeated evaluation never re-reduces angles.
//!
//! The bulk path computes every weighted sum Σ_{n≤N} c_n χ_j(n) for all j at
//! once: bin the coefficients by index (A[ind[n]] += c_n) and apply one
//! arbitrary-length DFT. A naive per-character path exists both as a
//! selectable fallback and as the independent oracle the transform is tested
//! against.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::ntcore::PrimeContext;
use crate::transform::DftPlan;
use crate::{Error, Result};

/// Label of one character mod q; valid values are [0, q−2], 0 = principal.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct CharacterIndex(pub u64);

/// Coefficients (c_1, …, c_N) of a weighted character sum; entry i holds
/// c_{i+1}.
pub type CoefficientVector = Vec<Complex64>;

/// Which route `all_sums` takes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SumAlgorithm {
    /// Index-binning + chirp-z transform, O((q−1) log(q−1)).
    Bulk,
    /// Per-character summation from the roots table, O((q−1)·N).
    Naive,
}

/// Evaluation machinery for all characters of one modulus: the context, the
/// roots-of-unity table, and a transform plan for length q−1.
#[derive(Debug, Clone)]
pub struct CharacterTable<'a> {
    ctx: &'a PrimeContext,
    roots: Vec<Complex64>,
    plan: DftPlan,
}

impl<'a> CharacterTable<'a> {
    pub fn new(ctx: &'a PrimeContext) -> CharacterTable<'a> {
        let l = ctx.order() as usize;
        let roots: Vec<Complex64> = (0..l)
            .map(|k| {
                let angle = 2.0 * core::f64::consts::PI * k as f64 / l as f64;
                Complex64::new(libm::cos(angle), libm::sin(angle))
            })
            .collect();
        CharacterTable {
            ctx,
            roots,
            plan: DftPlan::new(l),
        }
    }

    pub fn ctx(&self) -> &PrimeContext {
        self.ctx
    }

    pub fn q(&self) -> u64 {
        self.ctx.q
    }

    /// Number of characters, q − 1.
    pub fn order(&self) -> u64 {
        self.ctx.order()
    }

    /// χ_j(n). Arguments n ≥ q are reduced mod q first (periodicity).
    pub fn eval(&self, j: CharacterIndex, n: u64) -> Complex64 {
        let l = self.order();
        debug_assert!(j.0 < l, "character index out of range");
        let r = n % self.q();
        if r == 0 {
            return Complex64::new(0.0, 0.0);
        }
        let k = self.ctx.ind[r as usize] as u128;
        self.roots[((j.0 as u128 * k) % l as u128) as usize]
    }

    fn check_len(&self, n: usize) -> Result<()> {
        if n as u64 >= self.q() {
            return Err(Error::LengthRange {
                n: n as u64,
                q: self.q(),
            });
        }
        Ok(())
    }

    /// Σ_{n≤N} c_n χ_j(n) by direct summation (the naive route).
    pub fn char_sum(&self, j: CharacterIndex, coeffs: &[Complex64]) -> Result<Complex64> {
        self.check_len(coeffs.len())?;
        let mut acc = Complex64::new(0.0, 0.0);
        for (i, &c) in coeffs.iter().enumerate() {
            acc += c * self.eval(j, i as u64 + 1);
        }
        Ok(acc)
    }

    /// All q−1 sums Σ_{n≤N} c_n χ_j(n), indexed by j.
    ///
    /// Bulk and naive routes agree entrywise to [`crate::tol::BULK_NAIVE_REL`]
    /// relative; the bulk route is exact in exact arithmetic because
    /// Σ_n c_n χ_j(n) = Σ_k (Σ_{ind[n]=k} c_n) e(+2πi·jk/(q−1)) is literally a
    /// DFT of the binned coefficients.
    pub fn all_sums(&self, coeffs: &[Complex64], algo: SumAlgorithm) -> Result<Vec<Complex64>> {
        self.check_len(coeffs.len())?;
        match algo {
            SumAlgorithm::Bulk => {
                let l = self.order() as usize;
                let mut bins = vec![Complex64::new(0.0, 0.0); l];
                // N < q, so every n in [1, N] is coprime to q and has an index
                for (i, &c) in coeffs.iter().enumerate() {
                    bins[self.ctx.ind[i + 1] as usize] += c;
                }
                Ok(self.plan.forward(&bins))
            }
            SumAlgorithm::Naive => (0..self.order())
                .map(|j| self.char_sum(CharacterIndex(j), coeffs))
                .collect(),
        }
    }

    /// Σ over all q−1 characters of χ(a)·conj(χ(b)); equals (q−1)·[a ≡ b mod q]
    /// up to rounding. Since χ_j(a)conj(χ_j(b)) = e(+2πi·j·d/(q−1)) with
    /// d = ind[a] − ind[b], the sum is walked as a geometric progression on
    /// the roots table with no multiplications in the exponent.
    pub fn orthogonality_sum(&self, a: u64, b: u64) -> Result<Complex64> {
        let q = self.q();
        let (ra, rb) = (a % q, b % q);
        if ra == 0 {
            return Err(Error::NotCoprime { value: a, q });
        }
        if rb == 0 {
            return Err(Error::NotCoprime { value: b, q });
        }
        let l = self.order() as usize;
        let d = (self.ctx.ind[ra as usize] as usize + l - self.ctx.ind[rb as usize] as usize) % l;
        let mut acc = Complex64::new(0.0, 0.0);
        let mut idx = 0usize;
        for _ in 0..l {
            acc += self.roots[idx];
            idx += d;
            if idx >= l {
                idx -= l;
            }
        }
        Ok(acc)
    }
}
