//! Resonance-method machinery for Dirichlet character sums mod a prime q.
//!
//! The pieces, bottom to top:
//!
//! * [`ntcore`] — primality, sieves, primitive roots, and the discrete-log
//!   index table that turns every character mod q into a pure exponential.
//! * [`transform`] — an arbitrary-length DFT (chirp-z) so all q−1 character
//!   sums of one coefficient vector come out of a single O(q log q) pass.
//! * [`characters`] — character evaluation, single and bulk weighted sums,
//!   and the orthogonality relation Σ_χ χ(a)conj(χ(b)) = (q−1)·[a ≡ b].
//! * [`coefficients`] — completely multiplicative unimodular families f
//!   (constant, random signs, random phases, n^{it}), seeded reproducibly.
//! * [`resonator`] — squarefree multiplicative weights r built from a narrow
//!   prime band, their ℓ² mass, and the quadruple sum Σ_{an=bm} r(a)r(b).
//! * [`moments`] — M1 = Σ_{χ≠χ₀}|R_χ|² and M2 = Σ_{χ≠χ₀}|D_χ|²|R_χ|²
//!   computed two independent ways (direct bulk sums vs. orthogonality
//!   closed forms), the lower bound max|D| ≥ √(M2/M1), and the reference
//!   growth curve it is compared against.
//!
//! Everything is deterministic pure computation on explicit state — no
//! global RNG, no threads — so identical inputs give bit-identical output.
//! The crate is `no_std` + `alloc`; float transcendentals come from `libm`.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod characters;
pub mod coefficients;
pub mod moments;
pub mod ntcore;
pub mod resonator;
pub mod sum;
pub mod tol;
pub mod transform;

pub use num_complex::Complex64;

use core::fmt;

/// Everything that can go wrong below the CLI layer. These are contract
/// violations (bad modulus, out-of-range argument), not numerical failures.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// Modulus is not an odd prime ≥ 3.
    NotPrime(u64),
    /// Claimed primitive root fails to generate the full group mod q.
    NotPrimitiveRoot { g: u64, q: u64 },
    /// Coefficient function asked for a value above its construction cap.
    AboveCap { n: u64, cap: u64 },
    /// Coefficient vector length must stay below the modulus.
    LengthRange { n: u64, q: u64 },
    /// Orthogonality sum argument shares a factor with q.
    NotCoprime { value: u64, q: u64 },
    /// Argument outside an operation's domain; the message names the rule.
    Domain(&'static str),
    /// Resonator support enumeration hit the entry cap.
    SupportCap { cap: usize },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::NotPrime(q) => write!(f, "{q} is not an odd prime >= 3"),
            Error::NotPrimitiveRoot { g, q } => {
                write!(f, "{g} is not a primitive root mod {q}")
            }
            Error::AboveCap { n, cap } => {
                write!(f, "argument {n} exceeds coefficient cap {cap}")
            }
            Error::LengthRange { n, q } => {
                write!(f, "coefficient length {n} must be < modulus {q}")
            }
            Error::NotCoprime { value, q } => {
                write!(f, "{value} is divisible by the modulus {q}")
            }
            Error::Domain(msg) => write!(f, "domain error: {msg}"),
            Error::SupportCap { cap } => {
                write!(f, "resonator support exceeds cap of {cap} entries")
            }
        }
    }
}

impl core::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;
