//! Elementary number theory: deterministic primality, prime sieves,
//! smallest-prime-factor factorization, primitive roots, and the
//! discrete-log index table for a prime modulus.
//!
//! The index table is the heart of everything downstream: once ind[n] is
//! known for every n in [1, q−1], each character mod q becomes
//! χ_j(n) = e(+2πi·j·ind[n]/(q−1)) and character sums become DFTs.

use alloc::vec;
use alloc::vec::Vec;

use crate::{Error, Result};

/// (a·b) mod m without overflow; intermediates live in u128.
pub fn mod_mul(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

/// b^e mod m by square-and-multiply.
pub fn mod_pow(mut b: u64, mut e: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mod_mul(acc, b, m);
        }
        b = mod_mul(b, b, m);
        e >>= 1;
    }
    acc
}

/// Binary gcd on u64 (used heavily by the resonator pair formula).
pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    if a == 0 {
        return b;
    }
    if b == 0 {
        return a;
    }
    let shift = (a | b).trailing_zeros();
    a >>= a.trailing_zeros();
    loop {
        b >>= b.trailing_zeros();
        if a > b {
            core::mem::swap(&mut a, &mut b);
        }
        b -= a;
        if b == 0 {
            return a << shift;
        }
    }
}

/// Deterministic Miller–Rabin. This witness set decides primality exactly
/// for every 64-bit integer, so there is no error probability to reason
/// about and no RNG in the primality path.
pub fn is_prime(n: u64) -> bool {
    const WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &p in &WITNESSES {
        if n == p {
            return true;
        }
        if n.is_multiple_of(p) {
            return false;
        }
    }
    // n − 1 = d·2^s with d odd
    let d = (n - 1) >> (n - 1).trailing_zeros();
    let s = (n - 1).trailing_zeros();
    'witness: for &a in &WITNESSES {
        let mut x = mod_pow(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mod_mul(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Ascending primes ≤ limit (plain Eratosthenes; empty for limit < 2).
pub fn sieve_primes(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let n = limit as usize;
    let mut composite = vec![false; n + 1];
    let mut primes = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            primes.push(i as u64);
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
    }
    primes
}

/// Smallest-prime-factor table for [0, limit]: spf[n] is the least prime
/// dividing n (spf[0] = 0, spf[1] = 1). One pass, then factorization of any
/// n ≤ limit is just repeated division.
pub fn smallest_prime_factors(limit: usize) -> Vec<u32> {
    let mut spf: Vec<u32> = vec![0; limit + 1];
    if limit >= 1 {
        spf[1] = 1;
    }
    for i in 2..=limit {
        if spf[i] == 0 {
            let mut j = i;
            while j <= limit {
                if spf[j] == 0 {
                    spf[j] = i as u32;
                }
                j += i;
            }
        }
    }
    spf
}

/// (prime, exponent) pairs in increasing prime order; n = Π p^e.
pub type Factorization = Vec<(u64, u32)>;

/// Factor n via a smallest-prime-factor table; n = 1 gives the empty list.
pub fn factorize(n: u64, spf: &[u32]) -> Result<Factorization> {
    if n == 0 || n as usize >= spf.len() {
        return Err(Error::AboveCap {
            n,
            cap: spf.len().saturating_sub(1) as u64,
        });
    }
    let mut out: Factorization = Vec::new();
    let mut m = n as usize;
    while m > 1 {
        let p = spf[m] as u64;
        let mut e = 0u32;
        while m > 1 && spf[m] as u64 == p {
            m /= p as usize;
            e += 1;
        }
        out.push((p, e));
    }
    Ok(out)
}

/// True iff no prime square divides n.
pub fn is_squarefree(n: u64, spf: &[u32]) -> Result<bool> {
    Ok(factorize(n, spf)?.iter().all(|&(_, e)| e == 1))
}

/// Smallest primitive root mod prime q, verified by checking
/// g^((q−1)/p) ≢ 1 for every prime p dividing q−1.
pub fn primitive_root(q: u64) -> Result<u64> {
    if q < 3 || !is_prime(q) {
        return Err(Error::NotPrime(q));
    }
    // factor q−1 by trial division; q−1 < 2^63 so the sieve to its square
    // root is small
    let phi = q - 1;
    let mut prime_divisors: Vec<u64> = Vec::new();
    let mut m = phi;
    for p in sieve_primes(phi.isqrt() + 1) {
        if m.is_multiple_of(p) {
            prime_divisors.push(p);
            while m.is_multiple_of(p) {
                m /= p;
            }
        }
    }
    if m > 1 {
        prime_divisors.push(m);
    }
    for g in 2..q {
        if prime_divisors.iter().all(|&p| mod_pow(g, phi / p, q) != 1) {
            return Ok(g);
        }
    }
    // unreachable for prime q: a primitive root always exists
    Err(Error::NotPrime(q))
}

/// Prime modulus q with a primitive root g and the full index table:
/// ind[n] is the unique k in [0, q−2] with g^k ≡ n (mod q).
///
/// Immutable once built; everything downstream shares it by reference.
#[derive(Debug, Clone)]
pub struct PrimeContext {
    pub q: u64,
    pub g: u64,
    /// length q; ind[0] is an unused sentinel, ind[n] is defined for
    /// n in [1, q−1]
    pub ind: Vec<u32>,
}

impl PrimeContext {
    /// Build for the smallest primitive root of q.
    pub fn new(q: u64) -> Result<PrimeContext> {
        let g = primitive_root(q)?;
        build_index_table(q, g)
    }

    /// Group order q − 1 (= φ(q) for prime q).
    pub fn order(&self) -> u64 {
        self.q - 1
    }
}

/// Build the index table in O(q) by iterating powers of g. A repeat visit
/// before the cycle closes means g is not primitive.
pub fn build_index_table(q: u64, g: u64) -> Result<PrimeContext> {
    if q < 3 || !is_prime(q) {
        return Err(Error::NotPrime(q));
    }
    if q > u32::MAX as u64 {
        return Err(Error::Domain("modulus above 2^32 (index table is u32)"));
    }
    if g <= 1 || g >= q {
        return Err(Error::NotPrimitiveRoot { g, q });
    }
    let mut ind: Vec<u32> = vec![u32::MAX; q as usize];
    let mut pow = 1u64;
    for k in 0..(q - 1) {
        if ind[pow as usize] != u32::MAX {
            // cycle shorter than q−1
            return Err(Error::NotPrimitiveRoot { g, q });
        }
        ind[pow as usize] = k as u32;
        pow = mod_mul(pow, g, q);
    }
    if pow != 1 {
        return Err(Error::NotPrimitiveRoot { g, q });
    }
    Ok(PrimeContext { q, g, ind })
}
