//! Pairwise (tree) summation. Every moment accumulation in the crate goes
//! through these helpers: rounding error grows like O(log n) instead of
//! O(n), and the reduction tree is a pure function of the index range, so
//! a sum's bit pattern never depends on chunking or thread count.

use num_complex::Complex64;

/// Below this length the recursion bottoms out into a straight loop.
const LEAF: usize = 32;

/// Sum of f(i) over lo ≤ i < hi by recursive halving.
pub fn pairwise_sum_by<F>(lo: usize, hi: usize, f: &F) -> f64
where
    F: Fn(usize) -> f64,
{
    if hi <= lo {
        return 0.0;
    }
    if hi - lo <= LEAF {
        let mut acc = 0.0;
        for i in lo..hi {
            acc += f(i);
        }
        return acc;
    }
    let mid = lo + (hi - lo) / 2;
    pairwise_sum_by(lo, mid, f) + pairwise_sum_by(mid, hi, f)
}

/// Pairwise sum of a real slice.
pub fn pairwise_sum(xs: &[f64]) -> f64 {
    pairwise_sum_by(0, xs.len(), &|i| xs[i])
}

/// Complex variant with the same tree shape.
pub fn pairwise_csum_by<F>(lo: usize, hi: usize, f: &F) -> Complex64
where
    F: Fn(usize) -> Complex64,
{
    if hi <= lo {
        return Complex64::new(0.0, 0.0);
    }
    if hi - lo <= LEAF {
        let mut acc = Complex64::new(0.0, 0.0);
        for i in lo..hi {
            acc += f(i);
        }
        return acc;
    }
    let mid = lo + (hi - lo) / 2;
    pairwise_csum_by(lo, mid, f) + pairwise_csum_by(mid, hi, f)
}

/// Pairwise sum of a complex slice.
pub fn pairwise_csum(xs: &[Complex64]) -> Complex64 {
    pairwise_csum_by(0, xs.len(), &|i| xs[i])
}
