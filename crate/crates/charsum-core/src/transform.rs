//! Arbitrary-length forward DFT with the plus-sign convention,
//!
//!   F[j] = Σ_{k<L} a[k] · e(+2πi·jk/L),
//!
//! via Bluestein's chirp-z identity jk = (j² + k² − (j−k)²)/2, which turns
//! the transform into one cyclic convolution of power-of-two length. This is
//! what lets all q−1 character sums mod q come out of a single pass even
//! though q−1 is never a power of two.
//!
//! Precision note: the chirp phase πm²/L is evaluated with m² reduced mod 2L
//! in integer arithmetic *before* the trig call, so the argument stays in
//! [0, 2π) for every m and the phase error does not grow with L.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// e(+πi·m²/L) with the exact integer reduction described above.
fn chirp_phase(m: usize, l: usize) -> Complex64 {
    let sq = (m as u128 * m as u128) % (2 * l as u128);
    let angle = core::f64::consts::PI * sq as f64 / l as f64;
    Complex64::new(libm::cos(angle), libm::sin(angle))
}

/// In-place iterative radix-2 FFT. `tw[k] = e(−2πi·k/m)` for k < m/2;
/// the inverse pass conjugates the twiddles and rescales by 1/m.
fn fft_pow2(buf: &mut [Complex64], tw: &[Complex64], inverse: bool) {
    let m = buf.len();
    debug_assert!(m.is_power_of_two());
    debug_assert_eq!(tw.len(), m / 2);
    if m <= 1 {
        return;
    }
    // bit-reversal permutation
    let bits = m.trailing_zeros();
    for i in 0..m {
        let j = i.reverse_bits() >> (usize::BITS - bits);
        if i < j {
            buf.swap(i, j);
        }
    }
    let mut half = 1;
    while half < m {
        let stride = m / (2 * half);
        for start in (0..m).step_by(2 * half) {
            for k in 0..half {
                let mut w = tw[k * stride];
                if inverse {
                    w = w.conj();
                }
                let u = buf[start + k];
                let v = buf[start + k + half] * w;
                buf[start + k] = u + v;
                buf[start + k + half] = u - v;
            }
        }
        half *= 2;
    }
    if inverse {
        let scale = 1.0 / m as f64;
        for x in buf.iter_mut() {
            *x *= scale;
        }
    }
}

/// Reusable plan for a fixed length L. Construction precomputes the chirp,
/// the FFT twiddle table, and the transformed convolution kernel, so each
/// `forward` call costs three power-of-two FFTs and some pointwise work.
#[derive(Debug, Clone)]
pub struct DftPlan {
    l: usize,
    m: usize,
    tw: Vec<Complex64>,
    chirp: Vec<Complex64>,
    kernel_hat: Vec<Complex64>,
}

impl DftPlan {
    pub fn new(l: usize) -> DftPlan {
        assert!(l >= 1, "transform length must be at least 1");
        let m = (2 * l - 1).next_power_of_two();
        let tw: Vec<Complex64> = (0..m / 2)
            .map(|k| {
                let angle = -2.0 * core::f64::consts::PI * k as f64 / m as f64;
                Complex64::new(libm::cos(angle), libm::sin(angle))
            })
            .collect();
        let chirp: Vec<Complex64> = (0..l).map(|k| chirp_phase(k, l)).collect();
        // kernel[j−k] = conj(chirp[|j−k|]), laid out circularly in length m
        let mut kernel = vec![ZERO; m];
        for k in 0..l {
            kernel[k] = chirp[k].conj();
            if k > 0 {
                kernel[m - k] = chirp[k].conj();
            }
        }
        fft_pow2(&mut kernel, &tw, false);
        DftPlan {
            l,
            m,
            tw,
            chirp,
            kernel_hat: kernel,
        }
    }

    /// Forward transform of a length-L input.
    pub fn forward(&self, a: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(a.len(), self.l, "input length must match the plan");
        if self.l == 1 {
            return vec![a[0]];
        }
        let mut buf = vec![ZERO; self.m];
        for k in 0..self.l {
            buf[k] = a[k] * self.chirp[k];
        }
        fft_pow2(&mut buf, &self.tw, false);
        for (x, k) in buf.iter_mut().zip(self.kernel_hat.iter()) {
            *x *= k;
        }
        fft_pow2(&mut buf, &self.tw, true);
        (0..self.l).map(|j| self.chirp[j] * buf[j]).collect()
    }
}

/// O(L²) reference transform, same sign convention. The test oracle for the
/// plan, and the backstop when an independent second route is wanted.
pub fn naive_dft(a: &[Complex64]) -> Vec<Complex64> {
    let l = a.len();
    (0..l)
        .map(|j| {
            let mut acc = ZERO;
            for (k, &v) in a.iter().enumerate() {
                let angle =
                    2.0 * core::f64::consts::PI * ((j * k) % l) as f64 / l as f64;
                acc += v * Complex64::new(libm::cos(angle), libm::sin(angle));
            }
            acc
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rng_vals(n: usize, seed: u64) -> Vec<Complex64> {
        // small inline LCG; the transform tests only need "arbitrary" data
        let mut s = seed.wrapping_mul(0x9E3779B97F4A7C15) | 1;
        let mut next = move || {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (s >> 11) as f64 / (1u64 << 53) as f64 - 0.5
        };
        (0..n).map(|_| Complex64::new(next(), next())).collect()
    }

    fn max_rel_err(a: &[Complex64], b: &[Complex64]) -> f64 {
        let scale = b.iter().map(|x| x.norm()).fold(1e-300, f64::max);
        a.iter()
            .zip(b)
            .map(|(x, y)| (x - y).norm() / scale)
            .fold(0.0, f64::max)
    }

    #[test]
    fn matches_naive_for_many_lengths() {
        for l in [1usize, 2, 3, 4, 5, 6, 7, 8, 12, 16, 31, 100, 360, 997, 1008] {
            let a = rng_vals(l, l as u64);
            let fast = DftPlan::new(l).forward(&a);
            let slow = naive_dft(&a);
            let err = max_rel_err(&fast, &slow);
            assert!(err < 1e-11, "L={l}: rel err {err}");
        }
    }

    #[test]
    fn delta_input_gives_all_ones() {
        let l = 97;
        let mut a = vec![Complex64::new(0.0, 0.0); l];
        a[0] = Complex64::new(1.0, 0.0);
        for x in DftPlan::new(l).forward(&a) {
            assert!((x - Complex64::new(1.0, 0.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn ones_input_gives_scaled_delta() {
        let l = 60;
        let a = vec![Complex64::new(1.0, 0.0); l];
        let f = DftPlan::new(l).forward(&a);
        assert!((f[0] - Complex64::new(l as f64, 0.0)).norm() < 1e-10);
        for x in &f[1..] {
            assert!(x.norm() < 1e-10);
        }
    }

    #[test]
    fn plan_is_reusable_and_deterministic() {
        let l = 210;
        let a = rng_vals(l, 7);
        let plan = DftPlan::new(l);
        let f1 = plan.forward(&a);
        let f2 = plan.forward(&a);
        assert_eq!(f1, f2, "same plan, same input, same bits");
    }

    #[test]
    fn parseval_energy_is_preserved() {
        let l = 313;
        let a = rng_vals(l, 3);
        let f = DftPlan::new(l).forward(&a);
        let ein: f64 = a.iter().map(|x| x.norm_sqr()).sum();
        let eout: f64 = f.iter().map(|x| x.norm_sqr()).sum();
        assert!((eout - l as f64 * ein).abs() / (l as f64 * ein) < 1e-12);
    }
}
