//! In-place discrete Fourier transforms of arbitrary length.
//!
//! Powers of two go through an iterative radix-2 transform; every other
//! length is reduced to a power-of-two circular convolution with Bluestein's
//! chirp. Twiddles are computed directly from `sin`/`cos` of an exactly
//! reduced angle, never by repeated multiplication.

use alloc::vec;
use alloc::vec::Vec;
use num_complex::Complex64;

use crate::expsum::e;

/// `x[j] <- Σ_m x[m] e(mj/M)` (positive exponent, no normalisation).
pub fn backward(data: &mut [Complex64]) {
    transform(data, 1);
}

/// `x[j] <- Σ_m x[m] e(-mj/M)` (negative exponent, no normalisation).
pub fn forward(data: &mut [Complex64]) {
    transform(data, -1);
}

fn transform(data: &mut [Complex64], sign: i8) {
    let n = data.len();
    if n <= 1 {
        return;
    }
    if n.is_power_of_two() {
        radix2(data, sign);
    } else {
        bluestein(data, sign);
    }
}

fn radix2(data: &mut [Complex64], sign: i8) {
    let n = data.len();
    let bits = n.trailing_zeros();
    for i in 0..n {
        let j = i.reverse_bits() >> (usize::BITS - bits);
        if i < j {
            data.swap(i, j);
        }
    }
    let s = f64::from(sign);
    let twiddles: Vec<Complex64> = (0..n / 2).map(|k| e(s * k as f64 / n as f64)).collect();
    let mut len = 2;
    while len <= n {
        let half = len / 2;
        let stride = n / len;
        for start in (0..n).step_by(len) {
            for k in 0..half {
                let w = twiddles[k * stride];
                let u = data[start + k];
                let v = data[start + k + half] * w;
                data[start + k] = u + v;
                data[start + k + half] = u - v;
            }
        }
        len <<= 1;
    }
}

fn bluestein(data: &mut [Complex64], sign: i8) {
    let m = data.len();
    let two_m = 2 * m as u128;
    let s = f64::from(sign);
    // chirp[k] = e(sign k^2 / 2M), with k^2 reduced mod 2M in integers.
    let chirp: Vec<Complex64> = (0..m)
        .map(|k| {
            let k2 = (k as u128 * k as u128) % two_m;
            e(s * k2 as f64 / two_m as f64)
        })
        .collect();
    let l = (2 * m - 1).next_power_of_two();
    let mut a = vec![Complex64::new(0.0, 0.0); l];
    for k in 0..m {
        a[k] = data[k] * chirp[k];
    }
    let mut b = vec![Complex64::new(0.0, 0.0); l];
    b[0] = chirp[0].conj();
    for k in 1..m {
        b[k] = chirp[k].conj();
        b[l - k] = chirp[k].conj();
    }
    radix2(&mut a, -1);
    radix2(&mut b, -1);
    for (x, y) in a.iter_mut().zip(&b) {
        *x *= *y;
    }
    radix2(&mut a, 1);
    let scale = 1.0 / l as f64;
    for j in 0..m {
        data[j] = a[j] * scale * chirp[j];
    }
}
