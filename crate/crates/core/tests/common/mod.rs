//! Brute-force references shared by the integration tests.
//!
//! Nothing here calls into the crate's orbit or enumeration code: orbits are
//! iterated on plain `(re, im)` tuples, every root is tried, nothing is
//! pruned.

#![allow(dead_code)]

pub mod golden;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use template_mset::ComplexValue;

pub fn c(re: f64, im: f64) -> ComplexValue {
    ComplexValue::new(re, im)
}

/// Squared escape radius `max(4, |c0|^2, |c1|^2)`.
pub fn radius_sq(c0: (f64, f64), c1: (f64, f64)) -> f64 {
    let m0 = c0.0 * c0.0 + c0.1 * c0.1;
    let m1 = c1.0 * c1.0 + c1.1 * c1.1;
    4f64.max(m0).max(m1)
}

/// Orbit of 0 along `bits`; true if no step leaves the escape disc
/// (`|z|^2 > R^2`, or `|z|^2` not finite).
pub fn naive_bounded(c0: (f64, f64), c1: (f64, f64), bits: &[bool]) -> bool {
    let r2 = radius_sq(c0, c1);
    let (mut x, mut y) = (0.0f64, 0.0f64);
    for &b in bits {
        let (cr, ci) = if b { c1 } else { c0 };
        let nx = x * x - y * y + cr;
        let ny = x * y + y * x + ci;
        x = nx;
        y = ny;
        let m = x * x + y * y;
        if m.is_nan() || m > r2 || m.is_infinite() {
            return false;
        }
    }
    true
}

pub fn bits_of(index: u64, depth: u32) -> Vec<bool> {
    (0..depth).rev().map(|k| (index >> k) & 1 == 1).collect()
}

pub fn naive_regular(c0: (f64, f64), c1: (f64, f64), depth: u32) -> Vec<u64> {
    (0..1u64 << depth)
        .filter(|&j| naive_bounded(c0, c1, &bits_of(j, depth)))
        .collect()
}

/// Every suffix `s_{k+1} .. s_N`, `0 <= k < N`, is run from 0 separately.
pub fn naive_multicritical(c0: (f64, f64), c1: (f64, f64), depth: u32) -> Vec<u64> {
    (0..1u64 << depth)
        .filter(|&j| {
            let bits = bits_of(j, depth);
            (0..depth as usize).all(|k| naive_bounded(c0, c1, &bits[k..]))
        })
        .collect()
}

/// Classical escape-time verdict for `f_c` over `iters` steps with radius
/// `max(2, |c|)`.
pub fn naive_classical(cc: (f64, f64), iters: usize) -> bool {
    naive_bounded(cc, cc, &vec![false; iters])
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform point in the disc of radius `r`.
pub fn in_disc(rng: &mut ChaCha8Rng, r: f64) -> (f64, f64) {
    loop {
        let x = rng.gen_range(-r..r);
        let y = rng.gen_range(-r..r);
        if x * x + y * y <= r * r {
            return (x, y);
        }
    }
}

/// Uniform modulus in `(lo, hi)`, uniform angle.
pub fn in_annulus(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> (f64, f64) {
    let m = rng.gen_range(lo..hi);
    let t = rng.gen_range(0.0..std::f64::consts::TAU);
    (m * t.cos(), m * t.sin())
}

pub fn as_c(p: (f64, f64)) -> ComplexValue {
    c(p.0, p.1)
}
