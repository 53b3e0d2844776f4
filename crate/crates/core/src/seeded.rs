//! Minimal deterministic RNG (SplitMix64).
//!
//! Checks that involve random samples record their seed and must reproduce
//! byte-identical reports forever, so the generator is pinned here instead of
//! depending on an external crate whose stream could change.

use crate::poly::{ratio, Polynomial, Rat};

#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E3779B97F4A7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
        z ^ (z >> 31)
    }

    /// Uniform in `lo..=hi`.
    pub fn next_range(&mut self, lo: i64, hi: i64) -> i64 {
        debug_assert!(lo <= hi);
        let span = (hi - lo + 1) as u64;
        lo + (self.next_u64() % span) as i64
    }

    /// Small rational with numerator in `-max_num..=max_num` and denominator
    /// in `1..=max_den`.
    pub fn next_rat(&mut self, max_num: i64, max_den: i64) -> Rat {
        let num = self.next_range(-max_num, max_num);
        let den = self.next_range(1, max_den);
        ratio(num, den)
    }

    /// Nonzero variant of `next_rat`.
    pub fn next_rat_nonzero(&mut self, max_num: i64, max_den: i64) -> Rat {
        loop {
            let r = self.next_rat(max_num, max_den);
            if !num_traits::Zero::is_zero(&r) {
                return r;
            }
        }
    }

    /// Random polynomial with integer coefficients in `-max_coeff..=max_coeff`
    /// over all monomials of total degree <= `degree`.
    pub fn next_poly(&mut self, vars: usize, degree: u32, max_coeff: i64) -> Polynomial {
        let mut p = Polynomial::zero(vars);
        for b in Polynomial::monomial_basis(vars, degree) {
            let c = self.next_range(-max_coeff, max_coeff);
            if c != 0 {
                p = &p + &b.scale(&ratio(c, 1));
            }
        }
        p
    }
}
