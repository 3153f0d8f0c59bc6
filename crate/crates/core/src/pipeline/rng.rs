//! Deterministic splitmix64 stream with labelled child derivation;
//! identical seeds and labels yield identical streams on every platform.

use crate::ring::{monomials_of_degree, Polynomial, Ring};

const GAMMA: u64 = 0x9e37_79b9_7f4a_7c15;
const MIX1: u64 = 0xbf58_476d_1ce4_e5b9;
const MIX2: u64 = 0x94d0_49bb_1331_11eb;
const FNV_OFFSET: u64 = 0xcbf2_9ce4_8422_2325;
const FNV_PRIME: u64 = 0x0000_0100_0000_01b3;

#[derive(Clone, Debug)]
pub struct Rng {
    state: u64,
}

impl Rng {
    pub fn new(seed: u64) -> Self {
        Rng { state: seed }
    }

    /// Independent stream derived from this stream's seed and a label;
    /// does not advance `self`.
    pub fn child(&self, label: &str) -> Rng {
        let mut h = FNV_OFFSET;
        for b in label.bytes() {
            h ^= b as u64;
            h = h.wrapping_mul(FNV_PRIME);
        }
        Rng { state: mix(self.state ^ h) }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(GAMMA);
        mix(self.state)
    }

    /// Uniform in `[0, p)` by rejection (exact, no modulo bias).
    pub fn below(&mut self, p: u32) -> u32 {
        let p = p as u64;
        let zone = u64::MAX - (u64::MAX % p) - 1;
        loop {
            let x = self.next_u64();
            if x <= zone {
                return (x % p) as u32;
            }
        }
    }

    pub fn nonzero_below(&mut self, p: u32) -> u32 {
        1 + self.below(p - 1)
    }
}

#[inline]
fn mix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(MIX1);
    z = (z ^ (z >> 27)).wrapping_mul(MIX2);
    z ^ (z >> 31)
}

/// Homogeneous form of degree `d` with independent uniform coefficients on
/// every monomial, drawn in descending grevlex order.
pub fn random_form(ring: &Ring, d: u32, rng: &mut Rng) -> Polynomial {
    let p = ring.modulus();
    let terms: Vec<(i64, crate::ring::Monomial)> = monomials_of_degree(ring.nvars(), d)
        .into_iter()
        .map(|m| (rng.below(p) as i64, m))
        .collect();
    ring.from_terms(terms)
}

/// Resamples until nonzero (degree-0 draws can land on 0).
pub fn random_nonzero_form(ring: &Ring, d: u32, rng: &mut Rng) -> Polynomial {
    loop {
        let f = random_form(ring, d, rng);
        if !f.is_zero() {
            return f;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn determinism() {
        let ring = Ring::new(101, 8).unwrap();
        let mut a = Rng::new(42).child("data");
        let mut b = Rng::new(42).child("data");
        let fa = random_form(&ring, 1, &mut a);
        let fb = random_form(&ring, 1, &mut b);
        assert_eq!(fa, fb);
        assert_eq!(fa.terms().len() <= 8, true);
        // distinct labels give distinct streams
        let mut c = Rng::new(42).child("other");
        assert_ne!(random_form(&ring, 1, &mut c), fa);
    }

    #[test]
    fn linear_form_draws_eight_coefficients() {
        let ring = Ring::new(101, 8).unwrap();
        let mut rng = Rng::new(7);
        let f = random_form(&ring, 1, &mut rng);
        assert!(f.degree().unwrap_or(0) <= 1);
        // d = 0 gives a scalar, possibly zero
        let c = random_form(&ring, 0, &mut rng);
        assert!(c.is_constant());
    }
}
