//! Exact arithmetic in the prime field GF(q).
//!
//! Elements are plain `u64` values in `[0, q)`; the modulus lives in a copyable
//! [`Gf`] context rather than in every element. All operations reduce exactly,
//! nothing ever rounds.

use rand::Rng;

use crate::error::{Error, Result};

/// 2^61 - 1, the default modulus. A Mersenne prime large enough that all
/// point-count constraints are trivially satisfied at desk scale.
pub const MERSENNE61: u64 = (1u64 << 61) - 1;

/// Prime-field context: holds the modulus and performs all element arithmetic.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Gf {
    q: u64,
}

impl Gf {
    /// Creates a context for GF(q). Fails with [`Error::NonPrimeModulus`]
    /// unless `q` is a prime >= 2.
    pub fn new(q: u64) -> Result<Self> {
        if !is_prime_u64(q) {
            return Err(Error::NonPrimeModulus(q));
        }
        Ok(Self { q })
    }

    pub fn modulus(&self) -> u64 {
        self.q
    }

    /// Reduces an arbitrary u64 into the field.
    pub fn el(&self, v: u64) -> u64 {
        v % self.q
    }

    /// Reduces a signed integer into `[0, q)`.
    pub fn from_i64(&self, v: i64) -> u64 {
        let m = self.q as i128;
        (((v as i128 % m) + m) % m) as u64
    }

    pub fn add(&self, a: u64, b: u64) -> u64 {
        debug_assert!(a < self.q && b < self.q);
        let s = a as u128 + b as u128;
        if s >= self.q as u128 {
            (s - self.q as u128) as u64
        } else {
            s as u64
        }
    }

    pub fn sub(&self, a: u64, b: u64) -> u64 {
        debug_assert!(a < self.q && b < self.q);
        if a >= b {
            a - b
        } else {
            a + (self.q - b)
        }
    }

    pub fn neg(&self, a: u64) -> u64 {
        debug_assert!(a < self.q);
        if a == 0 {
            0
        } else {
            self.q - a
        }
    }

    pub fn mul(&self, a: u64, b: u64) -> u64 {
        debug_assert!(a < self.q && b < self.q);
        ((a as u128 * b as u128) % self.q as u128) as u64
    }

    pub fn pow(&self, mut base: u64, mut exp: u64) -> u64 {
        debug_assert!(base < self.q);
        let mut acc: u64 = 1 % self.q;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    /// Multiplicative inverse; `inv(0)` is an error.
    pub fn inv(&self, a: u64) -> Result<u64> {
        if a == 0 {
            return Err(Error::ZeroInverse);
        }
        // q is prime, so a^(q-2) = a^-1 by Fermat.
        Ok(self.pow(a, self.q - 2))
    }

    /// Uniform element from a seeded generator.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> u64 {
        rng.gen_range(0..self.q)
    }
}

/// Deterministic Miller-Rabin for u64 (the witness set below is exact for all
/// 64-bit integers).
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n.is_multiple_of(p) {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0u32;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    let mul = |a: u64, b: u64| ((a as u128 * b as u128) % n as u128) as u64;
    let pow = |mut base: u64, mut exp: u64| {
        let mut acc = 1u64;
        base %= n;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = mul(acc, base);
            }
            base = mul(base, base);
            exp >>= 1;
        }
        acc
    };
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow(a, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 0..s - 1 {
            x = mul(x, x);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}
