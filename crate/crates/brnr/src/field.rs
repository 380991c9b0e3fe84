//! Arithmetic in the prime field F_p for an odd prime p.
//!
//! Scalars are plain `u32` residues in `[0, p)`; the modulus lives in a
//! shared [`PrimeField`] context rather than in every scalar. All other
//! modules do their arithmetic through this type, so exactness is decided
//! here once: widening multiplication, inverses by extended Euclid, no
//! floating point anywhere.

use crate::error::{Error, Result};

/// Shared field context. Copy-sized so it can be embedded freely.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrimeField {
    p: u32,
}

impl PrimeField {
    /// Creates the field F_p. Rejects p = 2 and non-primes: everything
    /// downstream assumes an odd characteristic.
    pub fn new(p: u64) -> Result<Self> {
        if p == 2 {
            return Err(Error::validation("p = 2 is not supported; p must be an odd prime"));
        }
        if p > (1 << 31) {
            return Err(Error::validation(format!("p = {p} is too large; p must fit in 31 bits")));
        }
        let p = p as u32;
        if p < 3 || !is_prime(p) {
            return Err(Error::validation(format!("p = {p} is not an odd prime")));
        }
        Ok(PrimeField { p })
    }

    #[inline]
    pub fn p(&self) -> u32 {
        self.p
    }

    /// Reduces a signed integer into `[0, p)`.
    #[inline]
    pub fn reduce(&self, x: i64) -> u32 {
        let p = self.p as i64;
        (((x % p) + p) % p) as u32
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.p as u64) as u32
    }

    /// Multiplicative inverse by extended Euclid. `inv(0)` is an error.
    pub fn inv(&self, a: u32) -> Result<u32> {
        if a == 0 {
            return Err(Error::validation("0 has no multiplicative inverse"));
        }
        // Invariant: old_r = old_s * p + _ * a throughout; gcd ends in old_r.
        let (mut old_r, mut r) = (self.p as i64, a as i64);
        let (mut old_s, mut s) = (0i64, 1i64);
        while r != 0 {
            let q = old_r / r;
            (old_r, r) = (r, old_r - q * r);
            (old_s, s) = (s, old_s - q * s);
        }
        debug_assert_eq!(old_r, 1, "p prime and a nonzero imply gcd 1");
        Ok(self.reduce(old_s))
    }

    pub fn pow(&self, mut base: u32, mut e: u64) -> u32 {
        let mut acc = 1u32;
        base %= self.p;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Whether `a` is a nonzero square in F_p, by Euler's criterion.
    pub fn is_nonzero_square(&self, a: u32) -> bool {
        a != 0 && self.pow(a, (self.p as u64 - 1) / 2) == 1
    }

    /// Renders a residue with the representative of smallest absolute value,
    /// e.g. p - 1 prints as -1. Used by the textual multivector format.
    pub fn balanced(&self, a: u32) -> i64 {
        if a * 2 > self.p {
            a as i64 - self.p as i64
        } else {
            a as i64
        }
    }
}

fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u64;
    let n64 = n as u64;
    while d * d <= n64 {
        if n64 % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_two_and_composites() {
        assert!(PrimeField::new(2).is_err());
        assert!(PrimeField::new(1).is_err());
        assert!(PrimeField::new(9).is_err());
        assert!(PrimeField::new(15).is_err());
        assert!(PrimeField::new(3).is_ok());
        assert!(PrimeField::new(2147483647).is_ok()); // 2^31 - 1
    }

    #[test]
    fn field_axioms_small() {
        for p in [3u64, 5, 7, 11] {
            let f = PrimeField::new(p).unwrap();
            let p = p as u32;
            for a in 0..p {
                assert_eq!(f.add(a, f.neg(a)), 0);
                if a != 0 {
                    let inv = f.inv(a).unwrap();
                    assert_eq!(f.mul(a, inv), 1);
                }
                for b in 0..p {
                    assert_eq!(f.add(a, b), (a + b) % p);
                    assert_eq!(f.mul(a, b), (a * b) % p);
                    assert_eq!(f.sub(a, b), f.add(a, f.neg(b)));
                }
            }
        }
    }

    #[test]
    fn inv_zero_is_error() {
        let f = PrimeField::new(7).unwrap();
        assert!(f.inv(0).is_err());
    }

    #[test]
    fn reduce_signed() {
        let f = PrimeField::new(5).unwrap();
        assert_eq!(f.reduce(-1), 4);
        assert_eq!(f.reduce(-7), 3);
        assert_eq!(f.reduce(12), 2);
        assert_eq!(f.reduce(0), 0);
    }

    #[test]
    fn squares_mod_seven() {
        // squares mod 7 are {1, 2, 4}
        let f = PrimeField::new(7).unwrap();
        let squares: Vec<u32> = (1..7).filter(|&a| f.is_nonzero_square(a)).collect();
        assert_eq!(squares, vec![1, 2, 4]);
    }

    #[test]
    fn balanced_representatives() {
        let f = PrimeField::new(7).unwrap();
        assert_eq!(f.balanced(6), -1);
        assert_eq!(f.balanced(4), -3);
        assert_eq!(f.balanced(3), 3);
        assert_eq!(f.balanced(0), 0);
    }
}
