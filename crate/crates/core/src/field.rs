//! Arithmetic in a prime field `F_p` with `p < 2^63`.
//!
//! Elements are plain `u64` values in `[0, p)`. Products widen to `u128`
//! before reduction.

use rand_core::RngCore;

use crate::error::{Error, Result};

/// The Mersenne prime `2^61 - 1`, the default modulus.
pub const MERSENNE_61: u64 = (1 << 61) - 1;

/// Smallest modulus accepted outside toy mode.
pub const MIN_VERIFICATION_PRIME: u64 = (1 << 31) - 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PrimeField {
    p: u64,
}

impl Default for PrimeField {
    fn default() -> Self {
        PrimeField { p: MERSENNE_61 }
    }
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self> {
        if p >= 1 << 63 {
            return Err(Error::PrimeTooLarge(p));
        }
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(PrimeField { p })
    }

    /// Like [`PrimeField::new`] but also enforces [`MIN_VERIFICATION_PRIME`].
    pub fn for_verification(p: u64) -> Result<Self> {
        let field = Self::new(p)?;
        if p < MIN_VERIFICATION_PRIME {
            return Err(Error::PrimeTooSmall { prime: p, minimum: MIN_VERIFICATION_PRIME });
        }
        Ok(field)
    }

    #[inline]
    pub fn modulus(self) -> u64 {
        self.p
    }

    #[inline]
    pub fn reduce(self, a: u64) -> u64 {
        a % self.p
    }

    /// Maps a signed integer to its residue.
    pub fn from_i64(self, a: i64) -> u64 {
        (a as i128).rem_euclid(self.p as i128) as u64
    }

    #[inline]
    pub fn add(self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    #[inline]
    pub fn neg(self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    #[inline]
    pub fn mul(self, a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % self.p as u128) as u64
    }

    pub fn pow(self, mut base: u64, mut exp: u64) -> u64 {
        let mut acc = 1 % self.p;
        base %= self.p;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    /// Multiplicative inverse via the extended Euclidean algorithm.
    pub fn inv(self, a: u64) -> Result<u64> {
        let a = a % self.p;
        if a == 0 {
            return Err(Error::ZeroInverse);
        }
        let (mut r0, mut r1) = (self.p as i128, a as i128);
        let (mut t0, mut t1) = (0i128, 1i128);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (t0, t1) = (t1, t0 - q * t1);
        }
        debug_assert_eq!(r0, 1);
        Ok(t0.rem_euclid(self.p as i128) as u64)
    }

    /// Uniform element by rejection sampling.
    pub fn random<R: RngCore + ?Sized>(self, rng: &mut R) -> u64 {
        let limit = (u64::MAX / self.p) * self.p;
        loop {
            let x = rng.next_u64();
            if x < limit {
                return x % self.p;
            }
        }
    }
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin for 64-bit integers.
pub fn is_prime(n: u64) -> bool {
    const WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &w in &WITNESSES {
        if n.is_multiple_of(w) {
            return n == w;
        }
    }
    let mut d = n - 1;
    let mut twos = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        twos += 1;
    }
    'witness: for &a in &WITNESSES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..twos {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;
    use rand_chacha::rand_core::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn small_field_ops() {
        let f = PrimeField::new(7).unwrap();
        assert_eq!(f.add(3, 5), 1);
        assert_eq!(f.inv(3).unwrap(), 5);
        assert_eq!(f.mul(3, 5), 1);
        assert_eq!(f.sub(3, 5), 5);
        assert_eq!(f.neg(3), 4);
        assert_eq!(f.neg(0), 0);
        assert_eq!(f.from_i64(-2), 5);
    }

    #[test]
    fn zero_has_no_inverse() {
        let f = PrimeField::default();
        assert_eq!(f.inv(0), Err(Error::ZeroInverse));
        assert_eq!(Error::ZeroInverse.to_string(), "zero inverse");
    }

    #[test]
    fn primality() {
        assert!(is_prime(MERSENNE_61));
        assert!(is_prime(MIN_VERIFICATION_PRIME));
        assert!(!is_prime((1 << 61) + 1));
        assert!(!is_prime(1));
        assert!(!is_prime(561));
        assert!(PrimeField::new(15).is_err());
        assert!(PrimeField::for_verification(101).is_err());
        assert!(PrimeField::for_verification(MERSENNE_61).is_ok());
    }

    #[test]
    fn inverses_in_large_field() {
        let f = PrimeField::default();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..200 {
            let a = f.random(&mut rng);
            if a == 0 {
                continue;
            }
            assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
            // Fermat as an independent route.
            assert_eq!(f.inv(a).unwrap(), f.pow(a, f.modulus() - 2));
        }
    }
}
