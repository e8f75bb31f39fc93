use crate::error::{AlgebraError, Result};

/// The prime field F_p. Elements are stored as `u32` residues in `[0, p)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrimeField {
    p: u32,
}

/// Default characteristic used by the fixtures and the CLI.
pub const DEFAULT_PRIME: u32 = 101;

fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n as u64 {
        if n as u64 % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

impl PrimeField {
    /// Odd primes below 2^31 only; signs matter everywhere, so p = 2 is rejected.
    pub fn new(p: u32) -> Result<Self> {
        if p <= 2 || p >= (1 << 31) || !is_prime(p) {
            return Err(AlgebraError::InvalidParameter(format!(
                "characteristic must be an odd prime below 2^31, got {p}"
            )));
        }
        Ok(PrimeField { p })
    }

    /// Characteristic 2 is allowed only for arithmetic experiments.
    pub fn new_allow_two(p: u32) -> Result<Self> {
        if p == 2 {
            return Ok(PrimeField { p });
        }
        Self::new(p)
    }

    #[inline]
    pub fn p(&self) -> u32 {
        self.p
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

    pub fn pow(&self, mut a: u32, mut e: u64) -> u32 {
        let mut r = 1u32;
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(r, a);
            }
            a = self.mul(a, a);
            e >>= 1;
        }
        r
    }

    /// Multiplicative inverse; panics on zero.
    pub fn inv(&self, a: u32) -> u32 {
        assert!(a != 0, "inverse of zero in F_{}", self.p);
        self.pow(a, (self.p - 2) as u64)
    }

    /// Reduce a signed integer into `[0, p)`.
    pub fn from_i64(&self, v: i64) -> u32 {
        v.rem_euclid(self.p as i64) as u32
    }

    /// Symmetric representative in `(-p/2, p/2]`, used for display.
    pub fn to_signed(&self, a: u32) -> i64 {
        if a > self.p / 2 {
            a as i64 - self.p as i64
        } else {
            a as i64
        }
    }
}

/// A residue together with its modulus. Convenience wrapper for callers that
/// want self-describing scalars; internal code works on bare `u32`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FieldElement {
    pub value: u32,
    pub field: PrimeField,
}

impl FieldElement {
    pub fn new(field: PrimeField, v: i64) -> Self {
        FieldElement {
            value: field.from_i64(v),
            field,
        }
    }
    pub fn add(self, o: Self) -> Self {
        FieldElement {
            value: self.field.add(self.value, o.value),
            field: self.field,
        }
    }
    pub fn mul(self, o: Self) -> Self {
        FieldElement {
            value: self.field.mul(self.value, o.value),
            field: self.field,
        }
    }
    pub fn inv(self) -> Self {
        FieldElement {
            value: self.field.inv(self.value),
            field: self.field,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_non_primes_and_two() {
        assert!(PrimeField::new(2).is_err());
        assert!(PrimeField::new(91).is_err());
        assert!(PrimeField::new(101).is_ok());
        assert!(PrimeField::new_allow_two(2).is_ok());
    }

    #[test]
    fn inverse_roundtrip() {
        let f = PrimeField::new(101).unwrap();
        for a in 1..101 {
            assert_eq!(f.mul(a, f.inv(a)), 1);
        }
    }

    #[test]
    fn matches_integer_arithmetic() {
        let f = PrimeField::new(101).unwrap();
        for a in -300i64..300 {
            for b in [-7i64, 0, 3, 55, 250] {
                let (x, y) = (f.from_i64(a), f.from_i64(b));
                assert_eq!(f.add(x, y), f.from_i64(a + b));
                assert_eq!(f.sub(x, y), f.from_i64(a - b));
                assert_eq!(f.mul(x, y), f.from_i64(a * b));
            }
        }
    }
}
