//! Arithmetic in the prime fields GF(2), GF(3), GF(5) and GF(7).

use std::fmt;

use crate::error::{Error, Result};

pub const SUPPORTED_PRIMES: [u8; 4] = [2, 3, 5, 7];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PrimeField {
    p: u8,
}

impl PrimeField {
    pub const GF2: PrimeField = PrimeField { p: 2 };
    pub const GF3: PrimeField = PrimeField { p: 3 };

    pub fn new(p: u8) -> Result<Self> {
        if SUPPORTED_PRIMES.contains(&p) {
            Ok(PrimeField { p })
        } else {
            Err(Error::input(format!("unsupported field GF({p}); use one of 2, 3, 5, 7")))
        }
    }

    pub fn p(self) -> u8 {
        self.p
    }

    pub fn add(self, a: u8, b: u8) -> u8 {
        (a + b) % self.p
    }

    pub fn sub(self, a: u8, b: u8) -> u8 {
        (a + self.p - b) % self.p
    }

    pub fn neg(self, a: u8) -> u8 {
        (self.p - a) % self.p
    }

    pub fn mul(self, a: u8, b: u8) -> u8 {
        ((a as u16 * b as u16) % self.p as u16) as u8
    }

    /// Multiplicative inverse; panics on zero.
    pub fn inv(self, a: u8) -> u8 {
        assert!(a % self.p != 0, "zero has no inverse");
        (1..self.p).find(|&b| self.mul(a, b) == 1).expect("prime modulus")
    }

    pub fn div(self, a: u8, b: u8) -> u8 {
        self.mul(a, self.inv(b))
    }

    /// All vectors of length `len` whose first nonzero entry is 1, in
    /// lexicographic order of their digit strings.
    pub fn projective_points(self, len: usize) -> Vec<Vec<u8>> {
        let mut out = Vec::new();
        let mut v = vec![0u8; len];
        loop {
            if v.iter().find(|&&d| d != 0) == Some(&1) {
                out.push(v.clone());
            }
            // odometer with the last digit fastest gives lexicographic order
            let mut i = len;
            loop {
                if i == 0 {
                    return out;
                }
                i -= 1;
                v[i] += 1;
                if v[i] < self.p {
                    break;
                }
                v[i] = 0;
            }
        }
    }

    /// Scale `v` so that its first nonzero entry is 1.
    pub fn normalize(self, v: &[u8]) -> Vec<u8> {
        match v.iter().find(|&&d| d != 0) {
            None => v.to_vec(),
            Some(&lead) => {
                let s = self.inv(lead);
                v.iter().map(|&d| self.mul(d, s)).collect()
            }
        }
    }
}

impl fmt::Display for PrimeField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({})", self.p)
    }
}
