//! Arithmetic in the prime field F_p and dense elimination over it.
//!
//! Elements are plain `u64` values in `[0, p)`. The modulus is restricted to
//! primes below 2^32 so that a product of two reduced elements fits in a
//! `u64` without overflow.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The Mersenne prime 2^31 - 1.
pub const DEFAULT_PRIME: u64 = 2_147_483_647;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "u64", into = "u64")]
pub struct PrimeField {
    p: u64,
}

impl TryFrom<u64> for PrimeField {
    type Error = Error;

    fn try_from(p: u64) -> Result<Self> {
        PrimeField::new(p)
    }
}

impl From<PrimeField> for u64 {
    fn from(f: PrimeField) -> u64 {
        f.p
    }
}

impl Default for PrimeField {
    fn default() -> Self {
        PrimeField { p: DEFAULT_PRIME }
    }
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self> {
        if p > u32::MAX as u64 || !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(PrimeField { p })
    }

    #[inline]
    pub fn modulus(&self) -> u64 {
        self.p
    }

    #[inline]
    pub fn reduce(&self, x: u64) -> u64 {
        x % self.p
    }

    /// Maps a signed integer to its residue.
    pub fn from_i64(&self, x: i64) -> u64 {
        x.rem_euclid(self.p as i64) as u64
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    #[inline]
    pub fn neg(&self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        (a * b) % self.p
    }

    pub fn pow(&self, mut base: u64, mut exp: u64) -> u64 {
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

    /// Multiplicative inverse; `a` must be nonzero.
    pub fn inv(&self, a: u64) -> u64 {
        debug_assert!(!a.is_multiple_of(self.p), "inverse of zero");
        self.pow(a, self.p - 2)
    }

    /// Row-reduces `rows` in place to echelon form and returns the rank.
    ///
    /// Rows that reduce to zero are left as zero rows; the nonzero rows come
    /// first and have strictly increasing pivot columns.
    pub fn echelonize(&self, rows: &mut [Vec<u64>]) -> usize {
        let ncols = rows.first().map_or(0, |r| r.len());
        let p = self.p;
        let mut rank = 0;
        for col in 0..ncols {
            if rank == rows.len() {
                break;
            }
            let Some(piv) = (rank..rows.len()).find(|&i| rows[i][col] != 0) else {
                continue;
            };
            rows.swap(rank, piv);
            let inv = self.inv(rows[rank][col]);
            for x in rows[rank][col..].iter_mut() {
                *x = (*x * inv) % p;
            }
            let (head, tail) = rows.split_at_mut(rank + 1);
            let pivot_row = &head[rank];
            for row in tail.iter_mut() {
                let f = row[col];
                if f == 0 {
                    continue;
                }
                let nf = p - f;
                for (x, &y) in row[col..].iter_mut().zip(&pivot_row[col..]) {
                    *x = (*x + nf * y) % p;
                }
            }
            rank += 1;
        }
        rank
    }

    /// Rank of a list of vectors; the input is left untouched.
    pub fn rank(&self, rows: &[Vec<u64>]) -> usize {
        let mut work = rows.to_vec();
        self.echelonize(&mut work)
    }

    /// A basis of the right kernel `{x : A x = 0}` of the matrix with the given rows.
    pub fn kernel(&self, rows: &[Vec<u64>], ncols: usize) -> Vec<Vec<u64>> {
        let mut work = rows.to_vec();
        let rank = self.echelonize(&mut work);
        // Back-substitute to reduced echelon form.
        let mut pivots = Vec::with_capacity(rank);
        for row in &work[..rank] {
            pivots.push(row.iter().position(|&x| x != 0).expect("nonzero pivot row"));
        }
        for i in (0..rank).rev() {
            let col = pivots[i];
            let (above, rest) = work.split_at_mut(i);
            let pivot_row = &rest[0];
            for row in above {
                let f = row[col];
                if f == 0 {
                    continue;
                }
                let nf = self.p - f;
                for (x, &y) in row[col..ncols].iter_mut().zip(&pivot_row[col..ncols]) {
                    *x = (*x + nf * y) % self.p;
                }
            }
        }
        let mut basis = Vec::new();
        for free in (0..ncols).filter(|c| !pivots.contains(c)) {
            let mut v = vec![0; ncols];
            v[free] = 1;
            for (i, &col) in pivots.iter().enumerate() {
                v[col] = self.neg(work[i][free]);
            }
            basis.push(v);
        }
        basis
    }
}

/// Deterministic primality test by trial division (adequate below 2^32).
pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    if p.is_multiple_of(2) {
        return p == 2;
    }
    let mut q = 3;
    while q * q <= p {
        if p.is_multiple_of(q) {
            return false;
        }
        q += 2;
    }
    true
}
