//! Arithmetic in `Z/pZ` for word-sized primes, used for Monte Carlo ranks.
//!
//! A rank computed modulo `p` never exceeds the rank over the rationals;
//! equality fails only when `p` divides every maximal nonvanishing minor.

use rand::Rng;

/// Lower end of the prime sampling window, `2^61`.
pub const PRIME_LOW: u64 = 1 << 61;
/// Upper end (exclusive) of the prime sampling window, `2^62`.
pub const PRIME_HIGH: u64 = 1 << 62;

fn mul_mod_raw(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod_raw(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod_raw(acc, base, m);
        }
        base = mul_mod_raw(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin; the first twelve prime bases suffice below 2^64.
pub fn is_prime(n: u64) -> bool {
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &p in &BASES {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &BASES {
        let mut x = pow_mod_raw(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod_raw(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// A uniformly random prime in `[2^61, 2^62)`.
pub fn random_prime<R: Rng + ?Sized>(rng: &mut R) -> u64 {
    loop {
        let candidate = rng.gen_range(PRIME_LOW..PRIME_HIGH) | 1;
        if is_prime(candidate) {
            return candidate;
        }
    }
}

/// The field `Z/pZ`. `p` must be prime and below `2^63`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Self {
        debug_assert!(is_prime(p) && p < (1 << 63));
        Self { p }
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn reduce_i64(&self, v: i64) -> u64 {
        v.rem_euclid(self.p as i64) as u64
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
        mul_mod_raw(a, b, self.p)
    }

    pub fn inv(&self, a: u64) -> u64 {
        assert!(a != 0, "zero has no inverse");
        pow_mod_raw(a, self.p - 2, self.p)
    }

    pub fn random_element<R: Rng + ?Sized>(&self, rng: &mut R) -> u64 {
        rng.gen_range(0..self.p)
    }

    /// Rank of a row-major `rows x cols` matrix; `entries` is used as scratch.
    pub fn rank(&self, entries: &mut [u64], rows: usize, cols: usize) -> usize {
        debug_assert_eq!(entries.len(), rows * cols);
        let mut rank = 0;
        for c in 0..cols {
            if rank == rows {
                break;
            }
            let Some(piv) = (rank..rows).find(|&r| entries[r * cols + c] != 0) else {
                continue;
            };
            if piv != rank {
                for j in 0..cols {
                    entries.swap(piv * cols + j, rank * cols + j);
                }
            }
            let inv = self.inv(entries[rank * cols + c]);
            for r in rank + 1..rows {
                let f = entries[r * cols + c];
                if f == 0 {
                    continue;
                }
                let f = self.mul(f, inv);
                for j in c..cols {
                    let v = self.mul(f, entries[rank * cols + j]);
                    entries[r * cols + j] = self.sub(entries[r * cols + j], v);
                }
            }
            rank += 1;
        }
        rank
    }

    /// Determinant of a row-major `n x n` matrix; `entries` is used as scratch.
    pub fn determinant(&self, entries: &mut [u64], n: usize) -> u64 {
        debug_assert_eq!(entries.len(), n * n);
        let mut det = 1u64;
        for c in 0..n {
            let Some(piv) = (c..n).find(|&r| entries[r * n + c] != 0) else {
                return 0;
            };
            if piv != c {
                for j in 0..n {
                    entries.swap(piv * n + j, c * n + j);
                }
                det = self.neg(det);
            }
            let pv = entries[c * n + c];
            det = self.mul(det, pv);
            let inv = self.inv(pv);
            for r in c + 1..n {
                let f = entries[r * n + c];
                if f == 0 {
                    continue;
                }
                let f = self.mul(f, inv);
                for j in c + 1..n {
                    let v = self.mul(f, entries[c * n + j]);
                    entries[r * n + j] = self.sub(entries[r * n + j], v);
                }
            }
        }
        det
    }
}
