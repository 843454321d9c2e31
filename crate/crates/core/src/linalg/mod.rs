//! Exact dense linear algebra over the rationals.
//!
//! Matrices store integer numerators over one shared positive denominator,
//! kept in lowest terms so that structural equality is value equality.
//! Rank and determinant use Bareiss fraction-free elimination on the
//! numerators; kernels come from the reduced row echelon form.

pub mod modular;

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;

use crate::error::{Error, Result};
use modular::PrimeField;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ExactMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<BigInt>,
    denom: BigInt,
}

/// Outcome of a rank computation modulo random primes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModularRank {
    pub rank: usize,
    /// Every prime that was tried, in order.
    pub primes: Vec<u64>,
}

impl ExactMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            entries: vec![BigInt::zero(); rows * cols],
            denom: BigInt::one(),
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| i64::from(i == j))
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> i64) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(BigInt::from(f(i, j)));
            }
        }
        Self {
            rows,
            cols,
            entries,
            denom: BigInt::one(),
        }
    }

    /// Builds a matrix from integer rows. Panics on ragged input.
    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == cols), "ragged rows");
        Self::from_fn(rows.len(), cols, |i, j| rows[i][j])
    }

    /// Builds a matrix from row-major rational entries, clearing them to a
    /// common denominator.
    pub fn from_rationals(rows: usize, cols: usize, values: Vec<BigRational>) -> Self {
        assert_eq!(values.len(), rows * cols);
        let denom = values.iter().fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
        let entries = values.into_iter().map(|v| v.numer() * (&denom / v.denom())).collect();
        let mut m = Self {
            rows,
            cols,
            entries,
            denom,
        };
        m.normalize();
        m
    }

    /// Column vector from integer entries.
    pub fn column(values: Vec<BigInt>) -> Self {
        Self {
            rows: values.len(),
            cols: 1,
            entries: values,
            denom: BigInt::one(),
        }
    }

    fn normalize(&mut self) {
        if self.denom.is_negative() {
            self.denom = -&self.denom;
            for e in &mut self.entries {
                *e = -&*e;
            }
        }
        let g = self.entries.iter().fold(self.denom.clone(), |acc, e| acc.gcd(e));
        if !g.is_one() && !g.is_zero() {
            for e in &mut self.entries {
                *e /= &g;
            }
            self.denom /= &g;
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn denominator(&self) -> &BigInt {
        &self.denom
    }

    pub fn is_integral(&self) -> bool {
        self.denom.is_one()
    }

    /// Numerator of entry `(i, j)` relative to [`Self::denominator`].
    pub fn numerator(&self, i: usize, j: usize) -> &BigInt {
        &self.entries[i * self.cols + j]
    }

    pub fn get(&self, i: usize, j: usize) -> BigRational {
        BigRational::new(self.numerator(i, j).clone(), self.denom.clone())
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Zero::is_zero)
    }

    pub fn to_rationals(&self) -> Vec<BigRational> {
        self.entries
            .iter()
            .map(|e| BigRational::new(e.clone(), self.denom.clone()))
            .collect()
    }

    /// Integer entries as `i64`, if the matrix is integral and they fit.
    pub fn to_i64_rows(&self) -> Option<Vec<Vec<i64>>> {
        if !self.is_integral() {
            return None;
        }
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.numerator(i, j).to_i64()).collect())
            .collect()
    }

    pub fn transpose(&self) -> Self {
        let mut entries = Vec::with_capacity(self.entries.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                entries.push(self.numerator(i, j).clone());
            }
        }
        Self {
            rows: self.cols,
            cols: self.rows,
            entries,
            denom: self.denom.clone(),
        }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::ShapeMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut entries = vec![BigInt::zero(); self.rows * other.cols];
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.numerator(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.numerator(k, j);
                    if !b.is_zero() {
                        entries[i * other.cols + j] += a * b;
                    }
                }
            }
        }
        let mut m = Self {
            rows: self.rows,
            cols: other.cols,
            entries,
            denom: &self.denom * &other.denom,
        };
        m.normalize();
        Ok(m)
    }

    /// Keeps only the listed rows, in the listed order.
    pub fn select_rows(&self, rows: &[usize]) -> Self {
        let mut entries = Vec::with_capacity(rows.len() * self.cols);
        for &i in rows {
            entries.extend_from_slice(&self.entries[i * self.cols..(i + 1) * self.cols]);
        }
        let mut m = Self {
            rows: rows.len(),
            cols: self.cols,
            entries,
            denom: self.denom.clone(),
        };
        m.normalize();
        m
    }

    /// `[self | other]`.
    pub fn hstack(&self, other: &Self) -> Result<Self> {
        if self.rows != other.rows {
            return Err(Error::ShapeMismatch(format!(
                "cannot place {} rows beside {} rows",
                self.rows, other.rows
            )));
        }
        let a = self.to_rationals();
        let b = other.to_rationals();
        let cols = self.cols + other.cols;
        let mut values = Vec::with_capacity(self.rows * cols);
        for i in 0..self.rows {
            values.extend_from_slice(&a[i * self.cols..(i + 1) * self.cols]);
            values.extend_from_slice(&b[i * other.cols..(i + 1) * other.cols]);
        }
        Ok(Self::from_rationals(self.rows, cols, values))
    }

    /// Exact rank over the rationals.
    pub fn rank(&self) -> usize {
        let mut work = self.entries.clone();
        bareiss(&mut work, self.rows, self.cols).rank
    }

    /// Rank of the numerator matrix reduced modulo the prime `p`.
    pub fn rank_mod(&self, p: u64) -> usize {
        let field = PrimeField::new(p);
        let pb = BigInt::from(p);
        let mut work: Vec<u64> = self
            .entries
            .iter()
            .map(|e| e.mod_floor(&pb).to_u64().expect("reduced below p"))
            .collect();
        field.rank(&mut work, self.rows, self.cols)
    }

    /// Rank modulo random primes in `[2^61, 2^62)`. Two independent primes are
    /// drawn; while they disagree a fresh pair is drawn (at most four rounds),
    /// and the largest rank observed is returned. The result is always a
    /// lower bound on [`Self::rank`].
    pub fn rank_modular<R: Rng + ?Sized>(&self, rng: &mut R) -> ModularRank {
        let mut primes = Vec::new();
        let mut best = 0;
        for _ in 0..4 {
            let p1 = modular::random_prime(rng);
            let p2 = modular::random_prime(rng);
            let (r1, r2) = (self.rank_mod(p1), self.rank_mod(p2));
            primes.extend([p1, p2]);
            best = best.max(r1).max(r2);
            if r1 == r2 {
                break;
            }
        }
        ModularRank { rank: best, primes }
    }

    /// Exact determinant (Bareiss on the numerators, then divided by
    /// `denominator^n`).
    pub fn determinant(&self) -> Result<BigRational> {
        if self.rows != self.cols {
            return Err(Error::NonSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let n = self.rows;
        let mut work = self.entries.clone();
        let numer = bareiss_determinant(&mut work, n);
        Ok(BigRational::new(numer, num_traits::pow(self.denom.clone(), n)))
    }

    /// Reduced row echelon form over the rationals, with pivot columns.
    pub fn rref(&self) -> (Vec<BigRational>, Vec<usize>) {
        let (rows, cols) = (self.rows, self.cols);
        let mut a = self.to_rationals();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..cols {
            if r == rows {
                break;
            }
            let Some(piv) = (r..rows).find(|&i| !a[i * cols + c].is_zero()) else {
                continue;
            };
            if piv != r {
                for j in 0..cols {
                    a.swap(piv * cols + j, r * cols + j);
                }
            }
            let inv = a[r * cols + c].recip();
            for j in c..cols {
                a[r * cols + j] = &a[r * cols + j] * &inv;
            }
            for i in 0..rows {
                if i == r || a[i * cols + c].is_zero() {
                    continue;
                }
                let f = a[i * cols + c].clone();
                for j in c..cols {
                    let v = &f * &a[r * cols + j];
                    a[i * cols + j] -= v;
                }
            }
            pivots.push(c);
            r += 1;
        }
        (a, pivots)
    }

    /// Kernel basis over the rationals: one vector per non-pivot column `f`,
    /// equal to 1 at `f` and 0 at the other non-pivot columns. Returns the
    /// vectors together with the non-pivot column indices.
    pub fn nullspace_rational(&self) -> (Vec<Vec<BigRational>>, Vec<usize>) {
        let (r, pivots) = self.rref();
        let cols = self.cols;
        let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
        let basis = free
            .iter()
            .map(|&f| {
                let mut v = vec![BigRational::zero(); cols];
                v[f] = BigRational::one();
                for (i, &p) in pivots.iter().enumerate() {
                    v[p] = -r[i * cols + f].clone();
                }
                v
            })
            .collect();
        (basis, free)
    }

    /// Kernel basis with integer entries: the vectors of
    /// [`Self::nullspace_rational`] scaled to primitive integer vectors.
    pub fn nullspace_basis(&self) -> Vec<ExactMatrix> {
        self.nullspace_rational()
            .0
            .into_iter()
            .map(|v| ExactMatrix::column(primitive_integer_vector(&v)))
            .collect()
    }
}

/// Scales a rational vector to a primitive integer vector, keeping its sign
/// pattern.
pub fn primitive_integer_vector(v: &[BigRational]) -> Vec<BigInt> {
    let l = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = v.iter().map(|x| x.numer() * (&l / x.denom())).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() || g.is_one() {
        ints
    } else {
        ints.into_iter().map(|x| x / &g).collect()
    }
}

struct Echelon {
    rank: usize,
}

/// In-place fraction-free elimination; every intermediate entry is a minor of
/// the input, so the divisions are exact.
fn bareiss(a: &mut [BigInt], rows: usize, cols: usize) -> Echelon {
    let mut prev = BigInt::one();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(piv) = (r..rows).find(|&i| !a[i * cols + c].is_zero()) else {
            continue;
        };
        if piv != r {
            for j in 0..cols {
                a.swap(piv * cols + j, r * cols + j);
            }
        }
        let pivot = a[r * cols + c].clone();
        for i in r + 1..rows {
            let lead = a[i * cols + c].clone();
            for j in c + 1..cols {
                let v = (&pivot * &a[i * cols + j] - &lead * &a[r * cols + j]) / &prev;
                a[i * cols + j] = v;
            }
            a[i * cols + c] = BigInt::zero();
        }
        prev = pivot;
        r += 1;
    }
    Echelon { rank: r }
}

fn bareiss_determinant(a: &mut [BigInt], n: usize) -> BigInt {
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = false;
    let mut prev = BigInt::one();
    for c in 0..n {
        let Some(piv) = (c..n).find(|&i| !a[i * n + c].is_zero()) else {
            return BigInt::zero();
        };
        if piv != c {
            for j in 0..n {
                a.swap(piv * n + j, c * n + j);
            }
            sign = !sign;
        }
        let pivot = a[c * n + c].clone();
        for i in c + 1..n {
            let lead = a[i * n + c].clone();
            for j in c + 1..n {
                let v = (&pivot * &a[i * n + j] - &lead * &a[c * n + j]) / &prev;
                a[i * n + j] = v;
            }
            a[i * n + c] = BigInt::zero();
        }
        prev = pivot;
    }
    let det = a[n * n - 1].clone();
    if sign {
        -det
    } else {
        det
    }
}

impl fmt::Display for ExactMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> ExactMatrix {
        ExactMatrix::from_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>())
    }

    #[test]
    fn rank_examples() {
        assert_eq!(ExactMatrix::identity(3).rank(), 3);
        assert_eq!(m(&[&[1, 1], &[1, 1]]).rank(), 1);
        assert_eq!(ExactMatrix::zeros(0, 5).rank(), 0);
        assert_eq!(ExactMatrix::zeros(4, 0).rank(), 0);
        // Pivot column skipped in the middle.
        assert_eq!(m(&[&[1, 2, 3], &[2, 4, 7], &[3, 6, 10]]).rank(), 2);
    }

    #[test]
    fn nullspace_examples() {
        assert!(ExactMatrix::identity(3).nullspace_basis().is_empty());
        let k = m(&[&[1, -1]]).nullspace_basis();
        assert_eq!(k.len(), 1);
        assert_eq!(k[0], ExactMatrix::column(vec![BigInt::from(1), BigInt::from(1)]));
        assert_eq!(ExactMatrix::zeros(2, 3).nullspace_basis().len(), 3);
    }

    #[test]
    fn nullspace_vectors_are_killed() {
        let a = m(&[&[2, 4, 1, 3], &[1, 2, 0, 1], &[3, 6, 1, 4]]);
        let basis = a.nullspace_basis();
        assert_eq!(basis.len(), 4 - a.rank());
        for v in basis {
            assert!(a.mul(&v).unwrap().is_zero());
        }
    }

    #[test]
    fn determinant_examples() {
        let one = BigRational::one();
        assert_eq!(ExactMatrix::identity(4).determinant().unwrap(), one);
        assert_eq!(m(&[&[0, 1], &[1, 0]]).determinant().unwrap(), -one.clone());
        assert_eq!(m(&[&[7]]).determinant().unwrap(), BigRational::from_integer(7.into()));
        assert_eq!(ExactMatrix::zeros(0, 0).determinant().unwrap(), one);
        assert!(matches!(
            ExactMatrix::zeros(2, 3).determinant(),
            Err(Error::NonSquare { rows: 2, cols: 3 })
        ));
    }

    #[test]
    fn rational_entries_are_normalized() {
        let half = BigRational::new(1.into(), 2.into());
        let third = BigRational::new(1.into(), 3.into());
        let a = ExactMatrix::from_rationals(1, 2, vec![half.clone(), third.clone()]);
        assert_eq!(a.denominator(), &BigInt::from(6));
        assert_eq!(a.get(0, 0), half);
        let b = ExactMatrix::from_rationals(
            1,
            2,
            vec![half.clone() * BigRational::from_integer(2.into()), BigRational::zero()],
        );
        assert!(b.is_integral());
        let d = ExactMatrix::from_rationals(
            2,
            2,
            vec![half.clone(), BigRational::zero(), BigRational::zero(), half.clone()],
        );
        assert_eq!(d.determinant().unwrap(), BigRational::new(1.into(), 4.into()));
    }

    #[test]
    fn modular_rank_agrees_on_small_matrix() {
        use rand::SeedableRng;
        let a = m(&[&[1, 2, 3], &[4, 5, 6], &[7, 8, 9]]);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        let r = a.rank_modular(&mut rng);
        assert_eq!(r.rank, 2);
        assert!(r.primes.len() >= 2);
    }

    #[test]
    fn modular_rank_drops_for_divisible_minor() {
        // det = 2 * p, so the rank drops modulo p.
        let p = 1_000_000_007i64;
        let a = m(&[&[2, 0], &[0, p]]);
        assert_eq!(a.rank(), 2);
        assert_eq!(a.rank_mod(p as u64), 1);
    }
}
