use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A weakly decreasing sequence of positive integers. Trailing zeros are
/// stripped at construction, so the empty list is the zero partition.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Partition {
    parts: Vec<usize>,
}

/// Distinct column lengths `d_1 < ... < d_C` of a Young diagram and the
/// number of columns of each length.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ColumnData {
    pub lengths: Vec<usize>,
    pub counts: Vec<usize>,
}

impl Partition {
    pub fn new(mut parts: Vec<usize>) -> Result<Self> {
        while parts.last() == Some(&0) {
            parts.pop();
        }
        if let Some(w) = parts.windows(2).find(|w| w[0] < w[1]) {
            return Err(Error::InvalidPartition(format!(
                "{parts:?} is not weakly decreasing ({} < {})",
                w[0], w[1]
            )));
        }
        if parts.contains(&0) {
            return Err(Error::InvalidPartition(format!(
                "{parts:?} has a zero before a positive part"
            )));
        }
        Ok(Self { parts })
    }

    /// Builds from parts already known to be a partition (trailing zeros
    /// allowed).
    pub(crate) fn from_sorted(mut parts: Vec<usize>) -> Self {
        while parts.last() == Some(&0) {
            parts.pop();
        }
        debug_assert!(parts.windows(2).all(|w| w[0] >= w[1]));
        Self { parts }
    }

    pub fn empty() -> Self {
        Self::default()
    }

    /// The rectangle with `rows` rows of length `width`.
    pub fn rectangle(rows: usize, width: usize) -> Self {
        if width == 0 {
            Self::empty()
        } else {
            Self {
                parts: vec![width; rows],
            }
        }
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    /// Number of nonzero parts.
    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// `|lambda|`.
    pub fn size(&self) -> usize {
        self.parts.iter().sum()
    }

    /// Part `i` (0-based), zero past the end.
    pub fn part(&self, i: usize) -> usize {
        self.parts.get(i).copied().unwrap_or(0)
    }

    pub fn first(&self) -> usize {
        self.part(0)
    }

    pub fn contains(&self, other: &Self) -> bool {
        other.len() <= self.len() && other.parts.iter().zip(&self.parts).all(|(a, b)| a <= b)
    }

    pub fn scale(&self, n: usize) -> Self {
        Self::from_sorted(self.parts.iter().map(|p| p * n).collect())
    }

    pub fn conjugate(&self) -> Self {
        let cols = self.first();
        Self {
            parts: (0..cols)
                .map(|j| self.parts.iter().filter(|&&p| p > j).count())
                .collect(),
        }
    }

    pub fn column_data(&self) -> ColumnData {
        let conj = self.conjugate();
        let mut lengths: Vec<usize> = Vec::new();
        let mut counts: Vec<usize> = Vec::new();
        // Conjugate parts are weakly decreasing; walk them in reverse to get
        // increasing lengths.
        for &len in conj.parts.iter().rev() {
            if lengths.last() == Some(&len) {
                *counts.last_mut().expect("nonempty") += 1;
            } else {
                lengths.push(len);
                counts.push(1);
            }
        }
        ColumnData { lengths, counts }
    }

    /// `dim S_lambda(C^r)` by the hook-content formula.
    pub fn schur_dimension(&self, r: usize) -> BigUint {
        if self.len() > r {
            return BigUint::from(0u32);
        }
        let conj = self.conjugate();
        let mut numer = BigUint::one();
        let mut denom = BigUint::one();
        for (i, &row) in self.parts.iter().enumerate() {
            for j in 0..row {
                numer *= (r + j - i) as u64;
                let hook = (row - j - 1) + (conj.parts[j] - i - 1) + 1;
                denom *= hook as u64;
            }
        }
        numer / denom
    }

    /// All partitions of `n` with at most `max_parts` parts, in reverse
    /// lexicographic order.
    pub fn all_of(n: usize, max_parts: usize) -> Vec<Partition> {
        let mut out = Vec::new();
        let mut current = Vec::new();
        fn rec(rest: usize, max_part: usize, slots: usize, cur: &mut Vec<usize>, out: &mut Vec<Partition>) {
            if rest == 0 {
                out.push(Partition { parts: cur.clone() });
                return;
            }
            if slots == 0 {
                return;
            }
            // The remaining parts can hold at most slots * part boxes.
            for part in (1..=max_part.min(rest)).rev() {
                if part * slots < rest {
                    break;
                }
                cur.push(part);
                rec(rest - part, part, slots - 1, cur, out);
                cur.pop();
            }
        }
        rec(n, n, max_parts, &mut current, &mut out);
        out
    }
}

impl TryFrom<Vec<usize>> for Partition {
    type Error = Error;

    fn try_from(parts: Vec<usize>) -> Result<Self> {
        Self::new(parts)
    }
}

impl From<Partition> for Vec<usize> {
    fn from(p: Partition) -> Self {
        p.parts
    }
}

impl FromStr for Partition {
    type Err = Error;

    /// Parses `5,2,1`; the empty string is the zero partition.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().trim_start_matches(['(', '[']).trim_end_matches([')', ']']);
        if s.trim().is_empty() {
            return Ok(Self::empty());
        }
        let parts = s
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::InvalidPartition(format!("`{}` is not a nonnegative integer", t.trim())))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(parts)
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, ")")
    }
}
