//! Stretching-behavior checks on computed tables, and a search for small
//! quiver instances whose stretch table starts at 2.

use std::collections::{BTreeMap, HashSet};
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::quiver::{sigma_beta, DimensionVector, Quiver, QuiverSpec};
use crate::si::{si_dim_cauchy, stretch_function, OracleConfig, StretchTable};
use crate::suite::orthogonal_betas;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Behavior {
    PolynomialConsistent,
    Saturation,
    Fulton,
    Ktt,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum VerdictDetails {
    /// Coefficients of `c_0 + c_1 n + ...`, as reduced fractions.
    Polynomial { coefficients: Vec<String> },
    /// The first stretch `n` whose value breaks the prediction.
    Counterexample { n: usize, value: u64, expected: String },
    /// The premise on the first value fails.
    Vacuous,
    /// The premise holds and every value matches.
    Confirmed,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StretchVerdict {
    pub behavior: Behavior,
    pub holds: bool,
    pub details: VerdictDetails,
}

impl StretchVerdict {
    pub fn is_vacuous(&self) -> bool {
        self.details == VerdictDetails::Vacuous
    }
}

fn factorial(k: usize) -> BigInt {
    (1..=k).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

/// Forward differences `Delta^k f(1)` for `k = 0..=d`, from values at
/// `n = 1..=d+1`.
fn leading_differences(values: &[u64], d: usize) -> Vec<BigInt> {
    let mut row: Vec<BigInt> = values[..=d].iter().map(|&v| BigInt::from(v)).collect();
    let mut out = Vec::with_capacity(d + 1);
    for _ in 0..=d {
        out.push(row[0].clone());
        row = row.windows(2).map(|w| &w[1] - &w[0]).collect();
    }
    out
}

/// Monomial coefficients of the polynomial of degree `<= d` through
/// `(n, values[n-1])` for `n = 1..=d+1`.
pub fn interpolate(values: &[u64], d: usize) -> Vec<BigRational> {
    let diffs = leading_differences(values, d);
    // P(n) = sum_k Delta^k f(1) * C(n - 1, k); expand each binomial.
    let mut coeffs = vec![BigRational::zero(); d + 1];
    for (k, delta) in diffs.iter().enumerate() {
        if delta.is_zero() {
            continue;
        }
        // prod_{i<k} (n - 1 - i) / k!
        let mut poly = vec![BigRational::one()];
        for i in 0..k {
            let shift = BigRational::from_integer(BigInt::from(-(1 + i as i64)));
            let mut next = vec![BigRational::zero(); poly.len() + 1];
            for (j, c) in poly.iter().enumerate() {
                next[j + 1] += c;
                next[j] += c * &shift;
            }
            poly = next;
        }
        let scale = BigRational::new(delta.clone(), factorial(k));
        for (j, c) in poly.iter().enumerate() {
            coeffs[j] += c * &scale;
        }
    }
    while coeffs.len() > 1 && coeffs.last().is_some_and(Zero::is_zero) {
        coeffs.pop();
    }
    coeffs
}

fn evaluate(coeffs: &[BigRational], n: usize) -> BigRational {
    let x = BigRational::from_integer(BigInt::from(n));
    coeffs.iter().rev().fold(BigRational::zero(), |acc, c| acc * &x + c)
}

/// Whether the table is consistent with a polynomial of degree at most
/// `degree_bound`: every forward difference of order `degree_bound + 1`
/// over the computed window vanishes. Needs `degree_bound + 2` values.
pub fn check_polynomial_consistency(table: &StretchTable, degree_bound: usize) -> Result<StretchVerdict> {
    let values = &table.values;
    let needed = degree_bound + 2;
    if values.len() < needed {
        return Err(Error::InsufficientData {
            needed,
            got: values.len(),
        });
    }
    let coeffs = interpolate(values, degree_bound);
    // A nonzero difference of order d + 1 at window start i is exactly a
    // mismatch between the interpolant through the d + 1 preceding values
    // and the next one; scanning left to right finds the first such n.
    for start in 0..=values.len() - needed {
        let window = &values[start..start + needed];
        let local = interpolate(window, degree_bound);
        let predicted = evaluate(&local, needed);
        let actual = BigRational::from_integer(BigInt::from(window[needed - 1]));
        if predicted != actual {
            return Ok(StretchVerdict {
                behavior: Behavior::PolynomialConsistent,
                holds: false,
                details: VerdictDetails::Counterexample {
                    n: start + needed,
                    value: window[needed - 1],
                    expected: predicted.to_string(),
                },
            });
        }
    }
    Ok(StretchVerdict {
        behavior: Behavior::PolynomialConsistent,
        holds: true,
        details: VerdictDetails::Polynomial {
            coefficients: coeffs.iter().map(ToString::to_string).collect(),
        },
    })
}

fn check_prediction(
    table: &StretchTable,
    behavior: Behavior,
    premise: u64,
    predict: impl Fn(usize) -> u64,
) -> StretchVerdict {
    if table.values.first() != Some(&premise) {
        return StretchVerdict {
            behavior,
            holds: true,
            details: VerdictDetails::Vacuous,
        };
    }
    for (i, &value) in table.values.iter().enumerate() {
        let n = i + 1;
        if value != predict(n) {
            return StretchVerdict {
                behavior,
                holds: false,
                details: VerdictDetails::Counterexample {
                    n,
                    value,
                    expected: predict(n).to_string(),
                },
            };
        }
    }
    StretchVerdict {
        behavior,
        holds: true,
        details: VerdictDetails::Confirmed,
    }
}

/// A first value of 0 forces every value to be 0.
pub fn check_saturation(table: &StretchTable) -> StretchVerdict {
    check_prediction(table, Behavior::Saturation, 0, |_| 0)
}

/// A first value of 1 forces every value to be 1.
pub fn check_fulton(table: &StretchTable) -> StretchVerdict {
    check_prediction(table, Behavior::Fulton, 1, |_| 1)
}

/// A first value of 2 forces the value `n + 1` at stretch `n`.
pub fn check_ktt(table: &StretchTable) -> StretchVerdict {
    check_prediction(table, Behavior::Ktt, 2, |n| n as u64 + 1)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SearchBounds {
    pub vertex_bound: usize,
    pub dim_bound: i64,
    /// Stretch table length.
    pub n_max: usize,
    pub max_parallel: usize,
}

impl Default for SearchBounds {
    fn default() -> Self {
        Self {
            vertex_bound: 3,
            dim_bound: 2,
            n_max: 6,
            max_parallel: 2,
        }
    }
}

/// One instance with first stretch value 2.
#[derive(Debug, Clone, Serialize)]
pub struct Finding {
    pub quiver: QuiverSpec,
    pub alpha: BTreeMap<String, i64>,
    pub beta: BTreeMap<String, i64>,
    pub table: StretchTable,
    pub verdict: StretchVerdict,
    /// Oracle value at stretch 1, when the oracle is enabled.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle_first: Option<u64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SearchReport {
    pub bounds: SearchBounds,
    pub instances_checked: usize,
    pub findings: Vec<Finding>,
    pub violations: usize,
}

impl SearchReport {
    /// One JSON object per finding, newline terminated.
    pub fn to_json_lines(&self) -> String {
        self.findings
            .iter()
            .map(|f| serde_json::to_string(f).expect("finding serializes") + "\n")
            .collect()
    }
}

/// Adjacency multiplicities `m[i][j]` (arrows `i -> j`, `i < j`) of every
/// connected quiver on `n` vertices with at most `max_parallel` parallel
/// arrows, vertices already in topological order.
fn forward_quivers(n: usize, max_parallel: usize) -> Vec<Vec<Vec<usize>>> {
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    let mut out = Vec::new();
    let mut counts = vec![0usize; pairs.len()];
    loop {
        let mut m = vec![vec![0usize; n]; n];
        for (&(i, j), &c) in pairs.iter().zip(&counts) {
            m[i][j] = c;
        }
        if is_connected(&m) {
            out.push(m);
        }
        let Some(k) = (0..pairs.len()).find(|&k| counts[k] < max_parallel) else {
            return out;
        };
        counts[k] += 1;
        counts[..k].iter_mut().for_each(|c| *c = 0);
    }
}

fn is_connected(m: &[Vec<usize>]) -> bool {
    let n = m.len();
    let mut seen = vec![false; n];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(x) = stack.pop() {
        for y in 0..n {
            if !seen[y] && (m[x][y] > 0 || m[y][x] > 0) {
                seen[y] = true;
                stack.push(y);
            }
        }
    }
    seen.into_iter().all(|s| s)
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for rest in permutations(n - 1) {
        for pos in 0..=rest.len() {
            let mut p = rest.clone();
            p.insert(pos, n - 1);
            out.push(p);
        }
    }
    out
}

type CanonicalKey = (Vec<usize>, Vec<i64>, Vec<i64>);

/// The lexicographically least relabeling of `(m, alpha, beta)`.
fn canonical_key(m: &[Vec<usize>], alpha: &[i64], beta: &[i64], perms: &[Vec<usize>]) -> CanonicalKey {
    let n = m.len();
    perms
        .iter()
        .map(|p| {
            let flat = (0..n)
                .flat_map(|i| (0..n).map(move |j| (i, j)))
                .map(|(i, j)| m[p[i]][p[j]])
                .collect();
            let a = p.iter().map(|&i| alpha[i]).collect();
            let b = p.iter().map(|&i| beta[i]).collect();
            (flat, a, b)
        })
        .min()
        .expect("at least one permutation")
}

struct Candidate {
    quiver: Arc<Quiver>,
    alpha: DimensionVector,
    beta: DimensionVector,
}

fn enumerate_candidates(bounds: &SearchBounds) -> Vec<Candidate> {
    let mut out = Vec::new();
    for n in 1..=bounds.vertex_bound {
        let perms = permutations(n);
        let mut seen: HashSet<CanonicalKey> = HashSet::new();
        for m in forward_quivers(n, bounds.max_parallel) {
            let edges: Vec<(usize, usize)> = (0..n)
                .flat_map(|i| (0..n).map(move |j| (i, j)))
                .flat_map(|(i, j)| std::iter::repeat_n((i, j), m[i][j]))
                .collect();
            let q = Arc::new(Quiver::from_edges(n, &edges).expect("forward edges are acyclic"));
            let mut alpha = vec![1i64; n];
            loop {
                let a = DimensionVector::new(&q, alpha.clone()).expect("positive");
                for b in orthogonal_betas(&q, &a, bounds.dim_bound) {
                    if seen.insert(canonical_key(&m, &alpha, b.as_slice(), &perms)) {
                        out.push(Candidate {
                            quiver: q.clone(),
                            alpha: a.clone(),
                            beta: b,
                        });
                    }
                }
                let Some(i) = (0..n).find(|&i| alpha[i] < bounds.dim_bound) else {
                    break;
                };
                alpha[i] += 1;
                alpha[..i].iter_mut().for_each(|v| *v = 1);
            }
        }
    }
    out
}

/// Enumerates connected acyclic quivers with at most `vertex_bound`
/// vertices, `alpha` with entries in `1..=dim_bound`, and nonzero `beta`
/// with entries in `0..=dim_bound` and `<alpha, beta> = 0`, one instance per
/// isomorphism class. Instances with first stretch value 2 get a full table
/// and a KTT verdict; a failing verdict counts as a violation. When
/// `oracle` is given, the first value is also recomputed by the evaluation
/// oracle and a disagreement counts as a violation too.
pub fn search_ktt_witnesses(bounds: &SearchBounds, oracle: Option<&OracleConfig>) -> Result<SearchReport> {
    if bounds.vertex_bound == 0 || bounds.dim_bound < 1 || bounds.n_max == 0 {
        return Err(Error::InvalidArgument("search bounds must be >= 1".into()));
    }
    let candidates = enumerate_candidates(bounds);
    let results: Vec<Option<Finding>> = candidates
        .par_iter()
        .map(|c| -> Result<Option<Finding>> {
            let sigma = sigma_beta(&c.quiver, &c.beta)?;
            if si_dim_cauchy(&c.quiver, &c.alpha, &sigma)?.dim != 2 {
                return Ok(None);
            }
            let table = stretch_function(&c.quiver, &c.alpha, &c.beta, bounds.n_max, None)?;
            let oracle_first = oracle
                .map(|cfg| crate::si::si_dim_eval_oracle(&c.quiver, &c.alpha, &c.beta, cfg).map(|r| r.dim))
                .transpose()?;
            Ok(Some(Finding {
                quiver: c.quiver.to_spec(),
                alpha: c.alpha.to_map(&c.quiver),
                beta: c.beta.to_map(&c.quiver),
                verdict: check_ktt(&table),
                table,
                oracle_first,
            }))
        })
        .collect::<Result<_>>()?;
    let findings: Vec<Finding> = results.into_iter().flatten().collect();
    let violations = findings
        .iter()
        .filter(|f| !f.verdict.holds || f.oracle_first.is_some_and(|o| o != 2))
        .count();
    Ok(SearchReport {
        bounds: *bounds,
        instances_checked: candidates.len(),
        findings,
        violations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table(values: &[u64]) -> StretchTable {
        StretchTable::from_values(values.to_vec())
    }

    #[test]
    fn polynomial_examples() {
        let v = check_polynomial_consistency(&table(&[2, 3, 4, 5, 6]), 1).unwrap();
        assert!(v.holds);
        assert_eq!(
            v.details,
            VerdictDetails::Polynomial {
                coefficients: vec!["1".into(), "1".into()]
            }
        );
        let v = check_polynomial_consistency(&table(&[1, 1, 1, 1]), 0).unwrap();
        assert_eq!(
            v.details,
            VerdictDetails::Polynomial {
                coefficients: vec!["1".into()]
            }
        );
        let v = check_polynomial_consistency(&table(&[1, 2, 4]), 1).unwrap();
        assert!(!v.holds);
        assert_eq!(
            v.details,
            VerdictDetails::Counterexample {
                n: 3,
                value: 4,
                expected: "3".into()
            }
        );
        assert_eq!(
            check_polynomial_consistency(&table(&[1, 2]), 1).unwrap_err(),
            Error::InsufficientData { needed: 3, got: 2 }
        );
    }

    #[test]
    fn interpolation_recovers_quadratics() {
        // n(n+1)/2
        let coeffs = interpolate(&[1, 3, 6, 10], 3);
        let half = BigRational::new(BigInt::from(1), BigInt::from(2));
        assert_eq!(coeffs, vec![BigRational::zero(), half.clone(), half]);
    }

    #[test]
    fn behavior_examples() {
        assert!(check_saturation(&table(&[0, 0, 0, 0])).holds);
        let v = check_ktt(&table(&[2, 3, 4, 5]));
        assert!(v.holds && !v.is_vacuous());
        let t = table(&[3, 7, 13]);
        for v in [check_saturation(&t), check_fulton(&t), check_ktt(&t)] {
            assert!(v.holds && v.is_vacuous());
        }
        let v = check_fulton(&table(&[1, 1, 2]));
        assert_eq!(
            v.details,
            VerdictDetails::Counterexample {
                n: 3,
                value: 2,
                expected: "1".into()
            }
        );
    }

    #[test]
    fn minimal_search_finds_the_kronecker_witness() {
        let bounds = SearchBounds {
            vertex_bound: 2,
            dim_bound: 1,
            n_max: 4,
            max_parallel: 2,
        };
        let report = search_ktt_witnesses(&bounds, None).unwrap();
        assert_eq!(report.violations, 0);
        assert_eq!(report.findings.len(), 1);
        let f = &report.findings[0];
        assert_eq!(f.quiver.arrows.len(), 2);
        let ones = BTreeMap::from([("v1".to_string(), 1), ("v2".to_string(), 1)]);
        assert_eq!((&f.alpha, &f.beta), (&ones, &ones));
        assert_eq!(f.table.values, vec![2, 3, 4, 5]);
    }

    #[test]
    fn single_vertex_search_is_empty() {
        let bounds = SearchBounds {
            vertex_bound: 1,
            ..SearchBounds::default()
        };
        assert!(search_ktt_witnesses(&bounds, None).unwrap().findings.is_empty());
    }

    #[test]
    fn isomorphic_instances_are_merged() {
        // Up to relabeling there is one connected quiver with two vertices
        // and one arrow.
        assert_eq!(forward_quivers(2, 1).len(), 1);
        let bounds = SearchBounds {
            vertex_bound: 3,
            dim_bound: 1,
            n_max: 2,
            max_parallel: 1,
        };
        let c = enumerate_candidates(&bounds);
        let keys: HashSet<_> = c
            .iter()
            .map(|c| {
                let n = c.quiver.vertex_count();
                let mut m = vec![vec![0; n]; n];
                for a in 0..c.quiver.arrow_count() {
                    m[c.quiver.tail(a)][c.quiver.head(a)] += 1;
                }
                canonical_key(&m, c.alpha.as_slice(), c.beta.as_slice(), &permutations(n))
            })
            .collect();
        assert_eq!(keys.len(), c.len());
    }
}
