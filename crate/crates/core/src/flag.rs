//! Tuples of partitions as weights on a star-shaped flag quiver.
//!
//! For `lambda^1, ..., lambda^s` inside the `(r-1) x ell` box, each partition
//! contributes an arm `1^p -> 2^p -> ... -> C^p -> r` whose vertex `i^p`
//! carries the `i`-th distinct column length `delta^p_i` of `lambda^p`. With
//! `b^p_i` the number of columns of that length, the weight is
//! `sigma(i^p) = b^p_i`, `sigma(r) = -ell`, and it comes from the dimension
//! vector `beta(i^p) = ell - sum_{j >= i} b^p_j`, `beta(r) = ell`.
//! Semi-invariants of weight `n sigma` then count `SL_r` invariants of
//! `S_{n lambda^1} (x) ... (x) S_{n lambda^s}`.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_rational::BigRational;
use num_traits::Zero;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::ExactMatrix;
use crate::lr::sl_invariant_dim;
use crate::partition::Partition;
use crate::quiver::{ringel_form, sigma_beta, Arrow, DimensionVector, Quiver, QuiverSpec, Weight};
use crate::rng;
use crate::si::si_dim_cauchy;

/// `r`, the column bound `ell`, and the partitions.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FlagProblem {
    pub r: usize,
    pub ell: usize,
    pub lambdas: Vec<Partition>,
}

impl FlagProblem {
    pub fn new(r: usize, ell: usize, lambdas: Vec<Partition>) -> Result<Self> {
        let fp = Self { r, ell, lambdas };
        fp.validate()?;
        Ok(fp)
    }

    /// Checks `r >= 2`, `ell >= 1`, at least one partition, and that every
    /// partition fits in `r - 1` rows and `ell` columns.
    pub fn validate(&self) -> Result<()> {
        if self.r < 2 {
            return Err(Error::InvalidFlagProblem(format!("r must be >= 2, got {}", self.r)));
        }
        if self.ell < 1 {
            return Err(Error::InvalidFlagProblem("ell must be >= 1".into()));
        }
        if self.lambdas.is_empty() {
            return Err(Error::InvalidFlagProblem("no partitions given".into()));
        }
        for (p, l) in self.lambdas.iter().enumerate() {
            if l.len() >= self.r || l.first() > self.ell {
                return Err(Error::InvalidFlagProblem(format!(
                    "partition {} = {l} does not fit in {} rows and {} columns",
                    p + 1,
                    self.r - 1,
                    self.ell
                )));
            }
        }
        Ok(())
    }

    /// `r ell - sum_p |lambda^p|`.
    pub fn codim_defect(&self) -> i64 {
        (self.r * self.ell) as i64 - self.lambdas.iter().map(|l| l.size() as i64).sum::<i64>()
    }

    pub fn scale(&self, n: usize) -> Self {
        Self {
            r: self.r,
            ell: self.ell * n,
            lambdas: self.lambdas.iter().map(|l| l.scale(n)).collect(),
        }
    }
}

/// Whether `r ell = sum_p |lambda^p|`.
pub fn codim_condition(fp: &FlagProblem) -> bool {
    fp.codim_defect() == 0
}

/// The flag quiver with its dimension vectors and weight.
#[derive(Debug, Clone)]
pub struct FlagQuiverSpec {
    pub quiver: Arc<Quiver>,
    pub alpha: DimensionVector,
    pub beta: DimensionVector,
    pub sigma: Weight,
}

impl Serialize for FlagQuiverSpec {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Keyed {
            quiver: QuiverSpec,
            alpha: BTreeMap<String, i64>,
            beta: BTreeMap<String, i64>,
            sigma: BTreeMap<String, i64>,
        }
        let q = &self.quiver;
        Keyed {
            quiver: q.to_spec(),
            alpha: self.alpha.to_map(q),
            beta: self.beta.to_map(q),
            sigma: self.sigma.to_map(q),
        }
        .serialize(s)
    }
}

/// Name of arm vertex `i^p` (both 1-based).
pub fn arm_vertex(i: usize, p: usize) -> String {
    format!("{i}^{p}")
}

pub const SINK: &str = "r";

/// Builds the flag quiver. Vertices are listed arm by arm, source to sink,
/// with the sink last.
pub fn build_flag_quiver(fp: &FlagProblem) -> Result<FlagQuiverSpec> {
    fp.validate()?;
    let defect = fp.codim_defect();
    if defect != 0 {
        return Err(Error::CodimFailure { defect });
    }
    let ell = fp.ell as i64;
    let mut vertices = Vec::new();
    let mut arrows = Vec::new();
    let (mut alpha, mut beta, mut sigma) = (Vec::new(), Vec::new(), Vec::new());
    for (p, lambda) in fp.lambdas.iter().enumerate() {
        let cols = lambda.column_data();
        let c = cols.lengths.len();
        for i in 0..c {
            let name = arm_vertex(i + 1, p + 1);
            let tail_sum: usize = cols.counts[i..].iter().sum();
            let b = ell - tail_sum as i64;
            if b < 0 {
                return Err(Error::NonnegativityFailure { vertex: name });
            }
            let head = if i + 1 < c {
                arm_vertex(i + 2, p + 1)
            } else {
                SINK.to_string()
            };
            arrows.push(Arrow {
                id: format!("a{}_{}", p + 1, i + 1),
                tail: name.clone(),
                head,
            });
            vertices.push(name);
            alpha.push(cols.lengths[i] as i64);
            beta.push(b);
            sigma.push(cols.counts[i] as i64);
        }
    }
    vertices.push(SINK.to_string());
    alpha.push(fp.r as i64);
    beta.push(ell);
    sigma.push(-ell);

    let q = Arc::new(Quiver::new(vertices, arrows)?);
    let alpha = DimensionVector::new(&q, alpha)?;
    let beta = DimensionVector::new(&q, beta)?;
    let sigma = Weight::new(&q, sigma)?;
    // Both identities follow from the construction; a failure is a bug.
    let form = ringel_form(&q, &alpha, &beta)?;
    assert_eq!(form, 0, "flag quiver: <alpha, beta> = {form}");
    assert_eq!(sigma_beta(&q, &beta)?, sigma, "flag quiver: sigma is not sigma_beta");
    Ok(FlagQuiverSpec {
        quiver: q,
        alpha,
        beta,
        sigma,
    })
}

/// Both sides of the translation identity at stretch `n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct TranslationCheck {
    pub n: usize,
    pub quiver_dim: u64,
    pub tensor_dim: u64,
    pub equal: bool,
}

/// `dim SI(Q, alpha)_{n sigma}` against `dim (S_{n lambda^1} (x) ...)^{SL_r}`.
pub fn verify_translation(fp: &FlagProblem, n: usize) -> Result<TranslationCheck> {
    if n == 0 {
        return Err(Error::InvalidArgument("stretch n must be >= 1".into()));
    }
    let spec = build_flag_quiver(fp)?;
    let quiver_dim = si_dim_cauchy(&spec.quiver, &spec.alpha, &spec.sigma.scale(n as i64))?.dim;
    let scaled: Vec<Partition> = fp.lambdas.iter().map(|l| l.scale(n)).collect();
    let tensor_dim = sl_invariant_dim(fp.r, &scaled);
    Ok(TranslationCheck {
        n,
        quiver_dim,
        tensor_dim,
        equal: quiver_dim == tensor_dim,
    })
}

/// Outcome of evaluating the flag semistability inequality on one subspace.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SubspaceTest {
    /// `dim S`.
    pub dim: usize,
    /// `sum_p sum_i b^p_i dim(F^p_i cap S)`.
    pub lhs: i64,
    /// `dim S * ell`.
    pub rhs: i64,
    pub holds: bool,
}

/// Column span dimension of the intersection of two column spaces.
fn intersection_dim(a: &ExactMatrix, b: &ExactMatrix) -> Result<usize> {
    let joint = a.hstack(b)?.rank();
    Ok(a.rank() + b.rank() - joint)
}

/// Checks that `flags[p]` is a chain of subspaces of `C^r` with the column
/// lengths of `lambda^p` as dimensions, each given by a spanning set of
/// columns.
fn check_flags(fp: &FlagProblem, flags: &[Vec<ExactMatrix>]) -> Result<()> {
    if flags.len() != fp.lambdas.len() {
        return Err(Error::ShapeMismatch(format!(
            "{} flags for {} partitions",
            flags.len(),
            fp.lambdas.len()
        )));
    }
    for (p, (chain, lambda)) in flags.iter().zip(&fp.lambdas).enumerate() {
        let lengths = lambda.column_data().lengths;
        if chain.len() != lengths.len() {
            return Err(Error::ShapeMismatch(format!(
                "flag {} has {} subspaces, expected {}",
                p + 1,
                chain.len(),
                lengths.len()
            )));
        }
        for (i, (f, &d)) in chain.iter().zip(&lengths).enumerate() {
            if f.rows() != fp.r || f.rank() != d {
                return Err(Error::ShapeMismatch(format!(
                    "flag {} subspace {} spans dimension {} in {} coordinates, expected {d} in {}",
                    p + 1,
                    i + 1,
                    f.rank(),
                    f.rows(),
                    fp.r
                )));
            }
            if i + 1 < chain.len() && intersection_dim(f, &chain[i + 1])? != d {
                return Err(Error::NotNested {
                    arm: p + 1,
                    index: i + 1,
                });
            }
        }
    }
    Ok(())
}

/// Evaluates `sum_p sum_i b^p_i dim(F^p_i cap S) <= dim(S) ell` for the
/// column span `S` of `subspace`. A failing `S` shows the flag tuple is not
/// semistable; no single `S` can show that it is.
pub fn flag_semistability_refute(
    fp: &FlagProblem,
    flags: &[Vec<ExactMatrix>],
    subspace: &ExactMatrix,
) -> Result<SubspaceTest> {
    fp.validate()?;
    check_flags(fp, flags)?;
    if subspace.rows() != fp.r {
        return Err(Error::ShapeMismatch(format!(
            "subspace has {} coordinates, expected {}",
            subspace.rows(),
            fp.r
        )));
    }
    let dim = subspace.rank();
    let mut lhs = 0i64;
    for (chain, lambda) in flags.iter().zip(&fp.lambdas) {
        let counts = lambda.column_data().counts;
        for (f, &b) in chain.iter().zip(&counts) {
            lhs += b as i64 * intersection_dim(f, subspace)? as i64;
        }
    }
    let rhs = (dim * fp.ell) as i64;
    Ok(SubspaceTest {
        dim,
        lhs,
        rhs,
        holds: lhs <= rhs,
    })
}

/// A basis of the intersection of two column spaces, as columns.
fn intersection_basis(a: &ExactMatrix, b: &ExactMatrix) -> Result<ExactMatrix> {
    let (kernel, _) = a.hstack(b)?.nullspace_rational();
    let rows = a.rows();
    let a_vals = a.to_rationals();
    let cols: Vec<Vec<BigRational>> = kernel
        .iter()
        .map(|x| {
            (0..rows)
                .map(|i| (0..a.cols()).fold(BigRational::zero(), |acc, j| acc + &a_vals[i * a.cols() + j] * &x[j]))
                .collect()
        })
        .collect();
    let values = (0..rows).flat_map(|i| cols.iter().map(move |c| c[i].clone())).collect();
    Ok(ExactMatrix::from_rationals(rows, cols.len(), values))
}

/// Searches for a subspace violating the semistability inequality. The
/// candidates are every flag member, pairwise sums and intersections of
/// members, and `trials` random subspaces. Returns the candidate with the
/// largest violation, if any.
pub fn search_refuting_subspace(
    fp: &FlagProblem,
    flags: &[Vec<ExactMatrix>],
    trials: usize,
    seed: u64,
) -> Result<Option<(ExactMatrix, SubspaceTest)>> {
    check_flags(fp, flags)?;
    let members: Vec<&ExactMatrix> = flags.iter().flatten().collect();
    let mut candidates: Vec<ExactMatrix> = members.iter().map(|&m| m.clone()).collect();
    for (i, a) in members.iter().enumerate() {
        for b in &members[i + 1..] {
            candidates.push(a.hstack(b)?);
            candidates.push(intersection_basis(a, b)?);
        }
    }
    let mut rng = rng::stream(seed, 0);
    for _ in 0..trials {
        let d = rng.gen_range(1..fp.r);
        candidates.push(ExactMatrix::from_fn(fp.r, d, |_, _| rng.gen_range(-3..=3)));
    }
    let mut best: Option<(ExactMatrix, SubspaceTest)> = None;
    for s in candidates {
        if s.cols() == 0 {
            continue;
        }
        let t = flag_semistability_refute(fp, flags, &s)?;
        let excess = t.lhs - t.rhs;
        if excess > 0 && best.as_ref().is_none_or(|(_, b)| excess > b.lhs - b.rhs) {
            best = Some((s, t));
        }
    }
    Ok(best)
}

/// The standard flag tuple: every arm uses the coordinate subspaces
/// `span(e_1, ..., e_delta)`.
pub fn coordinate_flags(fp: &FlagProblem) -> Vec<Vec<ExactMatrix>> {
    fp.lambdas
        .iter()
        .map(|l| {
            l.column_data()
                .lengths
                .iter()
                .map(|&d| ExactMatrix::from_fn(fp.r, d, |i, j| i64::from(i == j)))
                .collect()
        })
        .collect()
}

/// A random flag tuple: arm `p` uses the leading columns of a random
/// integer `r x r` matrix.
pub fn random_flags(fp: &FlagProblem, seed: u64) -> Vec<Vec<ExactMatrix>> {
    fp.lambdas
        .iter()
        .enumerate()
        .map(|(p, l)| {
            let mut rng = rng::stream(seed, p as u64);
            // A unit lower-triangular factor keeps the basis invertible.
            let basis = ExactMatrix::from_fn(fp.r, fp.r, |i, j| match i.cmp(&j) {
                std::cmp::Ordering::Equal => 1,
                std::cmp::Ordering::Greater => rng.gen_range(-5..=5),
                std::cmp::Ordering::Less => 0,
            });
            let mix = ExactMatrix::from_fn(fp.r, fp.r, |i, j| match i.cmp(&j) {
                std::cmp::Ordering::Equal => 1,
                std::cmp::Ordering::Less => rng.gen_range(-5..=5),
                std::cmp::Ordering::Greater => 0,
            });
            let g = basis.mul(&mix).expect("square");
            l.column_data()
                .lengths
                .iter()
                .map(|&d| {
                    let cols: Vec<usize> = (0..d).collect();
                    g.transpose().select_rows(&cols).transpose()
                })
                .collect()
        })
        .collect()
}

/// Random flag problems satisfying the codimension condition, with `s`
/// partitions, `2 <= r <= r_max` and `1 <= ell <= ell_max`. Duplicates are
/// skipped.
pub fn random_flag_problems(count: usize, seed: u64, r_max: usize, ell_max: usize, s: usize) -> Vec<FlagProblem> {
    let mut out: Vec<FlagProblem> = Vec::new();
    let mut attempt = 0u64;
    while out.len() < count && attempt < 10_000 {
        let mut rng = rng::stream(seed, attempt);
        attempt += 1;
        let r = rng.gen_range(2..=r_max.max(2));
        let ell = rng.gen_range(1..=ell_max.max(1));
        let mut lambdas: Vec<Partition> = (0..s.saturating_sub(1))
            .map(|_| random_boxed(&mut rng, r - 1, ell))
            .collect();
        let used: usize = lambdas.iter().map(Partition::size).sum();
        let Some(rest) = (r * ell).checked_sub(used) else {
            continue;
        };
        let fits: Vec<Partition> = Partition::all_of(rest, r - 1)
            .into_iter()
            .filter(|l| l.first() <= ell)
            .collect();
        if fits.is_empty() {
            continue;
        }
        lambdas.push(fits[rng.gen_range(0..fits.len())].clone());
        let fp = FlagProblem { r, ell, lambdas };
        if !out.contains(&fp) {
            out.push(fp);
        }
    }
    out
}

fn random_boxed<R: Rng>(rng: &mut R, rows: usize, width: usize) -> Partition {
    let mut parts: Vec<usize> = (0..rows).map(|_| rng.gen_range(0..=width)).collect();
    parts.sort_unstable_by(|a, b| b.cmp(a));
    Partition::new(parts).expect("sorted")
}

/// `sum_i b_i delta_i`, which equals `|lambda|`.
pub fn column_weight(lambda: &Partition) -> usize {
    let c = lambda.column_data();
    c.lengths.iter().zip(&c.counts).map(|(d, b)| d * b).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(parts: &[usize]) -> Partition {
        Partition::new(parts.to_vec()).unwrap()
    }

    fn worked_example() -> FlagProblem {
        FlagProblem::new(4, 5, vec![p(&[5, 2, 1]), p(&[4, 2]), p(&[4, 2])]).unwrap()
    }

    #[test]
    fn codimension_examples() {
        assert!(codim_condition(&worked_example()));
        let two = FlagProblem::new(2, 1, vec![p(&[1]), p(&[1])]).unwrap();
        assert!(codim_condition(&two));
        let three = FlagProblem::new(2, 1, vec![p(&[1]), p(&[1]), p(&[1])]).unwrap();
        assert!(!codim_condition(&three));
        assert_eq!(
            build_flag_quiver(&three).unwrap_err(),
            Error::CodimFailure { defect: -1 }
        );
    }

    #[test]
    fn worked_example_quiver() {
        let spec = build_flag_quiver(&worked_example()).unwrap();
        assert_eq!(spec.alpha.as_slice(), &[1, 2, 3, 1, 2, 1, 2, 4]);
        assert_eq!(spec.beta.as_slice(), &[0, 3, 4, 1, 3, 1, 3, 5]);
        assert_eq!(spec.sigma.as_slice(), &[3, 1, 1, 2, 2, 2, 2, -5]);
        assert_eq!(spec.quiver.vertices()[0], "1^1");
        assert_eq!(spec.quiver.topological_order().last(), Some(&7));
    }

    #[test]
    fn determinant_example() {
        let fp = FlagProblem::new(2, 1, vec![p(&[1]), p(&[1])]).unwrap();
        let spec = build_flag_quiver(&fp).unwrap();
        assert_eq!(spec.alpha.as_slice(), &[1, 1, 2]);
        assert_eq!(spec.beta.as_slice(), &[0, 0, 1]);
        assert_eq!(spec.sigma.as_slice(), &[1, 1, -1]);
        let t = verify_translation(&fp, 1).unwrap();
        assert_eq!((t.quiver_dim, t.tensor_dim, t.equal), (1, 1, true));
    }

    #[test]
    fn translation_examples() {
        let fp = FlagProblem::new(3, 3, vec![p(&[2, 1]); 3]).unwrap();
        let t = verify_translation(&fp, 1).unwrap();
        assert_eq!((t.quiver_dim, t.tensor_dim), (2, 2));
        let t = verify_translation(&fp, 4).unwrap();
        assert_eq!((t.quiver_dim, t.tensor_dim), (5, 5));
        let t = verify_translation(&worked_example(), 1).unwrap();
        assert!(t.equal, "{t:?}");
    }

    #[test]
    fn validation() {
        assert!(FlagProblem::new(3, 2, vec![p(&[1, 1, 1])]).is_err());
        assert!(FlagProblem::new(3, 2, vec![p(&[3])]).is_err());
        assert!(FlagProblem::new(1, 2, vec![p(&[])]).is_err());
        let json = r#"{"r": 4, "ell": 5, "lambdas": [[5,2,1],[4,2],[4,2]]}"#;
        let fp: FlagProblem = serde_json::from_str(json).unwrap();
        assert_eq!(fp, worked_example());
    }

    #[test]
    fn column_bookkeeping() {
        for l in Partition::all_of(7, 7) {
            assert_eq!(column_weight(&l), l.size());
        }
    }

    #[test]
    fn semistability_on_trivial_subspaces() {
        let fp = worked_example();
        let flags = random_flags(&fp, 3);
        let full = ExactMatrix::identity(4);
        let t = flag_semistability_refute(&fp, &flags, &full).unwrap();
        assert_eq!((t.lhs, t.rhs, t.holds), (20, 20, true));
        let zero = ExactMatrix::zeros(4, 1);
        let t = flag_semistability_refute(&fp, &flags, &zero).unwrap();
        assert_eq!((t.lhs, t.rhs, t.holds), (0, 0, true));
    }

    #[test]
    fn coinciding_points_are_refuted() {
        // Two equal points of P^1: the common line carries weight 2 > 1.
        let fp = FlagProblem::new(2, 1, vec![p(&[1]), p(&[1])]).unwrap();
        let flags = coordinate_flags(&fp);
        let line = ExactMatrix::from_rows(&[vec![1], vec![0]]);
        let t = flag_semistability_refute(&fp, &flags, &line).unwrap();
        assert_eq!((t.lhs, t.rhs, t.holds), (2, 1, false));
        let (_, found) = search_refuting_subspace(&fp, &flags, 5, 0).unwrap().unwrap();
        assert!(!found.holds);
        // Distinct points survive every candidate.
        let distinct = vec![
            vec![ExactMatrix::from_rows(&[vec![1], vec![0]])],
            vec![ExactMatrix::from_rows(&[vec![0], vec![1]])],
        ];
        assert!(search_refuting_subspace(&fp, &distinct, 20, 0).unwrap().is_none());
    }

    #[test]
    fn flag_shape_errors() {
        let fp = worked_example();
        let mut flags = coordinate_flags(&fp);
        flags[1][0] = ExactMatrix::from_fn(4, 1, |i, _| i64::from(i == 3));
        let err = flag_semistability_refute(&fp, &flags, &ExactMatrix::identity(4)).unwrap_err();
        assert_eq!(err, Error::NotNested { arm: 2, index: 1 });
        flags.pop();
        assert!(matches!(
            flag_semistability_refute(&fp, &flags, &ExactMatrix::identity(4)),
            Err(Error::ShapeMismatch(_))
        ));
    }

    #[test]
    fn random_problems_satisfy_codimension() {
        let problems = random_flag_problems(15, 2, 4, 5, 3);
        assert_eq!(problems.len(), 15);
        for fp in &problems {
            assert!(codim_condition(fp));
            fp.validate().unwrap();
        }
    }
}
