//! Littlewood-Richardson coefficients and iterated Schur functor products.
//!
//! Two independent enumerations of LR tableaux live here:
//!
//! * [`lr_coefficient`] fills the cells of a fixed skew shape `nu / lambda`
//!   in reading order (rows top to bottom, each row right to left), pruning on
//!   column strictness and the lattice-word condition as it goes;
//! * [`lr_product`] grows `lambda` by one horizontal strip per letter of `mu`,
//!   which enumerates every `nu` at once.
//!
//! Products are cached per `(lambda, mu, bounding box)`.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, OnceLock, RwLock};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::partition::Partition;

/// `c^nu_{lambda, mu}` by direct enumeration of LR skew tableaux.
pub fn lr_coefficient(lambda: &Partition, mu: &Partition, nu: &Partition) -> u64 {
    if lambda.size() + mu.size() != nu.size() || !nu.contains(lambda) || !nu.contains(mu) {
        return 0;
    }
    let rows = nu.len();
    let letters = mu.len();
    if letters == 0 {
        return 1;
    }
    // Cells in reading order.
    let mut cells = Vec::with_capacity(mu.size());
    for i in 0..rows {
        for j in (lambda.part(i)..nu.part(i)).rev() {
            cells.push((i, j));
        }
    }
    let width = nu.first();
    let mut grid = vec![usize::MAX; rows * width];
    let mut counts = vec![0usize; letters];
    let mu_parts = mu.parts();
    count_fillings(0, &cells, lambda, nu, width, mu_parts, &mut grid, &mut counts)
}

#[allow(clippy::too_many_arguments)]
fn count_fillings(
    k: usize,
    cells: &[(usize, usize)],
    lambda: &Partition,
    nu: &Partition,
    width: usize,
    mu: &[usize],
    grid: &mut [usize],
    counts: &mut [usize],
) -> u64 {
    if k == cells.len() {
        return 1;
    }
    let (i, j) = cells[k];
    // Entries weakly increase along rows; we fill right to left.
    let mut hi = mu.len() - 1;
    if j + 1 < nu.part(i) {
        hi = hi.min(grid[i * width + j + 1]);
    }
    // Entries strictly increase down columns of the skew shape.
    let lo = if i > 0 && j >= lambda.part(i - 1) {
        grid[(i - 1) * width + j] + 1
    } else {
        0
    };
    // A letter in row i of an LR tableau is at most i (0-based).
    hi = hi.min(i);
    if lo > hi {
        return 0;
    }
    let mut total = 0;
    for v in lo..=hi {
        if counts[v] == mu[v] || (v > 0 && counts[v] + 1 > counts[v - 1]) {
            continue;
        }
        counts[v] += 1;
        grid[i * width + j] = v;
        total += count_fillings(k + 1, cells, lambda, nu, width, mu, grid, counts);
        counts[v] -= 1;
    }
    grid[i * width + j] = usize::MAX;
    total
}

/// Multiplicities of Schur functors, keyed by partition.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct DecompositionTable {
    pub entries: BTreeMap<Partition, u64>,
}

impl DecompositionTable {
    pub fn unit() -> Self {
        Self {
            entries: BTreeMap::from([(Partition::empty(), 1)]),
        }
    }

    pub fn get(&self, p: &Partition) -> u64 {
        self.entries.get(p).copied().unwrap_or(0)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Partition, &u64)> {
        self.entries.iter()
    }

    fn add(&mut self, p: Partition, m: u64) {
        if m > 0 {
            *self.entries.entry(p).or_insert(0) += m;
        }
    }
}

type ProductKey = (Partition, Partition, Vec<usize>);
type ProductCache = RwLock<HashMap<ProductKey, Arc<Vec<(Partition, u64)>>>>;

fn product_cache() -> &'static ProductCache {
    static CACHE: OnceLock<ProductCache> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// `s_lambda * s_mu` restricted to partitions inside `bounds`, where
/// `bounds[i]` caps row `i` and the number of rows is `bounds.len()`.
pub fn lr_product(lambda: &Partition, mu: &Partition, bounds: &[usize]) -> Arc<Vec<(Partition, u64)>> {
    // Fewer letters means a shallower search.
    let (base, letters) = if mu.size() <= lambda.size() {
        (lambda, mu)
    } else {
        (mu, lambda)
    };
    let key = (base.clone(), letters.clone(), bounds.to_vec());
    if let Some(hit) = product_cache().read().expect("cache lock").get(&key) {
        return hit.clone();
    }
    let result = Arc::new(compute_product(base, letters, bounds));
    product_cache()
        .write()
        .expect("cache lock")
        .entry(key)
        .or_insert(result)
        .clone()
}

fn compute_product(base: &Partition, letters: &Partition, bounds: &[usize]) -> Vec<(Partition, u64)> {
    let rows = bounds.len();
    if base.len() > rows || (0..base.len()).any(|i| base.part(i) > bounds[i]) {
        return Vec::new();
    }
    let mut shape: Vec<usize> = (0..rows).map(|i| base.part(i)).collect();
    let mut prev_counts = vec![0usize; rows];
    let mut found: HashMap<Vec<usize>, u64> = HashMap::new();
    add_strips(0, letters.parts(), bounds, &mut shape, &mut prev_counts, &mut found);
    let mut out: Vec<(Partition, u64)> = found.into_iter().map(|(s, m)| (Partition::from_sorted(s), m)).collect();
    out.sort();
    out
}

/// Adds the strip for letter `k`, then recurses to `k + 1`. `prev_counts[r]`
/// is the number of letters `k - 1` placed in row `r`.
fn add_strips(
    k: usize,
    mu: &[usize],
    bounds: &[usize],
    shape: &mut Vec<usize>,
    prev_counts: &mut Vec<usize>,
    found: &mut HashMap<Vec<usize>, u64>,
) {
    if k == mu.len() {
        *found.entry(shape.clone()).or_insert(0) += 1;
        return;
    }
    let old = shape.clone();
    let mut counts = vec![0usize; shape.len()];
    place_row(0, 0, mu[k], k, mu, bounds, &old, shape, prev_counts, &mut counts, found);
}

#[allow(clippy::too_many_arguments)]
fn place_row(
    r: usize,
    placed: usize,
    need: usize,
    k: usize,
    mu: &[usize],
    bounds: &[usize],
    old: &[usize],
    shape: &mut Vec<usize>,
    prev_counts: &mut Vec<usize>,
    counts: &mut Vec<usize>,
    found: &mut HashMap<Vec<usize>, u64>,
) {
    if placed == need {
        let mut next_prev = std::mem::replace(prev_counts, counts.clone());
        add_strips(k + 1, mu, bounds, shape, prev_counts, found);
        std::mem::swap(prev_counts, &mut next_prev);
        return;
    }
    if r == shape.len() {
        return;
    }
    // Horizontal strip: row r may grow up to the old length of row r - 1.
    let mut cap = bounds[r] - old[r];
    if r > 0 {
        cap = cap.min(old[r - 1] - old[r]);
    }
    cap = cap.min(need - placed);
    // Lattice condition: letters k in rows <= r never outnumber letters
    // k - 1 in rows < r.
    if k > 0 {
        let allowed: usize = prev_counts[..r].iter().sum();
        cap = cap.min(allowed.saturating_sub(placed));
    }
    for x in (0..=cap).rev() {
        shape[r] = old[r] + x;
        counts[r] = x;
        place_row(
            r + 1,
            placed + x,
            need,
            k,
            mu,
            bounds,
            old,
            shape,
            prev_counts,
            counts,
            found,
        );
    }
    shape[r] = old[r];
    counts[r] = 0;
}

fn row_box(rows: usize) -> Vec<usize> {
    vec![usize::MAX / 4; rows]
}

fn check_rows(r: usize, factors: &[Partition]) -> Result<()> {
    if let Some(f) = factors.iter().find(|f| f.len() > r) {
        return Err(Error::TooManyRows {
            partition: f.to_string(),
            len: f.len(),
            max: r,
        });
    }
    Ok(())
}

fn multiply_into(table: &DecompositionTable, factor: &Partition, bounds: &[usize]) -> DecompositionTable {
    let mut next = DecompositionTable::default();
    for (kappa, &m) in table.iter() {
        for (nu, c) in lr_product(kappa, factor, bounds).iter() {
            next.add(nu.clone(), m * c);
        }
    }
    next
}

/// Multiplicities of `S_nu(C^r)` in the ordered tensor product of
/// `S_{factor}(C^r)`, expanded left to right with partitions of more than
/// `r` rows pruned.
pub fn tensor_decompose(r: usize, factors: &[Partition]) -> Result<DecompositionTable> {
    check_rows(r, factors)?;
    let bounds = row_box(r);
    Ok(factors
        .iter()
        .fold(DecompositionTable::unit(), |t, f| multiply_into(&t, f, &bounds)))
}

/// Multiplicity of `S_target` in the product of `factors` over `GL_rows`,
/// pruning every intermediate partition not contained in `target`.
pub fn product_coefficient(factors: &[Partition], target: &Partition, rows: usize) -> u64 {
    if target.len() > rows || factors.iter().any(|f| !target.contains(f)) {
        return 0;
    }
    if factors.iter().map(Partition::size).sum::<usize>() != target.size() {
        return 0;
    }
    let bounds: Vec<usize> = (0..rows).map(|i| target.part(i)).collect();
    let Some((last, init)) = factors.split_last() else {
        return u64::from(target.is_empty());
    };
    let table = init
        .iter()
        .fold(DecompositionTable::unit(), |t, f| multiply_into(&t, f, &bounds));
    // The last factor only needs the single coefficient c^target_{kappa, last}.
    table
        .iter()
        .filter(|(kappa, _)| target.contains(kappa))
        .map(|(kappa, &m)| m * lr_coefficient(kappa, last, target))
        .sum()
}

/// `dim (S_{lambda^1}(C^r) x ... x S_{lambda^s}(C^r))^{SL_r}`: the
/// multiplicity of the rectangle `(k^r)`, `k = sum |lambda^p| / r`. Factors
/// with more than `r` rows vanish, giving 0. The same number counts
/// invariants of the dual product.
pub fn sl_invariant_dim(r: usize, lambdas: &[Partition]) -> u64 {
    if r == 0 || lambdas.iter().any(|l| l.len() > r) {
        return 0;
    }
    let total: usize = lambdas.iter().map(Partition::size).sum();
    if !total.is_multiple_of(r) {
        return 0;
    }
    product_coefficient(lambdas, &Partition::rectangle(r, total / r), r)
}

/// `c^{n nu}_{n lambda, n mu}`.
pub fn stretched_lr(lambda: &Partition, mu: &Partition, nu: &Partition, n: usize) -> u64 {
    lr_coefficient(&lambda.scale(n), &mu.scale(n), &nu.scale(n))
}

/// `sl_invariant_dim(r, n * lambdas)`.
pub fn stretched_invariant(r: usize, lambdas: &[Partition], n: usize) -> u64 {
    let scaled: Vec<Partition> = lambdas.iter().map(|l| l.scale(n)).collect();
    sl_invariant_dim(r, &scaled)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(parts: &[usize]) -> Partition {
        Partition::new(parts.to_vec()).unwrap()
    }

    #[test]
    fn lr_examples() {
        assert_eq!(lr_coefficient(&p(&[1]), &p(&[1]), &p(&[1, 1])), 1);
        assert_eq!(lr_coefficient(&p(&[2, 1]), &p(&[2, 1]), &p(&[3, 2, 1])), 2);
        assert_eq!(lr_coefficient(&p(&[1]), &p(&[2]), &p(&[2])), 0);
        assert_eq!(lr_coefficient(&p(&[]), &p(&[2, 1]), &p(&[2, 1])), 1);
        assert_eq!(lr_coefficient(&p(&[2, 1]), &p(&[]), &p(&[2, 1])), 1);
        assert_eq!(lr_coefficient(&p(&[2]), &p(&[1]), &p(&[1, 1, 1])), 0);
    }

    #[test]
    fn product_matches_coefficients() {
        let (l, m) = (p(&[2, 1]), p(&[2, 1]));
        let prod = lr_product(&l, &m, &row_box(6));
        assert_eq!(prod.iter().map(|(_, c)| c).sum::<u64>(), 8);
        for (nu, c) in prod.iter() {
            assert_eq!(*c, lr_coefficient(&l, &m, nu), "nu = {nu}");
        }
    }

    #[test]
    fn decomposition_rank_three() {
        let t = tensor_decompose(3, &[p(&[2, 1]), p(&[2, 1])]).unwrap();
        let expected = BTreeMap::from([
            (p(&[4, 2]), 1),
            (p(&[4, 1, 1]), 1),
            (p(&[3, 3]), 1),
            (p(&[3, 2, 1]), 2),
            (p(&[2, 2, 2]), 1),
        ]);
        assert_eq!(t.entries, expected);
        assert_eq!(
            tensor_decompose(3, &[p(&[3, 1])]).unwrap().entries,
            BTreeMap::from([(p(&[3, 1]), 1)])
        );
        let with_unit = tensor_decompose(3, &[p(&[2, 1]), Partition::empty(), p(&[2, 1])]).unwrap();
        assert_eq!(with_unit, t);
        assert!(matches!(
            tensor_decompose(2, &[p(&[1, 1, 1])]),
            Err(Error::TooManyRows { len: 3, max: 2, .. })
        ));
    }

    #[test]
    fn invariant_dims() {
        assert_eq!(sl_invariant_dim(2, &[p(&[1]), p(&[1])]), 1);
        assert_eq!(sl_invariant_dim(3, &[p(&[2, 1]), p(&[2, 1]), p(&[2, 1])]), 2);
        assert_eq!(sl_invariant_dim(2, &[p(&[1])]), 0);
        assert_eq!(sl_invariant_dim(2, &[p(&[1, 1, 1]), p(&[1])]), 0);
    }

    #[test]
    fn stretched_examples() {
        let (l, n) = (p(&[2, 1]), p(&[3, 2, 1]));
        assert_eq!(stretched_lr(&l, &l, &n, 1), 2);
        assert_eq!(stretched_lr(&l, &l, &n, 2), 3);
        assert_eq!(stretched_lr(&l, &l, &n, 5), 6);
        let three = [l.clone(), l.clone(), l.clone()];
        assert_eq!(stretched_invariant(3, &three, 4), 5);
    }

    #[test]
    fn product_coefficient_prunes_consistently() {
        let factors = [p(&[2, 1]), p(&[1, 1]), p(&[2])];
        let full = tensor_decompose(3, &factors).unwrap();
        for (nu, &m) in full.iter() {
            assert_eq!(product_coefficient(&factors, nu, 3), m, "nu = {nu}");
        }
        assert_eq!(product_coefficient(&factors, &p(&[7]), 3), 0);
        assert_eq!(product_coefficient(&[], &Partition::empty(), 3), 1);
    }
}
