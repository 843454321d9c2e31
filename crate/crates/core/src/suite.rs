//! Random instance generator for cross-validation runs.
//!
//! An instance is an acyclic quiver on vertices `0..n` (arrows only go from a
//! lower to a higher index) with dimension vectors `alpha`, `beta` satisfying
//! `<alpha, beta> = 0`.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::Serialize;

use crate::quiver::{ringel_form, DimensionVector, Quiver};
use crate::rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SuiteBounds {
    pub max_vertices: usize,
    pub max_parallel: usize,
    pub max_entry: i64,
    /// Upper bound on `dim Rep(Q, alpha)` and `dim Rep(Q, beta)`, keeping
    /// the stretched computations at desk scale.
    pub max_rep_dim: usize,
}

impl Default for SuiteBounds {
    fn default() -> Self {
        Self {
            max_vertices: 4,
            max_parallel: 2,
            max_entry: 3,
            max_rep_dim: 8,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Instance {
    pub quiver: Arc<Quiver>,
    pub alpha: DimensionVector,
    pub beta: DimensionVector,
}

/// Every `beta` with entries in `0..=max_entry`, not identically zero, and
/// `<alpha, beta> = 0`.
pub fn orthogonal_betas(q: &Quiver, alpha: &DimensionVector, max_entry: i64) -> Vec<DimensionVector> {
    let n = q.vertex_count();
    let mut out = Vec::new();
    let mut current = vec![0i64; n];
    loop {
        if current.iter().any(|&b| b > 0) && ringel_form(q, alpha, &current[..]) == Ok(0) {
            out.push(DimensionVector::new(q, current.clone()).expect("nonnegative"));
        }
        // Odometer increment.
        let Some(i) = (0..n).find(|&i| current[i] < max_entry) else {
            return out;
        };
        current[i] += 1;
        current[..i].iter_mut().for_each(|c| *c = 0);
    }
}

fn random_quiver<R: Rng>(rng: &mut R, bounds: &SuiteBounds) -> Quiver {
    let n = rng.gen_range(2..=bounds.max_vertices.max(2));
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            for _ in 0..rng.gen_range(0..=bounds.max_parallel) {
                edges.push((i, j));
            }
        }
    }
    Quiver::from_edges(n, &edges).expect("forward edges are acyclic")
}

/// `count` instances drawn deterministically from `seed`. Quivers without
/// arrows are skipped, as are instances with no admissible `beta`.
pub fn random_instances(count: usize, seed: u64, bounds: &SuiteBounds) -> Vec<Instance> {
    let mut out = Vec::with_capacity(count);
    let mut attempt = 0u64;
    while out.len() < count {
        let mut rng = rng::stream(seed, attempt);
        attempt += 1;
        let q = random_quiver(&mut rng, bounds);
        if q.arrow_count() == 0 {
            continue;
        }
        let values: Vec<i64> = (0..q.vertex_count())
            .map(|_| rng.gen_range(1..=bounds.max_entry))
            .collect();
        let alpha = DimensionVector::new(&q, values).expect("positive");
        if q.rep_dimension(&alpha) > bounds.max_rep_dim {
            continue;
        }
        let betas: Vec<DimensionVector> = orthogonal_betas(&q, &alpha, bounds.max_entry)
            .into_iter()
            .filter(|b| q.rep_dimension(b) <= bounds.max_rep_dim)
            .collect();
        let Some(beta) = betas.choose(&mut rng).cloned() else {
            continue;
        };
        out.push(Instance {
            quiver: Arc::new(q),
            alpha,
            beta,
        });
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn instances_are_orthogonal_and_reproducible() {
        let bounds = SuiteBounds::default();
        let a = random_instances(20, 11, &bounds);
        let b = random_instances(20, 11, &bounds);
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(ringel_form(&x.quiver, &x.alpha, &x.beta), Ok(0));
            assert_eq!(x.quiver.to_spec(), y.quiver.to_spec());
            assert_eq!(x.beta, y.beta);
        }
    }

    #[test]
    fn kronecker_betas() {
        let q = Quiver::from_edges(2, &[(0, 1), (0, 1)]).unwrap();
        let alpha = DimensionVector::new(&q, vec![1, 1]).unwrap();
        let betas: Vec<Vec<i64>> = orthogonal_betas(&q, &alpha, 2)
            .iter()
            .map(|b| b.as_slice().to_vec())
            .collect();
        assert_eq!(betas, vec![vec![1, 1], vec![2, 2]]);
    }
}
