//! Dimensions of semi-invariant weight spaces `SI(Q, alpha)_sigma`.
//!
//! Two independent computations:
//!
//! * [`si_dim_cauchy`] expands the coordinate ring of `Rep(Q, alpha)` by the
//!   Cauchy formula, one Schur functor pair per arrow, and counts determinant
//!   powers vertex by vertex with Littlewood-Richardson products;
//! * [`si_dim_eval_oracle`] samples the determinantal semi-invariants
//!   `V -> det d^V_W` and returns the rank of their evaluation matrix at random
//!   points, a Monte Carlo lower bound that is exact with high probability.
//!
//! Coordinate functions of arrow `a` have weight `+1` at `ta` and `-1` at
//! `ha`, matching `sigma_beta`: on the Kronecker quiver with `alpha = (1,1)`
//! the weight `(1,-1)` is spanned by the two arrow coordinates.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::modular::{random_prime, PrimeField};
use crate::linalg::ExactMatrix;
use crate::lr::{product_coefficient, tensor_decompose};
use crate::partition::Partition;
use crate::quiver::{evaluate_weight, ringel_form, sigma_beta, DimensionVector, Quiver, Weight};
use crate::rep::{build_d_matrix, codomain_layout, domain_layout, random_representation_with};
use crate::rng;

/// A weight space `SI(Q, alpha)_sigma` to be measured.
#[derive(Debug, Clone)]
pub struct WeightSpaceQuery {
    pub quiver: Arc<Quiver>,
    pub alpha: DimensionVector,
    pub sigma: Weight,
}

impl WeightSpaceQuery {
    pub fn new(quiver: Arc<Quiver>, alpha: DimensionVector, sigma: Weight) -> Result<Self> {
        if alpha.len() != quiver.vertex_count() || sigma.as_slice().len() != quiver.vertex_count() {
            return Err(Error::VertexMismatch(format!(
                "quiver has {} vertices, alpha has {}, sigma has {}",
                quiver.vertex_count(),
                alpha.len(),
                sigma.as_slice().len()
            )));
        }
        Ok(Self { quiver, alpha, sigma })
    }

    pub fn dim(&self) -> Result<CauchyCount> {
        si_dim_cauchy(&self.quiver, &self.alpha, &self.sigma)
    }
}

/// Result of [`si_dim_cauchy`]. `feasible` is false when no assignment of
/// arrow degrees satisfies the vertex balance equations; the dimension is
/// then 0 for degree reasons alone.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CauchyCount {
    pub dim: u64,
    pub feasible: bool,
}

/// `dim SI(Q, alpha)_sigma` via the Cauchy decomposition.
///
/// Vertices are visited in topological order. At a vertex `x` with
/// `alpha(x) > 0` the incoming partitions are already fixed, so the outgoing
/// partitions must have total size `sigma(x) alpha(x) + sum |incoming|`. The
/// vertex contributes the multiplicity of `det^sigma(x)` in
/// `(x)_out S_lambda(C^alpha(x)) (x) (x)_in S_mu(C^alpha(x))^*`.
pub fn si_dim_cauchy(q: &Quiver, alpha: &DimensionVector, sigma: &Weight) -> Result<CauchyCount> {
    if alpha.len() != q.vertex_count() {
        return Err(Error::VertexMismatch("alpha length".into()));
    }
    if evaluate_weight(sigma, alpha)? != 0 || !balance_feasible(q, alpha, sigma) {
        return Ok(CauchyCount {
            dim: 0,
            feasible: false,
        });
    }
    let ctx = CauchyContext::new(q, alpha, sigma);
    Ok(CauchyCount {
        dim: ctx.count_all(),
        feasible: true,
    })
}

fn is_active(q: &Quiver, alpha: &DimensionVector, a: usize) -> bool {
    alpha.get(q.tail(a)).min(alpha.get(q.head(a))) > 0
}

/// Whether nonnegative degrees `d_a` on active arrows exist with
/// `sum_out d - sum_in d = sigma(x) alpha(x)` at every vertex. This is a
/// transportation problem, decided by a max flow from the surplus vertices to
/// the deficit vertices.
fn balance_feasible(q: &Quiver, alpha: &DimensionVector, sigma: &Weight) -> bool {
    let n = q.vertex_count();
    let supply: Vec<i64> = (0..n).map(|x| sigma.get(x) * alpha.get(x) as i64).collect();
    let total: i64 = supply.iter().filter(|&&s| s > 0).sum();
    let (source, sink) = (n, n + 1);
    let mut cap = vec![vec![0i64; n + 2]; n + 2];
    for a in (0..q.arrow_count()).filter(|&a| is_active(q, alpha, a)) {
        cap[q.tail(a)][q.head(a)] = total;
    }
    for (x, &s) in supply.iter().enumerate() {
        if s > 0 {
            cap[source][x] = s;
        } else if s < 0 {
            cap[x][sink] = -s;
        }
    }
    let mut flow = 0;
    loop {
        // Breadth-first augmenting path.
        let mut prev = vec![usize::MAX; n + 2];
        prev[source] = source;
        let mut queue = std::collections::VecDeque::from([source]);
        while let Some(u) = queue.pop_front() {
            for v in 0..n + 2 {
                if prev[v] == usize::MAX && cap[u][v] > 0 {
                    prev[v] = u;
                    queue.push_back(v);
                }
            }
        }
        if prev[sink] == usize::MAX {
            break;
        }
        let mut push = i64::MAX;
        let mut v = sink;
        while v != source {
            push = push.min(cap[prev[v]][v]);
            v = prev[v];
        }
        let mut v = sink;
        while v != source {
            cap[prev[v]][v] -= push;
            cap[v][prev[v]] += push;
            v = prev[v];
        }
        flow += push;
    }
    flow == total
}

type VertexKey = (usize, i64, Vec<Partition>, Vec<Partition>);
type StateKey = (usize, Vec<Vec<Partition>>);

/// Parallel active arrows from one vertex to one head.
struct ArrowGroup {
    head: usize,
    count: usize,
    rows: usize,
}

/// Partitions of a size with a bounded number of rows.
type Shapes = Arc<Vec<Partition>>;

struct CauchyContext<'a> {
    sigma: &'a Weight,
    /// Vertices with `alpha(x) > 0` in a topological order chosen to keep
    /// few arrows pending between processed and unprocessed vertices.
    order: Vec<usize>,
    dims: Vec<usize>,
    groups: Vec<Vec<ArrowGroup>>,
    vertex_memo: Mutex<HashMap<VertexKey, u64>>,
    state_memo: Mutex<HashMap<StateKey, u64>>,
    shapes: Mutex<HashMap<(usize, usize), Shapes>>,
}

/// One way of filling the outgoing arrows of a vertex: the chosen multiset
/// per group and the weight (vertex multiplicity times arrangements).
type Choice = (Vec<Vec<Partition>>, u64);

impl<'a> CauchyContext<'a> {
    fn new(q: &Quiver, alpha: &DimensionVector, sigma: &'a Weight) -> Self {
        let n = q.vertex_count();
        let mut groups: Vec<Vec<ArrowGroup>> = (0..n).map(|_| Vec::new()).collect();
        let mut indegree = vec![0usize; n];
        for a in (0..q.arrow_count()).filter(|&a| is_active(q, alpha, a)) {
            let (t, h) = (q.tail(a), q.head(a));
            indegree[h] += 1;
            match groups[t].iter_mut().find(|g| g.head == h) {
                Some(g) => g.count += 1,
                None => groups[t].push(ArrowGroup {
                    head: h,
                    count: 1,
                    rows: alpha.get(t).min(alpha.get(h)),
                }),
            }
        }
        let active: Vec<usize> = q
            .topological_order()
            .iter()
            .copied()
            .filter(|&x| alpha.get(x) > 0)
            .collect();
        let out_degree = |x: usize| groups[x].iter().map(|g| g.count).sum::<usize>();
        let mut remaining_in = indegree.clone();
        let mut done = vec![false; n];
        let mut order = Vec::with_capacity(active.len());
        while order.len() < active.len() {
            let x = active
                .iter()
                .copied()
                .filter(|&x| !done[x] && remaining_in[x] == 0)
                .min_by_key(|&x| out_degree(x) as i64 - indegree[x] as i64)
                .expect("acyclic");
            done[x] = true;
            order.push(x);
            for g in &groups[x] {
                remaining_in[g.head] -= g.count;
            }
        }
        Self {
            sigma,
            order,
            dims: (0..n).map(|x| alpha.get(x)).collect(),
            groups,
            vertex_memo: Mutex::new(HashMap::new()),
            state_memo: Mutex::new(HashMap::new()),
            shapes: Mutex::new(HashMap::new()),
        }
    }

    fn count_all(&self) -> u64 {
        if self.order.is_empty() {
            return 1;
        }
        let pending = vec![Vec::new(); self.dims.len()];
        // Parallel over the choices at the first vertex.
        self.choices(0, &pending)
            .into_par_iter()
            .map(|(chosen, m)| m * self.count(1, &self.advance(0, &pending, chosen)))
            .sum()
    }

    /// `pending[y]` is the sorted multiset of partitions already fixed on
    /// arrows into `y`.
    fn count(&self, pos: usize, pending: &[Vec<Partition>]) -> u64 {
        if pos == self.order.len() {
            return 1;
        }
        let key = (pos, self.order[pos..].iter().map(|&y| pending[y].clone()).collect());
        if let Some(&c) = self.state_memo.lock().expect("memo lock").get(&key) {
            return c;
        }
        let total = self
            .choices(pos, pending)
            .into_iter()
            .map(|(chosen, m)| m * self.count(pos + 1, &self.advance(pos, pending, chosen)))
            .sum();
        self.state_memo.lock().expect("memo lock").insert(key, total);
        total
    }

    fn advance(&self, pos: usize, pending: &[Vec<Partition>], chosen: Vec<Vec<Partition>>) -> Vec<Vec<Partition>> {
        let mut next = pending.to_vec();
        let x = self.order[pos];
        next[x].clear();
        for (g, parts) in self.groups[x].iter().zip(chosen) {
            next[g.head].extend(parts);
            next[g.head].sort();
        }
        next
    }

    fn shapes(&self, size: usize, rows: usize) -> Shapes {
        self.shapes
            .lock()
            .expect("shape lock")
            .entry((size, rows))
            .or_insert_with(|| Arc::new(Partition::all_of(size, rows)))
            .clone()
    }

    /// Fillings of the outgoing arrows at `order[pos]` with nonzero vertex
    /// multiplicity. Parallel arrows receive a weakly decreasing list of
    /// partitions, weighted by its number of distinct arrangements.
    fn choices(&self, pos: usize, pending: &[Vec<Partition>]) -> Vec<Choice> {
        let x = self.order[pos];
        let n = self.dims[x];
        let k = self.sigma.get(x);
        let ins = &pending[x];
        let in_total: usize = ins.iter().map(Partition::size).sum();
        let need = k * n as i64 + in_total as i64;
        let groups = &self.groups[x];
        if need < 0 || (groups.is_empty() && need != 0) {
            return Vec::new();
        }
        let mut out = Vec::new();
        let mut current: Vec<Vec<Partition>> = groups.iter().map(|g| Vec::with_capacity(g.count)).collect();
        self.fill(0, need as usize, groups, &mut current, &mut |current| {
            let outs: Vec<Partition> = current.iter().flatten().cloned().collect();
            let m = self.vertex_multiplicity(n, k, outs, ins.clone());
            if m > 0 {
                let arrangements: u64 = current.iter().map(|parts| arrangements(parts)).product();
                out.push((current.to_vec(), m * arrangements));
            }
        });
        out
    }

    fn fill(
        &self,
        g: usize,
        remaining: usize,
        groups: &[ArrowGroup],
        current: &mut Vec<Vec<Partition>>,
        emit: &mut dyn FnMut(&[Vec<Partition>]),
    ) {
        if g == groups.len() {
            if remaining == 0 {
                emit(current);
            }
            return;
        }
        if current[g].len() == groups[g].count {
            self.fill(g + 1, remaining, groups, current, emit);
            return;
        }
        let last_slot = g + 1 == groups.len() && current[g].len() + 1 == groups[g].count;
        let sizes = if last_slot {
            remaining..=remaining
        } else {
            0..=remaining
        };
        for size in sizes {
            for lambda in self.shapes(size, groups[g].rows).iter() {
                // Weakly decreasing within a group.
                if current[g].last().is_some_and(|prev| lambda > prev) {
                    continue;
                }
                current[g].push(lambda.clone());
                self.fill(g, remaining - size, groups, current, emit);
                current[g].pop();
            }
        }
    }

    fn vertex_multiplicity(&self, n: usize, k: i64, mut outs: Vec<Partition>, ins: Vec<Partition>) -> u64 {
        outs.sort();
        let key = (n, k, outs, ins);
        if let Some(&m) = self.vertex_memo.lock().expect("memo lock").get(&key) {
            return m;
        }
        let m = det_power_multiplicity(n, k, &key.2, &key.3);
        self.vertex_memo.lock().expect("memo lock").insert(key, m);
        m
    }
}

/// Number of distinct orderings of a sorted list.
fn arrangements(sorted: &[Partition]) -> u64 {
    let factorial = |m: usize| (1..=m as u64).product::<u64>();
    let mut result = factorial(sorted.len());
    for run in sorted.chunk_by(|a, b| a == b) {
        result /= factorial(run.len());
    }
    result
}

/// Multiplicity of `det^k` in `(x) S_out(C^n) (x) (x) S_in(C^n)^*`, which is
/// `sum_nu [S_nu : (x) S_out] [S_{nu - k} : (x) S_in]`.
pub fn det_power_multiplicity(n: usize, k: i64, outs: &[Partition], ins: &[Partition]) -> u64 {
    let out_size: usize = outs.iter().map(Partition::size).sum();
    let in_size: usize = ins.iter().map(Partition::size).sum();
    if out_size as i64 - in_size as i64 != k * n as i64 {
        return 0;
    }
    if ins.is_empty() {
        return product_coefficient(outs, &Partition::rectangle(n, k as usize), n);
    }
    if outs.is_empty() {
        return product_coefficient(ins, &Partition::rectangle(n, (-k) as usize), n);
    }
    let Ok(table) = tensor_decompose(n, outs) else {
        return 0;
    };
    table
        .iter()
        .filter_map(|(nu, &m)| {
            let shifted: Option<Vec<usize>> = (0..n).map(|i| usize::try_from(nu.part(i) as i64 - k).ok()).collect();
            let rho = Partition::new(shifted?).ok()?;
            Some(m * product_coefficient(ins, &rho, n))
        })
        .sum()
}

/// How the oracle samples representations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum OracleMode {
    /// Entries uniform in `F_p` for a random 62-bit prime `p`.
    Modular,
    /// Integer entries in `[-bound, bound]`, exact determinants and rank.
    Exact { bound: i64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct OracleConfig {
    pub seed: u64,
    /// First sample count; doubled each round.
    pub initial_samples: usize,
    pub max_samples: usize,
    pub mode: OracleMode,
}

impl Default for OracleConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            initial_samples: 8,
            max_samples: 256,
            mode: OracleMode::Modular,
        }
    }
}

impl OracleConfig {
    pub fn with_seed(seed: u64) -> Self {
        Self {
            seed,
            ..Self::default()
        }
    }
}

/// Result of [`si_dim_eval_oracle`]. `ranks[i]` is the evaluation rank with
/// `initial_samples * 2^i` samples; the sample sets are nested, so the
/// sequence never decreases. `stabilized` is false when the cap was hit
/// before two consecutive rounds agreed below the sample count.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OracleResult {
    pub dim: u64,
    pub samples: usize,
    pub ranks: Vec<usize>,
    pub stabilized: bool,
}

/// Monte Carlo `dim SI(Q, alpha)_{sigma_beta}` as the rank of
/// `[det d^{V_j}_{W_i}]` over random `W_i in Rep(Q, beta)` and
/// `V_j in Rep(Q, alpha)`.
pub fn si_dim_eval_oracle(
    q: &Arc<Quiver>,
    alpha: &DimensionVector,
    beta: &DimensionVector,
    config: &OracleConfig,
) -> Result<OracleResult> {
    let value = ringel_form(q, alpha, beta)?;
    if value != 0 {
        return Err(Error::NotOrthogonal { value });
    }
    if config.initial_samples == 0 || config.max_samples < config.initial_samples {
        return Err(Error::InvalidArgument(format!(
            "oracle samples must satisfy 1 <= initial ({}) <= max ({})",
            config.initial_samples, config.max_samples
        )));
    }
    let mut sampler: Box<dyn Evaluator> = match config.mode {
        OracleMode::Modular => Box::new(ModularEvaluator::new(q, alpha, beta, config.seed)),
        OracleMode::Exact { bound } => {
            if bound < 1 {
                return Err(Error::InvalidArgument(format!(
                    "sampling bound must be >= 1, got {bound}"
                )));
            }
            Box::new(ExactEvaluator::new(q, alpha, beta, config.seed, bound))
        }
    };
    let mut ranks = Vec::new();
    let mut m = config.initial_samples;
    loop {
        let rank = sampler.rank_with(m);
        let settled = ranks.last() == Some(&rank) && rank < m / 2;
        ranks.push(rank);
        if settled {
            return Ok(OracleResult {
                dim: rank as u64,
                samples: m,
                ranks,
                stabilized: true,
            });
        }
        if m * 2 > config.max_samples {
            return Ok(OracleResult {
                dim: rank as u64,
                samples: m,
                ranks,
                stabilized: false,
            });
        }
        m *= 2;
    }
}

trait Evaluator {
    /// Rank of the leading `m x m` block of the evaluation matrix.
    fn rank_with(&mut self, m: usize) -> usize;
}

struct ModularEvaluator {
    field: PrimeField,
    q: Arc<Quiver>,
    alpha: DimensionVector,
    beta: DimensionVector,
    seed: u64,
    v: Vec<Vec<Vec<u64>>>,
    w: Vec<Vec<Vec<u64>>>,
    /// Row-major evaluation entries `det d^{V_j}_{W_i}` for `i, j < v.len()`.
    values: HashMap<(usize, usize), u64>,
}

/// Stream reserved for choosing the prime, away from the per-sample streams.
const PRIME_STREAM: u64 = u64::MAX;

impl ModularEvaluator {
    fn new(q: &Arc<Quiver>, alpha: &DimensionVector, beta: &DimensionVector, seed: u64) -> Self {
        let p = random_prime(&mut rng::stream(seed, PRIME_STREAM));
        Self {
            field: PrimeField::new(p),
            q: q.clone(),
            alpha: alpha.clone(),
            beta: beta.clone(),
            seed,
            v: Vec::new(),
            w: Vec::new(),
            values: HashMap::new(),
        }
    }

    fn sample(&self, dim: &DimensionVector, stream: u64) -> Vec<Vec<u64>> {
        let mut rng = rng::stream(self.seed, stream);
        (0..self.q.arrow_count())
            .map(|a| {
                let len = dim.get(self.q.head(a)) * dim.get(self.q.tail(a));
                (0..len).map(|_| self.field.random_element(&mut rng)).collect()
            })
            .collect()
    }

    fn det(&self, v: &[Vec<u64>], w: &[Vec<u64>]) -> u64 {
        let (q, f) = (&self.q, &self.field);
        let (alpha, beta) = (&self.alpha, &self.beta);
        let (dom, n) = domain_layout(q, alpha, beta);
        let (cod, _) = codomain_layout(q, alpha, beta);
        let mut d = vec![0u64; n * n];
        for a in 0..q.arrow_count() {
            let (t, h) = (q.tail(a), q.head(a));
            let (at, ah, bt, bh) = (alpha.get(t), alpha.get(h), beta.get(t), beta.get(h));
            for i in 0..bh {
                for j in 0..at {
                    let row = cod[a] + i * at + j;
                    for k in 0..bt {
                        let col = dom[t] + k * at + j;
                        d[row * n + col] = f.add(d[row * n + col], w[a][i * bt + k]);
                    }
                    for k in 0..ah {
                        let col = dom[h] + i * ah + k;
                        d[row * n + col] = f.sub(d[row * n + col], v[a][k * at + j]);
                    }
                }
            }
        }
        f.determinant(&mut d, n)
    }
}

impl Evaluator for ModularEvaluator {
    fn rank_with(&mut self, m: usize) -> usize {
        for i in self.v.len()..m {
            let (alpha, beta) = (self.alpha.clone(), self.beta.clone());
            self.w.push(self.sample(&beta, 2 * i as u64));
            self.v.push(self.sample(&alpha, 2 * i as u64 + 1));
        }
        let missing: Vec<(usize, usize)> = (0..m)
            .flat_map(|i| (0..m).map(move |j| (i, j)))
            .filter(|key| !self.values.contains_key(key))
            .collect();
        let computed: Vec<((usize, usize), u64)> = missing
            .par_iter()
            .map(|&(i, j)| ((i, j), self.det(&self.v[j], &self.w[i])))
            .collect();
        self.values.extend(computed);
        let mut entries: Vec<u64> = (0..m)
            .flat_map(|i| (0..m).map(move |j| (i, j)))
            .map(|key| self.values[&key])
            .collect();
        self.field.rank(&mut entries, m, m)
    }
}

struct ExactEvaluator {
    q: Arc<Quiver>,
    alpha: DimensionVector,
    beta: DimensionVector,
    seed: u64,
    bound: i64,
    v: Vec<crate::rep::Representation>,
    w: Vec<crate::rep::Representation>,
    values: HashMap<(usize, usize), BigRational>,
}

impl ExactEvaluator {
    fn new(q: &Arc<Quiver>, alpha: &DimensionVector, beta: &DimensionVector, seed: u64, bound: i64) -> Self {
        Self {
            q: q.clone(),
            alpha: alpha.clone(),
            beta: beta.clone(),
            seed,
            bound,
            v: Vec::new(),
            w: Vec::new(),
            values: HashMap::new(),
        }
    }
}

impl Evaluator for ExactEvaluator {
    fn rank_with(&mut self, m: usize) -> usize {
        for i in self.v.len()..m {
            let w = random_representation_with(
                &self.q,
                &self.beta,
                self.bound,
                &mut rng::stream(self.seed, 2 * i as u64),
            );
            let v = random_representation_with(
                &self.q,
                &self.alpha,
                self.bound,
                &mut rng::stream(self.seed, 2 * i as u64 + 1),
            );
            self.w.push(w);
            self.v.push(v);
        }
        let mut entries = Vec::with_capacity(m * m);
        for i in 0..m {
            for j in 0..m {
                let value = self.values.entry((i, j)).or_insert_with(|| {
                    build_d_matrix(&self.v[j], &self.w[i])
                        .and_then(|d| d.determinant())
                        .unwrap_or_else(|_| BigRational::zero())
                });
                entries.push(value.clone());
            }
        }
        ExactMatrix::from_rationals(m, m, entries).rank()
    }
}

/// `n -> dim SI(Q, alpha)_{sigma_{n beta}}` for `n = 1..=values.len()`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StretchTable {
    /// Dimension vectors and weight keyed by vertex identifier.
    pub alpha: BTreeMap<String, i64>,
    pub beta: BTreeMap<String, i64>,
    pub sigma: BTreeMap<String, i64>,
    /// `values[n - 1]` is the dimension at stretch `n`.
    pub values: Vec<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle: Option<Vec<u64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub agreement: Option<Vec<bool>>,
}

impl StretchTable {
    /// A bare table of values, for checks that only look at the numbers.
    pub fn from_values(values: Vec<u64>) -> Self {
        Self {
            alpha: BTreeMap::new(),
            beta: BTreeMap::new(),
            sigma: BTreeMap::new(),
            values,
            oracle: None,
            agreement: None,
        }
    }

    /// The value at stretch `n` (1-based).
    pub fn value(&self, n: usize) -> Option<u64> {
        n.checked_sub(1).and_then(|i| self.values.get(i).copied())
    }

    pub fn all_agree(&self) -> bool {
        self.agreement.as_ref().is_none_or(|a| a.iter().all(|&x| x))
    }
}

/// Stretch values by [`si_dim_cauchy`] with weights `n sigma_beta`, each
/// optionally cross-checked against the oracle at `n beta`.
pub fn stretch_function(
    q: &Arc<Quiver>,
    alpha: &DimensionVector,
    beta: &DimensionVector,
    n_max: usize,
    oracle: Option<&OracleConfig>,
) -> Result<StretchTable> {
    let value = ringel_form(q, alpha, beta)?;
    if value != 0 {
        return Err(Error::NotOrthogonal { value });
    }
    if n_max == 0 {
        return Err(Error::InvalidArgument("stretch length must be >= 1".into()));
    }
    let sigma = sigma_beta(q, beta)?;
    let values = (1..=n_max)
        .map(|n| si_dim_cauchy(q, alpha, &sigma.scale(n as i64)).map(|c| c.dim))
        .collect::<Result<Vec<_>>>()?;
    let oracle_values = oracle
        .map(|config| {
            (1..=n_max)
                .map(|n| si_dim_eval_oracle(q, alpha, &beta.scale(n as i64), config).map(|r| r.dim))
                .collect::<Result<Vec<_>>>()
        })
        .transpose()?;
    let agreement = oracle_values
        .as_ref()
        .map(|o| o.iter().zip(&values).map(|(a, b)| a == b).collect());
    Ok(StretchTable {
        alpha: alpha.to_map(q),
        beta: beta.to_map(q),
        sigma: sigma.to_map(q),
        values,
        oracle: oracle_values,
        agreement,
    })
}

/// Exact determinant of `d^V_W` as an integer, for representations with
/// integer maps.
pub fn d_determinant(v: &crate::rep::Representation, w: &crate::rep::Representation) -> Result<BigInt> {
    let det = build_d_matrix(v, w)?.determinant()?;
    Ok(det.to_integer())
}
