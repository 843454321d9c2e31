//! Quivers, dimension vectors, weights and the bilinear forms on them.
//!
//! A [`Quiver`] is only ever constructed through [`Quiver::new`] (or
//! [`Quiver::from_spec`]), which runs [`validate_acyclic`]; everything
//! downstream relies on the stored topological order.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An arrow `tail -> head`, identified by `id`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Arrow {
    pub id: String,
    pub tail: String,
    pub head: String,
}

/// The on-disk form of a quiver, before any validation.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct QuiverSpec {
    pub vertices: Vec<String>,
    #[serde(default)]
    pub arrows: Vec<Arrow>,
}

/// A finite acyclic multigraph.
#[derive(Debug, Clone)]
pub struct Quiver {
    vertices: Vec<String>,
    arrows: Vec<Arrow>,
    index: HashMap<String, usize>,
    tails: Vec<usize>,
    heads: Vec<usize>,
    topo: Vec<usize>,
}

impl PartialEq for Quiver {
    fn eq(&self, other: &Self) -> bool {
        self.vertices == other.vertices && self.arrows == other.arrows
    }
}

impl Eq for Quiver {}

/// Vertex index, arrow tails and arrow heads.
type Structure = (HashMap<String, usize>, Vec<usize>, Vec<usize>);

fn check_structure(spec: &QuiverSpec) -> Result<Structure> {
    let mut index = HashMap::with_capacity(spec.vertices.len());
    for (i, v) in spec.vertices.iter().enumerate() {
        if index.insert(v.clone(), i).is_some() {
            return Err(Error::DuplicateId {
                kind: "vertex",
                id: v.clone(),
            });
        }
    }
    let mut seen = HashMap::new();
    let mut tails = Vec::with_capacity(spec.arrows.len());
    let mut heads = Vec::with_capacity(spec.arrows.len());
    for a in &spec.arrows {
        if seen.insert(a.id.clone(), ()).is_some() {
            return Err(Error::DuplicateId {
                kind: "arrow",
                id: a.id.clone(),
            });
        }
        for end in [&a.tail, &a.head] {
            if !index.contains_key(end) {
                return Err(Error::DanglingArrow {
                    arrow: a.id.clone(),
                    vertex: end.clone(),
                });
            }
        }
        tails.push(index[&a.tail]);
        heads.push(index[&a.head]);
    }
    Ok((index, tails, heads))
}

fn topological_order(n: usize, tails: &[usize], heads: &[usize]) -> std::result::Result<Vec<usize>, Vec<usize>> {
    let mut indegree = vec![0usize; n];
    for &h in heads {
        indegree[h] += 1;
    }
    let mut done = vec![false; n];
    let mut order = Vec::with_capacity(n);
    // Smallest declared index first, so the order is reproducible.
    while order.len() < n {
        let Some(next) = (0..n).find(|&v| !done[v] && indegree[v] == 0) else {
            break;
        };
        done[next] = true;
        order.push(next);
        for (t, h) in tails.iter().zip(heads) {
            if *t == next {
                indegree[*h] -= 1;
            }
        }
    }
    if order.len() == n {
        return Ok(order);
    }
    // Every remaining vertex has an incoming arrow from another remaining
    // vertex, so walking backwards along such arrows must revisit a vertex.
    let start = (0..n).find(|&v| !done[v]).expect("unfinished vertex");
    let mut path = vec![start];
    let mut pos = HashMap::from([(start, 0usize)]);
    let mut cur = start;
    loop {
        let pred = tails
            .iter()
            .zip(heads)
            .find(|(t, h)| **h == cur && !done[**t])
            .map(|(t, _)| *t)
            .expect("remaining vertex has a remaining predecessor");
        if let Some(&p) = pos.get(&pred) {
            let mut cycle: Vec<usize> = path[p..].to_vec();
            cycle.reverse();
            cycle.push(cycle[0]);
            return Err(cycle);
        }
        pos.insert(pred, path.len());
        path.push(pred);
        cur = pred;
    }
}

/// Checks that `spec` is well formed and acyclic, returning a vertex order in
/// which every arrow points forward.
pub fn validate_acyclic(spec: &QuiverSpec) -> Result<Vec<String>> {
    let (_, tails, heads) = check_structure(spec)?;
    topological_order(spec.vertices.len(), &tails, &heads)
        .map(|order| order.into_iter().map(|i| spec.vertices[i].clone()).collect())
        .map_err(|cycle| Error::CyclicQuiver {
            cycle: cycle.into_iter().map(|i| spec.vertices[i].clone()).collect(),
        })
}

impl Quiver {
    pub fn new(vertices: Vec<String>, arrows: Vec<Arrow>) -> Result<Self> {
        Self::from_spec(QuiverSpec { vertices, arrows })
    }

    pub fn from_spec(spec: QuiverSpec) -> Result<Self> {
        let (index, tails, heads) = check_structure(&spec)?;
        let topo = topological_order(spec.vertices.len(), &tails, &heads).map_err(|cycle| Error::CyclicQuiver {
            cycle: cycle.into_iter().map(|i| spec.vertices[i].clone()).collect(),
        })?;
        Ok(Self {
            vertices: spec.vertices,
            arrows: spec.arrows,
            index,
            tails,
            heads,
            topo,
        })
    }

    /// Builds a quiver on vertices `v1..vn` from `(tail, head)` index pairs;
    /// arrows are named `a1..am` in the given order.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let vertices = (1..=n).map(|i| format!("v{i}")).collect();
        let arrows = edges
            .iter()
            .enumerate()
            .map(|(k, &(t, h))| Arrow {
                id: format!("a{}", k + 1),
                tail: format!("v{}", t + 1),
                head: format!("v{}", h + 1),
            })
            .collect();
        Self::new(vertices, arrows)
    }

    pub fn to_spec(&self) -> QuiverSpec {
        QuiverSpec {
            vertices: self.vertices.clone(),
            arrows: self.arrows.clone(),
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn arrow_count(&self) -> usize {
        self.arrows.len()
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }

    pub fn vertex_index(&self, id: &str) -> Option<usize> {
        self.index.get(id).copied()
    }

    /// Tail vertex index of arrow `a`.
    pub fn tail(&self, a: usize) -> usize {
        self.tails[a]
    }

    /// Head vertex index of arrow `a`.
    pub fn head(&self, a: usize) -> usize {
        self.heads[a]
    }

    /// Vertex indices in topological order (arrows point forward).
    pub fn topological_order(&self) -> &[usize] {
        &self.topo
    }

    pub fn outgoing(&self, x: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.arrows.len()).filter(move |&a| self.tails[a] == x)
    }

    pub fn incoming(&self, x: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.arrows.len()).filter(move |&a| self.heads[a] == x)
    }

    /// Affine dimension of `Rep(Q, alpha)`, i.e. the sum over arrows of
    /// `alpha(ta) * alpha(ha)`.
    pub fn rep_dimension(&self, alpha: &DimensionVector) -> usize {
        (0..self.arrows.len())
            .map(|a| (alpha.0[self.tails[a]] * alpha.0[self.heads[a]]) as usize)
            .sum()
    }

    fn check_len(&self, len: usize, what: &str) -> Result<()> {
        if len != self.vertices.len() {
            return Err(Error::VertexMismatch(format!(
                "{what} has {len} entries, quiver has {} vertices",
                self.vertices.len()
            )));
        }
        Ok(())
    }

    /// Reads a vertex-keyed map into positional form, rejecting missing or
    /// unknown vertices.
    pub fn values_from_map(&self, map: &BTreeMap<String, i64>) -> Result<Vec<i64>> {
        if let Some(extra) = map.keys().find(|k| !self.index.contains_key(*k)) {
            return Err(Error::VertexMismatch(format!("unknown vertex `{extra}`")));
        }
        self.vertices
            .iter()
            .map(|v| {
                map.get(v)
                    .copied()
                    .ok_or_else(|| Error::VertexMismatch(format!("missing value for vertex `{v}`")))
            })
            .collect()
    }

    pub fn values_to_map(&self, values: &[i64]) -> BTreeMap<String, i64> {
        self.vertices.iter().cloned().zip(values.iter().copied()).collect()
    }
}

impl fmt::Display for Quiver {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Q[{}:", self.vertices.join(","))?;
        for a in &self.arrows {
            write!(f, " {}->{}", a.tail, a.head)?;
        }
        write!(f, "]")
    }
}

/// Anything that assigns an integer to every vertex of a quiver.
pub trait VertexValues {
    fn values(&self) -> &[i64];
}

impl VertexValues for [i64] {
    fn values(&self) -> &[i64] {
        self
    }
}

impl VertexValues for Vec<i64> {
    fn values(&self) -> &[i64] {
        self
    }
}

/// Nonnegative integer per vertex, positional in the quiver's vertex order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct DimensionVector(Vec<i64>);

/// Integer (possibly negative) per vertex.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct Weight(Vec<i64>);

impl VertexValues for DimensionVector {
    fn values(&self) -> &[i64] {
        &self.0
    }
}

impl VertexValues for Weight {
    fn values(&self) -> &[i64] {
        &self.0
    }
}

impl DimensionVector {
    pub fn new(q: &Quiver, values: Vec<i64>) -> Result<Self> {
        q.check_len(values.len(), "dimension vector")?;
        if let Some((i, &v)) = values.iter().enumerate().find(|(_, v)| **v < 0) {
            return Err(Error::NegativeDimension {
                vertex: q.vertices[i].clone(),
                value: v,
            });
        }
        Ok(Self(values))
    }

    pub fn from_map(q: &Quiver, map: &BTreeMap<String, i64>) -> Result<Self> {
        Self::new(q, q.values_from_map(map)?)
    }

    pub fn zero(q: &Quiver) -> Self {
        Self(vec![0; q.vertex_count()])
    }

    pub fn to_map(&self, q: &Quiver) -> BTreeMap<String, i64> {
        q.values_to_map(&self.0)
    }

    pub fn as_slice(&self) -> &[i64] {
        &self.0
    }

    pub fn get(&self, x: usize) -> usize {
        self.0[x] as usize
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&v| v == 0)
    }

    pub fn total(&self) -> i64 {
        self.0.iter().sum()
    }

    pub fn scale(&self, n: i64) -> Self {
        assert!(n >= 0, "dimension vectors scale by nonnegative factors");
        Self(self.0.iter().map(|v| v * n).collect())
    }

    /// Componentwise `self <= other`.
    pub fn le(&self, other: &Self) -> bool {
        self.0.len() == other.0.len() && self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// `self - other`, if it stays nonnegative.
    pub fn checked_sub(&self, other: &Self) -> Option<Self> {
        other
            .le(self)
            .then(|| Self(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect()))
    }

    /// Every dimension vector `0 <= d <= self`, in lexicographic order.
    pub fn sub_vectors(&self) -> Vec<DimensionVector> {
        let mut out = vec![Vec::with_capacity(self.0.len())];
        for &bound in &self.0 {
            out = out
                .into_iter()
                .flat_map(|prefix| {
                    (0..=bound).map(move |v| {
                        let mut p = prefix.clone();
                        p.push(v);
                        p
                    })
                })
                .collect();
        }
        out.into_iter().map(Self).collect()
    }
}

impl Weight {
    pub fn new(q: &Quiver, values: Vec<i64>) -> Result<Self> {
        q.check_len(values.len(), "weight")?;
        Ok(Self(values))
    }

    pub fn from_map(q: &Quiver, map: &BTreeMap<String, i64>) -> Result<Self> {
        Self::new(q, q.values_from_map(map)?)
    }

    pub fn zero(q: &Quiver) -> Self {
        Self(vec![0; q.vertex_count()])
    }

    pub fn to_map(&self, q: &Quiver) -> BTreeMap<String, i64> {
        q.values_to_map(&self.0)
    }

    pub fn as_slice(&self) -> &[i64] {
        &self.0
    }

    pub fn get(&self, x: usize) -> i64 {
        self.0[x]
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&v| v == 0)
    }

    pub fn scale(&self, n: i64) -> Self {
        Self(self.0.iter().map(|v| v * n).collect())
    }
}

impl fmt::Display for DimensionVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_tuple(f, &self.0)
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_tuple(f, &self.0)
    }
}

fn write_tuple(f: &mut fmt::Formatter<'_>, values: &[i64]) -> fmt::Result {
    write!(f, "(")?;
    for (i, v) in values.iter().enumerate() {
        if i > 0 {
            write!(f, ",")?;
        }
        write!(f, "{v}")?;
    }
    write!(f, ")")
}

fn check_pair(q: &Quiver, a: &[i64], b: &[i64]) -> Result<()> {
    q.check_len(a.len(), "first argument")?;
    q.check_len(b.len(), "second argument")
}

/// The Ringel form `sum_x a(x) b(x) - sum_arrows a(ta) b(ha)`.
pub fn ringel_form<A, B>(q: &Quiver, a: &A, b: &B) -> Result<i64>
where
    A: VertexValues + ?Sized,
    B: VertexValues + ?Sized,
{
    let (a, b) = (a.values(), b.values());
    check_pair(q, a, b)?;
    let diagonal: i64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
    let arrows: i64 = (0..q.arrow_count()).map(|k| a[q.tail(k)] * b[q.head(k)]).sum();
    Ok(diagonal - arrows)
}

/// The weight `x -> -beta(x) + sum_{a: ta = x} beta(ha)`.
pub fn sigma_beta<B: VertexValues + ?Sized>(q: &Quiver, beta: &B) -> Result<Weight> {
    let beta = beta.values();
    q.check_len(beta.len(), "beta")?;
    let mut sigma: Vec<i64> = beta.iter().map(|b| -b).collect();
    for k in 0..q.arrow_count() {
        sigma[q.tail(k)] += beta[q.head(k)];
    }
    Ok(Weight(sigma))
}

/// `sigma(gamma) = sum_x sigma(x) gamma(x)`.
pub fn evaluate_weight<S, G>(sigma: &S, gamma: &G) -> Result<i64>
where
    S: VertexValues + ?Sized,
    G: VertexValues + ?Sized,
{
    let (s, g) = (sigma.values(), gamma.values());
    if s.len() != g.len() {
        return Err(Error::VertexMismatch(format!(
            "weight has {} entries, argument has {}",
            s.len(),
            g.len()
        )));
    }
    Ok(s.iter().zip(g).map(|(x, y)| x * y).sum())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(vertices: &[&str], arrows: &[(&str, &str)]) -> QuiverSpec {
        QuiverSpec {
            vertices: vertices.iter().map(|s| s.to_string()).collect(),
            arrows: arrows
                .iter()
                .enumerate()
                .map(|(i, (t, h))| Arrow {
                    id: format!("a{i}"),
                    tail: t.to_string(),
                    head: h.to_string(),
                })
                .collect(),
        }
    }

    fn kronecker() -> Quiver {
        Quiver::from_edges(2, &[(0, 1), (0, 1)]).unwrap()
    }

    #[test]
    fn acyclic_orders() {
        assert_eq!(validate_acyclic(&spec(&["v1"], &[])).unwrap(), vec!["v1"]);
        assert_eq!(
            validate_acyclic(&spec(&["v1", "v2"], &[("v1", "v2")])).unwrap(),
            vec!["v1", "v2"]
        );
        // Declared order is not topological here.
        assert_eq!(
            validate_acyclic(&spec(&["b", "a"], &[("a", "b")])).unwrap(),
            vec!["a", "b"]
        );
    }

    #[test]
    fn two_cycle_is_rejected() {
        let err = validate_acyclic(&spec(&["v1", "v2"], &[("v1", "v2"), ("v2", "v1")])).unwrap_err();
        match err {
            Error::CyclicQuiver { cycle } => {
                assert_eq!(cycle.len(), 3);
                assert_eq!(cycle.first(), cycle.last());
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn cycle_behind_a_source_is_found() {
        let s = spec(&["s", "x", "y", "z"], &[("s", "x"), ("x", "y"), ("y", "z"), ("z", "x")]);
        let Error::CyclicQuiver { cycle } = validate_acyclic(&s).unwrap_err() else {
            panic!("expected a cycle");
        };
        assert_eq!(cycle.len(), 4);
        assert!(!cycle.contains(&"s".to_string()));
    }

    #[test]
    fn dangling_and_duplicates() {
        assert!(matches!(
            validate_acyclic(&spec(&["v1"], &[("v1", "v9")])),
            Err(Error::DanglingArrow { .. })
        ));
        assert!(matches!(
            validate_acyclic(&spec(&["v1", "v1"], &[])),
            Err(Error::DuplicateId { kind: "vertex", .. })
        ));
    }

    #[test]
    fn ringel_examples() {
        let one = Quiver::from_edges(1, &[]).unwrap();
        assert_eq!(ringel_form(&one, &vec![1], &vec![1]).unwrap(), 1);
        let k = kronecker();
        assert_eq!(ringel_form(&k, &vec![1, 1], &vec![1, 1]).unwrap(), 0);
        assert!(matches!(
            ringel_form(&k, &vec![1], &vec![1, 1]),
            Err(Error::VertexMismatch(_))
        ));
    }

    #[test]
    fn sigma_beta_examples() {
        let a2 = Quiver::from_edges(2, &[(0, 1)]).unwrap();
        assert_eq!(sigma_beta(&a2, &vec![1, 1]).unwrap().as_slice(), &[0, -1]);
        assert_eq!(sigma_beta(&kronecker(), &vec![1, 1]).unwrap().as_slice(), &[1, -1]);
    }

    #[test]
    fn evaluate_weight_examples() {
        assert_eq!(evaluate_weight(&vec![0, 0], &vec![3, 5]).unwrap(), 0);
        let k = kronecker();
        let s = sigma_beta(&k, &vec![1, 1]).unwrap();
        assert_eq!(evaluate_weight(&s, &vec![1, 1]).unwrap(), 0);
        assert_eq!(evaluate_weight(&vec![0, -1], &vec![1, 1]).unwrap(), -1);
    }

    #[test]
    fn dimension_vectors_validate() {
        let k = kronecker();
        assert!(matches!(
            DimensionVector::new(&k, vec![1, -1]),
            Err(Error::NegativeDimension { .. })
        ));
        let map = BTreeMap::from([("v2".to_string(), 3), ("v1".to_string(), 2)]);
        assert_eq!(DimensionVector::from_map(&k, &map).unwrap().as_slice(), &[2, 3]);
        let bad = BTreeMap::from([("v1".to_string(), 3), ("w".to_string(), 2)]);
        assert!(DimensionVector::from_map(&k, &bad).is_err());
    }

    #[test]
    fn sub_vectors_enumerates_box() {
        let k = kronecker();
        let a = DimensionVector::new(&k, vec![1, 2]).unwrap();
        let subs = a.sub_vectors();
        assert_eq!(subs.len(), 6);
        assert!(subs.iter().all(|s| s.le(&a)));
    }

    #[test]
    fn spec_json_shape() {
        let json = r#"{"vertices":["v1","v2"],"arrows":[{"id":"a1","tail":"v1","head":"v2"}]}"#;
        let s: QuiverSpec = serde_json::from_str(json).unwrap();
        let q = Quiver::from_spec(s.clone()).unwrap();
        assert_eq!(serde_json::to_string(&q.to_spec()).unwrap(), json);
    }
}
