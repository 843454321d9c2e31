//! Concrete representations, the map `d^V_W`, and Hom/Ext dimensions.
//!
//! `d^V_W` sends `{phi(x)}` to `{W(a) phi(ta) - phi(ha) V(a)}`. Its matrix uses
//! this basis order:
//!
//! * domain: vertices in topological order, each block `phi(x)` of shape
//!   `beta(x) x alpha(x)` flattened row-major;
//! * codomain: arrows in declaration order, each block of shape
//!   `beta(ha) x alpha(ta)` flattened row-major.
//!
//! Hom is the kernel and Ext the cokernel, so `hom - ext` is the difference of
//! the domain and codomain dimensions, which is the Ringel form.

use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rand::Rng;

use crate::error::{Error, Result};
use crate::linalg::ExactMatrix;
use crate::quiver::{DimensionVector, Quiver};
use crate::rng;

/// A matrix `V(a)` of shape `alpha(ha) x alpha(ta)` for every arrow.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Representation {
    quiver: Arc<Quiver>,
    dim: DimensionVector,
    maps: Vec<ExactMatrix>,
}

impl Representation {
    pub fn new(quiver: Arc<Quiver>, dim: DimensionVector, maps: Vec<ExactMatrix>) -> Result<Self> {
        if dim.len() != quiver.vertex_count() {
            return Err(Error::VertexMismatch(format!(
                "dimension vector has {} entries, quiver has {} vertices",
                dim.len(),
                quiver.vertex_count()
            )));
        }
        if maps.len() != quiver.arrow_count() {
            return Err(Error::ShapeMismatch(format!(
                "{} matrices for {} arrows",
                maps.len(),
                quiver.arrow_count()
            )));
        }
        for (a, m) in maps.iter().enumerate() {
            let want = (dim.get(quiver.head(a)), dim.get(quiver.tail(a)));
            if m.shape() != want {
                return Err(Error::ShapeMismatch(format!(
                    "arrow `{}` carries a {}x{} matrix, expected {}x{}",
                    quiver.arrows()[a].id,
                    m.rows(),
                    m.cols(),
                    want.0,
                    want.1
                )));
            }
        }
        Ok(Self { quiver, dim, maps })
    }

    pub fn zero(quiver: Arc<Quiver>, dim: DimensionVector) -> Self {
        let maps = (0..quiver.arrow_count())
            .map(|a| ExactMatrix::zeros(dim.get(quiver.head(a)), dim.get(quiver.tail(a))))
            .collect();
        Self { quiver, dim, maps }
    }

    pub fn quiver(&self) -> &Arc<Quiver> {
        &self.quiver
    }

    pub fn dim(&self) -> &DimensionVector {
        &self.dim
    }

    pub fn map(&self, a: usize) -> &ExactMatrix {
        &self.maps[a]
    }

    pub fn maps(&self) -> &[ExactMatrix] {
        &self.maps
    }
}

fn same_quiver(a: &Representation, b: &Representation) -> Result<()> {
    if Arc::ptr_eq(&a.quiver, &b.quiver) || a.quiver == b.quiver {
        Ok(())
    } else {
        Err(Error::QuiverMismatch)
    }
}

/// A morphism of representations: a block `phi(x)` of shape
/// `beta(x) x alpha(x)` per vertex, intertwining the arrow maps.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RepMorphism {
    source: Representation,
    target: Representation,
    blocks: Vec<ExactMatrix>,
}

impl RepMorphism {
    /// Validates block shapes and the intertwining equations.
    pub fn new(source: Representation, target: Representation, blocks: Vec<ExactMatrix>) -> Result<Self> {
        same_quiver(&source, &target)?;
        let q = source.quiver.clone();
        if blocks.len() != q.vertex_count() {
            return Err(Error::ShapeMismatch(format!(
                "{} blocks for {} vertices",
                blocks.len(),
                q.vertex_count()
            )));
        }
        for (x, b) in blocks.iter().enumerate() {
            let want = (target.dim.get(x), source.dim.get(x));
            if b.shape() != want {
                return Err(Error::ShapeMismatch(format!(
                    "block at `{}` is {}x{}, expected {}x{}",
                    q.vertices()[x],
                    b.rows(),
                    b.cols(),
                    want.0,
                    want.1
                )));
            }
        }
        let phi = Self { source, target, blocks };
        phi.check_intertwining()?;
        Ok(phi)
    }

    fn check_intertwining(&self) -> Result<()> {
        let q = &self.source.quiver;
        for a in 0..q.arrow_count() {
            let left = self.target.map(a).mul(&self.blocks[q.tail(a)])?;
            let right = self.blocks[q.head(a)].mul(self.source.map(a))?;
            if left != right {
                return Err(Error::IntertwiningViolation {
                    arrow: q.arrows()[a].id.clone(),
                });
            }
        }
        Ok(())
    }

    pub fn source(&self) -> &Representation {
        &self.source
    }

    pub fn target(&self) -> &Representation {
        &self.target
    }

    pub fn block(&self, x: usize) -> &ExactMatrix {
        &self.blocks[x]
    }

    pub fn blocks(&self) -> &[ExactMatrix] {
        &self.blocks
    }

    pub fn is_zero(&self) -> bool {
        self.blocks.iter().all(ExactMatrix::is_zero)
    }

    /// Per-vertex ranks of the blocks.
    pub fn rank_vector(&self) -> DimensionVector {
        let ranks = self.blocks.iter().map(|b| b.rank() as i64).collect();
        DimensionVector::new(&self.source.quiver, ranks).expect("ranks are nonnegative")
    }
}

/// Offsets of the per-vertex blocks in the domain of `d^V_W`.
pub(crate) fn domain_layout(q: &Quiver, alpha: &DimensionVector, beta: &DimensionVector) -> (Vec<usize>, usize) {
    let mut offsets = vec![0; q.vertex_count()];
    let mut total = 0;
    for &x in q.topological_order() {
        offsets[x] = total;
        total += alpha.get(x) * beta.get(x);
    }
    (offsets, total)
}

pub(crate) fn codomain_layout(q: &Quiver, alpha: &DimensionVector, beta: &DimensionVector) -> (Vec<usize>, usize) {
    let mut offsets = Vec::with_capacity(q.arrow_count());
    let mut total = 0;
    for a in 0..q.arrow_count() {
        offsets.push(total);
        total += beta.get(q.head(a)) * alpha.get(q.tail(a));
    }
    (offsets, total)
}

/// The matrix of `d^V_W` in the basis order described in the module docs.
pub fn build_d_matrix(v: &Representation, w: &Representation) -> Result<ExactMatrix> {
    same_quiver(v, w)?;
    let q = &v.quiver;
    let (alpha, beta) = (&v.dim, &w.dim);
    let (dom, cols) = domain_layout(q, alpha, beta);
    let (cod, rows) = codomain_layout(q, alpha, beta);
    let mut d = vec![BigRational::zero(); rows * cols];
    for (a, &cod_a) in cod.iter().enumerate().take(q.arrow_count()) {
        let (t, h) = (q.tail(a), q.head(a));
        let (at, ah, bt, bh) = (alpha.get(t), alpha.get(h), beta.get(t), beta.get(h));
        let (wa, va) = (w.map(a), v.map(a));
        for i in 0..bh {
            for j in 0..at {
                let row = cod_a + i * at + j;
                // + W(a)[i][k] * phi(t)[k][j]
                for k in 0..bt {
                    let col = dom[t] + k * at + j;
                    d[row * cols + col] += wa.get(i, k);
                }
                // - phi(h)[i][k] * V(a)[k][j]
                for k in 0..ah {
                    let col = dom[h] + i * ah + k;
                    d[row * cols + col] -= va.get(k, j);
                }
            }
        }
    }
    Ok(ExactMatrix::from_rationals(rows, cols, d))
}

/// `dim Hom(V, W)`: the nullity of `d^V_W`.
pub fn hom_dim(v: &Representation, w: &Representation) -> Result<usize> {
    let d = build_d_matrix(v, w)?;
    Ok(d.cols() - d.rank())
}

/// `dim Ext(V, W)`: the corank of `d^V_W`.
pub fn ext_dim(v: &Representation, w: &Representation) -> Result<usize> {
    let d = build_d_matrix(v, w)?;
    Ok(d.rows() - d.rank())
}

/// Both dimensions from one elimination.
pub fn hom_ext_dims(v: &Representation, w: &Representation) -> Result<(usize, usize)> {
    let d = build_d_matrix(v, w)?;
    let r = d.rank();
    Ok((d.cols() - r, d.rows() - r))
}

fn morphism_from_vector(v: &Representation, w: &Representation, coords: &[BigRational]) -> Vec<ExactMatrix> {
    let q = &v.quiver;
    let (dom, _) = domain_layout(q, &v.dim, &w.dim);
    (0..q.vertex_count())
        .map(|x| {
            let (rows, cols) = (w.dim.get(x), v.dim.get(x));
            let start = dom[x];
            ExactMatrix::from_rationals(rows, cols, coords[start..start + rows * cols].to_vec())
        })
        .collect()
}

/// A basis of `Hom(V, W)` taken from the kernel of `d^V_W`, with primitive
/// integer coordinates.
pub fn hom_basis(v: &Representation, w: &Representation) -> Result<Vec<RepMorphism>> {
    let d = build_d_matrix(v, w)?;
    d.nullspace_basis()
        .into_iter()
        .map(|col| {
            let coords: Vec<BigRational> = (0..col.rows()).map(|i| col.get(i, 0)).collect();
            let blocks = morphism_from_vector(v, w, &coords);
            RepMorphism::new(v.clone(), w.clone(), blocks)
        })
        .collect()
}

/// The kernel of a morphism as a subrepresentation of its source.
#[derive(Debug, Clone)]
pub struct KernelRepresentation {
    pub sub: Representation,
    /// Per-vertex rank of the morphism.
    pub rank: DimensionVector,
    /// `inclusion[x]` has the kernel basis at `x` as its columns.
    pub inclusion: Vec<ExactMatrix>,
}

/// Realizes `ker phi` with the reduced-echelon kernel basis at every vertex
/// and the arrow maps induced by restricting `V(a)`.
pub fn kernel_representation(phi: &RepMorphism) -> Result<KernelRepresentation> {
    phi.check_intertwining()?;
    let v = &phi.source;
    let q = v.quiver.clone();
    let n = q.vertex_count();
    let mut inclusion = Vec::with_capacity(n);
    let mut free_rows = Vec::with_capacity(n);
    let mut kdim = Vec::with_capacity(n);
    let mut rank = Vec::with_capacity(n);
    for x in 0..n {
        let alpha_x = v.dim.get(x);
        let (basis, free) = phi.blocks[x].nullspace_rational();
        let k = basis.len();
        let mut values = Vec::with_capacity(alpha_x * k);
        for i in 0..alpha_x {
            for vec in &basis {
                values.push(vec[i].clone());
            }
        }
        inclusion.push(ExactMatrix::from_rationals(alpha_x, k, values));
        free_rows.push(free);
        kdim.push(k as i64);
        rank.push((alpha_x - k) as i64);
    }
    // The kernel basis at x restricted to its non-pivot rows is the identity,
    // so the induced map is read off those rows of V(a) * K(ta).
    let maps = (0..q.arrow_count())
        .map(|a| {
            let image = v.map(a).mul(&inclusion[q.tail(a)])?;
            Ok(image.select_rows(&free_rows[q.head(a)]))
        })
        .collect::<Result<Vec<_>>>()?;
    let dim = DimensionVector::new(&q, kdim)?;
    let sub = Representation::new(q.clone(), dim, maps)?;
    Ok(KernelRepresentation {
        sub,
        rank: DimensionVector::new(&q, rank)?,
        inclusion,
    })
}

pub(crate) fn random_representation_with<R: Rng + ?Sized>(
    q: &Arc<Quiver>,
    alpha: &DimensionVector,
    bound: i64,
    rng: &mut R,
) -> Representation {
    let maps = (0..q.arrow_count())
        .map(|a| {
            let (rows, cols) = (alpha.get(q.head(a)), alpha.get(q.tail(a)));
            ExactMatrix::from_fn(rows, cols, |_, _| rng.gen_range(-bound..=bound))
        })
        .collect();
    Representation {
        quiver: q.clone(),
        dim: alpha.clone(),
        maps,
    }
}

/// A representation with entries uniform in `[-bound, bound]`, determined by
/// `seed`.
pub fn random_representation(
    q: &Arc<Quiver>,
    alpha: &DimensionVector,
    seed: u64,
    bound: i64,
) -> Result<Representation> {
    if bound < 1 {
        return Err(Error::InvalidArgument(format!(
            "sampling bound must be >= 1, got {bound}"
        )));
    }
    if alpha.len() != q.vertex_count() {
        return Err(Error::VertexMismatch("dimension vector length".into()));
    }
    Ok(random_representation_with(q, alpha, bound, &mut rng::stream(seed, 0)))
}

/// Linear combination `sum c_i phi_i` of morphisms sharing source and target.
pub fn combine_morphisms(basis: &[RepMorphism], coeffs: &[i64]) -> Result<RepMorphism> {
    let first = basis
        .first()
        .ok_or_else(|| Error::InvalidArgument("empty morphism list".into()))?;
    let q = &first.source.quiver;
    let blocks = (0..q.vertex_count())
        .map(|x| {
            let (rows, cols) = first.blocks[x].shape();
            let mut acc = vec![BigRational::zero(); rows * cols];
            for (phi, &c) in basis.iter().zip(coeffs) {
                let c = BigRational::from_integer(BigInt::from(c));
                for (slot, e) in acc.iter_mut().zip(phi.blocks[x].to_rationals()) {
                    *slot += &c * e;
                }
            }
            ExactMatrix::from_rationals(rows, cols, acc)
        })
        .collect();
    RepMorphism::new(first.source.clone(), first.target.clone(), blocks)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a2() -> Arc<Quiver> {
        Arc::new(Quiver::from_edges(2, &[(0, 1)]).unwrap())
    }

    fn rep(q: &Arc<Quiver>, dim: &[i64], maps: &[&[&[i64]]]) -> Representation {
        let dim = DimensionVector::new(q, dim.to_vec()).unwrap();
        let maps = maps
            .iter()
            .map(|m| {
                let rows: Vec<Vec<i64>> = m.iter().map(|r| r.to_vec()).collect();
                if rows.is_empty() {
                    ExactMatrix::zeros(0, 0)
                } else {
                    ExactMatrix::from_rows(&rows)
                }
            })
            .collect();
        Representation::new(q.clone(), dim, maps).unwrap()
    }

    #[test]
    fn d_matrix_a2_identity() {
        let q = a2();
        let v = rep(&q, &[1, 1], &[&[&[1]]]);
        let d = build_d_matrix(&v, &v).unwrap();
        // One arrow coordinate, two vertex coordinates: W(a) phi(1) - phi(2) V(a).
        assert_eq!(d, ExactMatrix::from_rows(&[vec![1, -1]]));
    }

    #[test]
    fn d_matrix_degenerate_shapes() {
        let q = Arc::new(Quiver::from_edges(2, &[]).unwrap());
        let v = Representation::zero(q.clone(), DimensionVector::new(&q, vec![2, 1]).unwrap());
        let w = Representation::zero(q.clone(), DimensionVector::new(&q, vec![1, 3]).unwrap());
        assert_eq!(build_d_matrix(&v, &w).unwrap().shape(), (0, 5));

        let q = a2();
        let zero = Representation::zero(q.clone(), DimensionVector::zero(&q));
        let w = rep(&q, &[1, 1], &[&[&[3]]]);
        assert_eq!(build_d_matrix(&zero, &w).unwrap().cols(), 0);
        assert_eq!(hom_ext_dims(&zero, &w).unwrap(), (0, 0));
    }

    #[test]
    fn hom_ext_a2() {
        let q = a2();
        let v = rep(&q, &[1, 1], &[&[&[2]]]);
        let w = rep(&q, &[1, 1], &[&[&[-3]]]);
        assert_eq!(hom_ext_dims(&v, &w).unwrap(), (1, 0));
        assert!(hom_dim(&v, &v).unwrap() >= 1);
    }

    #[test]
    fn quiver_mismatch() {
        let v = Representation::zero(a2(), DimensionVector::new(&a2(), vec![1, 1]).unwrap());
        let k = Arc::new(Quiver::from_edges(2, &[(0, 1), (0, 1)]).unwrap());
        let w = Representation::zero(k.clone(), DimensionVector::new(&k, vec![1, 1]).unwrap());
        assert_eq!(hom_dim(&v, &w), Err(Error::QuiverMismatch));
    }

    #[test]
    fn hom_basis_identity_up_to_scale() {
        let q = a2();
        let v = rep(&q, &[1, 1], &[&[&[1]]]);
        let basis = hom_basis(&v, &v).unwrap();
        assert_eq!(basis.len(), 1);
        let b = &basis[0];
        assert_eq!(b.block(0).get(0, 0), b.block(1).get(0, 0));
        assert!(!b.is_zero());
    }

    #[test]
    fn hom_basis_empty_when_no_morphisms() {
        let q = a2();
        // V = S(1) (simple at the source), W = S(2): Hom = 0.
        let v = Representation::zero(q.clone(), DimensionVector::new(&q, vec![1, 0]).unwrap());
        let w = Representation::zero(q.clone(), DimensionVector::new(&q, vec![0, 1]).unwrap());
        assert!(hom_basis(&v, &w).unwrap().is_empty());
    }

    #[test]
    fn kernel_examples() {
        let q = a2();
        let v = rep(&q, &[1, 1], &[&[&[0]]]);
        // phi(v1) = 0, phi(v2) = 1 on V with V(a) = 0.
        let phi = RepMorphism::new(
            v.clone(),
            v.clone(),
            vec![ExactMatrix::from_rows(&[vec![0]]), ExactMatrix::from_rows(&[vec![1]])],
        )
        .unwrap();
        let k = kernel_representation(&phi).unwrap();
        assert_eq!(k.sub.dim().as_slice(), &[1, 0]);
        assert_eq!(k.rank.as_slice(), &[0, 1]);

        let zero = RepMorphism::new(
            v.clone(),
            v.clone(),
            vec![ExactMatrix::zeros(1, 1), ExactMatrix::zeros(1, 1)],
        )
        .unwrap();
        let k = kernel_representation(&zero).unwrap();
        assert_eq!(k.sub, v);
        assert!(k.rank.is_zero());

        let id = RepMorphism::new(
            v.clone(),
            v.clone(),
            vec![ExactMatrix::identity(1), ExactMatrix::identity(1)],
        )
        .unwrap();
        let k = kernel_representation(&id).unwrap();
        assert!(k.sub.dim().is_zero());
        assert_eq!(k.rank, *v.dim());
    }

    #[test]
    fn intertwining_is_enforced() {
        let q = a2();
        let v = rep(&q, &[1, 1], &[&[&[1]]]);
        let err = RepMorphism::new(
            v.clone(),
            v.clone(),
            vec![ExactMatrix::from_rows(&[vec![1]]), ExactMatrix::from_rows(&[vec![2]])],
        )
        .unwrap_err();
        assert!(matches!(err, Error::IntertwiningViolation { .. }));
    }

    #[test]
    fn random_representation_is_seeded() {
        let q = a2();
        let alpha = DimensionVector::new(&q, vec![1, 1]).unwrap();
        let a = random_representation(&q, &alpha, 42, 1).unwrap();
        assert_eq!(a, random_representation(&q, &alpha, 42, 1).unwrap());
        let e = a.map(0).to_i64_rows().unwrap()[0][0];
        assert!((-1..=1).contains(&e));
        let z = random_representation(&q, &DimensionVector::zero(&q), 1, 5).unwrap();
        assert_eq!(z.map(0).shape(), (0, 0));
        assert!(random_representation(&q, &alpha, 1, 0).is_err());
    }

    #[test]
    fn kernel_of_rational_morphism_is_a_subrepresentation() {
        // Three-vertex path with 2-dimensional spaces and a morphism whose
        // kernel basis needs fractions.
        let q = Arc::new(Quiver::from_edges(3, &[(0, 1), (1, 2)]).unwrap());
        let alpha = DimensionVector::new(&q, vec![2, 2, 2]).unwrap();
        let v = random_representation(&q, &alpha, 3, 4).unwrap();
        let w = random_representation(&q, &DimensionVector::new(&q, vec![1, 2, 1]).unwrap(), 4, 4).unwrap();
        for phi in hom_basis(&v, &w).unwrap() {
            let k = kernel_representation(&phi).unwrap();
            for a in 0..q.arrow_count() {
                let lhs = k.inclusion[q.head(a)].mul(k.sub.map(a)).unwrap();
                let rhs = v.map(a).mul(&k.inclusion[q.tail(a)]).unwrap();
                assert_eq!(lhs, rhs);
            }
            for x in 0..3 {
                assert!(phi.block(x).mul(&k.inclusion[x]).unwrap().is_zero());
            }
        }
    }
}
