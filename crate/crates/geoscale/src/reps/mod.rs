//! The [`Representation`] contract and the built-in actions.
//!
//! Every built-in representation works in the standard coordinate basis of
//! `C^m`, where the invariant inner product is the standard one.

mod linear;
mod torus;

use std::collections::HashSet;
use std::fmt::Debug;
use std::sync::Arc;

use nalgebra::DVector;
use num::rational::Rational64;
use num::{Signed, Zero};

use crate::error::{Error, Result};
use crate::group::{GroupElement, GroupKind, GroupSpec, LieDirection};
use crate::{c64, CMatrix, CVector};

pub(crate) use linear::mode_product;
pub use linear::{ConjugationRep, OperatorScalingRep, QuiverRep, TensorRep};
pub use torus::TorusRep;

/// A weight: one rational vector per group factor.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Weight {
    pub blocks: Vec<Vec<Rational64>>,
}

impl Weight {
    /// Builds a weight from integer entries split according to `spec`.
    pub fn from_integers(spec: &GroupSpec, flat: &[i64]) -> Weight {
        let mut it = flat.iter();
        Weight {
            blocks: spec
                .factors()
                .iter()
                .map(|f| (0..f.n).map(|_| Rational64::from_integer(*it.next().unwrap())).collect())
                .collect(),
        }
    }

    pub fn flat(&self) -> Vec<Rational64> {
        self.blocks.iter().flatten().copied().collect()
    }

    pub fn to_f64(&self) -> DVector<f64> {
        let flat = self.flat();
        DVector::from_iterator(flat.len(), flat.iter().map(|r| *r.numer() as f64 / *r.denom() as f64))
    }

    pub fn norm(&self) -> f64 {
        self.to_f64().norm()
    }

    /// Blockwise projection `ω − tr(ω)/n · 1` onto the traceless subspace.
    pub fn project(&self) -> Weight {
        Weight {
            blocks: self
                .blocks
                .iter()
                .map(|b| {
                    let mean = b.iter().copied().sum::<Rational64>() / Rational64::from_integer(b.len() as i64);
                    b.iter().map(|x| x - mean).collect()
                })
                .collect(),
        }
    }

    /// `tr(ω H)` for a diagonal direction.
    pub fn pair(&self, h: &LieDirection) -> f64 {
        self.blocks
            .iter()
            .zip(&h.blocks)
            .map(|(w, b)| {
                let d = b.diagonal();
                w.iter().zip(d.iter()).map(|(x, z)| (*x.numer() as f64 / *x.denom() as f64) * z.re).sum::<f64>()
            })
            .sum()
    }
}

/// Structural class of a representation, used to pick margin bounds.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Structure {
    Generic,
    Torus,
    MatrixScaling { n: usize },
    OperatorScaling { n: usize, k: usize },
    Tensor { dims: Vec<usize> },
    Conjugation { n: usize, k: usize },
    Quiver { dims: Vec<usize>, arrows: Vec<(usize, usize)> },
    GelfandTsetlin { max_degree: i64 },
}

/// A finite-dimensional rational representation `π: G → GL(C^m)`.
pub trait Representation: Send + Sync + Debug {
    fn group(&self) -> &GroupSpec;

    /// Dimension `m` of the representation space.
    fn dim(&self) -> usize;

    /// `π(g)v`.
    fn apply(&self, g: &GroupElement, v: &CVector) -> Result<CVector>;

    /// `Π(H)v`, complex-linear in `H`.
    fn lie_apply(&self, h: &LieDirection, v: &CVector) -> Result<CVector>;

    /// Deduplicated weight set `Ω(π)`, in first-occurrence order.
    fn weights(&self) -> Vec<Weight>;

    /// Diagonal of the Gram matrix of the invariant inner product.
    fn invariant_norm_gram(&self) -> DVector<f64> {
        DVector::from_element(self.dim(), 1.0)
    }

    fn structure(&self) -> Structure {
        Structure::Generic
    }

    /// Per-factor degree when every weight block has the same coordinate sum.
    fn degrees(&self) -> Option<Vec<Rational64>> {
        let ws = self.weights();
        let first = ws.first()?;
        let sums = |w: &Weight| -> Vec<Rational64> {
            w.blocks.iter().map(|b| b.iter().copied().sum()).collect()
        };
        let d = sums(first);
        ws.iter().all(|w| sums(w) == d).then_some(d)
    }
}

/// Shared handle to a representation.
pub type Rep = Arc<dyn Representation>;

pub(crate) fn check_vector(rep: &dyn Representation, v: &CVector) -> Result<()> {
    if v.len() != rep.dim() {
        return Err(Error::InvalidInput(format!(
            "vector has length {}, representation has dimension {}",
            v.len(),
            rep.dim()
        )));
    }
    if v.iter().any(|z| !z.is_finite()) {
        return Err(Error::InvalidInput("vector has non-finite entries".into()));
    }
    Ok(())
}

pub(crate) fn check_direction_shape(spec: &GroupSpec, h: &LieDirection) -> Result<()> {
    if h.blocks.len() != spec.num_factors()
        || h.blocks.iter().zip(spec.factors()).any(|(b, f)| b.n() != f.n || b.is_diag() != f.kind.is_torus())
    {
        return Err(Error::InvalidInput("direction shape does not match the group".into()));
    }
    Ok(())
}

pub(crate) fn dedup(ws: impl IntoIterator<Item = Weight>) -> Vec<Weight> {
    let mut seen = HashSet::new();
    ws.into_iter().filter(|w| seen.insert(w.clone())).collect()
}

/// Matrix of `v ↦ Π(H)v` in the working basis.
pub fn lie_matrix(rep: &dyn Representation, h: &LieDirection) -> Result<CMatrix> {
    let m = rep.dim();
    let mut out = CMatrix::zeros(m, m);
    for j in 0..m {
        let mut e = CVector::zeros(m);
        e[j] = c64(1.0, 0.0);
        out.set_column(j, &rep.lie_apply(h, &e)?);
    }
    Ok(out)
}

/// Matrix of `v ↦ π(g)v` in the working basis.
pub fn action_matrix(rep: &dyn Representation, g: &GroupElement) -> Result<CMatrix> {
    let m = rep.dim();
    let mut out = CMatrix::zeros(m, m);
    for j in 0..m {
        let mut e = CVector::zeros(m);
        e[j] = c64(1.0, 0.0);
        out.set_column(j, &rep.apply(g, &e)?);
    }
    Ok(out)
}

/// Invariant norm `‖v‖` with respect to [`Representation::invariant_norm_gram`].
pub fn invariant_norm(rep: &dyn Representation, v: &CVector) -> f64 {
    let gram = rep.invariant_norm_gram();
    v.iter().zip(gram.iter()).map(|(z, g)| g * z.norm_sqr()).sum::<f64>().sqrt()
}

fn finish(rep: impl Representation + 'static, kind: GroupKind) -> Result<Rep> {
    let rep: Rep = Arc::new(rep);
    match kind {
        GroupKind::Gl => Ok(rep),
        GroupKind::Sl => restrict_to_sl(rep),
    }
}

/// Torus `T(n)` acting diagonally with the given integer weights.
pub fn torus_rep(weights: &[Vec<i64>]) -> Result<Rep> {
    Ok(Arc::new(TorusRep::new(weights)?))
}

/// Matrix scaling: `T(n) × T(n)` acting on `Mat(n)` by `diag(a)·M·diag(b)`.
pub fn matrix_scaling_rep(n: usize, kind: GroupKind) -> Result<Rep> {
    finish(TorusRep::matrix_scaling(n)?, kind)
}

/// Left-right action `(g, h)·(X_1, …, X_k) = (g X_i hᵀ)`.
pub fn operator_scaling_rep(n: usize, k: usize, kind: GroupKind) -> Result<Rep> {
    finish(OperatorScalingRep::new(n, k)?, kind)
}

/// Kronecker action of `GL(n_1) × … × GL(n_k)` on `C^{n_1} ⊗ … ⊗ C^{n_k}`.
pub fn tensor_rep(dims: &[usize], kind: GroupKind) -> Result<Rep> {
    finish(TensorRep::new(dims)?, kind)
}

/// Simultaneous conjugation `g·(X_i) = (g X_i g⁻¹)` on `Mat(n)^k`.
pub fn conjugation_rep(n: usize, k: usize, kind: GroupKind) -> Result<Rep> {
    finish(ConjugationRep::new(n, k)?, kind)
}

/// Quiver representation space with arrows given as `(tail, head)`.
pub fn quiver_rep(dims: &[usize], arrows: &[(usize, usize)], kind: GroupKind) -> Result<Rep> {
    finish(QuiverRep::new(dims, arrows)?, kind)
}

/// Direct sum of representations of the same group.
#[derive(Debug)]
pub struct DirectSum {
    reps: Vec<Rep>,
    offsets: Vec<usize>,
    dim: usize,
}

impl DirectSum {
    fn chunks<'a>(&'a self, v: &'a CVector) -> impl Iterator<Item = (&'a Rep, CVector)> + 'a {
        self.reps.iter().zip(&self.offsets).map(move |(r, &o)| (r, v.rows(o, r.dim()).into_owned()))
    }

    fn concat(&self, parts: Vec<CVector>) -> CVector {
        let mut out = CVector::zeros(self.dim);
        for (p, &o) in parts.iter().zip(&self.offsets) {
            out.rows_mut(o, p.len()).copy_from(p);
        }
        out
    }
}

impl Representation for DirectSum {
    fn group(&self) -> &GroupSpec {
        self.reps[0].group()
    }

    fn dim(&self) -> usize {
        self.dim
    }

    fn apply(&self, g: &GroupElement, v: &CVector) -> Result<CVector> {
        check_vector(self, v)?;
        let parts = self.chunks(v).map(|(r, x)| r.apply(g, &x)).collect::<Result<Vec<_>>>()?;
        Ok(self.concat(parts))
    }

    fn lie_apply(&self, h: &LieDirection, v: &CVector) -> Result<CVector> {
        check_vector(self, v)?;
        let parts = self.chunks(v).map(|(r, x)| r.lie_apply(h, &x)).collect::<Result<Vec<_>>>()?;
        Ok(self.concat(parts))
    }

    fn weights(&self) -> Vec<Weight> {
        dedup(self.reps.iter().flat_map(|r| r.weights()))
    }

    fn invariant_norm_gram(&self) -> DVector<f64> {
        let parts: Vec<f64> = self.reps.iter().flat_map(|r| r.invariant_norm_gram().iter().copied().collect::<Vec<_>>()).collect();
        DVector::from_vec(parts)
    }

    fn structure(&self) -> Structure {
        let s: Vec<Structure> = self.reps.iter().map(|r| r.structure()).collect();
        match s.first() {
            Some(Structure::Torus) if s.iter().all(|x| *x == Structure::Torus) => Structure::Torus,
            Some(Structure::GelfandTsetlin { .. }) => {
                let mut best = 0;
                for x in &s {
                    match x {
                        Structure::GelfandTsetlin { max_degree } => best = best.max(*max_degree),
                        _ => return Structure::Generic,
                    }
                }
                Structure::GelfandTsetlin { max_degree: best }
            }
            _ => Structure::Generic,
        }
    }
}

/// `π_1 ⊕ … ⊕ π_s`.
pub fn direct_sum(reps: Vec<Rep>) -> Result<Rep> {
    let Some(first) = reps.first() else {
        return Err(Error::InvalidInput("direct sum of zero representations".into()));
    };
    if reps.iter().any(|r| r.group() != first.group()) {
        return Err(Error::InvalidInput("direct sum summands act through different groups".into()));
    }
    let mut offsets = Vec::with_capacity(reps.len());
    let mut dim = 0;
    for r in &reps {
        offsets.push(dim);
        dim += r.dim();
    }
    Ok(Arc::new(DirectSum { reps, offsets, dim }))
}

/// The restriction `π_0` of a representation to unit-determinant blocks.
#[derive(Debug)]
pub struct SlRestriction {
    inner: Rep,
    group: GroupSpec,
}

impl SlRestriction {
    pub fn inner(&self) -> &Rep {
        &self.inner
    }
}

impl Representation for SlRestriction {
    fn group(&self) -> &GroupSpec {
        &self.group
    }

    fn dim(&self) -> usize {
        self.inner.dim()
    }

    fn apply(&self, g: &GroupElement, v: &CVector) -> Result<CVector> {
        g.validate(&self.group)?;
        self.inner.apply(g, v)
    }

    fn lie_apply(&self, h: &LieDirection, v: &CVector) -> Result<CVector> {
        check_direction_shape(&self.group, h)?;
        for (b, f) in h.blocks.iter().zip(self.group.factors()) {
            if f.kind.is_special() && b.trace().norm() > 1e-10 * (1.0 + b.norm_squared().sqrt()) {
                return Err(Error::ContractViolation("direction for a special factor must be traceless".into()));
            }
        }
        self.inner.lie_apply(h, v)
    }

    fn weights(&self) -> Vec<Weight> {
        dedup(self.inner.weights().iter().map(Weight::project))
    }

    fn invariant_norm_gram(&self) -> DVector<f64> {
        self.inner.invariant_norm_gram()
    }

    fn structure(&self) -> Structure {
        self.inner.structure()
    }

    fn degrees(&self) -> Option<Vec<Rational64>> {
        Some(vec![Rational64::zero(); self.group.num_factors()])
    }
}

/// Restricts a representation of `∏ GL(n_i)` (or tori) to `∏ SL(n_i)`.
pub fn restrict_to_sl(rep: Rep) -> Result<Rep> {
    if rep.group().has_special() {
        return Err(Error::InvalidInput("restrict_to_sl expects GL or torus factors".into()));
    }
    let group = rep.group().to_special();
    Ok(Arc::new(SlRestriction { inner: rep, group }))
}

/// Whether all weights are integral.
pub fn integral_weights(ws: &[Weight]) -> bool {
    ws.iter().all(|w| w.flat().iter().all(|x| x.is_integer()))
}

/// Largest absolute weight entry.
pub fn max_abs_entry(ws: &[Weight]) -> Rational64 {
    ws.iter().flat_map(|w| w.flat()).map(|x| x.abs()).max().unwrap_or_else(Rational64::zero)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sl_projection_of_operator_scaling_weights() {
        let rep = operator_scaling_rep(2, 1, GroupKind::Sl).unwrap();
        let half = Rational64::new(1, 2);
        for w in rep.weights() {
            for b in &w.blocks {
                assert!(b.iter().all(|x| x.abs() == half));
                assert_eq!(b.iter().copied().sum::<Rational64>(), Rational64::zero());
            }
        }
        assert_eq!(rep.weights().len(), 4);
    }

    #[test]
    fn matrix_scaling_projected_entries() {
        let rep = matrix_scaling_rep(2, GroupKind::Sl).unwrap();
        for w in rep.weights() {
            assert!(w.flat().iter().all(|x| x.abs() == Rational64::new(1, 2)));
        }
    }

    #[test]
    fn direct_sum_of_tori_concatenates() {
        let a = torus_rep(&[vec![1, 0], vec![0, 1]]).unwrap();
        let b = torus_rep(&[vec![1, 1]]).unwrap();
        let s = direct_sum(vec![a, b]).unwrap();
        let c = torus_rep(&[vec![1, 0], vec![0, 1], vec![1, 1]]).unwrap();
        let g = GroupElement {
            blocks: vec![crate::group::Block::Diag(CVector::from_vec(vec![c64(2.0, 0.0), c64(0.0, 3.0)]))],
        };
        let v = CVector::from_vec(vec![c64(1.0, 0.0), c64(1.0, 1.0), c64(-2.0, 0.5)]);
        assert!((s.apply(&g, &v).unwrap() - c.apply(&g, &v).unwrap()).norm() < 1e-14);
        assert_eq!(s.weights(), c.weights());
    }

    #[test]
    fn direct_sum_group_mismatch() {
        let a = torus_rep(&[vec![1, 0]]).unwrap();
        let b = torus_rep(&[vec![1]]).unwrap();
        assert!(direct_sum(vec![a, b]).is_err());
    }

    #[test]
    fn restrict_rejects_special_input() {
        let rep = operator_scaling_rep(2, 1, GroupKind::Sl).unwrap();
        assert!(restrict_to_sl(rep).is_err());
    }
}
