use crate::error::{Error, Result};
use crate::group::{FactorKind, GroupElement, GroupSpec, LieDirection};
use crate::reps::{check_direction_shape, check_vector, dedup, Representation, Structure, Weight};
use crate::{CVector, C64};

/// Diagonal action `π(g) e_j = ∏_i g_i^{ω_{j,i}} e_j` of a product of tori.
#[derive(Debug, Clone)]
pub struct TorusRep {
    group: GroupSpec,
    weights: Vec<Vec<i64>>,
    structure: Structure,
}

impl TorusRep {
    /// Single torus `T(n)`; one coordinate per weight.
    pub fn new(weights: &[Vec<i64>]) -> Result<Self> {
        let n = weights.first().map(Vec::len).ok_or_else(|| Error::InvalidInput("torus_rep: no weights".into()))?;
        if n == 0 || weights.iter().any(|w| w.len() != n) {
            return Err(Error::InvalidInput("torus_rep: weights must be nonempty vectors of equal length".into()));
        }
        let group = GroupSpec::new([(FactorKind::Torus, n)])?;
        Self::over(group, weights.to_vec(), Structure::Torus)
    }

    /// Torus action over an arbitrary product of torus factors; weights are
    /// given over the concatenated diagonal.
    pub fn over(group: GroupSpec, weights: Vec<Vec<i64>>, structure: Structure) -> Result<Self> {
        if group.factors().iter().any(|f| f.kind != FactorKind::Torus) {
            return Err(Error::InvalidInput("torus action needs TORUS factors".into()));
        }
        let n = group.total_n();
        if weights.is_empty() || weights.iter().any(|w| w.len() != n) {
            return Err(Error::InvalidInput(format!("torus action: every weight needs {n} entries")));
        }
        if weights.iter().flatten().any(|x| x.unsigned_abs() > i32::MAX as u64) {
            return Err(Error::InvalidInput("torus action: weight entry too large".into()));
        }
        Ok(TorusRep { group, weights, structure })
    }

    /// `T(n) × T(n)` on `Mat(n)` (row-major), weight `(e_i, e_j)` at entry `(i, j)`.
    pub fn matrix_scaling(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidInput("matrix scaling needs n ≥ 1".into()));
        }
        let group = GroupSpec::new([(FactorKind::Torus, n), (FactorKind::Torus, n)])?;
        let mut weights = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let mut w = vec![0; 2 * n];
                w[i] = 1;
                w[n + j] = 1;
                weights.push(w);
            }
        }
        Self::over(group, weights, Structure::MatrixScaling { n })
    }

    /// Integer weight of coordinate `j`.
    pub fn weight_of(&self, j: usize) -> &[i64] {
        &self.weights[j]
    }
}

impl Representation for TorusRep {
    fn group(&self) -> &GroupSpec {
        &self.group
    }

    fn dim(&self) -> usize {
        self.weights.len()
    }

    fn apply(&self, g: &GroupElement, v: &CVector) -> Result<CVector> {
        check_vector(self, v)?;
        g.check_shape(&self.group)?;
        let diag: Vec<C64> = g.blocks.iter().flat_map(|b| b.diagonal().iter().copied().collect::<Vec<_>>()).collect();
        if diag.iter().any(|z| z.norm() == 0.0) {
            return Err(Error::Singular("torus element has a zero entry".into()));
        }
        Ok(CVector::from_iterator(
            v.len(),
            self.weights.iter().zip(v.iter()).map(|(w, x)| {
                w.iter().zip(&diag).fold(*x, |acc, (&e, z)| if e == 0 { acc } else { acc * z.powi(e as i32) })
            }),
        ))
    }

    fn lie_apply(&self, h: &LieDirection, v: &CVector) -> Result<CVector> {
        check_vector(self, v)?;
        check_direction_shape(&self.group, h)?;
        let diag: Vec<C64> = h.blocks.iter().flat_map(|b| b.diagonal().iter().copied().collect::<Vec<_>>()).collect();
        Ok(CVector::from_iterator(
            v.len(),
            self.weights.iter().zip(v.iter()).map(|(w, x)| {
                let e: C64 = w.iter().zip(&diag).map(|(&a, z)| z * a as f64).sum();
                e * x
            }),
        ))
    }

    fn weights(&self) -> Vec<Weight> {
        dedup(self.weights.iter().map(|w| Weight::from_integers(&self.group, w)))
    }

    fn structure(&self) -> Structure {
        self.structure.clone()
    }
}
