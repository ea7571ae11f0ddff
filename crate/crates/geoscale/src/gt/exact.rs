use std::collections::BTreeMap;

use nalgebra::DMatrix;
use num::{BigRational, ToPrimitive, Zero};

/// Sparse square matrix over the rationals, stored by rows.
#[derive(Debug, Clone)]
pub(crate) struct QMat {
    rows: Vec<BTreeMap<usize, BigRational>>,
}

impl QMat {
    pub fn zeros(m: usize) -> Self {
        QMat { rows: vec![BTreeMap::new(); m] }
    }

    pub fn set(&mut self, r: usize, c: usize, x: BigRational) {
        if x.is_zero() {
            self.rows[r].remove(&c);
        } else {
            self.rows[r].insert(c, x);
        }
    }

    fn mul(&self, other: &QMat) -> QMat {
        let mut out = QMat::zeros(self.rows.len());
        for (i, row) in self.rows.iter().enumerate() {
            let mut acc: BTreeMap<usize, BigRational> = BTreeMap::new();
            for (k, a) in row {
                for (j, b) in &other.rows[*k] {
                    *acc.entry(*j).or_insert_with(BigRational::zero) += a * b;
                }
            }
            acc.retain(|_, x| !x.is_zero());
            out.rows[i] = acc;
        }
        out
    }

    pub fn commutator(&self, other: &QMat) -> QMat {
        let mut ab = self.mul(other);
        let ba = other.mul(self);
        for (i, row) in ba.rows.into_iter().enumerate() {
            for (j, x) in row {
                let e = ab.rows[i].entry(j).or_insert_with(BigRational::zero);
                *e -= x;
                if e.is_zero() {
                    ab.rows[i].remove(&j);
                }
            }
        }
        ab
    }

    pub fn to_f64(&self) -> DMatrix<f64> {
        let m = self.rows.len();
        let mut out = DMatrix::zeros(m, m);
        for (i, row) in self.rows.iter().enumerate() {
            for (j, x) in row {
                out[(i, *j)] = x.to_f64().unwrap_or(f64::NAN);
            }
        }
        out
    }

    pub fn to_dense(&self) -> Vec<Vec<BigRational>> {
        let m = self.rows.len();
        let mut out = vec![vec![BigRational::zero(); m]; m];
        for (i, row) in self.rows.iter().enumerate() {
            for (j, x) in row {
                out[i][*j] = x.clone();
            }
        }
        out
    }
}
