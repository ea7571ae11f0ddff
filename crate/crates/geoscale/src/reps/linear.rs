use crate::error::{Error, Result};
use crate::group::{FactorKind, GroupElement, GroupSpec, LieDirection};
use crate::reps::{check_direction_shape, check_vector, dedup, Representation, Structure, Weight};
use crate::{CMatrix, CVector};

/// Applies `a` along tensor mode `mode` of a row-major tensor with shape `dims`.
pub(crate) fn mode_product(v: &CVector, dims: &[usize], mode: usize, a: &CMatrix) -> CVector {
    let n = dims[mode];
    let pre: usize = dims[..mode].iter().product();
    let post: usize = dims[mode + 1..].iter().product();
    let mut out = CVector::zeros(v.len());
    for p in 0..pre {
        for r in 0..n {
            for c in 0..n {
                let coef = a[(r, c)];
                if coef.re == 0.0 && coef.im == 0.0 {
                    continue;
                }
                let src = (p * n + c) * post;
                let dst = (p * n + r) * post;
                for q in 0..post {
                    out[dst + q] += coef * v[src + q];
                }
            }
        }
    }
    out
}


fn dense_blocks(g: &GroupElement) -> Vec<CMatrix> {
    g.blocks.iter().map(|b| b.to_dense()).collect()
}

fn dense_dirs(h: &LieDirection) -> Vec<CMatrix> {
    h.blocks.iter().map(|b| b.to_dense()).collect()
}

/// Row-major `rows × cols` matrix stored at `v[offset..]`.
fn read(v: &CVector, offset: usize, rows: usize, cols: usize) -> CMatrix {
    CMatrix::from_fn(rows, cols, |i, j| v[offset + i * cols + j])
}

fn write(out: &mut CVector, offset: usize, m: &CMatrix) {
    let cols = m.ncols();
    for i in 0..m.nrows() {
        for j in 0..cols {
            out[offset + i * cols + j] = m[(i, j)];
        }
    }
}

fn unit_weight(group: &GroupSpec, plus: &[usize], minus: &[usize]) -> Weight {
    let mut flat = vec![0i64; group.total_n()];
    for &p in plus {
        flat[p] += 1;
    }
    for &m in minus {
        flat[m] -= 1;
    }
    Weight::from_integers(group, &flat)
}

/// `GL(n) × GL(n)` acting on `Mat(n)^k` by `X_i ↦ g X_i hᵀ`.
#[derive(Debug, Clone)]
pub struct OperatorScalingRep {
    n: usize,
    k: usize,
    group: GroupSpec,
}

impl OperatorScalingRep {
    pub fn new(n: usize, k: usize) -> Result<Self> {
        if n == 0 || k == 0 {
            return Err(Error::InvalidInput("operator scaling needs n, k ≥ 1".into()));
        }
        let group = GroupSpec::new([(FactorKind::Gl, n), (FactorKind::Gl, n)])?;
        Ok(OperatorScalingRep { n, k, group })
    }
}

impl Representation for OperatorScalingRep {
    fn group(&self) -> &GroupSpec {
        &self.group
    }

    fn dim(&self) -> usize {
        self.k * self.n * self.n
    }

    fn apply(&self, g: &GroupElement, v: &CVector) -> Result<CVector> {
        check_vector(self, v)?;
        g.check_shape(&self.group)?;
        let b = dense_blocks(g);
        let right = b[1].transpose();
        let nn = self.n * self.n;
        let mut out = CVector::zeros(self.dim());
        for l in 0..self.k {
            let x = read(v, l * nn, self.n, self.n);
            write(&mut out, l * nn, &(&b[0] * x * &right));
        }
        Ok(out)
    }

    fn lie_apply(&self, h: &LieDirection, v: &CVector) -> Result<CVector> {
        check_vector(self, v)?;
        check_direction_shape(&self.group, h)?;
        let b = dense_dirs(h);
        let right = b[1].transpose();
        let nn = self.n * self.n;
        let mut out = CVector::zeros(self.dim());
        for l in 0..self.k {
            let x = read(v, l * nn, self.n, self.n);
            write(&mut out, l * nn, &(&b[0] * &x + &x * &right));
        }
        Ok(out)
    }

    fn weights(&self) -> Vec<Weight> {
        let n = self.n;
        dedup((0..n).flat_map(|a| (0..n).map(move |b| (a, b))).map(|(a, b)| unit_weight(&self.group, &[a, n + b], &[])))
    }

    fn structure(&self) -> Structure {
        Structure::OperatorScaling { n: self.n, k: self.k }
    }
}

/// `GL(n_1) × … × GL(n_k)` acting on `C^{n_1} ⊗ … ⊗ C^{n_k}` (row-major).
#[derive(Debug, Clone)]
pub struct TensorRep {
    dims: Vec<usize>,
    group: GroupSpec,
}

impl TensorRep {
    pub fn new(dims: &[usize]) -> Result<Self> {
        if dims.len() < 2 || dims.contains(&0) {
            return Err(Error::InvalidInput("tensor action needs k ≥ 2 positive dimensions".into()));
        }
        let group = GroupSpec::new(dims.iter().map(|&n| (FactorKind::Gl, n)))?;
        Ok(TensorRep { dims: dims.to_vec(), group })
    }
}

impl Representation for TensorRep {
    fn group(&self) -> &GroupSpec {
        &self.group
    }

    fn dim(&self) -> usize {
        self.dims.iter().product()
    }

    fn apply(&self, g: &GroupElement, v: &CVector) -> Result<CVector> {
        check_vector(self, v)?;
        g.check_shape(&self.group)?;
        let b = dense_blocks(g);
        let mut out = v.clone();
        for (mode, a) in b.iter().enumerate() {
            out = mode_product(&out, &self.dims, mode, a);
        }
        Ok(out)
    }

    fn lie_apply(&self, h: &LieDirection, v: &CVector) -> Result<CVector> {
        check_vector(self, v)?;
        check_direction_shape(&self.group, h)?;
        let b = dense_dirs(h);
        let mut out = CVector::zeros(v.len());
        for (mode, a) in b.iter().enumerate() {
            out += mode_product(v, &self.dims, mode, a);
        }
        Ok(out)
    }

    fn weights(&self) -> Vec<Weight> {
        let offsets = self.group.offsets();
        let mut idx = vec![0usize; self.dims.len()];
        let mut out = Vec::with_capacity(self.dim());
        loop {
            let plus: Vec<usize> = idx.iter().zip(&offsets).map(|(i, o)| i + o).collect();
            out.push(unit_weight(&self.group, &plus, &[]));
            let mut m = self.dims.len();
            loop {
                if m == 0 {
                    return dedup(out);
                }
                m -= 1;
                idx[m] += 1;
                if idx[m] < self.dims[m] {
                    break;
                }
                idx[m] = 0;
            }
        }
    }

    fn structure(&self) -> Structure {
        Structure::Tensor { dims: self.dims.clone() }
    }
}

/// `GL(n)` acting on `Mat(n)^k` by simultaneous conjugation.
#[derive(Debug, Clone)]
pub struct ConjugationRep {
    n: usize,
    k: usize,
    group: GroupSpec,
}

impl ConjugationRep {
    pub fn new(n: usize, k: usize) -> Result<Self> {
        if n == 0 || k == 0 {
            return Err(Error::InvalidInput("conjugation needs n, k ≥ 1".into()));
        }
        let group = GroupSpec::new([(FactorKind::Gl, n)])?;
        Ok(ConjugationRep { n, k, group })
    }
}

impl Representation for ConjugationRep {
    fn group(&self) -> &GroupSpec {
        &self.group
    }

    fn dim(&self) -> usize {
        self.k * self.n * self.n
    }

    fn apply(&self, g: &GroupElement, v: &CVector) -> Result<CVector> {
        check_vector(self, v)?;
        g.check_shape(&self.group)?;
        let a = g.blocks[0].to_dense();
        let inv = g.blocks[0].inverse()?.to_dense();
        let nn = self.n * self.n;
        let mut out = CVector::zeros(self.dim());
        for l in 0..self.k {
            let x = read(v, l * nn, self.n, self.n);
            write(&mut out, l * nn, &(&a * x * &inv));
        }
        Ok(out)
    }

    fn lie_apply(&self, h: &LieDirection, v: &CVector) -> Result<CVector> {
        check_vector(self, v)?;
        check_direction_shape(&self.group, h)?;
        let a = h.blocks[0].to_dense();
        let nn = self.n * self.n;
        let mut out = CVector::zeros(self.dim());
        for l in 0..self.k {
            let x = read(v, l * nn, self.n, self.n);
            write(&mut out, l * nn, &(&a * &x - &x * &a));
        }
        Ok(out)
    }

    fn weights(&self) -> Vec<Weight> {
        let n = self.n;
        dedup((0..n).flat_map(|i| (0..n).map(move |j| (i, j))).map(|(i, j)| unit_weight(&self.group, &[i], &[j])))
    }

    fn structure(&self) -> Structure {
        Structure::Conjugation { n: self.n, k: self.k }
    }
}

/// `∏_x GL(n_x)` acting on `⊕_a Mat(n_{ha}, n_{ta})` by `X_a ↦ g_{ha} X_a g_{ta}⁻¹`.
#[derive(Debug, Clone)]
pub struct QuiverRep {
    dims: Vec<usize>,
    arrows: Vec<(usize, usize)>,
    offsets: Vec<usize>,
    group: GroupSpec,
}

impl QuiverRep {
    pub fn new(dims: &[usize], arrows: &[(usize, usize)]) -> Result<Self> {
        if dims.is_empty() || dims.contains(&0) {
            return Err(Error::InvalidInput("quiver needs positive vertex dimensions".into()));
        }
        if arrows.is_empty() {
            return Err(Error::InvalidInput("quiver needs at least one arrow".into()));
        }
        for (idx, &(t, h)) in arrows.iter().enumerate() {
            if t >= dims.len() || h >= dims.len() {
                return Err(Error::InvalidInput(format!(
                    "arrow {idx} = ({t}, {h}) has an endpoint outside 0..{}",
                    dims.len()
                )));
            }
        }
        let group = GroupSpec::new(dims.iter().map(|&n| (FactorKind::Gl, n)))?;
        let mut offsets = Vec::with_capacity(arrows.len());
        let mut acc = 0;
        for &(t, h) in arrows {
            offsets.push(acc);
            acc += dims[h] * dims[t];
        }
        Ok(QuiverRep { dims: dims.to_vec(), arrows: arrows.to_vec(), offsets, group })
    }
}

impl Representation for QuiverRep {
    fn group(&self) -> &GroupSpec {
        &self.group
    }

    fn dim(&self) -> usize {
        self.arrows.iter().map(|&(t, h)| self.dims[h] * self.dims[t]).sum()
    }

    fn apply(&self, g: &GroupElement, v: &CVector) -> Result<CVector> {
        check_vector(self, v)?;
        g.check_shape(&self.group)?;
        let b = dense_blocks(g);
        let inv = g.blocks.iter().map(|x| x.inverse().map(|i| i.to_dense())).collect::<Result<Vec<_>>>()?;
        let mut out = CVector::zeros(self.dim());
        for (&(t, h), &o) in self.arrows.iter().zip(&self.offsets) {
            let x = read(v, o, self.dims[h], self.dims[t]);
            write(&mut out, o, &(&b[h] * x * &inv[t]));
        }
        Ok(out)
    }

    fn lie_apply(&self, hd: &LieDirection, v: &CVector) -> Result<CVector> {
        check_vector(self, v)?;
        check_direction_shape(&self.group, hd)?;
        let b = dense_dirs(hd);
        let mut out = CVector::zeros(self.dim());
        for (&(t, h), &o) in self.arrows.iter().zip(&self.offsets) {
            let x = read(v, o, self.dims[h], self.dims[t]);
            write(&mut out, o, &(&b[h] * &x - &x * &b[t]));
        }
        Ok(out)
    }

    fn weights(&self) -> Vec<Weight> {
        let offs = self.group.offsets();
        let mut out = Vec::new();
        for &(t, h) in &self.arrows {
            for i in 0..self.dims[h] {
                for j in 0..self.dims[t] {
                    out.push(unit_weight(&self.group, &[offs[h] + i], &[offs[t] + j]));
                }
            }
        }
        dedup(out)
    }

    fn structure(&self) -> Structure {
        Structure::Quiver { dims: self.dims.clone(), arrows: self.arrows.clone() }
    }
}
