//! Block-structured groups `G = ∏ G_i` with `G_i ∈ {GL, SL, T, ST}`, their
//! elements, and Hermitian tangent directions.
//!
//! Torus factors store only their diagonal. Tangent coordinates use the
//! orthonormal Hermitian basis of [`TangentBasis`] with respect to the real
//! inner product `⟨A, B⟩ = Re tr(A†B)`.

use nalgebra::DVector;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numkernels::{herm_exp, hermitian_defect};
use crate::{c64, CMatrix, CVector, C64};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum FactorKind {
    Gl,
    Sl,
    Torus,
    SpecialTorus,
}

impl FactorKind {
    pub fn is_torus(self) -> bool {
        matches!(self, FactorKind::Torus | FactorKind::SpecialTorus)
    }

    /// Unit-determinant constraint (`SL` or special torus).
    pub fn is_special(self) -> bool {
        matches!(self, FactorKind::Sl | FactorKind::SpecialTorus)
    }

    pub fn special(self) -> FactorKind {
        match self {
            FactorKind::Gl | FactorKind::Sl => FactorKind::Sl,
            FactorKind::Torus | FactorKind::SpecialTorus => FactorKind::SpecialTorus,
        }
    }
}

/// Group flavour requested from the representation constructors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum GroupKind {
    Gl,
    Sl,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Factor {
    pub kind: FactorKind,
    pub n: usize,
}

impl Factor {
    pub fn tangent_dim(&self) -> usize {
        match self.kind {
            FactorKind::Gl => self.n * self.n,
            FactorKind::Sl => self.n * self.n - 1,
            FactorKind::Torus => self.n,
            FactorKind::SpecialTorus => self.n - 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GroupSpec {
    factors: Vec<Factor>,
}

impl GroupSpec {
    pub fn new(factors: impl IntoIterator<Item = (FactorKind, usize)>) -> Result<Self> {
        let factors: Vec<Factor> =
            factors.into_iter().map(|(kind, n)| Factor { kind, n }).collect();
        if factors.is_empty() {
            return Err(Error::InvalidInput("group needs at least one factor".into()));
        }
        if factors.iter().any(|f| f.n == 0) {
            return Err(Error::InvalidInput("group factor sizes must be positive".into()));
        }
        Ok(GroupSpec { factors })
    }

    /// `GL(n_1) × … × GL(n_k)` or its `SL` analogue.
    pub fn linear(kind: GroupKind, sizes: &[usize]) -> Result<Self> {
        let fk = match kind {
            GroupKind::Gl => FactorKind::Gl,
            GroupKind::Sl => FactorKind::Sl,
        };
        Self::new(sizes.iter().map(|&n| (fk, n)))
    }

    pub fn factors(&self) -> &[Factor] {
        &self.factors
    }

    pub fn num_factors(&self) -> usize {
        self.factors.len()
    }

    /// Total size `n = Σ n_i`.
    pub fn total_n(&self) -> usize {
        self.factors.iter().map(|f| f.n).sum()
    }

    /// Start index of each factor inside the concatenated diagonal.
    pub fn offsets(&self) -> Vec<usize> {
        let mut acc = 0;
        self.factors
            .iter()
            .map(|f| {
                let o = acc;
                acc += f.n;
                o
            })
            .collect()
    }

    /// Real dimension of the Hermitian tangent space.
    pub fn tangent_dim(&self) -> usize {
        self.factors.iter().map(Factor::tangent_dim).sum()
    }

    /// Same sizes with every factor replaced by its unit-determinant version.
    pub fn to_special(&self) -> GroupSpec {
        GroupSpec {
            factors: self
                .factors
                .iter()
                .map(|f| Factor { kind: f.kind.special(), n: f.n })
                .collect(),
        }
    }

    pub fn is_all_special(&self) -> bool {
        self.factors.iter().all(|f| f.kind.is_special())
    }

    pub fn has_special(&self) -> bool {
        self.factors.iter().any(|f| f.kind.is_special())
    }

    /// Same block shapes (dense versus diagonal) and sizes.
    pub fn same_shape(&self, other: &GroupSpec) -> bool {
        self.factors.len() == other.factors.len()
            && self
                .factors
                .iter()
                .zip(&other.factors)
                .all(|(a, b)| a.n == b.n && a.kind.is_torus() == b.kind.is_torus())
    }
}

/// One factor of a group element or tangent direction.
#[derive(Debug, Clone, PartialEq)]
pub enum Block {
    Dense(CMatrix),
    Diag(CVector),
}

impl Block {
    pub fn identity(kind: FactorKind, n: usize) -> Block {
        if kind.is_torus() {
            Block::Diag(CVector::from_element(n, c64(1.0, 0.0)))
        } else {
            Block::Dense(CMatrix::identity(n, n))
        }
    }

    pub fn zeros(kind: FactorKind, n: usize) -> Block {
        if kind.is_torus() {
            Block::Diag(CVector::zeros(n))
        } else {
            Block::Dense(CMatrix::zeros(n, n))
        }
    }

    pub fn n(&self) -> usize {
        match self {
            Block::Dense(m) => m.nrows(),
            Block::Diag(d) => d.len(),
        }
    }

    pub fn is_diag(&self) -> bool {
        matches!(self, Block::Diag(_))
    }

    pub fn to_dense(&self) -> CMatrix {
        match self {
            Block::Dense(m) => m.clone(),
            Block::Diag(d) => CMatrix::from_diagonal(d),
        }
    }

    /// Diagonal entries (the full diagonal of a dense block).
    pub fn diagonal(&self) -> CVector {
        match self {
            Block::Dense(m) => m.diagonal(),
            Block::Diag(d) => d.clone(),
        }
    }

    pub fn mul(&self, other: &Block) -> Block {
        match (self, other) {
            (Block::Diag(a), Block::Diag(b)) => Block::Diag(a.component_mul(b)),
            _ => Block::Dense(self.to_dense() * other.to_dense()),
        }
    }

    pub fn add(&self, other: &Block) -> Block {
        match (self, other) {
            (Block::Diag(a), Block::Diag(b)) => Block::Diag(a + b),
            _ => Block::Dense(self.to_dense() + other.to_dense()),
        }
    }

    pub fn scale(&self, s: f64) -> Block {
        match self {
            Block::Dense(m) => Block::Dense(m.scale(s)),
            Block::Diag(d) => Block::Diag(d.scale(s)),
        }
    }

    pub fn adjoint(&self) -> Block {
        match self {
            Block::Dense(m) => Block::Dense(m.adjoint()),
            Block::Diag(d) => Block::Diag(d.map(|z| z.conj())),
        }
    }

    pub fn inverse(&self) -> Result<Block> {
        match self {
            Block::Diag(d) => {
                if d.iter().any(|z| z.norm() == 0.0 || !z.is_finite()) {
                    return Err(Error::Singular("torus block has a zero entry".into()));
                }
                Ok(Block::Diag(d.map(|z| z.inv())))
            }
            Block::Dense(m) => m
                .clone()
                .try_inverse()
                .filter(|inv| inv.iter().all(|z| z.is_finite()))
                .map(Block::Dense)
                .ok_or_else(|| Error::Singular("block is not invertible".into())),
        }
    }

    pub fn det(&self) -> C64 {
        match self {
            Block::Dense(m) => m.determinant(),
            Block::Diag(d) => d.iter().product(),
        }
    }

    pub fn trace(&self) -> C64 {
        match self {
            Block::Dense(m) => m.trace(),
            Block::Diag(d) => d.iter().sum(),
        }
    }

    pub fn norm_squared(&self) -> f64 {
        match self {
            Block::Dense(m) => m.norm_squared(),
            Block::Diag(d) => d.norm_squared(),
        }
    }

    /// Real inner product `Re tr(A† B)`.
    pub fn dot(&self, other: &Block) -> f64 {
        match (self, other) {
            (Block::Diag(a), Block::Diag(b)) => a.dotc(b).re,
            _ => self.to_dense().dotc(&other.to_dense()).re,
        }
    }

    /// Deviation from being Hermitian.
    pub fn hermitian_defect(&self) -> f64 {
        match self {
            Block::Dense(m) => hermitian_defect(m),
            Block::Diag(d) => d.iter().fold(0.0, |w, z| w.max(z.im.abs())),
        }
    }

    /// `e^H` for a Hermitian block.
    pub fn exp(&self) -> Result<Block> {
        match self {
            Block::Dense(m) => herm_exp(m).map(Block::Dense),
            Block::Diag(d) => {
                if self.hermitian_defect() > 1e-10 * (1.0 + d.camax()) {
                    return Err(Error::ContractViolation("diagonal direction not real".into()));
                }
                Ok(Block::Diag(d.map(|z| c64(z.re.exp(), 0.0))))
            }
        }
    }

    /// Subtracts the trace part: `A − tr(A)/n · I`.
    pub fn traceless(&self) -> Block {
        let n = self.n() as f64;
        let shift = self.trace() / n;
        match self {
            Block::Dense(m) => {
                let mut out = m.clone();
                for i in 0..m.nrows() {
                    out[(i, i)] -= shift;
                }
                Block::Dense(out)
            }
            Block::Diag(d) => Block::Diag(d.map(|z| z - shift)),
        }
    }

    fn is_finite(&self) -> bool {
        match self {
            Block::Dense(m) => m.iter().all(|z| z.is_finite()),
            Block::Diag(d) => d.iter().all(|z| z.is_finite()),
        }
    }

    fn check_shape(&self, kind: FactorKind, n: usize) -> Result<()> {
        if self.n() != n || kind.is_torus() != self.is_diag() {
            return Err(Error::InvalidInput(format!(
                "block shape does not match factor {kind:?}({n})"
            )));
        }
        if let Block::Dense(m) = self {
            if !m.is_square() {
                return Err(Error::InvalidInput("block is not square".into()));
            }
        }
        Ok(())
    }
}

/// An element `g = (g_1, …, g_k)` of the group.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupElement {
    pub blocks: Vec<Block>,
}

impl GroupElement {
    pub fn identity(spec: &GroupSpec) -> Self {
        GroupElement {
            blocks: spec.factors().iter().map(|f| Block::identity(f.kind, f.n)).collect(),
        }
    }

    /// Checks block shapes only (dense versus diagonal, sizes, finiteness).
    pub fn check_shape(&self, spec: &GroupSpec) -> Result<()> {
        if self.blocks.len() != spec.num_factors() {
            return Err(Error::InvalidInput(format!(
                "group element has {} blocks, group has {} factors",
                self.blocks.len(),
                spec.num_factors()
            )));
        }
        for (b, f) in self.blocks.iter().zip(spec.factors()) {
            b.check_shape(f.kind, f.n)?;
            if !b.is_finite() {
                return Err(Error::InvalidInput("group element has non-finite entries".into()));
            }
        }
        Ok(())
    }

    /// Full validity: shapes, invertibility and unit determinants of special
    /// blocks, up to `1e-8·max(1, ‖b‖_F^n)` to absorb rounding in products.
    pub fn validate(&self, spec: &GroupSpec) -> Result<()> {
        self.check_shape(spec)?;
        for (b, f) in self.blocks.iter().zip(spec.factors()) {
            let det = b.det();
            if det.norm() == 0.0 || !det.is_finite() {
                return Err(Error::Singular("group element block is singular".into()));
            }
            let tol = 1e-8 * b.norm_squared().sqrt().powi(f.n as i32).max(1.0);
            if f.kind.is_special() && (det - c64(1.0, 0.0)).norm() > tol {
                return Err(Error::InvalidInput(format!(
                    "{:?} block has determinant {det}, expected 1",
                    f.kind
                )));
            }
        }
        Ok(())
    }

    pub fn mul(&self, other: &GroupElement) -> GroupElement {
        GroupElement {
            blocks: self.blocks.iter().zip(&other.blocks).map(|(a, b)| a.mul(b)).collect(),
        }
    }

    pub fn inverse(&self) -> Result<GroupElement> {
        Ok(GroupElement {
            blocks: self.blocks.iter().map(Block::inverse).collect::<Result<_>>()?,
        })
    }

    pub fn adjoint(&self) -> GroupElement {
        GroupElement { blocks: self.blocks.iter().map(Block::adjoint).collect() }
    }

    /// `e^H` blockwise.
    pub fn exp(h: &LieDirection) -> Result<GroupElement> {
        Ok(GroupElement { blocks: h.blocks.iter().map(Block::exp).collect::<Result<_>>()? })
    }

    /// Divides every special block by `det^{1/n}` so that its determinant is 1 again.
    pub fn reproject(&mut self, spec: &GroupSpec) {
        for (b, f) in self.blocks.iter_mut().zip(spec.factors()) {
            if f.kind.is_special() {
                let root = b.det().powf(1.0 / f.n as f64);
                if root.norm() > 0.0 && root.is_finite() {
                    let inv = root.inv();
                    *b = match b {
                        Block::Dense(m) => Block::Dense(m.map(|z| z * inv)),
                        Block::Diag(d) => Block::Diag(d.map(|z| z * inv)),
                    };
                }
            }
        }
    }

    /// Sum of squared Frobenius norms of the blocks.
    pub fn norm_squared(&self) -> f64 {
        self.blocks.iter().map(Block::norm_squared).sum()
    }
}

/// A Hermitian tangent direction `H = (H_1, …, H_k)`.
#[derive(Debug, Clone, PartialEq)]
pub struct LieDirection {
    pub blocks: Vec<Block>,
}

impl LieDirection {
    pub fn zeros(spec: &GroupSpec) -> Self {
        LieDirection {
            blocks: spec.factors().iter().map(|f| Block::zeros(f.kind, f.n)).collect(),
        }
    }

    /// Checks shapes, Hermiticity and tracelessness of special blocks.
    pub fn validate(&self, spec: &GroupSpec) -> Result<()> {
        if self.blocks.len() != spec.num_factors() {
            return Err(Error::InvalidInput("direction has wrong number of blocks".into()));
        }
        for (b, f) in self.blocks.iter().zip(spec.factors()) {
            b.check_shape(f.kind, f.n)?;
            let scale = 1.0 + b.norm_squared().sqrt();
            if b.hermitian_defect() > 1e-10 * scale {
                return Err(Error::ContractViolation("direction is not Hermitian".into()));
            }
            if f.kind.is_special() && b.trace().norm() > 1e-10 * scale {
                return Err(Error::ContractViolation(format!(
                    "{:?} direction must be traceless",
                    f.kind
                )));
            }
        }
        Ok(())
    }

    pub fn scale(&self, s: f64) -> LieDirection {
        LieDirection { blocks: self.blocks.iter().map(|b| b.scale(s)).collect() }
    }

    pub fn add(&self, other: &LieDirection) -> LieDirection {
        LieDirection {
            blocks: self.blocks.iter().zip(&other.blocks).map(|(a, b)| a.add(b)).collect(),
        }
    }

    /// Real inner product `Σ_i Re tr(H_i† K_i)`.
    pub fn dot(&self, other: &LieDirection) -> f64 {
        self.blocks.iter().zip(&other.blocks).map(|(a, b)| a.dot(b)).sum()
    }

    /// Frobenius norm.
    pub fn norm(&self) -> f64 {
        self.blocks.iter().map(Block::norm_squared).sum::<f64>().sqrt()
    }

    /// Removes the trace part of each special block.
    pub fn project(&self, spec: &GroupSpec) -> LieDirection {
        LieDirection {
            blocks: self
                .blocks
                .iter()
                .zip(spec.factors())
                .map(|(b, f)| if f.kind.is_special() { b.traceless() } else { b.clone() })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum ElemKind {
    Diag(Vec<f64>),
    Sym(usize, usize),
    Asym(usize, usize),
}

#[derive(Debug, Clone, PartialEq)]
struct BasisElem {
    factor: usize,
    kind: ElemKind,
}

/// Orthonormal basis of the Hermitian tangent space of a [`GroupSpec`].
///
/// Per dense block: diagonal directions, `(E_ab + E_ba)/√2` and
/// `i(E_ab − E_ba)/√2` for `a < b`. Special blocks replace the diagonal
/// directions by an orthonormal traceless (Helmert) family.
#[derive(Debug, Clone)]
pub struct TangentBasis {
    spec: GroupSpec,
    elems: Vec<BasisElem>,
}

fn helmert(n: usize) -> Vec<Vec<f64>> {
    (1..n)
        .map(|k| {
            let norm = ((k * (k + 1)) as f64).sqrt();
            (0..n)
                .map(|i| match i.cmp(&k) {
                    std::cmp::Ordering::Less => 1.0 / norm,
                    std::cmp::Ordering::Equal => -(k as f64) / norm,
                    std::cmp::Ordering::Greater => 0.0,
                })
                .collect()
        })
        .collect()
}

impl TangentBasis {
    pub fn new(spec: &GroupSpec) -> Self {
        let mut elems = Vec::with_capacity(spec.tangent_dim());
        for (fi, f) in spec.factors().iter().enumerate() {
            let diags: Vec<Vec<f64>> = if f.kind.is_special() {
                helmert(f.n)
            } else {
                (0..f.n)
                    .map(|a| (0..f.n).map(|i| if i == a { 1.0 } else { 0.0 }).collect())
                    .collect()
            };
            elems.extend(diags.into_iter().map(|c| BasisElem { factor: fi, kind: ElemKind::Diag(c) }));
            if !f.kind.is_torus() {
                for a in 0..f.n {
                    for b in (a + 1)..f.n {
                        elems.push(BasisElem { factor: fi, kind: ElemKind::Sym(a, b) });
                        elems.push(BasisElem { factor: fi, kind: ElemKind::Asym(a, b) });
                    }
                }
            }
        }
        TangentBasis { spec: spec.clone(), elems }
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn spec(&self) -> &GroupSpec {
        &self.spec
    }

    /// Factor index of basis element `b`.
    pub fn factor_of(&self, b: usize) -> usize {
        self.elems[b].factor
    }

    /// Block of basis element `b` (inside its own factor).
    pub fn block(&self, b: usize) -> Block {
        let e = &self.elems[b];
        let f = self.spec.factors()[e.factor];
        let s = std::f64::consts::FRAC_1_SQRT_2;
        match &e.kind {
            ElemKind::Diag(c) => {
                let d = CVector::from_iterator(f.n, c.iter().map(|&x| c64(x, 0.0)));
                if f.kind.is_torus() {
                    Block::Diag(d)
                } else {
                    Block::Dense(CMatrix::from_diagonal(&d))
                }
            }
            ElemKind::Sym(a, bb) => {
                let mut m = CMatrix::zeros(f.n, f.n);
                m[(*a, *bb)] = c64(s, 0.0);
                m[(*bb, *a)] = c64(s, 0.0);
                Block::Dense(m)
            }
            ElemKind::Asym(a, bb) => {
                let mut m = CMatrix::zeros(f.n, f.n);
                m[(*a, *bb)] = c64(0.0, s);
                m[(*bb, *a)] = c64(0.0, -s);
                Block::Dense(m)
            }
        }
    }

    /// Basis element `b` as a full direction (zero in the other factors).
    pub fn direction(&self, b: usize) -> LieDirection {
        let mut h = LieDirection::zeros(&self.spec);
        h.blocks[self.elems[b].factor] = self.block(b);
        h
    }

    /// Coordinates `⟨B_b, H⟩` of a direction.
    pub fn coords(&self, h: &LieDirection) -> DVector<f64> {
        let s = std::f64::consts::SQRT_2;
        DVector::from_iterator(
            self.len(),
            self.elems.iter().map(|e| {
                let blk = &h.blocks[e.factor];
                match (&e.kind, blk) {
                    (ElemKind::Diag(c), _) => {
                        let d = blk.diagonal();
                        c.iter().zip(d.iter()).map(|(x, z)| x * z.re).sum()
                    }
                    (ElemKind::Sym(a, b), Block::Dense(m)) => s * 0.5 * (m[(*a, *b)] + m[(*b, *a)]).re,
                    (ElemKind::Asym(a, b), Block::Dense(m)) => s * 0.5 * (m[(*a, *b)] - m[(*b, *a)]).im,
                    _ => 0.0,
                }
            }),
        )
    }

    /// Direction `Σ c_b B_b`.
    pub fn from_coords(&self, c: &DVector<f64>) -> LieDirection {
        let mut h = LieDirection::zeros(&self.spec);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        for (e, &x) in self.elems.iter().zip(c.iter()) {
            if x == 0.0 {
                continue;
            }
            match (&e.kind, &mut h.blocks[e.factor]) {
                (ElemKind::Diag(coef), Block::Diag(d)) => {
                    for (z, w) in d.iter_mut().zip(coef) {
                        *z += c64(x * w, 0.0);
                    }
                }
                (ElemKind::Diag(coef), Block::Dense(m)) => {
                    for (i, w) in coef.iter().enumerate() {
                        m[(i, i)] += c64(x * w, 0.0);
                    }
                }
                (ElemKind::Sym(a, b), Block::Dense(m)) => {
                    m[(*a, *b)] += c64(x * s, 0.0);
                    m[(*b, *a)] += c64(x * s, 0.0);
                }
                (ElemKind::Asym(a, b), Block::Dense(m)) => {
                    m[(*a, *b)] += c64(0.0, x * s);
                    m[(*b, *a)] += c64(0.0, -x * s);
                }
                _ => unreachable!("basis element shape matches its factor"),
            }
        }
        h
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec() -> GroupSpec {
        GroupSpec::new([
            (FactorKind::Gl, 3),
            (FactorKind::Sl, 2),
            (FactorKind::Torus, 2),
            (FactorKind::SpecialTorus, 3),
        ])
        .unwrap()
    }

    #[test]
    fn tangent_dimensions() {
        let s = spec();
        assert_eq!(s.tangent_dim(), 9 + 3 + 2 + 2);
        assert_eq!(TangentBasis::new(&s).len(), s.tangent_dim());
        assert_eq!(s.total_n(), 10);
    }

    #[test]
    fn basis_is_orthonormal_and_valid() {
        let s = spec();
        let tb = TangentBasis::new(&s);
        for a in 0..tb.len() {
            let ha = tb.direction(a);
            ha.validate(&s).unwrap();
            for b in 0..tb.len() {
                let d = ha.dot(&tb.direction(b));
                let want = if a == b { 1.0 } else { 0.0 };
                assert!((d - want).abs() < 1e-14, "{a} {b} {d}");
            }
        }
    }

    #[test]
    fn coords_roundtrip() {
        let s = spec();
        let tb = TangentBasis::new(&s);
        let c = DVector::from_iterator(tb.len(), (0..tb.len()).map(|i| (i as f64 * 0.37).sin()));
        let h = tb.from_coords(&c);
        assert!((tb.coords(&h) - c).norm() < 1e-13);
    }

    #[test]
    fn identity_is_valid_and_empty_spec_rejected() {
        let s = spec();
        GroupElement::identity(&s).validate(&s).unwrap();
        assert!(GroupSpec::new([]).is_err());
        assert!(GroupSpec::new([(FactorKind::Gl, 0)]).is_err());
    }

    #[test]
    fn reproject_restores_unit_determinant() {
        let s = GroupSpec::new([(FactorKind::Sl, 2)]).unwrap();
        let mut g = GroupElement {
            blocks: vec![Block::Dense(CMatrix::from_row_slice(
                2,
                2,
                &[c64(2.0, 0.0), c64(1.0, 1.0), c64(0.0, 0.0), c64(3.0, 0.0)],
            ))],
        };
        assert!(g.validate(&s).is_err());
        g.reproject(&s);
        g.validate(&s).unwrap();
    }

    #[test]
    fn special_directions_must_be_traceless() {
        let s = GroupSpec::new([(FactorKind::Sl, 2)]).unwrap();
        let h = LieDirection { blocks: vec![Block::Dense(CMatrix::identity(2, 2))] };
        assert!(h.validate(&s).is_err());
        assert!(h.project(&s).validate(&s).is_ok());
    }
}
