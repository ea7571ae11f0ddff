//! Kempf–Ness function, moment map, Hessian form, duality bounds and the
//! shifted objective used for `p`-scaling.
//!
//! All quantities are evaluated in the orthonormal Hermitian basis of
//! [`TangentBasis`]. The moment map and the Hessian share one computation:
//! with `u = π(g)v/‖π(g)v‖` and `w_b = Π(B_b)u`,
//! `μ = Σ_b Re⟨u, w_b⟩ B_b` and `∇²F = 2(G − m mᵀ)` where `G_bc = Re⟨w_b, w_c⟩`.

mod flow;

use nalgebra::{DMatrix, DVector};
use num::integer::lcm;
use num::rational::Rational64;
use num::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::group::{Block, GroupElement, LieDirection, TangentBasis};
use crate::numkernels::{herm_eigen, qr_decompose};
use crate::reps::Representation;
use crate::{c64, CMatrix, CVector, C64};

pub use flow::{gradient_flow, FlowStatus, FlowTrace};

/// Invariant inner product of a representation's working basis.
pub(crate) struct Metric {
    gram: Option<DVector<f64>>,
}

impl Metric {
    pub fn of(rep: &dyn Representation) -> Self {
        let g = rep.invariant_norm_gram();
        Metric { gram: (!g.iter().all(|&x| x == 1.0)).then_some(g) }
    }

    pub fn dot(&self, x: &CVector, y: &CVector) -> C64 {
        match &self.gram {
            None => x.dotc(y),
            Some(g) => x.iter().zip(y.iter()).zip(g.iter()).map(|((a, b), w)| a.conj() * b * *w).sum(),
        }
    }

    pub fn norm(&self, x: &CVector) -> f64 {
        match &self.gram {
            None => x.norm(),
            Some(g) => x.iter().zip(g.iter()).map(|(z, w)| z.norm_sqr() * w).sum::<f64>().sqrt(),
        }
    }
}

/// The moment map `μ(v)`: one Hermitian block per factor (traceless for special factors).
#[derive(Debug, Clone, PartialEq)]
pub struct MomentValue {
    pub blocks: Vec<Block>,
}

impl MomentValue {
    pub fn from_direction(h: LieDirection) -> Self {
        MomentValue { blocks: h.blocks }
    }

    pub fn to_direction(&self) -> LieDirection {
        LieDirection { blocks: self.blocks.clone() }
    }

    /// Frobenius norm `‖μ‖_F`.
    pub fn norm(&self) -> f64 {
        self.blocks.iter().map(Block::norm_squared).sum::<f64>().sqrt()
    }

    /// Eigenvalues of each block, sorted nonincreasing.
    pub fn spectra(&self) -> Result<Vec<Vec<f64>>> {
        self.blocks
            .iter()
            .map(|b| {
                let mut ev: Vec<f64> = match b {
                    Block::Diag(d) => d.iter().map(|z| z.re).collect(),
                    Block::Dense(m) => herm_eigen(m)?.0.iter().copied().collect(),
                };
                ev.sort_by(|a, b| b.total_cmp(a));
                Ok(ev)
            })
            .collect()
    }
}

/// Matrix of a quadratic form on the Hermitian tangent space in an orthonormal basis.
#[derive(Debug, Clone)]
pub struct HessianForm {
    pub basis: TangentBasis,
    pub matrix: DMatrix<f64>,
}

impl HessianForm {
    /// `Q(H, H)`.
    pub fn value(&self, h: &LieDirection) -> f64 {
        let c = self.basis.coords(h);
        c.dot(&(&self.matrix * &c))
    }

    /// Eigenvalues in nondecreasing order.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut ev: Vec<f64> = self.matrix.clone().symmetric_eigenvalues().iter().copied().collect();
        ev.sort_by(f64::total_cmp);
        ev
    }
}

/// Local data at `x = π(g)v`: `u = x/‖x‖`, `w_b = Π(B_b)u` and `m_b = Re⟨u, w_b⟩`.
pub(crate) struct Local {
    pub log_norm: f64,
    pub w: Vec<CVector>,
    pub m: DVector<f64>,
}

pub(crate) fn local(rep: &dyn Representation, metric: &Metric, basis: &TangentBasis, x: &CVector) -> Result<Local> {
    let norm = metric.norm(x);
    if !(norm > 0.0) || !norm.is_finite() {
        return Err(Error::InvalidInput("vector has zero or non-finite norm".into()));
    }
    let u = x.unscale(norm);
    let w = (0..basis.len()).map(|b| rep.lie_apply(&basis.direction(b), &u)).collect::<Result<Vec<_>>>()?;
    let m = DVector::from_iterator(w.len(), w.iter().map(|wb| metric.dot(&u, wb).re));
    Ok(Local { log_norm: norm.ln(), w, m })
}

impl Local {
    pub fn moment(&self, basis: &TangentBasis) -> MomentValue {
        MomentValue::from_direction(basis.from_coords(&self.m))
    }

    pub fn hessian(&self, metric: &Metric) -> DMatrix<f64> {
        let d = self.w.len();
        let mut g = DMatrix::zeros(d, d);
        for b in 0..d {
            for c in b..d {
                let x = metric.dot(&self.w[b], &self.w[c]).re;
                g[(b, c)] = x;
                g[(c, b)] = x;
            }
        }
        (g - &self.m * self.m.transpose()) * 2.0
    }
}

fn check_nonzero(v: &CVector) -> Result<()> {
    if v.iter().all(|z| z.norm() == 0.0) {
        return Err(Error::InvalidInput("vector must be nonzero".into()));
    }
    Ok(())
}

/// Kempf–Ness function `F_v(g) = log‖π(g)v‖`.
pub fn kempf_ness(rep: &dyn Representation, v: &CVector, g: &GroupElement) -> Result<f64> {
    check_nonzero(v)?;
    let x = rep.apply(g, v)?;
    let n = Metric::of(rep).norm(&x);
    if !(n > 0.0) {
        return Err(Error::Degenerate("π(g)v vanished numerically".into()));
    }
    Ok(n.ln())
}

/// Moment map `μ(v)`, the gradient of `F_v` at the identity.
pub fn moment_map(rep: &dyn Representation, v: &CVector) -> Result<MomentValue> {
    check_nonzero(v)?;
    let basis = TangentBasis::new(rep.group());
    Ok(local(rep, &Metric::of(rep), &basis, v)?.moment(&basis))
}

/// `μ(π(g)v)`, the gradient of `F_v` at `g`.
pub fn moment_map_at(rep: &dyn Representation, v: &CVector, g: &GroupElement) -> Result<MomentValue> {
    check_nonzero(v)?;
    moment_map(rep, &rep.apply(g, v)?)
}

/// Geodesic Hessian of `F_v` at `g`: `H ↦ 2(⟨u,Π(H)²u⟩ − ⟨u,Π(H)u⟩²)`.
pub fn hessian(rep: &dyn Representation, v: &CVector, g: &GroupElement) -> Result<HessianForm> {
    check_nonzero(v)?;
    let basis = TangentBasis::new(rep.group());
    let metric = Metric::of(rep);
    let loc = local(rep, &metric, &basis, &rep.apply(g, v)?)?;
    Ok(HessianForm { matrix: loc.hessian(&metric), basis })
}

/// Regularizer `reg(g) = Σ_i ‖g_i‖_F² + ‖g_i^{-1}‖_F²`.
pub fn regularizer(g: &GroupElement) -> Result<f64> {
    Ok(g.norm_squared() + g.inverse()?.norm_squared())
}

/// Value, gradient and Hessian of the regularized objective
/// `F_{v,κ,ε}(g) = log‖π(g)v‖ + (ε/κ)·reg(g)`.
#[derive(Debug, Clone)]
pub struct RegularizedLocal {
    pub value: f64,
    pub log_norm: f64,
    pub gradient: MomentValue,
    pub hessian: HessianForm,
}

pub fn regularized_objective(rep: &dyn Representation, v: &CVector, g: &GroupElement, kappa: f64, eps: f64) -> Result<f64> {
    Ok(kempf_ness(rep, v, g)? + eps / kappa * regularizer(g)?)
}

/// Gradient and Hessian of `F_{v,κ,ε}` at `g`.
pub fn regularized_gradient_hessian(
    rep: &dyn Representation,
    v: &CVector,
    g: &GroupElement,
    kappa: f64,
    eps: f64,
) -> Result<RegularizedLocal> {
    check_nonzero(v)?;
    if !(kappa > 0.0 && eps > 0.0) {
        return Err(Error::InvalidInput("κ and ε must be positive".into()));
    }
    let spec = rep.group();
    let basis = TangentBasis::new(spec);
    let metric = Metric::of(rep);
    let loc = local(rep, &metric, &basis, &rep.apply(g, v)?)?;
    let c = eps / kappa;

    let mut grad = loc.m.clone();
    let mut hess = loc.hessian(&metric);
    let mut reg = 0.0;
    for (fi, blk) in g.blocks.iter().enumerate() {
        let a = blk.mul(&blk.adjoint()).to_dense();
        let a_inv = a.clone().try_inverse().ok_or_else(|| Error::Singular("group element block is singular".into()))?;
        reg += a.trace().re + a_inv.trace().re;
        let diff = &a - &a_inv;
        let p = &a + &a_inv;
        let idx: Vec<usize> = (0..basis.len()).filter(|&b| basis.factor_of(b) == fi).collect();
        let blocks: Vec<CMatrix> = idx.iter().map(|&b| basis.block(b).to_dense()).collect();
        for (i, &b) in idx.iter().enumerate() {
            grad[b] += 2.0 * c * (&diff * &blocks[i]).trace().re;
            let pb = &p * &blocks[i];
            for (j, &bc) in idx.iter().enumerate().skip(i) {
                let sym = ((&pb * &blocks[j]).trace() + (&p * &blocks[j] * &blocks[i]).trace()).re * 0.5;
                hess[(b, bc)] += 4.0 * c * sym;
                if bc != b {
                    hess[(bc, b)] += 4.0 * c * sym;
                }
            }
        }
    }
    Ok(RegularizedLocal {
        value: loc.log_norm + c * reg,
        log_norm: loc.log_norm,
        gradient: MomentValue::from_direction(basis.from_coords(&grad)),
        hessian: HessianForm { basis, matrix: hess },
    })
}

/// Bounds on `cap²(v)/‖v‖²` from `‖μ(v)‖_F`.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct DualityReport {
    pub norm_mu: f64,
    pub lower_bound: f64,
    pub upper_bound: f64,
    /// The raw lower bound `1 − ‖μ‖/γ` was negative and has been replaced by 0.
    pub lower_clamped: bool,
}

impl DualityReport {
    pub fn from_norm(norm_mu: f64, gamma: f64, weight_norm: f64) -> Result<Self> {
        if !(gamma > 0.0 && weight_norm > 0.0) {
            return Err(Error::InvalidInput("γ and N must be positive".into()));
        }
        let raw = 1.0 - norm_mu / gamma;
        let upper_bound = 1.0 - norm_mu * norm_mu / (4.0 * weight_norm * weight_norm);
        Ok(DualityReport { norm_mu, lower_bound: raw.max(0.0), upper_bound, lower_clamped: raw < 0.0 })
    }
}

/// `1 − ‖μ(v)‖/γ ≤ cap²(v)/‖v‖² ≤ 1 − ‖μ(v)‖²/(4N²)`.
pub fn duality_bounds(rep: &dyn Representation, v: &CVector, gamma: f64, weight_norm: f64) -> Result<DualityReport> {
    DualityReport::from_norm(moment_map(rep, v)?.norm(), gamma, weight_norm)
}

/// Target spectra `p = (p_1, …, p_k)`, one nonincreasing rational vector per `GL` factor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TargetSpectrum {
    parts: Vec<Vec<Rational64>>,
    ell: i64,
}

impl TargetSpectrum {
    pub fn new(parts: Vec<Vec<Rational64>>) -> Result<Self> {
        if parts.is_empty() || parts.iter().any(Vec::is_empty) {
            return Err(Error::InvalidInput("target spectrum needs a nonempty vector per factor".into()));
        }
        if parts.iter().any(|p| p.windows(2).any(|w| w[0] < w[1])) {
            return Err(Error::InvalidInput("target spectra must be nonincreasing".into()));
        }
        let ell = parts.iter().flatten().fold(1i64, |acc, q| lcm(acc, *q.denom()));
        Ok(TargetSpectrum { parts, ell })
    }

    /// Uniform target `(d_i/n_i, …, d_i/n_i)` per factor.
    pub fn uniform(sizes: &[usize], degrees: &[Rational64]) -> Result<Self> {
        if sizes.len() != degrees.len() {
            return Err(Error::InvalidInput("one degree per factor is required".into()));
        }
        Self::new(sizes.iter().zip(degrees).map(|(&n, &d)| vec![d / Rational64::from_integer(n as i64); n]).collect())
    }

    pub fn parts(&self) -> &[Vec<Rational64>] {
        &self.parts
    }

    /// Least common denominator `ℓ`.
    pub fn ell(&self) -> i64 {
        self.ell
    }

    /// `p_i` as floats.
    pub fn part_f64(&self, i: usize) -> Vec<f64> {
        self.parts[i].iter().map(|q| q.to_f64().unwrap_or(f64::NAN)).collect()
    }

    /// `p_i* = (−p_{i,n}, …, −p_{i,1})` as floats.
    pub fn p_star(&self, i: usize) -> Vec<f64> {
        self.part_f64(i).into_iter().rev().map(|x| -x).collect()
    }

    /// Checks that the target matches a representation of a product of `GL` factors
    /// and, for homogeneous actions, has nonnegative entries summing to the degree.
    pub fn check(&self, rep: &dyn Representation) -> Result<()> {
        let spec = rep.group();
        if spec.num_factors() != self.parts.len() {
            return Err(Error::InvalidInput(format!(
                "target has {} parts, group has {} factors",
                self.parts.len(),
                spec.num_factors()
            )));
        }
        for (i, (f, p)) in spec.factors().iter().zip(&self.parts).enumerate() {
            if f.kind.is_special() || f.kind.is_torus() {
                return Err(Error::InvalidInput("p-scaling needs GL factors".into()));
            }
            if p.len() != f.n {
                return Err(Error::InvalidInput(format!("target part {i} has length {}, expected {}", p.len(), f.n)));
            }
        }
        if let Some(d) = rep.degrees() {
            for (i, (p, di)) in self.parts.iter().zip(d).enumerate() {
                if p.iter().any(|x| *x < Rational64::zero()) || p.iter().sum::<Rational64>() != di {
                    return Err(Error::InvalidInput(format!(
                        "target part {i} must be nonnegative and sum to the degree {di}"
                    )));
                }
            }
        }
        Ok(())
    }

    /// `‖spec(μ) − p‖₂` over all factors.
    pub fn distance(&self, mu: &MomentValue) -> Result<f64> {
        let spectra = mu.spectra()?;
        Ok(spectra
            .iter()
            .enumerate()
            .map(|(i, s)| s.iter().zip(self.part_f64(i)).map(|(a, b)| (a - b).powi(2)).sum::<f64>())
            .sum::<f64>()
            .sqrt())
    }
}

/// `∇F_{v,p}(g) = μ(π(g)v) + k p* k†`, where `g = kb` blockwise.
pub fn p_shifted_gradient(rep: &dyn Representation, v: &CVector, g: &GroupElement, p: &TargetSpectrum) -> Result<MomentValue> {
    p.check(rep)?;
    let mut mu = moment_map_at(rep, v, g)?;
    for (i, (blk, m)) in g.blocks.iter().zip(mu.blocks.iter_mut()).enumerate() {
        let (k, _) = qr_decompose(&blk.to_dense())?;
        let d = CMatrix::from_diagonal(&CVector::from_iterator(k.nrows(), p.p_star(i).into_iter().map(|x| c64(x, 0.0))));
        let shift = &k * d * k.adjoint();
        *m = Block::Dense(m.to_dense() + shift);
    }
    Ok(mu)
}

/// `F_{v,p}(g) = log‖π(g)v‖ + Σ_i Σ_j p*_{i,j} log|b_{i,jj}|` with `g = kb` blockwise.
///
/// The second term equals `(1/ℓ)·log‖π_{λ*}(g)v_{λ*}‖` for the lowest weight
/// vector of the dual irreducible, so this is the shifted objective without
/// building the auxiliary representation.
pub fn p_shifted_objective(rep: &dyn Representation, v: &CVector, g: &GroupElement, p: &TargetSpectrum) -> Result<f64> {
    p.check(rep)?;
    let mut value = kempf_ness(rep, v, g)?;
    for (i, blk) in g.blocks.iter().enumerate() {
        let (_, b) = qr_decompose(&blk.to_dense())?;
        value += p.p_star(i).iter().enumerate().map(|(j, x)| x * b[(j, j)].norm().ln()).sum::<f64>();
    }
    Ok(value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{FactorKind, GroupKind};
    use crate::reps::{operator_scaling_rep, torus_rep};

    fn e11() -> CVector {
        CVector::from_vec(vec![c64(1.0, 0.0), c64(0.0, 0.0), c64(0.0, 0.0), c64(0.0, 0.0)])
    }

    #[test]
    fn torus_kempf_ness_closed_form() {
        let rep = torus_rep(&[vec![1], vec![-1]]).unwrap();
        let v = CVector::from_vec(vec![c64(1.0, 0.0), c64(1.0, 0.0)]);
        let t: f64 = 0.3;
        let g = GroupElement { blocks: vec![Block::Diag(CVector::from_vec(vec![c64(t.exp(), 0.0)]))] };
        let want = 0.5 * ((2.0 * t).exp() + (-2.0 * t).exp()).ln();
        assert!((kempf_ness(rep.as_ref(), &v, &g).unwrap() - want).abs() < 1e-14);
        assert!(kempf_ness(rep.as_ref(), &CVector::zeros(2), &g).is_err());
    }

    #[test]
    fn left_right_moment_maps() {
        let rep = operator_scaling_rep(2, 1, GroupKind::Sl).unwrap();
        let mu = moment_map(rep.as_ref(), &e11()).unwrap();
        assert!((mu.norm() - 1.0).abs() < 1e-12);
        for b in &mu.blocks {
            let d = b.to_dense();
            assert!((d[(0, 0)].re - 0.5).abs() < 1e-12 && (d[(1, 1)].re + 0.5).abs() < 1e-12);
        }
        let id = CVector::from_vec(vec![c64(1.0, 0.0), c64(0.0, 0.0), c64(0.0, 0.0), c64(1.0, 0.0)]);
        assert!(moment_map(rep.as_ref(), &id).unwrap().norm() < 1e-12);

        let s: f64 = 3.0;
        let g = GroupElement {
            blocks: vec![
                Block::Dense(CMatrix::from_diagonal(&CVector::from_vec(vec![c64(s, 0.0), c64(1.0 / s, 0.0)]))),
                Block::identity(FactorKind::Sl, 2),
            ],
        };
        assert!((kempf_ness(rep.as_ref(), &e11(), &g).unwrap() - s.ln()).abs() < 1e-14);
    }

    #[test]
    fn torus_moment_is_convex_combination() {
        let rep = torus_rep(&[vec![1, 0], vec![0, 1]]).unwrap();
        let v = CVector::from_vec(vec![c64(1.0, 0.0), c64(1.0, 0.0)]);
        let mu = moment_map(rep.as_ref(), &v).unwrap();
        let d = mu.blocks[0].diagonal();
        assert!((d[0].re - 0.5).abs() < 1e-14 && (d[1].re - 0.5).abs() < 1e-14);
    }

    #[test]
    fn hessian_examples() {
        let one = torus_rep(&[vec![2]]).unwrap();
        let v1 = CVector::from_vec(vec![c64(1.0, 0.0)]);
        let h = hessian(one.as_ref(), &v1, &GroupElement::identity(one.group())).unwrap();
        assert!(h.matrix.norm() < 1e-14);

        let rep = torus_rep(&[vec![1], vec![-1]]).unwrap();
        let v = CVector::from_vec(vec![c64(1.0, 0.0), c64(1.0, 0.0)]);
        let h = hessian(rep.as_ref(), &v, &GroupElement::identity(rep.group())).unwrap();
        assert!((h.matrix[(0, 0)] - 2.0).abs() < 1e-14);
    }

    #[test]
    fn regularizer_gradient_example() {
        let rep = operator_scaling_rep(2, 1, GroupKind::Sl).unwrap();
        let g = GroupElement {
            blocks: vec![
                Block::Dense(CMatrix::from_diagonal(&CVector::from_vec(vec![c64(2.0, 0.0), c64(0.5, 0.0)]))),
                Block::identity(FactorKind::Sl, 2),
            ],
        };
        let id = CVector::from_vec(vec![c64(1.0, 0.0), c64(0.0, 0.0), c64(0.0, 0.0), c64(1.0, 0.0)]);
        let (kappa, eps) = (4.0, 0.1);
        let with = regularized_gradient_hessian(rep.as_ref(), &id, &g, kappa, eps).unwrap();
        let mu = moment_map_at(rep.as_ref(), &id, &g).unwrap();
        let diff = with.gradient.blocks[0].to_dense() - mu.blocks[0].to_dense();
        let c = 2.0 * eps / kappa;
        assert!((diff[(0, 0)].re - c * (4.0 - 0.25)).abs() < 1e-12);
        assert!((diff[(1, 1)].re - c * (0.25 - 4.0)).abs() < 1e-12);
        assert!((regularizer(&GroupElement::identity(rep.group())).unwrap() - 8.0).abs() < 1e-14);
    }

    #[test]
    fn duality_examples() {
        let r = DualityReport::from_norm(0.0, 0.5, 1.0).unwrap();
        assert_eq!((r.lower_bound, r.upper_bound), (1.0, 1.0));
        let r = DualityReport::from_norm(0.5, 0.5, 1.0).unwrap();
        assert_eq!(r.lower_bound, 0.0);
        let r = DualityReport::from_norm(1.0, 0.5, 2f64.sqrt()).unwrap();
        assert!(r.lower_clamped && r.lower_bound == 0.0);
        assert!((r.upper_bound - 7.0 / 8.0).abs() < 1e-15);
    }

    #[test]
    fn p_shift_vanishes_at_reversed_spectrum() {
        let rep = operator_scaling_rep(2, 1, GroupKind::Gl).unwrap();
        let v = CVector::from_vec(vec![c64(0.5f64.sqrt(), 0.0), c64(0.0, 0.0), c64(0.0, 0.0), c64(0.5f64.sqrt(), 0.0)]);
        let half = Rational64::new(1, 2);
        let p = TargetSpectrum::new(vec![vec![half, half], vec![half, half]]).unwrap();
        let grad = p_shifted_gradient(rep.as_ref(), &v, &GroupElement::identity(rep.group()), &p).unwrap();
        assert!(grad.norm() < 1e-12);
        assert_eq!(p.ell(), 2);
        assert!(TargetSpectrum::new(vec![vec![Rational64::new(0, 1), Rational64::new(1, 1)]]).is_err());
    }
}
