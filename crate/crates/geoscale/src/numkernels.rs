//! Dense kernels shared by the solvers: Hermitian exponential, QR with a
//! positive diagonal, Wolfe's min-norm point, and the ball-constrained
//! convex quadratic subproblem of the trust-region method.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::{CMatrix, C64};

const HERMITIAN_TOL: f64 = 1e-10;

/// Largest entry of `|a - a†|`.
pub fn hermitian_defect(a: &CMatrix) -> f64 {
    let n = a.nrows();
    let mut worst: f64 = 0.0;
    for i in 0..n {
        for j in i..n {
            worst = worst.max((a[(i, j)] - a[(j, i)].conj()).norm());
        }
    }
    worst
}

fn check_hermitian(a: &CMatrix, what: &str) -> Result<()> {
    if !a.is_square() {
        return Err(Error::ContractViolation(format!("{what}: matrix is not square")));
    }
    let scale = 1.0f64.max(a.iter().fold(0.0f64, |m, z| m.max(z.norm())));
    if hermitian_defect(a) > HERMITIAN_TOL * scale {
        return Err(Error::ContractViolation(format!("{what}: matrix is not Hermitian")));
    }
    Ok(())
}

/// Spectral decomposition `(eigenvalues, eigenvectors)` of a Hermitian matrix.
pub fn herm_eigen(a: &CMatrix) -> Result<(DVector<f64>, CMatrix)> {
    check_hermitian(a, "herm_eigen")?;
    let sym = (a + a.adjoint()).scale(0.5);
    let eig = sym.symmetric_eigen();
    Ok((eig.eigenvalues, eig.eigenvectors))
}

/// `e^H` for Hermitian `H`, computed from its eigendecomposition.
pub fn herm_exp(h: &CMatrix) -> Result<CMatrix> {
    herm_fn(h, f64::exp)
}

/// Applies a real function to the spectrum of a Hermitian matrix.
pub fn herm_fn(h: &CMatrix, f: impl Fn(f64) -> f64) -> Result<CMatrix> {
    let (vals, vecs) = herm_eigen(h)?;
    let mut scaled = vecs.clone();
    for (j, lam) in vals.iter().enumerate() {
        let s = f(*lam);
        scaled.column_mut(j).scale_mut(s);
    }
    Ok(scaled * vecs.adjoint())
}

/// QR factorization `g = k·b` with `k` unitary and `b` upper triangular with a
/// positive real diagonal.
pub fn qr_decompose(g: &CMatrix) -> Result<(CMatrix, CMatrix)> {
    if !g.is_square() {
        return Err(Error::InvalidInput("qr_decompose: matrix is not square".into()));
    }
    let n = g.nrows();
    let sv = g.clone().singular_values();
    let smax = sv.max();
    let smin = sv.min();
    if !(smin > 1e-12 * smax) || !smin.is_finite() {
        return Err(Error::Singular(format!(
            "qr_decompose: condition {smax:e}/{smin:e} exceeds 1e12"
        )));
    }
    let qr = g.clone().qr();
    let mut k = qr.q();
    let mut b = qr.r();
    for i in 0..n {
        let d = b[(i, i)];
        let phase = d / d.norm();
        for r in 0..n {
            k[(r, i)] *= phase;
        }
        for j in 0..n {
            b[(i, j)] *= phase.conj();
        }
        b[(i, i)] = C64::new(b[(i, i)].re, 0.0);
    }
    Ok((k, b))
}

/// Result of [`min_norm_point`].
#[derive(Debug, Clone)]
pub struct MinNormPoint {
    pub point: DVector<f64>,
    pub norm: f64,
    /// Convex weights of the input points reproducing `point`.
    pub weights: Vec<f64>,
}

/// Minimum-norm point of the convex hull of `points` (Wolfe's algorithm).
pub fn min_norm_point(points: &[DVector<f64>]) -> Result<MinNormPoint> {
    let Some(first) = points.first() else {
        return Err(Error::InvalidInput("min_norm_point: empty point set".into()));
    };
    let dim = first.len();
    if points.iter().any(|p| p.len() != dim) {
        return Err(Error::InvalidInput("min_norm_point: dimension mismatch".into()));
    }
    let scale = points.iter().map(|p| p.norm_squared()).fold(1e-300, f64::max);
    let z1 = 1e-12 * scale;
    let z2 = 1e-10;

    let start = (0..points.len())
        .min_by(|&a, &b| points[a].norm_squared().total_cmp(&points[b].norm_squared()))
        .unwrap();
    let mut active: Vec<usize> = vec![start];
    let mut lambda: Vec<f64> = vec![1.0];
    let mut x = points[start].clone();

    for _major in 0..(50 * points.len() + 100) {
        let xx = x.norm_squared();
        if xx <= z1 * 1e-6 {
            break;
        }
        let (j, xp) = (0..points.len())
            .map(|j| (j, x.dot(&points[j])))
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .unwrap();
        if xx - xp <= z1 || active.contains(&j) {
            break;
        }
        active.push(j);
        lambda.push(0.0);

        for _minor in 0..(points.len() + 10) {
            let alpha = affine_minimizer(points, &active);
            if alpha.iter().all(|&a| a > z2) {
                lambda = alpha;
                break;
            }
            let mut theta = 1.0f64;
            for (l, a) in lambda.iter().zip(&alpha) {
                if *a <= z2 {
                    let denom = l - a;
                    if denom > 0.0 {
                        theta = theta.min(l / denom);
                    }
                }
            }
            for (l, a) in lambda.iter_mut().zip(&alpha) {
                *l += theta * (a - *l);
            }
            let mut keep_active = Vec::with_capacity(active.len());
            let mut keep_lambda = Vec::with_capacity(active.len());
            for (idx, l) in active.iter().zip(&lambda) {
                if *l > z2 {
                    keep_active.push(*idx);
                    keep_lambda.push(*l);
                }
            }
            if keep_active.is_empty() {
                keep_active.push(active[0]);
                keep_lambda.push(1.0);
            }
            active = keep_active;
            lambda = keep_lambda;
            let total: f64 = lambda.iter().sum();
            lambda.iter_mut().for_each(|l| *l /= total);
        }
        x = combine(points, &active, &lambda, dim);
    }

    let mut weights = vec![0.0; points.len()];
    for (idx, l) in active.iter().zip(&lambda) {
        weights[*idx] += l.max(0.0);
    }
    let total: f64 = weights.iter().sum();
    weights.iter_mut().for_each(|w| *w /= total);
    let point = combine(points, &(0..points.len()).collect::<Vec<_>>(), &weights, dim);
    let norm = point.norm();
    Ok(MinNormPoint { point, norm, weights })
}

fn combine(points: &[DVector<f64>], idx: &[usize], w: &[f64], dim: usize) -> DVector<f64> {
    let mut x = DVector::zeros(dim);
    for (i, l) in idx.iter().zip(w) {
        if *l != 0.0 {
            x.axpy(*l, &points[*i], 1.0);
        }
    }
    x
}

/// Affine combination of `points[active]` of least norm, as barycentric weights.
fn affine_minimizer(points: &[DVector<f64>], active: &[usize]) -> Vec<f64> {
    let k = active.len();
    let mut kkt = DMatrix::<f64>::zeros(k + 1, k + 1);
    for a in 0..k {
        for b in 0..k {
            kkt[(a, b)] = points[active[a]].dot(&points[active[b]]);
        }
        kkt[(a, k)] = 1.0;
        kkt[(k, a)] = 1.0;
    }
    let mut rhs = DVector::<f64>::zeros(k + 1);
    rhs[k] = 1.0;
    let sol = match kkt.clone().lu().solve(&rhs) {
        Some(s) if s.iter().all(|z| z.is_finite()) => s,
        _ => kkt.svd(true, true).solve(&rhs, 1e-13).unwrap_or_else(|_| {
            let mut fallback = DVector::zeros(k + 1);
            fallback[0] = 1.0;
            fallback
        }),
    };
    sol.rows(0, k).iter().copied().collect()
}

/// Trust-region subproblem `min W·H + (1/2e) Hᵀ Q H` subject to `‖H‖ ≤ radius`.
#[derive(Debug, Clone)]
pub struct TrustRegionProblem {
    pub linear: DVector<f64>,
    pub quadratic: DMatrix<f64>,
    pub radius: f64,
}

impl TrustRegionProblem {
    /// Objective value `W·H + (1/2e) HᵀQH`.
    pub fn objective(&self, h: &DVector<f64>) -> f64 {
        self.linear.dot(h) + (h.dot(&(&self.quadratic * h))) / (2.0 * std::f64::consts::E)
    }
}

/// Solves [`TrustRegionProblem`] via an eigendecomposition of `Q` and
/// bisection on the Lagrange multiplier of the ball constraint.
pub fn ball_constrained_qp(prob: &TrustRegionProblem) -> Result<DVector<f64>> {
    let q = &prob.quadratic;
    let d = prob.linear.len();
    if q.nrows() != d || q.ncols() != d {
        return Err(Error::InvalidInput("ball_constrained_qp: dimension mismatch".into()));
    }
    if !(prob.radius > 0.0) {
        return Err(Error::InvalidInput("ball_constrained_qp: radius must be positive".into()));
    }
    let qscale = 1.0f64.max(q.amax());
    if (q - q.transpose()).amax() > 1e-10 * qscale {
        return Err(Error::ContractViolation("ball_constrained_qp: Q not symmetric".into()));
    }
    if d == 0 {
        return Ok(DVector::zeros(0));
    }
    let sym = (q + q.transpose()).scale(0.5);
    let eig = sym.symmetric_eigen();
    if eig.eigenvalues.min() < -1e-8 * qscale {
        return Err(Error::ContractViolation(format!(
            "ball_constrained_qp: Q has eigenvalue {:e} < 0",
            eig.eigenvalues.min()
        )));
    }
    let e = std::f64::consts::E;
    let a: Vec<f64> = eig.eigenvalues.iter().map(|l| l.max(0.0) / e).collect();
    let wt = eig.eigenvectors.transpose() * &prob.linear;
    let r = prob.radius;
    let wnorm = wt.norm();
    if wnorm == 0.0 {
        return Ok(DVector::zeros(d));
    }

    let amax = a.iter().cloned().fold(0.0, f64::max);
    let null_tol = 1e-13 * amax.max(1e-300);
    let step = |mu: f64| -> DVector<f64> {
        DVector::from_iterator(
            d,
            a.iter().zip(wt.iter()).map(|(ai, wi)| {
                let denom = ai + mu;
                if denom > null_tol {
                    -wi / denom
                } else {
                    0.0
                }
            }),
        )
    };

    let unbounded = a.iter().zip(wt.iter()).any(|(ai, wi)| *ai <= null_tol && wi.abs() > 0.0);
    if !unbounded {
        let interior = step(0.0);
        if interior.norm() <= r {
            return Ok(&eig.eigenvectors * interior);
        }
    }
    // ‖step(μ)‖ decreases in μ and is at most r at μ = ‖W‖/r.
    let mut lo = 0.0f64;
    let mut hi = wnorm / r;
    for _ in 0..300 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let norm = DVector::from_iterator(
            d,
            a.iter().zip(wt.iter()).map(|(ai, wi)| wi / (ai + mid)),
        )
        .norm();
        if norm > r {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let mut ht = DVector::from_iterator(d, a.iter().zip(wt.iter()).map(|(ai, wi)| -wi / (ai + hi)));
    let nrm = ht.norm();
    if nrm > r {
        ht.scale_mut(r / nrm);
    }
    Ok(&eig.eigenvectors * ht)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::c64;
    use approx::assert_relative_eq;

    fn cm(rows: usize, data: &[(f64, f64)]) -> CMatrix {
        CMatrix::from_row_iterator(rows, data.len() / rows, data.iter().map(|&(a, b)| c64(a, b)))
    }

    #[test]
    fn exp_of_zero_and_diagonal() {
        let z = CMatrix::zeros(2, 2);
        assert_relative_eq!((herm_exp(&z).unwrap() - CMatrix::identity(2, 2)).norm(), 0.0, epsilon = 1e-14);
        let d = cm(2, &[(1.0, 0.0), (0.0, 0.0), (0.0, 0.0), (-1.0, 0.0)]);
        let e = herm_exp(&d).unwrap();
        assert_relative_eq!(e[(0, 0)].re, 1f64.exp(), epsilon = 1e-13);
        assert_relative_eq!(e[(1, 1)].re, (-1f64).exp(), epsilon = 1e-13);
    }

    #[test]
    fn exp_of_swap_is_cosh_sinh() {
        let x = cm(2, &[(0.0, 0.0), (1.0, 0.0), (1.0, 0.0), (0.0, 0.0)]);
        let e = herm_exp(&x).unwrap();
        assert_relative_eq!(e[(0, 0)].re, 1f64.cosh(), epsilon = 1e-13);
        assert_relative_eq!(e[(0, 1)].re, 1f64.sinh(), epsilon = 1e-13);
        assert_relative_eq!(e[(1, 0)].re, 1f64.sinh(), epsilon = 1e-13);
    }

    #[test]
    fn exp_rejects_non_hermitian() {
        let x = cm(2, &[(0.0, 0.0), (1.0, 0.0), (0.0, 0.0), (0.0, 0.0)]);
        assert!(matches!(herm_exp(&x), Err(Error::ContractViolation(_))));
    }

    #[test]
    fn qr_examples() {
        let (k, b) = qr_decompose(&CMatrix::identity(2, 2)).unwrap();
        assert!((k - CMatrix::identity(2, 2)).norm() < 1e-12);
        assert!((b - CMatrix::identity(2, 2)).norm() < 1e-12);

        let g = cm(2, &[(2.0, 0.0), (0.0, 0.0), (0.0, 0.0), (3.0, 0.0)]);
        let (k, b) = qr_decompose(&g).unwrap();
        assert!((k - CMatrix::identity(2, 2)).norm() < 1e-12);
        assert!((b - g).norm() < 1e-12);

        let swap = cm(2, &[(0.0, 0.0), (1.0, 0.0), (1.0, 0.0), (0.0, 0.0)]);
        let (k, b) = qr_decompose(&swap).unwrap();
        assert!((&k - &swap).norm() < 1e-12);
        assert!((b - CMatrix::identity(2, 2)).norm() < 1e-12);
    }

    #[test]
    fn qr_complex_phases() {
        let g = cm(2, &[(0.0, 1.0), (1.0, 1.0), (-2.0, 0.5), (0.3, -1.0)]);
        let (k, b) = qr_decompose(&g).unwrap();
        assert!((&k * &b - &g).norm() < 1e-12);
        assert!((k.adjoint() * &k - CMatrix::identity(2, 2)).norm() < 1e-12);
        for i in 0..2 {
            assert!(b[(i, i)].re > 0.0 && b[(i, i)].im == 0.0);
        }
        assert!(b[(1, 0)].norm() < 1e-14);
    }

    #[test]
    fn qr_singular() {
        let g = cm(2, &[(1.0, 0.0), (2.0, 0.0), (2.0, 0.0), (4.0, 0.0)]);
        assert!(matches!(qr_decompose(&g), Err(Error::Singular(_))));
    }

    fn pts(v: &[&[f64]]) -> Vec<DVector<f64>> {
        v.iter().map(|p| DVector::from_row_slice(p)).collect()
    }

    #[test]
    fn min_norm_examples() {
        let r = min_norm_point(&pts(&[&[1.0, 0.0], &[0.0, 1.0]])).unwrap();
        assert_relative_eq!(r.norm, 0.5f64.sqrt(), epsilon = 1e-12);
        assert_relative_eq!(r.point[0], 0.5, epsilon = 1e-12);
        let r = min_norm_point(&pts(&[&[1.0, 1.0], &[-1.0, -1.0]])).unwrap();
        assert!(r.norm < 1e-12);
        let r = min_norm_point(&pts(&[&[2.0, 0.0]])).unwrap();
        assert_relative_eq!(r.norm, 2.0);
        assert!(min_norm_point(&[]).is_err());
        assert!(min_norm_point(&pts(&[&[1.0], &[1.0, 2.0]])).is_err());
    }

    fn tr(w: &[f64], q: &[f64], r: f64) -> TrustRegionProblem {
        let d = w.len();
        TrustRegionProblem {
            linear: DVector::from_row_slice(w),
            quadratic: DMatrix::from_row_slice(d, d, q),
            radius: r,
        }
    }

    #[test]
    fn qp_examples() {
        let e = std::f64::consts::E;
        let h = ball_constrained_qp(&tr(&[-1.0, 0.0], &[1.0, 0.0, 0.0, 1.0], 10.0)).unwrap();
        assert_relative_eq!(h[0], e, epsilon = 1e-12);
        assert_relative_eq!(h[1], 0.0, epsilon = 1e-12);
        let h = ball_constrained_qp(&tr(&[-1.0, 0.0], &[0.0; 4], 1.0)).unwrap();
        assert_relative_eq!(h[0], 1.0, epsilon = 1e-12);
        let h = ball_constrained_qp(&tr(&[0.0, 0.0], &[2.0, 1.0, 1.0, 3.0], 1.0)).unwrap();
        assert_eq!(h.norm(), 0.0);
    }

    #[test]
    fn qp_rejects_indefinite() {
        let r = ball_constrained_qp(&tr(&[1.0, 0.0], &[-1.0, 0.0, 0.0, 1.0], 1.0));
        assert!(matches!(r, Err(Error::ContractViolation(_))));
    }
}
