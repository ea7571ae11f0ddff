//! Irreducible polynomial representations of `GL(n)` in the Gelfand–Tsetlin
//! basis.
//!
//! Patterns are enumerated in decreasing lexicographic order of the rows read
//! from the top (row `n`, which equals `λ`) downwards. Lie algebra matrices
//! of the generators `E_{i,i}`, `E_{i,i±1}` come from Molev's formulas in
//! exact rational arithmetic; the remaining `E_{i,j}` are iterated
//! commutators. Group elements act through an `L·D·U` factorization.
//!
//! [`GtIrrep`] works in the raw basis `ξ_Λ`, which is orthogonal but not
//! orthonormal for the invariant inner product; [`gt_orthonormal_rep`]
//! rescales to `ξ_Λ/‖ξ_Λ‖` so that the invariant inner product becomes the
//! coordinate one.

mod exact;

use std::collections::HashMap;
use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
use num::{BigRational, ToPrimitive};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::group::{FactorKind, GroupElement, GroupSpec, LieDirection};
use crate::reps::{check_direction_shape, check_vector, dedup, direct_sum, Rep, Representation, Structure, Weight};
use crate::{c64, CMatrix, CVector, C64};

use exact::QMat;

/// Nonincreasing nonnegative integer vector `λ`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct HighestWeight(Vec<i64>);

impl HighestWeight {
    pub fn new(lambda: Vec<i64>) -> Result<Self> {
        if lambda.is_empty() {
            return Err(Error::InvalidInput("highest weight must be nonempty".into()));
        }
        if lambda.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidInput(format!("highest weight {lambda:?} is not nonincreasing")));
        }
        if *lambda.last().unwrap() < 0 {
            return Err(Error::InvalidInput(format!("highest weight {lambda:?} has a negative entry")));
        }
        Ok(HighestWeight(lambda))
    }

    pub fn as_slice(&self) -> &[i64] {
        &self.0
    }

    pub fn n(&self) -> usize {
        self.0.len()
    }

    /// Degree `|λ| = Σ λ_j`.
    pub fn degree(&self) -> i64 {
        self.0.iter().sum()
    }
}

/// Triangular array `λ_{i,j}`, `1 ≤ j ≤ i ≤ n`, stored by rows (row `i` has `i` entries).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GtPattern {
    rows: Vec<Vec<i64>>,
}

impl GtPattern {
    pub fn n(&self) -> usize {
        self.rows.len()
    }

    /// `λ_{i,j}` with 1-based indices.
    pub fn entry(&self, i: usize, j: usize) -> i64 {
        self.rows[i - 1][j - 1]
    }

    /// `l_{i,j} = λ_{i,j} − j + 1`.
    pub fn l(&self, i: usize, j: usize) -> i64 {
        self.entry(i, j) - j as i64 + 1
    }

    pub fn rows(&self) -> &[Vec<i64>] {
        &self.rows
    }

    fn row_sum(&self, i: usize) -> i64 {
        if i == 0 {
            0
        } else {
            self.rows[i - 1].iter().sum()
        }
    }

    /// Weight of `ξ_Λ`: eigenvalues of `Π(E_{i,i})`.
    pub fn weight(&self) -> Vec<i64> {
        (1..=self.n()).map(|i| self.row_sum(i) - self.row_sum(i - 1)).collect()
    }

    /// Checks the betweenness conditions `λ_{i,j} ≥ λ_{i−1,j} ≥ λ_{i,j+1}`.
    pub fn is_valid(&self) -> bool {
        let n = self.n();
        (2..=n).all(|i| {
            (1..i).all(|j| self.entry(i, j) >= self.entry(i - 1, j) && self.entry(i - 1, j) >= self.entry(i, j + 1))
        })
    }

    fn shifted(&self, i: usize, j: usize, delta: i64) -> GtPattern {
        let mut p = self.clone();
        p.rows[i - 1][j - 1] += delta;
        p
    }

    /// Reading order used for sorting: row `n` first.
    fn key(&self) -> Vec<i64> {
        self.rows.iter().rev().flatten().copied().collect()
    }
}

/// All Gelfand–Tsetlin patterns with top row `λ`, in decreasing lexicographic order.
pub fn enumerate_patterns(lambda: &HighestWeight) -> Vec<GtPattern> {
    let n = lambda.n();
    let mut out = Vec::new();
    let mut rows: Vec<Vec<i64>> = vec![Vec::new(); n];
    rows[n - 1] = lambda.0.clone();
    fill(&mut rows, n - 1, &mut out);
    out.sort_by_key(|p| std::cmp::Reverse(p.key()));
    out
}

fn fill(rows: &mut Vec<Vec<i64>>, top: usize, out: &mut Vec<GtPattern>) {
    if top == 0 {
        out.push(GtPattern { rows: rows.clone() });
        return;
    }
    let upper = rows[top].clone();
    let len = top;
    let mut cur = vec![0i64; len];
    choose(&upper, 0, &mut cur, &mut |row| {
        rows[top - 1] = row.to_vec();
        fill(rows, top - 1, out);
    });
}

fn choose(upper: &[i64], j: usize, cur: &mut Vec<i64>, emit: &mut dyn FnMut(&[i64])) {
    if j == cur.len() {
        emit(cur);
        return;
    }
    for x in (upper[j + 1]..=upper[j]).rev() {
        cur[j] = x;
        choose(upper, j + 1, cur, emit);
    }
}

/// An irreducible representation `π_λ` of `GL(n)` in the raw GT basis.
#[derive(Debug, Clone)]
pub struct GtIrrep {
    lambda: HighestWeight,
    group: GroupSpec,
    patterns: Vec<GtPattern>,
    exact_lie: Vec<QMat>,
    lie: Vec<DMatrix<f64>>,
    gram_exact: Vec<BigRational>,
    gram: DVector<f64>,
    weights: Vec<Vec<i64>>,
}

impl GtIrrep {
    pub fn new(lambda: HighestWeight) -> Result<Self> {
        let n = lambda.n();
        let patterns = enumerate_patterns(&lambda);
        let index: HashMap<GtPattern, usize> = patterns.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
        let m = patterns.len();
        let mut exact_lie: Vec<Option<QMat>> = vec![None; n * n];
        let idx = |i: usize, j: usize| (i - 1) * n + (j - 1);

        for i in 1..=n {
            let mut d = QMat::zeros(m);
            for (c, p) in patterns.iter().enumerate() {
                d.set(c, c, BigRational::from_integer((p.row_sum(i) - p.row_sum(i - 1)).into()));
            }
            exact_lie[idx(i, i)] = Some(d);
        }
        for i in 1..n {
            let mut up = QMat::zeros(m);
            let mut down = QMat::zeros(m);
            for (c, p) in patterns.iter().enumerate() {
                for j in 1..=i {
                    let lij = p.l(i, j);
                    let denom: i64 = (1..=i).filter(|&k| k != j).map(|k| lij - p.l(i, k)).filter(|&x| x != 0).product();
                    if let Some(&r) = index.get(&p.shifted(i, j, 1)) {
                        let num: i64 = (1..=i + 1).map(|k| lij - p.l(i + 1, k)).product();
                        up.set(r, c, -BigRational::new(num.into(), denom.into()));
                    }
                    if let Some(&r) = index.get(&p.shifted(i, j, -1)) {
                        let num: i64 = (1..i).map(|k| lij - p.l(i - 1, k)).product();
                        down.set(r, c, BigRational::new(num.into(), denom.into()));
                    }
                }
            }
            exact_lie[idx(i, i + 1)] = Some(up);
            exact_lie[idx(i + 1, i)] = Some(down);
        }
        for gap in 2..n {
            for i in 1..=n - gap {
                let j = i + gap;
                let a = exact_lie[idx(i, j - 1)].clone().unwrap();
                let b = exact_lie[idx(j - 1, j)].clone().unwrap();
                exact_lie[idx(i, j)] = Some(a.commutator(&b));
                let a = exact_lie[idx(j, i + 1)].clone().unwrap();
                let b = exact_lie[idx(i + 1, i)].clone().unwrap();
                exact_lie[idx(j, i)] = Some(a.commutator(&b));
            }
        }
        let exact_lie: Vec<QMat> = exact_lie.into_iter().map(Option::unwrap).collect();
        let lie = exact_lie.iter().map(QMat::to_f64).collect();
        let gram_exact: Vec<BigRational> = patterns.iter().map(gt_norm_squared).collect();
        let gram = DVector::from_iterator(m, gram_exact.iter().map(|q| q.to_f64().unwrap_or(f64::INFINITY)));
        let weights = patterns.iter().map(GtPattern::weight).collect();
        let group = GroupSpec::new([(FactorKind::Gl, n)])?;
        Ok(GtIrrep { lambda, group, patterns, exact_lie, lie, gram_exact, gram, weights })
    }

    pub fn lambda(&self) -> &HighestWeight {
        &self.lambda
    }

    pub fn patterns(&self) -> &[GtPattern] {
        &self.patterns
    }

    pub fn n(&self) -> usize {
        self.lambda.n()
    }

    /// Index of the highest weight pattern `λ_{i,j} = λ_j` (always first).
    pub fn highest_weight_index(&self) -> usize {
        0
    }

    /// Exact matrix of `Π(E_{i,j})` (1-based indices), as a dense rational table.
    pub fn lie_matrix_exact(&self, i: usize, j: usize) -> Result<Vec<Vec<BigRational>>> {
        self.check_indices(i, j)?;
        Ok(self.exact_lie[(i - 1) * self.n() + (j - 1)].to_dense())
    }

    /// Exact squared norms `‖ξ_Λ‖²`.
    pub fn gram_exact(&self) -> &[BigRational] {
        &self.gram_exact
    }

    fn check_indices(&self, i: usize, j: usize) -> Result<()> {
        let n = self.n();
        if i == 0 || j == 0 || i > n || j > n {
            return Err(Error::InvalidInput(format!("generator index ({i}, {j}) outside 1..={n}")));
        }
        Ok(())
    }

    fn lie_f64(&self, i: usize, j: usize) -> &DMatrix<f64> {
        &self.lie[(i - 1) * self.n() + (j - 1)]
    }

    /// `Π(X) = Σ X_{ij} Π(E_{ij})` for a complex matrix `X`.
    pub fn lie_of(&self, x: &CMatrix) -> CMatrix {
        let n = self.n();
        let m = self.patterns.len();
        let mut out = CMatrix::zeros(m, m);
        for i in 1..=n {
            for j in 1..=n {
                let c = x[(i - 1, j - 1)];
                if c.norm() == 0.0 {
                    continue;
                }
                let e = self.lie_f64(i, j);
                for (idx, val) in e.iter().enumerate() {
                    if *val != 0.0 {
                        out[(idx % m, idx / m)] += c * *val;
                    }
                }
            }
        }
        out
    }

    /// Matrix of `π_λ(g)` in the raw GT basis.
    pub fn group_matrix(&self, g: &CMatrix) -> Result<CMatrix> {
        let n = self.n();
        if g.nrows() != n || g.ncols() != n {
            return Err(Error::InvalidInput("group element has the wrong size".into()));
        }
        if let Some(m) = self.ldu_matrix(g) {
            return Ok(m);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(0x6754);
        for _ in 0..8 {
            let k = crate::sample::unitary(n, &mut rng);
            let kg = &k * g;
            if let (Some(a), Some(b)) = (self.ldu_matrix(&k.adjoint()), self.ldu_matrix(&kg)) {
                return Ok(a * b);
            }
        }
        Err(Error::Degenerate("every LDU retry hit a vanishing leading minor".into()))
    }

    fn ldu_matrix(&self, g: &CMatrix) -> Option<CMatrix> {
        let n = self.n();
        let (l, d, u) = ldu(g)?;
        let m = self.patterns.len();
        let pl = self.unipotent_image(&l);
        let pu = self.unipotent_image(&u);
        let pd = CVector::from_iterator(
            m,
            self.weights.iter().map(|w| (0..n).fold(c64(1.0, 0.0), |acc, i| acc * d[i].powi(w[i] as i32))),
        );
        let mut out = pl;
        for (c, s) in pd.iter().enumerate() {
            for r in 0..m {
                out[(r, c)] *= s;
            }
        }
        let res = out * pu;
        res.iter().all(|z| z.is_finite()).then_some(res)
    }

    /// `π(N) = exp(Π(log N))` for unipotent triangular `N`.
    fn unipotent_image(&self, t: &CMatrix) -> CMatrix {
        let n = self.n();
        let nil = CMatrix::identity(n, n) - t;
        let mut log = CMatrix::zeros(n, n);
        let mut pow = nil.clone();
        for i in 1..n {
            log -= pow.scale(1.0 / i as f64);
            pow = &pow * &nil;
        }
        let x = self.lie_of(&log);
        let m = self.patterns.len();
        let mut out = CMatrix::identity(m, m);
        let mut term = CMatrix::identity(m, m);
        for j in 1..=m {
            term = &term * &x / c64(j as f64, 0.0);
            if term.iter().all(|z| z.norm() == 0.0) {
                break;
            }
            out += &term;
        }
        out
    }

    /// `π_λ(g)v` in the raw GT basis.
    pub fn gt_apply(&self, g: &CMatrix, v: &CVector) -> Result<CVector> {
        if v.len() != self.patterns.len() {
            return Err(Error::InvalidInput("vector length differs from the irrep dimension".into()));
        }
        Ok(self.group_matrix(g)? * v)
    }

    /// Squared norms `‖ξ_Λ‖²` as floats.
    pub fn gram(&self) -> &DVector<f64> {
        &self.gram
    }

    /// Converts raw GT coordinates to orthonormal coordinates.
    pub fn to_orthonormal(&self, raw: &CVector) -> CVector {
        CVector::from_iterator(raw.len(), raw.iter().zip(self.gram.iter()).map(|(z, g)| z * g.sqrt()))
    }

    /// Inverse of [`GtIrrep::to_orthonormal`].
    pub fn from_orthonormal(&self, y: &CVector) -> CVector {
        CVector::from_iterator(y.len(), y.iter().zip(self.gram.iter()).map(|(z, g)| z / g.sqrt()))
    }

    /// Conjugates a raw-basis operator into the orthonormal basis.
    pub fn orthonormalize(&self, a: &CMatrix) -> CMatrix {
        let s: Vec<f64> = self.gram.iter().map(|g| g.sqrt()).collect();
        CMatrix::from_fn(a.nrows(), a.ncols(), |r, c| a[(r, c)] * (s[r] / s[c]))
    }
}

/// `‖ξ_Λ‖²` from the product formula, normalized so the highest weight vector has norm 1.
fn gt_norm_squared(p: &GtPattern) -> BigRational {
    use num::{BigInt, One};
    let fact = |x: i64| -> BigInt {
        assert!(x >= 0, "factorial argument is nonnegative for valid patterns");
        (1..=x).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
    };
    let n = p.n();
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for k in 2..=n {
        for i in 1..k {
            for j in i..k {
                num *= fact(p.l(k, i) - p.l(k - 1, j));
                den *= fact(p.l(k - 1, i) - p.l(k - 1, j));
            }
        }
        for i in 1..=k {
            for j in (i + 1)..=k {
                num *= fact(p.l(k, i) - p.l(k, j) - 1);
                den *= fact(p.l(k - 1, i) - p.l(k, j) - 1);
            }
        }
    }
    BigRational::new(num, den)
}

/// `g = L·D·U` with unit triangular `L`, `U`; `None` when a pivot is tiny.
fn ldu(g: &CMatrix) -> Option<(CMatrix, Vec<C64>, CMatrix)> {
    let n = g.nrows();
    let scale = g.iter().fold(0.0f64, |m, z| m.max(z.norm()));
    let mut a = g.clone();
    let mut l = CMatrix::identity(n, n);
    let mut d = Vec::with_capacity(n);
    for k in 0..n {
        let piv = a[(k, k)];
        if !(piv.norm() > 1e-10 * scale) {
            return None;
        }
        d.push(piv);
        for i in (k + 1)..n {
            let f = a[(i, k)] / piv;
            l[(i, k)] = f;
            for j in k..n {
                let t = a[(k, j)];
                a[(i, j)] -= f * t;
            }
        }
    }
    let mut u = CMatrix::identity(n, n);
    for i in 0..n {
        for j in (i + 1)..n {
            u[(i, j)] = a[(i, j)] / d[i];
        }
    }
    Some((l, d, u))
}

impl Representation for GtIrrep {
    fn group(&self) -> &GroupSpec {
        &self.group
    }

    fn dim(&self) -> usize {
        self.patterns.len()
    }

    fn apply(&self, g: &GroupElement, v: &CVector) -> Result<CVector> {
        check_vector(self, v)?;
        g.check_shape(&self.group)?;
        self.gt_apply(&g.blocks[0].to_dense(), v)
    }

    fn lie_apply(&self, h: &LieDirection, v: &CVector) -> Result<CVector> {
        check_vector(self, v)?;
        check_direction_shape(&self.group, h)?;
        Ok(self.lie_of(&h.blocks[0].to_dense()) * v)
    }

    fn weights(&self) -> Vec<Weight> {
        dedup(self.weights.iter().map(|w| Weight::from_integers(&self.group, w)))
    }

    fn invariant_norm_gram(&self) -> DVector<f64> {
        self.gram.clone()
    }

    fn structure(&self) -> Structure {
        Structure::GelfandTsetlin { max_degree: self.lambda.degree() }
    }
}

/// `π_{λ(1)} ⊗ … ⊗ π_{λ(k)}` of `GL(n_1) × … × GL(n_k)` in the orthonormal GT basis.
#[derive(Debug, Clone)]
pub struct GtTensor {
    irreps: Vec<Arc<GtIrrep>>,
    dims: Vec<usize>,
    group: GroupSpec,
}

impl GtTensor {
    pub fn new(lambdas: Vec<HighestWeight>) -> Result<Self> {
        if lambdas.is_empty() {
            return Err(Error::InvalidInput("need one highest weight per factor".into()));
        }
        let irreps = lambdas.into_iter().map(|l| GtIrrep::new(l).map(Arc::new)).collect::<Result<Vec<_>>>()?;
        let dims = irreps.iter().map(|r| r.dim()).collect();
        let group = GroupSpec::new(irreps.iter().map(|r| (FactorKind::Gl, r.n())))?;
        Ok(GtTensor { irreps, dims, group })
    }

    pub fn irreps(&self) -> &[Arc<GtIrrep>] {
        &self.irreps
    }

    fn combine(&self, v: &CVector, mats: &[CMatrix], sum: bool) -> CVector {
        if sum {
            let mut out = CVector::zeros(v.len());
            for (mode, a) in mats.iter().enumerate() {
                out += crate::reps::mode_product(v, &self.dims, mode, a);
            }
            out
        } else {
            let mut out = v.clone();
            for (mode, a) in mats.iter().enumerate() {
                out = crate::reps::mode_product(&out, &self.dims, mode, a);
            }
            out
        }
    }
}

impl Representation for GtTensor {
    fn group(&self) -> &GroupSpec {
        &self.group
    }

    fn dim(&self) -> usize {
        self.dims.iter().product()
    }

    fn apply(&self, g: &GroupElement, v: &CVector) -> Result<CVector> {
        check_vector(self, v)?;
        g.check_shape(&self.group)?;
        let mats = self
            .irreps
            .iter()
            .zip(&g.blocks)
            .map(|(r, b)| r.group_matrix(&b.to_dense()).map(|m| r.orthonormalize(&m)))
            .collect::<Result<Vec<_>>>()?;
        Ok(self.combine(v, &mats, false))
    }

    fn lie_apply(&self, h: &LieDirection, v: &CVector) -> Result<CVector> {
        check_vector(self, v)?;
        check_direction_shape(&self.group, h)?;
        let mats: Vec<CMatrix> =
            self.irreps.iter().zip(&h.blocks).map(|(r, b)| r.orthonormalize(&r.lie_of(&b.to_dense()))).collect();
        Ok(self.combine(v, &mats, true))
    }

    fn weights(&self) -> Vec<Weight> {
        let mut acc: Vec<Vec<i64>> = vec![Vec::new()];
        for r in &self.irreps {
            let mut next = Vec::new();
            for prefix in &acc {
                for w in &r.weights {
                    let mut x = prefix.clone();
                    x.extend_from_slice(w);
                    next.push(x);
                }
            }
            acc = next;
        }
        dedup(acc.iter().map(|w| Weight::from_integers(&self.group, w)))
    }

    fn structure(&self) -> Structure {
        Structure::GelfandTsetlin { max_degree: self.irreps.iter().map(|r| r.lambda.degree()).max().unwrap_or(0) }
    }
}

/// Direct sum of tensor products of GT irreducibles over `GL(n_1) × … × GL(n_k)`,
/// in the orthonormalized GT basis. Each summand lists one `λ` per factor.
pub fn gt_orthonormal_rep(summands: &[Vec<Vec<i64>>], sizes: &[usize]) -> Result<Rep> {
    if summands.is_empty() {
        return Err(Error::InvalidInput("need at least one summand".into()));
    }
    let mut reps: Vec<Rep> = Vec::with_capacity(summands.len());
    for (s, lambdas) in summands.iter().enumerate() {
        if lambdas.len() != sizes.len() || lambdas.iter().zip(sizes).any(|(l, &n)| l.len() != n) {
            return Err(Error::InvalidInput(format!("summand {s}: need one λ of length n_i per factor {sizes:?}")));
        }
        let hw = lambdas.iter().map(|l| HighestWeight::new(l.clone())).collect::<Result<Vec<_>>>()?;
        reps.push(Arc::new(GtTensor::new(hw)?));
    }
    if reps.len() == 1 {
        Ok(reps.pop().unwrap())
    } else {
        direct_sum(reps)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn irrep(l: &[i64]) -> GtIrrep {
        GtIrrep::new(HighestWeight::new(l.to_vec()).unwrap()).unwrap()
    }

    #[test]
    fn pattern_counts() {
        assert_eq!(enumerate_patterns(&HighestWeight::new(vec![1, 0]).unwrap()).len(), 2);
        assert_eq!(enumerate_patterns(&HighestWeight::new(vec![5]).unwrap()).len(), 1);
        assert_eq!(enumerate_patterns(&HighestWeight::new(vec![2, 1, 0]).unwrap()).len(), 8);
        assert_eq!(enumerate_patterns(&HighestWeight::new(vec![2, 0, 0]).unwrap()).len(), 6);
        assert!(HighestWeight::new(vec![0, 1]).is_err());
        assert!(HighestWeight::new(vec![1, -1]).is_err());
    }

    #[test]
    fn defining_rep_matrices() {
        let r = irrep(&[1, 0]);
        let e11 = r.lie_matrix_exact(1, 1).unwrap();
        let e22 = r.lie_matrix_exact(2, 2).unwrap();
        let one = BigRational::from_integer(1.into());
        let zero = BigRational::from_integer(0.into());
        assert_eq!(e11, vec![vec![one.clone(), zero.clone()], vec![zero.clone(), zero.clone()]]);
        assert_eq!(e22, vec![vec![zero.clone(), zero.clone()], vec![zero.clone(), one.clone()]]);
        assert!(r.gram_exact().iter().all(|g| *g == one));
        assert!(r.lie_matrix_exact(0, 1).is_err());
    }

    #[test]
    fn second_symmetric_power_diagonal_action() {
        let r = irrep(&[2, 0]);
        let (a, b) = (c64(3.0, 0.0), c64(0.5, 0.0));
        let g = CMatrix::from_diagonal(&CVector::from_vec(vec![a, b]));
        let m = r.group_matrix(&g).unwrap();
        let want = [a * a, a * b, b * b];
        for (i, w) in want.iter().enumerate() {
            assert!((m[(i, i)] - w).norm() < 1e-12);
        }
    }

    #[test]
    fn determinant_rep() {
        let r = irrep(&[1, 1]);
        assert_eq!(r.dim(), 1);
        let g = CMatrix::from_row_slice(2, 2, &[c64(1.0, 1.0), c64(2.0, 0.0), c64(0.0, -1.0), c64(3.0, 0.5)]);
        let m = r.group_matrix(&g).unwrap();
        assert!((m[(0, 0)] - g.determinant()).norm() < 1e-12);
    }

    #[test]
    fn permutation_needs_retry() {
        let r = irrep(&[1, 0]);
        let g = CMatrix::from_row_slice(2, 2, &[c64(0.0, 0.0), c64(1.0, 0.0), c64(1.0, 0.0), c64(0.0, 0.0)]);
        let m = r.group_matrix(&g).unwrap();
        assert!((m - g).norm() < 1e-12);
    }
}
