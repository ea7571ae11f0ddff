//! Weight norm `N(π)` and weight margin `γ(π)`: exact enumeration at small
//! scale, the gap/`α`/`β` machinery, total unimodularity, closed-form lower
//! bounds and constructive upper-bound witnesses.

use nalgebra::{DMatrix, DVector};
use num::integer::lcm;
use num::rational::Rational64;
use num::{BigInt, BigRational, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numkernels::min_norm_point;
use crate::reps::{Representation, Structure, Weight};

/// Whether a margin value is exact or a one-sided bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MarginKind {
    Exact,
    LowerBound,
    UpperBound,
}

/// How a margin value was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MarginMethod {
    BruteForce,
    Gap,
    Unimodular,
    General,
    Quiver,
    Table,
    Witness,
}

/// A weight margin value with provenance.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MarginResult {
    /// `+∞` when no subset hull misses the origin.
    pub value: f64,
    pub kind: MarginKind,
    pub method: MarginMethod,
    /// Indices (into the deduplicated weight list) of a subset attaining an exact value.
    pub witness: Option<Vec<usize>>,
}

impl MarginResult {
    fn bound(value: f64, method: MarginMethod) -> Self {
        MarginResult { value, kind: MarginKind::LowerBound, method, witness: None }
    }
}

/// Deduplicated weights as the rows of a rational matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightMatrix {
    rows: Vec<Vec<Rational64>>,
    cols: usize,
}

impl WeightMatrix {
    pub fn new(rows: Vec<Vec<Rational64>>) -> Result<Self> {
        let cols = rows.first().map(Vec::len).ok_or_else(|| Error::InvalidInput("weight matrix has no rows".into()))?;
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::InvalidInput("weight rows have different lengths".into()));
        }
        let mut out: Vec<Vec<Rational64>> = Vec::with_capacity(rows.len());
        for r in rows {
            if !out.contains(&r) {
                out.push(r);
            }
        }
        Ok(WeightMatrix { rows: out, cols })
    }

    pub fn from_integers(rows: &[Vec<i64>]) -> Result<Self> {
        Self::new(rows.iter().map(|r| r.iter().map(|&x| Rational64::from_integer(x)).collect()).collect())
    }

    pub fn from_weights(ws: &[Weight]) -> Result<Self> {
        Self::new(ws.iter().map(Weight::flat).collect())
    }

    pub fn from_rep(rep: &dyn Representation) -> Result<Self> {
        Self::from_weights(&rep.weights())
    }

    pub fn rows(&self) -> &[Vec<Rational64>] {
        &self.rows
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn to_f64(&self) -> DMatrix<f64> {
        DMatrix::from_fn(self.rows.len(), self.cols, |i, j| ratio_f64(self.rows[i][j]))
    }

    pub fn row_vectors(&self) -> Vec<DVector<f64>> {
        self.rows.iter().map(|r| DVector::from_iterator(r.len(), r.iter().map(|x| ratio_f64(*x)))).collect()
    }

    /// Least common denominator of all entries.
    pub fn denominator(&self) -> i64 {
        self.rows.iter().flatten().fold(1, |acc, x| lcm(acc, *x.denom()))
    }

    pub fn is_integral(&self) -> bool {
        self.denominator() == 1
    }

    /// `D·M` as integers, where `D` is [`WeightMatrix::denominator`].
    fn scaled_integers(&self) -> (Vec<Vec<BigInt>>, i64) {
        let d = self.denominator();
        let rows = self
            .rows
            .iter()
            .map(|r| r.iter().map(|x| BigInt::from(x.numer() * (d / x.denom()))).collect())
            .collect();
        (rows, d)
    }

    /// Exact rank.
    pub fn rank(&self) -> usize {
        let (mut a, _) = self.scaled_integers();
        bareiss_rank(&mut a)
    }

    /// Largest Euclidean row norm.
    pub fn max_row_norm(&self) -> f64 {
        self.row_vectors().iter().map(|r| r.norm()).fold(0.0, f64::max)
    }
}

fn ratio_f64(x: Rational64) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// Weight norm `N(π) = max_ω ‖ω‖₂`.
pub fn weight_norm(rep: &dyn Representation) -> f64 {
    rep.weights().iter().map(Weight::norm).fold(0.0, f64::max)
}

/// Default number of distinct weights for exact margin enumeration.
pub const DEFAULT_SUBSET_LIMIT: usize = 18;

/// Exact weight margin `min{d(0, conv Γ) : Γ ⊆ Ω, 0 ∉ conv Γ}`.
///
/// Subsets of size at most `rank + 1` suffice: the nearest point of any
/// hull lies in the hull of that many weights. Supersets of a subset whose
/// hull contains the origin are skipped.
pub fn weight_margin_exact(m: &WeightMatrix, subset_limit: usize) -> Result<MarginResult> {
    if m.nrows() > subset_limit {
        return Err(Error::Refused(format!(
            "{} distinct weights exceed the enumeration limit {subset_limit}; use margin_lower_bound",
            m.nrows()
        )));
    }
    let pts = m.row_vectors();
    let max_size = (m.rank() + 1).min(pts.len());
    let scale = m.max_row_norm().max(1.0);
    let mut best = f64::INFINITY;
    let mut witness: Option<Vec<usize>> = None;
    let mut stack: Vec<usize> = Vec::new();
    search(&pts, max_size, 1e-9 * scale, &mut stack, 0, &mut best, &mut witness)?;
    Ok(MarginResult { value: best, kind: MarginKind::Exact, method: MarginMethod::BruteForce, witness })
}

fn search(
    pts: &[DVector<f64>],
    max_size: usize,
    tol: f64,
    stack: &mut Vec<usize>,
    start: usize,
    best: &mut f64,
    witness: &mut Option<Vec<usize>>,
) -> Result<()> {
    for i in start..pts.len() {
        stack.push(i);
        let subset: Vec<DVector<f64>> = stack.iter().map(|&j| pts[j].clone()).collect();
        let d = min_norm_point(&subset)?.norm;
        if d > tol {
            if d < *best - 1e-12 {
                *best = d;
                *witness = Some(stack.clone());
            }
            if stack.len() < max_size {
                search(pts, max_size, tol, stack, i + 1, best, witness)?;
            }
        }
        stack.pop();
    }
    Ok(())
}

/// Limits for square-submatrix enumeration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnumerationBudget {
    /// Largest `min(rows, cols)` accepted.
    pub max_order: usize,
    pub max_rows: usize,
}

impl Default for EnumerationBudget {
    fn default() -> Self {
        EnumerationBudget { max_order: 4, max_rows: 20 }
    }
}

/// Gap `σ(M)`, `α(M)`, `β(M)` and total unimodularity from one enumeration.
#[derive(Debug, Clone, PartialEq)]
pub struct GapData {
    pub sigma: f64,
    pub alpha: BigRational,
    pub beta: BigRational,
    pub rank: usize,
    pub totally_unimodular: bool,
}

fn combinations(n: usize, k: usize, f: &mut dyn FnMut(&[usize])) {
    fn rec(n: usize, k: usize, start: usize, cur: &mut Vec<usize>, f: &mut dyn FnMut(&[usize])) {
        if cur.len() == k {
            f(cur);
            return;
        }
        for i in start..=(n - (k - cur.len())) {
            cur.push(i);
            rec(n, k, i + 1, cur, f);
            cur.pop();
        }
    }
    if k <= n {
        rec(n, k, 0, &mut Vec::with_capacity(k), f);
    }
}

/// Fraction-free Gaussian elimination; returns the determinant of a square integer matrix.
fn bareiss_det(mut a: Vec<Vec<BigInt>>) -> BigInt {
    let n = a.len();
    let mut sign = BigInt::from(1);
    let mut prev = BigInt::from(1);
    for k in 0..n {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(k, i);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                a[i][j] = v;
            }
        }
        prev = a[k][k].clone();
    }
    sign * prev
}

fn bareiss_rank(a: &mut [Vec<BigInt>]) -> usize {
    let (rows, cols) = (a.len(), a.first().map_or(0, Vec::len));
    let mut rank = 0;
    let mut prev = BigInt::from(1);
    for c in 0..cols {
        let Some(p) = (rank..rows).find(|&i| !a[i][c].is_zero()) else { continue };
        a.swap(rank, p);
        for i in rank + 1..rows {
            for j in c + 1..cols {
                let v = (&a[i][j] * &a[rank][c] - &a[i][c] * &a[rank][j]) / &prev;
                a[i][j] = v;
            }
            a[i][c] = BigInt::zero();
        }
        prev = a[rank][c].clone();
        rank += 1;
        if rank == rows {
            break;
        }
    }
    rank
}

fn check_budget(m: &WeightMatrix, budget: EnumerationBudget) -> Result<()> {
    if m.nrows().min(m.ncols()) > budget.max_order || m.nrows() > budget.max_rows {
        return Err(Error::Refused(format!(
            "{}×{} weight matrix exceeds the submatrix budget (order ≤ {}, rows ≤ {})",
            m.nrows(),
            m.ncols(),
            budget.max_order,
            budget.max_rows
        )));
    }
    Ok(())
}

/// Exact `σ(M)`, `α(M)`, `β(M)` by enumerating all invertible square submatrices.
pub fn gap_alpha_beta(m: &WeightMatrix, budget: EnumerationBudget) -> Result<GapData> {
    check_budget(m, budget)?;
    let (ints, d) = m.scaled_integers();
    let mf = m.to_f64();
    let mut sigma = f64::INFINITY;
    let mut alpha: Option<BigRational> = None;
    let mut beta = BigRational::zero();
    let mut tu = m.is_integral();
    let mut rank = 0;
    for r in 1..=m.nrows().min(m.ncols()) {
        let denom = BigInt::from(d).pow(r as u32);
        combinations(m.nrows(), r, &mut |rows| {
            combinations(m.ncols(), r, &mut |cols| {
                let sub: Vec<Vec<BigInt>> = rows.iter().map(|&i| cols.iter().map(|&j| ints[i][j].clone()).collect()).collect();
                let det = bareiss_det(sub);
                if det.is_zero() {
                    return;
                }
                rank = rank.max(r);
                let q = BigRational::new(det.abs(), denom.clone());
                if tu && q != BigRational::from_integer(1.into()) {
                    tu = false;
                }
                if alpha.as_ref().is_none_or(|a| q < *a) {
                    alpha = Some(q.clone());
                }
                if q > beta {
                    beta = q;
                }
                let a = DMatrix::from_fn(r, r, |x, y| mf[(rows[x], cols[y])]);
                let s = a.singular_values().min();
                sigma = sigma.min(s);
            });
        });
    }
    let alpha = alpha.ok_or_else(|| Error::InvalidInput("gap of the zero matrix is undefined".into()))?;
    Ok(GapData { sigma, alpha, beta, rank, totally_unimodular: tu })
}

/// Whether all square subdeterminants lie in `{0, ±1}`.
pub fn is_totally_unimodular(m: &WeightMatrix, budget: EnumerationBudget) -> Result<bool> {
    check_budget(m, budget)?;
    if !m.is_integral() {
        return Ok(false);
    }
    if m.rows.iter().all(|r| r.iter().all(Zero::is_zero)) {
        return Ok(true);
    }
    Ok(gap_alpha_beta(m, budget)?.totally_unimodular)
}

/// Exact value (when enumeration is feasible) plus the gap, unimodular and
/// general lower bounds of a bare weight matrix.
pub fn weight_matrix_bounds(m: &WeightMatrix, budget: EnumerationBudget) -> Result<Vec<MarginResult>> {
    let n = m.ncols() as f64;
    let mut out = Vec::new();
    if m.nrows() <= DEFAULT_SUBSET_LIMIT {
        out.push(weight_margin_exact(m, DEFAULT_SUBSET_LIMIT)?);
    }
    let nonzero = m.rows.iter().any(|r| r.iter().any(|x| !x.is_zero()));
    if !nonzero {
        return Ok(out);
    }
    let gap = gap_alpha_beta(m, budget).ok();
    if let Some(g) = &gap {
        out.push(MarginResult::bound(g.sigma / n.sqrt(), MarginMethod::Gap));
        if g.totally_unimodular {
            out.push(MarginResult::bound(1.0 / (g.rank as f64 * n.sqrt()), MarginMethod::Unimodular));
        }
    }
    let b = m.max_row_norm().max(1.0);
    let log_alpha = match &gap {
        Some(g) => g.alpha.to_f64().unwrap_or(0.0).ln(),
        None => -(m.nrows().min(m.ncols()) as f64) * (m.denominator() as f64).ln(),
    };
    out.push(MarginResult::bound((log_alpha + (1.0 - n) * b.ln() - n.ln()).exp(), MarginMethod::General));
    Ok(out)
}

/// Every applicable lower bound (and the exact value when enumeration is feasible).
pub fn margin_bounds(rep: &dyn Representation, budget: EnumerationBudget) -> Result<Vec<MarginResult>> {
    let m = WeightMatrix::from_rep(rep)?;
    let spec = rep.group();
    let mut out = weight_matrix_bounds(&m, budget)?;
    match rep.structure() {
        Structure::MatrixScaling { n } | Structure::OperatorScaling { n, .. } if spec.is_all_special() => {
            let nf = n as f64;
            out.push(MarginResult::bound(1.0 / (nf * (2.0 * nf).sqrt()), MarginMethod::Table));
        }
        Structure::Conjugation { n, .. } => {
            out.push(MarginResult::bound((n as f64).powf(-1.5), MarginMethod::Table));
        }
        Structure::Quiver { dims, .. } => {
            let total: usize = dims.iter().sum();
            let nf = total as f64;
            if spec.is_all_special() {
                let k = dims.len() as f64;
                let p: f64 = dims.iter().map(|&d| d as f64).product();
                out.push(MarginResult::bound(p.powf(-k) * (nf + 1.0).powf(-k) * nf.powf(-1.5), MarginMethod::Quiver));
            } else if !spec.has_special() {
                out.push(MarginResult::bound(nf.powf(-1.5), MarginMethod::Quiver));
            }
        }
        _ => {}
    }
    Ok(out)
}

/// The best available lower bound on `γ(π)` (exact when enumeration is feasible).
pub fn margin_lower_bound(rep: &dyn Representation) -> Result<MarginResult> {
    let all = margin_bounds(rep, EnumerationBudget::default())?;
    if let Some(exact) = all.iter().find(|r| r.kind == MarginKind::Exact) {
        return Ok(exact.clone());
    }
    all.into_iter()
        .max_by(|a, b| a.value.total_cmp(&b.value))
        .ok_or_else(|| Error::InvalidInput("representation has only the zero weight".into()))
}

/// A certificate `γ ≤ value`: a distribution on a weight subset whose hull misses
/// the origin, together with the induced point of that hull.
#[derive(Debug, Clone, PartialEq)]
pub struct MarginWitness {
    pub distribution: DMatrix<f64>,
    pub point: DVector<f64>,
    pub value: f64,
    /// Distance from the origin to the hull of the support, confirming it misses the origin.
    pub support_distance: f64,
}

/// Upper-bound witness for the margin of `SL(n) × SL(n)` operator scaling, `n` even.
///
/// Uses the support `Γ = (R × [n]) ∪ ([n] × C)` with `R = {1, …, s−1}` and
/// `C = {s+1, …, 2s}` and a block distribution with uniform columns.
pub fn margin_upper_witness_operator_scaling(n: usize) -> Result<MarginWitness> {
    if n < 4 || !n.is_multiple_of(2) {
        return Err(Error::InvalidInput("the operator scaling witness needs an even n ≥ 4".into()));
    }
    let s = n / 2;
    let mut x = DMatrix::zeros(n, n);
    for i in 0..s - 1 {
        for j in 0..s {
            x[(i, j)] = 1.0 / ((s - 1) * s) as f64 / 2.0;
        }
    }
    for i in s - 1..n {
        for j in s..n {
            x[(i, j)] = 1.0 / ((s + 1) * s) as f64 / 2.0;
        }
    }
    let z = 1.0 / n as f64;
    let point = DVector::from_iterator(
        2 * n,
        (0..n).map(|i| x.row(i).sum() - z).chain((0..n).map(|j| x.column(j).sum() - z)),
    );
    let in_support = |i: usize, j: usize| i < s - 1 || j >= s;
    let mut support = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if in_support(i, j) {
                let mut w = DVector::from_element(2 * n, -z);
                w[i] += 1.0;
                w[n + j] += 1.0;
                support.push(w);
            }
        }
    }
    let support_distance = min_norm_point(&support)?.norm;
    Ok(MarginWitness { value: point.norm(), distribution: x, point, support_distance })
}

/// Upper-bound witness for simultaneous conjugation by `GL(n)`: the distribution
/// `x_{i,i+1} ∝ i(n−1)/2 − i(i−1)/2` on `{(i, j) : i < j}`.
pub fn margin_upper_witness_conjugation(n: usize) -> Result<MarginWitness> {
    if n < 2 {
        return Err(Error::InvalidInput("the conjugation witness needs n ≥ 2".into()));
    }
    let nf = n as f64;
    let p: Vec<f64> = (1..n).map(|i| i as f64 * (nf - 1.0) / 2.0 - (i * (i - 1)) as f64 / 2.0).collect();
    let lambda = 1.0 / p.iter().sum::<f64>();
    let mut x = DMatrix::zeros(n, n);
    for (i, pi) in p.iter().enumerate() {
        x[(i, i + 1)] = lambda * pi;
    }
    let point = DVector::from_iterator(n, (0..n).map(|k| x.row(k).sum() - x.column(k).sum()));
    let mut support = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let mut w = DVector::zeros(n);
            w[i] = 1.0;
            w[j] = -1.0;
            support.push(w);
        }
    }
    let support_distance = min_norm_point(&support)?.norm;
    Ok(MarginWitness { value: point.norm(), distribution: x, point, support_distance })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::GroupKind;
    use crate::reps::{conjugation_rep, operator_scaling_rep, tensor_rep};

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    #[test]
    fn weight_norms() {
        assert!((weight_norm(operator_scaling_rep(3, 2, GroupKind::Gl).unwrap().as_ref()) - 2f64.sqrt()).abs() < 1e-15);
        assert!((weight_norm(tensor_rep(&[2, 2, 2], GroupKind::Gl).unwrap().as_ref()) - 3f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn exact_margins() {
        let m = WeightMatrix::from_integers(&[vec![1], vec![-1]]).unwrap();
        let r = weight_margin_exact(&m, 18).unwrap();
        assert!((r.value - 1.0).abs() < 1e-12);
        assert_eq!(r.witness, Some(vec![0]));

        let conj = conjugation_rep(2, 1, GroupKind::Gl).unwrap();
        let r = weight_margin_exact(&WeightMatrix::from_rep(conj.as_ref()).unwrap(), 18).unwrap();
        assert!((r.value - 2f64.sqrt()).abs() < 1e-12);

        let m = WeightMatrix::from_integers(&[vec![0, 0]]).unwrap();
        assert_eq!(weight_margin_exact(&m, 18).unwrap().value, f64::INFINITY);

        let many = WeightMatrix::from_integers(&(0..20).map(|i| vec![i]).collect::<Vec<_>>()).unwrap();
        assert!(matches!(weight_margin_exact(&many, 18), Err(Error::Refused(_))));
    }

    #[test]
    fn gap_examples() {
        let id = WeightMatrix::from_integers(&[vec![1, 0], vec![0, 1]]).unwrap();
        let g = gap_alpha_beta(&id, EnumerationBudget::default()).unwrap();
        assert!((g.sigma - 1.0).abs() < 1e-12);
        assert_eq!((g.alpha.clone(), g.beta.clone()), (q(1), q(1)));

        let r1 = WeightMatrix::from_integers(&[vec![1, -1], vec![-1, 1]]).unwrap();
        let g = gap_alpha_beta(&r1, EnumerationBudget::default()).unwrap();
        assert!((g.sigma - 1.0).abs() < 1e-12);
        assert_eq!((g.alpha, g.beta, g.rank), (q(1), q(1), 1));

        let two = WeightMatrix::from_integers(&[vec![2]]).unwrap();
        assert!(!is_totally_unimodular(&two, EnumerationBudget::default()).unwrap());
        let inc = WeightMatrix::from_integers(&[vec![1, -1, 0], vec![0, 1, -1], vec![-1, 0, 1]]).unwrap();
        assert!(is_totally_unimodular(&inc, EnumerationBudget::default()).unwrap());
    }

    #[test]
    fn witnesses() {
        let w = margin_upper_witness_operator_scaling(4).unwrap();
        let n = 4.0f64;
        let want = ((1.0 * (1.0 / (n - 2.0) - 1.0 / n).powi(2)) + 3.0 * (1.0 / (n + 2.0) - 1.0 / n).powi(2)).sqrt();
        assert!((w.value - want).abs() < 1e-12);
        assert!(w.support_distance > 1e-6);
        assert!((w.distribution.sum() - 1.0).abs() < 1e-12);
        assert!(margin_upper_witness_operator_scaling(5).is_err());

        let c = margin_upper_witness_conjugation(4).unwrap();
        assert!(c.support_distance > 1e-6 && c.value >= c.support_distance - 1e-12);
    }
}
