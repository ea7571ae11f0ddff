//! Geodesic gradient descent: the generic scheme, uniform scaling,
//! `p`-scaling, randomized `p`-scaling and the associated budgets.

use num::{BigInt, BigRational, One};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{local, p_shifted_gradient, p_shifted_objective, Metric, TargetSpectrum};
use crate::group::{Block, GroupElement, GroupSpec, LieDirection, TangentBasis};
use crate::margins::weight_norm;
use crate::reps::Representation;
use crate::{c64, CMatrix, CVector};

/// Solver outcome.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SolveStatus {
    Converged,
    BudgetExhausted,
    /// The objective fell below [`FirstOrderConfig::value_floor`].
    FloorReached,
    /// The oracle reported a degenerate point after the first iteration,
    /// e.g. `‖π(g)v‖` underflowed; the best earlier iterate is returned.
    Collapsed,
}

/// Parameters of the first-order solvers.
#[derive(Debug, Clone, PartialEq)]
pub struct FirstOrderConfig {
    /// Step size `η`; `None` selects the solver's default.
    pub step_size: Option<f64>,
    pub max_iterations: usize,
    pub epsilon: f64,
    /// Sampling stride of the recorded trace.
    pub trace_every: usize,
    /// Special blocks are renormalized to unit determinant this often.
    pub reproject_every: usize,
    /// Stop once the objective drops below this value.
    pub value_floor: Option<f64>,
}

impl Default for FirstOrderConfig {
    fn default() -> Self {
        FirstOrderConfig { step_size: None, max_iterations: 10_000, epsilon: 1e-3, trace_every: 100, reproject_every: 100, value_floor: None }
    }
}

impl FirstOrderConfig {
    pub fn new(epsilon: f64, max_iterations: usize) -> Self {
        FirstOrderConfig { epsilon, max_iterations, ..Default::default() }
    }

    pub fn with_step_size(mut self, eta: f64) -> Self {
        self.step_size = Some(eta);
        self
    }

    pub fn with_trace_every(mut self, every: usize) -> Self {
        self.trace_every = every;
        self
    }

    pub fn with_value_floor(mut self, floor: f64) -> Self {
        self.value_floor = Some(floor);
        self
    }

    fn validate(&self) -> Result<()> {
        if let Some(eta) = self.step_size {
            if !(eta > 0.0 && eta.is_finite()) {
                return Err(Error::InvalidInput("step size must be positive".into()));
            }
        }
        if self.max_iterations == 0 {
            return Err(Error::InvalidInput("max_iterations must be at least 1".into()));
        }
        if !(self.epsilon > 0.0) {
            return Err(Error::InvalidInput("epsilon must be positive".into()));
        }
        if self.trace_every == 0 || self.reproject_every == 0 {
            return Err(Error::InvalidInput("trace_every and reproject_every must be positive".into()));
        }
        Ok(())
    }
}

/// One recorded iterate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TracePoint {
    pub iteration: usize,
    pub grad_norm: f64,
    pub value: f64,
}

/// Output of a first-order run.
#[derive(Debug, Clone)]
pub struct ScalingReport {
    /// Iterate with the smallest gradient norm.
    pub best_g: GroupElement,
    pub best_grad_norm: f64,
    pub best_iteration: usize,
    /// Number of gradient evaluations.
    pub iterations_used: usize,
    pub step_size: f64,
    pub trace: Vec<TracePoint>,
    pub status: SolveStatus,
    /// `‖spec(μ(π(g)v)) − p‖₂` at the best iterate, for `p`-scaling runs.
    pub spec_distance: Option<f64>,
}

/// Gradient and objective value at a point.
pub struct Evaluation {
    pub gradient: LieDirection,
    pub value: f64,
}

/// Runs `g_{t+1} = e^{−η∇F(g_t)} g_t` from `g_0 = I` and returns the iterate
/// minimizing `‖∇F‖_F`; stops early once that norm is at most `ε`, and with
/// [`SolveStatus::Collapsed`] when the oracle returns [`Error::Degenerate`]
/// after the first iteration.
pub fn first_order_minimize(
    spec: &GroupSpec,
    mut oracle: impl FnMut(&GroupElement) -> Result<Evaluation>,
    step_size: f64,
    config: &FirstOrderConfig,
) -> Result<ScalingReport> {
    config.validate()?;
    if !(step_size > 0.0 && step_size.is_finite()) {
        return Err(Error::InvalidInput("step size must be positive".into()));
    }
    let mut g = GroupElement::identity(spec);
    let mut best_g = g.clone();
    let mut best = f64::INFINITY;
    let mut best_iteration = 0;
    let mut trace = Vec::new();
    let mut status = SolveStatus::BudgetExhausted;
    let mut used = 0;
    let mut last = None;
    for t in 0..config.max_iterations {
        let ev = match oracle(&g) {
            Ok(ev) => ev,
            Err(Error::Degenerate(_)) if t > 0 => {
                status = SolveStatus::Collapsed;
                break;
            }
            Err(e) => return Err(e),
        };
        used = t + 1;
        let norm = ev.gradient.norm();
        if !norm.is_finite() || !ev.value.is_finite() {
            return Err(Error::Degenerate(format!("non-finite gradient or objective at iteration {t}")));
        }
        let point = TracePoint { iteration: t, grad_norm: norm, value: ev.value };
        if t % config.trace_every == 0 {
            trace.push(point);
        }
        last = Some(point);
        if norm < best {
            best = norm;
            best_g = g.clone();
            best_iteration = t;
        }
        if norm <= config.epsilon {
            status = SolveStatus::Converged;
            break;
        }
        if config.value_floor.is_some_and(|f| ev.value < f) {
            status = SolveStatus::FloorReached;
            break;
        }
        if t + 1 == config.max_iterations {
            break;
        }
        g = GroupElement::exp(&ev.gradient.scale(-step_size))?.mul(&g);
        if (t + 1) % config.reproject_every == 0 {
            g.reproject(spec);
        }
    }
    if let Some(p) = last {
        if trace.last().map(|q| q.iteration) != Some(p.iteration) {
            trace.push(p);
        }
    }
    Ok(ScalingReport {
        best_g,
        best_grad_norm: best,
        best_iteration,
        iterations_used: used,
        step_size,
        trace,
        status,
        spec_distance: None,
    })
}

fn check_nonzero(v: &CVector) -> Result<()> {
    if v.iter().all(|z| z.norm() == 0.0) {
        return Err(Error::InvalidInput("vector must be nonzero".into()));
    }
    Ok(())
}

/// Default step size `1/(2N(π)²)`.
pub fn default_scaling_step(rep: &dyn Representation) -> f64 {
    let n = weight_norm(rep).max(f64::MIN_POSITIVE);
    1.0 / (2.0 * n * n)
}

/// Uniform scaling: minimizes `log‖π(g)v‖` with gradient `μ(π(g)v)`.
pub fn scaling_solve(rep: &dyn Representation, v: &CVector, config: &FirstOrderConfig) -> Result<ScalingReport> {
    check_nonzero(v)?;
    let spec = rep.group().clone();
    let basis = TangentBasis::new(&spec);
    let metric = Metric::of(rep);
    let eta = config.step_size.unwrap_or_else(|| default_scaling_step(rep));
    first_order_minimize(
        &spec,
        |g| {
            let w = rep.apply(g, v)?;
            let norm = metric.norm(&w);
            if !(norm > 0.0 && norm.is_finite()) {
                return Err(Error::Degenerate(
                    "‖π(g)v‖ left the floating-point range; the orbit approaches 0 (v is likely in the null cone)".into(),
                ));
            }
            let loc = local(rep, &metric, &basis, &w)?;
            Ok(Evaluation { gradient: basis.from_coords(&loc.m), value: loc.log_norm })
        },
        eta,
        config,
    )
}

/// One step of [`VectorScaling`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct VectorStep {
    pub iteration: usize,
    /// `‖μ(π(g_t)v)‖_F`.
    pub grad_norm: f64,
    /// `log‖π(g_t)v‖`.
    pub log_norm: f64,
}

/// The scaling iteration in vector form: tracks the unit vector
/// `π(g_t)v/‖π(g_t)v‖` and the accumulated log-norm instead of `g_t`, so it
/// stays finite on null-cone inputs where `g_t` itself overflows.
pub struct VectorScaling<'a> {
    rep: &'a dyn Representation,
    basis: TangentBasis,
    metric: Metric,
    eta: f64,
    unit: CVector,
    log_norm: f64,
    iteration: usize,
}

impl<'a> VectorScaling<'a> {
    /// Starts at `v`; `step_size` defaults to `1/(2N(π)²)`.
    pub fn new(rep: &'a dyn Representation, v: &CVector, step_size: Option<f64>) -> Result<Self> {
        check_nonzero(v)?;
        let metric = Metric::of(rep);
        let norm = metric.norm(v);
        let eta = step_size.unwrap_or_else(|| default_scaling_step(rep));
        if !(eta > 0.0 && eta.is_finite()) {
            return Err(Error::InvalidInput("step size must be positive".into()));
        }
        Ok(VectorScaling {
            rep,
            basis: TangentBasis::new(rep.group()),
            metric,
            eta,
            unit: v.unscale(norm),
            log_norm: norm.ln(),
            iteration: 0,
        })
    }

    /// Evaluates the current iterate and advances to the next one.
    pub fn step(&mut self) -> Result<VectorStep> {
        let loc = local(self.rep, &self.metric, &self.basis, &self.unit)?;
        let out = VectorStep { iteration: self.iteration, grad_norm: loc.m.norm(), log_norm: self.log_norm };
        let h = self.basis.from_coords(&(&loc.m * -self.eta));
        let w = self.rep.apply(&GroupElement::exp(&h)?, &self.unit)?;
        let norm = self.metric.norm(&w);
        if !(norm > 0.0 && norm.is_finite()) {
            return Err(Error::Degenerate("iterate norm left the floating-point range".into()));
        }
        self.unit = w.unscale(norm);
        self.log_norm += norm.ln();
        self.iteration += 1;
        Ok(out)
    }
}

/// Default `p`-scaling step size `1/(2N²)` with `N² = N(π)² + ‖p‖`.
pub fn default_p_scaling_step(rep: &dyn Representation, p: &TargetSpectrum) -> f64 {
    let n = weight_norm(rep);
    let pnorm = (0..p.parts().len()).flat_map(|i| p.part_f64(i)).map(|x| x * x).sum::<f64>().sqrt();
    1.0 / (2.0 * (n * n + pnorm))
}

/// `p`-scaling: drives `spec(μ(π(g)v))` towards `p` using the shifted gradient
/// `μ(π(g)v) + k p* k†` with `g = kb`.
pub fn p_scaling_solve(
    rep: &dyn Representation,
    v: &CVector,
    p: &TargetSpectrum,
    config: &FirstOrderConfig,
) -> Result<ScalingReport> {
    check_nonzero(v)?;
    p.check(rep)?;
    let spec = rep.group().clone();
    let eta = config.step_size.unwrap_or_else(|| default_p_scaling_step(rep, p));
    let mut report = first_order_minimize(
        &spec,
        |g| {
            let grad = p_shifted_gradient(rep, v, g, p)?;
            let value = p_shifted_objective(rep, v, g, p)?;
            Ok(Evaluation { gradient: grad.to_direction(), value })
        },
        eta,
        config,
    )?;
    let mu = crate::geometry::moment_map_at(rep, v, &report.best_g)?;
    report.spec_distance = Some(p.distance(&mu)?);
    Ok(report)
}

/// Output of [`randomized_p_scaling`].
#[derive(Debug, Clone)]
pub struct RandomizedReport {
    /// `best_g` is the composite `g_1 g_0`.
    pub report: ScalingReport,
    /// The random integer start `g_0`.
    pub g0: GroupElement,
    /// Range `[S]` the entries of `g_0` were drawn from.
    pub s_used: u64,
    /// `log₂` of the theoretical `S = 4 n^{3n³+1} d^{n⁴}`.
    pub s_theory_log2: f64,
    /// `S` was supplied by the caller rather than the theoretical value.
    pub heuristic: bool,
}

/// `log₂ S` with `S = 4 n^{3n³+1} d^{n⁴}`.
pub fn randomization_range_log2(n: u64, d: u64) -> f64 {
    let (nf, df) = (n as f64, d.max(1) as f64);
    2.0 + (3.0 * nf.powi(3) + 1.0) * nf.log2() + nf.powi(4) * df.log2()
}

/// Randomized `p`-scaling: runs [`p_scaling_solve`] from a random integer
/// group element `g_0` with entries in `{1, …, S}`.
pub fn randomized_p_scaling(
    rep: &dyn Representation,
    v: &CVector,
    p: &TargetSpectrum,
    config: &FirstOrderConfig,
    s_override: Option<u64>,
    seed: u64,
) -> Result<RandomizedReport> {
    check_nonzero(v)?;
    p.check(rep)?;
    let spec = rep.group().clone();
    let n = spec.total_n() as u64;
    let d: u64 = rep
        .degrees()
        .map(|ds| ds.iter().map(|q| q.to_integer().unsigned_abs()).sum())
        .unwrap_or(1);
    let s_theory_log2 = randomization_range_log2(n, d);
    let s_used = match s_override {
        Some(0) => return Err(Error::InvalidInput("s_override must be positive".into())),
        Some(s) => s,
        None if s_theory_log2 < 63.0 => 2f64.powf(s_theory_log2).round() as u64,
        None => {
            return Err(Error::Configuration(format!(
                "the theoretical range S = 2^{s_theory_log2:.1} does not fit in 64 bits; supply s_override"
            )))
        }
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g0 = GroupElement {
        blocks: spec
            .factors()
            .iter()
            .map(|f| {
                Block::Dense(CMatrix::from_fn(f.n, f.n, |_, _| c64(rng.random_range(1..=s_used) as f64, 0.0)))
            })
            .collect(),
    };
    if g0.blocks.iter().any(|b| b.det().norm() == 0.0) {
        return Err(Error::RandomnessFailure("random start g_0 is singular; retry with another seed".into()));
    }
    let w = rep.apply(&g0, v)?;
    let w = w.unscale(Metric::of(rep).norm(&w));
    let mut report = p_scaling_solve(rep, &w, p, config)?;
    report.best_g = report.best_g.mul(&g0);
    Ok(RandomizedReport { report, g0, s_used, s_theory_log2, heuristic: s_override.is_some() })
}

/// Rounds values that are within floating-point noise of an integer before taking the ceiling.
fn ceil_clean(x: f64) -> u64 {
    let r = x.round();
    if (x - r).abs() <= 1e-9 * r.abs().max(1.0) {
        r as u64
    } else {
        x.ceil() as u64
    }
}

/// `⌈4N²C/ε²⌉` iterations of scaling suffice to reach `‖μ‖ ≤ ε` when `C ≥ log(‖v‖/cap(v))`.
pub fn iteration_budget_scaling(weight_norm: f64, epsilon: f64, log_norm_over_cap: f64) -> Result<u64> {
    if !(weight_norm > 0.0 && epsilon > 0.0 && log_norm_over_cap >= 0.0) {
        return Err(Error::InvalidInput("need N > 0, ε > 0 and C ≥ 0".into()));
    }
    Ok(ceil_clean(4.0 * weight_norm * weight_norm * log_norm_over_cap / (epsilon * epsilon)))
}

/// Heuristic default `C = 40·ln(10)·m` used when no capacity bound is supplied.
pub fn default_cap_log_bound(dim: usize) -> f64 {
    40.0 * std::f64::consts::LN_10 * dim as f64
}

/// `ε = (2ℓ)^{−n−1} d^{−n} n^{−1}`: a sufficient accuracy for deciding
/// membership of a rational point with denominator `ℓ` in a moment polytope.
/// Typically astronomically small.
pub fn polytope_membership_epsilon(n: u32, d: u32, ell: u32) -> Result<BigRational> {
    if n == 0 || d == 0 || ell == 0 {
        return Err(Error::InvalidInput("n, d and ℓ must be positive".into()));
    }
    let den = BigInt::from(2 * ell as u64).pow(n + 1) * BigInt::from(d).pow(n) * BigInt::from(n);
    Ok(BigRational::new(BigInt::one(), den))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reps::torus_rep;

    #[test]
    fn zero_gradient_returns_identity() {
        let spec = GroupSpec::new([(crate::group::FactorKind::Gl, 2)]).unwrap();
        let z = LieDirection::zeros(&spec);
        let r = first_order_minimize(&spec, |_| Ok(Evaluation { gradient: z.clone(), value: 0.0 }), 0.5, &FirstOrderConfig::default())
            .unwrap();
        assert_eq!(r.iterations_used, 1);
        assert_eq!(r.best_g, GroupElement::identity(&spec));
        assert_eq!(r.status, SolveStatus::Converged);
    }

    #[test]
    fn torus_geometric_program() {
        let rep = torus_rep(&[vec![1], vec![-1]]).unwrap();
        let v = CVector::from_vec(vec![c64(2.0, 0.0), c64(1.0, 0.0)]);
        let r = scaling_solve(rep.as_ref(), &v, &FirstOrderConfig::new(1e-4, 10_000)).unwrap();
        assert_eq!(r.status, SolveStatus::Converged);
        let x = r.best_g.blocks[0].diagonal()[0].re.ln();
        assert!((4.0 * (2.0 * x).exp() - (-2.0 * x).exp()).abs() < 1e-3);
        assert!(r.trace.windows(2).all(|w| w[1].value <= w[0].value + 1e-10));
    }

    #[test]
    fn budgets() {
        assert_eq!(iteration_budget_scaling(2f64.sqrt(), 0.1, 1.0).unwrap(), 800);
        assert_eq!(iteration_budget_scaling(3f64.sqrt(), 0.01, 2.0).unwrap(), 240_000);
        assert_eq!(iteration_budget_scaling(1.0, 0.1, 0.0).unwrap(), 0);
        assert_eq!(polytope_membership_epsilon(1, 1, 1).unwrap(), BigRational::new(1.into(), 4.into()));
        assert_eq!(polytope_membership_epsilon(2, 2, 1).unwrap(), BigRational::new(1.into(), 64.into()));
    }
}
