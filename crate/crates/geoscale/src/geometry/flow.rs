use crate::error::{Error, Result};
use crate::group::TangentBasis;
use crate::reps::Representation;
use crate::CVector;
use nalgebra::DVector;

use super::{local, Metric};

/// How a gradient flow run ended.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FlowStatus {
    /// `μ(v0) = 0`; nothing to integrate.
    AlreadyCritical,
    /// Reached `t_end`.
    Completed,
    /// `‖μ‖_F` fell below the critical threshold, or the flow began to
    /// oscillate around the critical set.
    ReachedCritical,
    /// `‖v‖` fell below the collapse threshold.
    Collapsed,
}

/// Sampled trajectory of `v'(t) = −2 Π(μ(v)/‖μ(v)‖_F) v`.
#[derive(Debug, Clone)]
pub struct FlowTrace {
    pub times: Vec<f64>,
    pub vectors: Vec<CVector>,
    /// `‖v(t)‖`.
    pub norms: Vec<f64>,
    /// `‖μ(v(t))‖_F`.
    pub moment_norms: Vec<f64>,
    pub status: FlowStatus,
}

impl FlowTrace {
    /// `‖μ̃(v(t))‖_F = ‖v(t)‖²·‖μ(v(t))‖_F`.
    pub fn scaled_moment_norms(&self) -> Vec<f64> {
        self.norms.iter().zip(&self.moment_norms).map(|(n, m)| n * n * m).collect()
    }

    /// `(t_i, ∂_t‖v‖² + 4‖μ̃‖_F)` at interior samples. The derivative is that
    /// of the Lagrange interpolant through the five nearest samples (fewer
    /// when the trace is short).
    pub fn identity_residuals(&self) -> Vec<(f64, f64)> {
        let sq: Vec<f64> = self.norms.iter().map(|n| n * n).collect();
        let mt = self.scaled_moment_norms();
        let len = self.times.len();
        let width = len.min(5);
        (1..len.saturating_sub(1))
            .map(|i| {
                let lo = i.saturating_sub(width / 2).min(len - width);
                let d = lagrange_derivative(&self.times[lo..lo + width], &sq[lo..lo + width], self.times[i]);
                (self.times[i], d + 4.0 * mt[i])
            })
            .collect()
    }
}

/// Derivative at `x` of the polynomial interpolating `(ts, fs)`.
fn lagrange_derivative(ts: &[f64], fs: &[f64], x: f64) -> f64 {
    let mut total = 0.0;
    for (j, (&tj, &fj)) in ts.iter().zip(fs).enumerate() {
        let mut dl = 0.0;
        for (k, &tk) in ts.iter().enumerate() {
            if k == j {
                continue;
            }
            let mut term = 1.0 / (tj - tk);
            for (m, &tm) in ts.iter().enumerate() {
                if m != j && m != k {
                    term *= (x - tm) / (tj - tm);
                }
            }
            dl += term;
        }
        total += fj * dl;
    }
    total
}

const CRITICAL: f64 = 1e-10;
const COLLAPSE: f64 = 1e-12;
const MAX_HALVINGS: u32 = 10;
const MAX_CHANGE: f64 = 0.05;
const MIN_COSINE: f64 = 0.999;

struct Field<'a> {
    rep: &'a dyn Representation,
    metric: Metric,
    basis: TangentBasis,
}

impl Field<'_> {
    /// Returns `(v', μ(v))` with `μ` in tangent coordinates.
    fn eval(&self, v: &CVector) -> Result<(CVector, DVector<f64>)> {
        let loc = local(self.rep, &self.metric, &self.basis, v)?;
        let norm = loc.m.norm();
        if norm < CRITICAL {
            return Ok((CVector::zeros(v.len()), loc.m));
        }
        let h = self.basis.from_coords(&(&loc.m * (-2.0 / norm)));
        Ok((self.rep.lie_apply(&h, v)?, loc.m))
    }

    /// One RK4 step; also returns `μ` at the first midpoint stage.
    fn rk4(&self, v: &CVector, dt: f64, k1: &CVector) -> Result<(CVector, DVector<f64>)> {
        let (k2, mid) = self.eval(&(v + k1.scale(dt / 2.0)))?;
        let k3 = self.eval(&(v + k2.scale(dt / 2.0)))?.0;
        let k4 = self.eval(&(v + k3.scale(dt)))?.0;
        Ok((v + (k1 + k2.scale(2.0) + k3.scale(2.0) + k4).scale(dt / 6.0), mid))
    }
}

/// Whether `b` is within the allowed change of `a` in norm and direction.
fn close(a: &DVector<f64>, b: &DVector<f64>) -> bool {
    let (na, nb) = (a.norm(), b.norm());
    (nb - na).abs() <= MAX_CHANGE * na && a.dot(b) >= MIN_COSINE * na * nb
}

/// Integrates the normalized moment-map flow with fourth-order Runge–Kutta.
///
/// A step of size `dt` is halved, up to ten times, while from its start to
/// its midpoint stage or from there to its end `‖μ‖_F` changes by more than
/// 5% or the direction of `μ` turns by more than `arccos 0.99`. Every
/// accepted step is recorded. If the smallest step still fails, the
/// trajectory has reached the critical set and integration stops with
/// [`FlowStatus::ReachedCritical`].
pub fn gradient_flow(rep: &dyn Representation, v0: &CVector, t_end: f64, dt: f64) -> Result<FlowTrace> {
    if !(dt > 0.0 && t_end >= 0.0 && dt.is_finite() && t_end.is_finite()) {
        return Err(Error::InvalidInput("need dt > 0 and t_end ≥ 0".into()));
    }
    if v0.iter().all(|z| z.norm() == 0.0) {
        return Err(Error::InvalidInput("initial vector must be nonzero".into()));
    }
    let field = Field { rep, metric: Metric::of(rep), basis: TangentBasis::new(rep.group()) };
    let (mut k1, mut m) = field.eval(v0)?;
    let mut trace = FlowTrace {
        times: Vec::new(),
        vectors: Vec::new(),
        norms: Vec::new(),
        moment_norms: Vec::new(),
        status: FlowStatus::AlreadyCritical,
    };
    if m.norm() < CRITICAL {
        return Ok(trace);
    }
    let mut v = v0.clone();
    let mut t = 0.0;
    let push = |trace: &mut FlowTrace, t: f64, v: &CVector, mu: f64| {
        trace.times.push(t);
        trace.norms.push(field.metric.norm(v));
        trace.vectors.push(v.clone());
        trace.moment_norms.push(mu);
    };
    push(&mut trace, t, &v, m.norm());
    trace.status = FlowStatus::Completed;
    while t < t_end - 1e-12 * t_end.max(1.0) {
        let mut h = dt.min(t_end - t);
        let mut halvings = 0;
        let step = loop {
            let (cand, mid) = field.rk4(&v, h, &k1)?;
            if field.metric.norm(&cand) < COLLAPSE {
                break Some((cand, CVector::zeros(v.len()), DVector::zeros(m.len())));
            }
            let (k, next_m) = field.eval(&cand)?;
            if (close(&m, &mid) && close(&mid, &next_m)) || next_m.norm() < CRITICAL {
                break Some((cand, k, next_m));
            }
            if halvings >= MAX_HALVINGS {
                break None;
            }
            h /= 2.0;
            halvings += 1;
        };
        let Some((next, next_k1, next_m)) = step else {
            trace.status = FlowStatus::ReachedCritical;
            break;
        };
        t += h;
        v = next;
        k1 = next_k1;
        m = next_m;
        push(&mut trace, t, &v, m.norm());
        if field.metric.norm(&v) < COLLAPSE {
            trace.status = FlowStatus::Collapsed;
            break;
        }
        if m.norm() < CRITICAL {
            trace.status = FlowStatus::ReachedCritical;
            break;
        }
    }
    Ok(trace)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::c64;
    use crate::group::GroupKind;
    use crate::reps::operator_scaling_rep;

    #[test]
    fn balanced_start_is_already_critical() {
        let rep = operator_scaling_rep(2, 1, GroupKind::Sl).unwrap();
        let id = CVector::from_vec(vec![c64(1.0, 0.0), c64(0.0, 0.0), c64(0.0, 0.0), c64(1.0, 0.0)]);
        let tr = gradient_flow(rep.as_ref(), &id, 1.0, 0.01).unwrap();
        assert_eq!(tr.status, FlowStatus::AlreadyCritical);
        assert!(tr.times.is_empty());
    }

    #[test]
    fn null_cone_vector_shrinks() {
        let rep = operator_scaling_rep(2, 1, GroupKind::Sl).unwrap();
        let e11 = CVector::from_vec(vec![c64(1.0, 0.0), c64(0.0, 0.0), c64(0.0, 0.0), c64(0.0, 0.0)]);
        let tr = gradient_flow(rep.as_ref(), &e11, 2.0, 1e-2).unwrap();
        let gamma = std::f64::consts::FRAC_1_SQRT_2;
        for (t, n) in tr.times.iter().zip(&tr.norms) {
            assert!(n * n <= (-4.0 * gamma * t).exp() + 1e-9);
        }
        assert!(tr.norms.windows(2).all(|w| w[1] <= w[0] + 1e-15));
    }
}
