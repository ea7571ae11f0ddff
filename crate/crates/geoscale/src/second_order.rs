//! Box-constrained geodesic Newton method and regularized norm minimization.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::first_order::SolveStatus;
use crate::geometry::{regularized_gradient_hessian, HessianForm};
use crate::group::{GroupElement, GroupSpec, LieDirection};
use crate::margins::weight_norm;
use crate::numkernels::{ball_constrained_qp, TrustRegionProblem};
use crate::reps::Representation;
use crate::CVector;

const E2: f64 = std::f64::consts::E * std::f64::consts::E;

/// Parameters of [`second_order_minimize`].
#[derive(Debug, Clone, PartialEq)]
pub struct SecondOrderConfig {
    /// Robustness `R ≥ 1`; steps have norm at most `1/R` before the `1/e²` damping.
    pub robustness: f64,
    pub epsilon: f64,
    pub max_iterations: usize,
    /// Stop once `‖∇F‖_F` falls below this value.
    pub gradient_tolerance: f64,
}

impl SecondOrderConfig {
    pub fn new(robustness: f64, epsilon: f64, max_iterations: usize) -> Self {
        SecondOrderConfig { robustness, epsilon, max_iterations, gradient_tolerance: epsilon * 1e-3 }
    }

    fn validate(&self) -> Result<()> {
        if !(self.robustness >= 1.0) {
            return Err(Error::InvalidInput("robustness R must be at least 1".into()));
        }
        if !(self.epsilon > 0.0 && self.epsilon < 0.5) {
            return Err(Error::InvalidInput("ε must lie in (0, 1/2)".into()));
        }
        if self.max_iterations == 0 {
            return Err(Error::InvalidInput("max_iterations must be at least 1".into()));
        }
        Ok(())
    }
}

/// Diagnostics of one Newton step.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NewtonStep {
    pub iteration: usize,
    pub objective: f64,
    pub grad_norm: f64,
    /// `‖H_t‖_F` of the subproblem solution.
    pub step_norm: f64,
    /// Model value `q_−(H_t) = tr[∇F·H_t] + (1/2e)∇²F(H_t, H_t)`.
    pub model: f64,
    /// `F(g_{t+1}) − F(g_t)`.
    pub actual: f64,
}

/// Output of a second-order run.
#[derive(Debug, Clone)]
pub struct NewtonReport {
    pub g_final: GroupElement,
    /// `F(g_0), F(g_1), …`.
    pub objectives: Vec<f64>,
    pub steps: Vec<NewtonStep>,
    pub final_grad_norm: f64,
    pub status: SolveStatus,
}

/// Objective, gradient and Hessian at a point.
pub struct SecondOrderEvaluation {
    pub value: f64,
    pub gradient: LieDirection,
    pub hessian: HessianForm,
}

/// Geodesic trust-region Newton method: at each step solves the ball-constrained
/// quadratic model with radius `1/R` and moves to `e^{H_t/e²} g_t`.
pub fn second_order_minimize(
    spec: &GroupSpec,
    mut oracle: impl FnMut(&GroupElement) -> Result<SecondOrderEvaluation>,
    config: &SecondOrderConfig,
) -> Result<NewtonReport> {
    config.validate()?;
    let mut g = GroupElement::identity(spec);
    let mut ev = oracle(&g)?;
    let mut objectives = vec![ev.value];
    let mut steps = Vec::new();
    let mut status = SolveStatus::BudgetExhausted;
    for t in 0..config.max_iterations {
        let grad_norm = ev.gradient.norm();
        if grad_norm < config.gradient_tolerance {
            status = SolveStatus::Converged;
            break;
        }
        let basis = &ev.hessian.basis;
        let prob = TrustRegionProblem {
            linear: basis.coords(&ev.gradient),
            quadratic: ev.hessian.matrix.clone(),
            radius: 1.0 / config.robustness,
        };
        let h = ball_constrained_qp(&prob)?;
        let model = prob.objective(&h);
        let dir = basis.from_coords(&h);
        let next = GroupElement::exp(&dir.scale(1.0 / E2))?.mul(&g);
        let next_ev = oracle(&next)?;
        steps.push(NewtonStep {
            iteration: t,
            objective: ev.value,
            grad_norm,
            step_norm: h.norm(),
            model,
            actual: next_ev.value - ev.value,
        });
        g = next;
        ev = next_ev;
        objectives.push(ev.value);
        if !ev.value.is_finite() {
            return Err(Error::Degenerate(format!("objective became non-finite at iteration {t}")));
        }
    }
    if status == SolveStatus::BudgetExhausted && ev.gradient.norm() < config.gradient_tolerance {
        status = SolveStatus::Converged;
    }
    Ok(NewtonReport { g_final: g, objectives, steps, final_grad_norm: ev.gradient.norm(), status })
}

/// Parameters chosen by [`norm_minimize`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NormMinimizeParams {
    pub kappa_log: f64,
    pub robustness: f64,
    pub weight_norm: f64,
    pub gamma: f64,
    pub iterations: usize,
}

/// Output of [`norm_minimize`].
#[derive(Debug, Clone)]
pub struct NormMinimizeReport {
    pub newton: NewtonReport,
    pub params: NormMinimizeParams,
    /// `log‖π(g_final)v‖`.
    pub log_norm: f64,
}

/// `log κ` with `κ = 2n(e^{2C}/2ε)^{1/γ}`; refuses when the exponent exceeds 300.
pub fn kappa_log(n: usize, epsilon: f64, cap_log_bound: f64, gamma: f64) -> Result<f64> {
    let expo = (2.0 * cap_log_bound + (1.0 / (2.0 * epsilon)).ln()) / gamma;
    if !(expo <= 300.0) {
        return Err(Error::Configuration(format!(
            "regularization exponent (2C + log(1/2ε))/γ = {expo:.1} exceeds 300; use the first-order solver instead"
        )));
    }
    Ok((2.0 * n as f64).ln() + expo)
}

/// Norm minimization: minimizes `log‖π(g)v‖ + (ε/κ)·reg(g)` by
/// [`second_order_minimize`] with `R = 4N`, `N = max(N(π), ½)`, `γ ← min(γ, 1)`.
pub fn norm_minimize(
    rep: &dyn Representation,
    v: &CVector,
    epsilon: f64,
    cap_log_bound: f64,
    gamma: f64,
    max_iterations: Option<usize>,
) -> Result<NormMinimizeReport> {
    if v.iter().all(|z| z.norm() == 0.0) {
        return Err(Error::InvalidInput("vector must be nonzero".into()));
    }
    if !(gamma > 0.0) || !(cap_log_bound >= 0.0) {
        return Err(Error::InvalidInput("need γ > 0 and C ≥ 0".into()));
    }
    if !(epsilon > 0.0 && epsilon < 0.5) {
        return Err(Error::InvalidInput("ε must lie in (0, 1/2)".into()));
    }
    let spec = rep.group().clone();
    let n = spec.total_n();
    let gamma = gamma.min(1.0);
    let big_n = weight_norm(rep).max(0.5);
    let klog = kappa_log(n, epsilon, cap_log_bound, gamma)?;
    let kappa = klog.exp();
    let iterations = match max_iterations {
        Some(t) => t,
        None => usize::try_from(second_order_budget(big_n, n, gamma, cap_log_bound.max(epsilon), epsilon)?)
            .unwrap_or(usize::MAX),
    };
    let config = SecondOrderConfig::new(4.0 * big_n, epsilon, iterations.max(1));
    let newton = second_order_minimize(
        &spec,
        |g| {
            let loc = regularized_gradient_hessian(rep, v, g, kappa, epsilon)?;
            Ok(SecondOrderEvaluation { value: loc.value, gradient: loc.gradient.to_direction(), hessian: loc.hessian })
        },
        &config,
    )?;
    let log_norm = crate::geometry::kempf_ness(rep, v, &newton.g_final)?;
    Ok(NormMinimizeReport {
        newton,
        params: NormMinimizeParams { kappa_log: klog, robustness: 4.0 * big_n, weight_norm: big_n, gamma, iterations },
        log_norm,
    })
}

/// `⌈24e²·(N√n/γ)·(log(n/ε) + C)·log(C/ε)⌉`.
pub fn second_order_budget(weight_norm: f64, n: usize, gamma: f64, cap_log_bound: f64, epsilon: f64) -> Result<u64> {
    if !(weight_norm > 0.0 && n > 0 && gamma > 0.0 && cap_log_bound > 0.0 && epsilon > 0.0 && epsilon < 0.5) {
        return Err(Error::InvalidInput("budget arguments must be positive with ε < 1/2".into()));
    }
    let nf = n as f64;
    let x = 24.0 * E2 * (weight_norm * nf.sqrt() / gamma)
        * ((nf / epsilon).ln() + cap_log_bound)
        * (cap_log_bound / epsilon).ln().max(0.0);
    Ok(x.ceil() as u64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::c64;
    use crate::group::FactorKind;
    use crate::reps::torus_rep;

    #[test]
    fn budget_example() {
        assert_eq!(second_order_budget(0.5, 1, 1.0, 1.0, 0.1).unwrap(), 675);
        let a = second_order_budget(0.5, 1, 0.5, 1.0, 0.1).unwrap() as f64;
        let b = second_order_budget(0.5, 1, 1.0, 1.0, 0.1).unwrap() as f64;
        assert!((a / b - 2.0).abs() < 1e-2);
    }

    #[test]
    fn zero_gradient_returns_identity() {
        let spec = GroupSpec::new([(FactorKind::Torus, 1)]).unwrap();
        let basis = crate::group::TangentBasis::new(&spec);
        let r = second_order_minimize(
            &spec,
            |_| {
                Ok(SecondOrderEvaluation {
                    value: 0.0,
                    gradient: LieDirection::zeros(&spec),
                    hessian: HessianForm { basis: basis.clone(), matrix: nalgebra::DMatrix::identity(1, 1) },
                })
            },
            &SecondOrderConfig::new(1.0, 0.1, 10),
        )
        .unwrap();
        assert_eq!(r.g_final, GroupElement::identity(&spec));
        assert!(r.steps.is_empty());
    }

    #[test]
    fn kappa_refusal() {
        assert!(matches!(kappa_log(2, 0.1, 10.0, 0.01), Err(Error::Configuration(_))));
        assert!(kappa_log(2, 0.1, 1.0, 1.0).is_ok());
    }

    #[test]
    fn torus_toy_descends() {
        let rep = torus_rep(&[vec![1], vec![-1]]).unwrap();
        let v = CVector::from_vec(vec![c64(2.0, 0.0), c64(1.0, 0.0)]);
        let r = norm_minimize(rep.as_ref(), &v, 0.01, 1.0, 1.0, Some(200)).unwrap();
        assert!(r.newton.objectives.windows(2).all(|w| w[1] <= w[0] + 1e-10));
        let cap = 0.5 * 4f64.ln();
        assert!(r.log_norm - cap < 0.03);
    }
}
