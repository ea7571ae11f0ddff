//! Command layer behind the `geoscale` binary: resolves parameters, dispatches
//! to the solvers and assembles machine-readable reports.
//!
//! Every default that is not a proven bound is echoed into the report's
//! `provenance` list with source `heuristic`. In particular the default
//! capacity bound `C = 40·ln(10)·m` stands in for the invariant-theoretic
//! capacity lower bound for GT-basis representations, with all constants set
//! to one. For torus actions (including matrix scaling) the bound
//! `C = log(‖v‖ / min_{v_j ≠ 0} |v_j|)` is proven and used instead.

mod problem;

use std::time::Instant;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::first_order::{
    default_cap_log_bound, iteration_budget_scaling, p_scaling_solve, randomized_p_scaling, scaling_solve,
    FirstOrderConfig, ScalingReport, SolveStatus, TracePoint,
};
use crate::geometry::{gradient_flow, kempf_ness, moment_map_at, DualityReport, FlowStatus};
use crate::group::{Block, FactorKind, GroupElement};
use crate::margins::{
    gap_alpha_beta, margin_bounds, margin_lower_bound, weight_matrix_bounds, weight_norm, EnumerationBudget,
    MarginKind, MarginResult, WeightMatrix,
};
use crate::reps::{invariant_norm, Representation, Structure};
use crate::second_order::{norm_minimize, second_order_budget};
use crate::{c64, CVector};

pub use problem::{ComplexEntry, Decimal, Problem, ProblemFile, RationalEntry, RepSpec, SolverParams};

/// Subcommands.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Command {
    Scale,
    Capacity,
    Nullcone,
    Pscale,
    Margin,
    Flow,
}

/// Command-line values; each takes precedence over the problem file.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Overrides {
    pub epsilon: Option<f64>,
    pub max_iterations: Option<usize>,
    pub cap_log_bound: Option<f64>,
    pub gamma: Option<f64>,
    pub seed: Option<u64>,
    pub randomize: bool,
    pub s_override: Option<u64>,
    pub trace_every: Option<usize>,
    pub t_end: Option<f64>,
    pub dt: Option<f64>,
}

/// Process exit codes.
pub mod exit {
    pub const SOLVED: i32 = 0;
    pub const INCONCLUSIVE: i32 = 2;
    pub const INPUT_ERROR: i32 = 3;
    pub const NUMERICAL_FAILURE: i32 = 4;
}

/// Exit code for a library error.
pub fn exit_code_for(e: &Error) -> i32 {
    match e {
        Error::InvalidInput(_) | Error::ContractViolation(_) | Error::Refused(_) | Error::Configuration(_) => {
            exit::INPUT_ERROR
        }
        Error::Singular(_) | Error::Degenerate(_) | Error::RandomnessFailure(_) => exit::NUMERICAL_FAILURE,
    }
}

/// Origin of a resolved parameter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Source {
    CommandLine,
    File,
    Default,
    Derived,
    Heuristic,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub name: String,
    pub value: Value,
    pub source: Source,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

/// A group-element block as written in reports; complex numbers are `[re, im]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BlockOut {
    Dense(Vec<Vec<[f64; 2]>>),
    Diag(Vec<[f64; 2]>),
}

impl BlockOut {
    pub fn from_block(b: &Block) -> Self {
        match b {
            Block::Dense(m) => {
                BlockOut::Dense((0..m.nrows()).map(|i| (0..m.ncols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect()).collect())
            }
            Block::Diag(d) => BlockOut::Diag(d.iter().map(|z| [z.re, z.im]).collect()),
        }
    }

    pub fn to_block(&self) -> Block {
        match self {
            BlockOut::Dense(rows) => Block::Dense(crate::CMatrix::from_fn(rows.len(), rows.len(), |i, j| {
                c64(rows[i][j][0], rows[i][j][1])
            })),
            BlockOut::Diag(d) => Block::Diag(CVector::from_iterator(d.len(), d.iter().map(|z| c64(z[0], z[1])))),
        }
    }
}

/// Rebuilds a group element from report blocks.
pub fn group_element_from_report(blocks: &[BlockOut]) -> GroupElement {
    GroupElement { blocks: blocks.iter().map(BlockOut::to_block).collect() }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FactorOut {
    pub kind: FactorKind,
    pub n: usize,
}

/// Machine-readable command output. Field order is stable.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub command: Command,
    pub input_digest: String,
    pub seed: u64,
    pub status: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verdict: Option<String>,
    pub exit_code: i32,
    pub group: Vec<FactorOut>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub final_g: Option<Vec<BlockOut>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub moment_norm: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub spec_distance: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub spectra: Option<Vec<Vec<f64>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub log_norm: Option<f64>,
    pub objective_trace: Vec<TracePoint>,
    pub provenance: Vec<Provenance>,
    pub notes: Vec<String>,
    pub details: Value,
    pub wall_time_seconds: f64,
}

impl Report {
    fn new(command: Command, problem: &Problem, seed: u64) -> Self {
        let group = problem
            .rep
            .as_ref()
            .map(|r| r.group().factors().iter().map(|f| FactorOut { kind: f.kind, n: f.n }).collect())
            .unwrap_or_default();
        Report {
            command,
            input_digest: problem.digest.clone(),
            seed,
            status: String::new(),
            verdict: None,
            exit_code: exit::SOLVED,
            group,
            final_g: None,
            moment_norm: None,
            spec_distance: None,
            spectra: None,
            log_norm: None,
            objective_trace: Vec::new(),
            provenance: Vec::new(),
            notes: Vec::new(),
            details: Value::Null,
            wall_time_seconds: 0.0,
        }
    }

    fn record(&mut self, name: &str, value: impl Serialize, source: Source, note: Option<&str>) {
        self.provenance.push(Provenance {
            name: name.into(),
            value: serde_json::to_value(value).unwrap_or(Value::Null),
            source,
            note: note.map(str::to_owned),
        });
    }

    fn set_g(&mut self, g: &GroupElement) {
        self.final_g = Some(g.blocks.iter().map(BlockOut::from_block).collect());
    }

    /// Pretty JSON.
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).unwrap_or_else(|e| format!("{{\"error\": \"{e}\"}}"))
    }
}

/// Picks the command-line value, then the file value, then the fallback.
fn resolve<T: Serialize + Copy>(
    report: &mut Report,
    name: &str,
    cli: Option<T>,
    file: Option<T>,
    fallback: impl FnOnce() -> Result<(T, Source, Option<String>)>,
) -> Result<T> {
    let (v, src, note) = match (cli, file) {
        (Some(v), _) => (v, Source::CommandLine, None),
        (None, Some(v)) => (v, Source::File, None),
        (None, None) => fallback()?,
    };
    report.record(name, v, src, note.as_deref());
    Ok(v)
}

const SCALE_ITERATION_CAP: u64 = 200_000;
const CAPACITY_ITERATION_CAP: u64 = 20_000;
const PSCALE_DEFAULT_ITERATIONS: usize = 100_000;

/// `log(‖v‖ / cap(v))` upper bound: proven for actions diagonal in the working basis.
fn default_cap_bound(rep: &dyn Representation, v: &CVector) -> (f64, Source, Option<String>) {
    if matches!(rep.structure(), Structure::Torus | Structure::MatrixScaling { .. }) {
        let norm = invariant_norm(rep, v);
        let min = v.iter().map(|z| z.norm()).filter(|&a| a > 0.0).fold(f64::INFINITY, f64::min);
        let c = (norm / min).ln().max(0.0);
        (c, Source::Derived, Some("torus action: cap(v) ≥ min nonzero |v_j| by weighted AM-GM".into()))
    } else {
        (
            default_cap_log_bound(rep.dim()),
            Source::Heuristic,
            Some("40·ln(10)·m, the GT-basis capacity bound with all constants set to one".into()),
        )
    }
}

/// Runs one command. Library errors are returned; solver outcomes that are
/// not errors (budget exhausted, inconclusive verdicts) are encoded in the report.
pub fn run(command: Command, problem: &Problem, ov: &Overrides) -> Result<Report> {
    let start = Instant::now();
    let seed = ov.seed.or(problem.file.solver.seed).unwrap_or(0);
    let mut report = Report::new(command, problem, seed);
    match command {
        Command::Scale => cmd_scale(problem, ov, &mut report)?,
        Command::Capacity => cmd_capacity(problem, ov, &mut report)?,
        Command::Nullcone => cmd_nullcone(problem, ov, &mut report)?,
        Command::Pscale => cmd_pscale(problem, ov, &mut report, seed)?,
        Command::Margin => cmd_margin(problem, &mut report)?,
        Command::Flow => cmd_flow(problem, ov, &mut report)?,
    }
    report.wall_time_seconds = start.elapsed().as_secs_f64();
    Ok(report)
}

fn margin_json(m: &MarginResult) -> Value {
    json!({
        "value": finite_or_null(m.value),
        "kind": m.kind,
        "method": m.method,
        "witness": m.witness,
    })
}

fn finite_or_null(x: f64) -> Value {
    if x.is_finite() {
        json!(x)
    } else {
        json!(format!("{x}"))
    }
}

/// `γ` from the caller or from the margin module, with whether it is exact.
fn resolve_gamma(rep: &dyn Representation, ov: &Overrides, problem: &Problem, report: &mut Report) -> Result<(f64, bool)> {
    if let Some(g) = ov.gamma.or(problem.file.solver.gamma) {
        if !(g > 0.0) {
            return Err(Error::InvalidInput("gamma must be positive".into()));
        }
        let src = if ov.gamma.is_some() { Source::CommandLine } else { Source::File };
        report.record("gamma", g, src, Some("caller-supplied weight margin, treated as exact"));
        return Ok((g, true));
    }
    let m = margin_lower_bound(rep)?;
    let exact = m.kind == MarginKind::Exact;
    let note = format!("{} via {}", serde_json::to_value(m.kind).unwrap_or_default(), serde_json::to_value(m.method).unwrap_or_default());
    report.record("gamma", finite_or_null(m.value), Source::Derived, Some(&note));
    Ok((m.value, exact))
}

fn resolve_epsilon(problem: &Problem, ov: &Overrides, report: &mut Report, default: f64) -> Result<f64> {
    let eps = resolve(report, "epsilon", ov.epsilon, problem.file.solver.epsilon, || Ok((default, Source::Default, None)))?;
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(Error::InvalidInput("epsilon must be positive".into()));
    }
    Ok(eps)
}

fn resolve_cap(problem: &Problem, ov: &Overrides, report: &mut Report, rep: &dyn Representation, v: &CVector) -> Result<(f64, Source)> {
    let c = resolve(report, "cap_log_bound", ov.cap_log_bound, problem.file.solver.cap_log_bound, || Ok(default_cap_bound(rep, v)))?;
    if !(c >= 0.0 && c.is_finite()) {
        return Err(Error::InvalidInput("cap_log_bound must be nonnegative".into()));
    }
    Ok((c, report.provenance.last().map(|p| p.source).unwrap_or(Source::Default)))
}

fn trace_every(problem: &Problem, ov: &Overrides, report: &mut Report) -> Result<usize> {
    let t = resolve(report, "trace_every", ov.trace_every, problem.file.solver.trace_every, || Ok((100, Source::Default, None)))?;
    if t == 0 {
        return Err(Error::InvalidInput("trace_every must be positive".into()));
    }
    Ok(t)
}

/// Iteration count: explicit, or the scaling budget capped at `cap`. Returns `(T, full budget honoured)`.
fn scaling_iterations(
    problem: &Problem,
    ov: &Overrides,
    report: &mut Report,
    big_n: f64,
    eps: f64,
    c: f64,
) -> Result<(usize, bool)> {
    let budget = iteration_budget_scaling(big_n.max(f64::MIN_POSITIVE), eps, c)?.max(1);
    report.record("iteration_budget", budget, Source::Derived, Some("⌈4N²C/ε²⌉"));
    if let Some(t) = ov.max_iterations.or(problem.file.solver.max_iterations) {
        let src = if ov.max_iterations.is_some() { Source::CommandLine } else { Source::File };
        report.record("max_iterations", t, src, None);
        return Ok((t.max(1), t as u64 >= budget));
    }
    let t = budget.min(SCALE_ITERATION_CAP);
    let note = (t < budget).then(|| format!("budget capped at {SCALE_ITERATION_CAP}"));
    report.record("max_iterations", t, Source::Default, note.as_deref());
    Ok((t as usize, t == budget))
}

fn fill_scaling(report: &mut Report, r: &ScalingReport) {
    report.set_g(&r.best_g);
    report.moment_norm = Some(r.best_grad_norm);
    report.objective_trace = r.trace.clone();
    report.status = serde_json::to_value(r.status).ok().and_then(|v| v.as_str().map(str::to_owned)).unwrap_or_default();
}

fn cmd_scale(problem: &Problem, ov: &Overrides, report: &mut Report) -> Result<()> {
    let rep = problem.rep()?.as_ref();
    let v = problem.vector()?;
    if problem.target.is_some() {
        return Err(Error::InvalidInput("field `target`: not used by `scale`; use `pscale`".into()));
    }
    let big_n = weight_norm(rep);
    report.record("weight_norm", big_n, Source::Derived, None);
    let eps = resolve_epsilon(problem, ov, report, 1e-3)?;
    let (c, _) = resolve_cap(problem, ov, report, rep, v)?;
    let (iters, _) = scaling_iterations(problem, ov, report, big_n, eps, c)?;
    let every = trace_every(problem, ov, report)?;
    let config = FirstOrderConfig::new(eps, iters).with_trace_every(every);
    report.record("step_size", config.step_size.unwrap_or(1.0 / (2.0 * big_n * big_n)), Source::Derived, Some("1/(2N²)"));
    let r = scaling_solve(rep, v, &config)?;
    fill_scaling(report, &r);
    report.log_norm = Some(kempf_ness(rep, v, &r.best_g)?);
    let (gamma, exact) = resolve_gamma(rep, ov, problem, report)?;
    let duality = DualityReport::from_norm(r.best_grad_norm, gamma, big_n.max(f64::MIN_POSITIVE))?;
    if r.status != SolveStatus::Converged {
        report.exit_code = exit::INCONCLUSIVE;
        if r.status == SolveStatus::Collapsed {
            report.notes.push("‖π(g)v‖ underflowed toward 0: v is in or numerically near the null cone".into());
        }
        if r.best_grad_norm >= gamma {
            report.notes.push(format!(
                "‖μ‖ stayed ≥ γ = {gamma:.6} ({}): consistent with v in the null cone",
                if exact { "exact" } else { "lower bound" }
            ));
        }
    }
    report.details = json!({
        "iterations_used": r.iterations_used,
        "best_iteration": r.best_iteration,
        "step_size": r.step_size,
        "duality_bounds": duality,
    });
    Ok(())
}

fn cmd_capacity(problem: &Problem, ov: &Overrides, report: &mut Report) -> Result<()> {
    let rep = problem.rep()?.as_ref();
    let v = problem.vector()?;
    let eps = resolve_epsilon(problem, ov, report, 0.05)?;
    if eps >= 0.5 {
        return Err(Error::InvalidInput("epsilon must be below 1/2 for `capacity`".into()));
    }
    let (c, c_src) = resolve_cap(problem, ov, report, rep, v)?;
    let (gamma, _) = resolve_gamma(rep, ov, problem, report)?;
    let gamma = if gamma.is_finite() { gamma } else { 1.0 };
    let big_n = weight_norm(rep).max(0.5);
    let n = rep.group().total_n();
    let budget = second_order_budget(big_n, n, gamma.min(1.0), c.max(eps), eps)?.max(1);
    report.record("iteration_budget", budget, Source::Derived, Some("⌈24e²(N√n/γ)(log(n/ε)+C)log(C/ε)⌉"));
    let (iters, full) = match ov.max_iterations.or(problem.file.solver.max_iterations) {
        Some(t) => {
            let src = if ov.max_iterations.is_some() { Source::CommandLine } else { Source::File };
            report.record("max_iterations", t, src, None);
            (t.max(1), t as u64 >= budget)
        }
        None => {
            let t = budget.min(CAPACITY_ITERATION_CAP);
            let note = (t < budget).then(|| format!("budget capped at {CAPACITY_ITERATION_CAP}"));
            report.record("max_iterations", t, Source::Default, note.as_deref());
            (t as usize, t == budget)
        }
    };
    let every = trace_every(problem, ov, report)?;
    let r = norm_minimize(rep, v, eps, c, gamma, Some(iters))?;
    report.record("kappa_log", r.params.kappa_log, Source::Derived, Some("log κ, κ = 2n(e^{2C}/2ε)^{1/γ}"));
    report.record("robustness", r.params.robustness, Source::Derived, Some("R = 4·max(N, 1/2)"));
    report.set_g(&r.newton.g_final);
    report.log_norm = Some(r.log_norm);
    report.moment_norm = Some(moment_map_at(rep, v, &r.newton.g_final)?.norm());
    report.objective_trace = r
        .newton
        .objectives
        .iter()
        .enumerate()
        .filter(|(i, _)| i % every == 0 || *i + 1 == r.newton.objectives.len())
        .map(|(i, &value)| TracePoint {
            iteration: i,
            grad_norm: r.newton.steps.get(i).map_or(r.newton.final_grad_norm, |s| s.grad_norm),
            value,
        })
        .collect();
    report.status = match r.newton.status {
        SolveStatus::Converged => "converged".into(),
        _ if full => "completed".into(),
        _ => {
            report.exit_code = exit::INCONCLUSIVE;
            "budget_truncated".into()
        }
    };
    let mut guarantee = "log‖π(g)v‖ − log cap(v) ≤ 3ε holds when C ≥ log(‖v‖/cap(v)), γ ≤ γ(π) and the full budget runs".to_owned();
    if c_src == Source::Heuristic {
        guarantee.push_str("; C is heuristic here");
    }
    report.notes.push(guarantee);
    report.details = json!({
        "iterations_used": r.newton.steps.len(),
        "final_regularized_grad_norm": r.newton.final_grad_norm,
        "objective_final": r.newton.objectives.last(),
        "accuracy": 3.0 * eps,
    });
    Ok(())
}

fn cmd_nullcone(problem: &Problem, ov: &Overrides, report: &mut Report) -> Result<()> {
    let rep = problem.rep()?.as_ref();
    let v = problem.vector()?;
    let big_n = weight_norm(rep);
    report.record("weight_norm", big_n, Source::Derived, None);
    let (gamma, exact) = resolve_gamma(rep, ov, problem, report)?;
    if !gamma.is_finite() {
        report.status = "decided".into();
        report.verdict = Some("semistable".into());
        report.notes.push("every weight-subset hull contains 0, so the null cone is {0}".into());
        report.details = json!({ "gamma_exact": exact });
        return Ok(());
    }
    let eps = gamma / 2.0;
    report.record("epsilon", eps, Source::Derived, Some("γ/2"));
    let (c, c_src) = resolve_cap(problem, ov, report, rep, v)?;
    let (iters, full) = scaling_iterations(problem, ov, report, big_n, eps, c)?;
    let every = trace_every(problem, ov, report)?;
    let floor = invariant_norm(rep, v).ln() - c;
    report.record("value_floor", floor, Source::Derived, Some("log‖v‖ − C; semistable orbits stay above it"));
    let config = FirstOrderConfig::new(eps, iters).with_trace_every(every).with_value_floor(floor);
    let r = scaling_solve(rep, v, &config)?;
    fill_scaling(report, &r);
    report.log_norm = Some(kempf_ness(rep, v, &r.best_g)?);
    let c_proven = c_src != Source::Heuristic;
    let verdict = match r.status {
        SolveStatus::Converged => Some(("semistable", "‖μ‖ ≤ γ/2 < γ, impossible in the null cone".to_owned())),
        SolveStatus::FloorReached => Some((
            "in_null_cone",
            format!("log‖π(g)v‖ fell below log‖v‖ − C{}", if c_proven { "" } else { " (C heuristic)" }),
        )),
        SolveStatus::BudgetExhausted if full && exact => Some((
            "in_null_cone",
            format!("full budget without reaching γ/2{}", if c_proven { "" } else { " (C heuristic)" }),
        )),
        SolveStatus::Collapsed => Some(("in_null_cone", "‖π(g)v‖ underflowed toward 0".to_owned())),
        SolveStatus::BudgetExhausted => None,
    };
    match verdict {
        Some((v, why)) => {
            report.verdict = Some(v.into());
            report.notes.push(why);
            report.status = "decided".into();
        }
        None => {
            report.verdict = Some("inconclusive".into());
            report.status = "inconclusive".into();
            report.exit_code = exit::INCONCLUSIVE;
            report.notes.push(if exact {
                "iteration budget truncated".into()
            } else {
                "γ is only a lower bound and the budget was exhausted".into()
            });
        }
    }
    report.details = json!({
        "gamma_exact": exact,
        "iterations_used": r.iterations_used,
        "solver_status": r.status,
        "full_budget": full,
    });
    Ok(())
}

fn cmd_pscale(problem: &Problem, ov: &Overrides, report: &mut Report, seed: u64) -> Result<()> {
    let rep = problem.rep()?.as_ref();
    let v = problem.vector()?;
    let p = problem.target.as_ref().ok_or_else(|| Error::InvalidInput("field `target`: required by `pscale`".into()))?;
    let eps = resolve_epsilon(problem, ov, report, 1e-2)?;
    let iters = resolve(report, "max_iterations", ov.max_iterations, problem.file.solver.max_iterations, || {
        Ok((PSCALE_DEFAULT_ITERATIONS, Source::Default, None))
    })?;
    let every = trace_every(problem, ov, report)?;
    let config = FirstOrderConfig::new(eps, iters.max(1)).with_trace_every(every);
    let randomize = ov.randomize || problem.file.solver.randomize.unwrap_or(false);
    report.record("randomize", randomize, if ov.randomize { Source::CommandLine } else { Source::Default }, None);
    let (r, extra) = if randomize {
        let s = ov.s_override.or(problem.file.solver.s_override);
        let rr = randomized_p_scaling(rep, v, p, &config, s, seed)?;
        let src = if s.is_some() { Source::Heuristic } else { Source::Derived };
        report.record("s_used", rr.s_used, src, Some("range of the random integer start"));
        report.record("s_theory_log2", rr.s_theory_log2, Source::Derived, None);
        if rr.heuristic {
            report.notes.push("S overridden: the probability-1/2 guarantee is heuristic".into());
        }
        let g0: Vec<BlockOut> = rr.g0.blocks.iter().map(BlockOut::from_block).collect();
        (rr.report, json!({ "g0": g0 }))
    } else {
        (p_scaling_solve(rep, v, p, &config)?, json!({}))
    };
    fill_scaling(report, &r);
    let mu = moment_map_at(rep, v, &r.best_g)?;
    report.spectra = Some(mu.spectra()?);
    report.spec_distance = r.spec_distance;
    report.moment_norm = Some(mu.norm());
    if r.status != SolveStatus::Converged {
        report.exit_code = exit::INCONCLUSIVE;
    }
    report.details = json!({
        "iterations_used": r.iterations_used,
        "step_size": r.step_size,
        "shifted_gradient_norm": r.best_grad_norm,
        "target": (0..p.parts().len()).map(|i| p.part_f64(i)).collect::<Vec<_>>(),
        "randomized": extra,
    });
    Ok(())
}

fn cmd_margin(problem: &Problem, report: &mut Report) -> Result<()> {
    let budget = EnumerationBudget::default();
    let (m, results) = match (&problem.rep, &problem.weights) {
        (Some(rep), _) => (WeightMatrix::from_rep(rep.as_ref())?, margin_bounds(rep.as_ref(), budget)?),
        (None, Some(w)) => (w.clone(), weight_matrix_bounds(w, budget)?),
        (None, None) => return Err(Error::InvalidInput("field `representation`: `margin` needs a representation or `weights`".into())),
    };
    let n = m.max_row_norm();
    report.record("enumeration_budget", json!({"max_order": budget.max_order, "max_rows": budget.max_rows}), Source::Default, None);
    if let Some(rep) = &problem.rep {
        report.record("weight_norm", weight_norm(rep.as_ref()), Source::Derived, None);
    }
    let gap = match gap_alpha_beta(&m, budget) {
        Ok(g) => json!({
            "sigma": g.sigma,
            "alpha": g.alpha.to_string(),
            "beta": g.beta.to_string(),
            "rank": g.rank,
            "totally_unimodular": g.totally_unimodular,
        }),
        Err(e) => json!({ "refused": e.to_string() }),
    };
    if m.nrows() > crate::margins::DEFAULT_SUBSET_LIMIT {
        report.notes.push(format!(
            "{} distinct weights exceed the exact enumeration limit {}; only bounds reported",
            m.nrows(),
            crate::margins::DEFAULT_SUBSET_LIMIT
        ));
    }
    report.status = "computed".into();
    report.details = json!({
        "weight_norm": n,
        "distinct_weights": m.nrows(),
        "columns": m.ncols(),
        "margins": results.iter().map(margin_json).collect::<Vec<_>>(),
        "gap": gap,
    });
    Ok(())
}

fn cmd_flow(problem: &Problem, ov: &Overrides, report: &mut Report) -> Result<()> {
    let rep = problem.rep()?.as_ref();
    let v = problem.vector()?;
    let t_end = resolve(report, "t_end", ov.t_end, problem.file.solver.t_end, || Ok((1.0, Source::Default, None)))?;
    let dt = resolve(report, "dt", ov.dt, problem.file.solver.dt, || Ok((1e-3, Source::Default, None)))?;
    let tr = gradient_flow(rep, v, t_end, dt)?;
    report.status = serde_json::to_value(tr.status).ok().and_then(|v| v.as_str().map(str::to_owned)).unwrap_or_default();
    if tr.status == FlowStatus::AlreadyCritical {
        report.notes.push("μ(v) = 0: v is already critical".into());
        report.moment_norm = Some(0.0);
    } else {
        report.moment_norm = tr.moment_norms.last().copied();
    }
    let residuals = tr.identity_residuals();
    let max_res = residuals.iter().map(|r| r.1.abs()).fold(0.0, f64::max);
    report.details = json!({
        "times": tr.times,
        "norms": tr.norms,
        "moment_norms": tr.moment_norms,
        "scaled_moment_norms": tr.scaled_moment_norms(),
        "identity_residuals": residuals,
        "max_abs_residual": max_res,
    });
    Ok(())
}
