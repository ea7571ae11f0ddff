//! Second-order norm minimization on a torus and on the left-right action.

use geoscale::prelude::*;

fn main() -> Result<()> {
    // T(1) acting on C² with weights ±1: cap(v)² = 2|v₁||v₂|.
    let rep = torus_rep(&[vec![1], vec![-1]])?;
    let v = CVector::from_vec(vec![c64(2.0, 0.0), c64(1.0, 0.0)]);
    let r = norm_minimize(rep.as_ref(), &v, 0.01, 1.0, 1.0, Some(300))?;
    println!(
        "torus: log‖π(g)v‖ = {:.6}, log cap = {:.6}, {} Newton steps",
        r.log_norm,
        0.5 * 4f64.ln(),
        r.newton.steps.len()
    );

    let rep = operator_scaling_rep(2, 2, GroupKind::Sl)?;
    let v = CVector::from_fn(8, |i, _| c64([1.0, 2.0, 0.0, 1.0, 3.0, 0.0, 1.0, 1.0][i], 0.0));
    let r = norm_minimize(rep.as_ref(), &v, 0.05, 2.0, 1.0 / 2f64.sqrt(), Some(500))?;
    let first = r.newton.objectives[0];
    let last = *r.newton.objectives.last().unwrap();
    println!(
        "left-right: regularized objective {first:.5} → {last:.5}, log‖π(g)v‖ = {:.5}, log κ = {:.2}",
        r.log_norm, r.params.kappa_log
    );
    Ok(())
}
