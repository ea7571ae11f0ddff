//! Normalized moment-map flow and the identity ∂_t‖v‖² = −4‖μ̃‖.

use geoscale::prelude::*;

fn main() -> Result<()> {
    let rep = operator_scaling_rep(2, 1, GroupKind::Sl)?;
    let v = CVector::from_vec(vec![c64(1.0, 0.0), c64(0.5, 0.0), c64(0.0, 0.0), c64(0.0, 0.0)]);
    let tr = gradient_flow(rep.as_ref(), &v, 2.0, 1e-3)?;
    println!("status {:?}, {} samples", tr.status, tr.times.len());
    for i in (0..tr.times.len()).step_by(400) {
        println!("t = {:.3}: ‖v‖ = {:.6}, ‖μ‖ = {:.6}", tr.times[i], tr.norms[i], tr.moment_norms[i]);
    }
    let worst = tr.identity_residuals().iter().map(|r| r.1.abs()).fold(0.0, f64::max);
    println!("max |∂_t‖v‖² + 4‖μ̃‖| = {worst:.2e}");
    Ok(())
}
