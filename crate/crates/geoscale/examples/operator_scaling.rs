//! First-order operator scaling with the duality sandwich on capacity.

use geoscale::first_order::{scaling_solve, FirstOrderConfig};
use geoscale::geometry::DualityReport;
use geoscale::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> Result<()> {
    let rep = operator_scaling_rep(3, 3, GroupKind::Sl)?;
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let v = geoscale::sample::gaussian_integer_vector(rep.dim(), 10, &mut rng);

    let n = weight_norm(rep.as_ref());
    let gamma = margin_lower_bound(rep.as_ref())?;
    println!("N(π) = {n:.4}, γ = {:.4} ({:?})", gamma.value, gamma.kind);

    let config = FirstOrderConfig::new(1e-6, 20_000).with_trace_every(50);
    let report = scaling_solve(rep.as_ref(), &v, &config)?;
    println!("{:?} after {} iterations, ‖μ‖ = {:.3e}", report.status, report.iterations_used, report.best_grad_norm);

    let norm0 = report.trace[0].value;
    for p in report.trace.iter().take(6) {
        let d = DualityReport::from_norm(p.grad_norm, gamma.value, n)?;
        println!(
            "t = {:>4}: {:.4} ≤ cap²/‖v_t‖² ≤ {:.4}   log‖v_t‖ − log‖v‖ = {:.4}",
            p.iteration,
            d.lower_bound,
            d.upper_bound,
            p.value - norm0
        );
    }
    Ok(())
}
