//! Moment-polytope membership for 2×2 tensors via p-scaling, plain and randomized.

use geoscale::first_order::{p_scaling_solve, randomized_p_scaling, FirstOrderConfig};
use geoscale::geometry::TargetSpectrum;
use geoscale::prelude::*;
use num::rational::Rational64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> Result<()> {
    let rep = tensor_rep(&[2, 2], GroupKind::Gl)?;
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let v = geoscale::sample::complex_vector(4, &mut rng);
    let q = |a, b| Rational64::new(a, b);
    let p = TargetSpectrum::new(vec![vec![q(3, 4), q(1, 4)], vec![q(3, 4), q(1, 4)]])?;

    let config = FirstOrderConfig::new(1e-3, 100_000);
    let r = p_scaling_solve(rep.as_ref(), &v, &p, &config)?;
    println!("plain: {:?}, spec distance {:.2e}, {} iterations", r.status, r.spec_distance.unwrap(), r.iterations_used);

    for seed in 0..3 {
        let rr = randomized_p_scaling(rep.as_ref(), &v, &p, &config, Some(10), seed)?;
        println!(
            "randomized seed {seed}: {:?}, spec distance {:.2e} (S = {}, theoretical log₂ S = {:.1})",
            rr.report.status,
            rr.report.spec_distance.unwrap(),
            rr.s_used,
            rr.s_theory_log2
        );
    }
    Ok(())
}
