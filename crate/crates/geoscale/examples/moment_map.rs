//! Kempf–Ness function, moment map and Hessian for the left-right action.

use geoscale::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> Result<()> {
    let rep = operator_scaling_rep(2, 2, GroupKind::Sl)?;
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let v = geoscale::sample::complex_vector(rep.dim(), &mut rng);

    let mu = moment_map(rep.as_ref(), &v)?;
    println!("‖μ(v)‖_F = {:.6}", mu.norm());
    for (i, s) in mu.spectra()?.iter().enumerate() {
        println!("spec μ_{i} = {s:.4?}");
    }

    let g = geoscale::sample::group_element(rep.group(), 0.3, &mut rng);
    println!("F_v(g) = log‖π(g)v‖ = {:.6}", kempf_ness(rep.as_ref(), &v, &g)?);

    let h = hessian(rep.as_ref(), &v, &g)?;
    let eig = h.eigenvalues();
    let n = weight_norm(rep.as_ref());
    println!(
        "Hessian eigenvalues in [{:.3e}, {:.4}] ⊆ [0, 2N²] with N = {n:.4}",
        eig.iter().cloned().fold(f64::INFINITY, f64::min),
        eig.iter().cloned().fold(f64::NEG_INFINITY, f64::max),
    );
    Ok(())
}
