//! Weight norms, exact weight margins, lower bounds and upper-bound witnesses.

use geoscale::margins::{
    gap_alpha_beta, margin_bounds, margin_upper_witness_conjugation, margin_upper_witness_operator_scaling,
    EnumerationBudget, WeightMatrix,
};
use geoscale::prelude::*;

fn main() -> Result<()> {
    let cases: Vec<(&str, Rep)> = vec![
        ("matrix scaling n=3", matrix_scaling_rep(3, GroupKind::Sl)?),
        ("conjugation n=3", conjugation_rep(3, 1, GroupKind::Gl)?),
        ("Kronecker quiver (2,2)", quiver_rep(&[2, 2], &[(0, 1), (0, 1)], GroupKind::Gl)?),
        ("3-tensor (2,2,2)", tensor_rep(&[2, 2, 2], GroupKind::Gl)?),
    ];
    for (name, rep) in &cases {
        println!("{name}: N(π) = {:.4}", weight_norm(rep.as_ref()));
        for m in margin_bounds(rep.as_ref(), EnumerationBudget::default())? {
            println!("    {:?} {:?}: {:.5}", m.kind, m.method, m.value);
        }
    }

    let m = WeightMatrix::from_integers(&[vec![1, -1, 0], vec![0, 1, -1], vec![1, 0, -1]])?;
    let g = gap_alpha_beta(&m, EnumerationBudget::default())?;
    println!("incidence matrix: σ = {:.4}, α = {}, β = {}, TU = {}", g.sigma, g.alpha, g.beta, g.totally_unimodular);

    for n in [4, 8, 16] {
        let w = margin_upper_witness_operator_scaling(n)?;
        println!("operator scaling n = {n}: γ ≤ {:.5} (n^{{-3/2}} = {:.5})", w.value, (n as f64).powf(-1.5));
    }
    let w = margin_upper_witness_conjugation(4)?;
    println!("conjugation n = 4: γ ≤ {:.5}", w.value);
    Ok(())
}
