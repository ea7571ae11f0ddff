//! Gelfand–Tsetlin patterns and the exact Lie-algebra action on V_λ.

use geoscale::gt::{enumerate_patterns, GtIrrep, HighestWeight};
use geoscale::prelude::*;

fn main() -> Result<()> {
    let lambda = HighestWeight::new(vec![2, 1, 0])?;
    let patterns = enumerate_patterns(&lambda);
    println!("dim V_(2,1,0) = {}", patterns.len());
    for p in &patterns {
        println!("  {:?}  weight {:?}", p.rows(), p.weight());
    }

    let irrep = GtIrrep::new(lambda)?;
    let e12 = irrep.lie_matrix_exact(1, 2)?;
    let hw = irrep.highest_weight_index();
    println!("E_12 kills the highest-weight vector: {}", e12.iter().all(|row| num::Zero::is_zero(&row[hw])));

    let g = CMatrix::from_fn(3, 3, |i, j| c64(if i == j { 2.0 } else { 0.5 * (i + j) as f64 }, 0.0));
    let m = irrep.group_matrix(&g)?;
    println!("π(g) is {}×{}, det g = {:.3}", m.nrows(), m.ncols(), g.determinant().re);

    let rep = gt_orthonormal_rep(&[vec![vec![2, 0]], vec![vec![1, 1]]], &[2])?;
    println!("Sym² ⊕ det over GL(2): dimension {}, N(π) = {:.4}", rep.dim(), weight_norm(rep.as_ref()));
    Ok(())
}
