//! Matrix scaling by geodesic gradient descent compared with Sinkhorn's iteration.

use geoscale::first_order::{scaling_solve, FirstOrderConfig};
use geoscale::prelude::*;
use nalgebra::DMatrix;

fn main() -> Result<()> {
    let a = DMatrix::from_row_slice(3, 3, &[1.0, 2.0, 3.0, 0.5, 1.0, 2.0, 3.0, 1.0, 1.0]);
    let rep = matrix_scaling_rep(3, GroupKind::Sl)?;
    // The torus acts on entries |a_ij|², so v holds square roots.
    let v = CVector::from_iterator(9, a.transpose().iter().map(|x| c64(f64::sqrt(*x), 0.0)));
    let r = scaling_solve(rep.as_ref(), &v, &FirstOrderConfig::new(1e-6, 10_000))?;
    let w = rep.apply(&r.best_g, &v)?;
    let b = DMatrix::from_fn(3, 3, |i, j| w[3 * i + j].norm_sqr());
    let b = &b / b.sum() * 3.0;
    println!("geodesic scaling ({} iterations):\n{b:.5}", r.iterations_used);

    let mut s = a.clone();
    for _ in 0..500 {
        for i in 0..3 {
            let r = s.row(i).sum();
            s.row_mut(i).unscale_mut(r);
        }
        for j in 0..3 {
            let c = s.column(j).sum();
            s.column_mut(j).unscale_mut(c);
        }
    }
    println!("Sinkhorn:\n{s:.5}");
    println!("max entry difference {:.2e}", (&b - &s).abs().max());
    Ok(())
}
