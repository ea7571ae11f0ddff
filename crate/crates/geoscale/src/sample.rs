//! Seeded random instances: vectors, Hermitian directions, unitaries and
//! group elements.

use rand::Rng;

use crate::group::{Block, GroupElement, GroupSpec, LieDirection, TangentBasis};
use crate::numkernels::qr_decompose;
use crate::{c64, CMatrix, CVector, C64};

/// Standard normal sample (Box–Muller).
pub fn std_normal<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    let u1: f64 = 1.0 - rng.random::<f64>();
    let u2: f64 = rng.random::<f64>();
    (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
}

/// Complex Gaussian with independent standard normal parts.
pub fn complex_normal<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    c64(std_normal(rng), std_normal(rng))
}

pub fn complex_vector<R: Rng + ?Sized>(m: usize, rng: &mut R) -> CVector {
    CVector::from_fn(m, |_, _| complex_normal(rng))
}

/// Vector with Gaussian-integer entries `a + ib`, `|a|, |b| ≤ bound`.
pub fn gaussian_integer_vector<R: Rng + ?Sized>(m: usize, bound: i64, rng: &mut R) -> CVector {
    CVector::from_fn(m, |_, _| {
        c64(rng.random_range(-bound..=bound) as f64, rng.random_range(-bound..=bound) as f64)
    })
}

pub fn complex_matrix<R: Rng + ?Sized>(n: usize, rng: &mut R) -> CMatrix {
    CMatrix::from_fn(n, n, |_, _| complex_normal(rng))
}

/// Haar-like unitary from the QR factor of a Gaussian matrix.
pub fn unitary<R: Rng + ?Sized>(n: usize, rng: &mut R) -> CMatrix {
    loop {
        if let Ok((k, _)) = qr_decompose(&complex_matrix(n, rng)) {
            return k;
        }
    }
}

/// Random direction of Frobenius norm `scale`.
pub fn lie_direction<R: Rng + ?Sized>(spec: &GroupSpec, scale: f64, rng: &mut R) -> LieDirection {
    let tb = TangentBasis::new(spec);
    let mut c = nalgebra::DVector::from_fn(tb.len(), |_, _| std_normal(rng));
    let norm = c.norm();
    if norm > 0.0 {
        c.scale_mut(scale / norm);
    }
    tb.from_coords(&c)
}

/// Random element `k·e^H` with `‖H‖_F = spread` and `k` in the maximal
/// compact subgroup (unit determinant for special factors).
pub fn group_element<R: Rng + ?Sized>(spec: &GroupSpec, spread: f64, rng: &mut R) -> GroupElement {
    let h = lie_direction(spec, spread, rng);
    let p = GroupElement::exp(&h).expect("random direction is Hermitian");
    let blocks = spec
        .factors()
        .iter()
        .zip(p.blocks)
        .map(|(f, pb)| {
            let k = if f.kind.is_torus() {
                let mut phases: Vec<f64> =
                    (0..f.n).map(|_| rng.random_range(-std::f64::consts::PI..std::f64::consts::PI)).collect();
                if f.kind.is_special() {
                    let mean = phases.iter().sum::<f64>() / f.n as f64;
                    phases.iter_mut().for_each(|t| *t -= mean);
                }
                Block::Diag(CVector::from_iterator(f.n, phases.iter().map(|t| C64::from_polar(1.0, *t))))
            } else {
                let mut k = unitary(f.n, rng);
                if f.kind.is_special() {
                    let root = k.determinant().powf(1.0 / f.n as f64);
                    k = k.map(|z| z / root);
                }
                Block::Dense(k)
            };
            k.mul(&pb)
        })
        .collect();
    GroupElement { blocks }
}
