use geoscale::group::{Block, GroupElement, GroupSpec, LieDirection, TangentBasis};
use geoscale::gt::{enumerate_patterns, gt_orthonormal_rep, GtIrrep, HighestWeight};
use geoscale::numkernels::herm_exp;
use geoscale::reps::{lie_matrix, restrict_to_sl, Representation};
use geoscale::sample;
use geoscale::{c64, CMatrix, CVector};
use num::{BigRational, One, Zero};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn irrep(l: &[i64]) -> GtIrrep {
    GtIrrep::new(HighestWeight::new(l.to_vec()).unwrap()).unwrap()
}

fn qmul(a: &[Vec<BigRational>], b: &[Vec<BigRational>]) -> Vec<Vec<BigRational>> {
    let m = a.len();
    (0..m)
        .map(|i| (0..m).map(|j| (0..m).fold(BigRational::zero(), |acc, k| acc + &a[i][k] * &b[k][j])).collect())
        .collect()
}

fn qsub(a: &[Vec<BigRational>], b: &[Vec<BigRational>]) -> Vec<Vec<BigRational>> {
    a.iter().zip(b).map(|(r, s)| r.iter().zip(s).map(|(x, y)| x - y).collect()).collect()
}

#[test]
fn bracket_relations_hold_exactly() {
    for lambda in [vec![2, 1, 0], vec![3, 1], vec![2, 1, 1, 0], vec![1, 0, 0, 0]] {
        let r = irrep(&lambda);
        let n = lambda.len();
        let m = r.dim();
        for i in 1..=n {
            for j in 1..=n {
                for k in 1..=n {
                    for l in 1..=n {
                        let a = r.lie_matrix_exact(i, j).unwrap();
                        let b = r.lie_matrix_exact(k, l).unwrap();
                        let lhs = qsub(&qmul(&a, &b), &qmul(&b, &a));
                        let mut rhs = vec![vec![BigRational::zero(); m]; m];
                        if j == k {
                            rhs = r.lie_matrix_exact(i, l).unwrap();
                        }
                        if l == i {
                            rhs = qsub(&rhs, &r.lie_matrix_exact(k, j).unwrap());
                        }
                        assert_eq!(lhs, rhs, "λ={lambda:?} [E{i}{j}, E{k}{l}]");
                    }
                }
            }
        }
    }
}

#[test]
fn highest_weight_vector_is_annihilated_by_raising_operators() {
    for lambda in [vec![2, 1, 0], vec![3, 1, 0], vec![2, 2, 1, 0]] {
        let r = irrep(&lambda);
        let hw = r.highest_weight_index();
        assert_eq!(r.patterns()[hw].weight(), lambda);
        for i in 1..lambda.len() {
            for j in (i + 1)..=lambda.len() {
                let e = r.lie_matrix_exact(i, j).unwrap();
                assert!(e.iter().all(|row| row[hw].is_zero()));
            }
        }
        assert!(r.gram_exact()[hw].is_one());
    }
}

#[test]
fn patterns_are_valid_and_decreasing() {
    let lambda = HighestWeight::new(vec![3, 1, 0]).unwrap();
    let ps = enumerate_patterns(&lambda);
    assert_eq!(ps.len(), 15);
    assert!(ps.iter().all(|p| p.is_valid()));
    for w in ps.windows(2) {
        let key = |p: &geoscale::gt::GtPattern| p.rows().iter().rev().flatten().copied().collect::<Vec<_>>();
        assert!(key(&w[0]) > key(&w[1]));
    }
}

#[test]
fn orthonormal_lie_action_is_hermitian() {
    let rep = gt_orthonormal_rep(&[vec![vec![2, 1, 0]]], &[3]).unwrap();
    let basis = TangentBasis::new(rep.group());
    for b in 0..basis.len() {
        let m = lie_matrix(rep.as_ref(), &basis.direction(b)).unwrap();
        assert!((&m - m.adjoint()).norm() < 1e-10, "direction {b}");
    }
}

#[test]
fn defining_rep_matches_matrix_action() {
    let r = irrep(&[1, 0, 0]);
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let g = sample::complex_matrix(3, &mut rng);
    let m = r.orthonormalize(&r.group_matrix(&g).unwrap());
    assert!((&m - &g).norm() < 1e-9, "{m} vs {g}");
    assert_eq!(r.gram().as_slice(), &[1.0, 1.0, 4.0]);
}

#[test]
fn norms_respect_distortion_bound() {
    for lambda in [vec![2, 1, 0], vec![3, 2, 0], vec![2, 1, 1, 0]] {
        let r = irrep(&lambda);
        let nd = (lambda.len() as f64) * (lambda.iter().sum::<i64>() as f64);
        let bound = (nd * nd.ln()).exp();
        for g in r.gram().iter() {
            assert!(g.sqrt() <= bound && *g >= 1.0 / (bound * bound));
        }
    }
}

#[test]
fn exponential_matches_lie_action() {
    let rep = gt_orthonormal_rep(&[vec![vec![2, 1, 0]], vec![vec![1, 1, 0]]], &[3]).unwrap();
    let spec = rep.group().clone();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let h = sample::lie_direction(&spec, 0.7, &mut rng);
    let g = GroupElement::exp(&h).unwrap();
    let v = sample::complex_vector(rep.dim(), &mut rng);
    let direct = rep.apply(&g, &v).unwrap();
    let via_lie = herm_exp(&lie_matrix(rep.as_ref(), &h).unwrap()).unwrap() * &v;
    assert!((direct - via_lie).norm() < 1e-8 * v.norm());
}

#[test]
fn tensor_of_irreps_over_two_factors() {
    let rep = gt_orthonormal_rep(&[vec![vec![1, 0], vec![2, 0]]], &[2, 2]).unwrap();
    assert_eq!(rep.dim(), 6);
    let sl = restrict_to_sl(rep.clone()).unwrap();
    assert!(sl.group().is_all_special());
    let t = c64(2.0, 0.0);
    let g = GroupElement {
        blocks: vec![
            Block::Dense(CMatrix::from_diagonal(&CVector::from_vec(vec![t, c64(1.0, 0.0)]))),
            Block::Dense(CMatrix::identity(2, 2)),
        ],
    };
    let mut v = CVector::zeros(6);
    v[0] = c64(1.0, 0.0);
    let out = rep.apply(&g, &v).unwrap();
    assert!((out[0] - t).norm() < 1e-12);
}

#[test]
fn mismatched_summand_is_rejected() {
    assert!(gt_orthonormal_rep(&[vec![vec![1, 0, 0]]], &[2]).is_err());
    assert!(gt_orthonormal_rep(&[], &[2]).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn group_action_is_a_homomorphism(seed in any::<u64>()) {
        let rep = gt_orthonormal_rep(&[vec![vec![2, 1, 0]]], &[3]).unwrap();
        let spec: GroupSpec = rep.group().clone();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = sample::group_element(&spec, 0.5, &mut rng);
        let h = sample::group_element(&spec, 0.5, &mut rng);
        let v = sample::complex_vector(rep.dim(), &mut rng);
        let gh = g.mul(&h);
        let lhs = rep.apply(&gh, &v).unwrap();
        let rhs = rep.apply(&g, &rep.apply(&h, &v).unwrap()).unwrap();
        prop_assert!((&lhs - &rhs).norm() <= 1e-8 * lhs.norm().max(1.0));
    }

    #[test]
    fn unitaries_act_isometrically(seed in any::<u64>()) {
        let rep = gt_orthonormal_rep(&[vec![vec![2, 0, 0]], vec![vec![1, 1, 0]]], &[3]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let k = GroupElement { blocks: vec![Block::Dense(sample::unitary(3, &mut rng))] };
        let v = sample::complex_vector(rep.dim(), &mut rng);
        let out = rep.apply(&k, &v).unwrap();
        prop_assert!((out.norm() - v.norm()).abs() <= 1e-9 * v.norm());
    }
}

#[test]
fn lie_direction_shape_is_checked() {
    let rep = gt_orthonormal_rep(&[vec![vec![1, 0]]], &[2]).unwrap();
    let bad = LieDirection { blocks: vec![Block::Dense(CMatrix::zeros(3, 3))] };
    assert!(rep.lie_apply(&bad, &CVector::zeros(2)).is_err());
}
