use geoscale::first_order::{p_scaling_solve, randomized_p_scaling, scaling_solve, FirstOrderConfig, SolveStatus};
use geoscale::geometry::{hessian, kempf_ness, moment_map_at};
use geoscale::prelude::*;
use geoscale::sample;
use geoscale::second_order::{SecondOrderConfig, SecondOrderEvaluation};
use num::rational::Rational64;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const E2: f64 = std::f64::consts::E * std::f64::consts::E;

fn reps() -> Vec<Rep> {
    vec![
        operator_scaling_rep(2, 2, GroupKind::Sl).unwrap(),
        operator_scaling_rep(3, 2, GroupKind::Sl).unwrap(),
        tensor_rep(&[2, 2, 2], GroupKind::Sl).unwrap(),
        matrix_scaling_rep(3, GroupKind::Sl).unwrap(),
        torus_rep(&[vec![1, 0], vec![0, 1], vec![-1, -1]]).unwrap(),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn first_order_descends_monotonically(which in 0usize..5, seed in any::<u64>()) {
        let rep = &reps()[which];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let v = sample::complex_vector(rep.dim(), &mut rng);
        let r = scaling_solve(rep.as_ref(), &v, &FirstOrderConfig::new(1e-6, 300).with_trace_every(1)).unwrap();
        for w in r.trace.windows(2) {
            prop_assert!(w[1].value <= w[0].value + 1e-12, "{:?}", w);
        }
    }

    #[test]
    fn second_order_steps_respect_radius_and_model(which in 0usize..5, seed in any::<u64>()) {
        let rep = &reps()[which];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let v = sample::complex_vector(rep.dim(), &mut rng);
        let robustness = 4.0 * weight_norm(rep.as_ref()).max(0.5);
        let config = SecondOrderConfig::new(robustness, 1e-6, 40);
        let report = second_order_minimize(
            rep.group(),
            |g| Ok(SecondOrderEvaluation {
                value: kempf_ness(rep.as_ref(), &v, g)?,
                gradient: moment_map_at(rep.as_ref(), &v, g)?.to_direction(),
                hessian: hessian(rep.as_ref(), &v, g)?,
            }),
            &config,
        ).unwrap();
        for s in &report.steps {
            prop_assert!(s.step_norm <= 1.0 / robustness + 1e-9);
            prop_assert!(s.model <= 1e-12);
            prop_assert!(s.actual <= s.model / E2 + 1e-8, "{s:?}");
        }
    }

    #[test]
    fn spec_distance_is_bounded_by_shifted_gradient(seed in any::<u64>()) {
        let rep = tensor_rep(&[2, 2], GroupKind::Gl).unwrap();
        let r = |a, b| Rational64::new(a, b);
        let p = TargetSpectrum::new(vec![vec![r(2, 3), r(1, 3)], vec![r(2, 3), r(1, 3)]]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let v = sample::complex_vector(4, &mut rng);
        let report = p_scaling_solve(rep.as_ref(), &v, &p, &FirstOrderConfig::new(1e-4, 2000)).unwrap();
        prop_assert!(report.spec_distance.unwrap() <= report.best_grad_norm + 1e-9);
    }
}

#[test]
fn solvers_are_deterministic() {
    let rep = operator_scaling_rep(3, 2, GroupKind::Sl).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let v = sample::complex_vector(rep.dim(), &mut rng);
    let config = FirstOrderConfig::new(1e-8, 500).with_trace_every(10);
    let a = scaling_solve(rep.as_ref(), &v, &config).unwrap();
    let b = scaling_solve(rep.as_ref(), &v, &config).unwrap();
    assert_eq!(a.trace, b.trace);
    assert_eq!(a.best_g, b.best_g);

    let t = tensor_rep(&[2, 2], GroupKind::Gl).unwrap();
    let r = |a, b| Rational64::new(a, b);
    let p = TargetSpectrum::new(vec![vec![r(3, 4), r(1, 4)], vec![r(3, 4), r(1, 4)]]).unwrap();
    let w = sample::complex_vector(4, &mut rng);
    let c = FirstOrderConfig::new(1e-3, 5000);
    let x = randomized_p_scaling(t.as_ref(), &w, &p, &c, Some(100), 42).unwrap();
    let y = randomized_p_scaling(t.as_ref(), &w, &p, &c, Some(100), 42).unwrap();
    assert_eq!(x.g0, y.g0);
    assert_eq!(x.report.best_g, y.report.best_g);
    assert!(x.heuristic);
}

#[test]
fn uniform_target_matches_special_linear_scaling() {
    let gl = tensor_rep(&[2, 3], GroupKind::Gl).unwrap();
    let sl = tensor_rep(&[2, 3], GroupKind::Sl).unwrap();
    let p = TargetSpectrum::uniform(&[2, 3], &[Rational64::from_integer(1), Rational64::from_integer(1)]).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let v = sample::complex_vector(6, &mut rng);
    let a = p_scaling_solve(gl.as_ref(), &v, &p, &FirstOrderConfig::new(1e-9, 400).with_step_size(0.1)).unwrap();
    let b = scaling_solve(sl.as_ref(), &v, &FirstOrderConfig::new(1e-9, 400).with_step_size(0.1)).unwrap();
    assert!((a.best_grad_norm - b.best_grad_norm).abs() <= 1e-8, "{} vs {}", a.best_grad_norm, b.best_grad_norm);
}

#[test]
fn balanced_input_converges_immediately() {
    let rep = matrix_scaling_rep(3, GroupKind::Sl).unwrap();
    let v = CVector::from_element(9, c64(1.0, 0.0));
    let r = scaling_solve(rep.as_ref(), &v, &FirstOrderConfig::new(1e-9, 10)).unwrap();
    assert_eq!(r.status, SolveStatus::Converged);
    assert_eq!(r.iterations_used, 1);
}

#[test]
fn null_cone_input_collapses_or_stays_above_margin() {
    let rep = operator_scaling_rep(2, 1, GroupKind::Sl).unwrap();
    let v = CVector::from_vec(vec![c64(1.0, 0.0), c64(0.0, 0.0), c64(0.0, 0.0), c64(0.0, 0.0)]);
    let r = scaling_solve(rep.as_ref(), &v, &FirstOrderConfig::new(0.1, 100_000)).unwrap();
    assert_eq!(r.status, SolveStatus::Collapsed);
    assert!(r.best_grad_norm >= std::f64::consts::FRAC_1_SQRT_2 - 1e-9);
}

#[test]
fn capacity_of_torus_toy() {
    let rep = torus_rep(&[vec![1], vec![-1]]).unwrap();
    let v = CVector::from_vec(vec![c64(2.0, 0.0), c64(1.0, 0.0)]);
    let r = norm_minimize(rep.as_ref(), &v, 1e-6, 1.0, 1.0, None).unwrap();
    assert!((r.log_norm - 2f64.ln()).abs() <= 3e-6, "{}", r.log_norm);
}
