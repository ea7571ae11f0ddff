use geoscale::margins::{
    gap_alpha_beta, is_totally_unimodular, margin_bounds, weight_margin_exact, weight_matrix_bounds, EnumerationBudget,
    MarginKind, WeightMatrix,
};
use geoscale::prelude::*;
use proptest::prelude::*;

fn integer_rows(dim: usize) -> impl Strategy<Value = Vec<Vec<i64>>> {
    prop::collection::vec(prop::collection::vec(-3i64..=3, dim), 1..7)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn one_dimensional_margin_is_smallest_nonzero_weight(rows in integer_rows(1)) {
        let m = WeightMatrix::from_integers(&rows).unwrap();
        let got = weight_margin_exact(&m, 18).unwrap().value;
        let want = rows.iter().map(|r| r[0].abs()).filter(|&x| x > 0).min().map_or(f64::INFINITY, |x| x as f64);
        prop_assert_eq!(got, want);
    }

    #[test]
    fn margin_sits_between_lower_bounds_and_singletons(rows in integer_rows(2)) {
        let m = WeightMatrix::from_integers(&rows).unwrap();
        let bounds = weight_matrix_bounds(&m, EnumerationBudget::default()).unwrap();
        let exact = bounds.iter().find(|b| b.kind == MarginKind::Exact).unwrap().value;
        let smallest = rows.iter().map(|r| ((r[0] * r[0] + r[1] * r[1]) as f64).sqrt()).filter(|&x| x > 0.0).fold(f64::INFINITY, f64::min);
        prop_assert!(exact <= smallest + 1e-12);
        for b in bounds.iter().filter(|b| b.kind == MarginKind::LowerBound) {
            prop_assert!(b.value <= exact + 1e-9, "{:?} exceeds {exact}", b);
        }
    }

    #[test]
    fn alpha_never_exceeds_beta(rows in integer_rows(3)) {
        prop_assume!(rows.iter().flatten().any(|&x| x != 0));
        let m = WeightMatrix::from_integers(&rows).unwrap();
        let data = gap_alpha_beta(&m, EnumerationBudget::default()).unwrap();
        prop_assert!(data.alpha <= data.beta);
        prop_assert!(data.sigma > 0.0);
    }

    #[test]
    fn totally_unimodular_gap_is_at_least_inverse_rank(rows in prop::collection::vec(prop::collection::vec(-1i64..=1, 3), 1..6)) {
        prop_assume!(rows.iter().flatten().any(|&x| x != 0));
        let m = WeightMatrix::from_integers(&rows).unwrap();
        let budget = EnumerationBudget::default();
        if is_totally_unimodular(&m, budget).unwrap() {
            let data = gap_alpha_beta(&m, budget).unwrap();
            prop_assert!(data.totally_unimodular);
            prop_assert!(data.sigma >= 1.0 / data.rank.max(1) as f64 - 1e-12);
        }
    }
}

#[test]
fn matrix_scaling_weights_are_totally_unimodular() {
    let rep = matrix_scaling_rep(2, GroupKind::Gl).unwrap();
    let m = WeightMatrix::from_rep(rep.as_ref()).unwrap();
    assert!(is_totally_unimodular(&m, EnumerationBudget::default()).unwrap());
}

#[test]
fn singleton_weight_set() {
    let m = WeightMatrix::from_integers(&[vec![3, 4]]).unwrap();
    assert_eq!(weight_margin_exact(&m, 18).unwrap().value, 5.0);
    let zero = WeightMatrix::from_integers(&[vec![0, 0]]).unwrap();
    assert_eq!(weight_margin_exact(&zero, 18).unwrap().value, f64::INFINITY);
}

#[test]
fn enumeration_limit_is_refused() {
    let rows: Vec<Vec<i64>> = (0..20).map(|i| vec![i, 1]).collect();
    let m = WeightMatrix::from_integers(&rows).unwrap();
    assert!(weight_margin_exact(&m, 18).is_err());
}

#[test]
fn special_linear_matrix_scaling_margin() {
    let rep = matrix_scaling_rep(2, GroupKind::Sl).unwrap();
    let bounds = margin_bounds(rep.as_ref(), EnumerationBudget::default()).unwrap();
    let exact = bounds.iter().find(|b| b.kind == MarginKind::Exact).unwrap().value;
    assert!((exact - std::f64::consts::FRAC_1_SQRT_2).abs() <= 1e-12);
}
