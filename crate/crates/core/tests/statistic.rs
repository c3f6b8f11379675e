mod common;

use proptest::prelude::*;
use weighted_ks::distribution::QuantileWindow;
use weighted_ks::error::Error;
use weighted_ks::statistic::{
    classical_ks_statistic, pit_transform, run_test, weighted_ks_statistic, EmpiricalProcess, NullDistribution,
};

fn stat(u: &[f64], w: &QuantileWindow) -> Result<f64, Error> {
    weighted_ks_statistic(&EmpiricalProcess::from_uniforms(u.to_vec())?, w).map(|s| s.k_obs)
}

fn check_against_brute_force(u: &[f64], w: &QuantileWindow) -> Result<(), TestCaseError> {
    let oracle = common::brute_force_statistic(u, w.a(), w.b(), 1e-5);
    match (stat(u, w), oracle) {
        (Ok(k), Some(o)) => prop_assert!((k - o).abs() <= 1e-9 * o.max(1.0), "{k} vs {o}"),
        (Err(Error::EmptyWindow { .. }), None) => {}
        (got, want) => prop_assert!(false, "library {got:?}, oracle {want:?}"),
    }
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn matches_brute_force_default_window(u in prop::collection::vec(0.0005f64..0.9995, 2..40)) {
        let w = QuantileWindow::for_sample_size(u.len() as f64).unwrap();
        check_against_brute_force(&u, &w)?;
    }

    #[test]
    fn matches_brute_force_custom_window(
        u in prop::collection::vec(0.001f64..0.999, 1..30),
        a in 0.01f64..0.5,
        width in 0.0f64..0.45,
    ) {
        let w = QuantileWindow::new(a, a + width).unwrap();
        check_against_brute_force(&u, &w)?;
    }

    #[test]
    fn matches_brute_force_with_ties(base in prop::collection::vec(1u32..20, 2..25)) {
        // Values on a coarse lattice so that ties and window-edge hits occur.
        let u: Vec<f64> = base.iter().map(|&i| i as f64 / 20.0).collect();
        let w = QuantileWindow::new(0.05, 0.95).unwrap();
        check_against_brute_force(&u, &w)?;
    }

    #[test]
    fn permutation_invariant(mut u in prop::collection::vec(0.001f64..0.999, 2..30)) {
        let w = QuantileWindow::new(0.05, 0.95).unwrap();
        let before = stat(&u, &w);
        u.reverse();
        prop_assert_eq!(before, stat(&u, &w));
    }

    #[test]
    fn nonnegative_and_bounded_by_classical_weighting(u in prop::collection::vec(0.001f64..0.999, 2..30)) {
        let w = QuantileWindow::new(0.1, 0.9).unwrap();
        if let Ok(k) = stat(&u, &w) {
            prop_assert!(k >= 0.0);
            // Weight 1/√(u(1-u)) ≤ 1/√(0.09) on [0.1, 0.9].
            let proc = EmpiricalProcess::from_uniforms(u.clone()).unwrap();
            prop_assert!(k <= classical_ks_statistic(&proc) / 0.3 + 1e-12);
        }
    }

    #[test]
    fn widening_the_window_never_lowers_the_statistic(u in prop::collection::vec(0.001f64..0.999, 2..30)) {
        let inner = QuantileWindow::new(0.3, 0.7).unwrap();
        let outer = QuantileWindow::new(0.1, 0.9).unwrap();
        if let (Ok(i), Ok(o)) = (stat(&u, &inner), stat(&u, &outer)) {
            prop_assert!(o >= i);
        }
    }

    #[test]
    fn pit_of_normal_equals_uniform_of_cdf(x in prop::collection::vec(-4.0f64..4.0, 1..20)) {
        let normal = NullDistribution::normal(0.0, 1.0).unwrap();
        let via_pit = pit_transform(&x, &normal).unwrap();
        let u: Vec<f64> = x.iter().map(|&v| normal.cdf(v)).collect();
        let direct = pit_transform(&u, &NullDistribution::Pit).unwrap();
        prop_assert_eq!(via_pit.values(), direct.values());
    }
}

#[test]
fn single_point_at_the_median() {
    let report = run_test(&[0.0], &NullDistribution::normal(0.0, 1.0).unwrap(), 0.05, None).unwrap();
    assert_eq!(report.k_obs, 1.0);
    assert_eq!(report.arg_u, 0.5);
    assert!(!report.reject);
}

#[test]
fn degenerate_window_without_data_is_empty() {
    let w = QuantileWindow::new(0.5, 0.5).unwrap();
    assert!(matches!(stat(&[0.2, 0.7], &w), Err(Error::EmptyWindow { .. })));
}

#[test]
fn too_many_clamped_values() {
    let mut data = vec![0.0; 3];
    data.extend((1..10).map(|i| i as f64 / 10.0));
    assert!(matches!(
        pit_transform(&data, &NullDistribution::Uniform01),
        Err(Error::DegenerateNull { endpoint: "lower", .. })
    ));
}
