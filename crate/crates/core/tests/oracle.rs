use fwdosc::*;
use proptest::prelude::*;

fn pair(s: f64, x_f: f64, t: f64, n: usize) -> (Solution, Trajectory) {
    let p = Problem::new(s, x_f, t).unwrap();
    let sol = classify_and_solve(&p, &Config::default()).unwrap();
    let dt = qp_solve(&transcribe(&p, n).unwrap()).unwrap();
    (sol, dt)
}

#[test]
fn oracle_output_is_a_kkt_point() {
    for (s, x_f, t) in [(0.0, 2.0, 5.0), (1.0, 2.0, 5.0), (-2.0, 1.0, 8.0), (-2.0, -1.0, 5.0)] {
        let (_, dt) = pair(s, x_f, t, 300);
        assert!(dt.min_x2() >= -1e-8);
        assert!(dt.max_defect <= 1e-8);
        assert!(dt.kkt_residual <= 1e-8);
        assert!(dt.multipliers.iter().all(|m| *m >= -1e-8));
        assert!(!dt.active.is_empty());
    }
}

#[test]
fn rest_start_cost_converges_quadratically() {
    let gaps: Vec<f64> = [125, 250, 500]
        .iter()
        .map(|&n| {
            let (sol, dt) = pair(0.0, 2.0, 5.0, n);
            compare(&sol, &dt).unwrap().cost_gap
        })
        .collect();
    for w in gaps.windows(2) {
        let ratio = w[0] / w[1];
        assert!((3.0..=5.0).contains(&ratio), "{gaps:?}");
    }
}

#[test]
fn interior_hold_spans_the_analytic_junctions() {
    let (sol, dt) = pair(-2.0, 1.0, 8.0, 800);
    let r = compare(&sol, &dt).unwrap();
    assert!((dt.cost - sol.cost()).abs() <= 2e-2);
    assert_eq!(r.numeric_holds.len(), 1);
    let (a, b) = r.numeric_holds[0];
    assert!((a - 3.3153).abs() < 0.02 && (b - 5.1615).abs() < 0.02, "{r:?}");
    assert!(r.mode_consistent);
}

#[test]
fn coarse_grids_disagree_more() {
    let fine = {
        let (sol, dt) = pair(1.0, 2.0, 5.0, 800);
        compare(&sol, &dt).unwrap()
    };
    let coarse = {
        let (sol, dt) = pair(1.0, 2.0, 5.0, 50);
        compare(&sol, &dt).unwrap()
    };
    assert!(fine.sup_x1 < coarse.sup_x1);
    assert!(fine.cost_gap < coarse.cost_gap);
}

#[test]
fn single_precision_transcription_solves() {
    let p = BoundaryProblem::<f32>::new(0.0, 2.0, 5.0).unwrap();
    let dt = qp_solve(&transcribe(&p, 200).unwrap()).unwrap();
    assert!((dt.cost - 4.0 / std::f32::consts::PI).abs() < 2e-2);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn analytic_energy_matches_the_oracle(s in -3.0_f64..3.0, d in 0.0_f64..4.0, t in 0.5_f64..12.0) {
        let (sol, dt) = pair(s, s + d, t, 400);
        let r = compare(&sol, &dt).unwrap();
        prop_assert!(r.cost_gap <= 1e-2 * (1.0 + sol.cost()), "{:?} {r:?}", sol.mode());
        prop_assert!(r.sup_x1 <= 1e-2, "{:?} {r:?}", sol.mode());
    }
}
