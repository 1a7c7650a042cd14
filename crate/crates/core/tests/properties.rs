use fwdosc::*;
use proptest::prelude::*;

fn problems() -> impl Strategy<Value = Problem> {
    (-3.0_f64..=3.0, 0.0_f64..=4.0, 0.2_f64..=12.0)
        .prop_filter("horizon must exceed 0.2", |(_, _, t)| *t > 0.2)
        .prop_map(|(s, d, t)| Problem::new(s, s + d, t).unwrap())
}

fn solve(p: &Problem) -> Solution {
    classify_and_solve(p, &Config::default()).unwrap_or_else(|e| panic!("{p:?}: {e}"))
}

fn sample_times(a: f64, b: f64, k: usize) -> impl Iterator<Item = f64> {
    (1..k).map(move |i| a + (b - a) * i as f64 / k as f64)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn dynamics_hold_along_every_arc(p in problems()) {
        let r = residuals(&solve(&p));
        prop_assert!(r.dynamics <= 1e-6, "{r:?}");
    }

    #[test]
    fn boundary_and_junction_conditions_hold(p in problems()) {
        let r = residuals(&solve(&p));
        prop_assert!(r.boundary <= 1e-8 && r.junction <= 1e-8, "{r:?}");
    }

    #[test]
    fn velocity_stays_non_negative(p in problems()) {
        let sol = solve(&p);
        let f = check_feasibility(&sol, &Config::default());
        prop_assert!(f.min_x2 >= -1e-9, "{f:?}");
    }

    #[test]
    fn hamiltonian_is_constant_on_each_arc(p in problems()) {
        let sol = solve(&p);
        for arc in sol.arcs() {
            let values: Vec<f64> = sample_times(arc.t_start, arc.t_end, 16)
                .map(|t| sol.costate(t).unwrap().hamiltonian)
                .collect();
            let spread = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
                - values.iter().cloned().fold(f64::INFINITY, f64::min);
            prop_assert!(spread <= 1e-8, "{:?} on {arc:?}: spread {spread}", sol.mode());
        }
    }

    #[test]
    fn admissible_junction_perturbations_never_lower_the_energy(p in problems()) {
        let cfg = Config::default();
        let sol = solve(&p);
        let j = sol.cost();
        // absorbs rounding in the energy sums only
        let slack = 1e-12 * (1.0 + j);
        let perturbed: Vec<f64> = match sol.mode() {
            Mode::WaitMove => {
                let tau = sol.junction_times()[0];
                [-1e-3, 1e-3].iter().filter_map(|d| wait_move_cost(&p, tau + d, &cfg)).collect()
            }
            Mode::MoveWait => {
                let tau = sol.junction_times()[0];
                [-1e-3, 1e-3].iter().filter_map(|d| move_wait_cost(&p, tau + d, &cfg)).collect()
            }
            Mode::MoveWaitMove => {
                let x1s = sol.hold_position().unwrap();
                [-1e-3, 1e-3].iter().filter_map(|d| move_wait_move_cost(&p, x1s + d, &cfg)).collect()
            }
            Mode::Unconstrained | Mode::Hold => Vec::new(),
        };
        for jp in perturbed {
            prop_assert!(jp >= j - slack, "{:?}: perturbed {jp} < {j}", sol.mode());
        }
    }

    #[test]
    fn scaling_a_rest_start_scales_the_energy_quadratically(x_f in 0.1_f64..3.0, t in 0.2_f64..12.0) {
        let one = solve(&Problem::new(0.0, x_f, t).unwrap());
        let two = solve(&Problem::new(0.0, 2.0 * x_f, t).unwrap());
        prop_assert_eq!(one.mode(), two.mode());
        prop_assert!((two.cost() - 4.0 * one.cost()).abs() <= 1e-9 * (1.0 + two.cost()));
        for tt in sample_times(0.0, t, 8) {
            let (a, b) = (one.eval(tt).unwrap(), two.eval(tt).unwrap());
            prop_assert!((b.u - 2.0 * a.u).abs() <= 1e-8 * (1.0 + b.u.abs()));
        }
    }

    #[test]
    fn reflection_maps_move_wait_onto_wait_move(s in 0.05_f64..3.0, d in 0.05_f64..3.0, t in 0.2_f64..12.0) {
        let forward = solve(&Problem::new(s, s + d, t).unwrap());
        let mirrored = solve(&Problem::new(-s - d, -s, t).unwrap());
        prop_assert!((forward.cost() - mirrored.cost()).abs() <= 1e-8 * (1.0 + forward.cost()));
        let expected = match forward.mode() {
            Mode::WaitMove => Mode::MoveWait,
            other => other,
        };
        prop_assert_eq!(mirrored.mode(), expected);
    }

    #[test]
    fn unconstrained_is_returned_exactly_when_it_is_feasible(p in problems()) {
        prop_assume!(p.s() != p.x_f());
        let cfg = Config::default();
        let free = solve_unconstrained(&p).unwrap();
        let sol = solve(&p);
        prop_assert_eq!(sol.mode() == Mode::Unconstrained, check_feasibility(&free, &cfg).feasible);
        let holds = sol.hold_arcs().count();
        match sol.mode() {
            Mode::Unconstrained => prop_assert_eq!(holds, 0),
            _ => prop_assert_eq!(holds, 1),
        }
    }
}

#[test]
fn hold_multipliers_are_non_negative_on_the_reference_problems() {
    for (s, x_f, t) in [(0.0, 2.0, 5.0), (1.0, 2.0, 5.0), (-2.0, 1.0, 8.0), (-2.0, -1.0, 5.0)] {
        let sol = solve(&Problem::new(s, x_f, t).unwrap());
        for arc in sol.hold_arcs() {
            for tt in sample_times(arc.t_start, arc.t_end, 64) {
                let mu = sol.costate(tt).unwrap().mu;
                assert!(mu >= -1e-8, "({s}, {x_f}, {t}) at {tt}: mu = {mu}");
            }
        }
    }
}
