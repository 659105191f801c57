//! Property-based invariants of the kernel and the analysis layers.

use proptest::prelude::*;

use semicycle_core::{
    find_roots, integrate, myshkis_solution, DdeSpec, DelayFn, IntegrateOpts, PiecewiseFn,
    Segment, Trajectory,
};

fn sawtooth() -> PiecewiseFn {
    PiecewiseFn::new(vec![
        Segment::affine(0.0, 1.5, 1.0, -1.0),
        Segment::poly(1.5, 2.5, vec![-0.5, -1.0, 0.5]),
    ])
    .unwrap()
    .with_periodicity(2.5, -1)
    .unwrap()
}

proptest! {
    #[test]
    fn prop_integral_additivity(a in 0.0..2.0f64, d1 in 0.01..1.0f64, d2 in 0.01..1.0f64) {
        let f = sawtooth();
        let (b, c) = (a + d1, a + d1 + d2);
        let lhs = f.integrate(a, b).unwrap() + f.integrate(b, c).unwrap();
        let rhs = f.integrate(a, c).unwrap();
        prop_assert!((lhs - rhs).abs() < 1e-12);
    }

    #[test]
    fn prop_periodic_reduction(t in -20.0..20.0f64) {
        let f = sawtooth();
        // One antiperiod flips the sign exactly.
        let direct = f.eval(t).unwrap();
        let wrapped = f.eval(t + 2.5).unwrap();
        prop_assert!((wrapped + direct).abs() < 1e-12);
        // Two antiperiods restore it.
        let twice = f.eval(t + 5.0).unwrap();
        prop_assert!((twice - direct).abs() < 1e-12);
    }

    #[test]
    fn prop_roots_scale_invariant(c in 0.01..100.0f64) {
        let x = Trajectory::from_exact(sawtooth(), 1e-3, "saw");
        let y = x.scaled(c);
        let rx = find_roots(&x, 0.0, 5.0).unwrap();
        let ry = find_roots(&y, 0.0, 5.0).unwrap();
        prop_assert_eq!(rx.points.len(), ry.points.len());
        for (a, b) in rx.points.iter().zip(&ry.points) {
            prop_assert!((a - b).abs() < 1e-10);
        }
    }

    #[test]
    fn prop_integration_linear_in_history(c in -2.0..2.0f64) {
        let spec = DdeSpec {
            p: PiecewiseFn::constant(0.0, 4.0, -1.0),
            tau: DelayFn::new(
                PiecewiseFn::new(vec![Segment::affine(0.0, 4.0, -0.5, 1.0)]).unwrap(),
            )
            .unwrap(),
            t0: 0.0,
            history: PiecewiseFn::constant(-0.5, 0.0, 1.0),
            unnormalized: false,
            label: String::from("linearity"),
        };
        let base = integrate(&spec, 3.0, IntegrateOpts::default()).unwrap();
        let mut scaled = spec.clone();
        scaled.history = spec.history.scaled(c);
        let xs = integrate(&scaled, 3.0, IntegrateOpts::default()).unwrap();
        for i in 0..=30 {
            let t = 3.0 * i as f64 / 30.0;
            prop_assert!((xs.eval(t).unwrap() - c * base.eval(t).unwrap()).abs() < 1e-10);
        }
    }

    #[test]
    fn prop_comparison_solution_is_one_lipschitz(tau in 0.45..2.0f64) {
        // The delayed value lies in [0, 1] up to the first root, so the
        // slope never exceeds 1 in magnitude.
        let rec = myshkis_solution(tau).unwrap();
        let exact = rec.x_tau.exact.as_ref().unwrap();
        for i in 0..200 {
            let t = rec.rho * (i as f64 + 0.5) / 200.0;
            let d = exact.derivative(t).unwrap();
            prop_assert!(d.abs() <= 1.0 + 1e-12);
        }
    }

    #[test]
    fn prop_breakpoint_consistency_of_solutions(tau in 0.45..1.95f64) {
        // Solution-valued piecewise functions are continuous across their
        // breakpoints.
        let rec = myshkis_solution(tau).unwrap();
        let exact = rec.x_tau.exact.as_ref().unwrap();
        prop_assert!(exact.max_breakpoint_jump() < 1e-12);
    }
}
