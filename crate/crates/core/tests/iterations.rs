use cutter_core::{
    epsilon_monotonicity_audit, fejer_violations, run, run_mcspa, run_with, ConvexFunction,
    ConvexSet, CutterOperator, ParameterSchedule, ProblemSpec, QuasiProjector, ResolventSpec,
    RunConfig, Vector, Verdict,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const INV_SQRT3: f64 = 0.577_350_269_189_625_8;

fn random_start(rng: &mut ChaCha8Rng, max_norm: f64) -> Vector {
    let d = rng.random_range(1..=5);
    let v: Vec<f64> = (0..d).map(|_| rng.random_range(-1.0..1.0)).collect();
    let v = Vector::new(v).unwrap();
    let radius = 10f64.powf(rng.random_range(0.0..max_norm.log10()));
    (radius / v.norm().max(1e-12)) * &v
}

fn exact_run(f: ConvexFunction, r: ParameterSchedule, x0: f64, steps: usize) -> Vec<f64> {
    let p = ProblemSpec::unconstrained(
        CutterOperator::subgradient_projector(f),
        r,
        ParameterSchedule::constant(1.0).unwrap(),
        Vector::scalar(x0),
    )
    .unwrap();
    let config = RunConfig {
        max_iters: steps,
        feasibility_tol: 0.0,
        stop_when_feasible: false,
        full_window: steps,
        stride: 1,
    };
    let trace = run_with(&p, &config).unwrap();
    trace.records.iter().map(|rec| rec.x[0]).collect()
}

#[test]
fn finite_convergence_with_fejer_monotonicity() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for schedule in [ParameterSchedule::inv_n(), ParameterSchedule::inv_sqrt_n()] {
        for _ in 0..50 {
            let x0 = random_start(&mut rng, 1e6);
            let p = ProblemSpec::unconstrained(
                CutterOperator::subgradient_projector(ConvexFunction::unit_ball_gauge()),
                schedule.clone(),
                ParameterSchedule::constant(1.0).unwrap(),
                x0.clone(),
            )
            .unwrap();
            let trace = run(&p, 100_000, 0.0).unwrap();
            let n = trace.converged_at().expect("finite convergence");
            assert!(n < 100_000);
            // r_0 = 1, so ball(0; r_n) ⊆ Fix T from the start
            let fejer = fejer_violations(&trace, &Vector::zeros(x0.dim()), 0);
            assert_eq!(fejer.count, 0, "x0 = {x0:?}");
        }
    }
}

#[test]
fn projected_method_reaches_the_intersection() {
    // f = d(·, ball((2, 2); 1)), C = orthant through the relaxed projector
    let center = Vector::from_slice(&[2.0, 2.0]).unwrap();
    let f = ConvexFunction::distance_to_ball(center.clone(), 1.0);
    let c = QuasiProjector::relaxed_cone(ConvexSet::nonneg_orthant(2), |_| 2.0).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..20 {
        let x0 =
            Vector::from_slice(&[rng.random_range(0.0..1e3), rng.random_range(0.0..1e3)]).unwrap();
        let p = ProblemSpec::new(
            CutterOperator::subgradient_projector(f.clone()),
            c.clone(),
            ParameterSchedule::inv_sqrt_n(),
            ParameterSchedule::constant(1.5).unwrap(),
            x0,
        )
        .unwrap();
        let trace = run(&p, 100_000, 0.0).unwrap();
        assert!(trace.converged_at().is_some());
        let last = &trace.last().x;
        assert!(f.value(last) <= 0.0 && ConvexSet::nonneg_orthant(2).contains(last));
        assert_eq!(fejer_violations(&trace, &center, 0).count, 0);
    }
}

#[test]
fn resolvent_iteration_converges_finitely() {
    let spec = ResolventSpec::squared_distance_ball(Vector::zeros(3), 1.0).unwrap();
    let p = ProblemSpec::unconstrained(
        CutterOperator::resolvent(spec),
        ParameterSchedule::inv_n(),
        ParameterSchedule::constant(1.0).unwrap(),
        Vector::from_slice(&[40.0, -3.0, 7.0]).unwrap(),
    )
    .unwrap();
    let trace = run(&p, 10_000, 0.0).unwrap();
    assert!(trace.converged_at().is_some());
    assert!(trace.last().x.norm() <= 1.0 + 1e-12);
}

#[test]
fn convex_feasibility_case() {
    let d = ConvexSet::interval_product(vec![(2.0, 3.0)]).unwrap();
    let c = ConvexSet::interval_product(vec![(0.0, f64::INFINITY)]).unwrap();
    let p = ProblemSpec::new(
        CutterOperator::metric_projector(d),
        QuasiProjector::metric(c),
        ParameterSchedule::inv_n(),
        ParameterSchedule::constant(1.0).unwrap(),
        Vector::scalar(10.0),
    )
    .unwrap();
    let trace = run(&p, 100, 0.0).unwrap();
    assert_eq!(trace.verdict, Verdict::ConvergedAt(1));
    assert_eq!(trace.last().x[0], 2.0);
}

#[test]
fn divergent_series_closed_form() {
    let xs = exact_run(
        ConvexFunction::x2m1(),
        ParameterSchedule::recurrence(1.0).unwrap(),
        2.0,
        40,
    );
    let mut r_prev = 1.0;
    for (n, &x) in xs.iter().enumerate() {
        assert!((x - (1.0 + r_prev)).abs() <= 1e-12, "n = {n}");
        r_prev = r_prev * r_prev / (4.0 * (1.0 + r_prev));
    }
    // r_4 ≈ 1.3e-24 is below half an ulp of 1, so x_5 rounds onto Fix T
    assert!(xs[4] > 1.0);
    assert_eq!(xs[5], 1.0);
}

#[test]
fn empty_interior_invariant() {
    let p = ProblemSpec::unconstrained(
        CutterOperator::subgradient_projector(ConvexFunction::squared_norm()),
        ParameterSchedule::adaptive(),
        ParameterSchedule::constant(1.0).unwrap(),
        Vector::scalar(0.5),
    )
    .unwrap();
    let config = RunConfig {
        max_iters: 10_001,
        feasibility_tol: 0.0,
        stop_when_feasible: false,
        full_window: 10_001,
        stride: 1,
    };
    let trace = run_with(&p, &config).unwrap();
    assert_eq!(trace.verdict, Verdict::MaxItersReached);
    for rec in &trace.records[..=10_000] {
        let half = (rec.x[0] / 2.0).abs();
        assert!(half > 0.0 && half < rec.param.unwrap(), "n = {}", rec.n);
    }
}

/// The forward recursion amplifies rounding by about 2 per step near
/// |x| = 1/√3, so the closed form is only checked over a short horizon.
#[test]
fn empty_fixset_closed_form_short_horizon() {
    let k0 = 0.5;
    let xs = exact_run(
        ConvexFunction::squared_norm_plus_one(),
        ParameterSchedule::oscillating(k0).unwrap(),
        INV_SQRT3 + k0,
        40,
    );
    for (n, &x) in xs.iter().enumerate() {
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        let k = k0 / ((n + 1) as f64).sqrt();
        assert!(sign * x > 0.0);
        assert!((sign * x - (INV_SQRT3 + k)).abs() <= 1e-9, "n = {n}");
    }
}

#[test]
fn alternating_schedule_gives_non_monotone_epsilon() {
    let x0 = 1e4;
    let p = ProblemSpec::unconstrained(
        CutterOperator::subgradient_projector(ConvexFunction::x2m1()),
        ParameterSchedule::alternating(),
        ParameterSchedule::constant(1.0).unwrap(),
        Vector::scalar(x0),
    )
    .unwrap();
    let trace = run(&p, 1_000, 0.0).unwrap();
    let eps: Vec<f64> = trace
        .records
        .iter()
        .filter_map(|rec| rec.param.map(|r| r * 2.0 * rec.x[0].abs()))
        .collect();

    // independent scalar replay
    let mut x: f64 = x0;
    let mut expected = Vec::new();
    let mut n = 0usize;
    while x * x - 1.0 > 0.0 {
        let r = if n.is_multiple_of(2) {
            1.0 / (n + 1) as f64
        } else {
            1.0 / (n as f64).sqrt()
        };
        expected.push(r * 2.0 * x.abs());
        x = x / 2.0 + 1.0 / (2.0 * x) - r * x.signum();
        n += 1;
    }
    assert_eq!(eps.len(), expected.len());
    for (a, b) in eps.iter().zip(&expected) {
        assert!((a - b).abs() <= 1e-12 * b.abs());
    }
    let first = expected.windows(2).position(|w| w[1] >= w[0]);

    let audit = epsilon_monotonicity_audit(&eps);
    assert!(!audit.strictly_decreasing);
    assert_eq!(audit.first_violation, first);
    let v = audit.first_violation.unwrap();
    assert!(v.is_multiple_of(2) && v >= 4, "violation at {v}");
}

/// y_{n+1} = y_n/2 + 1/(2y_n) − ε_n/(2y_n) for f = x² − 1, η = 1.
fn mcspa_scalar_oracle(mut y: f64, eps: impl Fn(usize) -> f64, tol: f64) -> usize {
    let mut n = 0;
    while y * y - 1.0 > tol {
        y = y / 2.0 + 1.0 / (2.0 * y) - eps(n) / (2.0 * y);
        n += 1;
    }
    n
}

#[test]
fn mcspa_matches_scalar_replay() {
    let f = ConvexFunction::x2m1();
    let one = ParameterSchedule::constant(1.0).unwrap();
    let trace = run_mcspa(
        &f,
        &Vector::scalar(4.0),
        &ParameterSchedule::inv_n(),
        &one,
        1000,
        0.0,
    )
    .unwrap();
    let expected = mcspa_scalar_oracle(4.0, |n| 1.0 / (n + 1) as f64, 0.0);
    assert_eq!(trace.converged_at(), Some(expected));

    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..20 {
        let y0: f64 = 10f64.powf(rng.random_range(0.0..6.0));
        let y0 = if rng.random_bool(0.5) { -y0 } else { y0 };
        let trace = run_mcspa(
            &f,
            &Vector::scalar(y0),
            &ParameterSchedule::inv_sqrt_n(),
            &one,
            1000,
            1e-6,
        )
        .unwrap();
        let expected = mcspa_scalar_oracle(y0, |n| 1.0 / ((n + 1) as f64).sqrt(), 1e-6);
        assert_eq!(trace.converged_at(), Some(expected), "y0 = {y0}");
    }
}
