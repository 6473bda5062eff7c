use cutter_core::{
    cutter_inequality_residual, tau_diagnostic, ur_apply, ur_eta_apply, ConvexFunction, ConvexSet,
    CutterOperator, Extrapolated, ResolventSpec, Vector,
};
use proptest::prelude::*;

const SLACK: f64 = 1e-9;

/// A point with norm in `]lo, hi]` along the given raw direction.
fn point(raw: &[f64], lo: f64, hi: f64, t: f64) -> Option<Vector> {
    let v = Vector::from_slice(raw).ok()?;
    let n = v.norm();
    if n < 1e-3 {
        return None;
    }
    Some((lo + (hi - lo) * t) / n * &v)
}

fn raw_dir() -> impl Strategy<Value = Vec<f64>> {
    (1usize..=5).prop_flat_map(|d| prop::collection::vec(-1.0f64..1.0, d))
}

/// All identities for a cutter whose fixed set contains `ball(y; r)`.
fn check_identities(t: &CutterOperator, x: &Vector, y: &Vector, r: f64, eta: f64) {
    let diag = tau_diagnostic(t, x, y, r).unwrap();
    let tx = t.apply(x).unwrap();
    let u = ur_apply(t, r, x).unwrap();
    let u_eta = ur_eta_apply(t, r, eta, x).unwrap();
    let res = diag.residual_t;
    let tau = diag.tau;

    let uy2 = u.distance(y).powi(2);
    let ty2 = tx.distance(y).powi(2);
    let xy2 = x.distance(y).powi(2);
    let step = r + res;

    assert!(tau >= -SLACK, "tau = {tau}");
    assert!((uy2 - (ty2 - r * r - 2.0 * r * tau)).abs() <= SLACK);
    assert!(uy2 <= ty2 - r * r + SLACK);
    assert!((uy2 - (xy2 - step * step - 2.0 * tau * step)).abs() <= SLACK);
    assert!(uy2 <= xy2 - step * step + SLACK);
    assert!(xy2 - step * step <= xy2 - r * r - res * res + SLACK);

    let blend = x.lerp(eta, &u);
    assert!(u_eta.distance(&blend) <= SLACK);
    assert!((u.distance(x) - step).abs() <= SLACK);

    let ueta_y2 = u_eta.distance(y).powi(2);
    let bound = xy2 - eta * (2.0 - eta) * step * step;
    assert!(ueta_y2 <= bound + SLACK);
    let moved = u_eta.distance(x).powi(2);
    assert!((eta * (2.0 - eta) * step * step - (2.0 - eta) / eta * moved).abs() <= SLACK);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn subgradient_projector_of_unit_ball(
        raw in raw_dir(),
        t in 0.001f64..1.0,
        r in 0.001f64..=1.0,
        eta in 0.01f64..=2.0,
    ) {
        let x = match point(&raw, 1.0, 10.0, t) { Some(x) => x, None => return Ok(()) };
        let t_op = CutterOperator::subgradient_projector(ConvexFunction::unit_ball_gauge());
        let y = Vector::zeros(x.dim());
        check_identities(&t_op, &x, &y, r, eta);
    }

    #[test]
    fn metric_projector_onto_box(
        raw in raw_dir(),
        t in 0.01f64..1.0,
        r in 0.001f64..=1.0,
        eta in 0.01f64..=2.0,
    ) {
        // the box [-1, 1]^d contains ball(0; 1) and x has norm > √d
        let d = raw.len();
        let x = match point(&raw, (d as f64).sqrt() + 1e-3, 20.0, t) { Some(x) => x, None => return Ok(()) };
        let set = ConvexSet::boxed(Vector::new(vec![-1.0; d]).unwrap(), Vector::new(vec![1.0; d]).unwrap()).unwrap();
        let t_op = CutterOperator::metric_projector(set);
        check_identities(&t_op, &x, &Vector::zeros(d), r, eta);
    }

    #[test]
    fn resolvent_of_ball_gradient(
        raw in raw_dir(),
        t in 0.001f64..1.0,
        r in 0.001f64..=1.0,
        eta in 0.01f64..=2.0,
    ) {
        let d = raw.len();
        let x = match point(&raw, 1.0 + 1e-3, 10.0, t) { Some(x) => x, None => return Ok(()) };
        let spec = ResolventSpec::squared_distance_ball(Vector::zeros(d), 1.0).unwrap();
        let t_op = CutterOperator::resolvent(spec);
        check_identities(&t_op, &x, &Vector::zeros(d), r, eta);
    }

    #[test]
    fn subgradient_projector_is_a_cutter(
        raw in raw_dir(),
        t in 0.0f64..1.0,
        ty in 0.0f64..1.0,
        raw_y in prop::collection::vec(-1.0f64..1.0, 5),
    ) {
        let x = match point(&raw, 0.0, 50.0, t) { Some(x) => x, None => return Ok(()) };
        let y = match point(&raw_y[..x.dim()], 0.0, 1.0, ty) { Some(y) => y, None => return Ok(()) };
        let t_op = CutterOperator::subgradient_projector(ConvexFunction::unit_ball_gauge());
        let res = cutter_inequality_residual(&t_op, &x, &y).unwrap();
        prop_assert!(res <= SLACK * (1.0 + x.norm_squared()));
    }
}

#[test]
fn extrapolation_breaks_the_cutter_inequality() {
    let t = CutterOperator::subgradient_projector(ConvexFunction::x2m1());
    let u = Extrapolated { cutter: &t, r: 1.0 };
    let res = cutter_inequality_residual(&u, &Vector::scalar(1.1), &Vector::scalar(1.0)).unwrap();
    // U_1(1.1) = 0.55 + 1/2.2 − 1 and the residual is ⟨1 − Ux, 1.1 − Ux⟩
    let ux = 0.55 + 1.0 / 2.2 - 1.0;
    assert!((res - (1.0 - ux) * (1.1 - ux)).abs() < 1e-12);
    assert!(res > 1.0);
}

#[test]
fn zero_extrapolation_is_the_cutter() {
    let t = CutterOperator::subgradient_projector(ConvexFunction::x2m1());
    let x = Vector::scalar(3.0);
    assert_eq!(ur_apply(&t, 0.0, &x).unwrap(), t.apply(&x).unwrap());
}
