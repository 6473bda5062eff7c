use cutter_core::{ConvexSet, QuasiProjector, Vector};
use proptest::prelude::*;

const TOL: f64 = 1e-9;

fn sets(d: usize) -> Vec<ConvexSet> {
    let v = |c: f64| Vector::new(vec![c; d]).unwrap();
    let mut e1 = vec![0.0; d];
    e1[0] = 1.0;
    let e1 = Vector::new(e1).unwrap();
    let mut out = vec![
        ConvexSet::boxed(v(-1.0), v(2.0)).unwrap(),
        ConvexSet::interval_product(
            (0..d)
                .map(|i| {
                    if i % 2 == 0 {
                        (0.0, f64::INFINITY)
                    } else {
                        (-3.0, -1.0)
                    }
                })
                .collect(),
        )
        .unwrap(),
        ConvexSet::ball(v(0.5), 1.5).unwrap(),
        ConvexSet::halfspace(v(1.0), 0.5).unwrap(),
        ConvexSet::affine_subspace(v(1.0), vec![e1.clone()]).unwrap(),
        ConvexSet::nonneg_orthant(d),
        ConvexSet::whole_space(d),
        ConvexSet::ray(v(1.0)).unwrap(),
    ];
    if d == 1 {
        out.push(ConvexSet::affine_subspace(v(0.3), vec![]).unwrap());
    }
    out
}

fn arb_pair() -> impl Strategy<Value = (Vec<f64>, Vec<f64>)> {
    (1usize..=4).prop_flat_map(|d| {
        (
            prop::collection::vec(-10.0f64..10.0, d),
            prop::collection::vec(-10.0f64..10.0, d),
        )
    })
}

fn scale(x: &Vector) -> f64 {
    1.0 + x.norm()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn metric_projection_properties((a, b) in arb_pair()) {
        let x = Vector::new(a).unwrap();
        let w = Vector::new(b).unwrap();
        for set in sets(x.dim()) {
            let p = set.project(&x).unwrap();
            // membership and idempotence
            prop_assert!(set.contains_within(&p, TOL * scale(&x)), "{}", set.label());
            let pp = set.project(&p).unwrap();
            prop_assert!(pp.distance(&p) <= TOL * scale(&x));
            // nearest point: ⟨x − Px, c − Px⟩ ≤ 0 for c ∈ C
            let c = set.project(&w).unwrap();
            let vi = (&x - &p).dot(&(&c - &p));
            prop_assert!(vi <= TOL * scale(&x) * scale(&w), "{} {vi}", set.label());
            prop_assert!(x.distance(&p) <= x.distance(&c) + TOL * scale(&x));
            // firm nonexpansiveness implies nonexpansiveness
            let pw = set.project(&w).unwrap();
            prop_assert!(p.distance(&pw) <= x.distance(&w) + TOL * scale(&x));
            prop_assert!((set.distance(&x).unwrap() - x.distance(&p)).abs() <= TOL * scale(&x));
        }
    }

    #[test]
    fn quasi_projector_invariants((a, b) in arb_pair(), lambda in 1.0f64..=2.0) {
        let x = Vector::new(a).unwrap();
        let w = Vector::new(b).unwrap();
        let d = x.dim();
        let unit = |c: f64| Vector::new(vec![c; d]).unwrap();
        let outer = ConvexSet::boxed(unit(-5.0), unit(5.0)).unwrap();
        let quasi = vec![
            QuasiProjector::metric(ConvexSet::ball(unit(0.0), 2.0).unwrap()),
            QuasiProjector::relaxed_cone(ConvexSet::nonneg_orthant(d), move |_| lambda).unwrap(),
            QuasiProjector::relaxed_cone(ConvexSet::nonneg_orthant(d), |x: &Vector| {
                if x[0] > 0.0 { 2.0 } else { 1.0 }
            })
            .unwrap(),
            QuasiProjector::composed(ConvexSet::boxed(unit(-1.0), unit(1.0)).unwrap(), move |x| {
                outer.project(x).unwrap()
            }),
        ];
        for q in &quasi {
            let set = q.set();
            let qx = q.apply(&x).unwrap();
            // ran Q ⊆ C
            prop_assert!(set.contains_within(&qx, TOL * scale(&x)));
            // C ⊆ Fix Q
            let c = set.project(&w).unwrap();
            let qc = q.apply(&c).unwrap();
            prop_assert!(qc.distance(&c) <= TOL * scale(&w));
            // ‖Qx − c‖ ≤ ‖x − c‖
            prop_assert!(qx.distance(&c) <= x.distance(&c) + TOL * scale(&x) * scale(&w));
        }
    }

    #[test]
    fn orthant_reflector_is_nonexpansive((a, b) in arb_pair()) {
        let x = Vector::new(a).unwrap();
        let y = Vector::new(b).unwrap();
        let k = ConvexSet::nonneg_orthant(x.dim());
        let rx = k.reflect(&x).unwrap();
        let ry = k.reflect(&y).unwrap();
        prop_assert!(rx.distance(&ry) <= x.distance(&y) + TOL);
    }
}

#[test]
fn reflector_needs_a_cone() {
    let ball = ConvexSet::ball(Vector::zeros(2), 1.0).unwrap();
    assert!(ball
        .reflect(&Vector::from_slice(&[3.0, 0.0]).unwrap())
        .is_err());
    assert!(QuasiProjector::relaxed_cone(ball, |_| 2.0).is_err());
}

#[test]
fn out_of_range_relaxation_is_reported() {
    let q = QuasiProjector::relaxed_cone(ConvexSet::nonneg_orthant(1), |_| 2.5).unwrap();
    assert!(q.apply(&Vector::scalar(-1.0)).is_err());
}
