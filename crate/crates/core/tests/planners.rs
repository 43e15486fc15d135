use proptest::prelude::*;
use tcb_core::geometry::{max_deviation, UnitPoint};
use tcb_core::planners::{classify_pair, plan_pair, plan_tuple, plan_tuple_even, WaypointTuple};

fn point(m: usize) -> impl Strategy<Value = UnitPoint> {
    prop::collection::vec(-1.0f64..1.0, m + 1)
        .prop_filter("away from the origin", |v| v.iter().map(|x| x * x).sum::<f64>() > 1e-3)
        .prop_map(|v| {
            let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            UnitPoint::new(v.into_iter().map(|x| x / n).collect()).unwrap()
        })
}

/// Points that are often equal or antipodal to their predecessor.
fn tuple(n: usize, m: usize) -> impl Strategy<Value = WaypointTuple> {
    (prop::collection::vec(point(m), n), prop::collection::vec(0u8..5, n)).prop_map(|(mut pts, kinds)| {
        for i in 1..pts.len() {
            pts[i] = match kinds[i] {
                0 => pts[i - 1].clone(),
                1 => pts[i - 1].antipode(),
                _ => pts[i].clone(),
            };
        }
        WaypointTuple::new(pts).unwrap()
    })
}

fn dims() -> impl Strategy<Value = usize> {
    1usize..=5
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn pair_planner_is_reversal_equivariant((x, y) in dims().prop_flat_map(|m| (point(m), point(m)))) {
        let f = plan_pair(&x, &y).unwrap();
        let g = plan_pair(&y, &x).unwrap();
        let d = max_deviation(|t| g.path.evaluate(t).unwrap(), |t| f.path.evaluate(1.0 - t).unwrap(), 201);
        prop_assert!(d < 1e-9, "deviation {d}");
        prop_assert!(f.waypoint_deviation(&[x.clone(), y.clone()]) < 1e-9);
        prop_assert_eq!(classify_pair(&x, &y).unwrap().tag, classify_pair(&y, &x).unwrap().tag);
    }

    #[test]
    fn odd_tuples_hit_waypoints_and_commute_with_reversal(
        w in (prop::sample::select(vec![3usize, 5, 7]), prop::sample::select(vec![1usize, 3, 5]))
            .prop_flat_map(|(n, m)| tuple(n, m))
    ) {
        let f = plan_tuple(&w).unwrap();
        let g = plan_tuple(&w.reversal()).unwrap();
        prop_assert!(f.waypoint_deviation(w.points()) < 1e-9);
        let d = max_deviation(|t| g.path.evaluate(t).unwrap(), |t| f.path.evaluate(1.0 - t).unwrap(), 201);
        prop_assert!(d < 1e-9, "deviation {d}");
        for (_, p) in f.path.sample(101) {
            prop_assert!(p.norm_deviation() < 1e-9);
        }
    }

    #[test]
    fn even_tuples_through_basepoint(
        w in (prop::sample::select(vec![2usize, 4, 6]), prop::sample::select(vec![1usize, 3]))
            .prop_flat_map(|(n, m)| tuple(n, m))
    ) {
        let f = plan_tuple_even(&w, None).unwrap();
        prop_assert!(f.waypoint_deviation(w.points()) < 1e-9);
        prop_assert!(f.metadata.flags.iter().any(|s| s == "basepoint_inserted"));
        let g = plan_tuple_even(&w.reversal(), None).unwrap();
        let d = max_deviation(|t| g.path.evaluate(t).unwrap(), |t| f.path.evaluate(1.0 - t).unwrap(), 201);
        prop_assert!(d < 1e-9, "deviation {d}");
    }
}

#[test]
fn even_sphere_rejected_for_tuples() {
    let p = UnitPoint::new(vec![1.0, 0.0, 0.0]).unwrap();
    let w = WaypointTuple::new(vec![p.clone(), p.antipode(), p]).unwrap();
    assert!(plan_tuple(&w).is_err());
}

#[test]
fn waypoint_json_round_trip() {
    let text = r#"{"m":1,"points":[[1.0,0.0],[0.0,1.0],[-1.0,0.0]]}"#;
    let w: WaypointTuple = serde_json::from_str(text).unwrap();
    assert_eq!(w.len(), 3);
    assert_eq!(serde_json::from_str::<WaypointTuple>(&serde_json::to_string(&w).unwrap()).unwrap(), w);
    let mismatched = r#"{"m":2,"points":[[1.0,0.0],[0.0,1.0]]}"#;
    assert!(serde_json::from_str::<WaypointTuple>(mismatched).is_err());
}
