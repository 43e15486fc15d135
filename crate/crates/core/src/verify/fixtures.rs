use serde::{Deserialize, Serialize};

use crate::geometry::{Sign, UnitPoint};
use crate::planners::WaypointTuple;

/// Boundary perturbation used by the near-boundary fixtures.
pub const NEAR: f64 = 1e-7;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PairFixture {
    pub name: String,
    pub x: UnitPoint,
    pub y: UnitPoint,
    /// Flags the planner must report.
    pub expect_flags: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TupleFixture {
    pub name: String,
    pub tuple: WaypointTuple,
    pub expect_flags: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Fixtures {
    pub pairs: Vec<PairFixture>,
    pub tuples: Vec<TupleFixture>,
}

/// Deterministic generic point on S^m, indexed by `k`.
fn generic(m: usize, k: usize) -> UnitPoint {
    let v = (0..=m)
        .map(|j| (1.3 * (k + 1) as f64 * (j + 1) as f64 + 0.7).sin() + 0.05)
        .collect();
    UnitPoint::normalized(v)
}

/// A point at distance about `eps` from `x`.
fn nudge(x: &UnitPoint, eps: f64) -> UnitPoint {
    let c = x.coords();
    // a unit tangent: the coordinate direction least aligned with x, made orthogonal
    let j = (0..c.len())
        .min_by(|&a, &b| c[a].abs().total_cmp(&c[b].abs()))
        .expect("nonempty");
    let mut t: Vec<f64> = c.iter().map(|&xi| -c[j] * xi).collect();
    t[j] += 1.0;
    let norm = t.iter().map(|v| v * v).sum::<f64>().sqrt();
    UnitPoint::normalized(c.iter().zip(&t).map(|(a, b)| a + eps * b / norm).collect())
}

fn equator(m: usize) -> UnitPoint {
    UnitPoint::basepoint(m)
}

fn pair(name: String, x: UnitPoint, y: UnitPoint, flags: &[&str]) -> PairFixture {
    PairFixture {
        name,
        x,
        y,
        expect_flags: flags.iter().map(|s| s.to_string()).collect(),
    }
}

fn tuple(name: String, pts: Vec<UnitPoint>, flags: Vec<String>) -> TupleFixture {
    TupleFixture {
        name,
        tuple: WaypointTuple::new(pts).expect("fixture tuples are well formed"),
        expect_flags: flags,
    }
}

fn pair_fixtures(m: usize) -> Vec<PairFixture> {
    let n = UnitPoint::pole(m, Sign::Plus);
    let s = UnitPoint::pole(m, Sign::Minus);
    let g = generic(m, 0);
    let e = equator(m);
    let near_n = nudge(&n, NEAR);
    let mut tilt = vec![0.0; m + 1];
    tilt[0] = 1.0;
    tilt[m] = NEAR;
    let near_eq = UnitPoint::normalized(tilt);
    vec![
        pair(format!("S{m}:north,north"), n.clone(), n.clone(), &[]),
        pair(format!("S{m}:south,south"), s.clone(), s.clone(), &[]),
        pair(format!("S{m}:north,south"), n.clone(), s.clone(), &[]),
        pair(format!("S{m}:south,north"), s.clone(), n.clone(), &[]),
        pair(format!("S{m}:generic,antipode"), g.clone(), g.antipode(), &[]),
        pair(format!("S{m}:generic,generic"), g.clone(), g.clone(), &[]),
        pair(format!("S{m}:equator,equator"), e.clone(), e.clone(), &[]),
        pair(format!("S{m}:equator,antipode"), e.clone(), e.antipode(), &[]),
        pair(format!("S{m}:north,near_north"), n.clone(), near_n.clone(), &["near_pole:y"]),
        pair(format!("S{m}:near_north,south"), near_n.clone(), s.clone(), &["near_pole:x"]),
        pair(format!("S{m}:near_equator,south"), near_eq.clone(), s, &["near_equator:x"]),
        pair(format!("S{m}:north,near_equator"), n, near_eq, &["near_equator:y"]),
    ]
}

fn tuple_fixtures(n: usize, m: usize) -> Vec<TupleFixture> {
    let pts: Vec<UnitPoint> = (0..n).map(|k| generic(m, k + 1)).collect();
    let mut out = Vec::new();
    let name = |what: &str| format!("n{n}S{m}:{what}");
    out.push(tuple(name("generic"), pts.clone(), vec![]));
    out.push(tuple(name("all_equal"), vec![pts[0].clone(); n], vec![]));
    let poles: Vec<UnitPoint> = (0..n)
        .map(|k| UnitPoint::pole(m, if k % 2 == 0 { Sign::Plus } else { Sign::Minus }))
        .collect();
    out.push(tuple(name("alternating_poles"), poles, vec![]));
    // one antipodal pair at every position, and one equal pair at every position
    for i in 1..n {
        let mut a = pts.clone();
        a[i] = a[i - 1].antipode();
        out.push(tuple(name(&format!("antipodal_at_{i}")), a, vec![]));
        let mut e = pts.clone();
        e[i] = e[i - 1].clone();
        out.push(tuple(name(&format!("equal_at_{i}")), e, vec![]));
        let mut ne = pts.clone();
        ne[i] = nudge(&ne[i - 1], NEAR);
        out.push(tuple(name(&format!("near_equal_at_{i}")), ne, vec![format!("near_equal:{i}")]));
        let mut na = pts.clone();
        na[i] = nudge(&na[i - 1].antipode(), NEAR);
        out.push(tuple(
            name(&format!("near_antipodal_at_{i}")),
            na,
            vec![format!("near_antipodal:{i}")],
        ));
    }
    // all consecutive pairs antipodal
    let alt: Vec<UnitPoint> = (0..n)
        .map(|k| if k % 2 == 0 { pts[0].clone() } else { pts[0].antipode() })
        .collect();
    out.push(tuple(name("all_antipodal"), alt, vec![]));
    if n == 5 {
        // antipodal pair at i = 2 and equal pair at i = 4
        let mut mixed = pts.clone();
        mixed[2] = mixed[1].antipode();
        mixed[4] = mixed[3].clone();
        out.push(tuple(name("antipodal_2_equal_4"), mixed, vec![]));
    }
    out
}

/// Deterministic boundary cases for both planners.
pub fn adversarial_fixtures() -> Fixtures {
    let pairs = (1..=5).flat_map(pair_fixtures).collect();
    let mut tuples = Vec::new();
    for n in [3, 5] {
        for m in [1, 3, 5] {
            tuples.extend(tuple_fixtures(n, m));
        }
    }
    // even lengths go through the basepoint adapter
    for n in [2, 4] {
        for m in [1, 3] {
            tuples.extend(tuple_fixtures(n, m));
        }
    }
    Fixtures { pairs, tuples }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixture_list_is_deterministic_and_complete() {
        let f = adversarial_fixtures();
        assert_eq!(f, adversarial_fixtures());
        let n = UnitPoint::pole(3, Sign::Plus);
        assert!(f.pairs.iter().any(|p| p.x == n && p.y == n));
        assert!(f.tuples.iter().any(|t| t.name == "n5S3:antipodal_2_equal_4"));
        for t in &f.tuples {
            if t.name.contains("near_") {
                assert_eq!(t.expect_flags.len(), 1, "{}", t.name);
            }
        }
    }

    #[test]
    fn nudge_moves_by_eps() {
        let x = generic(3, 4);
        let y = nudge(&x, NEAR);
        assert!((x.distance(&y) - NEAR).abs() < 1e-12);
    }
}
