use std::fmt;

use serde::{Deserialize, Serialize};

use super::{Plan, PlanError, PlanMeta, Tolerances, WaypointTuple};
use crate::geometry::{vector_field, PiecewisePath, Segment, UnitPoint};

/// How consecutive waypoints `x_i, x_{i+1}` are joined.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PairRule {
    /// `x_i = x_{i+1}`: stay put.
    ConstantRule,
    /// Neither equal nor antipodal: shortest geodesic.
    SlerpRule,
    /// Antipodal, first half of the tuple: half great circle leaving `x_i` along `v(x_i)`.
    ArcForwardRule,
    /// Antipodal, second half: the half great circle leaving `x_{i+1}` along
    /// `v(x_{i+1})`, traversed backwards.
    ArcBackwardRule,
}

impl PairRule {
    /// The rule the reversed tuple uses at the mirrored position.
    pub fn reversal_partner(self) -> PairRule {
        match self {
            PairRule::ArcForwardRule => PairRule::ArcBackwardRule,
            PairRule::ArcBackwardRule => PairRule::ArcForwardRule,
            other => other,
        }
    }
}

impl fmt::Display for PairRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// Piece `V_j` of the partition of `(S^m)^n` containing a tuple, where `j`
/// counts consecutive antipodal pairs (equivalently, equal neighbours in the
/// sign-twisted tuple `(x_1, -x_2, x_3, ...)`).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TupleDomain {
    pub j: usize,
    pub rules: Vec<PairRule>,
}

fn check_odd(w: &WaypointTuple) -> Result<(), PlanError> {
    let n = w.len();
    if n % 2 == 0 {
        return Err(PlanError::EvenN(n));
    }
    if w.dim() % 2 == 0 {
        return Err(PlanError::EvenM(w.dim()));
    }
    Ok(())
}

pub fn classify_tuple(w: &WaypointTuple) -> Result<TupleDomain, PlanError> {
    classify_tuple_with(w, &Tolerances::default())
}

pub fn classify_tuple_with(w: &WaypointTuple, tol: &Tolerances) -> Result<TupleDomain, PlanError> {
    check_odd(w)?;
    let n = w.len();
    let l = (n - 1) / 2;
    let pts = w.points();
    let mut j = 0;
    let rules = (1..n)
        .map(|i| {
            let (a, b) = (&pts[i - 1], &pts[i]);
            if a.distance(b) <= tol.equal {
                PairRule::ConstantRule
            } else if a.antipodal_distance(b) <= tol.antipodal {
                j += 1;
                if i <= l {
                    PairRule::ArcForwardRule
                } else {
                    PairRule::ArcBackwardRule
                }
            } else {
                PairRule::SlerpRule
            }
        })
        .collect();
    Ok(TupleDomain { j, rules })
}

/// The `n`-waypoint bidirectional planner for odd `n` on odd spheres.
pub fn plan_tuple(w: &WaypointTuple) -> Result<Plan, PlanError> {
    plan_tuple_with(w, &Tolerances::default())
}

pub fn plan_tuple_with(w: &WaypointTuple, tol: &Tolerances) -> Result<Plan, PlanError> {
    let domain = classify_tuple_with(w, tol)?;
    let pts = w.points();
    let n = pts.len();
    let pieces = domain
        .rules
        .iter()
        .enumerate()
        .map(|(k, rule)| {
            let (a, b) = (&pts[k], &pts[k + 1]);
            let seg = match rule {
                PairRule::ConstantRule => Segment::constant(a.clone()),
                PairRule::SlerpRule => Segment::slerp(a.clone(), b.clone())?,
                PairRule::ArcForwardRule => {
                    Segment::great_arc_forward(a.clone(), vector_field(a)?)?
                }
                PairRule::ArcBackwardRule => {
                    Segment::great_arc_backward(b.clone(), vector_field(b)?)?
                }
            };
            Ok(PiecewisePath::single(seg)?)
        })
        .collect::<Result<Vec<_>, PlanError>>()?;
    let weight = 1.0 / (n - 1) as f64;
    let path = PiecewisePath::concat(&pieces, &vec![weight; n - 1])?;
    Ok(Plan {
        path,
        metadata: PlanMeta {
            domain: format!("V_{}", domain.j),
            rules: domain.rules.iter().map(ToString::to_string).collect(),
            flags: tuple_flags(pts, tol),
        },
        waypoint_times: (0..n).map(|i| i as f64 / (n - 1) as f64).collect(),
    })
}

/// Even-`n` planner: inserts `basepoint` in the middle slot and runs the odd
/// planner on the resulting `(n+1)`-tuple. Since the middle slot is fixed by
/// reversal, the result stays bidirectional. `waypoint_times` records when the
/// original waypoints are visited (the basepoint is visited at `t = 1/2`).
pub fn plan_tuple_even(w: &WaypointTuple, basepoint: Option<&UnitPoint>) -> Result<Plan, PlanError> {
    let n = w.len();
    if n % 2 == 1 {
        return Err(PlanError::OddN(n));
    }
    let m = w.dim();
    if m % 2 == 0 {
        return Err(PlanError::EvenM(m));
    }
    let base = match basepoint {
        Some(b) => {
            b.check_dims(&w.points()[0])?;
            b.clone()
        }
        None => UnitPoint::basepoint(m),
    };
    let half = n / 2;
    let mut pts = w.points().to_vec();
    pts.insert(half, base);
    let tol = Tolerances::default();
    let mut plan = plan_tuple_with(&WaypointTuple::new(pts.clone())?, &tol)?;
    // report flags against the caller's indices; conditions created by the
    // basepoint itself are tagged separately
    let mut flags = tuple_flags(w.points(), &tol);
    for f in tuple_flags(&pts[half - 1..half + 2], &tol) {
        let (kind, _) = f.split_once(':').expect("flag has an index");
        flags.push(format!("{kind}:basepoint"));
    }
    plan.metadata.flags = flags;
    let n_f = n as f64;
    plan.waypoint_times = (0..n)
        .map(|k| if k < half { k as f64 / n_f } else { (k + 1) as f64 / n_f })
        .collect();
    plan.metadata.flags.push("basepoint_inserted".to_string());
    Ok(plan)
}

fn tuple_flags(pts: &[UnitPoint], tol: &Tolerances) -> Vec<String> {
    let mut flags = Vec::new();
    for (k, pair) in pts.windows(2).enumerate() {
        let i = k + 1;
        let (a, b) = (&pair[0], &pair[1]);
        let (d_eq, d_anti) = (a.distance(b), a.antipodal_distance(b));
        if d_eq > tol.equal && d_eq <= tol.near_boundary {
            flags.push(format!("near_equal:{i}"));
        }
        if d_anti > tol.antipodal && d_anti <= tol.near_boundary {
            flags.push(format!("near_antipodal:{i}"));
        }
        if d_anti > tol.antipodal && a.dot(b) < -1.0 + 1e-6 {
            flags.push(format!("ill_conditioned_slerp:{i}"));
        }
    }
    flags
}
