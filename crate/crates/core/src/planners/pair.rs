use std::fmt;

use serde::{Deserialize, Serialize};

use super::{Plan, PlanError, PlanMeta, Tolerances};
use crate::geometry::{stereo_project, PiecewisePath, Segment, Sign, UnitPoint};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PairTag {
    /// Both points avoid the north pole; plan in the chart centred at the south pole.
    UPlus,
    /// Both points avoid the south pole.
    UMinus,
    /// The points lie in opposite open hemispheres.
    V,
}

impl fmt::Display for PairTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PairTag::UPlus => "UPlus",
            PairTag::UMinus => "UMinus",
            PairTag::V => "V",
        })
    }
}

/// Selected domain for a pair, with its robustness margin.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PairDomain {
    pub tag: PairTag,
    pub margin: f64,
}

const ADMISSIBLE_TOL: f64 = 1e-9;

/// Margins of the three domains; `None` means not admissible.
fn margins(x: &UnitPoint, y: &UnitPoint) -> [(PairTag, Option<f64>); 3] {
    let m = x.dim();
    let chart = |sign: Sign| {
        let pole = UnitPoint::pole(m, sign);
        let d = x.distance(&pole).min(y.distance(&pole));
        (d > ADMISSIBLE_TOL).then_some(d)
    };
    let (hx, hy) = (x.height(), y.height());
    let v = (hx * hy < 0.0).then(|| hx.abs().min(hy.abs()));
    [
        (PairTag::UPlus, chart(Sign::Plus)),
        (PairTag::UMinus, chart(Sign::Minus)),
        (PairTag::V, v),
    ]
}

/// Picks the admissible domain with the largest margin (ties go to the earlier
/// of `UPlus`, `UMinus`, `V`). Symmetric in `x` and `y`.
pub fn classify_pair(x: &UnitPoint, y: &UnitPoint) -> Result<PairDomain, PlanError> {
    x.check_dims(y)?;
    let mut best: Option<PairDomain> = None;
    for (tag, margin) in margins(x, y) {
        let Some(margin) = margin else { continue };
        if best.is_none_or(|b| margin > b.margin) {
            best = Some(PairDomain { tag, margin });
        }
    }
    // the three sets cover S^m x S^m
    Ok(best.expect("at least one pair domain is admissible"))
}

/// The three-domain bidirectional planner for a pair of points.
pub fn plan_pair(x: &UnitPoint, y: &UnitPoint) -> Result<Plan, PlanError> {
    let domain = classify_pair(x, y)?;
    let (path, rules) = match domain.tag {
        PairTag::UPlus | PairTag::UMinus => {
            let pole = if domain.tag == PairTag::UPlus {
                Sign::Plus
            } else {
                Sign::Minus
            };
            let a = stereo_project(pole, x)?;
            let b = stereo_project(pole, y)?;
            let seg = if a == b {
                Segment::constant(x.clone())
            } else {
                Segment::chart_line(pole, a, b)?
            };
            (PiecewisePath::single(seg)?, vec![format!("ChartLine({pole})")])
        }
        PairTag::V => {
            let sx = Sign::of(x.height()).expect("V excludes the equator");
            let approach_x = PiecewisePath::single(Segment::pole_approach(x.clone())?)?;
            let arc = PiecewisePath::single(Segment::pole_arc(x.dim(), sx))?;
            let leave_y = PiecewisePath::single(Segment::pole_approach(y.clone())?)?.reverse();
            let third = 1.0 / 3.0;
            (
                PiecewisePath::concat(&[approach_x, arc, leave_y], &[third, third, third])?,
                vec![
                    "PoleApproach".to_string(),
                    format!("PoleArc({sx})"),
                    "ReversedPoleApproach".to_string(),
                ],
            )
        }
    };
    Ok(Plan {
        path,
        metadata: PlanMeta {
            domain: domain.tag.to_string(),
            rules,
            flags: pair_flags(x, y, &Tolerances::default()),
        },
        waypoint_times: vec![0.0, 1.0],
    })
}

fn pair_flags(x: &UnitPoint, y: &UnitPoint, tol: &Tolerances) -> Vec<String> {
    let m = x.dim();
    let mut flags = Vec::new();
    for (name, p) in [("x", x), ("y", y)] {
        let to_pole = [Sign::Plus, Sign::Minus]
            .into_iter()
            .map(|s| p.distance(&UnitPoint::pole(m, s)))
            .fold(f64::INFINITY, f64::min);
        if to_pole > ADMISSIBLE_TOL && to_pole <= tol.near_boundary {
            flags.push(format!("near_pole:{name}"));
        }
        let h = p.height().abs();
        if h > 0.0 && h <= tol.near_boundary {
            flags.push(format!("near_equator:{name}"));
        }
    }
    flags
}

impl UnitPoint {
    pub(crate) fn check_dims(&self, other: &UnitPoint) -> Result<(), PlanError> {
        if self.dim() != other.dim() {
            return Err(PlanError::MixedDimensions {
                left: self.dim(),
                right: other.dim(),
            });
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{max_abs_diff, max_deviation};

    fn p(v: &[f64]) -> UnitPoint {
        UnitPoint::new(v.to_vec()).unwrap()
    }

    #[test]
    fn pole_fixtures() {
        let n = UnitPoint::pole(3, Sign::Plus);
        let s = UnitPoint::pole(3, Sign::Minus);
        assert_eq!(classify_pair(&n, &n).unwrap().tag, PairTag::UMinus);
        assert_eq!(classify_pair(&n, &s).unwrap().tag, PairTag::V);
        assert_eq!(classify_pair(&s, &n).unwrap().tag, PairTag::V);
        assert_eq!(classify_pair(&s, &s).unwrap().tag, PairTag::UPlus);
    }

    #[test]
    fn equal_margins_prefer_uplus() {
        let x = p(&[1.0, 0.0, 0.0, 0.0]);
        let d = classify_pair(&x, &x).unwrap();
        assert_eq!(d.tag, PairTag::UPlus);
        assert!((d.margin - 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn pole_to_pole_passes_through_the_equator() {
        let n = UnitPoint::pole(2, Sign::Plus);
        let s = UnitPoint::pole(2, Sign::Minus);
        let plan = plan_pair(&n, &s).unwrap();
        assert_eq!(plan.metadata.domain, "V");
        assert_eq!(plan.path.segments().len(), 3);
        let mid = plan.path.evaluate(0.5).unwrap();
        assert!(max_abs_diff(&mid, &p(&[0.0, 1.0, 0.0])) < 1e-15);
        assert_eq!(plan.path.evaluate(1.0).unwrap(), s);
    }

    #[test]
    fn equal_points_give_a_constant_path() {
        let x = p(&[0.0, 0.6, 0.8]);
        let plan = plan_pair(&x, &x).unwrap();
        for k in 0..=20 {
            let q = plan.path.evaluate(k as f64 / 20.0).unwrap();
            assert!(max_abs_diff(&q, &x) < 1e-15);
        }
    }

    #[test]
    fn reversing_the_pair_reverses_the_path() {
        let x = UnitPoint::normalized(vec![0.1, -0.2, 0.1, 0.95]);
        let y = UnitPoint::normalized(vec![-0.1, 0.2, 0.15, -0.9]);
        let fwd = plan_pair(&x, &y).unwrap().path;
        let bwd = plan_pair(&y, &x).unwrap().path;
        assert_eq!(plan_pair(&x, &y).unwrap().metadata.domain, "V");
        let dev = max_deviation(
            |t| bwd.evaluate(t).unwrap(),
            |t| fwd.evaluate(1.0 - t).unwrap(),
            201,
        );
        assert!(dev < 1e-12, "{dev}");
    }

    #[test]
    fn near_pole_points_are_flagged() {
        let x = UnitPoint::new(vec![1e-7, 0.0, 1.0]).unwrap();
        let plan = plan_pair(&x, &x).unwrap();
        assert!(plan.metadata.flags.contains(&"near_pole:x".to_string()));
        assert!(plan.metadata.flags.contains(&"near_pole:y".to_string()));
    }
}
