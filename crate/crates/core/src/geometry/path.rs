use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::point::{
    check_unit_interval, great_arc, max_abs_diff, pole_approach, pole_arc, slerp_unchecked,
    stereo_unproject, Sign, UnitPoint, UNIT_TOL,
};
use super::GeometryError;

/// Gap allowed between consecutive pieces of a path.
pub const JOIN_TOL: f64 = 1e-9;

/// One analytic piece of a path, parametrized over `[0, 1]`.
///
/// Every kind has an explicit reversal partner, so reversing a path is exact
/// and the result stays serializable.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum Segment {
    Constant {
        p: UnitPoint,
    },
    /// Shortest geodesic from `p` to `q`, with `theta` the angle between them.
    Slerp {
        p: UnitPoint,
        q: UnitPoint,
        theta: f64,
    },
    /// `cos(pi s) p + sin(pi s) v`: half great circle from `p` to `-p`.
    GreatArcForward {
        p: UnitPoint,
        v: UnitPoint,
    },
    /// Time reversal of `GreatArcForward { p: q, v }`; runs from `-q` to `q`.
    GreatArcBackward {
        q: UnitPoint,
        v: UnitPoint,
    },
    /// Radial approach from `p` to the pole of the given sign.
    PoleApproach {
        p: UnitPoint,
        sign: Sign,
    },
    /// Radial departure from the pole of the given sign to `p`.
    ReversedPoleApproach {
        p: UnitPoint,
        sign: Sign,
    },
    /// `(0, ..., 0, sin(pi s), sign * cos(pi s))` in `R^{m+1}`.
    PoleArc {
        m: usize,
        sign: Sign,
    },
    /// Straight line from `a` to `b` in the stereographic chart of `pole`.
    ChartLine {
        pole: Sign,
        a: Vec<f64>,
        b: Vec<f64>,
    },
}

impl Segment {
    pub fn constant(p: UnitPoint) -> Segment {
        Segment::Constant { p }
    }

    /// Geodesic segment; fails on (near-)antipodal or identical endpoints.
    pub fn slerp(p: UnitPoint, q: UnitPoint) -> Result<Segment, GeometryError> {
        p.check_same_dim(&q)?;
        let theta = p.angle_to(&q);
        let seg = Segment::Slerp { p, q, theta };
        seg.validate()?;
        Ok(seg)
    }

    pub fn great_arc_forward(p: UnitPoint, v: UnitPoint) -> Result<Segment, GeometryError> {
        let seg = Segment::GreatArcForward { p, v };
        seg.validate()?;
        Ok(seg)
    }

    pub fn great_arc_backward(q: UnitPoint, v: UnitPoint) -> Result<Segment, GeometryError> {
        let seg = Segment::GreatArcBackward { q, v };
        seg.validate()?;
        Ok(seg)
    }

    pub fn pole_approach(p: UnitPoint) -> Result<Segment, GeometryError> {
        let sign = Sign::of(p.height()).ok_or_else(|| {
            GeometryError::InvalidSegment("pole approach from a point on the equator".into())
        })?;
        Ok(Segment::PoleApproach { p, sign })
    }

    pub fn pole_arc(m: usize, sign: Sign) -> Segment {
        Segment::PoleArc { m, sign }
    }

    pub fn chart_line(pole: Sign, a: Vec<f64>, b: Vec<f64>) -> Result<Segment, GeometryError> {
        let seg = Segment::ChartLine { pole, a, b };
        seg.validate()?;
        Ok(seg)
    }

    /// Sphere dimension of the points this segment visits.
    pub fn dim(&self) -> usize {
        match self {
            Segment::Constant { p }
            | Segment::Slerp { p, .. }
            | Segment::GreatArcForward { p, .. }
            | Segment::PoleApproach { p, .. }
            | Segment::ReversedPoleApproach { p, .. } => p.dim(),
            Segment::GreatArcBackward { q, .. } => q.dim(),
            Segment::PoleArc { m, .. } => *m,
            Segment::ChartLine { a, .. } => a.len(),
        }
    }

    /// Checks the per-kind invariants (used for deserialized input).
    pub fn validate(&self) -> Result<(), GeometryError> {
        let bad = |msg: String| Err(GeometryError::InvalidSegment(msg));
        match self {
            Segment::Constant { .. } => Ok(()),
            Segment::Slerp { p, q, theta } => {
                p.check_same_dim(q)?;
                let actual = p.angle_to(q);
                if !(*theta > 0.0 && *theta < PI) {
                    return bad(format!("slerp angle {theta} outside (0, pi)"));
                }
                if (actual - theta).abs() > UNIT_TOL {
                    return bad(format!("slerp angle {theta} does not match endpoints ({actual})"));
                }
                Ok(())
            }
            Segment::GreatArcForward { p, v } | Segment::GreatArcBackward { q: p, v } => {
                p.check_same_dim(v)?;
                let d = p.dot(v);
                if d.abs() > UNIT_TOL {
                    return bad(format!("arc direction not tangent (<p,v> = {d})"));
                }
                Ok(())
            }
            Segment::PoleApproach { p, sign } | Segment::ReversedPoleApproach { p, sign } => {
                if Sign::of(p.height()) != Some(*sign) {
                    return bad(format!("pole approach sign {sign} does not match start point"));
                }
                Ok(())
            }
            Segment::PoleArc { m, .. } => {
                if *m < 1 {
                    return bad("pole arc needs m >= 1".into());
                }
                Ok(())
            }
            Segment::ChartLine { a, b, .. } => {
                if a.is_empty() || a.len() != b.len() {
                    return bad("chart line endpoints must be nonempty and of equal length".into());
                }
                if a.iter().chain(b).any(|v| !v.is_finite()) {
                    return Err(GeometryError::NonFinite);
                }
                Ok(())
            }
        }
    }

    /// Value at local parameter `s` in `[0, 1]` (not range-checked).
    pub fn eval(&self, s: f64) -> UnitPoint {
        match self {
            Segment::Constant { p } => p.clone(),
            Segment::Slerp { p, q, theta } => slerp_unchecked(p, q, *theta, s),
            Segment::GreatArcForward { p, v } => great_arc(p, v, PI * s),
            Segment::GreatArcBackward { q, v } => great_arc(q, v, PI * (1.0 - s)),
            Segment::PoleApproach { p, sign } => pole_approach(p, *sign, s),
            Segment::ReversedPoleApproach { p, sign } => pole_approach(p, *sign, 1.0 - s),
            Segment::PoleArc { m, sign } => pole_arc(*m, *sign, s),
            Segment::ChartLine { pole, a, b } => {
                let u: Vec<f64> = a.iter().zip(b).map(|(x, y)| (1.0 - s) * x + s * y).collect();
                stereo_unproject(*pole, &u).expect("chart line endpoints are finite")
            }
        }
    }

    /// The segment traversed backwards: `reversed().eval(s) == eval(1 - s)`.
    pub fn reversed(&self) -> Segment {
        match self.clone() {
            Segment::Constant { p } => Segment::Constant { p },
            Segment::Slerp { p, q, theta } => Segment::Slerp { p: q, q: p, theta },
            Segment::GreatArcForward { p, v } => Segment::GreatArcBackward { q: p, v },
            Segment::GreatArcBackward { q, v } => Segment::GreatArcForward { p: q, v },
            Segment::PoleApproach { p, sign } => Segment::ReversedPoleApproach { p, sign },
            Segment::ReversedPoleApproach { p, sign } => Segment::PoleApproach { p, sign },
            Segment::PoleArc { m, sign } => Segment::PoleArc { m, sign: sign.flip() },
            Segment::ChartLine { pole, a, b } => Segment::ChartLine { pole, a: b, b: a },
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Segment::Constant { .. } => "Constant",
            Segment::Slerp { .. } => "Slerp",
            Segment::GreatArcForward { .. } => "GreatArcForward",
            Segment::GreatArcBackward { .. } => "GreatArcBackward",
            Segment::PoleApproach { .. } => "PoleApproach",
            Segment::ReversedPoleApproach { .. } => "ReversedPoleApproach",
            Segment::PoleArc { .. } => "PoleArc",
            Segment::ChartLine { .. } => "ChartLine",
        }
    }
}

/// A continuous map `[0, 1] -> S^m` made of segments glued at breakpoints.
///
/// JSON form: `{ "m": int, "breakpoints": [real], "segments": [ {"kind": ...} ] }`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawPath")]
pub struct PiecewisePath {
    m: usize,
    breakpoints: Vec<f64>,
    segments: Vec<Segment>,
}

#[derive(Deserialize)]
struct RawPath {
    m: usize,
    breakpoints: Vec<f64>,
    segments: Vec<Segment>,
}

impl TryFrom<RawPath> for PiecewisePath {
    type Error = GeometryError;

    fn try_from(raw: RawPath) -> Result<Self, Self::Error> {
        PiecewisePath::from_parts(raw.m, raw.breakpoints, raw.segments)
    }
}

impl PiecewisePath {
    /// Assembles and validates a path.
    pub fn from_parts(
        m: usize,
        breakpoints: Vec<f64>,
        segments: Vec<Segment>,
    ) -> Result<Self, GeometryError> {
        let invalid = |msg: &str| Err(GeometryError::InvalidPath(msg.to_string()));
        if segments.is_empty() {
            return invalid("a path needs at least one segment");
        }
        if breakpoints.len() != segments.len() + 1 {
            return invalid("expected one more breakpoint than segments");
        }
        if breakpoints[0] != 0.0 || *breakpoints.last().unwrap() != 1.0 {
            return invalid("breakpoints must start at 0 and end at 1");
        }
        if breakpoints.windows(2).any(|w| !(w[0] < w[1])) {
            return invalid("breakpoints must be strictly increasing");
        }
        for seg in &segments {
            seg.validate()?;
            if seg.dim() != m {
                return Err(GeometryError::DimensionMismatch {
                    left: m,
                    right: seg.dim(),
                });
            }
        }
        let path = PiecewisePath {
            m,
            breakpoints,
            segments,
        };
        if let Some((index, gap)) = path.worst_join() {
            if gap > JOIN_TOL {
                return Err(GeometryError::DiscontinuousJoin { index, gap });
            }
        }
        Ok(path)
    }

    /// A path made of a single segment.
    pub fn single(segment: Segment) -> Result<Self, GeometryError> {
        let m = segment.dim();
        Self::from_parts(m, vec![0.0, 1.0], vec![segment])
    }

    pub fn constant(p: UnitPoint) -> Self {
        PiecewisePath {
            m: p.dim(),
            breakpoints: vec![0.0, 1.0],
            segments: vec![Segment::Constant { p }],
        }
    }

    pub fn dim(&self) -> usize {
        self.m
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    /// Value at `t`; at a shared breakpoint the left segment wins.
    pub fn evaluate(&self, t: f64) -> Result<UnitPoint, GeometryError> {
        check_unit_interval(t)?;
        let k = self.segment_index(t);
        let (a, b) = (self.breakpoints[k], self.breakpoints[k + 1]);
        let s = ((t - a) / (b - a)).clamp(0.0, 1.0);
        Ok(self.segments[k].eval(s))
    }

    fn segment_index(&self, t: f64) -> usize {
        let last = self.segments.len() - 1;
        // first segment whose right breakpoint is >= t
        self.breakpoints[1..]
            .partition_point(|&b| b < t)
            .min(last)
    }

    pub fn start(&self) -> UnitPoint {
        self.segments[0].eval(0.0)
    }

    pub fn end(&self) -> UnitPoint {
        self.segments[self.segments.len() - 1].eval(1.0)
    }

    /// Largest gap between the end of one segment and the start of the next,
    /// with the junction index.
    pub fn worst_join(&self) -> Option<(usize, f64)> {
        self.join_gaps()
            .into_iter()
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(&b.1))
    }

    /// Gaps (max-abs) at each interior breakpoint.
    pub fn join_gaps(&self) -> Vec<f64> {
        self.segments
            .windows(2)
            .map(|w| max_abs_diff(&w[0].eval(1.0), &w[1].eval(0.0)))
            .collect()
    }

    /// The path run backwards: `reverse().evaluate(t) == evaluate(1 - t)`.
    pub fn reverse(&self) -> PiecewisePath {
        let k = self.breakpoints.len();
        let mut breakpoints: Vec<f64> = (0..k).map(|i| 1.0 - self.breakpoints[k - 1 - i]).collect();
        breakpoints[0] = 0.0;
        breakpoints[k - 1] = 1.0;
        PiecewisePath {
            m: self.m,
            breakpoints,
            segments: self.segments.iter().rev().map(Segment::reversed).collect(),
        }
    }

    /// Concatenation with block `i` occupying an interval of length `weights[i]`.
    pub fn concat(paths: &[PiecewisePath], weights: &[f64]) -> Result<PiecewisePath, GeometryError> {
        if paths.is_empty() || paths.len() != weights.len() {
            return Err(GeometryError::InvalidWeights(
                "need one positive weight per path".into(),
            ));
        }
        if weights.iter().any(|w| !(*w > 0.0) || !w.is_finite()) {
            return Err(GeometryError::InvalidWeights("weights must be positive".into()));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(GeometryError::InvalidWeights(format!(
                "weights sum to {total}, not 1"
            )));
        }
        let m = paths[0].m;
        for (i, pair) in paths.windows(2).enumerate() {
            if pair[1].m != m {
                return Err(GeometryError::DimensionMismatch {
                    left: m,
                    right: pair[1].m,
                });
            }
            let gap = max_abs_diff(&pair[0].end(), &pair[1].start());
            if gap > JOIN_TOL {
                return Err(GeometryError::DiscontinuousJoin { index: i, gap });
            }
        }

        let mut breakpoints = vec![0.0];
        let mut segments = Vec::new();
        let mut offset = 0.0;
        for (i, (path, &w)) in paths.iter().zip(weights).enumerate() {
            let block_end = if i + 1 == paths.len() { 1.0 } else { offset + w };
            for (j, seg) in path.segments.iter().enumerate() {
                let right = if j + 1 == path.segments.len() {
                    block_end
                } else {
                    offset + w * path.breakpoints[j + 1]
                };
                segments.push(seg.clone());
                breakpoints.push(right);
            }
            offset = block_end;
        }
        if breakpoints.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(GeometryError::InvalidWeights(
                "weights too small to keep breakpoints distinct".into(),
            ));
        }
        Ok(PiecewisePath {
            m,
            breakpoints,
            segments,
        })
    }

    /// `count` evenly spaced samples over `[0, 1]` (`count >= 2`).
    pub fn sample(&self, count: usize) -> Vec<(f64, UnitPoint)> {
        let count = count.max(2);
        (0..count)
            .map(|i| {
                let t = i as f64 / (count - 1) as f64;
                (t, self.evaluate(t).expect("grid parameter in range"))
            })
            .collect()
    }
}

/// Max over a uniform grid of `|a(t) - b(t)|` (max-abs coordinate metric).
pub fn max_deviation<F, G>(a: F, b: G, samples: usize) -> f64
where
    F: Fn(f64) -> UnitPoint,
    G: Fn(f64) -> UnitPoint,
{
    (0..samples)
        .map(|i| {
            let t = i as f64 / (samples - 1) as f64;
            max_abs_diff(&a(t), &b(t))
        })
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::point::vector_field;

    fn p(v: &[f64]) -> UnitPoint {
        UnitPoint::new(v.to_vec()).unwrap()
    }

    fn two_piece() -> PiecewisePath {
        let a = PiecewisePath::single(
            Segment::slerp(p(&[1.0, 0.0, 0.0]), p(&[0.0, 1.0, 0.0])).unwrap(),
        )
        .unwrap();
        let b = PiecewisePath::single(
            Segment::slerp(p(&[0.0, 1.0, 0.0]), p(&[0.0, 0.0, 1.0])).unwrap(),
        )
        .unwrap();
        PiecewisePath::concat(&[a, b], &[0.25, 0.75]).unwrap()
    }

    #[test]
    fn constant_path_everywhere() {
        let q = p(&[0.0, 0.6, 0.8]);
        let c = PiecewisePath::constant(q.clone());
        for t in [0.0, 0.3, 1.0] {
            assert_eq!(c.evaluate(t).unwrap(), q);
        }
        assert_eq!(c.reverse(), c);
    }

    #[test]
    fn slerp_segment_ends_at_q() {
        let path = PiecewisePath::single(
            Segment::slerp(p(&[1.0, 0.0]), p(&[0.0, 1.0])).unwrap(),
        )
        .unwrap();
        assert_eq!(path.evaluate(1.0).unwrap(), p(&[0.0, 1.0]));
    }

    #[test]
    fn breakpoint_returns_left_value() {
        let path = two_piece();
        let left = path.segments()[0].eval(1.0);
        let right = path.segments()[1].eval(0.0);
        assert_eq!(path.evaluate(0.25).unwrap(), left);
        assert!(max_abs_diff(&left, &right) < 1e-9);
    }

    #[test]
    fn out_of_range_parameter() {
        assert!(matches!(
            two_piece().evaluate(-0.1),
            Err(GeometryError::OutOfRange(_))
        ));
    }

    #[test]
    fn reverse_is_an_involution() {
        let path = two_piece();
        let back = path.reverse().reverse();
        let dev = max_deviation(
            |t| path.evaluate(t).unwrap(),
            |t| back.evaluate(t).unwrap(),
            201,
        );
        assert!(dev < 1e-12);
    }

    #[test]
    fn reversed_pole_arc_is_opposite_pole_arc() {
        let plus = Segment::pole_arc(3, Sign::Plus);
        let minus = Segment::pole_arc(3, Sign::Minus);
        for k in 0..=50 {
            let t = k as f64 / 50.0;
            assert!(max_abs_diff(&plus.reversed().eval(t), &minus.eval(t)) < 1e-12);
            // direct evaluation of the closed form
            let expected = p(&[0.0, 0.0, (PI * t).sin(), -(PI * t).cos()]);
            assert!(max_abs_diff(&plus.eval(1.0 - t), &expected) < 1e-12);
        }
    }

    #[test]
    fn reverse_of_concat_swaps_blocks() {
        let a = PiecewisePath::single(
            Segment::slerp(p(&[1.0, 0.0, 0.0]), p(&[0.0, 1.0, 0.0])).unwrap(),
        )
        .unwrap();
        let pv = p(&[0.0, 1.0, 0.0]);
        let b = PiecewisePath::single(Segment::pole_approach(p(&[0.0, 0.6, 0.8])).unwrap())
            .unwrap();
        let b = PiecewisePath::concat(
            &[
                PiecewisePath::single(Segment::slerp(pv, p(&[0.0, 0.6, 0.8])).unwrap()).unwrap(),
                b,
            ],
            &[0.5, 0.5],
        )
        .unwrap();
        let lhs = PiecewisePath::concat(&[a.clone(), b.clone()], &[0.3, 0.7])
            .unwrap()
            .reverse();
        let rhs = PiecewisePath::concat(&[b.reverse(), a.reverse()], &[0.7, 0.3]).unwrap();
        let dev = max_deviation(
            |t| lhs.evaluate(t).unwrap(),
            |t| rhs.evaluate(t).unwrap(),
            201,
        );
        assert!(dev < 1e-12, "{dev}");
    }

    #[test]
    fn concat_rejects_gaps() {
        let a = PiecewisePath::constant(p(&[1.0, 0.0]));
        let b = PiecewisePath::constant(p(&[0.0, 1.0]));
        let err = PiecewisePath::concat(&[a.clone(), a, b], &[0.2, 0.3, 0.5]).unwrap_err();
        assert!(matches!(err, GeometryError::DiscontinuousJoin { index: 1, .. }));
    }

    #[test]
    fn concat_of_constants_and_single() {
        let q = p(&[0.0, 1.0]);
        let c = PiecewisePath::constant(q.clone());
        let joined = PiecewisePath::concat(&[c.clone(), c.clone(), c.clone()], &[0.5, 0.25, 0.25])
            .unwrap();
        for k in 0..=10 {
            assert_eq!(joined.evaluate(k as f64 / 10.0).unwrap(), q);
        }
        let one = PiecewisePath::concat(&[two_piece()], &[1.0]).unwrap();
        assert_eq!(one, two_piece());
    }

    #[test]
    fn json_round_trip_and_validation() {
        let x = p(&[1.0, 0.0, 0.0, 0.0]);
        let v = vector_field(&x).unwrap();
        let arc = PiecewisePath::single(Segment::great_arc_forward(x, v).unwrap()).unwrap();
        let path = PiecewisePath::concat(&[two_piece_s3(), arc.reverse()], &[0.5, 0.5]);
        assert!(path.is_err());
        let text = serde_json::to_string(&arc).unwrap();
        assert!(text.contains("\"kind\":\"GreatArcForward\""));
        let back: PiecewisePath = serde_json::from_str(&text).unwrap();
        assert_eq!(back, arc);
        let broken = text.replace("\"breakpoints\":[0.0,1.0]", "\"breakpoints\":[0.0,0.5]");
        assert!(serde_json::from_str::<PiecewisePath>(&broken).is_err());
    }

    fn two_piece_s3() -> PiecewisePath {
        PiecewisePath::single(
            Segment::slerp(p(&[0.0, 0.0, 1.0, 0.0]), p(&[0.0, 0.0, 0.0, 1.0])).unwrap(),
        )
        .unwrap()
    }
}
