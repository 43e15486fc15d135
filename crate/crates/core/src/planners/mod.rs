//! Bidirectional motion planners on spheres.
//!
//! A planner is bidirectional when feeding it the reversed input produces the
//! reversed path. Both planners here satisfy this segment by segment: every
//! construction is paired with its exact time reversal.

mod pair;
mod tuple;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::{GeometryError, PiecewisePath, UnitPoint};

pub use pair::{classify_pair, plan_pair, PairDomain, PairTag};
pub use tuple::{
    classify_tuple, classify_tuple_with, plan_tuple, plan_tuple_even, plan_tuple_with, PairRule,
    TupleDomain,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PlanError {
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error("the waypoint planner needs an odd number of points, got n = {0}")]
    EvenN(usize),
    #[error("the waypoint planner needs an odd sphere dimension, got m = {0} (even spheres carry no non-vanishing vector field)")]
    EvenM(usize),
    #[error("n = {0} is odd; use the odd waypoint planner directly")]
    OddN(usize),
    #[error("need at least {min} waypoints, got {got}")]
    TooFewPoints { min: usize, got: usize },
    #[error("waypoints live on different spheres (S^{left} and S^{right})")]
    MixedDimensions { left: usize, right: usize },
}

/// Equality/antipodality thresholds (Euclidean distances) and the flagging band.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub equal: f64,
    pub antipodal: f64,
    pub near_boundary: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            equal: 1e-9,
            antipodal: 1e-9,
            near_boundary: 1e-6,
        }
    }
}

/// Ordered waypoints `(x_1, ..., x_n)` on a common sphere, `n >= 2`.
///
/// JSON form: `{ "m": int, "points": [[real]] }`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawTuple", into = "RawTuple")]
pub struct WaypointTuple {
    points: Vec<UnitPoint>,
}

#[derive(Serialize, Deserialize)]
struct RawTuple {
    m: usize,
    points: Vec<UnitPoint>,
}

impl TryFrom<RawTuple> for WaypointTuple {
    type Error = PlanError;

    fn try_from(raw: RawTuple) -> Result<Self, PlanError> {
        let w = WaypointTuple::new(raw.points)?;
        if w.dim() != raw.m {
            return Err(PlanError::MixedDimensions {
                left: raw.m,
                right: w.dim(),
            });
        }
        Ok(w)
    }
}

impl From<WaypointTuple> for RawTuple {
    fn from(w: WaypointTuple) -> RawTuple {
        RawTuple {
            m: w.dim(),
            points: w.points,
        }
    }
}

impl WaypointTuple {
    pub fn new(points: Vec<UnitPoint>) -> Result<Self, PlanError> {
        if points.len() < 2 {
            return Err(PlanError::TooFewPoints {
                min: 2,
                got: points.len(),
            });
        }
        let m = points[0].dim();
        if let Some(bad) = points.iter().find(|p| p.dim() != m) {
            return Err(PlanError::MixedDimensions {
                left: m,
                right: bad.dim(),
            });
        }
        Ok(WaypointTuple { points })
    }

    pub fn points(&self) -> &[UnitPoint] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.points[0].dim()
    }

    /// The involution `(x_1, ..., x_n) -> (x_n, ..., x_1)`.
    pub fn reversal(&self) -> WaypointTuple {
        WaypointTuple {
            points: self.points.iter().rev().cloned().collect(),
        }
    }
}

/// Domain and rule information attached to a planned path.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PlanMeta {
    pub domain: String,
    pub rules: Vec<String>,
    pub flags: Vec<String>,
}

/// A planned path together with the times at which it visits the input waypoints.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Plan {
    pub path: PiecewisePath,
    pub metadata: PlanMeta,
    pub waypoint_times: Vec<f64>,
}

impl Plan {
    /// Largest deviation between the path at the recorded times and the waypoints.
    pub fn waypoint_deviation(&self, waypoints: &[UnitPoint]) -> f64 {
        self.waypoint_times
            .iter()
            .zip(waypoints)
            .map(|(&t, w)| {
                let at = self.path.evaluate(t).expect("waypoint time in range");
                crate::geometry::max_abs_diff(&at, w)
            })
            .fold(0.0, f64::max)
    }
}
