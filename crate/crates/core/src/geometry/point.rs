use std::cmp::Ordering;
use std::f64::consts::PI;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::GeometryError;

/// Tolerance for the unit-norm invariant on stored points.
pub const UNIT_TOL: f64 = 1e-9;
/// Inputs whose norm is within this distance of 1 are renormalized on construction.
pub const RENORMALIZE_TOL: f64 = 1e-6;
/// Default threshold on `<x, y> + 1` below which `slerp` refuses to interpolate.
pub const DEFAULT_ANTIPODAL_EPS: f64 = 1e-9;
/// A projection refuses points closer than this to its pole.
pub const POLE_TOL: f64 = 1e-12;

/// Sign of a pole or hemisphere: `+1` is the north pole `(0, ..., 0, 1)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "i8", into = "i8")]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    /// Sign of a nonzero real; `None` for zero or NaN.
    pub fn of(x: f64) -> Option<Sign> {
        if x > 0.0 {
            Some(Sign::Plus)
        } else if x < 0.0 {
            Some(Sign::Minus)
        } else {
            None
        }
    }
}

impl TryFrom<i8> for Sign {
    type Error = String;

    fn try_from(v: i8) -> Result<Self, Self::Error> {
        match v {
            1 => Ok(Sign::Plus),
            -1 => Ok(Sign::Minus),
            other => Err(format!("sign must be +1 or -1, got {other}")),
        }
    }
}

impl From<Sign> for i8 {
    fn from(s: Sign) -> i8 {
        match s {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Plus => "+",
            Sign::Minus => "-",
        })
    }
}

/// A point on the unit sphere `S^m`, stored as a unit vector in `R^{m+1}`.
///
/// Serialized as a bare coordinate array.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct UnitPoint {
    coords: Vec<f64>,
}

impl UnitPoint {
    /// Validates `coords`, renormalizing when the norm is off by at most 1e-6.
    pub fn new(coords: Vec<f64>) -> Result<Self, GeometryError> {
        if coords.len() < 2 {
            return Err(GeometryError::TooFewCoordinates(coords.len()));
        }
        if coords.iter().any(|c| !c.is_finite()) {
            return Err(GeometryError::NonFinite);
        }
        let norm = norm(&coords);
        if (norm - 1.0).abs() > RENORMALIZE_TOL {
            return Err(GeometryError::NotUnit { norm });
        }
        Ok(Self::normalized(coords))
    }

    /// Builds a point from a vector known to be nonzero, dividing by its norm.
    pub(crate) fn normalized(mut coords: Vec<f64>) -> Self {
        let n = norm(&coords);
        debug_assert!(n > 0.0 && n.is_finite());
        if n != 1.0 {
            coords.iter_mut().for_each(|c| *c /= n);
        }
        UnitPoint { coords }
    }

    /// North (`Plus`) or south (`Minus`) pole of `S^m`.
    pub fn pole(m: usize, sign: Sign) -> Self {
        let mut coords = vec![0.0; m + 1];
        coords[m] = sign.value();
        UnitPoint { coords }
    }

    /// The point `(1, 0, ..., 0)`.
    pub fn basepoint(m: usize) -> Self {
        let mut coords = vec![0.0; m + 1];
        coords[0] = 1.0;
        UnitPoint { coords }
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    /// Sphere dimension `m`; the ambient space is `R^{m+1}`.
    pub fn dim(&self) -> usize {
        self.coords.len() - 1
    }

    /// Last coordinate `x_{m+1}`, the height above the equator.
    pub fn height(&self) -> f64 {
        self.coords[self.coords.len() - 1]
    }

    pub fn dot(&self, other: &UnitPoint) -> f64 {
        dot(&self.coords, &other.coords)
    }

    pub fn distance(&self, other: &UnitPoint) -> f64 {
        self.coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt()
    }

    /// Distance from `self` to `-other`.
    pub fn antipodal_distance(&self, other: &UnitPoint) -> f64 {
        self.coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| (a + b) * (a + b))
            .sum::<f64>()
            .sqrt()
    }

    pub fn antipode(&self) -> UnitPoint {
        UnitPoint {
            coords: self.coords.iter().map(|c| -c).collect(),
        }
    }

    /// Great-circle angle in `[0, pi]`, accurate for nearly equal and nearly antipodal pairs.
    pub fn angle_to(&self, other: &UnitPoint) -> f64 {
        2.0 * self
            .distance(other)
            .atan2(self.antipodal_distance(other))
    }

    pub fn norm_deviation(&self) -> f64 {
        (norm(&self.coords) - 1.0).abs()
    }

    pub(crate) fn check_same_dim(&self, other: &UnitPoint) -> Result<(), GeometryError> {
        if self.dim() != other.dim() {
            return Err(GeometryError::DimensionMismatch {
                left: self.dim(),
                right: other.dim(),
            });
        }
        Ok(())
    }

    /// Lexicographic total order on coordinates, used to pick a canonical
    /// orientation for symmetric formulas.
    pub(crate) fn lex_cmp(&self, other: &UnitPoint) -> Ordering {
        for (a, b) in self.coords.iter().zip(&other.coords) {
            match a.total_cmp(b) {
                Ordering::Equal => continue,
                ord => return ord,
            }
        }
        self.coords.len().cmp(&other.coords.len())
    }
}

impl TryFrom<Vec<f64>> for UnitPoint {
    type Error = GeometryError;

    fn try_from(v: Vec<f64>) -> Result<Self, Self::Error> {
        UnitPoint::new(v)
    }
}

impl From<UnitPoint> for Vec<f64> {
    fn from(p: UnitPoint) -> Vec<f64> {
        p.coords
    }
}

impl fmt::Display for UnitPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Max-abs coordinate difference; the deviation metric used by every tolerance check.
pub fn max_abs_diff(a: &UnitPoint, b: &UnitPoint) -> f64 {
    a.coords()
        .iter()
        .zip(b.coords())
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

/// Geodesic interpolation between two non-antipodal points.
///
/// `slerp(x, y, t)` and `slerp(y, x, 1 - t)` are evaluated from the same
/// canonically ordered pair, so the reversal identity holds to rounding in `t`
/// even when the pair is badly conditioned.
pub fn slerp(x: &UnitPoint, y: &UnitPoint, t: f64) -> Result<UnitPoint, GeometryError> {
    slerp_with(x, y, t, DEFAULT_ANTIPODAL_EPS)
}

pub fn slerp_with(
    x: &UnitPoint,
    y: &UnitPoint,
    t: f64,
    antipodal_eps: f64,
) -> Result<UnitPoint, GeometryError> {
    x.check_same_dim(y)?;
    check_unit_interval(t)?;
    let d = x.dot(y);
    if d <= -1.0 + antipodal_eps {
        return Err(GeometryError::AntipodalInput { dot: d });
    }
    Ok(slerp_unchecked(x, y, x.angle_to(y), t))
}

/// Slerp without validation; `theta` must be the angle between `p` and `q`.
pub(crate) fn slerp_unchecked(p: &UnitPoint, q: &UnitPoint, theta: f64, t: f64) -> UnitPoint {
    if p.lex_cmp(q) == Ordering::Greater {
        return slerp_oriented(q, p, theta, 1.0 - t);
    }
    slerp_oriented(p, q, theta, t)
}

fn slerp_oriented(p: &UnitPoint, q: &UnitPoint, theta: f64, s: f64) -> UnitPoint {
    if s <= 0.0 || theta == 0.0 {
        return p.clone();
    }
    if s >= 1.0 {
        return q.clone();
    }
    // unit tangent at p pointing towards q
    let c = p.dot(q);
    let w: Vec<f64> = q
        .coords()
        .iter()
        .zip(p.coords())
        .map(|(qi, pi)| qi - c * pi)
        .collect();
    let wn = norm(&w);
    if wn == 0.0 {
        return p.clone();
    }
    let (sin, cos) = (s * theta).sin_cos();
    let out = p
        .coords()
        .iter()
        .zip(&w)
        .map(|(pi, wi)| cos * pi + sin * wi / wn)
        .collect();
    UnitPoint::normalized(out)
}

/// Stereographic projection from the pole with the given sign onto `R^m`.
pub fn stereo_project(pole: Sign, x: &UnitPoint) -> Result<Vec<f64>, GeometryError> {
    let m = x.dim();
    let c = x.coords();
    let s = pole.value();
    let tail = c[m] - s;
    // 1 - s*x_{m+1} written as |x - pole|^2 / 2, which stays accurate near the pole
    let denom = (dot(&c[..m], &c[..m]) + tail * tail) / 2.0;
    if (2.0 * denom).sqrt() <= POLE_TOL {
        return Err(GeometryError::AtPole);
    }
    Ok(c[..m].iter().map(|v| v / denom).collect())
}

/// Inverse of [`stereo_project`].
pub fn stereo_unproject(pole: Sign, u: &[f64]) -> Result<UnitPoint, GeometryError> {
    if u.is_empty() {
        return Err(GeometryError::TooFewCoordinates(u.len() + 1));
    }
    if u.iter().any(|v| !v.is_finite()) {
        return Err(GeometryError::NonFinite);
    }
    let m = u.len();
    let r2 = dot(u, u);
    if !r2.is_finite() {
        return Ok(UnitPoint::pole(m, pole));
    }
    let mut coords: Vec<f64> = u.iter().map(|v| 2.0 * v / (1.0 + r2)).collect();
    coords.push(pole.value() * (r2 - 1.0) / (r2 + 1.0));
    Ok(UnitPoint::normalized(coords))
}

/// The unit tangent field `v(x) = (-x2, x1, -x4, x3, ...)` on an odd sphere.
pub fn vector_field(x: &UnitPoint) -> Result<UnitPoint, GeometryError> {
    let m = x.dim();
    if m % 2 == 0 {
        return Err(GeometryError::EvenDimension(m));
    }
    let c = x.coords();
    let mut v = vec![0.0; m + 1];
    for k in (0..=m).step_by(2) {
        v[k] = -c[k + 1];
        v[k + 1] = c[k];
    }
    Ok(UnitPoint { coords: v })
}

/// Point on the great circle through `p` with initial direction `v`, after angle `angle`.
pub(crate) fn great_arc(p: &UnitPoint, v: &UnitPoint, angle: f64) -> UnitPoint {
    let (sin, cos) = angle.sin_cos();
    UnitPoint::normalized(
        p.coords()
            .iter()
            .zip(v.coords())
            .map(|(a, b)| cos * a + sin * b)
            .collect(),
    )
}

/// The half great circle from one pole to the other through `(0, ..., 0, 1, 0)`.
pub(crate) fn pole_arc(m: usize, sign: Sign, s: f64) -> UnitPoint {
    let mut coords = vec![0.0; m + 1];
    coords[m - 1] = (PI * s).sin();
    coords[m] = sign.value() * (PI * s).cos();
    UnitPoint::normalized(coords)
}

/// Radial approach `normalize((1 - s) x + s * pole)`.
pub(crate) fn pole_approach(p: &UnitPoint, sign: Sign, s: f64) -> UnitPoint {
    let m = p.dim();
    let mut coords: Vec<f64> = p.coords().iter().map(|c| (1.0 - s) * c).collect();
    coords[m] += s * sign.value();
    UnitPoint::normalized(coords)
}

pub(crate) fn check_unit_interval(t: f64) -> Result<(), GeometryError> {
    if !(0.0..=1.0).contains(&t) {
        return Err(GeometryError::OutOfRange(t));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(v: &[f64]) -> UnitPoint {
        UnitPoint::new(v.to_vec()).unwrap()
    }

    #[test]
    fn slerp_endpoints_and_midpoint() {
        let x = p(&[1.0, 0.0]);
        let y = p(&[0.0, 1.0]);
        assert_eq!(slerp(&x, &y, 0.0).unwrap(), x);
        let mid = slerp(&x, &y, 0.5).unwrap();
        let h = 2f64.sqrt() / 2.0;
        assert!(max_abs_diff(&mid, &p(&[h, h])) < 1e-15);
        assert_eq!(slerp(&x, &y, 1.0).unwrap(), y);
    }

    #[test]
    fn slerp_reversal_in_r4() {
        let x = p(&[1.0, 0.0, 0.0, 0.0]);
        let y = p(&[0.0, 1.0, 0.0, 0.0]);
        for k in 0..=100 {
            let t = k as f64 / 100.0;
            let a = slerp(&x, &y, t).unwrap();
            let b = slerp(&y, &x, 1.0 - t).unwrap();
            assert!(max_abs_diff(&a, &b) < 1e-12);
        }
    }

    #[test]
    fn slerp_rejects_antipodes() {
        let x = p(&[0.0, 0.0, 1.0]);
        let err = slerp(&x, &x.antipode(), 0.3).unwrap_err();
        assert!(matches!(err, GeometryError::AntipodalInput { .. }));
    }

    #[test]
    fn slerp_resolves_tiny_angles() {
        let x = p(&[1.0, 0.0, 0.0]);
        let y = UnitPoint::normalized(vec![1.0, 1e-8, 0.0]);
        assert_eq!(slerp(&x, &y, 1.0).unwrap(), y);
        let mid = slerp(&x, &y, 0.5).unwrap();
        assert!((mid.coords()[1] - 0.5e-8).abs() < 1e-20);
    }

    #[test]
    fn slerp_checks_parameter() {
        let x = p(&[1.0, 0.0]);
        assert!(matches!(
            slerp(&x, &x, 1.5),
            Err(GeometryError::OutOfRange(_))
        ));
    }

    #[test]
    fn stereographic_fixtures() {
        let south = UnitPoint::pole(2, Sign::Minus);
        assert_eq!(stereo_project(Sign::Plus, &south).unwrap(), vec![0.0, 0.0]);
        let eq = p(&[1.0, 0.0, 0.0]);
        let u = stereo_project(Sign::Plus, &eq).unwrap();
        assert!((u[0] - 1.0).abs() < 1e-15 && u[1].abs() < 1e-15);
        let north = UnitPoint::pole(2, Sign::Plus);
        assert_eq!(
            stereo_project(Sign::Plus, &north),
            Err(GeometryError::AtPole)
        );
    }

    #[test]
    fn unproject_origin_and_far_field() {
        let o = stereo_unproject(Sign::Plus, &[0.0, 0.0]).unwrap();
        assert_eq!(o, UnitPoint::pole(2, Sign::Minus));
        let far = stereo_unproject(Sign::Minus, &[1e6, 0.0, 0.0]).unwrap();
        assert!(far.dot(&UnitPoint::pole(3, Sign::Minus)) > 1.0 - 1e-5);
    }

    #[test]
    fn vector_field_on_s3() {
        let x = p(&[1.0, 0.0, 0.0, 0.0]);
        assert_eq!(vector_field(&x).unwrap(), p(&[0.0, 1.0, 0.0, 0.0]));
        assert_eq!(
            vector_field(&p(&[0.0, 0.0, 1.0])),
            Err(GeometryError::EvenDimension(2))
        );
    }

    #[test]
    fn construction_renormalizes_or_rejects() {
        let q = UnitPoint::new(vec![1.0 + 5e-7, 0.0]).unwrap();
        assert_eq!(q.coords(), &[1.0, 0.0]);
        assert!(matches!(
            UnitPoint::new(vec![1.1, 0.0]),
            Err(GeometryError::NotUnit { .. })
        ));
        assert!(matches!(
            UnitPoint::new(vec![1.0]),
            Err(GeometryError::TooFewCoordinates(1))
        ));
    }

    #[test]
    fn sign_serializes_as_integer() {
        assert_eq!(serde_json::to_string(&Sign::Minus).unwrap(), "-1");
        assert!(serde_json::from_str::<Sign>("0").is_err());
    }
}
