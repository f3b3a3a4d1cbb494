//! Spherical geometry on the unit sphere.
//!
//! Orientation convention used throughout the crate: a boundary is traversed
//! with its region on the left, as seen from outside the sphere. The signed
//! geodesic curvature of an arc is measured against the left normal, so an
//! arc that bends toward its left region has `kappa > 0`. With this choice
//! Gauss-Bonnet for the left region reads
//!
//! ```text
//! area = 2π - Σ kappa_e · length_e - Σ exterior_angle_v
//! ```
//!
//! and an interface between two regions carries
//! `kappa = pressure(left) - pressure(right)`.
//!
//! Every arc lies on a circle whose center is on its left at spherical
//! distance `radius = atan2(1, kappa)`, which is in `(0, π)`; negative
//! curvature corresponds to a center more than a quarter turn away.

use std::f64::consts::{FRAC_PI_2, PI};

use nalgebra::{Rotation3, Unit, Vector3};
use thiserror::Error;

/// Ambient 3-vector.
pub type Vec3 = Vector3<f64>;

pub const FOUR_PI: f64 = 4.0 * PI;

/// Tolerance on the norm of a freshly constructed [`SpherePoint`].
pub const CONSTRUCTION_TOL: f64 = 1e-12;
/// Maximum gap allowed when chaining arcs into a closed boundary.
pub const CLOSURE_TOL: f64 = 1e-10;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeomError {
    #[error("cannot place the zero vector on the sphere")]
    ZeroVector,
    #[error("non-finite coordinate")]
    NonFinite,
    #[error("{what} = {value} is outside its domain {domain}")]
    Domain {
        what: &'static str,
        value: f64,
        domain: &'static str,
    },
    #[error("ambiguous geodesic: endpoints are antipodal")]
    AmbiguousGeodesic,
    #[error("no circle of curvature {kappa} passes through points {distance} rad apart")]
    NoSuchCircle { kappa: f64, distance: f64 },
    #[error("degenerate arc: {0}")]
    DegenerateArc(&'static str),
    #[error("arcs do not meet: gap of {gap:e} rad")]
    VertexMismatch { gap: f64 },
    #[error("boundary is not closed: gap of {gap:e} rad")]
    NotClosed { gap: f64 },
    #[error("cusp: consecutive arcs reverse direction")]
    Cusp,
}

/// A point on the unit sphere.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpherePoint(Vec3);

impl SpherePoint {
    pub fn new(x: f64, y: f64, z: f64) -> Result<Self, GeomError> {
        Self::from_vec(Vec3::new(x, y, z))
    }

    /// Normalizes `v` onto the sphere.
    pub fn from_vec(v: Vec3) -> Result<Self, GeomError> {
        if !v.iter().all(|c| c.is_finite()) {
            return Err(GeomError::NonFinite);
        }
        let norm = v.norm();
        if norm < 1e-150 {
            return Err(GeomError::ZeroVector);
        }
        Ok(Self(v / norm))
    }

    /// Wraps a vector the caller knows to be unit length.
    pub(crate) fn from_unit(v: Vec3) -> Self {
        debug_assert!((v.norm() - 1.0).abs() < 1e-9, "not unit: {}", v.norm());
        Self(v)
    }

    pub fn x(&self) -> f64 {
        self.0.x
    }

    pub fn y(&self) -> f64 {
        self.0.y
    }

    pub fn z(&self) -> f64 {
        self.0.z
    }

    pub fn vec(&self) -> &Vec3 {
        &self.0
    }

    pub fn to_array(&self) -> [f64; 3] {
        [self.0.x, self.0.y, self.0.z]
    }

    pub fn antipode(&self) -> Self {
        Self(-self.0)
    }

    pub fn rotated(&self, rot: &Rotation3<f64>) -> Self {
        Self(rot * self.0)
    }

    pub fn distance(&self, other: &SpherePoint) -> f64 {
        spherical_distance(self, other)
    }
}

/// Great-circle distance in `[0, π]`.
///
/// Uses `atan2(|p × q|, p · q)`, which keeps full relative accuracy for
/// nearly coincident and nearly antipodal pairs where `acos` loses digits.
pub fn spherical_distance(p: &SpherePoint, q: &SpherePoint) -> f64 {
    let a = p.vec();
    let b = q.vec();
    a.cross(b).norm().atan2(a.dot(b))
}

/// Least perimeter enclosing `area` on the unit sphere: `sqrt(A (4π - A))`.
pub fn isoperimetric_profile(area: f64) -> Result<f64, GeomError> {
    if !(0.0..=FOUR_PI).contains(&area) {
        return Err(GeomError::Domain {
            what: "area",
            value: area,
            domain: "[0, 4π]",
        });
    }
    Ok((area * (FOUR_PI - area)).sqrt())
}

/// Total isoperimetric bound when area `k` is split into `t` and `k - t`.
pub fn split_profile(k: f64, t: f64) -> Result<f64, GeomError> {
    if !(k > 0.0 && k <= 2.0 * PI) {
        return Err(GeomError::Domain {
            what: "k",
            value: k,
            domain: "(0, 2π]",
        });
    }
    if !(0.0..=k).contains(&t) {
        return Err(GeomError::Domain {
            what: "t",
            value: t,
            domain: "[0, k]",
        });
    }
    Ok((t * (FOUR_PI - t)).sqrt() + ((k - t) * (FOUR_PI - k + t)).sqrt())
}

/// A full circle: the set of points at spherical distance `radius` from
/// `center`. Traversed counterclockwise around `center`, which keeps the
/// cap around `center` on the left.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CircleSpec {
    pub center: SpherePoint,
    pub radius: f64,
}

impl CircleSpec {
    pub fn new(center: SpherePoint, radius: f64) -> Result<Self, GeomError> {
        if !(radius > 0.0 && radius < PI) {
            return Err(GeomError::Domain {
                what: "radius",
                value: radius,
                domain: "(0, π)",
            });
        }
        Ok(Self { center, radius })
    }

    /// `cot(radius)`; zero for a great circle.
    pub fn curvature(&self) -> f64 {
        self.radius.cos() / self.radius.sin()
    }

    pub fn perimeter(&self) -> f64 {
        2.0 * PI * self.radius.sin()
    }

    /// Area of the cap around the center, `2π (1 - cos r)`.
    pub fn enclosed_area(&self) -> f64 {
        let s = (0.5 * self.radius).sin();
        FOUR_PI * s * s
    }

    /// Area from Gauss-Bonnet with no corners, `2π - κ L`.
    pub fn gauss_bonnet_area(&self) -> f64 {
        2.0 * PI - self.curvature() * self.perimeter()
    }

    /// Same circle traversed the other way.
    pub fn reversed(&self) -> Self {
        Self {
            center: self.center.antipode(),
            radius: PI - self.radius,
        }
    }

    /// An arbitrary point on the circle.
    pub fn base_point(&self) -> SpherePoint {
        let c = self.center.vec();
        let helper = if c.x.abs() < 0.9 { Vec3::x() } else { Vec3::y() };
        let u = c.cross(&helper).normalize();
        SpherePoint::from_unit(self.radius.cos() * c + self.radius.sin() * u)
    }

    /// `count` points equally spaced counterclockwise, starting at `start`
    /// (or [`CircleSpec::base_point`]).
    pub fn sample(&self, count: usize, start: Option<SpherePoint>) -> Vec<SpherePoint> {
        let start = start.unwrap_or_else(|| self.base_point());
        let axis = Unit::new_unchecked(*self.center.vec());
        (0..count)
            .map(|i| {
                let rot = Rotation3::from_axis_angle(&axis, 2.0 * PI * i as f64 / count as f64);
                SpherePoint::from_unit((rot * start.vec()).normalize())
            })
            .collect()
    }
}

/// Circle enclosing `area`, centered at `center` (north pole by default).
pub fn circle_for_area(area: f64, center: Option<SpherePoint>) -> Result<CircleSpec, GeomError> {
    if !(area > 0.0 && area < FOUR_PI) {
        return Err(GeomError::Domain {
            what: "area",
            value: area,
            domain: "(0, 4π)",
        });
    }
    // r = acos(1 - A/2π), written through sin(r/2) to stay accurate for small caps.
    let radius = 2.0 * (area / FOUR_PI).sqrt().asin();
    let center = center.unwrap_or(SpherePoint::from_unit(Vec3::z()));
    CircleSpec::new(center, radius)
}

/// Constant-curvature arc from `start` to `end`, running counterclockwise
/// around `center`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Arc {
    start: SpherePoint,
    end: SpherePoint,
    kappa: f64,
    minor: bool,
    center: SpherePoint,
    radius: f64,
    sweep: f64,
}

/// Builds the arc of signed curvature `kappa` from `p` to `q`.
///
/// Two arcs of the same signed curvature join `p` and `q`; `minor` picks the
/// one sweeping less than half of its circle.
pub fn arc_between(p: SpherePoint, q: SpherePoint, kappa: f64, minor: bool) -> Result<Arc, GeomError> {
    if !kappa.is_finite() {
        return Err(GeomError::NonFinite);
    }
    let distance = spherical_distance(&p, &q);
    if distance < 1e-15 {
        return Err(GeomError::DegenerateArc("start and end coincide"));
    }
    let sum = p.vec() + q.vec();
    let cross = p.vec().cross(q.vec());
    if sum.norm() < 1e-12 || cross.norm() < 1e-15 {
        return Err(if kappa == 0.0 {
            GeomError::AmbiguousGeodesic
        } else {
            GeomError::NoSuchCircle { kappa, distance }
        });
    }
    let radius = 1.0_f64.atan2(kappa);
    let half_chord_cos = 0.5 * sum.norm();
    let mut cos_beta = radius.cos() / half_chord_cos;
    if cos_beta.abs() > 1.0 + 1e-12 {
        return Err(GeomError::NoSuchCircle { kappa, distance });
    }
    cos_beta = cos_beta.clamp(-1.0, 1.0);
    let sin_beta = (1.0 - cos_beta * cos_beta).sqrt();
    let mid = sum.normalize();
    let pole = cross.normalize();
    let side = if minor { 1.0 } else { -1.0 };
    let center = SpherePoint::from_vec(cos_beta * mid + side * sin_beta * pole)?;
    Ok(Arc::assemble(p, q, kappa, radius, center))
}

impl Arc {
    /// Arc from `p` to `q` counterclockwise around an explicit center. This is
    /// the only way to describe a half great circle, whose endpoints alone do
    /// not fix the arc.
    pub fn from_center(p: SpherePoint, q: SpherePoint, center: SpherePoint) -> Result<Arc, GeomError> {
        if spherical_distance(&p, &q) < 1e-15 {
            return Err(GeomError::DegenerateArc("start and end coincide"));
        }
        let rp = spherical_distance(&center, &p);
        let rq = spherical_distance(&center, &q);
        if (rp - rq).abs() > CLOSURE_TOL {
            return Err(GeomError::NoSuchCircle {
                kappa: rp.cos() / rp.sin(),
                distance: spherical_distance(&p, &q),
            });
        }
        let radius = 0.5 * (rp + rq);
        if !(radius > 0.0 && radius < PI) {
            return Err(GeomError::DegenerateArc("center lies on the arc"));
        }
        // cos(π/2) is not zero in floating point; a center a quarter turn away is a great circle
        let kappa = if (radius - FRAC_PI_2).abs() < 4.0 * f64::EPSILON {
            0.0
        } else {
            radius.cos() / radius.sin()
        };
        Ok(Arc::assemble(p, q, kappa, radius, center))
    }

    fn assemble(start: SpherePoint, end: SpherePoint, kappa: f64, radius: f64, center: SpherePoint) -> Arc {
        let c = center.vec();
        let u = start.vec() - start.vec().dot(c) * c;
        let v = end.vec() - end.vec().dot(c) * c;
        let mut sweep = c.dot(&u.cross(&v)).atan2(u.dot(&v));
        if sweep <= 0.0 {
            sweep += 2.0 * PI;
        }
        Arc {
            start,
            end,
            kappa,
            minor: sweep <= PI,
            center,
            radius,
            sweep,
        }
    }

    pub fn start(&self) -> SpherePoint {
        self.start
    }

    pub fn end(&self) -> SpherePoint {
        self.end
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    pub fn is_minor(&self) -> bool {
        self.minor
    }

    pub fn center(&self) -> SpherePoint {
        self.center
    }

    /// Spherical radius of the supporting circle, measured from [`Arc::center`].
    pub fn radius(&self) -> f64 {
        self.radius
    }

    /// Angle swept around the center, in `(0, 2π]`.
    pub fn sweep(&self) -> f64 {
        self.sweep
    }

    pub fn length(&self) -> f64 {
        self.radius.sin() * self.sweep
    }

    pub fn start_tangent(&self) -> Vec3 {
        self.center.vec().cross(self.start.vec()).normalize()
    }

    pub fn end_tangent(&self) -> Vec3 {
        self.center.vec().cross(self.end.vec()).normalize()
    }

    /// Point at fraction `t ∈ [0, 1]` of the sweep.
    pub fn point_at(&self, t: f64) -> SpherePoint {
        if t <= 0.0 {
            return self.start;
        }
        if t >= 1.0 {
            return self.end;
        }
        let axis = Unit::new_unchecked(*self.center.vec());
        let rot = Rotation3::from_axis_angle(&axis, t * self.sweep);
        SpherePoint::from_unit((rot * self.start.vec()).normalize())
    }

    /// `count >= 2` points from start to end, equally spaced in arc length.
    pub fn sample(&self, count: usize) -> Vec<SpherePoint> {
        assert!(count >= 2, "an arc needs at least its two endpoints");
        (0..count)
            .map(|i| self.point_at(i as f64 / (count - 1) as f64))
            .collect()
    }

    /// The same point set traversed from `end` to `start`.
    pub fn reversed(&self) -> Arc {
        Arc {
            start: self.end,
            end: self.start,
            kappa: -self.kappa,
            minor: self.minor,
            center: self.center.antipode(),
            radius: PI - self.radius,
            sweep: self.sweep,
        }
    }

    pub fn rotated(&self, rot: &Rotation3<f64>) -> Arc {
        Arc {
            start: self.start.rotated(rot),
            end: self.end.rotated(rot),
            center: self.center.rotated(rot),
            ..*self
        }
    }
}

/// Signed turning angle from `incoming` to `outgoing` at their shared
/// vertex, positive for a left turn.
pub fn exterior_angle(incoming: &Arc, outgoing: &Arc) -> Result<f64, GeomError> {
    let gap = spherical_distance(&incoming.end, &outgoing.start);
    if gap > CLOSURE_TOL {
        return Err(GeomError::VertexMismatch { gap });
    }
    let v = outgoing.start.vec();
    let t_in = incoming.end_tangent();
    let t_out = outgoing.start_tangent();
    let angle = v.dot(&t_in.cross(&t_out)).atan2(t_in.dot(&t_out));
    if angle.abs() > PI - 1e-12 {
        return Err(GeomError::Cusp);
    }
    Ok(angle)
}

/// A closed chain of arcs with its region on the left.
#[derive(Debug, Clone, PartialEq)]
pub struct PolygonBoundary {
    arcs: Vec<Arc>,
    exterior_angles: Vec<f64>,
}

impl PolygonBoundary {
    pub fn new(arcs: Vec<Arc>) -> Result<Self, GeomError> {
        if arcs.is_empty() {
            return Err(GeomError::DegenerateArc("empty boundary"));
        }
        let n = arcs.len();
        let mut exterior_angles = Vec::with_capacity(n);
        for i in 0..n {
            let next = &arcs[(i + 1) % n];
            let gap = spherical_distance(&arcs[i].end, &next.start);
            if gap > CLOSURE_TOL {
                return Err(GeomError::NotClosed { gap });
            }
            exterior_angles.push(exterior_angle(&arcs[i], next)?);
        }
        Ok(Self {
            arcs,
            exterior_angles,
        })
    }

    /// Geodesic polygon through `vertices` in order, using minor arcs.
    pub fn geodesic(vertices: &[SpherePoint]) -> Result<Self, GeomError> {
        let n = vertices.len();
        let arcs = (0..n)
            .map(|i| arc_between(vertices[i], vertices[(i + 1) % n], 0.0, true))
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(arcs)
    }

    pub fn arcs(&self) -> &[Arc] {
        &self.arcs
    }

    /// Exterior angle at the end of each arc.
    pub fn exterior_angles(&self) -> &[f64] {
        &self.exterior_angles
    }

    pub fn perimeter(&self) -> f64 {
        self.arcs.iter().map(Arc::length).sum()
    }

    /// Boundary of the complementary region.
    pub fn reversed(&self) -> Self {
        let arcs: Vec<Arc> = self.arcs.iter().rev().map(Arc::reversed).collect();
        let n = self.exterior_angles.len();
        // The corner after reversed arc i sits before original arc n-1-i.
        let exterior_angles = (0..n)
            .map(|i| -self.exterior_angles[(2 * n - 2 - i) % n])
            .collect();
        Self {
            arcs,
            exterior_angles,
        }
    }
}

/// Area of the region on the left of `boundary`, by Gauss-Bonnet.
pub fn polygon_area(boundary: &PolygonBoundary) -> f64 {
    let turning: f64 = boundary
        .arcs
        .iter()
        .map(|a| a.kappa * a.length())
        .sum::<f64>()
        + boundary.exterior_angles.iter().sum::<f64>();
    2.0 * PI - turning
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn pt(x: f64, y: f64, z: f64) -> SpherePoint {
        SpherePoint::new(x, y, z).unwrap()
    }

    fn random_point(a: f64, b: f64) -> SpherePoint {
        // a ∈ [-1, 1] is z, b ∈ [0, 2π) is longitude
        let r = (1.0 - a * a).max(0.0).sqrt();
        pt(r * b.cos(), r * b.sin(), a)
    }

    #[test]
    fn sphere_point_normalizes_and_rejects_zero() {
        let p = pt(3.0, 0.0, 4.0);
        assert_abs_diff_eq!(p.vec().norm(), 1.0, epsilon = CONSTRUCTION_TOL);
        assert_eq!(SpherePoint::new(0.0, 0.0, 0.0), Err(GeomError::ZeroVector));
        assert_eq!(SpherePoint::new(f64::NAN, 0.0, 1.0), Err(GeomError::NonFinite));
    }

    #[test]
    fn distance_examples() {
        let p = pt(0.3, -0.2, 0.9);
        assert_abs_diff_eq!(spherical_distance(&p, &p.antipode()), PI, epsilon = 1e-15);
        assert_eq!(spherical_distance(&p, &p), 0.0);
        let a = pt(1.0, 1.0, 1.0);
        let b = pt(1.0, 1.0, -1.0);
        assert_abs_diff_eq!(spherical_distance(&a, &b), 1.230_959_417_340_774_7, epsilon = 1e-14);
    }

    #[test]
    fn distance_keeps_accuracy_near_zero_and_pi() {
        let eps: f64 = 1e-9;
        let p = pt(1.0, 0.0, 0.0);
        let q = pt(eps.cos(), eps.sin(), 0.0);
        assert!((spherical_distance(&p, &q) - eps).abs() < 1e-22);
        let r = pt(-(eps.cos()), eps.sin(), 0.0);
        assert!((spherical_distance(&p, &r) - (PI - eps)).abs() < 1e-15);
    }

    #[test]
    fn profile_examples() {
        assert_abs_diff_eq!(isoperimetric_profile(2.0 * PI).unwrap(), 2.0 * PI, epsilon = 1e-14);
        assert_abs_diff_eq!(
            isoperimetric_profile(2.0 * PI / 25.0).unwrap(),
            14.0 * PI / 25.0,
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(
            isoperimetric_profile(23.0 * PI / 25.0).unwrap(),
            PI / 25.0 * 1771f64.sqrt(),
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(isoperimetric_profile(23.0 * PI / 25.0).unwrap(), 5.28834, epsilon = 1e-5);
        assert_eq!(isoperimetric_profile(0.0).unwrap(), 0.0);
        assert_eq!(isoperimetric_profile(FOUR_PI).unwrap(), 0.0);
        assert!(isoperimetric_profile(-1e-3).is_err());
        assert!(isoperimetric_profile(13.0).is_err());
        assert!(isoperimetric_profile(f64::NAN).is_err());
    }

    #[test]
    fn split_profile_examples() {
        for k in [0.5, 1.0, PI, 2.0 * PI] {
            assert_abs_diff_eq!(
                split_profile(k, 0.0).unwrap(),
                isoperimetric_profile(k).unwrap(),
                epsilon = 1e-14
            );
        }
        // f_π(π/2) = 2 sqrt((π/2)(7π/2)) = π sqrt(7)
        assert_abs_diff_eq!(split_profile(PI, PI / 2.0).unwrap(), PI * 7f64.sqrt(), epsilon = 1e-13);
        assert_abs_diff_eq!(split_profile(PI, PI / 2.0).unwrap(), 8.31187, epsilon = 1e-5);
        assert!(split_profile(0.0, 0.0).is_err());
        assert!(split_profile(7.0, 1.0).is_err());
        assert!(split_profile(1.0, 1.5).is_err());
        assert!(split_profile(1.0, -0.1).is_err());
    }

    #[test]
    fn circle_for_area_examples() {
        let eq = circle_for_area(2.0 * PI, None).unwrap();
        assert_abs_diff_eq!(eq.radius, PI / 2.0, epsilon = 1e-15);
        assert_abs_diff_eq!(eq.curvature(), 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(eq.perimeter(), 2.0 * PI, epsilon = 1e-14);

        let c = circle_for_area(PI, None).unwrap();
        assert_abs_diff_eq!(c.radius, PI / 3.0, epsilon = 1e-15);
        assert_abs_diff_eq!(c.perimeter(), PI * 3f64.sqrt(), epsilon = 1e-14);
        assert_abs_diff_eq!(c.perimeter(), isoperimetric_profile(PI).unwrap(), epsilon = 1e-14);
        assert_abs_diff_eq!(c.curvature(), 1.0 / 3f64.sqrt(), epsilon = 1e-15);

        let small = circle_for_area(2.0 * PI * (1.0 - 0.1f64.cos()), None).unwrap();
        assert_abs_diff_eq!(small.radius, 0.1, epsilon = 1e-14);

        assert!(circle_for_area(0.0, None).is_err());
        assert!(circle_for_area(FOUR_PI, None).is_err());
    }

    #[test]
    fn geodesic_arc_length_is_distance() {
        let p = pt(0.2, 0.5, 0.8);
        let q = pt(-0.7, 0.1, 0.3);
        let a = arc_between(p, q, 0.0, true).unwrap();
        assert_abs_diff_eq!(a.length(), spherical_distance(&p, &q), epsilon = 1e-14);
        assert!(a.is_minor());
        let major = arc_between(p, q, 0.0, false).unwrap();
        assert_abs_diff_eq!(major.length(), 2.0 * PI - spherical_distance(&p, &q), epsilon = 1e-13);
    }

    #[test]
    fn arc_errors() {
        let p = pt(1.0, 0.0, 0.0);
        assert_eq!(arc_between(p, p.antipode(), 0.0, true), Err(GeomError::AmbiguousGeodesic));
        assert!(matches!(
            arc_between(p, p.antipode(), 0.5, true),
            Err(GeomError::NoSuchCircle { .. })
        ));
        // circle of curvature 10 has radius ~0.0997, too small for a quarter-turn chord
        assert!(matches!(
            arc_between(p, pt(0.0, 1.0, 0.0), 10.0, true),
            Err(GeomError::NoSuchCircle { .. })
        ));
        assert!(matches!(arc_between(p, p, 0.0, true), Err(GeomError::DegenerateArc(_))));
    }

    /// Finds the circle center by bisection along the perpendicular bisector
    /// and measures the arc with a dense geodesic polyline.
    fn brute_force_arc_length(p: SpherePoint, q: SpherePoint, radius: f64) -> f64 {
        let mid = (p.vec() + q.vec()).normalize();
        let pole = p.vec().cross(q.vec()).normalize();
        let center_at = |beta: f64| beta.cos() * mid + beta.sin() * pole;
        let dist = |c: Vec3| c.dot(p.vec()).clamp(-1.0, 1.0).acos();
        // dist is increasing in |beta| on [0, π/2]; bisect for the left center
        let (mut lo, mut hi) = (0.0f64, PI / 2.0);
        if (dist(center_at(lo)) - radius).abs() < 1e-15 {
            hi = lo;
        }
        for _ in 0..200 {
            let m = 0.5 * (lo + hi);
            if dist(center_at(m)) < radius {
                lo = m;
            } else {
                hi = m;
            }
        }
        let c = center_at(0.5 * (lo + hi));
        let u = p.vec() - p.vec().dot(&c) * c;
        let v = q.vec() - q.vec().dot(&c) * c;
        let sweep = {
            let s = c.dot(&u.cross(&v)).atan2(u.dot(&v));
            if s <= 0.0 {
                s + 2.0 * PI
            } else {
                s
            }
        };
        let n = 200_000;
        let axis = Unit::new_normalize(c);
        let mut prev = *p.vec();
        let mut total = 0.0;
        for i in 1..=n {
            let rot = Rotation3::from_axis_angle(&axis, sweep * i as f64 / n as f64);
            let cur = rot * p.vec();
            total += prev.cross(&cur).norm().atan2(prev.dot(&cur));
            prev = cur;
        }
        total
    }

    #[test]
    fn curved_arc_matches_brute_force() {
        let p = pt(1.0, 0.0, 0.0);
        let q = pt(0.0, 1.0, 0.0);
        let arc = arc_between(p, q, 1.0, true).unwrap();
        assert_abs_diff_eq!(arc.radius(), PI / 4.0, epsilon = 1e-15);
        let oracle = brute_force_arc_length(p, q, PI / 4.0);
        assert!((arc.length() - oracle).abs() < 1e-9, "{} vs {}", arc.length(), oracle);
    }

    #[test]
    fn arc_points_lie_on_supporting_circle() {
        let p = pt(0.1, 0.9, 0.2);
        let q = pt(0.6, 0.4, -0.3);
        for (kappa, minor) in [(0.7, true), (0.7, false), (-1.3, true), (-0.2, false)] {
            let arc = arc_between(p, q, kappa, minor).unwrap();
            assert_abs_diff_eq!(spherical_distance(&arc.center(), &p), arc.radius(), epsilon = 1e-12);
            assert_abs_diff_eq!(spherical_distance(&arc.center(), &q), arc.radius(), epsilon = 1e-12);
            assert_abs_diff_eq!(arc.point_at(1.0).vec(), q.vec(), epsilon = 1e-15);
            let mid = arc.point_at(0.5);
            assert_abs_diff_eq!(spherical_distance(&arc.center(), &mid), arc.radius(), epsilon = 1e-12);
            assert_eq!(arc.is_minor(), minor);
            // a left-turning arc stays right of the chord, whichever of the two it is
            let side = p.vec().cross(q.vec()).dot(mid.vec());
            assert_eq!(side < 0.0, kappa > 0.0, "kappa {kappa} minor {minor}");
        }
    }

    #[test]
    fn half_great_circle_from_center() {
        let n = pt(0.0, 0.0, 1.0);
        let s = n.antipode();
        let arc = Arc::from_center(n, s, pt(0.0, 1.0, 0.0)).unwrap();
        assert_abs_diff_eq!(arc.length(), PI, epsilon = 1e-14);
        assert_abs_diff_eq!(arc.kappa(), 0.0, epsilon = 1e-15);
        // rotating N about +y passes through +x
        assert_abs_diff_eq!(arc.point_at(0.5).vec(), &Vec3::x(), epsilon = 1e-15);
    }

    #[test]
    fn exterior_angle_examples() {
        let c = circle_for_area(1.3, Some(pt(0.2, 0.3, 0.9))).unwrap();
        let pts = c.sample(3, None);
        let a = Arc::from_center(pts[0], pts[1], c.center).unwrap();
        let b = Arc::from_center(pts[1], pts[2], c.center).unwrap();
        assert_abs_diff_eq!(exterior_angle(&a, &b).unwrap(), 0.0, epsilon = 1e-12);

        let x = pt(1.0, 0.0, 0.0);
        let y = pt(0.0, 1.0, 0.0);
        let z = pt(0.0, 0.0, 1.0);
        let xy = arc_between(x, y, 0.0, true).unwrap();
        let yz = arc_between(y, z, 0.0, true).unwrap();
        assert_abs_diff_eq!(exterior_angle(&xy, &yz).unwrap(), PI / 2.0, epsilon = 1e-14);

        // two edges of the projected tetrahedron meet at 120 degrees
        let v = [
            pt(0.0, 0.0, 1.0),
            pt(8f64.sqrt() / 3.0, 0.0, -1.0 / 3.0),
            pt(-(2f64.sqrt()) / 3.0, 6f64.sqrt() / 3.0, -1.0 / 3.0),
        ];
        let e0 = arc_between(v[0], v[1], 0.0, true).unwrap();
        let e1 = arc_between(v[1], v[2], 0.0, true).unwrap();
        assert_abs_diff_eq!(exterior_angle(&e0, &e1).unwrap(), PI / 3.0, epsilon = 1e-14);

        assert!(matches!(exterior_angle(&e1, &e1), Err(GeomError::VertexMismatch { .. })));
    }

    #[test]
    fn polygon_area_examples() {
        let octant = PolygonBoundary::geodesic(&[pt(1.0, 0.0, 0.0), pt(0.0, 1.0, 0.0), pt(0.0, 0.0, 1.0)]).unwrap();
        assert_abs_diff_eq!(polygon_area(&octant), PI / 2.0, epsilon = 1e-14);

        let face = PolygonBoundary::geodesic(&[
            pt(0.0, 0.0, 1.0),
            pt(8f64.sqrt() / 3.0, 0.0, -1.0 / 3.0),
            pt(-(2f64.sqrt()) / 3.0, 6f64.sqrt() / 3.0, -1.0 / 3.0),
        ])
        .unwrap();
        for a in face.exterior_angles() {
            assert_abs_diff_eq!(*a, PI / 3.0, epsilon = 1e-14);
        }
        assert_abs_diff_eq!(polygon_area(&face), PI, epsilon = 1e-13);

        let r = 0.8;
        let circle = CircleSpec::new(pt(0.3, -0.4, 0.5), r).unwrap();
        assert_abs_diff_eq!(circle.gauss_bonnet_area(), 2.0 * PI * (1.0 - r.cos()), epsilon = 1e-14);
        let halves = circle.sample(2, None);
        let ring = PolygonBoundary::new(vec![
            Arc::from_center(halves[0], halves[1], circle.center).unwrap(),
            Arc::from_center(halves[1], halves[0], circle.center).unwrap(),
        ])
        .unwrap();
        assert_abs_diff_eq!(polygon_area(&ring), 2.0 * PI * (1.0 - r.cos()), epsilon = 1e-13);
    }

    #[test]
    fn open_boundary_is_rejected() {
        let arcs = vec![
            arc_between(pt(1.0, 0.0, 0.0), pt(0.0, 1.0, 0.0), 0.0, true).unwrap(),
            arc_between(pt(0.0, 1.0, 0.0), pt(0.0, 0.0, 1.0), 0.0, true).unwrap(),
        ];
        assert!(matches!(PolygonBoundary::new(arcs), Err(GeomError::NotClosed { .. })));
    }

    proptest! {
        #[test]
        fn circle_attains_profile(r in 1e-3..(PI - 1e-3)) {
            let c = CircleSpec::new(SpherePoint::from_unit(Vec3::z()), r).unwrap();
            let b = isoperimetric_profile(c.enclosed_area()).unwrap();
            prop_assert!((c.perimeter() - b).abs() < 1e-10);
            prop_assert!((c.perimeter().powi(2) - c.enclosed_area() * (FOUR_PI - c.enclosed_area())).abs() < 1e-10);
            prop_assert!((c.gauss_bonnet_area() - c.enclosed_area()).abs() < 1e-10);
        }

        #[test]
        fn circle_for_area_inverts(area in 1e-6..(FOUR_PI - 1e-6)) {
            let c = circle_for_area(area, None).unwrap();
            prop_assert!((c.enclosed_area() - area).abs() < 1e-10);
        }

        #[test]
        fn split_profile_symmetric(k in 1e-3..(2.0 * PI), s in 0.0..1.0f64) {
            let t = s * k;
            let a = split_profile(k, t).unwrap();
            let b = split_profile(k, k - t).unwrap();
            prop_assert!((a - b).abs() < 1e-12);
        }

        #[test]
        fn split_profile_increases_to_midpoint(k in 1e-2..(2.0 * PI), s1 in 0.0..0.5f64, s2 in 0.0..0.5f64) {
            let (lo, hi) = if s1 < s2 { (s1, s2) } else { (s2, s1) };
            prop_assume!(hi - lo > 1e-6);
            prop_assert!(split_profile(k, lo * k).unwrap() < split_profile(k, hi * k).unwrap());
        }

        #[test]
        fn geodesic_triangle_beats_profile(
            a in (-1.0..1.0f64, 0.0..(2.0 * PI)),
            b in (-1.0..1.0f64, 0.0..(2.0 * PI)),
            c in (-1.0..1.0f64, 0.0..(2.0 * PI)),
        ) {
            let v = [random_point(a.0, a.1), random_point(b.0, b.1), random_point(c.0, c.1)];
            let tri = PolygonBoundary::geodesic(&v);
            prop_assume!(tri.is_ok());
            let tri = tri.unwrap();
            let area = polygon_area(&tri);
            prop_assume!(area > 1e-6 && area < FOUR_PI - 1e-6);
            prop_assert!(tri.perimeter() > isoperimetric_profile(area).unwrap());
            let complement = polygon_area(&tri.reversed());
            prop_assert!((area + complement - FOUR_PI).abs() < 1e-9);
        }

        #[test]
        fn curved_polygon_complement(kappas in proptest::collection::vec(-0.4..0.4f64, 4)) {
            let v = [pt(1.0, 0.1, 0.2), pt(0.1, 1.0, 0.1), pt(-0.3, 0.4, 1.0), pt(0.6, -0.2, 0.8)];
            let arcs: Vec<Arc> = (0..4).map(|i| arc_between(v[i], v[(i + 1) % 4], kappas[i], true).unwrap()).collect();
            let poly = PolygonBoundary::new(arcs).unwrap();
            let sum = polygon_area(&poly) + polygon_area(&poly.reversed());
            prop_assert!((sum - FOUR_PI).abs() < 1e-9);
        }
    }
}
