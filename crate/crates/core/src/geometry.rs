//! Planar vectors, contact patches, and the convex-hull machinery used by the
//! cone tests.
//!
//! A [`Patch`] is either a polygon (possibly nonconvex, possibly degenerate to
//! a segment or a single point) or an ellipse. Every patch carries its convex
//! hull, computed once at construction, and all hull queries ([`Patch::support`],
//! [`Patch::contains`]) act on that hull. Queries that care about the original
//! region, such as placing force atoms, use [`Patch::covers`].
//!
//! Tolerances passed to geometric predicates are relative: they are multiplied
//! by [`Patch::length_scale`] (the hull diameter, or 1 for a point patch).

use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;
use core::ops::{Add, AddAssign, Div, Mul, Neg, Sub};

/// Point or free vector of the contact plane.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Vec2 {
    pub x: f64,
    pub y: f64,
}

impl Vec2 {
    pub const ZERO: Vec2 = Vec2 { x: 0.0, y: 0.0 };

    #[inline]
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    /// Checked constructor rejecting NaN and infinities.
    pub fn try_new(x: f64, y: f64) -> Result<Self, GeometryError> {
        let v = Self { x, y };
        if v.is_finite() {
            Ok(v)
        } else {
            Err(GeometryError::NonFinite)
        }
    }

    #[inline]
    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    #[inline]
    pub fn dot(self, other: Vec2) -> f64 {
        self.x * other.x + self.y * other.y
    }

    /// z-component of the 3D cross product; positive when `other` is
    /// counterclockwise from `self`.
    #[inline]
    pub fn cross(self, other: Vec2) -> f64 {
        self.x * other.y - self.y * other.x
    }

    #[inline]
    pub fn norm(self) -> f64 {
        libm::hypot(self.x, self.y)
    }

    #[inline]
    pub fn norm_squared(self) -> f64 {
        self.dot(self)
    }

    #[inline]
    pub fn distance(self, other: Vec2) -> f64 {
        (self - other).norm()
    }

    /// Quarter turn clockwise: `[a, b] -> [b, -a]`.
    #[inline]
    pub fn perp(self) -> Vec2 {
        Vec2::new(self.y, -self.x)
    }

    /// Unit vector in the same direction, or `None` for the zero vector.
    pub fn normalized(self) -> Option<Vec2> {
        let n = self.norm();
        (n > 0.0).then(|| self / n)
    }

    /// Counterclockwise rotation by `angle` radians.
    pub fn rotated(self, angle: f64) -> Vec2 {
        let (s, c) = libm::sincos(angle);
        Vec2::new(c * self.x - s * self.y, s * self.x + c * self.y)
    }

    pub fn lerp(self, other: Vec2, t: f64) -> Vec2 {
        self + (other - self) * t
    }
}

/// Free-function form of [`Vec2::perp`].
#[inline]
pub fn perp(v: Vec2) -> Vec2 {
    v.perp()
}

impl Add for Vec2 {
    type Output = Vec2;
    #[inline]
    fn add(self, rhs: Vec2) -> Vec2 {
        Vec2::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl AddAssign for Vec2 {
    #[inline]
    fn add_assign(&mut self, rhs: Vec2) {
        self.x += rhs.x;
        self.y += rhs.y;
    }
}

impl Sub for Vec2 {
    type Output = Vec2;
    #[inline]
    fn sub(self, rhs: Vec2) -> Vec2 {
        Vec2::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl Neg for Vec2 {
    type Output = Vec2;
    #[inline]
    fn neg(self) -> Vec2 {
        Vec2::new(-self.x, -self.y)
    }
}

impl Mul<f64> for Vec2 {
    type Output = Vec2;
    #[inline]
    fn mul(self, s: f64) -> Vec2 {
        Vec2::new(self.x * s, self.y * s)
    }
}

impl Mul<Vec2> for f64 {
    type Output = Vec2;
    #[inline]
    fn mul(self, v: Vec2) -> Vec2 {
        v * self
    }
}

impl Div<f64> for Vec2 {
    type Output = Vec2;
    #[inline]
    fn div(self, s: f64) -> Vec2 {
        Vec2::new(self.x / s, self.y / s)
    }
}

impl From<[f64; 2]> for Vec2 {
    fn from([x, y]: [f64; 2]) -> Self {
        Vec2::new(x, y)
    }
}

impl From<Vec2> for [f64; 2] {
    fn from(v: Vec2) -> Self {
        [v.x, v.y]
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GeometryError {
    NonFinite,
    EmptyPolygon,
    /// Vertex `index` repeats its predecessor (the last vertex is compared
    /// with the first, since polygons are implicitly closed).
    DuplicateVertex {
        index: usize,
    },
    NonPositiveSemiAxis,
}

impl fmt::Display for GeometryError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GeometryError::NonFinite => f.write_str("patch coordinates must be finite"),
            GeometryError::EmptyPolygon => f.write_str("polygon patch needs at least one vertex"),
            GeometryError::DuplicateVertex { index } => {
                write!(f, "polygon vertex {index} duplicates the previous vertex")
            }
            GeometryError::NonPositiveSemiAxis => f.write_str("ellipse semi-axes must be strictly positive"),
        }
    }
}

impl core::error::Error for GeometryError {}

/// Ellipse `{center + R(rotation) * (a cos t, b sin t)}` and its interior.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Ellipse {
    pub center: Vec2,
    pub semi_axes: (f64, f64),
    pub rotation: f64,
}

impl Ellipse {
    fn axes(&self) -> (Vec2, Vec2) {
        let (s, c) = libm::sincos(self.rotation);
        (Vec2::new(c, s), Vec2::new(-s, c))
    }

    /// Coordinates of `p` in the ellipse frame.
    pub fn to_local(&self, p: Vec2) -> Vec2 {
        let (u, v) = self.axes();
        let d = p - self.center;
        Vec2::new(d.dot(u), d.dot(v))
    }

    pub fn to_world(&self, q: Vec2) -> Vec2 {
        let (u, v) = self.axes();
        self.center + u * q.x + v * q.y
    }

    /// Boundary point at eccentric anomaly `t`.
    pub fn boundary_point(&self, t: f64) -> Vec2 {
        let (s, c) = libm::sincos(t);
        self.to_world(Vec2::new(self.semi_axes.0 * c, self.semi_axes.1 * s))
    }

    /// Normalized radial coordinate: 1 on the boundary, < 1 inside.
    pub fn level(&self, p: Vec2) -> f64 {
        let q = self.to_local(p);
        libm::hypot(q.x / self.semi_axes.0, q.y / self.semi_axes.1)
    }

    fn max_semi_axis(&self) -> f64 {
        self.semi_axes.0.max(self.semi_axes.1)
    }

    fn half_extents(&self) -> Vec2 {
        let (s, c) = libm::sincos(self.rotation);
        let (a, b) = self.semi_axes;
        Vec2::new(libm::hypot(a * c, b * s), libm::hypot(a * s, b * c))
    }
}

/// Original patch geometry as supplied by the caller.
#[derive(Clone, Debug, PartialEq)]
pub enum Shape {
    Polygon(Vec<Vec2>),
    Ellipse(Ellipse),
}

/// Convex hull `C(P)`: a counterclockwise vertex list (1 vertex for a point,
/// 2 for a segment), or the ellipse itself.
#[derive(Clone, Debug, PartialEq)]
pub enum Hull {
    Polygon(Vec<Vec2>),
    Ellipse(Ellipse),
}

/// Maximizing face of the hull for a linear functional.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum SupportSet {
    Vertex(Vec2),
    /// Edge of the hull, endpoints in counterclockwise order.
    Segment(Vec2, Vec2),
    /// The whole hull; only for the zero direction.
    FullHull,
}

impl SupportSet {
    /// Euclidean distance from `p` to the set. `FullHull` reports 0; callers
    /// that need the true distance use [`Patch::contains`].
    pub fn distance_to(&self, p: Vec2) -> f64 {
        match *self {
            SupportSet::Vertex(v) => p.distance(v),
            SupportSet::Segment(a, b) => point_segment_distance(p, a, b),
            SupportSet::FullHull => 0.0,
        }
    }
}

/// Contact patch `P` with its cached convex hull.
#[derive(Clone, Debug, PartialEq)]
pub struct Patch {
    shape: Shape,
    hull: Hull,
    diameter: f64,
    radius: f64,
}

impl Patch {
    /// Polygon patch from an ordered vertex list. One vertex gives a point
    /// patch and two give a segment; nonconvex outlines are kept as given.
    pub fn polygon(vertices: Vec<Vec2>) -> Result<Self, GeometryError> {
        if vertices.is_empty() {
            return Err(GeometryError::EmptyPolygon);
        }
        if vertices.iter().any(|v| !v.is_finite()) {
            return Err(GeometryError::NonFinite);
        }
        let n = vertices.len();
        if n > 1 {
            for i in 0..n {
                let prev = vertices[(i + n - 1) % n];
                if vertices[i] == prev {
                    return Err(GeometryError::DuplicateVertex { index: i });
                }
            }
        }
        let hull = monotone_chain(&vertices);
        let diameter = polygon_diameter(&hull);
        let radius = hull.iter().map(|v| v.norm()).fold(0.0, f64::max);
        Ok(Self {
            shape: Shape::Polygon(vertices),
            hull: Hull::Polygon(hull),
            diameter,
            radius,
        })
    }

    pub fn point(p: Vec2) -> Result<Self, GeometryError> {
        Self::polygon(alloc::vec![p])
    }

    pub fn segment(a: Vec2, b: Vec2) -> Result<Self, GeometryError> {
        Self::polygon(alloc::vec![a, b])
    }

    /// Axis-aligned rectangle `[min.x, max.x] x [min.y, max.y]`.
    pub fn rectangle(min: Vec2, max: Vec2) -> Result<Self, GeometryError> {
        Self::polygon(alloc::vec![min, Vec2::new(max.x, min.y), max, Vec2::new(min.x, max.y),])
    }

    pub fn ellipse(center: Vec2, semi_axes: (f64, f64), rotation: f64) -> Result<Self, GeometryError> {
        if !center.is_finite() || !semi_axes.0.is_finite() || !semi_axes.1.is_finite() || !rotation.is_finite() {
            return Err(GeometryError::NonFinite);
        }
        if semi_axes.0 <= 0.0 || semi_axes.1 <= 0.0 {
            return Err(GeometryError::NonPositiveSemiAxis);
        }
        let e = Ellipse {
            center,
            semi_axes,
            rotation,
        };
        Ok(Self {
            shape: Shape::Ellipse(e),
            hull: Hull::Ellipse(e),
            diameter: 2.0 * e.max_semi_axis(),
            radius: center.norm() + e.max_semi_axis(),
        })
    }

    pub fn shape(&self) -> &Shape {
        &self.shape
    }

    pub fn hull(&self) -> &Hull {
        &self.hull
    }

    /// Hull vertices for polygon patches; empty for ellipses.
    pub fn hull_vertices(&self) -> &[Vec2] {
        match &self.hull {
            Hull::Polygon(v) => v,
            Hull::Ellipse(_) => &[],
        }
    }

    /// Max pairwise hull-vertex distance; `2 * max semi-axis` for ellipses.
    pub fn diameter(&self) -> f64 {
        self.diameter
    }

    /// Upper bound on `|x|` over the hull.
    pub fn radius(&self) -> f64 {
        self.radius
    }

    /// Length that relative tolerances are multiplied by.
    pub fn length_scale(&self) -> f64 {
        if self.diameter > 0.0 {
            self.diameter
        } else {
            1.0
        }
    }

    /// Combined magnitude `max(1, diameter, radius)` used to scale tolerances
    /// on quantities affine in the patch coordinates.
    pub fn magnitude(&self) -> f64 {
        1f64.max(self.diameter).max(self.radius)
    }

    /// Image of the patch under [`perp`]. The hull is recomputed from the
    /// rotated outline, so it can be compared against the rotated hull.
    pub fn perp(&self) -> Patch {
        match &self.shape {
            Shape::Polygon(v) => {
                Patch::polygon(v.iter().map(|p| p.perp()).collect()).expect("rotation keeps a valid polygon valid")
            }
            Shape::Ellipse(e) => {
                Patch::ellipse(e.center.perp(), e.semi_axes, e.rotation - core::f64::consts::FRAC_PI_2)
                    .expect("rotation keeps a valid ellipse valid")
            }
        }
    }

    /// Axis-aligned bounding box `(min, max)`.
    pub fn bounding_box(&self) -> (Vec2, Vec2) {
        match &self.hull {
            Hull::Polygon(v) => {
                let mut lo = v[0];
                let mut hi = v[0];
                for p in &v[1..] {
                    lo = Vec2::new(lo.x.min(p.x), lo.y.min(p.y));
                    hi = Vec2::new(hi.x.max(p.x), hi.y.max(p.y));
                }
                (lo, hi)
            }
            Hull::Ellipse(e) => {
                let h = e.half_extents();
                (e.center - h, e.center + h)
            }
        }
    }

    /// Maximum of `<x, d>` over the hull together with the maximizing face.
    pub fn support(&self, d: Vec2) -> (f64, SupportSet) {
        if d == Vec2::ZERO {
            return (0.0, SupportSet::FullHull);
        }
        match &self.hull {
            Hull::Ellipse(e) => {
                let (u, v) = e.axes();
                let (a, b) = e.semi_axes;
                let local = Vec2::new(d.dot(u), d.dot(v));
                let s = libm::hypot(a * local.x, b * local.y);
                let q = Vec2::new(a * a * local.x / s, b * b * local.y / s);
                (e.center.dot(d) + s, SupportSet::Vertex(e.to_world(q)))
            }
            Hull::Polygon(h) => polygon_support(h, d),
        }
    }

    /// `p` in the hull inflated by `tol * length_scale()`.
    pub fn contains(&self, p: Vec2, tol: f64) -> bool {
        let margin = tol * self.length_scale();
        match &self.hull {
            Hull::Ellipse(e) => e.level(p) <= 1.0 + margin / e.max_semi_axis(),
            Hull::Polygon(h) => match h.len() {
                1 => p.distance(h[0]) <= margin,
                2 => point_segment_distance(p, h[0], h[1]) <= margin,
                n => (0..n).all(|i| {
                    let a = h[i];
                    let b = h[(i + 1) % n];
                    let e = b - a;
                    e.cross(p - a) >= -margin * e.norm()
                }),
            },
        }
    }

    /// `p` in the original region `P` (not its hull), within
    /// `tol * length_scale()` of it.
    pub fn covers(&self, p: Vec2, tol: f64) -> bool {
        let margin = tol * self.length_scale();
        match &self.shape {
            Shape::Ellipse(_) => self.contains(p, tol),
            Shape::Polygon(v) => {
                if v.len() < 3 {
                    return self.contains(p, tol);
                }
                if self.boundary_distance(p) <= margin {
                    return true;
                }
                winding_number(v, p) != 0
            }
        }
    }

    /// Distance from `p` to the outline of the original region.
    pub fn boundary_distance(&self, p: Vec2) -> f64 {
        match &self.shape {
            Shape::Polygon(v) => edges(v)
                .map(|(a, b)| point_segment_distance(p, a, b))
                .fold(f64::INFINITY, f64::min),
            Shape::Ellipse(e) => ellipse_boundary_distance(e, p),
        }
    }

    /// Distance from `p` to the boundary of the hull.
    pub fn hull_boundary_distance(&self, p: Vec2) -> f64 {
        match &self.hull {
            Hull::Polygon(h) => edges(h)
                .map(|(a, b)| point_segment_distance(p, a, b))
                .fold(f64::INFINITY, f64::min),
            Hull::Ellipse(e) => ellipse_boundary_distance(e, p),
        }
    }
}

/// Counterclockwise hull of `patch`. Ellipses return their analytic hull.
pub fn convex_hull(patch: &Patch) -> &Hull {
    patch.hull()
}

/// Free-function form of [`Patch::support`].
pub fn support(patch: &Patch, d: Vec2) -> (f64, SupportSet) {
    patch.support(d)
}

/// Free-function form of [`Patch::contains`].
pub fn contains(patch: &Patch, p: Vec2, tol: f64) -> bool {
    patch.contains(p, tol)
}

/// Closed edge loop of a vertex list; a 2-vertex list yields the segment
/// twice, a single vertex yields one degenerate edge.
pub(crate) fn edges(v: &[Vec2]) -> impl Iterator<Item = (Vec2, Vec2)> + '_ {
    let n = v.len();
    (0..n).map(move |i| (v[i], v[(i + 1) % n]))
}

pub fn point_segment_distance(p: Vec2, a: Vec2, b: Vec2) -> f64 {
    let e = b - a;
    let len2 = e.norm_squared();
    if len2 == 0.0 {
        return p.distance(a);
    }
    let t = ((p - a).dot(e) / len2).clamp(0.0, 1.0);
    p.distance(a + e * t)
}

fn orient(a: Vec2, b: Vec2, c: Vec2) -> f64 {
    robust::orient2d(
        robust::Coord { x: a.x, y: a.y },
        robust::Coord { x: b.x, y: b.y },
        robust::Coord { x: c.x, y: c.y },
    )
}

fn lex(a: &Vec2, b: &Vec2) -> Ordering {
    a.x.total_cmp(&b.x).then(a.y.total_cmp(&b.y))
}

/// Andrew's monotone chain with exact orientation signs. Collinear points
/// are dropped, so a collinear input collapses to its two extreme points.
fn monotone_chain(points: &[Vec2]) -> Vec<Vec2> {
    let mut pts: Vec<Vec2> = points.to_vec();
    pts.sort_by(lex);
    pts.dedup();
    if pts.len() <= 2 {
        return pts;
    }
    let mut hull: Vec<Vec2> = Vec::with_capacity(2 * pts.len());
    for &p in &pts {
        while hull.len() >= 2 && orient(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0.0 {
            hull.pop();
        }
        hull.push(p);
    }
    let lower_len = hull.len() + 1;
    for &p in pts.iter().rev().skip(1) {
        while hull.len() >= lower_len && orient(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0.0 {
            hull.pop();
        }
        hull.push(p);
    }
    hull.pop();
    hull
}

fn polygon_diameter(h: &[Vec2]) -> f64 {
    let mut d: f64 = 0.0;
    for (i, a) in h.iter().enumerate() {
        for b in &h[i + 1..] {
            d = d.max(a.distance(*b));
        }
    }
    d
}

fn polygon_support(h: &[Vec2], d: Vec2) -> (f64, SupportSet) {
    let n = h.len();
    let (best, value) = h
        .iter()
        .enumerate()
        .map(|(i, p)| (i, p.dot(d)))
        .fold((0, f64::NEG_INFINITY), |acc, x| if x.1 > acc.1 { x } else { acc });
    if n == 1 {
        return (value, SupportSet::Vertex(h[0]));
    }
    // Ties at rounding level count as an edge.
    let slack = 64.0 * f64::EPSILON * d.norm() * h.iter().map(|p| p.norm()).fold(1.0, f64::max);
    let ties = |i: usize| h[i].dot(d) >= value - slack;
    let prev = (best + n - 1) % n;
    let next = (best + 1) % n;
    if n == 2 {
        return if ties(next) {
            (value, SupportSet::Segment(h[0], h[1]))
        } else {
            (value, SupportSet::Vertex(h[best]))
        };
    }
    if ties(next) {
        (value, SupportSet::Segment(h[best], h[next]))
    } else if ties(prev) {
        (value, SupportSet::Segment(h[prev], h[best]))
    } else {
        (value, SupportSet::Vertex(h[best]))
    }
}

fn winding_number(v: &[Vec2], p: Vec2) -> i32 {
    let mut wn = 0;
    for (a, b) in edges(v) {
        if a.y <= p.y {
            if b.y > p.y && orient(a, b, p) > 0.0 {
                wn += 1;
            }
        } else if b.y <= p.y && orient(a, b, p) < 0.0 {
            wn -= 1;
        }
    }
    wn
}

/// Distance to an ellipse outline by Newton iteration on the foot-point
/// parameter, started from the radial projection.
fn ellipse_boundary_distance(e: &Ellipse, p: Vec2) -> f64 {
    let q = e.to_local(p);
    let (a, b) = e.semi_axes;
    let mut t = libm::atan2(a * q.y, b * q.x);
    for _ in 0..32 {
        let (s, c) = libm::sincos(t);
        // f(t) = d/dt |x(t) - q|^2 / 2
        let f = (b * b - a * a) * s * c + a * q.x * s - b * q.y * c;
        let df = (b * b - a * a) * (c * c - s * s) + a * q.x * c + b * q.y * s;
        if df.abs() < 1e-300 {
            break;
        }
        let step = f / df;
        t -= step;
        if step.abs() < 1e-15 {
            break;
        }
    }
    let (s, c) = libm::sincos(t);
    let foot = Vec2::new(a * c, b * s);
    // Newton can settle on the far foot point; the radial projection bounds
    // the error in that case.
    let radial = {
        let r = libm::hypot(q.x / a, q.y / b);
        if r > 0.0 {
            (q - q / r).norm()
        } else {
            a.min(b)
        }
    };
    q.distance(foot).min(radial)
}
