//! Pitch coordinates, goal geometry, and the two quantities every evaluation
//! in this crate is built on: the perpendicular distance to a goal line and
//! the visual angle subtended by a pair of goalposts.
//!
//! The origin sits at the centre spot with `x` pointing at the right goal.
//! Teams are mirrored through [`GoalFrame`] rather than by flipping
//! coordinates, so nothing downstream needs to know which side it plays on.

use std::f64::consts::PI;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Slack allowed when checking that a point lies on the pitch.
pub const PITCH_EPS: f64 = 1e-9;

/// Minimum separation between an observer and a goalpost.
pub const POST_EPS: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeometryError {
    #[error("non-finite coordinate in {0}")]
    NonFinite(&'static str),
    #[error("point ({x}, {y}) lies outside the pitch")]
    OutsidePitch { x: f64, y: f64 },
    #[error("observer coincides with a goalpost")]
    OnPost,
    #[error("goalposts coincide")]
    DegeneratePosts,
    #[error("visual angle {0} is outside the open interval (0, pi)")]
    AngleOutOfRange(f64),
    #[error("invalid pitch dimensions: {0}")]
    InvalidPitch(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Vec2 {
    pub x: f64,
    pub y: f64,
}

impl Vec2 {
    pub const ZERO: Vec2 = Vec2 { x: 0.0, y: 0.0 };

    #[inline]
    pub const fn new(x: f64, y: f64) -> Self {
        Vec2 { x, y }
    }

    /// Builds a vector, rejecting NaN and infinities.
    pub fn try_new(x: f64, y: f64) -> Result<Self, GeometryError> {
        let v = Vec2 { x, y };
        if v.is_finite() {
            Ok(v)
        } else {
            Err(GeometryError::NonFinite("vector"))
        }
    }

    /// Unit vector at `angle` radians from the +x axis.
    #[inline]
    pub fn from_angle(angle: f64) -> Self {
        Vec2::new(angle.cos(), angle.sin())
    }

    #[inline]
    pub fn from_polar(radius: f64, angle: f64) -> Self {
        Vec2::from_angle(angle) * radius
    }

    #[inline]
    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    #[inline]
    pub fn dot(self, other: Vec2) -> f64 {
        self.x * other.x + self.y * other.y
    }

    /// z-component of the 3D cross product.
    #[inline]
    pub fn cross(self, other: Vec2) -> f64 {
        self.x * other.y - self.y * other.x
    }

    #[inline]
    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    #[inline]
    pub fn norm_squared(self) -> f64 {
        self.dot(self)
    }

    #[inline]
    pub fn distance(self, other: Vec2) -> f64 {
        (self - other).norm()
    }

    /// Bearing of the vector in `(-pi, pi]`.
    #[inline]
    pub fn angle(self) -> f64 {
        self.y.atan2(self.x)
    }

    /// Unit vector in the same direction, or `None` for a zero vector.
    pub fn normalized(self) -> Option<Vec2> {
        let n = self.norm();
        if n > 0.0 && n.is_finite() {
            Some(self * (1.0 / n))
        } else {
            None
        }
    }

    /// Rescales the vector so its length does not exceed `max_len`.
    pub fn clamp_norm(self, max_len: f64) -> Vec2 {
        let n = self.norm();
        if n > max_len && n > 0.0 {
            self * (max_len / n)
        } else {
            self
        }
    }

    /// Counter-clockwise rotation by `angle` radians.
    pub fn rotate(self, angle: f64) -> Vec2 {
        let (s, c) = angle.sin_cos();
        Vec2::new(c * self.x - s * self.y, s * self.x + c * self.y)
    }

    /// Counter-clockwise perpendicular.
    #[inline]
    pub fn perp(self) -> Vec2 {
        Vec2::new(-self.y, self.x)
    }

    pub fn lerp(self, other: Vec2, t: f64) -> Vec2 {
        self + (other - self) * t
    }
}

impl fmt::Display for Vec2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:.3}, {:.3})", self.x, self.y)
    }
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

impl SubAssign for Vec2 {
    #[inline]
    fn sub_assign(&mut self, rhs: Vec2) {
        self.x -= rhs.x;
        self.y -= rhs.y;
    }
}

impl Mul<f64> for Vec2 {
    type Output = Vec2;
    #[inline]
    fn mul(self, k: f64) -> Vec2 {
        Vec2::new(self.x * k, self.y * k)
    }
}

impl Neg for Vec2 {
    type Output = Vec2;
    #[inline]
    fn neg(self) -> Vec2 {
        Vec2::new(-self.x, -self.y)
    }
}

/// Which goal a quantity is measured against.
///
/// For attacking evaluations this is the goal being attacked; for the
/// defensive field it is the goal being defended.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GoalFrame {
    Left,
    Right,
}

impl GoalFrame {
    pub fn opposite(self) -> GoalFrame {
        match self {
            GoalFrame::Left => GoalFrame::Right,
            GoalFrame::Right => GoalFrame::Left,
        }
    }

    /// +1 when the goal lies on the +x side.
    pub fn sign(self) -> f64 {
        match self {
            GoalFrame::Left => -1.0,
            GoalFrame::Right => 1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "PitchDims", into = "PitchDims")]
pub struct PitchGeometry {
    length: f64,
    width: f64,
    goal_width: f64,
}

#[derive(Serialize, Deserialize)]
struct PitchDims {
    length: f64,
    width: f64,
    goal_width: f64,
}

impl TryFrom<PitchDims> for PitchGeometry {
    type Error = GeometryError;
    fn try_from(d: PitchDims) -> Result<Self, Self::Error> {
        PitchGeometry::new(d.length, d.width, d.goal_width)
    }
}

impl From<PitchGeometry> for PitchDims {
    fn from(p: PitchGeometry) -> Self {
        PitchDims {
            length: p.length,
            width: p.width,
            goal_width: p.goal_width,
        }
    }
}

impl Default for PitchGeometry {
    fn default() -> Self {
        PitchGeometry {
            length: 105.0,
            width: 68.0,
            goal_width: 14.02,
        }
    }
}

impl PitchGeometry {
    pub fn new(length: f64, width: f64, goal_width: f64) -> Result<Self, GeometryError> {
        if !(length.is_finite() && width.is_finite() && goal_width.is_finite()) {
            return Err(GeometryError::NonFinite("pitch dimensions"));
        }
        if length <= 0.0 || width <= 0.0 {
            return Err(GeometryError::InvalidPitch(format!(
                "length {length} and width {width} must be positive"
            )));
        }
        if goal_width <= 0.0 || goal_width >= width {
            return Err(GeometryError::InvalidPitch(format!(
                "goal width {goal_width} must lie in (0, {width})"
            )));
        }
        Ok(PitchGeometry {
            length,
            width,
            goal_width,
        })
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn width(&self) -> f64 {
        self.width
    }

    pub fn goal_width(&self) -> f64 {
        self.goal_width
    }

    pub fn half_length(&self) -> f64 {
        0.5 * self.length
    }

    pub fn half_width(&self) -> f64 {
        0.5 * self.width
    }

    pub fn diagonal(&self) -> f64 {
        self.length.hypot(self.width)
    }

    pub fn goal_line_x(&self, frame: GoalFrame) -> f64 {
        frame.sign() * self.half_length()
    }

    pub fn goal_center(&self, frame: GoalFrame) -> Vec2 {
        Vec2::new(self.goal_line_x(frame), 0.0)
    }

    /// Goalposts of the given goal, ordered so that the counter-clockwise
    /// perpendicular of `post2 - post1` points into the pitch.
    pub fn goal_posts(&self, frame: GoalFrame) -> (Vec2, Vec2) {
        let x = self.goal_line_x(frame);
        let h = 0.5 * self.goal_width;
        match frame {
            GoalFrame::Right => (Vec2::new(x, -h), Vec2::new(x, h)),
            GoalFrame::Left => (Vec2::new(x, h), Vec2::new(x, -h)),
        }
    }

    pub fn left_goal_posts(&self) -> (Vec2, Vec2) {
        self.goal_posts(GoalFrame::Left)
    }

    pub fn right_goal_posts(&self) -> (Vec2, Vec2) {
        self.goal_posts(GoalFrame::Right)
    }

    pub fn contains(&self, p: Vec2) -> bool {
        p.x.abs() <= self.half_length() + PITCH_EPS && p.y.abs() <= self.half_width() + PITCH_EPS
    }

    pub fn clamp(&self, p: Vec2) -> Vec2 {
        Vec2::new(
            p.x.clamp(-self.half_length(), self.half_length()),
            p.y.clamp(-self.half_width(), self.half_width()),
        )
    }
}

/// Perpendicular distance from `p` to the goal line selected by `frame`.
pub fn vertical_distance(
    p: Vec2,
    frame: GoalFrame,
    pitch: &PitchGeometry,
) -> Result<f64, GeometryError> {
    if !p.is_finite() {
        return Err(GeometryError::NonFinite("position"));
    }
    if !pitch.contains(p) {
        return Err(GeometryError::OutsidePitch { x: p.x, y: p.y });
    }
    Ok((p.x - pitch.goal_line_x(frame)).abs())
}

/// Angle at `p` subtended by the segment `post1`-`post2`, in `[0, pi]`.
///
/// Evaluated as `atan2(|u x v|, u . v)`, which equals the arccos of the
/// normalised dot product but stays accurate near collinear configurations.
pub fn visual_angle(p: Vec2, post1: Vec2, post2: Vec2) -> Result<f64, GeometryError> {
    if !(p.is_finite() && post1.is_finite() && post2.is_finite()) {
        return Err(GeometryError::NonFinite("visual angle input"));
    }
    let u = post1 - p;
    let v = post2 - p;
    if u.norm() <= POST_EPS || v.norm() <= POST_EPS {
        return Err(GeometryError::OnPost);
    }
    Ok(u.cross(v).abs().atan2(u.dot(v)))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Circle {
    pub center: Vec2,
    pub radius: f64,
}

/// The arc of points that see a goal mouth under one fixed visual angle.
///
/// The arc lies on the side of the chord given by the counter-clockwise
/// perpendicular of `post2 - post1`; with posts from
/// [`PitchGeometry::goal_posts`] that is the pitch side.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Isoline {
    pub alpha: f64,
    pub circle: Circle,
    pub posts: (Vec2, Vec2),
    apex_bearing: f64,
    half_span: f64,
}

impl Isoline {
    /// Point on the arc for `s` in `[-1, 1]`; the endpoints are the posts
    /// and `s = 0` is the apex farthest from the chord.
    pub fn point(&self, s: f64) -> Vec2 {
        let bearing = self.apex_bearing + s * self.half_span;
        self.circle.center + Vec2::from_polar(self.circle.radius, bearing)
    }

    /// `n` points spread evenly over the open arc, staying clear of the posts.
    pub fn sample(&self, n: usize) -> Vec<Vec2> {
        const EDGE: f64 = 1e-3;
        (0..n)
            .map(|i| {
                let t = if n == 1 {
                    0.5
                } else {
                    i as f64 / (n - 1) as f64
                };
                let s = (-1.0 + EDGE) + t * 2.0 * (1.0 - EDGE);
                self.point(s)
            })
            .collect()
    }
}

/// Circle through both posts on which every point of the pitch-side arc sees
/// the post segment under exactly `alpha`.
pub fn equal_angle_isoline(alpha: f64, posts: (Vec2, Vec2)) -> Result<Isoline, GeometryError> {
    if !alpha.is_finite() || alpha <= 0.0 || alpha >= PI {
        return Err(GeometryError::AngleOutOfRange(alpha));
    }
    let (p1, p2) = posts;
    if !(p1.is_finite() && p2.is_finite()) {
        return Err(GeometryError::NonFinite("goalposts"));
    }
    let chord = p2 - p1;
    let c = chord.norm();
    if c <= POST_EPS {
        return Err(GeometryError::DegeneratePosts);
    }
    let normal = chord.perp() * (1.0 / c);
    let radius = c / (2.0 * alpha.sin());
    // Signed offset of the centre from the chord midpoint along `normal`:
    // positive for acute angles (major arc), negative for obtuse ones.
    let offset = 0.5 * c / alpha.tan();
    let center = p1.lerp(p2, 0.5) + normal * offset;
    Ok(Isoline {
        alpha,
        circle: Circle { center, radius },
        posts,
        apex_bearing: normal.angle(),
        half_span: PI - alpha,
    })
}
