//! Closed-form evaluation fields.
//!
//! Everything here is a function of two geometric quantities, the distance
//! `d` to a goal line and the visual angle `alpha` of that goal's posts:
//!
//! * shooting success `{A + B(1 - A)} / (1 + xi)` with
//!   `A = alpha / ((1 + d)^2 pi)` and `B = f alpha / (f_max (1 + d) pi)`,
//! * the defensive field `A` on its own, and its gradient,
//! * the distance-based message reliability `1 / d^2`,
//! * the interference level `xi` counted from opponents in the shot cone.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::{
    vertical_distance, visual_angle, GeometryError, GoalFrame, PitchGeometry, Vec2, POST_EPS,
};

/// Gradient magnitudes below this are reported as a stationary point.
pub const GRAD_EPS: f64 = 1e-9;

/// Distances closer than this are clamped before computing reliability.
pub const BELIEVE_MIN_DISTANCE: f64 = 0.1;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EvalError {
    #[error("distance to goal line must be finite and >= 0, got {0}")]
    Distance(f64),
    #[error("visual angle must lie in [0, pi], got {0}")]
    Angle(f64),
    #[error("ability must satisfy 0 <= f <= f_max with f_max > 0, got f = {f}, f_max = {f_max}")]
    Ability { f: f64, f_max: f64 },
    #[error("communication distance must be finite and > 0, got {0}")]
    BelieveDistance(f64),
    #[error("interference cutoff must be finite and > 0, got {0}")]
    Cutoff(f64),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AbilityParams {
    f: f64,
    f_max: f64,
}

impl AbilityParams {
    pub fn new(f: f64, f_max: f64) -> Result<Self, EvalError> {
        if f.is_finite() && f_max.is_finite() && f_max > 0.0 && (0.0..=f_max).contains(&f) {
            Ok(AbilityParams { f, f_max })
        } else {
            Err(EvalError::Ability { f, f_max })
        }
    }

    /// An agent shooting at the league maximum.
    pub fn full() -> Self {
        AbilityParams { f: 1.0, f_max: 1.0 }
    }

    pub fn f(&self) -> f64 {
        self.f
    }

    pub fn f_max(&self) -> f64 {
        self.f_max
    }

    pub fn ratio(&self) -> f64 {
        self.f / self.f_max
    }
}

impl Default for AbilityParams {
    fn default() -> Self {
        AbilityParams::full()
    }
}

#[derive(
    Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize,
)]
pub struct InterferenceLevel(pub u32);

impl InterferenceLevel {
    pub const NONE: InterferenceLevel = InterferenceLevel(0);

    pub fn value(self) -> u32 {
        self.0
    }
}

/// A validated `(d, alpha)` pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EvalPoint {
    d: f64,
    alpha: f64,
}

impl EvalPoint {
    pub fn new(d: f64, alpha: f64) -> Result<Self, EvalError> {
        if !(d.is_finite() && d >= 0.0) {
            return Err(EvalError::Distance(d));
        }
        if !(alpha.is_finite() && (0.0..=PI).contains(&alpha)) {
            return Err(EvalError::Angle(alpha));
        }
        Ok(EvalPoint { d, alpha })
    }

    /// Evaluates `d` and `alpha` for a pitch position against `frame`'s goal.
    pub fn at(p: Vec2, frame: GoalFrame, pitch: &PitchGeometry) -> Result<Self, EvalError> {
        let d = vertical_distance(p, frame, pitch)?;
        let (p1, p2) = pitch.goal_posts(frame);
        let alpha = visual_angle(p, p1, p2)?;
        EvalPoint::new(d, alpha)
    }

    pub fn d(&self) -> f64 {
        self.d
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }
}

#[inline]
fn defensive_term(d: f64, alpha: f64) -> f64 {
    let k = 1.0 + d;
    (alpha / PI) / (k * k)
}

pub fn shooting_success(pt: EvalPoint, ab: AbilityParams, xi: InterferenceLevel) -> f64 {
    let a = defensive_term(pt.d, pt.alpha);
    let b = ab.ratio() * (pt.alpha / PI) / (1.0 + pt.d);
    let base = a + b * (1.0 - a);
    base.clamp(0.0, 1.0) / (1.0 + f64::from(xi.0))
}

pub fn defensive(pt: EvalPoint) -> f64 {
    defensive_term(pt.d, pt.alpha)
}

/// Partial derivatives of [`defensive`] with respect to `d` and `alpha`.
pub fn defensive_gradient_da(pt: EvalPoint) -> (f64, f64) {
    let k = 1.0 + pt.d;
    let k2 = k * k;
    (-2.0 * pt.alpha / (PI * k2 * k), 1.0 / (PI * k2))
}

/// Gradient of the visual angle with respect to the observer position.
fn visual_angle_gradient(p: Vec2, post1: Vec2, post2: Vec2) -> Result<Vec2, GeometryError> {
    let u = post1 - p;
    let v = post2 - p;
    let (nu, nv) = (u.norm_squared(), v.norm_squared());
    if nu.sqrt() <= POST_EPS || nv.sqrt() <= POST_EPS {
        return Err(GeometryError::OnPost);
    }
    // d(bearing of post - p)/dp = (w.y, -w.x) / |w|^2
    let grad_signed = Vec2::new(v.y, -v.x) * (1.0 / nv) - Vec2::new(u.y, -u.x) * (1.0 / nu);
    let sign = if u.cross(v) < 0.0 { -1.0 } else { 1.0 };
    Ok(grad_signed * sign)
}

/// Raw pitch-space gradient of `p -> defensive(d(p), alpha(p))`.
pub fn defensive_gradient_raw(
    p: Vec2,
    frame: GoalFrame,
    pitch: &PitchGeometry,
) -> Result<Vec2, EvalError> {
    let pt = EvalPoint::at(p, frame, pitch)?;
    let (dd, da) = defensive_gradient_da(pt);
    // d grows away from the goal line on the pitch side
    let grad_d = Vec2::new(-frame.sign(), 0.0);
    let (p1, p2) = pitch.goal_posts(frame);
    let grad_alpha = visual_angle_gradient(p, p1, p2)?;
    Ok(grad_d * dd + grad_alpha * da)
}

/// Unit direction of steepest ascent of the defensive field at `p`, or the
/// zero vector at a stationary point.
pub fn defensive_gradient_pitch(
    p: Vec2,
    frame: GoalFrame,
    pitch: &PitchGeometry,
) -> Result<Vec2, EvalError> {
    let g = defensive_gradient_raw(p, frame, pitch)?;
    if g.norm() < GRAD_EPS {
        return Ok(Vec2::ZERO);
    }
    Ok(g.normalized().unwrap_or(Vec2::ZERO))
}

/// Reliability of a message sent across `dist` metres.
pub fn believe(dist: f64) -> Result<f64, EvalError> {
    if !(dist.is_finite() && dist > 0.0) {
        return Err(EvalError::BelieveDistance(dist));
    }
    Ok(1.0 / (dist * dist))
}

/// [`believe`] with distances below [`BELIEVE_MIN_DISTANCE`] (including
/// co-located agents) clamped up to it.
pub fn believe_clamped(dist: f64) -> f64 {
    let d = if dist.is_finite() {
        dist.max(BELIEVE_MIN_DISTANCE)
    } else {
        f64::INFINITY
    };
    1.0 / (d * d)
}

/// `true` when `q` lies strictly inside the triangle `a b c`.
pub(crate) fn strictly_inside_triangle(q: Vec2, a: Vec2, b: Vec2, c: Vec2) -> bool {
    let s1 = (b - a).cross(q - a);
    let s2 = (c - b).cross(q - b);
    let s3 = (a - c).cross(q - c);
    (s1 > 0.0 && s2 > 0.0 && s3 > 0.0) || (s1 < 0.0 && s2 < 0.0 && s3 < 0.0)
}

/// Number of opponents inside the shot triangle and within `cutoff` metres.
pub fn interference_xi(
    shooter: Vec2,
    opponents: &[Vec2],
    posts: (Vec2, Vec2),
    cutoff: f64,
) -> Result<InterferenceLevel, EvalError> {
    if !(cutoff.is_finite() && cutoff > 0.0) {
        return Err(EvalError::Cutoff(cutoff));
    }
    if !(shooter.is_finite() && posts.0.is_finite() && posts.1.is_finite()) {
        return Err(GeometryError::NonFinite("interference input").into());
    }
    let count = opponents
        .iter()
        .filter(|&&o| {
            o.distance(shooter) <= cutoff && strictly_inside_triangle(o, shooter, posts.0, posts.1)
        })
        .count();
    Ok(InterferenceLevel(count as u32))
}

/// Shooting success of an agent at `p` attacking `frame`, with interference
/// counted from `opponents`.
pub fn shooting_success_at(
    p: Vec2,
    frame: GoalFrame,
    pitch: &PitchGeometry,
    ability: AbilityParams,
    opponents: &[Vec2],
    xi_cutoff: f64,
) -> Result<f64, EvalError> {
    let pt = EvalPoint::at(p, frame, pitch)?;
    let xi = interference_xi(p, opponents, pitch.goal_posts(frame), xi_cutoff)?;
    Ok(shooting_success(pt, ability, xi))
}
