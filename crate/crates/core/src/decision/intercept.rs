use crate::geometry::Vec2;

/// Earliest cycle `t` in `1..=horizon` at which a player starting at `from`
/// and running at `max_speed` can be within `margin` of the ball, together
/// with the ball position at that cycle.
///
/// The ball is rolled forward exactly as the engine does: move, then decay.
/// Bounces are ignored.
pub fn intercept_point(
    ball_pos: Vec2,
    ball_vel: Vec2,
    from: Vec2,
    max_speed: f64,
    decay: f64,
    margin: f64,
    horizon: u32,
) -> Option<(Vec2, u32)> {
    let mut pos = ball_pos;
    let mut vel = ball_vel;
    for t in 1..=horizon {
        pos += vel;
        vel = vel * decay;
        if from.distance(pos) <= max_speed * f64::from(t) + margin {
            return Some((pos, t));
        }
    }
    None
}
