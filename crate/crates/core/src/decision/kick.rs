use serde::{Deserialize, Serialize};

use super::angle_diff;
use crate::evaluation::strictly_inside_triangle;
use crate::geometry::Vec2;

/// Passes arriving faster than this (metres per cycle) are only used when
/// nothing slower reaches the receiver.
const PASS_ARRIVAL_CAP: f64 = 1.5;

/// Shot bearing from `from`: the middle of the widest angular gap between
/// opponents standing in the shot cone, or the goal centre when the cone
/// is clear. Equal gaps resolve to the one nearer `posts.0`.
pub fn aim_shot(from: Vec2, posts: (Vec2, Vec2), opponents: &[Vec2]) -> f64 {
    let b1 = (posts.0 - from).angle();
    let span = angle_diff((posts.1 - from).angle(), b1);
    let (lo, hi) = if span >= 0.0 {
        (0.0, span)
    } else {
        (span, 0.0)
    };
    let mut marks: Vec<f64> = opponents
        .iter()
        .filter(|&&o| strictly_inside_triangle(o, from, posts.0, posts.1))
        .map(|&o| angle_diff((o - from).angle(), b1).clamp(lo, hi))
        .collect();
    if marks.is_empty() {
        let centre = (posts.0 + posts.1) * 0.5;
        return (centre - from).angle();
    }
    marks.sort_by(f64::total_cmp);
    // walk from the first post's side
    if span < 0.0 {
        marks.reverse();
    }
    let first = if span >= 0.0 { lo } else { hi };
    let last = if span >= 0.0 { hi } else { lo };
    let mut edges = Vec::with_capacity(marks.len() + 2);
    edges.push(first);
    edges.extend(marks);
    edges.push(last);
    let mut best = (f64::NEG_INFINITY, 0.0);
    for w in edges.windows(2) {
        let gap = (w[1] - w[0]).abs();
        if gap > best.0 {
            best = (gap, 0.5 * (w[0] + w[1]));
        }
    }
    b1 + best.1
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LeadPass {
    pub dir: f64,
    pub power: f64,
    /// Predicted meeting point and cycle, absent for the fallback pass.
    pub meet: Option<(Vec2, u32)>,
}

/// Distance covered in `t` cycles by a ball launched at unit speed.
fn unit_travel(decay: f64, t: u32) -> f64 {
    if decay == 1.0 {
        f64::from(t)
    } else {
        (1.0 - decay.powi(t as i32)) / (1.0 - decay)
    }
}

/// Kick that meets a receiver running at constant velocity.
///
/// Scans cycles `1..=horizon` for the first meeting the ball can make with
/// a gentle arrival, then for any meeting at all; otherwise aims at the
/// receiver's current position with enough power to roll there.
pub fn lead_pass(
    from: Vec2,
    receiver: Vec2,
    receiver_vel: Vec2,
    kick_speed: f64,
    decay: f64,
    margin: f64,
    horizon: u32,
) -> LeadPass {
    let mut fast = None;
    for t in 1..=horizon {
        let r = receiver + receiver_vel * f64::from(t);
        let reach = kick_speed * unit_travel(decay, t);
        let dist = from.distance(r);
        let power = if dist <= reach {
            dist / reach
        } else if dist - reach <= margin {
            1.0
        } else {
            continue;
        };
        let dir = (r - from).angle();
        let arrival = power * kick_speed * decay.powi(t as i32 - 1);
        let pass = LeadPass {
            dir,
            power,
            meet: Some((r, t)),
        };
        if arrival <= PASS_ARRIVAL_CAP {
            return pass;
        }
        fast.get_or_insert(pass);
    }
    fast.unwrap_or_else(|| {
        let dist = from.distance(receiver);
        LeadPass {
            dir: (receiver - from).angle(),
            power: (dist * (1.0 - decay) / kick_speed).min(1.0),
            meet: None,
        }
    })
}
