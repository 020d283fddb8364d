use super::{
    attacking_us, ball_phase, hold_at, intercept_decision, lead_pass, opponent_positions,
    AgentContext, AgentDecision, AgentMemory, BallPhase, Rationale,
};
use crate::engine::{Percept, SeenBall};
use crate::evaluation::{defensive_gradient_raw, GRAD_EPS};
use crate::formation::{action_area, area_contains, ActionArea, AreaZone};
use crate::geometry::Vec2;

/// A clipped gradient shorter than this fraction of the raw one counts as
/// stuck.
const STALL_FRACTION: f64 = 0.05;

/// How far in front of the goal centre the keeper stands, toward the ball.
const KEEPER_GUARD_DEPTH: f64 = 2.0;

/// Ascent direction of the defensive field at `pos`, made safe to follow:
/// components leading away from the own goal line, off the pitch, or out of
/// `area` are dropped. Returns a unit vector, or zero when nothing useful is
/// left.
pub fn gradient_direction(pos: Vec2, ctx: &AgentContext<'_>, area: Option<&ActionArea>) -> Vec2 {
    let frame = ctx.defends();
    let pitch = &ctx.physics.pitch;
    let Ok(raw) = defensive_gradient_raw(pos, frame, pitch) else {
        return Vec2::ZERO;
    };
    let mut g = raw;
    // d grows along -frame.sign() in x
    if g.x * -frame.sign() > 0.0 {
        g.x = 0.0;
    }
    if pos.x.abs() >= pitch.half_length() - 1e-6 && g.x * pos.x > 0.0 {
        g.x = 0.0;
    }
    if pos.y.abs() >= pitch.half_width() - 1e-6 && g.y * pos.y > 0.0 {
        g.y = 0.0;
    }
    let floor = GRAD_EPS.max(STALL_FRACTION * raw.norm());
    if g.norm() < floor {
        return Vec2::ZERO;
    }
    let dir = g.normalized().unwrap_or(Vec2::ZERO);
    let Some(area) = area else { return dir };
    let step = ctx.physics.player_max_speed;
    if area_contains(area, pos + dir * step) != AreaZone::Outside {
        return dir;
    }
    for part in [Vec2::new(g.x, 0.0), Vec2::new(0.0, g.y)] {
        if part.norm() < floor {
            continue;
        }
        let d = part.normalized().unwrap_or(Vec2::ZERO);
        if area_contains(area, pos + d * step) != AreaZone::Outside {
            return d;
        }
    }
    Vec2::ZERO
}

/// Off-ball defence: intercept an opponent carrying the ball through the
/// agent's action area, otherwise climb the defensive field while the
/// opponents attack, otherwise hold the home position.
///
/// After `escape_patience` stuck cycles the agent also leaves its spot for
/// a loose ball inside its area.
pub fn decide_defense(
    percept: &Percept,
    ctx: &AgentContext<'_>,
    memory: &mut AgentMemory,
) -> AgentDecision {
    let me = percept.me;
    let home = ctx.formation.home_of(me.role).unwrap_or(me.pos);
    let Ok(area) = action_area(ctx.formation, me.role) else {
        return hold_at(percept, ctx, home, Rationale::HoldArea);
    };
    let ball = percept.seen_ball.pos;
    let phase = ball_phase(percept, ctx);
    let carrier = match phase {
        BallPhase::Theirs(id) => percept.seen(id).map(|p| p.pos),
        _ => None,
    };
    let jump_out = memory.escape_armed
        && phase == BallPhase::Loose
        && area_contains(&area, ball) != AreaZone::Outside;
    if carrier.is_some_and(|c| area_contains(&area, c) != AreaZone::Outside) || jump_out {
        memory.stationary = 0;
        memory.escape_armed = false;
        return intercept_decision(percept, ctx);
    }
    if attacking_us(percept, ctx) {
        let dir = gradient_direction(me.pos, ctx, Some(&area));
        if dir == Vec2::ZERO {
            memory.stationary += 1;
            if memory.stationary >= ctx.decision.escape_patience {
                memory.escape_armed = true;
            }
            return hold_at(percept, ctx, me.pos, Rationale::GradientMove);
        }
        memory.stationary = 0;
        return AgentDecision::dash(dir * ctx.physics.player_max_speed, Rationale::GradientMove);
    }
    memory.stationary = 0;
    hold_at(percept, ctx, home, Rationale::HoldArea)
}

/// `true` when the ball, left alone, rolls over the own goal line within a
/// metre of the goal mouth.
fn heading_into_goal(ball: &SeenBall, ctx: &AgentContext<'_>) -> bool {
    let pitch = &ctx.physics.pitch;
    let own = ctx.defends();
    let gx = pitch.goal_line_x(own);
    if ball.vel.x * own.sign() <= 0.0 {
        return false;
    }
    let decay = ctx.physics.ball_decay;
    let travel = if decay < 1.0 {
        1.0 / (1.0 - decay)
    } else {
        f64::INFINITY
    };
    let s = (gx - ball.pos.x) / ball.vel.x;
    if !(s >= 0.0 && s <= travel) {
        return false;
    }
    (ball.pos.y + ball.vel.y * s).abs() <= 0.5 * pitch.goal_width() + 1.0
}

/// Goalkeeper: distribute when in possession, go for shots and for balls in
/// the keeper box, otherwise stand between ball and goal centre.
pub fn decide_keeper(percept: &Percept, ctx: &AgentContext<'_>) -> AgentDecision {
    let me = percept.me;
    let ball = percept.seen_ball;
    if me.pos.distance(ball.pos) <= ctx.physics.kickable_margin {
        return distribute(percept, ctx);
    }
    if heading_into_goal(&ball, ctx) || ctx.formation.keeper_area.contains(ball.pos) {
        return intercept_decision(percept, ctx);
    }
    let pitch = &ctx.physics.pitch;
    let own = ctx.defends();
    let centre = pitch.goal_center(own);
    let inward = Vec2::new(-own.sign(), 0.0);
    let dir = (ball.pos - centre).normalized().unwrap_or(inward);
    let dir = if dir.dot(inward) <= 0.0 { inward } else { dir };
    let spot = pitch.clamp(centre + dir * KEEPER_GUARD_DEPTH);
    hold_at(percept, ctx, spot, Rationale::HoldArea)
}

/// Keeper's pass to the most open outfield teammate in range, or a long
/// clearance upfield when nobody is open.
fn distribute(percept: &Percept, ctx: &AgentContext<'_>) -> AgentDecision {
    let me = percept.me;
    let ball = percept.seen_ball.pos;
    let opponents = opponent_positions(percept);
    let openness = |p: Vec2| {
        opponents
            .iter()
            .map(|&o| o.distance(p))
            .fold(f64::INFINITY, f64::min)
    };
    let target = percept
        .teammates()
        .filter(|t| t.id.shirt != 1)
        .filter(|t| (8.0..=45.0).contains(&t.pos.distance(me.pos)))
        .map(|t| (openness(t.pos), t.id.shirt, t.pos))
        .filter(|(o, _, _)| *o >= 4.0)
        .max_by(|a, b| a.0.total_cmp(&b.0).then(b.1.cmp(&a.1)));
    let cfg = ctx.physics;
    match target {
        Some((_, _, to)) => {
            let pass = lead_pass(
                ball,
                to,
                Vec2::ZERO,
                cfg.ball_kick_speed,
                cfg.ball_decay,
                cfg.kickable_margin,
                ctx.decision.horizon,
            );
            AgentDecision::kick(pass.power, pass.dir, Rationale::PassToBetter)
        }
        None => {
            let upfield = Vec2::new(ctx.attacks().sign(), 0.0);
            AgentDecision::kick(1.0, upfield.angle(), Rationale::PassToBetter)
        }
    }
}
