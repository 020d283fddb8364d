use std::f64::consts::TAU;

use super::{
    aim_shot, believed_from_team, lead_pass, opponent_positions, segment_distance, shoot_value_of,
    trigger_coupled_tactic, AgentContext, AgentDecision, Rationale,
};
use crate::engine::{Command, Percept};
use crate::geometry::Vec2;

/// Passing lanes must stay this far from every seen opponent.
const LANE_CLEARANCE: f64 = 1.5;

/// How far ahead of the dribbler's next position the ball is pushed.
const DRIBBLE_LEAD: f64 = 0.6;

/// Offensive choice for an agent that has the ball, in priority order:
/// shoot, pass to a teammate reporting a better value, start a coupled
/// tactic, or dribble to the best nearby spot.
pub fn decide_offense(percept: &Percept, ctx: &AgentContext<'_>) -> AgentDecision {
    let me = percept.me;
    let opponents = opponent_positions(percept);
    let own = ctx.value_at(me.pos, &opponents);

    if own > ctx.decision.shoot_threshold {
        let posts = ctx.physics.pitch.goal_posts(ctx.attacks());
        let dir = aim_shot(percept.seen_ball.pos, posts, &opponents);
        return AgentDecision::kick(1.0, dir, Rationale::Shoot);
    }
    if let Some(pass) = pass_to_better(percept, ctx, own, &opponents) {
        return pass;
    }
    if ctx.decision.tactics {
        if let Some((_, decision)) = trigger_coupled_tactic(percept, ctx) {
            return decision;
        }
    }
    move_to_better(percept, ctx, own, &opponents)
}

pub(crate) fn lane_is_clear(from: Vec2, to: Vec2, opponents: &[Vec2]) -> bool {
    opponents
        .iter()
        .all(|&o| segment_distance(o, from, to) > LANE_CLEARANCE)
}

fn pass_to_better(
    percept: &Percept,
    ctx: &AgentContext<'_>,
    own: f64,
    opponents: &[Vec2],
) -> Option<AgentDecision> {
    let ball = percept.seen_ball.pos;
    let mut best: Option<(f64, u8, Vec2)> = None;
    for m in believed_from_team(percept, ctx.decision.believe_threshold) {
        let Some(v) = shoot_value_of(&m) else {
            continue;
        };
        if v <= own + ctx.decision.pass_margin {
            continue;
        }
        let Some(seen) = percept.seen(m.sender) else {
            continue;
        };
        if !lane_is_clear(ball, seen.pos, opponents) {
            continue;
        }
        let better = match best {
            None => true,
            Some((bv, shirt, _)) => v > bv || (v == bv && m.sender.shirt < shirt),
        };
        if better {
            best = Some((v, m.sender.shirt, seen.pos));
        }
    }
    let (_, _, to) = best?;
    let cfg = ctx.physics;
    let pass = lead_pass(
        ball,
        to,
        Vec2::ZERO,
        cfg.ball_kick_speed,
        cfg.ball_decay,
        cfg.kickable_margin,
        ctx.decision.horizon,
    );
    Some(AgentDecision::kick(
        pass.power,
        pass.dir,
        Rationale::PassToBetter,
    ))
}

/// Candidate spots on rings around `centre`.
pub(crate) fn ring_candidates(centre: Vec2, radius: f64, count: u32, steps: u32) -> Vec<Vec2> {
    let mut out = Vec::with_capacity((count * steps) as usize);
    for s in 1..=steps {
        let r = radius * f64::from(s) / f64::from(steps);
        for i in 0..count {
            let th = TAU * f64::from(i) / f64::from(count);
            out.push(centre + Vec2::from_polar(r, th));
        }
    }
    out
}

fn move_to_better(
    percept: &Percept,
    ctx: &AgentContext<'_>,
    own: f64,
    opponents: &[Vec2],
) -> AgentDecision {
    let me = percept.me;
    let pitch = &ctx.physics.pitch;
    let cfg = ctx.decision;
    let scored: Vec<(Vec2, f64, bool)> = ring_candidates(
        me.pos,
        cfg.sample_radius,
        cfg.sample_count,
        cfg.radius_steps,
    )
    .into_iter()
    .filter(|&c| pitch.contains(c))
    .map(|c| {
        let safe = opponents
            .iter()
            .all(|&o| segment_distance(o, me.pos, c) > cfg.avoid_radius);
        (c, ctx.value_at(c, opponents), safe)
    })
    .collect();
    let pick = |want_safe: bool| {
        scored
            .iter()
            .filter(|(_, v, safe)| (*safe || !want_safe) && *v > own)
            .fold(None::<(Vec2, f64)>, |best, &(c, v, _)| match best {
                Some((_, bv)) if bv >= v => best,
                _ => Some((c, v)),
            })
    };
    match pick(true).or_else(|| pick(false)) {
        Some((target, _)) => AgentDecision::new(
            dribble_toward(percept, ctx, target),
            Rationale::MoveToBetter,
        ),
        None => AgentDecision::new(
            dribble_toward(percept, ctx, me.pos),
            Rationale::MoveToBetter,
        ),
    }
}

/// One cycle of dribbling toward `target`: run on while the ball will still
/// be within reach and not left behind, otherwise push it just ahead of
/// where the dribbler will be.
pub fn dribble_toward(percept: &Percept, ctx: &AgentContext<'_>, target: Vec2) -> Command {
    let cfg = ctx.physics;
    let me = percept.me;
    let ball = percept.seen_ball;
    let to_target = target - me.pos;
    let dir = match to_target.normalized() {
        Some(d) if to_target.norm() > 0.05 => d,
        // stay put and keep the ball at the feet
        _ => {
            let req = me.pos + me.vel - ball.pos - ball.vel;
            if req.norm() < 0.05 && ball.vel.norm() < 0.05 {
                return Command::Dash {
                    target_vel: Vec2::ZERO,
                };
            }
            let stop = me.pos + me.vel - ball.pos;
            return Command::Kick {
                power: (stop.norm() / cfg.ball_kick_speed).min(1.0),
                dir: stop.angle(),
            };
        }
    };
    let want = dir * cfg.player_max_speed;
    let next_vel =
        (me.vel + (want - me.vel).clamp_norm(cfg.max_accel)).clamp_norm(cfg.player_max_speed);
    let my_next = me.pos + next_vel;
    let ball_next = ball.pos + ball.vel;
    let rel = ball_next - my_next;
    if rel.norm() <= 0.8 * cfg.kickable_margin && rel.dot(dir) >= -0.2 {
        return Command::Dash { target_vel: want };
    }
    let desired = inset_clamp(ctx, me.pos + me.vel + dir * DRIBBLE_LEAD, 0.3);
    let req = desired - ball.pos;
    Command::Kick {
        power: (req.norm() / cfg.ball_kick_speed).min(1.0),
        dir: req.angle(),
    }
}

fn inset_clamp(ctx: &AgentContext<'_>, p: Vec2, inset: f64) -> Vec2 {
    let pitch = &ctx.physics.pitch;
    let hl = pitch.half_length() - inset;
    let hw = pitch.half_width() - inset;
    Vec2::new(p.x.clamp(-hl, hl), p.y.clamp(-hw, hw))
}
