//! Control policies the model is measured against.

use std::f64::consts::TAU;

use rand::Rng;

use super::{hold_at, AgentContext, Rationale, TurnAction};
use crate::engine::{Command, Percept};
use crate::geometry::Vec2;
use crate::rng::{Purpose, SeedStream};

/// Wanders in a fresh random direction every cycle and shoots at the goal
/// centre whenever the ball is in reach.
pub fn random_walk(percept: &Percept, ctx: &AgentContext<'_>, seeds: &SeedStream) -> TurnAction {
    let cfg = ctx.physics;
    let me = percept.me;
    let ball = percept.seen_ball.pos;
    if me.pos.distance(ball) <= cfg.kickable_margin {
        let goal = cfg.pitch.goal_center(ctx.attacks());
        return TurnAction {
            command: Command::Kick {
                power: 1.0,
                dir: (goal - ball).angle(),
            },
            say: None,
            rationale: Some(Rationale::Shoot),
        };
    }
    let mut rng = seeds.rng(Purpose::Policy, percept.cycle, me.id.key(), 0);
    let heading = rng.random_range(0.0..TAU);
    let speed = rng.random_range(0.0..=cfg.player_max_speed);
    TurnAction {
        command: Command::Dash {
            target_vel: Vec2::from_polar(speed, heading),
        },
        say: None,
        rationale: None,
    }
}

/// Holds the formation home and clears the ball toward the opponents' goal
/// whenever it comes within reach.
pub fn static_formation(percept: &Percept, ctx: &AgentContext<'_>) -> TurnAction {
    let cfg = ctx.physics;
    let me = percept.me;
    let ball = percept.seen_ball.pos;
    if me.pos.distance(ball) <= cfg.kickable_margin {
        let goal = cfg.pitch.goal_center(ctx.attacks());
        return TurnAction {
            command: Command::Kick {
                power: 1.0,
                dir: (goal - ball).angle(),
            },
            say: None,
            rationale: None,
        };
    }
    let home = ctx.formation.home_of(me.role).unwrap_or(me.pos);
    TurnAction {
        command: hold_at(percept, ctx, home, Rationale::HoldArea).command,
        say: None,
        rationale: None,
    }
}
