//! Per-agent, per-cycle policies.
//!
//! The model policy reads only its own [`Percept`]: noisy positions, the
//! exact self state, and the messages delivered to it this cycle. Each call
//! yields exactly one body command, an optional spoken message and a
//! rationale tag for the trace.

mod baseline;
mod defense;
mod intercept;
mod kick;
mod offense;
mod tactics;

use std::f64::consts::{FRAC_PI_4, PI};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::comms::{filter_believed, Message, Payload, DEFAULT_BELIEVE_THRESHOLD};
use crate::engine::{Command, EngineConfig, Percept, PlayerId, SeenBall};
use crate::evaluation::{shooting_success_at, AbilityParams};
use crate::formation::Formation;
use crate::geometry::{GoalFrame, Vec2};
use crate::rng::SeedStream;

pub use baseline::{random_walk, static_formation};
pub use defense::{decide_defense, decide_keeper, gradient_direction};
pub use intercept::intercept_point;
pub use kick::{aim_shot, lead_pass, LeadPass};
pub use offense::{decide_offense, dribble_toward};
pub use tactics::{
    designated_runner, trigger_coupled_tactic, Codebook, CodebookEntry, CodebookError, Tactic,
    TacticSignal,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DecisionError {
    #[error("invalid decision configuration: {0}")]
    Config(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct DecisionConfig {
    /// Shoot when the own value is strictly above this.
    pub shoot_threshold: f64,
    /// Messages from senders whose reliability falls below this are ignored.
    pub believe_threshold: f64,
    pub xi_cutoff: f64,
    pub sample_radius: f64,
    /// Directions sampled on each candidate ring.
    pub sample_count: u32,
    pub radius_steps: u32,
    /// A teammate must report at least this much more than the own value
    /// before the ball is passed to it.
    pub pass_margin: f64,
    pub escape_patience: u32,
    /// Look-ahead in cycles for interception and pass planning.
    pub horizon: u32,
    pub ability_f: f64,
    pub ability_f_max: f64,
    /// Half-width of the view cone used by the broadcast rule, radians.
    pub view_half_angle: f64,
    /// Supporters speak at most once every this many cycles.
    pub say_interval: u32,
    /// Candidates whose path passes this close to an opponent are skipped.
    pub avoid_radius: f64,
    /// A ball within this distance of a player counts as controlled by it.
    pub control_radius: f64,
    pub tactics: bool,
    /// Cycles a runner keeps heading for a signalled rendezvous.
    pub run_patience: u32,
    /// Runners farther than this from the rendezvous are not called.
    pub runner_range: f64,
}

impl Default for DecisionConfig {
    fn default() -> Self {
        DecisionConfig {
            shoot_threshold: 0.6,
            believe_threshold: DEFAULT_BELIEVE_THRESHOLD,
            xi_cutoff: 15.0,
            sample_radius: 5.0,
            sample_count: 16,
            radius_steps: 2,
            pass_margin: 0.05,
            escape_patience: 5,
            horizon: 50,
            ability_f: 1.0,
            ability_f_max: 1.0,
            view_half_angle: FRAC_PI_4,
            say_interval: 4,
            avoid_radius: 2.5,
            control_radius: 2.0,
            tactics: true,
            run_patience: 40,
            runner_range: 25.0,
        }
    }
}

impl DecisionConfig {
    pub fn validate(&self) -> Result<(), DecisionError> {
        let err = |m: String| Err(DecisionError::Config(m));
        if !(self.shoot_threshold > 0.0 && self.shoot_threshold <= 1.0) {
            return err(format!(
                "shoot_threshold must lie in (0, 1], got {}",
                self.shoot_threshold
            ));
        }
        let positive = [
            ("believe_threshold", self.believe_threshold),
            ("xi_cutoff", self.xi_cutoff),
            ("sample_radius", self.sample_radius),
            ("avoid_radius", self.avoid_radius),
            ("control_radius", self.control_radius),
            ("runner_range", self.runner_range),
            ("view_half_angle", self.view_half_angle),
        ];
        for (name, v) in positive {
            if !(v.is_finite() && v > 0.0) {
                return err(format!("{name} must be positive, got {v}"));
            }
        }
        if !(self.pass_margin.is_finite() && self.pass_margin >= 0.0) {
            return err(format!(
                "pass_margin must be >= 0, got {}",
                self.pass_margin
            ));
        }
        let counts = [
            ("sample_count", self.sample_count),
            ("radius_steps", self.radius_steps),
            ("escape_patience", self.escape_patience),
            ("horizon", self.horizon),
            ("say_interval", self.say_interval),
            ("run_patience", self.run_patience),
        ];
        for (name, v) in counts {
            if v == 0 {
                return err(format!("{name} must be at least 1"));
            }
        }
        self.ability()?;
        Ok(())
    }

    pub fn ability(&self) -> Result<AbilityParams, DecisionError> {
        AbilityParams::new(self.ability_f, self.ability_f_max)
            .map_err(|e| DecisionError::Config(e.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Rationale {
    Shoot,
    PassToBetter,
    MoveToBetter,
    Intercept,
    GradientMove,
    TacticRun,
    TacticPass,
    HoldArea,
}

impl Rationale {
    /// Whether `command` is a body action this rationale can produce.
    /// Dribbling makes `MoveToBetter` the only tag that may kick or dash.
    pub fn allows(self, command: &Command) -> bool {
        match self {
            Rationale::Shoot | Rationale::PassToBetter | Rationale::TacticPass => {
                matches!(command, Command::Kick { .. })
            }
            Rationale::MoveToBetter => {
                matches!(command, Command::Kick { .. } | Command::Dash { .. })
            }
            Rationale::Intercept
            | Rationale::GradientMove
            | Rationale::TacticRun
            | Rationale::HoldArea => matches!(command, Command::Dash { .. }),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AgentDecision {
    pub command: Command,
    pub say: Option<Message>,
    pub rationale: Rationale,
}

impl AgentDecision {
    pub fn new(command: Command, rationale: Rationale) -> Self {
        AgentDecision {
            command,
            say: None,
            rationale,
        }
    }

    pub fn dash(target_vel: Vec2, rationale: Rationale) -> Self {
        AgentDecision::new(Command::Dash { target_vel }, rationale)
    }

    pub fn kick(power: f64, dir: f64, rationale: Rationale) -> Self {
        AgentDecision::new(Command::Kick { power, dir }, rationale)
    }
}

/// Everything an agent knows besides its percept. All of it is fixed for
/// the match and shared by the whole team.
#[derive(Debug, Clone, Copy)]
pub struct AgentContext<'a> {
    pub decision: &'a DecisionConfig,
    pub physics: &'a EngineConfig,
    /// The team's formation, laid out for the side it attacks.
    pub formation: &'a Formation,
    pub codebook: &'a Codebook,
}

impl AgentContext<'_> {
    pub fn attacks(&self) -> GoalFrame {
        self.formation.grid.attacks
    }

    pub fn defends(&self) -> GoalFrame {
        self.attacks().opposite()
    }

    pub fn ability(&self) -> AbilityParams {
        self.decision
            .ability()
            .unwrap_or_else(|_| AbilityParams::full())
    }

    /// Shooting success at `p` given the opponents this agent sees.
    pub fn value_at(&self, p: Vec2, opponents: &[Vec2]) -> f64 {
        shooting_success_at(
            p,
            self.attacks(),
            &self.physics.pitch,
            self.ability(),
            opponents,
            self.decision.xi_cutoff,
        )
        .unwrap_or(0.0)
    }

    /// Velocity that heads for `target` and arrives without overshooting.
    pub fn arrive(&self, from: Vec2, target: Vec2) -> Vec2 {
        (target - from).clamp_norm(self.physics.player_max_speed)
    }
}

/// A rendezvous this agent was called to by a teammate's signal.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ActiveRun {
    pub code: u8,
    pub target: Vec2,
    pub until: u64,
}

/// State an agent carries from one cycle to the next.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct AgentMemory {
    /// Consecutive cycles the gradient move has been stuck.
    pub stationary: u32,
    /// Set once `stationary` reaches the escape patience.
    pub escape_armed: bool,
    pub run: Option<ActiveRun>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PolicyKind {
    Model,
    RandomWalk,
    StaticFormation,
}

/// A policy's turn: the body command, anything said alongside it, and the
/// rationale when the policy reports one.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TurnAction {
    pub command: Command,
    pub say: Option<Message>,
    pub rationale: Option<Rationale>,
}

impl From<AgentDecision> for TurnAction {
    fn from(d: AgentDecision) -> Self {
        TurnAction {
            command: d.command,
            say: d.say,
            rationale: Some(d.rationale),
        }
    }
}

pub fn decide_turn(
    kind: PolicyKind,
    percept: &Percept,
    ctx: &AgentContext<'_>,
    memory: &mut AgentMemory,
    seeds: &SeedStream,
) -> TurnAction {
    match kind {
        PolicyKind::Model => decide_model(percept, ctx, memory).into(),
        PolicyKind::RandomWalk => random_walk(percept, ctx, seeds),
        PolicyKind::StaticFormation => static_formation(percept, ctx),
    }
}

/// Who the agent believes has the ball.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BallPhase {
    /// Within the agent's own kicking reach.
    Mine,
    /// Closest to a teammate (or to the agent itself, out of reach).
    Ours(PlayerId),
    Theirs(PlayerId),
    Loose,
}

pub fn ball_phase(percept: &Percept, ctx: &AgentContext<'_>) -> BallPhase {
    let b = percept.seen_ball.pos;
    let me = percept.me;
    let my_dist = me.pos.distance(b);
    if my_dist <= ctx.physics.kickable_margin {
        return BallPhase::Mine;
    }
    let nearest = percept
        .seen_players
        .iter()
        .map(|p| (p.pos.distance(b), p.id))
        .chain(std::iter::once((my_dist, me.id)))
        .min_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    match nearest {
        Some((d, id)) if d <= ctx.decision.control_radius => {
            if id.team == me.id.team {
                BallPhase::Ours(id)
            } else {
                BallPhase::Theirs(id)
            }
        }
        _ => BallPhase::Loose,
    }
}

/// `true` iff some opponent lies inside the agent's view cone.
pub fn should_broadcast(percept: &Percept, view_half_angle: f64) -> bool {
    let me = percept.me;
    percept.opponents().any(|o| {
        let rel = o.pos - me.pos;
        rel.norm() > 0.0 && angle_diff(rel.angle(), me.facing).abs() <= view_half_angle
    })
}

/// Signed difference `a - b` wrapped into `(-pi, pi]`.
pub(crate) fn angle_diff(a: f64, b: f64) -> f64 {
    let mut d = (a - b) % (2.0 * PI);
    if d > PI {
        d -= 2.0 * PI;
    } else if d <= -PI {
        d += 2.0 * PI;
    }
    d
}

pub(crate) fn opponent_positions(percept: &Percept) -> Vec<Vec2> {
    percept.opponents().map(|o| o.pos).collect()
}

/// Distance from `q` to the segment `a b`.
pub(crate) fn segment_distance(q: Vec2, a: Vec2, b: Vec2) -> f64 {
    let ab = b - a;
    let len2 = ab.norm_squared();
    if len2 == 0.0 {
        return q.distance(a);
    }
    let t = ((q - a).dot(ab) / len2).clamp(0.0, 1.0);
    q.distance(a + ab * t)
}

/// Where a ball left alone comes to rest, ignoring bounces.
pub(crate) fn rest_point(ball: &SeenBall, decay: f64) -> Vec2 {
    if decay >= 1.0 {
        return ball.pos + ball.vel * 1e3;
    }
    ball.pos + ball.vel * (1.0 / (1.0 - decay))
}

/// Believed messages heard from teammates this cycle.
pub(crate) fn believed_from_team(percept: &Percept, threshold: f64) -> Vec<Message> {
    filter_believed(&percept.heard, threshold)
        .into_iter()
        .filter(|m| m.sender.team == percept.observer.team && m.sender != percept.observer)
        .collect()
}

/// Cycles `pos` needs to reach the ball, or `horizon + 1` plus the distance
/// to its rest point when it cannot within the look-ahead.
pub(crate) fn reach_time(pos: Vec2, ball: &SeenBall, ctx: &AgentContext<'_>) -> f64 {
    let cfg = ctx.physics;
    let horizon = ctx.decision.horizon;
    match intercept_point(
        ball.pos,
        ball.vel,
        pos,
        cfg.player_max_speed,
        cfg.ball_decay,
        cfg.kickable_margin,
        horizon,
    ) {
        Some((_, t)) => f64::from(t),
        None => f64::from(horizon) + 1.0 + pos.distance(rest_point(ball, cfg.ball_decay)),
    }
}

/// Whether this agent is the outfield teammate who should go for a loose
/// ball: the one with the smallest reach time, lower shirt on ties.
pub(crate) fn is_chaser(percept: &Percept, ctx: &AgentContext<'_>) -> bool {
    let ball = &percept.seen_ball;
    let me = percept.me;
    let mine = reach_time(me.pos, ball, ctx);
    percept.teammates().filter(|t| t.id.shirt != 1).all(|t| {
        let theirs = reach_time(t.pos, ball, ctx);
        mine < theirs || (mine == theirs && me.id.shirt < t.id.shirt)
    })
}

pub(crate) fn intercept_decision(percept: &Percept, ctx: &AgentContext<'_>) -> AgentDecision {
    let cfg = ctx.physics;
    let me = percept.me;
    let ball = &percept.seen_ball;
    let target = intercept_point(
        ball.pos,
        ball.vel,
        me.pos,
        cfg.player_max_speed,
        cfg.ball_decay,
        cfg.kickable_margin,
        ctx.decision.horizon,
    )
    .map(|(p, _)| p)
    .unwrap_or_else(|| rest_point(ball, cfg.ball_decay));
    let target = cfg.pitch.clamp(target);
    // head straight for the meeting point at full speed
    let dir = (target - me.pos).normalized().unwrap_or(Vec2::ZERO);
    let speed = cfg
        .player_max_speed
        .min(me.pos.distance(target) + cfg.player_max_speed * 0.5);
    AgentDecision::dash(dir * speed, Rationale::Intercept)
}

/// Dash toward `target`; once there, creep toward the ball so the body turns
/// to watch it.
pub(crate) fn hold_at(
    percept: &Percept,
    ctx: &AgentContext<'_>,
    target: Vec2,
    rationale: Rationale,
) -> AgentDecision {
    let me = percept.me;
    let v = ctx.arrive(me.pos, target);
    if v.norm() >= 0.01 {
        return AgentDecision::dash(v, rationale);
    }
    let look = (percept.seen_ball.pos - me.pos)
        .normalized()
        .unwrap_or(Vec2::ZERO);
    AgentDecision::dash(look * 0.005, rationale)
}

/// The full model policy for one agent and one cycle.
pub fn decide_model(
    percept: &Percept,
    ctx: &AgentContext<'_>,
    memory: &mut AgentMemory,
) -> AgentDecision {
    let me = percept.me;
    tactics::listen_for_signals(percept, ctx, memory);
    if memory.run.is_some_and(|r| r.until < percept.cycle) {
        memory.run = None;
    }

    if me.role.is_keeper() {
        memory.run = None;
        return decide_keeper(percept, ctx);
    }

    match ball_phase(percept, ctx) {
        BallPhase::Mine => {
            memory.run = None;
            memory.stationary = 0;
            memory.escape_armed = false;
            decide_offense(percept, ctx)
        }
        BallPhase::Ours(holder) if holder == me.id => intercept_decision(percept, ctx),
        BallPhase::Ours(_) => {
            if let Some(run) = memory.run {
                return tactics::run_decision(percept, ctx, run);
            }
            support(percept, ctx)
        }
        BallPhase::Theirs(_) => {
            memory.run = None;
            decide_defense(percept, ctx, memory)
        }
        BallPhase::Loose => {
            let ball_near = me.pos.distance(percept.seen_ball.pos) <= 5.0;
            if let Some(run) = memory.run {
                if !ball_near {
                    return tactics::run_decision(percept, ctx, run);
                }
            }
            if is_chaser(percept, ctx) {
                return intercept_decision(percept, ctx);
            }
            if attacking_us(percept, ctx) {
                decide_defense(percept, ctx, memory)
            } else {
                support(percept, ctx)
            }
        }
    }
}

/// Opponents are attacking when the ball is in our half or rolling toward
/// our goal.
pub fn attacking_us(percept: &Percept, ctx: &AgentContext<'_>) -> bool {
    let s = ctx.defends().sign();
    let b = percept.seen_ball;
    b.pos.x * s > 0.0 || b.vel.x * s > 0.0
}

/// Off-ball play while the team has the ball: back line holds, everyone
/// else takes the best shooting spot in their home cell and reports its
/// value when an opponent is in view.
fn support(percept: &Percept, ctx: &AgentContext<'_>) -> AgentDecision {
    let me = percept.me;
    let opponents = opponent_positions(percept);
    let mut decision = match me.role.line() {
        Some(crate::formation::Line::Back) | None => {
            let home = ctx.formation.home_of(me.role).unwrap_or(me.pos);
            hold_at(percept, ctx, home, Rationale::HoldArea)
        }
        Some(_) => {
            let spot = best_spot_in_home_cell(percept, ctx, &opponents);
            hold_at(percept, ctx, spot, Rationale::MoveToBetter)
        }
    };
    let interval = u64::from(ctx.decision.say_interval);
    if (percept.cycle + u64::from(me.id.shirt)).is_multiple_of(interval)
        && should_broadcast(percept, ctx.decision.view_half_angle)
    {
        let v = ctx.value_at(me.pos, &opponents);
        decision.say = Message::shoot_value(me.id, percept.cycle, v).ok();
    }
    decision
}

fn best_spot_in_home_cell(percept: &Percept, ctx: &AgentContext<'_>, opponents: &[Vec2]) -> Vec2 {
    let me = percept.me;
    let Some(slot) = ctx.formation.slot(me.role) else {
        return me.pos;
    };
    let pitch = &ctx.physics.pitch;
    let rect = ctx.formation.grid.cell_rect(slot.home_cell);
    let inset = 0.5;
    let (x0, x1) = (
        (rect.x_min).max(-pitch.half_length() + inset),
        (rect.x_max).min(pitch.half_length() - inset),
    );
    let (y0, y1) = (
        (rect.y_min).max(-pitch.half_width() + inset),
        (rect.y_max).min(pitch.half_width() - inset),
    );
    const N: u32 = 6;
    let mut best = (f64::NEG_INFINITY, slot.home);
    for i in 0..=N {
        for j in 0..=N {
            let p = Vec2::new(
                x0 + (x1 - x0) * f64::from(i) / f64::from(N),
                y0 + (y1 - y0) * f64::from(j) / f64::from(N),
            );
            let v = ctx.value_at(p, opponents);
            if v > best.0 {
                best = (v, p);
            }
        }
    }
    best.1
}

/// The shooting value carried by a message, if any.
pub fn shoot_value_of(m: &Message) -> Option<f64> {
    match m.payload {
        Payload::ShootValue(v) => Some(v),
        Payload::Signal(_) => None,
    }
}

#[cfg(test)]
pub(crate) mod test_support {
    use super::*;
    use crate::engine::{PlayerState, SeenPlayer, Team};
    use crate::formation::{build_formation, Role};

    pub struct Fixture {
        pub decision: DecisionConfig,
        pub physics: EngineConfig,
        pub formation: Formation,
        pub codebook: Codebook,
    }

    impl Fixture {
        pub fn new() -> Self {
            let physics = EngineConfig::default();
            let formation = build_formation("4-4-2", &physics.pitch).unwrap();
            Fixture {
                decision: DecisionConfig::default(),
                physics,
                formation,
                codebook: Codebook::default_book(),
            }
        }

        pub fn ctx(&self) -> AgentContext<'_> {
            AgentContext {
                decision: &self.decision,
                physics: &self.physics,
                formation: &self.formation,
                codebook: &self.codebook,
            }
        }
    }

    /// Home player `shirt` at `pos` (home attacks +x), with a bare percept.
    pub fn percept(shirt: u8, pos: Vec2, ball: Vec2) -> Percept {
        let f = build_formation("4-4-2", &crate::geometry::PitchGeometry::default()).unwrap();
        let id = PlayerId::new(Team::Home, shirt);
        Percept {
            observer: id,
            cycle: 10,
            me: PlayerState {
                id,
                pos,
                vel: Vec2::ZERO,
                facing: 0.0,
                role: f.role_for_shirt(shirt).unwrap_or(Role::Goalkeeper),
            },
            seen_players: Vec::new(),
            seen_ball: SeenBall {
                pos: ball,
                vel: Vec2::ZERO,
            },
            heard: Vec::new(),
        }
    }

    pub fn seen(team: Team, shirt: u8, pos: Vec2) -> SeenPlayer {
        SeenPlayer {
            id: PlayerId::new(team, shirt),
            pos,
        }
    }
}
