//! Decision coupling through a shared codebook.
//!
//! The passer says only a small code. Every teammate holds the same book,
//! so the code alone tells the runner where the ball will arrive; no
//! coordinates ever go over the channel.

use std::collections::BTreeSet;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::offense::lane_is_clear;
use super::{
    believed_from_team, hold_at, opponent_positions, ActiveRun, AgentContext, AgentDecision,
    AgentMemory, Rationale,
};
use crate::comms::{Message, Payload};
use crate::engine::{Percept, SeenPlayer};
use crate::evaluation::believe_clamped;
use crate::formation::Rect;
use crate::geometry::{GoalFrame, PitchGeometry, Vec2};

const DEFAULT_CODEBOOK: &str = include_str!("../../data/codebook.toml");

/// Ball speed wanted when a tactic pass reaches the rendezvous.
const ARRIVAL_SPEED: f64 = 0.3;

/// The runner must be this many metres closer to the rendezvous than any
/// opponent.
const RACE_MARGIN: f64 = 3.0;

/// A tactic pass must gain at least this much distance to the goal line.
const MIN_GAIN: f64 = 10.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Tactic {
    /// Ball played straight up the wing, runner cuts in diagonally.
    VerticalPassInclineArrive,
    /// Ball played diagonally, runner goes straight forward.
    InclinePassVerticalArrive,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TacticSignal {
    pub code: u8,
    pub tactic: Tactic,
    pub zone: Rect,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CodebookEntry {
    pub code: u8,
    pub tactic: Tactic,
    /// Where the passer must stand, team frame.
    pub zone: Rect,
    pub pass_target: Vec2,
    pub run_target: Vec2,
    pub passer_branch: String,
    pub runner_branch: String,
}

impl CodebookEntry {
    pub fn signal(&self) -> TacticSignal {
        TacticSignal {
            code: self.code,
            tactic: self.tactic,
            zone: self.zone,
        }
    }
}

#[derive(Debug, Error)]
pub enum CodebookError {
    #[error("cannot read codebook: {0}")]
    Io(#[from] std::io::Error),
    #[error("cannot parse codebook: {0}")]
    Parse(#[from] toml::de::Error),
    #[error("code {0} appears more than once")]
    DuplicateCode(u8),
    #[error("code {0}: pass target and run target must coincide")]
    Rendezvous(u8),
    #[error("code {0}: target outside the pitch")]
    TargetOutside(u8),
    #[error("code {0}: empty or non-finite zone")]
    Zone(u8),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Codebook {
    #[serde(rename = "entry", default)]
    pub entries: Vec<CodebookEntry>,
}

/// Converts between pitch coordinates and a team frame attacking +x.
fn flip(p: Vec2, attacks: GoalFrame) -> Vec2 {
    Vec2::new(p.x * attacks.sign(), p.y)
}

impl Codebook {
    /// The four-entry book shipped with the crate.
    pub fn default_book() -> Codebook {
        Codebook::from_toml_str(DEFAULT_CODEBOOK, &PitchGeometry::default())
            .expect("bundled codebook is valid")
    }

    /// The bundled book checked against `pitch`.
    pub fn bundled(pitch: &PitchGeometry) -> Result<Codebook, CodebookError> {
        Codebook::from_toml_str(DEFAULT_CODEBOOK, pitch)
    }

    pub fn from_toml_str(text: &str, pitch: &PitchGeometry) -> Result<Codebook, CodebookError> {
        let book: Codebook = toml::from_str(text)?;
        book.validate(pitch)?;
        Ok(book)
    }

    pub fn load(path: &Path, pitch: &PitchGeometry) -> Result<Codebook, CodebookError> {
        Codebook::from_toml_str(&std::fs::read_to_string(path)?, pitch)
    }

    pub fn validate(&self, pitch: &PitchGeometry) -> Result<(), CodebookError> {
        let mut seen = BTreeSet::new();
        for e in &self.entries {
            if !seen.insert(e.code) {
                return Err(CodebookError::DuplicateCode(e.code));
            }
            if e.pass_target != e.run_target {
                return Err(CodebookError::Rendezvous(e.code));
            }
            if !(pitch.contains(e.pass_target) && pitch.contains(e.run_target)) {
                return Err(CodebookError::TargetOutside(e.code));
            }
            let z = e.zone;
            let finite = [z.x_min, z.x_max, z.y_min, z.y_max]
                .iter()
                .all(|v| v.is_finite());
            if !(finite && z.x_min < z.x_max && z.y_min < z.y_max) {
                return Err(CodebookError::Zone(e.code));
            }
        }
        Ok(())
    }

    pub fn get(&self, code: u8) -> Option<&CodebookEntry> {
        self.entries.iter().find(|e| e.code == code)
    }

    /// First entry whose zone holds `p`, given in pitch coordinates for a
    /// team attacking `attacks`.
    pub fn entry_at(&self, p: Vec2, attacks: GoalFrame) -> Option<&CodebookEntry> {
        let local = flip(p, attacks);
        self.entries.iter().find(|e| e.zone.contains(local))
    }

    /// An entry's rendezvous in pitch coordinates.
    pub fn rendezvous(&self, entry: &CodebookEntry, attacks: GoalFrame) -> Vec2 {
        flip(entry.run_target, attacks)
    }
}

/// Outfield teammate nearest to `target` among those seen, leaving out
/// `exclude`, if one is within `range`.
pub fn designated_runner(
    percept: &Percept,
    target: Vec2,
    exclude: Option<crate::engine::PlayerId>,
    range: f64,
) -> Option<SeenPlayer> {
    percept
        .teammates()
        .filter(|t| t.id.shirt != 1 && Some(t.id) != exclude)
        .map(|t| (t.pos.distance(target), *t))
        .filter(|(d, _)| *d <= range)
        .min_by(|a, b| a.0.total_cmp(&b.0).then(a.1.id.cmp(&b.1.id)))
        .map(|(_, t)| t)
}

/// Starts a coupled tactic when the passer stands in a codebook zone, a
/// runner who will trust the call is near the rendezvous and wins the race
/// to it, the rendezvous is well upfield, and the lane is clear.
pub fn trigger_coupled_tactic(
    percept: &Percept,
    ctx: &AgentContext<'_>,
) -> Option<(TacticSignal, AgentDecision)> {
    let me = percept.me;
    let attacks = ctx.attacks();
    let entry = ctx.codebook.entry_at(me.pos, attacks)?;
    let target = ctx.codebook.rendezvous(entry, attacks);
    let runner = designated_runner(percept, target, None, ctx.decision.runner_range)?;
    if believe_clamped(runner.pos.distance(me.pos)) < ctx.decision.believe_threshold {
        return None;
    }
    let opponents = opponent_positions(percept);
    let runner_gap = runner.pos.distance(target);
    let nearest_opp = opponents
        .iter()
        .map(|o| o.distance(target))
        .fold(f64::INFINITY, f64::min);
    if runner_gap + RACE_MARGIN >= nearest_opp {
        return None;
    }
    let pitch = &ctx.physics.pitch;
    let goal_x = pitch.goal_line_x(attacks);
    if (goal_x - target.x).abs() > (goal_x - me.pos.x).abs() - MIN_GAIN {
        return None;
    }
    let ball = percept.seen_ball.pos;
    if !lane_is_clear(ball, target, &opponents) {
        return None;
    }
    let cfg = ctx.physics;
    let dist = ball.distance(target);
    let power = ((dist * (1.0 - cfg.ball_decay) + ARRIVAL_SPEED) / cfg.ball_kick_speed).min(1.0);
    let mut decision = AgentDecision::kick(power, (target - ball).angle(), Rationale::TacticPass);
    decision.say = Some(Message::signal(me.id, percept.cycle, entry.code));
    Some((entry.signal(), decision))
}

/// Runner side: a believed signal from a teammate calls this agent to the
/// rendezvous if no other outfield teammate is clearly closer to it.
pub(crate) fn listen_for_signals(
    percept: &Percept,
    ctx: &AgentContext<'_>,
    memory: &mut AgentMemory,
) {
    if percept.me.role.is_keeper() {
        return;
    }
    let attacks = ctx.attacks();
    for m in believed_from_team(percept, ctx.decision.believe_threshold) {
        let Payload::Signal(code) = m.payload else {
            continue;
        };
        let Some(entry) = ctx.codebook.get(code) else {
            continue;
        };
        let target = ctx.codebook.rendezvous(entry, attacks);
        let mine = percept.me.pos.distance(target);
        if mine > ctx.decision.runner_range {
            continue;
        }
        let others = designated_runner(percept, target, Some(m.sender), f64::INFINITY)
            .map_or(f64::INFINITY, |t| t.pos.distance(target));
        if mine <= others + 1.0 {
            memory.run = Some(ActiveRun {
                code,
                target,
                until: percept.cycle + u64::from(ctx.decision.run_patience),
            });
        }
    }
}

pub(crate) fn run_decision(
    percept: &Percept,
    ctx: &AgentContext<'_>,
    run: ActiveRun,
) -> AgentDecision {
    hold_at(percept, ctx, run.target, Rationale::TacticRun)
}
