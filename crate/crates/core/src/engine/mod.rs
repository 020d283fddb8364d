//! Discrete-cycle match world.
//!
//! Kinematics are deliberately simple: the ball moves then decays, players
//! steer toward a requested velocity under an acceleration cap, and a kick
//! overwrites the ball velocity when the kicker is within reach. Goals reset
//! play to the kickoff layout. The ball bounces back off touchlines and off
//! the goal line outside the posts, so play never stops.

mod perception;
mod state;

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::comms::{broadcast, ChannelConfig, CommsError, DeliveryRecord, Message};
use crate::formation::{build_formation, Formation, FormationError};
use crate::geometry::{GeometryError, GoalFrame, PitchGeometry, Vec2};
use crate::rng::SeedStream;

pub use perception::{Percept, SeenBall, SeenPlayer};
pub use state::{
    snapshot, BallState, PlayerId, PlayerState, Score, Snapshot, Team, WorldState,
    PLAYERS_PER_TEAM, PLAYER_COUNT,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EngineError {
    #[error("no command for player {0}")]
    MissingCommand(PlayerId),
    #[error("more than one command for player {0}")]
    DuplicateCommand(PlayerId),
    #[error("unknown player {0}")]
    UnknownPlayer(PlayerId),
    #[error("invalid command for {player}: {reason}")]
    InvalidCommand { player: PlayerId, reason: String },
    #[error("invalid engine configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Comms(#[from] CommsError),
    #[error(transparent)]
    Formation(#[from] FormationError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct EngineConfig {
    pub pitch: PitchGeometry,
    pub ball_decay: f64,
    /// Metres per cycle.
    pub player_max_speed: f64,
    /// Metres per cycle squared.
    pub max_accel: f64,
    /// Ball speed of a full-power kick, metres per cycle.
    pub ball_kick_speed: f64,
    pub kickable_margin: f64,
    pub noise_factor: f64,
    pub noise: bool,
    pub channel: ChannelConfig,
}

impl Default for EngineConfig {
    fn default() -> Self {
        EngineConfig {
            pitch: PitchGeometry::default(),
            ball_decay: 0.94,
            player_max_speed: 1.0,
            max_accel: 0.3,
            ball_kick_speed: 2.7,
            kickable_margin: 1.0,
            noise_factor: 0.1,
            noise: true,
            channel: ChannelConfig::default(),
        }
    }
}

impl EngineConfig {
    pub fn ball_max_speed(&self) -> f64 {
        self.ball_kick_speed
    }

    pub fn validate(&self) -> Result<(), EngineError> {
        let positive = [
            ("player_max_speed", self.player_max_speed),
            ("max_accel", self.max_accel),
            ("ball_kick_speed", self.ball_kick_speed),
            ("kickable_margin", self.kickable_margin),
        ];
        for (name, v) in positive {
            if !(v.is_finite() && v > 0.0) {
                return Err(EngineError::Config(format!(
                    "{name} must be positive, got {v}"
                )));
            }
        }
        if !(self.ball_decay.is_finite() && self.ball_decay > 0.0 && self.ball_decay <= 1.0) {
            return Err(EngineError::Config(format!(
                "ball_decay must lie in (0, 1], got {}",
                self.ball_decay
            )));
        }
        if !(self.noise_factor.is_finite() && self.noise_factor >= 0.0) {
            return Err(EngineError::Config(format!(
                "noise_factor must be >= 0, got {}",
                self.noise_factor
            )));
        }
        self.channel.validate()?;
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Command {
    /// Steer toward `target_vel` (metres per cycle).
    Dash {
        target_vel: Vec2,
    },
    /// Set the ball moving at `power * ball_kick_speed` along `dir` radians.
    Kick {
        power: f64,
        dir: f64,
    },
    Say(Message),
    Noop,
}

/// A player's full turn: one body command plus an optional spoken message,
/// which the channel carries alongside the body action.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PlayerCommand {
    pub player: PlayerId,
    pub command: Command,
    pub say: Option<Message>,
}

impl PlayerCommand {
    pub fn new(player: PlayerId, command: Command) -> Self {
        PlayerCommand {
            player,
            command,
            say: None,
        }
    }

    pub fn noop(player: PlayerId) -> Self {
        PlayerCommand::new(player, Command::Noop)
    }

    /// Every message this turn puts on the channel.
    pub fn spoken(&self) -> impl Iterator<Item = &Message> {
        let body = match &self.command {
            Command::Say(m) => Some(m),
            _ => None,
        };
        body.into_iter().chain(self.say.iter())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KickEvent {
    pub player: PlayerId,
    pub power: f64,
    pub dir: f64,
    /// Ball position when it was struck.
    pub ball_pos: Vec2,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StepOutcome {
    pub world: WorldState,
    pub kick: Option<KickEvent>,
    pub goal: Option<Team>,
}

pub struct Engine {
    config: EngineConfig,
    seeds: SeedStream,
    kickoff: Vec<PlayerState>,
}

impl Engine {
    /// `home` and `away` are laid out for a team attacking the right goal;
    /// the away side is mirrored here.
    pub fn new(
        config: EngineConfig,
        seed: u64,
        home: &Formation,
        away: &Formation,
    ) -> Result<Self, EngineError> {
        config.validate()?;
        let mut kickoff = Vec::with_capacity(PLAYER_COUNT);
        for team in Team::BOTH {
            let base = if team == Team::Home { home } else { away };
            let f = base.for_side(team.attacks());
            for shirt in 1..=PLAYERS_PER_TEAM as u8 {
                let id = PlayerId::new(team, shirt);
                let role = f.role_for_shirt(shirt).ok_or_else(|| {
                    EngineError::Config(format!(
                        "formation {} has no role for shirt {shirt}",
                        f.name
                    ))
                })?;
                let pos = f.home_of(role).expect("role comes from this formation");
                kickoff.push(PlayerState {
                    id,
                    pos,
                    vel: Vec2::ZERO,
                    facing: if team.attacks() == GoalFrame::Right {
                        0.0
                    } else {
                        std::f64::consts::PI
                    },
                    role,
                });
            }
        }
        Ok(Engine {
            config,
            seeds: SeedStream::new(seed),
            kickoff,
        })
    }

    /// Both teams in 4-4-2.
    pub fn with_defaults(config: EngineConfig, seed: u64) -> Result<Self, EngineError> {
        let f = build_formation("4-4-2", &config.pitch)?;
        Engine::new(config, seed, &f, &f)
    }

    pub fn config(&self) -> &EngineConfig {
        &self.config
    }

    pub fn seeds(&self) -> &SeedStream {
        &self.seeds
    }

    pub fn kickoff_world(&self) -> WorldState {
        WorldState {
            cycle: 0,
            players: self.kickoff.clone(),
            ball: BallState::default(),
            score: Score::default(),
            possession: None,
            deliveries: Vec::new(),
        }
    }

    fn validate_command(&self, cmd: &PlayerCommand, cycle: u64) -> Result<(), EngineError> {
        let invalid = |reason: String| EngineError::InvalidCommand {
            player: cmd.player,
            reason,
        };
        match cmd.command {
            Command::Dash { target_vel } => {
                if !target_vel.is_finite() {
                    return Err(invalid("non-finite dash velocity".into()));
                }
                if target_vel.norm() > self.config.player_max_speed * (1.0 + 1e-9) {
                    return Err(invalid(format!(
                        "dash speed {} exceeds {}",
                        target_vel.norm(),
                        self.config.player_max_speed
                    )));
                }
            }
            Command::Kick { power, dir } => {
                if !(power.is_finite() && (0.0..=1.0).contains(&power)) {
                    return Err(invalid(format!("kick power {power} outside [0, 1]")));
                }
                if !dir.is_finite() {
                    return Err(invalid("non-finite kick direction".into()));
                }
            }
            Command::Say(_) | Command::Noop => {}
        }
        for m in cmd.spoken() {
            if m.sender != cmd.player || m.cycle != cycle {
                return Err(invalid(
                    "message must be sent by its speaker this cycle".into(),
                ));
            }
            m.validate()?;
        }
        Ok(())
    }

    /// Nearest player to the ball within `kickable_margin`; ties go to the
    /// lower shirt number, then to the home side.
    fn nearest_within_reach<'a>(
        &self,
        ball: Vec2,
        candidates: impl Iterator<Item = &'a PlayerState>,
    ) -> Option<PlayerId> {
        candidates
            .map(|p| (p.pos.distance(ball), p.id))
            .filter(|(d, _)| *d <= self.config.kickable_margin)
            .min_by(|a, b| {
                a.0.total_cmp(&b.0)
                    .then(a.1.shirt.cmp(&b.1.shirt))
                    .then(a.1.team.cmp(&b.1.team))
            })
            .map(|(_, id)| id)
    }

    pub fn possession_of(&self, world: &WorldState) -> Option<PlayerId> {
        self.nearest_within_reach(world.ball.pos, world.players.iter())
    }

    /// Advances the world by one cycle. `commands` must hold exactly one
    /// entry per player, in any order.
    pub fn step(
        &self,
        world: &WorldState,
        commands: &[PlayerCommand],
    ) -> Result<StepOutcome, EngineError> {
        let cfg = &self.config;
        let mut by_slot: Vec<Option<&PlayerCommand>> = vec![None; PLAYER_COUNT];
        for cmd in commands {
            let slot = cmd
                .player
                .slot()
                .filter(|&s| s < world.players.len())
                .ok_or(EngineError::UnknownPlayer(cmd.player))?;
            if by_slot[slot].replace(cmd).is_some() {
                return Err(EngineError::DuplicateCommand(cmd.player));
            }
            self.validate_command(cmd, world.cycle)?;
        }
        let by_slot: Vec<&PlayerCommand> = by_slot
            .into_iter()
            .zip(&world.players)
            .map(|(c, p)| c.ok_or(EngineError::MissingCommand(p.id)))
            .collect::<Result<_, _>>()?;

        let mut next = world.clone();
        next.cycle = world.cycle + 1;

        // Kick: at most one lands, from the nearest kicker within reach.
        let kickers: BTreeSet<PlayerId> = by_slot
            .iter()
            .filter(|c| matches!(c.command, Command::Kick { .. }))
            .map(|c| c.player)
            .collect();
        let kicker = self.nearest_within_reach(
            world.ball.pos,
            world.players.iter().filter(|p| kickers.contains(&p.id)),
        );
        let mut kick = None;
        if let Some(id) = kicker {
            let slot = id.slot().expect("kicker is on the pitch");
            if let Command::Kick { power, dir } = by_slot[slot].command {
                next.ball.vel = (Vec2::from_angle(dir) * (power * cfg.ball_kick_speed))
                    .clamp_norm(cfg.ball_max_speed());
                kick = Some(KickEvent {
                    player: id,
                    power,
                    dir,
                    ball_pos: world.ball.pos,
                });
            }
        }

        // Players.
        for (p, cmd) in next.players.iter_mut().zip(&by_slot) {
            let target = match cmd.command {
                Command::Dash { target_vel } => target_vel,
                Command::Kick { .. } => p.vel,
                Command::Say(_) | Command::Noop => Vec2::ZERO,
            };
            let accel = (target - p.vel).clamp_norm(cfg.max_accel);
            let mut vel = (p.vel + accel).clamp_norm(cfg.player_max_speed);
            let raw = p.pos + vel;
            let pos = cfg.pitch.clamp(raw);
            if pos.x != raw.x {
                vel.x = 0.0;
            }
            if pos.y != raw.y {
                vel.y = 0.0;
            }
            p.pos = pos;
            p.vel = vel;
            if let Command::Kick { dir, .. } = cmd.command {
                p.facing = dir;
            } else if vel.norm() > 1e-6 {
                p.facing = vel.angle();
            }
        }

        // Ball.
        let old = world.ball.pos;
        let mut pos = old + next.ball.vel;
        let mut vel = next.ball.vel * cfg.ball_decay;
        let goal = self.goal_crossing(old, pos);
        if goal.is_none() {
            let (hl, hw) = (cfg.pitch.half_length(), cfg.pitch.half_width());
            if pos.x.abs() > hl {
                pos.x = pos.x.signum() * (2.0 * hl - pos.x.abs());
                vel.x = -vel.x;
            }
            if pos.y.abs() > hw {
                pos.y = pos.y.signum() * (2.0 * hw - pos.y.abs());
                vel.y = -vel.y;
            }
            pos = cfg.pitch.clamp(pos);
        }
        next.ball = BallState { pos, vel };

        // Say: heard at the start of the next cycle.
        let mut deliveries: Vec<DeliveryRecord> = Vec::new();
        for cmd in &by_slot {
            for m in cmd.spoken() {
                deliveries.extend(broadcast(m, world, &self.seeds, &cfg.channel)?);
            }
        }
        next.deliveries = deliveries;

        if let Some(scorer) = goal {
            next.score.credit(scorer);
            next.players.clone_from(&self.kickoff);
            next.ball = BallState::default();
        }
        next.possession = self.possession_of(&next);

        Ok(StepOutcome {
            world: next,
            kick,
            goal,
        })
    }

    /// Team credited when the ball path `from -> to` crosses a goal line
    /// between the posts.
    fn goal_crossing(&self, from: Vec2, to: Vec2) -> Option<Team> {
        let pitch = &self.config.pitch;
        for frame in [GoalFrame::Left, GoalFrame::Right] {
            let gx = pitch.goal_line_x(frame);
            let beyond = (to.x - gx) * frame.sign() > 0.0;
            let before = (from.x - gx) * frame.sign() <= 0.0;
            if beyond && before {
                let t = (gx - from.x) / (to.x - from.x);
                let y = from.y + t * (to.y - from.y);
                if y.abs() < 0.5 * pitch.goal_width() {
                    return Some(match frame {
                        GoalFrame::Right => Team::Home,
                        GoalFrame::Left => Team::Away,
                    });
                }
            }
        }
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn engine() -> Engine {
        Engine::with_defaults(EngineConfig::default(), 11).unwrap()
    }

    fn noops(world: &WorldState) -> Vec<PlayerCommand> {
        world
            .players
            .iter()
            .map(|p| PlayerCommand::noop(p.id))
            .collect()
    }

    fn set(cmds: &mut [PlayerCommand], id: PlayerId, command: Command) {
        cmds.iter_mut().find(|c| c.player == id).unwrap().command = command;
    }

    #[test]
    fn all_noop_is_a_fixed_point() {
        let e = engine();
        let w = e.kickoff_world();
        let out = e.step(&w, &noops(&w)).unwrap();
        let mut expected = w.clone();
        expected.cycle = 1;
        assert_eq!(out.world, expected);
        assert!(out.kick.is_none() && out.goal.is_none());
    }

    #[test]
    fn ball_decays() {
        let e = engine();
        let mut w = e.kickoff_world();
        w.ball.vel = Vec2::new(1.0, 0.0);
        let out = e.step(&w, &noops(&w)).unwrap();
        assert_eq!(out.world.ball.pos, Vec2::new(1.0, 0.0));
        assert!((out.world.ball.vel.x - 0.94).abs() < 1e-15);
        assert_eq!(out.world.ball.vel.y, 0.0);
    }

    #[test]
    fn kick_out_of_range_does_nothing() {
        let e = engine();
        let mut w = e.kickoff_world();
        let id = PlayerId::new(Team::Home, 7);
        w.players[id.slot().unwrap()].pos = Vec2::new(5.0, 0.0);
        let mut cmds = noops(&w);
        set(
            &mut cmds,
            id,
            Command::Kick {
                power: 1.0,
                dir: 0.0,
            },
        );
        let out = e.step(&w, &cmds).unwrap();
        assert!(out.kick.is_none());
        assert_eq!(out.world.ball, w.ball);
    }

    #[test]
    fn kick_in_range_moves_ball() {
        let e = engine();
        let mut w = e.kickoff_world();
        let id = PlayerId::new(Team::Home, 7);
        w.players[id.slot().unwrap()].pos = Vec2::new(-0.5, 0.0);
        let mut cmds = noops(&w);
        set(
            &mut cmds,
            id,
            Command::Kick {
                power: 0.5,
                dir: 0.0,
            },
        );
        let out = e.step(&w, &cmds).unwrap();
        assert_eq!(out.kick.unwrap().player, id);
        assert!((out.world.ball.pos.x - 1.35).abs() < 1e-12);
        assert!((out.world.ball.vel.x - 1.35 * 0.94).abs() < 1e-12);
    }

    #[test]
    fn nearest_kicker_wins() {
        let e = engine();
        let mut w = e.kickoff_world();
        let a = PlayerId::new(Team::Home, 7);
        let b = PlayerId::new(Team::Away, 7);
        w.players[a.slot().unwrap()].pos = Vec2::new(-0.8, 0.0);
        w.players[b.slot().unwrap()].pos = Vec2::new(0.4, 0.0);
        let mut cmds = noops(&w);
        set(
            &mut cmds,
            a,
            Command::Kick {
                power: 1.0,
                dir: 0.0,
            },
        );
        set(
            &mut cmds,
            b,
            Command::Kick {
                power: 1.0,
                dir: std::f64::consts::PI,
            },
        );
        let out = e.step(&w, &cmds).unwrap();
        assert_eq!(out.kick.unwrap().player, b);
        assert!(out.world.ball.vel.x < 0.0);
    }

    #[test]
    fn possession_tie_break() {
        let e = engine();
        let mut w = e.kickoff_world();
        let a = PlayerId::new(Team::Away, 4);
        let b = PlayerId::new(Team::Home, 9);
        let c = PlayerId::new(Team::Home, 4);
        w.players[a.slot().unwrap()].pos = Vec2::new(0.5, 0.0);
        w.players[b.slot().unwrap()].pos = Vec2::new(-0.5, 0.0);
        assert_eq!(e.possession_of(&w), Some(a));
        w.players[c.slot().unwrap()].pos = Vec2::new(0.0, 0.5);
        assert_eq!(e.possession_of(&w), Some(c));
    }

    #[test]
    fn command_errors() {
        let e = engine();
        let w = e.kickoff_world();
        let mut cmds = noops(&w);
        cmds.pop();
        assert!(matches!(
            e.step(&w, &cmds),
            Err(EngineError::MissingCommand(_))
        ));
        let mut cmds = noops(&w);
        cmds.push(cmds[0]);
        assert!(matches!(
            e.step(&w, &cmds),
            Err(EngineError::DuplicateCommand(_))
        ));
        let mut cmds = noops(&w);
        cmds[3].command = Command::Kick {
            power: 1.5,
            dir: 0.0,
        };
        assert!(matches!(
            e.step(&w, &cmds),
            Err(EngineError::InvalidCommand { .. })
        ));
        let mut cmds = noops(&w);
        cmds[3].command = Command::Dash {
            target_vel: Vec2::new(2.0, 0.0),
        };
        assert!(matches!(
            e.step(&w, &cmds),
            Err(EngineError::InvalidCommand { .. })
        ));
        let mut cmds = noops(&w);
        cmds[3].say = Some(Message::signal(cmds[4].player, 0, 1));
        assert!(matches!(
            e.step(&w, &cmds),
            Err(EngineError::InvalidCommand { .. })
        ));
    }

    #[test]
    fn dash_respects_acceleration_and_speed() {
        let e = engine();
        let mut w = e.kickoff_world();
        let id = PlayerId::new(Team::Home, 5);
        let mut speeds = vec![];
        for _ in 0..6 {
            let mut cmds = noops(&w);
            set(
                &mut cmds,
                id,
                Command::Dash {
                    target_vel: Vec2::new(0.0, 1.0),
                },
            );
            w = e.step(&w, &cmds).unwrap().world;
            speeds.push(w.player(id).unwrap().vel.norm());
        }
        let expected = [0.3, 0.6, 0.9, 1.0, 1.0, 1.0];
        for (s, x) in speeds.iter().zip(expected) {
            assert!((s - x).abs() < 1e-12);
        }
    }

    #[test]
    fn goal_scores_and_resets() {
        let e = engine();
        let mut w = e.kickoff_world();
        w.ball.pos = Vec2::new(51.5, 1.0);
        w.ball.vel = Vec2::new(2.0, 0.0);
        let out = e.step(&w, &noops(&w)).unwrap();
        assert_eq!(out.goal, Some(Team::Home));
        assert_eq!(out.world.score, Score { home: 1, away: 0 });
        assert_eq!(out.world.ball, BallState::default());
        assert_eq!(out.world.players, e.kickoff_world().players);

        w.ball.pos = Vec2::new(-51.5, -3.0);
        w.ball.vel = Vec2::new(-2.0, 0.0);
        let out = e.step(&w, &noops(&w)).unwrap();
        assert_eq!(out.goal, Some(Team::Away));
    }

    #[test]
    fn wide_of_the_post_bounces_back() {
        let e = engine();
        let mut w = e.kickoff_world();
        w.ball.pos = Vec2::new(51.5, 10.0);
        w.ball.vel = Vec2::new(2.0, 0.0);
        let out = e.step(&w, &noops(&w)).unwrap();
        assert!(out.goal.is_none());
        assert!((out.world.ball.pos.x - 51.5).abs() < 1e-12);
        assert!(out.world.ball.vel.x < 0.0);

        w.ball.pos = Vec2::new(0.0, 33.5);
        w.ball.vel = Vec2::new(0.0, 1.5);
        let out = e.step(&w, &noops(&w)).unwrap();
        assert!((out.world.ball.pos.y - 33.0).abs() < 1e-12);
        assert!(out.world.ball.vel.y < 0.0);
    }

    #[test]
    fn snapshot_is_detached() {
        let e = engine();
        let mut w = e.kickoff_world();
        let snap = snapshot(&w);
        let again = snapshot(&w);
        w.ball.pos = Vec2::new(3.0, 3.0);
        w.cycle = 99;
        assert_eq!(snap.cycle, 0);
        assert_eq!(snap.ball.pos, Vec2::ZERO);
        assert_eq!(snap, again);
        let json = serde_json::to_string(&snap).unwrap();
        let back: Snapshot = serde_json::from_str(&json).unwrap();
        assert_eq!(back, snap);
    }

    #[test]
    fn perception_noise_examples() {
        let e = engine();
        let mut w = e.kickoff_world();
        let me = PlayerId::new(Team::Home, 1);
        w.players[0].pos = Vec2::new(-50.0, 0.0);
        w.ball.pos = Vec2::new(50.0, 0.0); // 100 m away
        let mut max_err: f64 = 0.0;
        for cycle in 0..500 {
            w.cycle = cycle;
            let p = e.perceive(&w, me).unwrap();
            assert_eq!(p.me.pos, w.players[0].pos);
            let err = p.seen_ball.pos - w.ball.pos;
            assert!(err.x.abs() <= 10.0 && err.y.abs() <= 10.0);
            max_err = max_err.max(err.x.abs()).max(err.y.abs());
        }
        assert!(max_err > 9.0);

        // 10 m away
        w.ball.pos = Vec2::new(-40.0, 0.0);
        for cycle in 0..200 {
            w.cycle = cycle;
            let p = e.perceive(&w, me).unwrap();
            let err = p.seen_ball.pos - w.ball.pos;
            assert!(err.x.abs() <= 1.0 && err.y.abs() <= 1.0);
        }

        // the same request twice sees the same thing
        assert_eq!(e.perceive(&w, me).unwrap(), e.perceive(&w, me).unwrap());
    }

    #[test]
    fn noise_can_be_disabled() {
        let cfg = EngineConfig {
            noise: false,
            ..EngineConfig::default()
        };
        let e = Engine::with_defaults(cfg, 3).unwrap();
        let w = e.kickoff_world();
        let p = e.perceive(&w, PlayerId::new(Team::Away, 10)).unwrap();
        for s in &p.seen_players {
            assert_eq!(s.pos, w.player(s.id).unwrap().pos);
        }
    }
}
