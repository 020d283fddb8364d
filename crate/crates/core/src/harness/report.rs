use serde::{Deserialize, Serialize};

use super::{HarnessError, MatchConfig, TraceRecord};
use crate::decision::{DecisionConfig, PolicyKind, Rationale};
use crate::engine::{EngineConfig, KickEvent, PlayerId, Score, Team, PLAYER_COUNT};
use crate::evaluation::shooting_success_at;
use crate::geometry::Vec2;

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct TeamReport {
    pub policy: Option<PolicyKind>,
    pub goals: u32,
    pub shots: u32,
    pub shots_on_target: u32,
    pub pass_attempts: u32,
    pub pass_completions: u32,
    pub interceptions: u32,
    /// Mean shooting success at the moment of each shot, from true positions.
    pub mean_shot_value: Option<f64>,
    pub messages_said: u32,
    /// Receiver offers: every message is offered to all other players.
    pub messages_sent: u64,
    pub messages_delivered: u64,
    pub messages_believed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatchReport {
    pub seed: u64,
    pub cycles: u64,
    pub score: Score,
    pub home: TeamReport,
    pub away: TeamReport,
}

impl MatchReport {
    pub fn team(&self, team: Team) -> &TeamReport {
        match team {
            Team::Home => &self.home,
            Team::Away => &self.away,
        }
    }

    /// Goals for minus goals against, from `team`'s side.
    pub fn goal_difference(&self, team: Team) -> i64 {
        self.score.of(team) as i64 - self.score.of(team.opponent()) as i64
    }
}

struct PendingPass {
    passer: PlayerId,
}

pub(super) struct ReportBuilder {
    seed: u64,
    cycles: u64,
    physics: EngineConfig,
    decision: [DecisionConfig; 2],
    teams: [TeamReport; 2],
    shot_value_sum: [f64; 2],
    pending: Option<PendingPass>,
    last_owner: Option<Team>,
}

impl ReportBuilder {
    pub(super) fn new(config: &MatchConfig) -> Self {
        let mut teams = [TeamReport::default(), TeamReport::default()];
        for t in Team::BOTH {
            teams[t.index()].policy = Some(config.team(t).policy);
        }
        ReportBuilder {
            seed: config.seed,
            cycles: config.cycles,
            physics: config.engine_config(),
            decision: [config.home.decision, config.away.decision],
            teams,
            shot_value_sum: [0.0; 2],
            pending: None,
            last_owner: None,
        }
    }

    fn on_target(&self, kick: &KickEvent, team: Team) -> bool {
        let pitch = &self.physics.pitch;
        let v = Vec2::from_polar(kick.power * self.physics.ball_kick_speed, kick.dir);
        let reach = v.norm() / (1.0 - self.physics.ball_decay);
        let frame = team.attacks();
        let line = pitch.goal_line_x(frame);
        if v.x * frame.sign() <= 0.0 {
            return false;
        }
        let t = (line - kick.ball_pos.x) / v.x;
        let y = kick.ball_pos.y + t * v.y;
        let travel = Vec2::new(line - kick.ball_pos.x, y - kick.ball_pos.y).norm();
        y.abs() <= pitch.goal_width() / 2.0 && travel <= reach
    }

    pub(super) fn observe(&mut self, rec: &TraceRecord) -> Result<(), HarnessError> {
        // possession changes, resolving any pass in flight
        if let Some(owner) = rec.possession {
            if let Some(p) = &self.pending {
                if owner != p.passer {
                    if owner.team == p.passer.team {
                        self.teams[owner.team.index()].pass_completions += 1;
                    }
                    self.pending = None;
                }
            }
            if self.last_owner.is_some_and(|t| t != owner.team) {
                self.teams[owner.team.index()].interceptions += 1;
            }
            self.last_owner = Some(owner.team);
        }

        for c in &rec.commands {
            if c.say.is_some() {
                let t = &mut self.teams[c.player.team.index()];
                t.messages_said += 1;
                t.messages_sent += (PLAYER_COUNT - 1) as u64;
            }
        }
        for m in &rec.messages {
            let t = &mut self.teams[m.message.sender.team.index()];
            t.messages_delivered += m.delivered.len() as u64;
            t.messages_believed += m.believed.len() as u64;
        }

        if let Some(kick) = &rec.kick {
            let team = kick.player.team;
            let rationale = rec
                .commands
                .iter()
                .find(|c| c.player == kick.player)
                .and_then(|c| c.rationale);
            // any new kick ends the previous pass
            if self
                .pending
                .as_ref()
                .is_some_and(|p| p.passer != kick.player)
            {
                self.pending = None;
            }
            match rationale {
                Some(Rationale::Shoot) => {
                    let shooter = rec
                        .players
                        .iter()
                        .find(|p| p.id == kick.player)
                        .map(|p| p.pos)
                        .unwrap_or(kick.ball_pos);
                    let opponents: Vec<Vec2> = rec
                        .players
                        .iter()
                        .filter(|p| p.id.team != team)
                        .map(|p| p.pos)
                        .collect();
                    let d = &self.decision[team.index()];
                    let ability = d
                        .ability()
                        .map_err(|e| HarnessError::Config(e.to_string()))?;
                    let ss = shooting_success_at(
                        shooter,
                        team.attacks(),
                        &self.physics.pitch,
                        ability,
                        &opponents,
                        d.xi_cutoff,
                    )?;
                    let on_target = self.on_target(kick, team);
                    let t = &mut self.teams[team.index()];
                    t.shots += 1;
                    t.shots_on_target += on_target as u32;
                    self.shot_value_sum[team.index()] += ss;
                    self.pending = None;
                }
                Some(Rationale::PassToBetter | Rationale::TacticPass) => {
                    self.teams[team.index()].pass_attempts += 1;
                    self.pending = Some(PendingPass {
                        passer: kick.player,
                    });
                }
                _ => self.pending = None,
            }
        }

        if let Some(scorer) = rec.goal {
            self.teams[scorer.index()].goals += 1;
            self.pending = None;
            self.last_owner = None;
        }
        Ok(())
    }

    pub(super) fn finish(mut self, score: Score) -> MatchReport {
        for t in Team::BOTH {
            let r = &mut self.teams[t.index()];
            r.mean_shot_value =
                (r.shots > 0).then(|| self.shot_value_sum[t.index()] / r.shots as f64);
        }
        let [home, away] = self.teams;
        MatchReport {
            seed: self.seed,
            cycles: self.cycles,
            score,
            home,
            away,
        }
    }
}
