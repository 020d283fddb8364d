use std::fmt;
use std::ops::Deref;
use std::str::FromStr;
use std::sync::Arc;

use serde::{de, Deserialize, Deserializer, Serialize, Serializer};

use crate::comms::{DeliveryRecord, Message};
use crate::formation::Role;
use crate::geometry::{GoalFrame, Vec2};

pub const PLAYERS_PER_TEAM: usize = 11;
pub const PLAYER_COUNT: usize = 2 * PLAYERS_PER_TEAM;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Team {
    Home,
    Away,
}

impl Team {
    pub const BOTH: [Team; 2] = [Team::Home, Team::Away];

    pub fn index(self) -> usize {
        match self {
            Team::Home => 0,
            Team::Away => 1,
        }
    }

    pub fn opponent(self) -> Team {
        match self {
            Team::Home => Team::Away,
            Team::Away => Team::Home,
        }
    }

    /// Home attacks the right goal, away the left.
    pub fn attacks(self) -> GoalFrame {
        match self {
            Team::Home => GoalFrame::Right,
            Team::Away => GoalFrame::Left,
        }
    }

    pub fn defends(self) -> GoalFrame {
        self.attacks().opposite()
    }
}

/// Serialized as its display form, e.g. `"H7"` or `"A11"`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PlayerId {
    pub team: Team,
    pub shirt: u8,
}

impl PlayerId {
    pub const fn new(team: Team, shirt: u8) -> Self {
        PlayerId { team, shirt }
    }

    pub fn is_valid(self) -> bool {
        (1..=PLAYERS_PER_TEAM as u8).contains(&self.shirt)
    }

    /// Position of this player in [`WorldState::players`].
    pub fn slot(self) -> Option<usize> {
        self.is_valid()
            .then(|| self.team.index() * PLAYERS_PER_TEAM + usize::from(self.shirt) - 1)
    }

    /// Stable integer used to key random streams.
    pub fn key(self) -> u64 {
        (self.team.index() as u64) << 8 | u64::from(self.shirt)
    }
}

impl FromStr for PlayerId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let team = match s.chars().next() {
            Some('H') => Team::Home,
            Some('A') => Team::Away,
            _ => return Err(format!("bad player id {s:?}")),
        };
        let shirt: u8 = s[1..].parse().map_err(|_| format!("bad player id {s:?}"))?;
        let id = PlayerId::new(team, shirt);
        if id.is_valid() {
            Ok(id)
        } else {
            Err(format!("shirt out of range in {s:?}"))
        }
    }
}

impl Serialize for PlayerId {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for PlayerId {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(de::Error::custom)
    }
}

impl fmt::Display for PlayerId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let t = match self.team {
            Team::Home => 'H',
            Team::Away => 'A',
        };
        write!(f, "{t}{}", self.shirt)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PlayerState {
    pub id: PlayerId,
    pub pos: Vec2,
    /// Metres per cycle.
    pub vel: Vec2,
    pub facing: f64,
    pub role: Role,
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct BallState {
    pub pos: Vec2,
    pub vel: Vec2,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Score {
    pub home: u32,
    pub away: u32,
}

impl Score {
    pub fn of(&self, team: Team) -> u32 {
        match team {
            Team::Home => self.home,
            Team::Away => self.away,
        }
    }

    pub fn credit(&mut self, team: Team) {
        match team {
            Team::Home => self.home += 1,
            Team::Away => self.away += 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WorldState {
    pub cycle: u64,
    /// Home shirts 1..=11 followed by away shirts 1..=11.
    pub players: Vec<PlayerState>,
    pub ball: BallState,
    pub score: Score,
    pub possession: Option<PlayerId>,
    /// Channel outcomes for messages said last cycle, handed out this cycle.
    pub deliveries: Vec<DeliveryRecord>,
}

impl WorldState {
    pub fn player(&self, id: PlayerId) -> Option<&PlayerState> {
        id.slot()
            .and_then(|i| self.players.get(i))
            .filter(|p| p.id == id)
    }

    pub fn team(&self, team: Team) -> impl Iterator<Item = &PlayerState> {
        self.players.iter().filter(move |p| p.id.team == team)
    }

    /// Messages handed to `receiver` this cycle.
    pub fn delivered_to(&self, receiver: PlayerId) -> impl Iterator<Item = &DeliveryRecord> {
        self.deliveries
            .iter()
            .filter(move |r| r.receiver == receiver && r.delivered)
    }

    /// Distinct messages whose deliveries are recorded this cycle.
    pub fn sent_messages(&self) -> Vec<Message> {
        let mut out: Vec<Message> = Vec::new();
        for r in &self.deliveries {
            if out.last() != Some(&r.message) {
                out.push(r.message);
            }
        }
        out
    }
}

/// Read-only copy of the world handed to every decider within a cycle.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Snapshot(Arc<WorldState>);

impl Snapshot {
    pub fn world(&self) -> &WorldState {
        &self.0
    }
}

impl Deref for Snapshot {
    type Target = WorldState;
    fn deref(&self) -> &WorldState {
        &self.0
    }
}

pub fn snapshot(world: &WorldState) -> Snapshot {
    Snapshot(Arc::new(world.clone()))
}
