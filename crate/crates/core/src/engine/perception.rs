use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{Engine, EngineError, PlayerId, PlayerState, WorldState};
use crate::comms::HeardMessage;
use crate::geometry::Vec2;
use crate::rng::Purpose;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeenPlayer {
    pub id: PlayerId,
    pub pos: Vec2,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeenBall {
    pub pos: Vec2,
    pub vel: Vec2,
}

/// One player's noisy view of the world for a single cycle.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Percept {
    pub observer: PlayerId,
    pub cycle: u64,
    /// The observer's own state, exact.
    pub me: PlayerState,
    pub seen_players: Vec<SeenPlayer>,
    pub seen_ball: SeenBall,
    pub heard: Vec<HeardMessage>,
}

impl Percept {
    pub fn self_pos(&self) -> Vec2 {
        self.me.pos
    }

    pub fn teammates(&self) -> impl Iterator<Item = &SeenPlayer> {
        let team = self.observer.team;
        self.seen_players.iter().filter(move |p| p.id.team == team)
    }

    pub fn opponents(&self) -> impl Iterator<Item = &SeenPlayer> {
        let team = self.observer.team;
        self.seen_players.iter().filter(move |p| p.id.team != team)
    }

    pub fn seen(&self, id: PlayerId) -> Option<&SeenPlayer> {
        self.seen_players.iter().find(|p| p.id == id)
    }
}

fn jitter<R: Rng>(rng: &mut R, bound: f64) -> f64 {
    if bound > 0.0 {
        rng.random_range(-bound..=bound)
    } else {
        0.0
    }
}

impl Engine {
    /// Builds `observer`'s percept. Each coordinate of every other object is
    /// offset by uniform noise in `[-k d, k d]`, where `d` is the true distance
    /// and `k` the configured noise factor. Ball velocity noise per axis is
    /// bounded by `k min(|v|, d)`.
    pub fn perceive(&self, world: &WorldState, observer: PlayerId) -> Result<Percept, EngineError> {
        let me = *world
            .player(observer)
            .ok_or(EngineError::UnknownPlayer(observer))?;
        let k = if self.config.noise {
            self.config.noise_factor
        } else {
            0.0
        };
        let mut rng = self
            .seeds
            .rng(Purpose::Perception, world.cycle, observer.key(), 0);

        let seen_players = world
            .players
            .iter()
            .filter(|p| p.id != observer)
            .map(|p| {
                let b = k * me.pos.distance(p.pos);
                let noise = Vec2::new(jitter(&mut rng, b), jitter(&mut rng, b));
                SeenPlayer {
                    id: p.id,
                    pos: p.pos + noise,
                }
            })
            .collect();

        let ball = world.ball;
        let dist = me.pos.distance(ball.pos);
        let b = k * dist;
        let pos = ball.pos + Vec2::new(jitter(&mut rng, b), jitter(&mut rng, b));
        let bv = k * ball.vel.norm().min(dist);
        let vel = ball.vel + Vec2::new(jitter(&mut rng, bv), jitter(&mut rng, bv));

        let heard = world
            .delivered_to(observer)
            .map(|r| HeardMessage {
                message: r.message,
                distance: r.distance,
            })
            .collect();

        Ok(Percept {
            observer,
            cycle: world.cycle,
            me,
            seen_players,
            seen_ball: SeenBall { pos, vel },
            heard,
        })
    }
}
