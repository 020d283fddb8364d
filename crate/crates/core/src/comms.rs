//! One-way, lossy, distance-degraded "say" channel and the reliability
//! filter receivers apply to what they hear.
//!
//! A message reaches each other player independently with probability
//! `min(1, hear_range / dist)`. Payloads are never corrupted: unreliability
//! is loss only. Receivers then discard anything whose sender was farther
//! than their reliability threshold allows.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::engine::{PlayerId, Team, WorldState};
use crate::evaluation::believe_clamped;
use crate::rng::{Purpose, SeedStream};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CommsError {
    #[error("shoot value {0} outside [0, 1]")]
    ShootValue(f64),
    #[error("sender {0} is not on the pitch")]
    UnknownSender(PlayerId),
    #[error("invalid channel configuration: {0}")]
    Config(String),
}

/// Message content. Neither variant can carry a position.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Payload {
    ShootValue(f64),
    Signal(u8),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Message {
    pub sender: PlayerId,
    pub cycle: u64,
    pub payload: Payload,
}

impl Message {
    pub fn shoot_value(sender: PlayerId, cycle: u64, value: f64) -> Result<Self, CommsError> {
        if !(value.is_finite() && (0.0..=1.0).contains(&value)) {
            return Err(CommsError::ShootValue(value));
        }
        Ok(Message {
            sender,
            cycle,
            payload: Payload::ShootValue(value),
        })
    }

    pub fn signal(sender: PlayerId, cycle: u64, code: u8) -> Self {
        Message {
            sender,
            cycle,
            payload: Payload::Signal(code),
        }
    }

    pub fn validate(&self) -> Result<(), CommsError> {
        match self.payload {
            Payload::ShootValue(v) if !(v.is_finite() && (0.0..=1.0).contains(&v)) => {
                Err(CommsError::ShootValue(v))
            }
            _ => Ok(()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DeliveryRecord {
    pub message: Message,
    pub receiver: PlayerId,
    pub distance: f64,
    pub delivered: bool,
    pub believed: bool,
}

/// A message as it arrives at one receiver.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HeardMessage {
    pub message: Message,
    pub distance: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ChannelConfig {
    /// Distance up to which delivery is certain, in metres.
    pub hear_range: f64,
    /// Reliability threshold used for the `believed` audit flag, per team
    /// (home, away).
    pub believe_threshold: [f64; 2],
}

impl Default for ChannelConfig {
    fn default() -> Self {
        ChannelConfig {
            hear_range: 30.0,
            believe_threshold: [DEFAULT_BELIEVE_THRESHOLD; 2],
        }
    }
}

/// Trust radius of 50 m.
pub const DEFAULT_BELIEVE_THRESHOLD: f64 = 0.0004;

impl ChannelConfig {
    pub fn validate(&self) -> Result<(), CommsError> {
        if !(self.hear_range.is_finite() && self.hear_range > 0.0) {
            return Err(CommsError::Config(format!(
                "hear_range must be positive, got {}",
                self.hear_range
            )));
        }
        if self
            .believe_threshold
            .iter()
            .any(|t| !(t.is_finite() && *t > 0.0))
        {
            return Err(CommsError::Config(
                "believe thresholds must be positive".into(),
            ));
        }
        Ok(())
    }

    pub fn threshold_for(&self, team: Team) -> f64 {
        self.believe_threshold[team.index()]
    }

    pub fn delivery_probability(&self, dist: f64) -> f64 {
        if dist <= self.hear_range {
            1.0
        } else {
            self.hear_range / dist
        }
    }
}

/// Offers `msg` to every player except its sender.
///
/// Outcomes depend only on the seed, the message cycle and the
/// sender/receiver pair.
pub fn broadcast(
    msg: &Message,
    world: &WorldState,
    seeds: &SeedStream,
    channel: &ChannelConfig,
) -> Result<Vec<DeliveryRecord>, CommsError> {
    let sender = world
        .player(msg.sender)
        .ok_or(CommsError::UnknownSender(msg.sender))?;
    let records = world
        .players
        .iter()
        .filter(|p| p.id != msg.sender)
        .map(|p| {
            let distance = sender.pos.distance(p.pos);
            let draw = seeds.unit(Purpose::Delivery, msg.cycle, msg.sender.key(), p.id.key());
            let delivered = draw < channel.delivery_probability(distance);
            let believed =
                delivered && believe_clamped(distance) >= channel.threshold_for(p.id.team);
            DeliveryRecord {
                message: *msg,
                receiver: p.id,
                distance,
                delivered,
                believed,
            }
        })
        .collect();
    Ok(records)
}

/// Keeps, in order, the messages whose sender distance is trustworthy.
pub fn filter_believed(delivered: &[HeardMessage], threshold: f64) -> Vec<Message> {
    delivered
        .iter()
        .filter(|h| believe_clamped(h.distance) >= threshold)
        .map(|h| h.message)
        .collect()
}
