use std::io::Write;

use serde::{Deserialize, Serialize};

use super::HarnessError;
use crate::comms::{DeliveryRecord, Message};
use crate::decision::Rationale;
use crate::engine::{BallState, Command, KickEvent, PlayerId, PlayerState, Score, Team};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TraceCommand {
    pub player: PlayerId,
    pub command: Command,
    pub say: Option<Message>,
    pub rationale: Option<Rationale>,
}

/// One message handed out this cycle. Every player other than the sender
/// was offered it; `delivered` lists who got it and `believed` the subset
/// whose reliability filter accepts it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceMessage {
    pub message: Message,
    pub delivered: Vec<PlayerId>,
    pub believed: Vec<PlayerId>,
}

/// Groups per-receiver delivery records by message, keeping order.
pub fn group_deliveries(records: &[DeliveryRecord]) -> Vec<TraceMessage> {
    let mut out: Vec<TraceMessage> = Vec::new();
    for r in records {
        if out.last().map(|m| m.message) != Some(r.message) {
            out.push(TraceMessage {
                message: r.message,
                delivered: Vec::new(),
                believed: Vec::new(),
            });
        }
        let m = out.last_mut().expect("pushed above");
        if r.delivered {
            m.delivered.push(r.receiver);
        }
        if r.believed {
            m.believed.push(r.receiver);
        }
    }
    out
}

/// One line of the trace: the state at the start of `cycle`, what every
/// player did, the messages handed out at the start of the cycle (said one
/// cycle earlier), and what the step produced.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceRecord {
    pub cycle: u64,
    pub score: Score,
    pub possession: Option<PlayerId>,
    pub ball: BallState,
    pub players: Vec<PlayerState>,
    pub commands: Vec<TraceCommand>,
    pub messages: Vec<TraceMessage>,
    pub kick: Option<KickEvent>,
    pub goal: Option<Team>,
}

pub trait TraceSink {
    fn record(&mut self, rec: &TraceRecord) -> Result<(), HarnessError>;

    fn finish(&mut self) -> Result<(), HarnessError> {
        Ok(())
    }
}

/// Discards everything.
#[derive(Debug, Default, Clone, Copy)]
pub struct NullSink;

impl TraceSink for NullSink {
    fn record(&mut self, _: &TraceRecord) -> Result<(), HarnessError> {
        Ok(())
    }
}

impl<F> TraceSink for F
where
    F: FnMut(&TraceRecord) -> Result<(), HarnessError>,
{
    fn record(&mut self, rec: &TraceRecord) -> Result<(), HarnessError> {
        self(rec)
    }
}

/// Writes one JSON object per line.
pub struct JsonlSink<W: Write> {
    out: W,
}

impl<W: Write> JsonlSink<W> {
    pub fn new(out: W) -> Self {
        JsonlSink { out }
    }

    pub fn into_inner(self) -> W {
        self.out
    }
}

impl<W: Write> TraceSink for JsonlSink<W> {
    fn record(&mut self, rec: &TraceRecord) -> Result<(), HarnessError> {
        serde_json::to_writer(&mut self.out, rec)?;
        self.out.write_all(b"\n").map_err(HarnessError::from_io)?;
        Ok(())
    }

    fn finish(&mut self) -> Result<(), HarnessError> {
        self.out.flush().map_err(HarnessError::from_io)
    }
}

/// Reads a trace written by [`JsonlSink`].
pub fn read_trace(text: &str) -> Result<Vec<TraceRecord>, HarnessError> {
    text.lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| serde_json::from_str(l).map_err(HarnessError::from))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deliveries_group_by_message() {
        let a = PlayerId::new(Team::Home, 2);
        let b = PlayerId::new(Team::Away, 5);
        let m1 = Message::signal(a, 3, 1);
        let m2 = Message::shoot_value(b, 3, 0.25).unwrap();
        let rec = |message, receiver, delivered, believed| DeliveryRecord {
            message,
            receiver,
            distance: 10.0,
            delivered,
            believed,
        };
        let grouped = group_deliveries(&[
            rec(m1, b, true, true),
            rec(m1, PlayerId::new(Team::Home, 9), true, false),
            rec(m1, PlayerId::new(Team::Home, 4), false, false),
            rec(m2, a, false, false),
        ]);
        assert_eq!(grouped.len(), 2);
        assert_eq!(grouped[0].delivered.len(), 2);
        assert_eq!(grouped[0].believed, vec![b]);
        assert!(grouped[1].delivered.is_empty());
    }
}
