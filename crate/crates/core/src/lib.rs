//! A deterministic 2D soccer simulator whose agents decide everything from
//! two geometric quantities: the perpendicular distance to a goal line and
//! the visual angle subtended by that goal's posts.

pub mod comms;
pub mod decision;
pub mod engine;
pub mod evaluation;
pub mod formation;
pub mod geometry;
pub mod harness;
pub mod rng;
