use std::io::Write;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::HarnessError;
use crate::evaluation::{
    defensive, defensive_gradient_raw, shooting_success, AbilityParams, EvalPoint,
    InterferenceLevel,
};
use crate::geometry::{equal_angle_isoline, visual_angle, GoalFrame, PitchGeometry, Vec2};

/// Grid nodes this close to a post are left out; the visual angle is
/// undefined there.
const POST_EPS: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum HeatField {
    ShootingSuccess,
    Defensive,
    DefGradientMagnitude,
}

impl FromStr for HeatField {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let key: String = s
            .chars()
            .filter(|c| c.is_ascii_alphanumeric())
            .collect::<String>()
            .to_ascii_lowercase();
        match key.as_str() {
            "shootingsuccess" | "ss" => Ok(HeatField::ShootingSuccess),
            "defensive" | "def" => Ok(HeatField::Defensive),
            "defgradientmagnitude" | "defgrad" | "gradient" => Ok(HeatField::DefGradientMagnitude),
            _ => Err(HarnessError::Config(format!(
                "unknown field {s:?}; expected shooting-success, defensive or def-gradient-magnitude"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HeatmapParams {
    pub frame: GoalFrame,
    pub step: f64,
    pub xi: InterferenceLevel,
    pub ability: AbilityParams,
}

impl Default for HeatmapParams {
    fn default() -> Self {
        HeatmapParams {
            frame: GoalFrame::Right,
            step: 1.0,
            xi: InterferenceLevel(0),
            ability: AbilityParams::full(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HeatmapRow {
    pub x: f64,
    pub y: f64,
    pub value: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IsolineRow {
    pub alpha: f64,
    pub x: f64,
    pub y: f64,
    pub visual_angle: f64,
}

fn axis(half: f64, step: f64) -> Vec<f64> {
    let n = ((2.0 * half) / step + 1e-9).floor() as usize;
    (0..=n).map(|i| -half + i as f64 * step).collect()
}

/// Samples `field` on a grid over the whole pitch, x-major.
pub fn heatmap_rows(
    field: HeatField,
    pitch: &PitchGeometry,
    params: &HeatmapParams,
) -> Result<Vec<HeatmapRow>, HarnessError> {
    if !(params.step.is_finite() && params.step > 0.0) {
        return Err(HarnessError::Config(format!(
            "step must be positive, got {}",
            params.step
        )));
    }
    let (p1, p2) = pitch.goal_posts(params.frame);
    let ys = axis(pitch.half_width(), params.step);
    let mut rows = Vec::new();
    for x in axis(pitch.half_length(), params.step) {
        for &y in &ys {
            let p = Vec2::new(x, y);
            if p.distance(p1) < POST_EPS || p.distance(p2) < POST_EPS {
                continue;
            }
            let value = match field {
                HeatField::ShootingSuccess => shooting_success(
                    EvalPoint::at(p, params.frame, pitch)?,
                    params.ability,
                    params.xi,
                ),
                HeatField::Defensive => defensive(EvalPoint::at(p, params.frame, pitch)?),
                HeatField::DefGradientMagnitude => {
                    defensive_gradient_raw(p, params.frame, pitch)?.norm()
                }
            };
            rows.push(HeatmapRow { x, y, value });
        }
    }
    Ok(rows)
}

/// Points on each equal-angle arc that fall on the pitch.
pub fn isoline_rows(
    alphas: &[f64],
    pitch: &PitchGeometry,
    frame: GoalFrame,
    samples: usize,
) -> Result<Vec<IsolineRow>, HarnessError> {
    let posts = pitch.goal_posts(frame);
    let mut rows = Vec::new();
    for &alpha in alphas {
        let iso = equal_angle_isoline(alpha, posts)?;
        for p in iso.sample(samples) {
            if pitch.contains(p) {
                rows.push(IsolineRow {
                    alpha,
                    x: p.x,
                    y: p.y,
                    visual_angle: visual_angle(p, posts.0, posts.1)?,
                });
            }
        }
    }
    Ok(rows)
}

pub fn write_heatmap_csv<W: Write>(mut out: W, rows: &[HeatmapRow]) -> Result<(), HarnessError> {
    let io = HarnessError::from_io;
    writeln!(out, "x,y,value").map_err(io)?;
    for r in rows {
        writeln!(out, "{},{},{}", r.x, r.y, r.value).map_err(io)?;
    }
    out.flush().map_err(io)
}

pub fn write_isolines_csv<W: Write>(mut out: W, rows: &[IsolineRow]) -> Result<(), HarnessError> {
    let io = HarnessError::from_io;
    writeln!(out, "alpha,x,y,visual_angle").map_err(io)?;
    for r in rows {
        writeln!(out, "{},{},{},{}", r.alpha, r.x, r.y, r.visual_angle).map_err(io)?;
    }
    out.flush().map_err(io)
}
