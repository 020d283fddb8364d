//! Grid formations and 8-connected action areas.
//!
//! The pitch is split into `cols` bands running from the team's own goal
//! (column 0) to the attacked goal, and `rows` lanes across the width.
//! Every outfield role owns one home cell; its action area is that cell plus
//! the up-to-eight cells around it. The goalkeeper sits outside the grid
//! with a fixed box in front of its goal.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::{GoalFrame, PitchGeometry, Vec2};

pub const DEFAULT_ROWS: u8 = 5;
pub const DEFAULT_COLS: u8 = 3;

/// Shapes that [`build_formation`] knows how to lay out.
pub const REGISTERED_FORMATIONS: &[&str] = &["4-4-2", "4-3-3", "3-5-2", "4-5-1"];

const KEEPER_BOX_DEPTH: f64 = 16.5;
const KEEPER_BOX_HALF_WIDTH: f64 = 20.16;
const KEEPER_HOME_DEPTH: f64 = 1.5;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormationError {
    #[error("unknown formation `{0}`")]
    UnknownFormation(String),
    #[error("role {0} is not part of this formation")]
    UnknownRole(Role),
    #[error("the goalkeeper has no grid action area")]
    KeeperOffGrid,
    #[error("grid {rows}x{cols} cannot hold formation `{name}`")]
    GridTooSmall { name: String, rows: u8, cols: u8 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Line {
    Back,
    Midfield,
    Forward,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Role {
    Goalkeeper,
    Outfield { line: Line, slot: u8 },
}

impl Role {
    pub fn line(self) -> Option<Line> {
        match self {
            Role::Goalkeeper => None,
            Role::Outfield { line, .. } => Some(line),
        }
    }

    pub fn is_keeper(self) -> bool {
        matches!(self, Role::Goalkeeper)
    }
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Role::Goalkeeper => write!(f, "GK"),
            Role::Outfield { line, slot } => {
                let tag = match line {
                    Line::Back => "DF",
                    Line::Midfield => "MF",
                    Line::Forward => "FW",
                };
                write!(f, "{tag}{slot}")
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Cell {
    pub row: u8,
    pub col: u8,
}

impl Cell {
    pub fn new(row: u8, col: u8) -> Self {
        Cell { row, col }
    }
}

/// Axis-aligned rectangle in pitch coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Rect {
    pub x_min: f64,
    pub x_max: f64,
    pub y_min: f64,
    pub y_max: f64,
}

impl Rect {
    pub fn contains(&self, p: Vec2) -> bool {
        (self.x_min..=self.x_max).contains(&p.x) && (self.y_min..=self.y_max).contains(&p.y)
    }

    pub fn center(&self) -> Vec2 {
        Vec2::new(
            0.5 * (self.x_min + self.x_max),
            0.5 * (self.y_min + self.y_max),
        )
    }
}

/// Cell lattice laid over the pitch in a team's frame.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub rows: u8,
    pub cols: u8,
    pub pitch: PitchGeometry,
    /// Goal the owning team attacks; column indices grow toward it.
    pub attacks: GoalFrame,
}

/// Index of the band containing `offset` (measured from the band origin),
/// assigning shared boundaries to the lower index.
fn band_index(offset: f64, size: f64, count: u8) -> u8 {
    let raw = (offset / size).ceil() - 1.0;
    raw.clamp(0.0, f64::from(count - 1)) as u8
}

impl Grid {
    fn col_width(&self) -> f64 {
        self.pitch.length() / f64::from(self.cols)
    }

    fn row_height(&self) -> f64 {
        self.pitch.width() / f64::from(self.rows)
    }

    /// x in the frame where the team attacks toward +x.
    fn team_x(&self, x: f64) -> f64 {
        x * self.attacks.sign()
    }

    pub fn contains_cell(&self, cell: Cell) -> bool {
        cell.row < self.rows && cell.col < self.cols
    }

    /// Cell containing `p`. Points on a shared boundary belong to the cell
    /// with the lower row index, then the lower column index; points off the
    /// pitch map to the nearest edge cell.
    pub fn cell_of(&self, p: Vec2) -> Cell {
        let tx = self.team_x(p.x) + self.pitch.half_length();
        let ty = p.y + self.pitch.half_width();
        Cell {
            row: band_index(ty, self.row_height(), self.rows),
            col: band_index(tx, self.col_width(), self.cols),
        }
    }

    pub fn cell_center(&self, cell: Cell) -> Vec2 {
        let tx = -self.pitch.half_length() + (f64::from(cell.col) + 0.5) * self.col_width();
        let y = -self.pitch.half_width() + (f64::from(cell.row) + 0.5) * self.row_height();
        Vec2::new(tx * self.attacks.sign(), y)
    }

    pub fn cell_rect(&self, cell: Cell) -> Rect {
        let c = self.cell_center(cell);
        let (hw, hh) = (0.5 * self.col_width(), 0.5 * self.row_height());
        Rect {
            x_min: c.x - hw,
            x_max: c.x + hw,
            y_min: c.y - hh,
            y_max: c.y + hh,
        }
    }

    /// `cell` and its 8-connected neighbours, clipped to the grid.
    pub fn neighbourhood(&self, cell: Cell) -> BTreeSet<Cell> {
        let mut out = BTreeSet::new();
        for dr in -1i16..=1 {
            for dc in -1i16..=1 {
                let r = i16::from(cell.row) + dr;
                let c = i16::from(cell.col) + dc;
                if (0..i16::from(self.rows)).contains(&r) && (0..i16::from(self.cols)).contains(&c)
                {
                    out.insert(Cell::new(r as u8, c as u8));
                }
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RoleSlot {
    pub role: Role,
    pub home_cell: Cell,
    pub home: Vec2,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Formation {
    pub name: String,
    pub grid: Grid,
    /// Outfield roles ordered back line first, then midfield, then forwards.
    pub slots: Vec<RoleSlot>,
    pub keeper_home: Vec2,
    pub keeper_area: Rect,
}

impl Formation {
    /// The same shape for a team attacking `attacks`.
    pub fn for_side(&self, attacks: GoalFrame) -> Formation {
        let grid = Grid {
            attacks,
            ..self.grid
        };
        let slots = self
            .slots
            .iter()
            .map(|s| RoleSlot {
                role: s.role,
                home_cell: s.home_cell,
                home: grid.cell_center(s.home_cell),
            })
            .collect();
        let (keeper_home, keeper_area) = keeper_layout(&grid.pitch, attacks);
        Formation {
            name: self.name.clone(),
            grid,
            slots,
            keeper_home,
            keeper_area,
        }
    }

    pub fn slot(&self, role: Role) -> Option<&RoleSlot> {
        self.slots.iter().find(|s| s.role == role)
    }

    pub fn home_of(&self, role: Role) -> Option<Vec2> {
        match role {
            Role::Goalkeeper => Some(self.keeper_home),
            _ => self.slot(role).map(|s| s.home),
        }
    }

    /// Roles by shirt number: shirt 1 keeps goal, shirts 2..=11 follow
    /// [`Formation::slots`].
    pub fn role_for_shirt(&self, shirt: u8) -> Option<Role> {
        match shirt {
            1 => Some(Role::Goalkeeper),
            2..=11 => self.slots.get(usize::from(shirt - 2)).map(|s| s.role),
            _ => None,
        }
    }

    /// Outfield counts per line, back to front.
    pub fn line_counts(&self) -> [usize; 3] {
        let count = |l: Line| {
            self.slots
                .iter()
                .filter(|s| s.role.line() == Some(l))
                .count()
        };
        [
            count(Line::Back),
            count(Line::Midfield),
            count(Line::Forward),
        ]
    }
}

fn keeper_layout(pitch: &PitchGeometry, attacks: GoalFrame) -> (Vec2, Rect) {
    let own = attacks.opposite();
    let gx = pitch.goal_line_x(own);
    let inward = -own.sign();
    let home = Vec2::new(gx + inward * KEEPER_HOME_DEPTH, 0.0);
    let far = gx + inward * KEEPER_BOX_DEPTH;
    let area = Rect {
        x_min: gx.min(far),
        x_max: gx.max(far),
        y_min: -KEEPER_BOX_HALF_WIDTH,
        y_max: KEEPER_BOX_HALF_WIDTH,
    };
    (home, area)
}

fn parse_shape(name: &str) -> Option<[u8; 3]> {
    if !REGISTERED_FORMATIONS.contains(&name) {
        return None;
    }
    let parts: Vec<u8> = name.split('-').filter_map(|p| p.parse().ok()).collect();
    match parts.as_slice() {
        &[b, m, f] => Some([b, m, f]),
        _ => None,
    }
}

/// Rows used by a line of `count` players spread across `rows` lanes.
fn spread_rows(count: u8, rows: u8) -> Vec<u8> {
    let step = f64::from(rows) / f64::from(count);
    (0..count)
        .map(|i| ((f64::from(i) + 0.5) * step - 0.5).round() as u8)
        .collect()
}

/// Builds a registered formation on the default 3-column by 5-row grid, for
/// a team attacking the right goal. Use [`Formation::for_side`] to mirror it.
pub fn build_formation(name: &str, pitch: &PitchGeometry) -> Result<Formation, FormationError> {
    build_formation_on_grid(name, pitch, DEFAULT_ROWS, DEFAULT_COLS)
}

pub fn build_formation_on_grid(
    name: &str,
    pitch: &PitchGeometry,
    rows: u8,
    cols: u8,
) -> Result<Formation, FormationError> {
    let shape =
        parse_shape(name).ok_or_else(|| FormationError::UnknownFormation(name.to_owned()))?;
    if cols < 3 || shape.iter().any(|&n| n > rows) {
        return Err(FormationError::GridTooSmall {
            name: name.to_owned(),
            rows,
            cols,
        });
    }
    let grid = Grid {
        rows,
        cols,
        pitch: *pitch,
        attacks: GoalFrame::Right,
    };
    let columns = [0, cols / 2, cols - 1];
    let lines = [Line::Back, Line::Midfield, Line::Forward];
    let mut slots = Vec::with_capacity(10);
    for ((&line, &count), &col) in lines.iter().zip(shape.iter()).zip(columns.iter()) {
        for (slot, row) in spread_rows(count, rows).into_iter().enumerate() {
            let home_cell = Cell::new(row, col);
            slots.push(RoleSlot {
                role: Role::Outfield {
                    line,
                    slot: slot as u8,
                },
                home_cell,
                home: grid.cell_center(home_cell),
            });
        }
    }
    let (keeper_home, keeper_area) = keeper_layout(pitch, GoalFrame::Right);
    Ok(Formation {
        name: name.to_owned(),
        grid,
        slots,
        keeper_home,
        keeper_area,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ActionArea {
    pub owner: Role,
    pub home: Cell,
    pub cells: BTreeSet<Cell>,
    pub grid: Grid,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum AreaZone {
    /// The role's home cell.
    Main,
    /// One of the home cell's 8-connected neighbours.
    Assistant,
    Outside,
}

pub fn action_area(formation: &Formation, role: Role) -> Result<ActionArea, FormationError> {
    if role.is_keeper() {
        return Err(FormationError::KeeperOffGrid);
    }
    let slot = formation
        .slot(role)
        .ok_or(FormationError::UnknownRole(role))?;
    Ok(ActionArea {
        owner: role,
        home: slot.home_cell,
        cells: formation.grid.neighbourhood(slot.home_cell),
        grid: formation.grid,
    })
}

pub fn area_contains(area: &ActionArea, p: Vec2) -> AreaZone {
    let cell = area.grid.cell_of(p);
    if cell == area.home {
        AreaZone::Main
    } else if area.cells.contains(&cell) {
        AreaZone::Assistant
    } else {
        AreaZone::Outside
    }
}
