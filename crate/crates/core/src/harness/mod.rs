//! Runs matches, writes traces and reports, and exports evaluation fields.

mod config;
mod export;
mod report;
mod trace;

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use thiserror::Error;

use crate::decision::{decide_turn, AgentContext, AgentMemory, Codebook, CodebookError};
use crate::engine::{snapshot, Engine, EngineError, PlayerCommand, Team};
use crate::evaluation::EvalError;
use crate::formation::{build_formation, FormationError};
use crate::geometry::GeometryError;

pub use config::{MatchConfig, OutputPaths, TeamConfig};
pub use export::{
    heatmap_rows, isoline_rows, write_heatmap_csv, write_isolines_csv, HeatField, HeatmapParams,
    HeatmapRow, IsolineRow,
};
pub use report::{MatchReport, TeamReport};
pub use trace::{
    group_deliveries, read_trace, JsonlSink, NullSink, TraceCommand, TraceMessage, TraceRecord,
    TraceSink,
};

use report::ReportBuilder;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("{0}")]
    Io(String),
    #[error("invalid match configuration: {0}")]
    Config(String),
    #[error("cannot parse configuration: {0}")]
    Toml(#[from] toml::de::Error),
    #[error("trace encoding: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error(transparent)]
    Codebook(#[from] CodebookError),
    #[error(transparent)]
    Formation(#[from] FormationError),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

impl HarnessError {
    pub(crate) fn from_io(e: std::io::Error) -> Self {
        HarnessError::Io(e.to_string())
    }
}

/// Plays one match, feeding every cycle to `sink`.
pub fn run_match(
    config: &MatchConfig,
    sink: &mut dyn TraceSink,
) -> Result<MatchReport, HarnessError> {
    config.validate()?;
    let physics = config.engine_config();
    let pitch = physics.pitch;
    let home_f = build_formation(&config.home.formation, &pitch)?;
    let away_f = build_formation(&config.away.formation, &pitch)?;
    let engine = Engine::new(physics, config.seed, &home_f, &away_f)?;
    let sides = [
        home_f.for_side(Team::Home.attacks()),
        away_f.for_side(Team::Away.attacks()),
    ];
    let codebook = match &config.codebook {
        Some(path) => Codebook::load(path, &pitch)?,
        None => Codebook::bundled(&pitch)?,
    };

    let mut world = engine.kickoff_world();
    let mut memories = vec![AgentMemory::default(); world.players.len()];
    let mut report = ReportBuilder::new(config);

    for _ in 0..config.cycles {
        let snap = snapshot(&world);
        let mut commands = Vec::with_capacity(snap.players.len());
        let mut traced = Vec::with_capacity(snap.players.len());
        for (p, memory) in snap.players.iter().zip(memories.iter_mut()) {
            let team = config.team(p.id.team);
            let ctx = AgentContext {
                decision: &team.decision,
                physics: engine.config(),
                formation: &sides[p.id.team.index()],
                codebook: &codebook,
            };
            let percept = engine.perceive(&snap, p.id)?;
            let action = decide_turn(team.policy, &percept, &ctx, memory, engine.seeds());
            commands.push(PlayerCommand {
                player: p.id,
                command: action.command,
                say: action.say,
            });
            traced.push(TraceCommand {
                player: p.id,
                command: action.command,
                say: action.say,
                rationale: action.rationale,
            });
        }
        let outcome = engine.step(&snap, &commands)?;
        let rec = TraceRecord {
            cycle: snap.cycle,
            score: snap.score,
            possession: snap.possession,
            ball: snap.ball,
            players: snap.players.clone(),
            commands: traced,
            messages: group_deliveries(&snap.deliveries),
            kick: outcome.kick,
            goal: outcome.goal,
        };
        report.observe(&rec)?;
        sink.record(&rec)?;
        world = outcome.world;
    }
    sink.finish()?;
    Ok(report.finish(world.score))
}

/// Plays `config` once per seed on all available cores, without traces.
/// Results come back in seed order.
pub fn run_sweep(config: &MatchConfig, seeds: &[u64]) -> Vec<Result<MatchReport, HarnessError>> {
    let threads = std::thread::available_parallelism()
        .map(|n| n.get())
        .unwrap_or(1)
        .min(seeds.len().max(1));
    let next = AtomicUsize::new(0);
    let results: Mutex<Vec<Option<Result<MatchReport, HarnessError>>>> =
        Mutex::new((0..seeds.len()).map(|_| None).collect());
    std::thread::scope(|s| {
        for _ in 0..threads {
            s.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                let Some(&seed) = seeds.get(i) else { break };
                let cfg = MatchConfig {
                    seed,
                    ..config.clone()
                };
                let r = run_match(&cfg, &mut NullSink);
                results
                    .lock()
                    .expect("no worker panics while holding the lock")[i] = Some(r);
            });
        }
    });
    results
        .into_inner()
        .expect("workers finished")
        .into_iter()
        .map(|r| r.expect("every seed was played"))
        .collect()
}
