use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use touchline::decision::PolicyKind;
use touchline::engine::Team;
use touchline::evaluation::{AbilityParams, InterferenceLevel};
use touchline::geometry::GoalFrame;
use touchline::harness::{
    heatmap_rows, isoline_rows, run_match, run_sweep, write_heatmap_csv, write_isolines_csv,
    HeatField, HeatmapParams, JsonlSink, MatchConfig, MatchReport, NullSink, TraceSink,
};

#[derive(Parser)]
#[command(
    name = "touchline",
    version,
    about = "Seeded 2D soccer decision simulator"
)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Play one match.
    Run(RunArgs),
    /// Play the same match setup over a range of seeds.
    Sweep(SweepArgs),
    /// Sample an evaluation field over the pitch as CSV.
    Heatmap(HeatmapArgs),
    /// Sample equal-visual-angle arcs as CSV.
    Isolines(IsolineArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Policy {
    Model,
    RandomWalk,
    StaticFormation,
}

impl From<Policy> for PolicyKind {
    fn from(p: Policy) -> Self {
        match p {
            Policy::Model => PolicyKind::Model,
            Policy::RandomWalk => PolicyKind::RandomWalk,
            Policy::StaticFormation => PolicyKind::StaticFormation,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Side {
    Left,
    Right,
}

impl From<Side> for GoalFrame {
    fn from(s: Side) -> Self {
        match s {
            Side::Left => GoalFrame::Left,
            Side::Right => GoalFrame::Right,
        }
    }
}

/// Settings shared by `run` and `sweep`; flags override the config file.
#[derive(Args)]
struct MatchArgs {
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    cycles: Option<u64>,
    #[arg(long, value_enum)]
    home_policy: Option<Policy>,
    #[arg(long, value_enum)]
    away_policy: Option<Policy>,
    #[arg(long)]
    home_formation: Option<String>,
    #[arg(long)]
    away_formation: Option<String>,
    /// Turn perception noise off.
    #[arg(long)]
    no_noise: bool,
    #[arg(long)]
    codebook: Option<PathBuf>,
}

impl MatchArgs {
    fn load(&self) -> Result<MatchConfig> {
        let mut cfg = match &self.config {
            Some(path) => MatchConfig::load(path)?,
            None => MatchConfig::default(),
        };
        if let Some(c) = self.cycles {
            cfg.cycles = c;
        }
        if let Some(p) = self.home_policy {
            cfg.home.policy = p.into();
        }
        if let Some(p) = self.away_policy {
            cfg.away.policy = p.into();
        }
        if let Some(f) = &self.home_formation {
            cfg.home.formation = f.clone();
        }
        if let Some(f) = &self.away_formation {
            cfg.away.formation = f.clone();
        }
        if self.no_noise {
            cfg.noise = Some(false);
        }
        if let Some(b) = &self.codebook {
            cfg.codebook = Some(b.clone());
        }
        Ok(cfg)
    }
}

#[derive(Args)]
struct RunArgs {
    #[command(flatten)]
    setup: MatchArgs,
    /// Drawn from entropy and printed when neither this flag nor the config sets one.
    #[arg(long)]
    seed: Option<u64>,
    /// JSON-lines trace, one record per cycle.
    #[arg(long)]
    trace: Option<PathBuf>,
    /// JSON match report.
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    setup: MatchArgs,
    #[arg(long, default_value_t = 10)]
    matches: u64,
    #[arg(long, default_value_t = 1)]
    first_seed: u64,
    /// JSON array of match reports.
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Args)]
struct HeatmapArgs {
    /// shooting-success, defensive or def-gradient-magnitude.
    #[arg(long)]
    field: String,
    #[arg(long, default_value_t = 1.0)]
    step: f64,
    #[arg(long, default_value_t = 0)]
    xi: u32,
    #[arg(long, default_value_t = 1.0)]
    f: f64,
    #[arg(long, default_value_t = 1.0)]
    f_max: f64,
    /// Goal whose fields are sampled.
    #[arg(long, value_enum, default_value_t = Side::Right)]
    frame: Side,
    /// Standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct IsolineArgs {
    /// Comma-separated visual angles in radians.
    #[arg(long, value_delimiter = ',', num_args = 0..)]
    alphas: Vec<f64>,
    #[arg(long, value_enum, default_value_t = Side::Right)]
    frame: Side,
    /// Samples per arc before clipping to the pitch.
    #[arg(long, default_value_t = 200)]
    samples: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    let f = File::create(path).with_context(|| format!("cannot write {}", path.display()))?;
    Ok(BufWriter::new(f))
}

fn output(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(create(p)?),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn summary(r: &MatchReport) -> String {
    format!(
        "seed {}: home {} - {} away (shots {}/{}, passes {}/{} and {}/{})",
        r.seed,
        r.score.home,
        r.score.away,
        r.home.shots,
        r.away.shots,
        r.home.pass_completions,
        r.home.pass_attempts,
        r.away.pass_completions,
        r.away.pass_attempts,
    )
}

fn run(args: RunArgs) -> Result<()> {
    let mut cfg = args.setup.load()?;
    let explicit_seed = args.seed.is_some() || args.setup.config.is_some();
    if let Some(s) = args.seed {
        cfg.seed = s;
    } else if !explicit_seed {
        cfg.seed = rand::random();
        println!("seed {}", cfg.seed);
    }
    if let Some(t) = args.trace {
        cfg.output.trace = Some(t);
    }
    if let Some(r) = args.report {
        cfg.output.report = Some(r);
    }
    cfg.validate()?;
    // open outputs first so a bad path fails before the match is played
    let mut report_out = cfg.output.report.as_deref().map(create).transpose()?;
    let mut sink: Box<dyn TraceSink> = match &cfg.output.trace {
        Some(p) => Box::new(JsonlSink::new(create(p)?)),
        None => Box::new(NullSink),
    };
    let report = run_match(&cfg, sink.as_mut())?;
    if let Some(out) = report_out.as_mut() {
        serde_json::to_writer_pretty(&mut *out, &report)?;
        writeln!(out)?;
        out.flush()?;
    }
    println!("{}", summary(&report));
    Ok(())
}

fn sweep(args: SweepArgs) -> Result<()> {
    let cfg = args.setup.load()?;
    cfg.validate()?;
    if args.matches == 0 {
        bail!("--matches must be at least 1");
    }
    let mut report_out = args.report.as_deref().map(create).transpose()?;
    let seeds: Vec<u64> = (0..args.matches).map(|i| args.first_seed + i).collect();
    let reports = run_sweep(&cfg, &seeds)
        .into_iter()
        .collect::<Result<Vec<_>, _>>()?;
    let (mut wins, mut draws, mut losses, mut gd) = (0, 0, 0, 0i64);
    for r in &reports {
        println!("{}", summary(r));
        let d = r.goal_difference(Team::Home);
        gd += d;
        match d.signum() {
            1 => wins += 1,
            0 => draws += 1,
            _ => losses += 1,
        }
    }
    println!("home W-D-L {wins}-{draws}-{losses}, goal difference {gd:+}");
    if let Some(out) = report_out.as_mut() {
        serde_json::to_writer_pretty(&mut *out, &reports)?;
        writeln!(out)?;
        out.flush()?;
    }
    Ok(())
}

fn heatmap(args: HeatmapArgs) -> Result<()> {
    let field: HeatField = args.field.parse()?;
    let params = HeatmapParams {
        frame: args.frame.into(),
        step: args.step,
        xi: InterferenceLevel(args.xi),
        ability: AbilityParams::new(args.f, args.f_max)?,
    };
    let rows = heatmap_rows(field, &MatchConfig::default().engine.pitch, &params)?;
    write_heatmap_csv(output(args.out.as_deref())?, &rows)?;
    Ok(())
}

fn isolines(args: IsolineArgs) -> Result<()> {
    let pitch = MatchConfig::default().engine.pitch;
    let rows = isoline_rows(&args.alphas, &pitch, args.frame.into(), args.samples)?;
    write_isolines_csv(output(args.out.as_deref())?, &rows)?;
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Cmd::Run(a) => run(a),
        Cmd::Sweep(a) => sweep(a),
        Cmd::Heatmap(a) => heatmap(a),
        Cmd::Isolines(a) => isolines(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let line = format!("{e:#}").replace('\n', " ");
            eprintln!("touchline: {line}");
            ExitCode::FAILURE
        }
    }
}
