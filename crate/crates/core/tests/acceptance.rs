//! Acceptance suite. Runs every criterion at its pinned tolerance and
//! runtime budget, prints one line per criterion, and exits nonzero if any
//! fails.

use std::collections::HashSet;
use std::f64::consts::PI;
use std::fs;
use std::io::BufWriter;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use touchline::comms::Payload;
use touchline::decision::{intercept_point, PolicyKind};
use touchline::engine::{BallState, Engine, EngineConfig, PlayerId, Team, PLAYER_COUNT};
use touchline::evaluation::{
    believe, defensive, defensive_gradient_da, defensive_gradient_raw, shooting_success,
    AbilityParams, EvalPoint, InterferenceLevel,
};
use touchline::geometry::{equal_angle_isoline, visual_angle, GoalFrame, PitchGeometry, Vec2};
use touchline::harness::{
    run_match, HarnessError, JsonlSink, MatchConfig, MatchReport, TeamConfig, TraceRecord,
    TraceSink,
};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn rng(tag: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(0xACCE_0000 + tag)
}

fn within_budget(start: Instant, budget: Duration) -> Result<Duration, String> {
    let took = start.elapsed();
    if took > budget {
        return Err(format!("took {took:.2?}, budget {budget:.0?}"));
    }
    Ok(took)
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn ability(f: f64) -> AbilityParams {
    AbilityParams::new(f, 1.0).expect("0 <= f <= 1")
}

fn identities() -> Outcome {
    let start = Instant::now();
    let mut r = rng(1);
    for _ in 0..100 {
        let f = r.random_range(0.0..=1.0);
        let xi = InterferenceLevel(r.random_range(0..=10));
        let mouth = shooting_success(
            EvalPoint::new(0.0, PI).unwrap(),
            ability(f),
            InterferenceLevel(0),
        );
        let blind = shooting_success(EvalPoint::new(0.0, 0.0).unwrap(), ability(f), xi);
        ensure((mouth - 1.0).abs() <= 1e-12, || {
            format!("SS(0, pi, {f}, 0) = {mouth}")
        })?;
        ensure(blind.abs() <= 1e-12, || {
            format!("SS(0, 0, {f}, {}) = {blind}", xi.0)
        })?;
    }
    let took = within_budget(start, Duration::from_secs(1))?;
    Ok(format!("100 random (f, xi) exact to 1e-12 in {took:.2?}"))
}

fn range_and_monotonicity() -> Outcome {
    let start = Instant::now();
    let mut r = rng(2);
    for _ in 0..1_000_000 {
        let d = r.random_range(0.0..150.0);
        let alpha = r.random_range(1e-6..PI);
        let f = r.random_range(0.0..=1.0);
        let xi = r.random_range(0..=10u32);
        let pt = EvalPoint::new(d, alpha).unwrap();
        let ss = shooting_success(pt, ability(f), InterferenceLevel(xi));
        let def = defensive(pt);
        ensure((0.0..=1.0).contains(&ss), || {
            format!("SS {ss} at d={d} a={alpha}")
        })?;
        ensure((0.0..=1.0).contains(&def), || {
            format!("Def {def} at d={d} a={alpha}")
        })?;

        let further = EvalPoint::new(d + r.random_range(1e-3..10.0), alpha).unwrap();
        ensure(
            shooting_success(further, ability(f), InterferenceLevel(xi)) < ss,
            || format!("SS not decreasing in d at d={d} a={alpha}"),
        )?;
        ensure(defensive(further) < def, || {
            format!("Def not decreasing in d at d={d}")
        })?;
        ensure(
            shooting_success(pt, ability(f), InterferenceLevel(xi + 1)) < ss,
            || format!("SS not decreasing in xi at d={d} a={alpha}"),
        )?;
        let wider = EvalPoint::new(d, (alpha + r.random_range(1e-3..1.0)).min(PI)).unwrap();
        if wider.alpha() > alpha {
            ensure(
                shooting_success(wider, ability(f), InterferenceLevel(xi)) > ss,
                || format!("SS not increasing in alpha at d={d} a={alpha}"),
            )?;
            ensure(defensive(wider) > def, || {
                format!("Def not increasing in alpha at a={alpha}")
            })?;
        }
        let abler = (f + r.random_range(0.0..=1.0 - f)).min(1.0);
        ensure(
            shooting_success(pt, ability(abler), InterferenceLevel(xi)) >= ss,
            || format!("SS decreasing in f at f={f}"),
        )?;
    }
    let took = within_budget(start, Duration::from_secs(10))?;
    Ok(format!(
        "10^6 inputs in range, monotone in d, xi, alpha, f in {took:.2?}"
    ))
}

fn rel_err(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(1e-300)
}

fn gradients() -> Outcome {
    let start = Instant::now();
    let mut r = rng(3);
    let mut worst_da = 0.0f64;
    for _ in 0..10_000 {
        let d = r.random_range(0.0..120.0);
        let alpha = r.random_range(0.01..PI - 0.01);
        let pt = EvalPoint::new(d, alpha).unwrap();
        let (gd, ga) = defensive_gradient_da(pt);
        let k = 1.0 + d;
        // exact up to rounding: the two sides multiply in different orders
        let (want_d, want_a) = (-2.0 * alpha / (PI * k.powi(3)), 1.0 / (PI * k.powi(2)));
        ensure(
            rel_err(gd, want_d) <= 4.0 * f64::EPSILON && rel_err(ga, want_a) <= 4.0 * f64::EPSILON,
            || {
                format!("closed form mismatch at d={d} a={alpha}: ({gd:e}, {ga:e}) vs ({want_d:e}, {want_a:e})")
            },
        )?;
        let h = 1e-5;
        let dd = if d > h { d } else { h };
        let fd_d = (defensive(EvalPoint::new(dd + h, alpha).unwrap())
            - defensive(EvalPoint::new(dd - h, alpha).unwrap()))
            / (2.0 * h);
        let fd_a = (defensive(EvalPoint::new(d, alpha + h).unwrap())
            - defensive(EvalPoint::new(d, alpha - h).unwrap()))
            / (2.0 * h);
        let (gd_at, _) = defensive_gradient_da(EvalPoint::new(dd, alpha).unwrap());
        let e = rel_err(fd_d, gd_at).max(rel_err(fd_a, ga));
        worst_da = worst_da.max(e);
        ensure(e <= 1e-6, || {
            format!("d/alpha FD error {e:e} at d={d} a={alpha}")
        })?;
    }

    let pitch = PitchGeometry::default();
    let mut worst_pitch = 0.0f64;
    for _ in 0..10_000 {
        let frame = if r.random_bool(0.5) {
            GoalFrame::Right
        } else {
            GoalFrame::Left
        };
        let p = Vec2::new(
            r.random_range(-pitch.half_length() + 0.5..pitch.half_length() - 0.5),
            r.random_range(-pitch.half_width()..pitch.half_width()),
        );
        let (p1, p2) = pitch.goal_posts(frame);
        if p.distance(p1) < 0.5 || p.distance(p2) < 0.5 {
            continue;
        }
        let g = defensive_gradient_raw(p, frame, &pitch).unwrap();
        let field = |q: Vec2| defensive(EvalPoint::at(q, frame, &pitch).unwrap());
        let h = 1e-5;
        let fd = Vec2::new(
            (field(p + Vec2::new(h, 0.0)) - field(p - Vec2::new(h, 0.0))) / (2.0 * h),
            (field(p + Vec2::new(0.0, h)) - field(p - Vec2::new(0.0, h))) / (2.0 * h),
        );
        let e = (g - fd).norm() / g.norm().max(fd.norm()).max(1e-300);
        worst_pitch = worst_pitch.max(e);
        ensure(e <= 1e-5, || {
            format!("pitch gradient FD error {e:e} at {p:?}")
        })?;
    }
    let took = within_budget(start, Duration::from_secs(5))?;
    Ok(format!(
        "closed form within 4 ulp; worst FD error {worst_da:.1e} (d, alpha), {worst_pitch:.1e} (pitch) in {took:.2?}"
    ))
}

fn isolines() -> Outcome {
    let start = Instant::now();
    let pitch = PitchGeometry::default();
    let mut worst = 0.0f64;
    for frame in [GoalFrame::Right, GoalFrame::Left] {
        let posts = pitch.goal_posts(frame);
        for i in 1..=10 {
            let alpha = PI * i as f64 / 11.0;
            let iso = equal_angle_isoline(alpha, posts).map_err(|e| e.to_string())?;
            for p in iso.sample(1000) {
                let e = (visual_angle(p, posts.0, posts.1).unwrap() - alpha).abs();
                worst = worst.max(e);
                ensure(e <= 1e-9, || format!("alpha {alpha} off by {e:e} at {p:?}"))?;
                ensure(
                    (p.x - pitch.goal_line_x(frame)) * frame.sign() <= 1e-9,
                    || format!("arc point {p:?} behind the goal line"),
                )?;
            }
        }
    }
    let took = within_budget(start, Duration::from_secs(1))?;
    Ok(format!(
        "10 alphas x 1000 samples per goal, worst error {worst:.1e} in {took:.2?}"
    ))
}

fn noise_and_believe() -> Outcome {
    let start = Instant::now();
    let engine = Engine::with_defaults(EngineConfig::default(), 77).map_err(|e| e.to_string())?;
    let k = engine.config().noise_factor;
    let me = PlayerId::new(Team::Home, 3);
    let mut world = engine.kickoff_world();
    let mut r = rng(5);
    let slot = me.slot().unwrap();
    let pitch = engine.config().pitch;

    // fixed distance 100 to the ball
    world.players[slot].pos = Vec2::new(-50.0, -30.0);
    world.ball = BallState {
        pos: Vec2::new(30.0, 30.0),
        vel: Vec2::ZERO,
    };
    let mut max_far = 0.0f64;
    let mut samples = 0u64;
    for c in 0..50_000u64 {
        world.cycle = c;
        let p = engine.perceive(&world, me).map_err(|e| e.to_string())?;
        let err = p.seen_ball.pos - world.ball.pos;
        ensure(
            err.x.abs() <= k * 100.0 + 1e-9 && err.y.abs() <= k * 100.0 + 1e-9,
            || format!("ball error {err:?} at distance 100"),
        )?;
        max_far = max_far.max(err.x.abs()).max(err.y.abs());
        samples += 2;
    }
    ensure(max_far >= 0.09 * 100.0, || {
        format!("max error at distance 100 only {max_far}")
    })?;

    // random geometry, every seen object
    let mut c = 50_000u64;
    while samples < 200_000 {
        world.cycle = c;
        c += 1;
        world.players[slot].pos = Vec2::new(
            r.random_range(-pitch.half_length()..pitch.half_length()),
            r.random_range(-pitch.half_width()..pitch.half_width()),
        );
        let p = engine.perceive(&world, me).map_err(|e| e.to_string())?;
        for s in &p.seen_players {
            let truth = world.player(s.id).unwrap().pos;
            let bound = k * truth.distance(world.players[slot].pos) + 1e-9;
            let err = s.pos - truth;
            ensure(err.x.abs() <= bound && err.y.abs() <= bound, || {
                format!("player error {err:?} above {bound}")
            })?;
            samples += 1;
        }
    }

    let mut worst = 0.0f64;
    for i in 0..=400 {
        let d = 10f64.powf(-1.0 + i as f64 * 0.01);
        let prod = believe(d).unwrap() * d * d;
        worst = worst.max((prod - 1.0).abs());
        ensure((prod - 1.0).abs() <= 4.0 * f64::EPSILON, || {
            format!("believe({d}) d^2 = {prod}")
        })?;
    }
    let took = within_budget(start, Duration::from_secs(5))?;
    Ok(format!(
        "{samples} samples within 0.1 d, max {max_far:.3} at d = 100; believe d^2 within {worst:.1e} of 1 in {took:.2?}"
    ))
}

fn interception() -> Outcome {
    let start = Instant::now();
    let mut r = rng(6);
    let (speed, decay, margin, horizon) = (1.0, 0.94, 1.0, 50u32);
    let mut found = 0;
    for _ in 0..1000 {
        let ball = Vec2::new(r.random_range(-50.0..50.0), r.random_range(-34.0..34.0));
        let vel = Vec2::from_polar(r.random_range(0.0..2.7), r.random_range(0.0..2.0 * PI));
        let me = Vec2::new(r.random_range(-50.0..50.0), r.random_range(-34.0..34.0));
        let got = intercept_point(ball, vel, me, speed, decay, margin, horizon);
        // exhaustive scan over every cycle of the horizon
        let mut feasible = Vec::new();
        let (mut b, mut v) = (ball, vel);
        for t in 1..=horizon {
            b += v;
            v = v * decay;
            if me.distance(b) <= speed * t as f64 + margin {
                feasible.push((b, t));
            }
        }
        let want = feasible.first().copied();
        ensure(got.map(|g| g.1) == want.map(|w| w.1), || {
            format!("ball {ball:?} vel {vel:?} from {me:?}: got {got:?}, scan {want:?}")
        })?;
        if let (Some(g), Some(w)) = (got, want) {
            ensure((g.0 - w.0).norm() < 1e-9, || {
                format!("meet point {:?} vs {:?}", g.0, w.0)
            })?;
            found += 1;
        }
    }
    let took = within_budget(start, Duration::from_secs(5))?;
    Ok(format!(
        "1000 states match the exhaustive minimum ({found} reachable) in {took:.2?}"
    ))
}

fn co_monotonicity() -> Outcome {
    let start = Instant::now();
    let pitch = PitchGeometry::default();
    let frame = GoalFrame::Right;
    let ab = AbilityParams::full();
    let xi = InterferenceLevel(0);
    let h = 1e-6;
    let mut nodes = 0;
    let mut x = 0.0;
    while x <= pitch.half_length() + 1e-9 {
        let mut y = -pitch.half_width();
        while y <= pitch.half_width() + 1e-9 {
            let p = Vec2::new(x, y);
            let (p1, p2) = pitch.goal_posts(frame);
            if p.distance(p1) > 1e-9 && p.distance(p2) > 1e-9 {
                let pt = EvalPoint::at(p, frame, &pitch).unwrap();
                let (d, a) = (pt.d(), pt.alpha());
                if a > 0.01 {
                    let e = |d: f64, a: f64| EvalPoint::new(d, a.min(PI)).unwrap();
                    let dd = d.max(h);
                    let ss_d = shooting_success(e(dd + h, a), ab, xi)
                        - shooting_success(e(dd - h, a), ab, xi);
                    let df_d = defensive(e(dd + h, a)) - defensive(e(dd - h, a));
                    let aa = a.min(PI - h);
                    let ss_a = shooting_success(e(d, aa + h), ab, xi)
                        - shooting_success(e(d, aa - h), ab, xi);
                    let df_a = defensive(e(d, aa + h)) - defensive(e(d, aa - h));
                    ensure(ss_d.signum() == df_d.signum() && ss_d != 0.0, || {
                        format!("d-direction signs differ at {p:?}: {ss_d:e} vs {df_d:e}")
                    })?;
                    ensure(ss_a.signum() == df_a.signum() && ss_a != 0.0, || {
                        format!("alpha-direction signs differ at {p:?}: {ss_a:e} vs {df_a:e}")
                    })?;
                    nodes += 1;
                }
            }
            y += 1.0;
        }
        x += 1.0;
    }
    let took = within_budget(start, Duration::from_secs(5))?;
    Ok(format!(
        "{nodes} nodes of the attacking half agree in both directions in {took:.2?}"
    ))
}

fn determinism() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let cfg = MatchConfig {
        seed: 2024,
        cycles: 6000,
        ..MatchConfig::default()
    };
    let mut bytes = Vec::new();
    let mut times = Vec::new();
    for i in 0..2 {
        let path = dir.path().join(format!("trace{i}.jsonl"));
        let start = Instant::now();
        let file = fs::File::create(&path).map_err(|e| e.to_string())?;
        let mut sink = JsonlSink::new(BufWriter::new(file));
        run_match(&cfg, &mut sink).map_err(|e| e.to_string())?;
        drop(sink);
        times.push(within_budget(start, Duration::from_secs(30))?);
        bytes.push(fs::read(&path).map_err(|e| e.to_string())?);
    }
    ensure(bytes[0] == bytes[1], || "traces differ".into())?;
    let lines = bytes[0].iter().filter(|&&b| b == b'\n').count();
    ensure(lines == 6000, || format!("{lines} trace records"))?;
    Ok(format!(
        "two 6000-cycle traces byte-identical ({} bytes), {:.2?} and {:.2?}",
        bytes[0].len(),
        times[0],
        times[1]
    ))
}

/// Checks the channel and secrecy invariants on every record as it is
/// produced, so the criterion-9 matches never need their traces stored.
#[derive(Default)]
struct ChannelAudit {
    said_last_cycle: Vec<touchline::comms::Message>,
    records: u64,
    messages: u64,
    violation: Option<String>,
}

impl ChannelAudit {
    fn check(&mut self, rec: &TraceRecord) -> Result<(), String> {
        for m in &rec.messages {
            ensure(self.said_last_cycle.contains(&m.message), || {
                format!(
                    "cycle {}: delivery of a message nobody said: {:?}",
                    rec.cycle, m.message
                )
            })?;
            let delivered: HashSet<PlayerId> = m.delivered.iter().copied().collect();
            ensure(delivered.len() == m.delivered.len(), || {
                format!("cycle {}: duplicate receiver", rec.cycle)
            })?;
            ensure(m.delivered.len() < PLAYER_COUNT, || {
                format!("cycle {}: too many receivers", rec.cycle)
            })?;
            ensure(!delivered.contains(&m.message.sender), || {
                format!("cycle {}: sender received its own message", rec.cycle)
            })?;
            ensure(m.believed.iter().all(|b| delivered.contains(b)), || {
                format!("cycle {}: believed but not delivered", rec.cycle)
            })?;
        }
        for c in &rec.commands {
            if let Some(m) = &c.say {
                self.messages += 1;
                let json = serde_json::to_value(m.payload).map_err(|e| e.to_string())?;
                let text = json.to_string();
                ensure(!text.contains("\"x\"") && !text.contains("\"y\""), || {
                    format!("payload carries coordinates: {text}")
                })?;
                match m.payload {
                    Payload::ShootValue(v) => {
                        ensure((0.0..=1.0).contains(&v), || {
                            format!("shoot value {v} outside [0, 1]")
                        })?;
                        ensure(
                            json.get("ShootValue").is_some_and(|v| v.is_number()),
                            || format!("unexpected payload form {text}"),
                        )?;
                    }
                    Payload::Signal(_) => {
                        ensure(json.get("Signal").is_some_and(|v| v.is_u64()), || {
                            format!("unexpected payload form {text}")
                        })?;
                    }
                }
            }
        }
        self.said_last_cycle = rec.commands.iter().filter_map(|c| c.say).collect();
        self.records += 1;
        Ok(())
    }
}

impl TraceSink for ChannelAudit {
    fn record(&mut self, rec: &TraceRecord) -> Result<(), HarnessError> {
        if self.violation.is_none() {
            if let Err(e) = self.check(rec) {
                self.violation = Some(e);
            }
        }
        Ok(())
    }
}

struct Series {
    reports: Vec<MatchReport>,
    audit_records: u64,
    audit_messages: u64,
    violations: Vec<String>,
}

fn play_series(opponent: PolicyKind, seeds: &[u64]) -> Result<Series, String> {
    let cfg = MatchConfig {
        cycles: 6000,
        home: TeamConfig::new(PolicyKind::Model),
        away: TeamConfig::new(opponent),
        ..MatchConfig::default()
    };
    let threads = std::thread::available_parallelism()
        .map(|n| n.get())
        .unwrap_or(1);
    let chunks: Vec<&[u64]> = seeds.chunks(seeds.len().div_ceil(threads)).collect();
    let parts: Vec<Result<Vec<(MatchReport, ChannelAudit)>, String>> = std::thread::scope(|s| {
        let handles: Vec<_> = chunks
            .iter()
            .map(|chunk| {
                let cfg = &cfg;
                s.spawn(move || {
                    chunk
                        .iter()
                        .map(|&seed| {
                            let mut audit = ChannelAudit::default();
                            let report = run_match(
                                &MatchConfig {
                                    seed,
                                    ..cfg.clone()
                                },
                                &mut audit,
                            )
                            .map_err(|e| e.to_string())?;
                            Ok((report, audit))
                        })
                        .collect()
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("match thread"))
            .collect()
    });
    let mut series = Series {
        reports: Vec::new(),
        audit_records: 0,
        audit_messages: 0,
        violations: Vec::new(),
    };
    for part in parts {
        for (report, audit) in part? {
            series.audit_records += audit.records;
            series.audit_messages += audit.messages;
            if let Some(v) = audit.violation {
                series.violations.push(format!("seed {}: {v}", report.seed));
            }
            series.reports.push(report);
        }
    }
    Ok(series)
}

fn record(reports: &[MatchReport]) -> (i64, u32, u32, u32) {
    let (mut gd, mut w, mut d, mut l) = (0, 0, 0, 0);
    for r in reports {
        let g = r.goal_difference(Team::Home);
        gd += g;
        match g.signum() {
            1 => w += 1,
            0 => d += 1,
            _ => l += 1,
        }
    }
    (gd, w, d, l)
}

fn superiority_and_secrecy() -> (Outcome, Outcome) {
    let start = Instant::now();
    let seeds: Vec<u64> = (1..=50).collect();
    let played = play_series(PolicyKind::RandomWalk, &seeds)
        .and_then(|a| play_series(PolicyKind::StaticFormation, &seeds).map(|b| (a, b)));
    let (vs_random, vs_static) = match played {
        Ok(p) => p,
        Err(e) => return (Err(e.clone()), Err(e)),
    };
    let took = start.elapsed();

    let c9 = (|| {
        let (gd_r, w, d, l) = record(&vs_random.reports);
        let decided = w + l;
        let win_rate = if decided == 0 {
            0.0
        } else {
            w as f64 / decided as f64
        };
        let (gd_s, ws, ds, ls) = record(&vs_static.reports);
        let summary = format!(
            "vs RandomWalk W-D-L {w}-{d}-{l}, GD {gd_r:+}; vs StaticFormation W-D-L {ws}-{ds}-{ls}, GD {gd_s:+}; {took:.1?}"
        );
        ensure(gd_r > 0, || {
            format!("aggregate GD vs RandomWalk not positive: {summary}")
        })?;
        ensure(decided > 0 && win_rate >= 0.7, || {
            format!("win rate {win_rate:.2} below 0.70: {summary}")
        })?;
        ensure(gd_s >= 0, || {
            format!("aggregate GD vs StaticFormation negative: {summary}")
        })?;
        within_budget(start, Duration::from_secs(30 * 60))?;
        Ok(summary)
    })();

    let c10 = (|| {
        let mut violations = vs_random.violations.clone();
        violations.extend(vs_static.violations.iter().cloned());
        let records = vs_random.audit_records + vs_static.audit_records;
        let messages = vs_random.audit_messages + vs_static.audit_messages;
        ensure(violations.is_empty(), || {
            format!("{} traces violate: {}", violations.len(), violations[0])
        })?;
        ensure(records == 100 * 6000, || {
            format!("audited {records} records")
        })?;
        for r in vs_random.reports.iter().chain(&vs_static.reports) {
            for t in [&r.home, &r.away] {
                ensure(
                    t.messages_believed <= t.messages_delivered
                        && t.messages_delivered <= t.messages_sent,
                    || format!("seed {}: report counts out of order", r.seed),
                )?;
                ensure(t.pass_completions <= t.pass_attempts, || {
                    format!("seed {}: completions > attempts", r.seed)
                })?;
            }
        }
        Ok(format!("{records} records and {messages} messages audited, no coordinates, believed <= delivered <= sent"))
    })();
    (c9, c10)
}

fn main() {
    let quick: [Criterion; 8] = [
        ("identities", identities),
        ("range and monotonicity", range_and_monotonicity),
        ("gradients", gradients),
        ("isoline round trip", isolines),
        ("believe and noise bounds", noise_and_believe),
        ("interception optimality", interception),
        ("co-monotonicity", co_monotonicity),
        ("determinism", determinism),
    ];
    let mut results: Vec<(usize, &str, Outcome)> = quick
        .iter()
        .enumerate()
        .map(|(i, (name, f))| (i + 1, *name, f()))
        .collect();
    let (c9, c10) = superiority_and_secrecy();
    results.push((9, "behavioral superiority", c9));
    results.push((10, "secrecy and channel invariants", c10));

    let mut failed = 0;
    for (n, name, outcome) in &results {
        match outcome {
            Ok(detail) => println!("criterion {n:>2} {name}: PASS ({detail})"),
            Err(why) => {
                failed += 1;
                println!("criterion {n:>2} {name}: FAIL ({why})");
            }
        }
    }
    println!(
        "acceptance: {} of {} criteria passed",
        results.len() - failed,
        results.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
