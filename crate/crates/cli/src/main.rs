mod args;
mod format;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::process::ExitCode;
use std::time::Instant;

use biaslab::analytic::{EulerEngine, EulerValue};
use biaslab::empirical::{decompose, moment_grid_with, MomentParams, MomentReport};
use biaslab::zeros::scan::{page_conductor_limit, page_window};
use biaslab::zeros::{exceptional_scan, ExceptionalScenario};
use clap::Parser;

use args::{Cli, Command, CompareArgs, DecomposeArgs, MomentArgs, ScenarioSpec, ZeroScanArgs};
use format::{sig10, write_csv, PredictionRow};

#[derive(Debug)]
enum Failure {
    Usage(String),
    Io(String),
    Domain(biaslab::Error),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 2,
            Failure::Io(_) => 3,
            Failure::Domain(_) => 4,
        }
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Usage(m) => write!(f, "usage error: {m}"),
            Failure::Io(m) => write!(f, "i/o error: {m}"),
            Failure::Domain(e) => write!(f, "{e}"),
        }
    }
}

impl From<biaslab::Error> for Failure {
    fn from(e: biaslab::Error) -> Self {
        Failure::Domain(e)
    }
}

type Outcome<T> = Result<T, Failure>;

struct Context<'a> {
    engine: &'a EulerEngine,
    max_x: f64,
}

impl Context<'_> {
    fn check_x(&self, x: f64) -> Outcome<()> {
        if !(x.is_finite() && x >= 2.0) {
            return Err(Failure::Usage(format!("--x must be a finite number >= 2, got {x}")));
        }
        if x > self.max_x {
            return Err(Failure::Usage(format!("--x {x} exceeds the limit {} (set BIASLAB_MAX_X to raise it)", self.max_x)));
        }
        Ok(())
    }
}

fn scenario(spec: Option<ScenarioSpec>) -> Outcome<Option<ExceptionalScenario>> {
    spec.map(ScenarioSpec::build).transpose().map_err(Failure::from)
}

fn stdout_line(line: std::fmt::Arguments) -> Outcome<()> {
    writeln!(io::stdout(), "{line}").map_err(|e| Failure::Io(e.to_string()))
}

macro_rules! out {
    ($($t:tt)*) => { stdout_line(format_args!($($t)*))? };
}

fn moment(ctx: &Context, args: MomentArgs) -> Outcome<()> {
    let p = &args.point;
    ctx.check_x(p.x)?;
    let s = scenario(args.scenario)?;
    let report = moment_grid_with(ctx.engine, p.x, p.a, &[p.n], s.as_ref())?.remove(0);
    print_report(&report)
}

fn print_report(r: &MomentReport) -> Outcome<()> {
    out!("x           {}", sig10(r.params.x()));
    out!("N           {}", sig10(r.params.n()));
    out!("a           {}", r.params.a());
    out!("raw         {}", sig10(r.raw));
    out!("normalized  {}", sig10(r.normalized));
    out!("mu          {}", sig10(r.predicted_mu));
    out!("secondary   {}", sig10(r.secondary));
    out!("predicted   {}", sig10(r.predicted_mu + r.secondary));
    out!("deviation   {}", sig10(r.deviation));
    Ok(())
}

fn row(r: &MomentReport, runtime_ms: u64) -> PredictionRow {
    PredictionRow {
        n: r.params.n(),
        mu: r.predicted_mu,
        secondary: r.secondary,
        empirical_normalized: r.normalized,
        deviation: r.deviation,
        runtime_ms,
    }
}

fn compare(ctx: &Context, args: CompareArgs) -> Outcome<()> {
    ctx.check_x(args.x)?;
    let ns = &args.grid.0;
    if let Some(n) = ns.iter().find(|&&n| n > args.x) {
        return Err(Failure::Usage(format!("grid value N = {n} exceeds x = {}", args.x)));
    }
    let s = scenario(args.scenario)?;
    let rows: Vec<PredictionRow> = if args.timing {
        ns.iter()
            .map(|&n| {
                let start = Instant::now();
                let r = moment_grid_with(ctx.engine, args.x, args.a, &[n], s.as_ref())?.remove(0);
                Ok(row(&r, start.elapsed().as_millis() as u64))
            })
            .collect::<Outcome<_>>()?
    } else {
        moment_grid_with(ctx.engine, args.x, args.a, ns, s.as_ref())?.iter().map(|r| row(r, 0)).collect()
    };
    let result = match &args.out {
        Some(path) => {
            let file = File::create(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
            write_csv(BufWriter::new(file), &rows)
        }
        None => write_csv(io::stdout().lock(), &rows),
    };
    result.map_err(|e| Failure::Io(e.to_string()))
}

fn decomposition(ctx: &Context, args: DecomposeArgs) -> Outcome<()> {
    let p = &args.point;
    ctx.check_x(p.x)?;
    let s = scenario(args.scenario)?;
    let params = MomentParams::new(p.x, p.n, p.a)?;
    let d = decompose(&params, s.as_ref(), args.delta)?;
    out!("U         {}", (p.x.powf(0.5 + args.delta)).floor());
    for (name, v) in [("T1", d.t1), ("T2", d.t2), ("T3", d.t3), ("T4", d.t4), ("T5", d.t5), ("M1Z", d.m1z)] {
        out!("{name:<9} {}", sig10(v));
    }
    out!("residual  {}", sig10(d.residual));
    Ok(())
}

fn zero_scan(ctx: &Context, args: ZeroScanArgs) -> Outcome<()> {
    ctx.check_x(args.x)?;
    if !(args.b > 0.0) {
        return Err(Failure::Usage(format!("--b must be positive, got {}", args.b)));
    }
    let lo = page_window(args.x, args.b).max(0.75);
    let limit = page_conductor_limit(args.x).min(args.qmax as f64);
    out!("window     [{}, 1)", sig10(lo));
    out!("conductors |d| <= {}", limit.floor());
    match exceptional_scan(args.x, args.qmax, args.b)? {
        None => out!("no exceptional character found"),
        Some(s) => out!("exceptional character d = {}, beta = {}", s.character().discriminant(), sig10(s.beta())),
    }
    Ok(())
}

fn constants(ctx: &Context) -> Outcome<()> {
    let e = ctx.engine;
    let show = |name: &str, v: EulerValue| stdout_line(format_args!("{name:<6} {}  (truncation <= {:.1e})", sig10(v.value), v.truncation_bound));
    out!("prime cutoff {}", e.cutoff());
    show("C0", e.c0())?;
    show("C_1,1", e.c_aq(1, 1)?)?;
    show("D_1,1", e.d_aq(1, 1)?)?;
    Ok(())
}

fn run(cli: Cli) -> Outcome<()> {
    if let Some(threads) = cli.threads {
        if threads == 0 {
            return Err(Failure::Usage("--threads must be at least 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .map_err(|e| Failure::Usage(e.to_string()))?;
    }
    let owned;
    let engine = match cli.cutoff {
        Some(c) => {
            owned = EulerEngine::new(c).map_err(|e| Failure::Usage(e.to_string()))?;
            &owned
        }
        None => EulerEngine::shared(),
    };
    let ctx = Context { engine, max_x: cli.max_x };
    match cli.command {
        Command::Moment(a) => moment(&ctx, a),
        Command::Compare(a) => compare(&ctx, a),
        Command::Decompose(a) => decomposition(&ctx, a),
        Command::ZeroScan(a) => zero_scan(&ctx, a),
        Command::Constants => constants(&ctx),
    }
}

fn main() -> ExitCode {
    let cli = Cli::try_parse().unwrap_or_else(|e| e.exit());
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("biaslab: {f}");
            ExitCode::from(f.code())
        }
    }
}
