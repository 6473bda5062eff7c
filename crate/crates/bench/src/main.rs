// `!(a > b)` deliberately rejects NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::fmt::Display;
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};
use cutter_bench::{
    emit_csv, parse_constraint, parse_schedule, parse_vector, run_limiting_example, run_table,
    write_stats, write_trace, Config, Objective, Scenario, StartDistribution, TableSpec,
};
use cutter_core::{
    run_mcspa_with, run_with, CutterOperator, IterationTrace, ParameterSchedule, ProblemSpec,
    RunConfig, Vector, Verdict,
};

#[derive(Parser)]
#[command(
    name = "cutter",
    version,
    about = "Extrapolated cutter methods: single runs, benchmark tables, example replays"
)]
struct Cli {
    /// key=value file supplying any flag of the chosen subcommand
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one iteration and report its verdict
    Solve(SolveArgs),
    /// Iteration-count statistics over random starts
    Bench(BenchArgs),
    /// Replay a limiting example and check its closed form
    Scenario(ScenarioArgs),
}

#[derive(Args)]
struct SolveArgs {
    /// x2m1, 100x2m1, ball_<d>, x2 or x2p1
    #[arg(long)]
    objective: Option<String>,
    /// whole, orthant, box:LO:HI, ball:R or relaxed_orthant:LAMBDA [default: whole]
    #[arg(long)]
    constraint: Option<String>,
    /// r_n (or eps_n for mcspa): inv_n, inv_sqrt_n, power:P:S, constant:C,
    /// recurrence_4_1[:R], adaptive_4_2, schedule_4_3[:K0], alternating_5_2 [default: inv_n]
    #[arg(long)]
    r_schedule: Option<String>,
    /// constant relaxation or a schedule name [default: 1]
    #[arg(long)]
    eta: Option<String>,
    /// stop once f(x_n) <= tol [default: 1e-6]
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    max_iters: Option<usize>,
    /// comma-separated start point
    #[arg(long, allow_hyphen_values = true)]
    x0: Option<String>,
    /// write the trace as CSV
    #[arg(long)]
    trace_out: Option<PathBuf>,
    /// cutter or mcspa [default: cutter]
    #[arg(long)]
    method: Option<String>,
}

#[derive(Args)]
struct BenchArgs {
    /// 1, 2 or custom [default: 1]
    #[arg(long)]
    table: Option<String>,
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// uniform or log_uniform [default: log_uniform]
    #[arg(long)]
    distribution: Option<String>,
    /// CSV destination; stdout when omitted
    #[arg(long)]
    out: Option<PathBuf>,
    /// objective of a custom table [default: x2m1]
    #[arg(long)]
    objective: Option<String>,
    #[arg(long)]
    lo: Option<f64>,
    #[arg(long)]
    hi: Option<f64>,
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    max_iters: Option<usize>,
}

#[derive(Args)]
struct ScenarioArgs {
    /// divergent_series, empty_interior or empty_fixset
    #[arg(long)]
    name: Option<String>,
    /// steps to replay [default: 40, 10000 or 1000 by scenario]
    #[arg(long)]
    horizon: Option<usize>,
}

enum CliError {
    Usage(String),
    Failed(String),
}

fn usage(e: impl Display) -> CliError {
    CliError::Usage(e.to_string())
}

/// Flag values fall back to the config file.
struct Settings {
    config: Config,
}

impl Settings {
    fn new(path: Option<&PathBuf>, allowed: &[&str]) -> Result<Self, CliError> {
        let config = match path {
            Some(p) => Config::load(p).map_err(usage)?,
            None => Config::default(),
        };
        if let Some(bad) = config.keys().find(|k| !allowed.contains(k)) {
            return Err(usage(format!("unknown config key `{bad}`")));
        }
        Ok(Self { config })
    }

    fn string(&self, flag: Option<String>, key: &str) -> Option<String> {
        flag.or_else(|| self.config.get(key).map(str::to_string))
    }

    fn value<T>(&self, flag: Option<T>, key: &str) -> Result<Option<T>, CliError>
    where
        T: FromStr,
        T::Err: Display,
    {
        match flag {
            Some(v) => Ok(Some(v)),
            None => self
                .config
                .get(key)
                .map(|s| {
                    s.parse::<T>()
                        .map_err(|e| usage(format!("config `{key}`: {e}")))
                })
                .transpose(),
        }
    }
}

fn verdict_text(v: Verdict) -> String {
    match v {
        Verdict::ConvergedAt(n) => format!("converged_at {n}"),
        Verdict::MaxItersReached => "max_iters_reached".into(),
        Verdict::Inconsistent => "inconsistent".into(),
    }
}

fn eta_schedule(s: &str, x0: &Vector, open_upper: bool) -> Result<ParameterSchedule, CliError> {
    match s.parse::<f64>() {
        Ok(c) if !(c > 0.0 && (c < 2.0 || (c == 2.0 && !open_upper))) => {
            let range = if open_upper { "]0, 2[" } else { "]0, 2]" };
            Err(usage(format!("--eta {c} is outside {range}")))
        }
        Ok(c) => ParameterSchedule::constant(c).map_err(usage),
        Err(_) => parse_schedule(s, Some(x0)).map_err(usage),
    }
}

fn solve(args: SolveArgs, cfg: Option<&PathBuf>) -> Result<(), CliError> {
    let set = Settings::new(
        cfg,
        &[
            "objective",
            "constraint",
            "r_schedule",
            "eta",
            "tol",
            "max_iters",
            "x0",
            "trace_out",
            "method",
        ],
    )?;
    let objective = set
        .string(args.objective, "objective")
        .ok_or_else(|| usage("--objective is required"))?;
    let objective = Objective::parse(&objective).map_err(usage)?;
    let x0 = set
        .string(args.x0, "x0")
        .ok_or_else(|| usage("--x0 is required"))?;
    let x0 = parse_vector(&x0).map_err(usage)?;
    if let Some(d) = objective.dim() {
        if x0.dim() != d {
            return Err(usage(format!(
                "{} needs a start in R^{d}",
                objective.name()
            )));
        }
    }
    let r = parse_schedule(
        &set.string(args.r_schedule, "r_schedule")
            .unwrap_or("inv_n".into()),
        Some(&x0),
    )
    .map_err(usage)?;
    let config = RunConfig::new(
        set.value(args.max_iters, "max_iters")?.unwrap_or(100_000),
        set.value(args.tol, "tol")?.unwrap_or(1e-6),
    );
    let method = set.string(args.method, "method").unwrap_or("cutter".into());
    let eta = eta_schedule(
        &set.string(args.eta, "eta").unwrap_or("1".into()),
        &x0,
        method == "mcspa",
    )?;
    let f = objective.function();
    let result = match method.as_str() {
        "cutter" => {
            let constraint = parse_constraint(
                &set.string(args.constraint, "constraint")
                    .unwrap_or("whole".into()),
                x0.dim(),
            )
            .map_err(usage)?;
            let problem = ProblemSpec::new(
                CutterOperator::subgradient_projector(f.clone()),
                constraint,
                r,
                eta,
                x0,
            )
            .map_err(usage)?;
            run_with(&problem, &config)
        }
        "mcspa" => run_mcspa_with(&f, &x0, &r, &eta, &config),
        other => return Err(usage(format!("unknown method `{other}`"))),
    };
    let trace_out = set.string(args.trace_out.map(|p| p.display().to_string()), "trace_out");
    let (trace, error): (IterationTrace, Option<String>) = match result {
        Ok(t) => (t, None),
        Err(failure) => (failure.trace, Some(failure.error.to_string())),
    };
    if let Some(path) = trace_out {
        write_trace(&trace, &path).map_err(|e| CliError::Failed(e.to_string()))?;
    }
    if let Some(e) = error {
        return Err(CliError::Failed(format!("{e} after {} steps", trace.steps)));
    }
    let last = trace.last();
    println!("verdict: {}", verdict_text(trace.verdict));
    println!("steps: {}", trace.steps);
    let comps: Vec<String> = last.x.as_slice().iter().map(|c| format!("{c:e}")).collect();
    println!("x: {}", comps.join(","));
    println!("f: {:e}", f.value(&last.x));
    match trace.verdict {
        Verdict::ConvergedAt(_) => Ok(()),
        v => Err(CliError::Failed(verdict_text(v))),
    }
}

fn bench(args: BenchArgs, cfg: Option<&PathBuf>) -> Result<(), CliError> {
    let set = Settings::new(
        cfg,
        &[
            "table",
            "trials",
            "seed",
            "distribution",
            "out",
            "objective",
            "lo",
            "hi",
            "tol",
            "max_iters",
        ],
    )?;
    let table = set.string(args.table, "table").unwrap_or("1".into());
    let objective = set.string(args.objective, "objective");
    let mut spec = match table.as_str() {
        "1" => TableSpec::table1(),
        "2" => TableSpec::table2(),
        "custom" => {
            let name = objective.as_deref().unwrap_or("x2m1");
            TableSpec::standard(Objective::parse(name).map_err(usage)?)
        }
        other => {
            return Err(usage(format!(
                "unknown table `{other}` (expected 1, 2 or custom)"
            )))
        }
    };
    if table != "custom" && objective.is_some() {
        return Err(usage("--objective applies only to --table custom"));
    }
    if let Some(t) = set.value(args.trials, "trials")? {
        spec.trials = t;
    }
    if let Some(s) = set.value(args.seed, "seed")? {
        spec.seed = s;
    }
    if let Some(d) = set.string(args.distribution, "distribution") {
        spec.distribution = d.parse::<StartDistribution>().map_err(usage)?;
    }
    if let Some(lo) = set.value(args.lo, "lo")? {
        spec.start_range.0 = lo;
    }
    if let Some(hi) = set.value(args.hi, "hi")? {
        spec.start_range.1 = hi;
    }
    if let Some(tol) = set.value(args.tol, "tol")? {
        spec.feasibility_tol = tol;
    }
    if let Some(m) = set.value(args.max_iters, "max_iters")? {
        spec.max_iters = m;
    }
    let outcomes = run_table(&spec).map_err(usage)?;
    eprintln!(
        "# objective={} trials={} range=[{},{}] distribution={} seed={} tol={}",
        spec.objective.name(),
        spec.trials,
        spec.start_range.0,
        spec.start_range.1,
        spec.distribution.name(),
        spec.seed,
        spec.feasibility_tol
    );
    let mut rows = Vec::new();
    let mut failures = Vec::new();
    for outcome in outcomes {
        match outcome {
            Ok(row) => rows.push(row),
            Err(f) => failures.push(f.to_string()),
        }
    }
    let out = set.string(args.out.map(|p| p.display().to_string()), "out");
    match out {
        Some(path) => emit_csv(&rows, &path),
        None => write_stats(&rows, std::io::stdout().lock()),
    }
    .map_err(|e| CliError::Failed(e.to_string()))?;
    if failures.is_empty() {
        Ok(())
    } else {
        Err(CliError::Failed(failures.join("\n")))
    }
}

fn scenario(args: ScenarioArgs, cfg: Option<&PathBuf>) -> Result<(), CliError> {
    let set = Settings::new(cfg, &["name", "horizon"])?;
    let name = set
        .string(args.name, "name")
        .ok_or_else(|| usage("--name is required"))?;
    let scenario = name.parse::<Scenario>().map_err(usage)?;
    let horizon = set
        .value(args.horizon, "horizon")?
        .unwrap_or(match scenario {
            Scenario::DivergentSeries => 40,
            Scenario::EmptyInterior => 10_000,
            Scenario::EmptyFixset => 1_000,
        });
    let report = run_limiting_example(scenario, horizon).map_err(usage)?;
    println!("{report}");
    if report.passed {
        Ok(())
    } else {
        Err(CliError::Failed(format!("{scenario} failed")))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cfg = cli.config.as_ref();
    let result = match cli.command {
        Command::Solve(a) => solve(a, cfg),
        Command::Bench(a) => bench(a, cfg),
        Command::Scenario(a) => scenario(a, cfg),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Failed(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(CliError::Usage(msg)) => {
            eprintln!("usage error: {msg}");
            ExitCode::from(2)
        }
    }
}
