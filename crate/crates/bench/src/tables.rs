//! Iteration-count benchmarks over random starting points.

use std::fmt;
use std::str::FromStr;

use cutter_core::{
    run_mcspa_with, run_with, CutterOperator, ParameterSchedule, ProblemSpec, RunConfig, Vector,
    Verdict,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{BenchError, Result};
use crate::names::Objective;

pub const DEFAULT_SEED: u64 = 1;
pub const DEFAULT_TRIALS: usize = 100;
pub const DEFAULT_MAX_ITERS: usize = 100_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RateKind {
    /// `1/(n+1)`
    InvN,
    /// `1/√(n+1)`
    InvSqrtN,
}

impl RateKind {
    pub fn name(self) -> &'static str {
        match self {
            RateKind::InvN => "inv_n",
            RateKind::InvSqrtN => "inv_sqrt_n",
        }
    }

    fn formula(self) -> &'static str {
        match self {
            RateKind::InvN => "1/(n+1)",
            RateKind::InvSqrtN => "1/sqrt(n+1)",
        }
    }

    pub fn schedule(self) -> ParameterSchedule {
        match self {
            RateKind::InvN => ParameterSchedule::inv_n(),
            RateKind::InvSqrtN => ParameterSchedule::inv_sqrt_n(),
        }
    }
}

impl FromStr for RateKind {
    type Err = BenchError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "inv_n" => Ok(RateKind::InvN),
            "inv_sqrt_n" => Ok(RateKind::InvSqrtN),
            _ => Err(BenchError::UnknownName {
                what: "schedule",
                value: s.to_string(),
            }),
        }
    }
}

/// One row of a benchmark table.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AlgorithmRow {
    /// Projected cutter method with `r_n` of the given kind and constant `η`.
    ProjectedCutter { r: RateKind, eta: f64 },
    /// MCSPA with `ε_n` of the given kind and `η ≡ 1`.
    Mcspa { eps: RateKind },
}

impl AlgorithmRow {
    pub fn algorithm(&self) -> &'static str {
        match self {
            AlgorithmRow::ProjectedCutter { .. } => "projected_cutter",
            AlgorithmRow::Mcspa { .. } => "mcspa",
        }
    }

    pub fn rate(&self) -> RateKind {
        match *self {
            AlgorithmRow::ProjectedCutter { r, .. } => r,
            AlgorithmRow::Mcspa { eps } => eps,
        }
    }

    pub fn eta(&self) -> f64 {
        match *self {
            AlgorithmRow::ProjectedCutter { eta, .. } => eta,
            AlgorithmRow::Mcspa { .. } => 1.0,
        }
    }

    /// Human-readable label such as `r=1/(n+1),eta=2`.
    pub fn label(&self) -> String {
        match self {
            AlgorithmRow::ProjectedCutter { r, eta } => {
                format!("r={},eta={}", r.formula(), crate::report::format_g6(*eta))
            }
            AlgorithmRow::Mcspa { eps } => format!("mcspa,eps={}", eps.formula()),
        }
    }

    /// The six standard rows, in table order.
    pub fn standard_rows() -> Vec<AlgorithmRow> {
        use RateKind::*;
        vec![
            AlgorithmRow::ProjectedCutter { r: InvN, eta: 1.0 },
            AlgorithmRow::ProjectedCutter { r: InvN, eta: 2.0 },
            AlgorithmRow::ProjectedCutter {
                r: InvSqrtN,
                eta: 1.0,
            },
            AlgorithmRow::ProjectedCutter {
                r: InvSqrtN,
                eta: 2.0,
            },
            AlgorithmRow::Mcspa { eps: InvN },
            AlgorithmRow::Mcspa { eps: InvSqrtN },
        ]
    }
}

impl fmt::Display for AlgorithmRow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StartDistribution {
    Uniform,
    LogUniform,
}

impl StartDistribution {
    pub fn name(self) -> &'static str {
        match self {
            StartDistribution::Uniform => "uniform",
            StartDistribution::LogUniform => "log_uniform",
        }
    }

    fn sample(self, lo: f64, hi: f64, u: f64) -> f64 {
        match self {
            StartDistribution::Uniform => lo + (hi - lo) * u,
            StartDistribution::LogUniform => lo * (hi / lo).powf(u),
        }
    }
}

impl FromStr for StartDistribution {
    type Err = BenchError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "uniform" => Ok(StartDistribution::Uniform),
            "log_uniform" => Ok(StartDistribution::LogUniform),
            _ => Err(BenchError::UnknownName {
                what: "distribution",
                value: s.to_string(),
            }),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TableSpec {
    pub objective: Objective,
    pub rows: Vec<AlgorithmRow>,
    pub trials: usize,
    pub start_range: (f64, f64),
    pub distribution: StartDistribution,
    pub seed: u64,
    pub feasibility_tol: f64,
    pub max_iters: usize,
}

impl TableSpec {
    /// All six rows, 100 log-uniform starts in `[1, 10⁶]`, seed 1, tol 1e-6.
    pub fn standard(objective: Objective) -> Self {
        Self {
            objective,
            rows: AlgorithmRow::standard_rows(),
            trials: DEFAULT_TRIALS,
            start_range: (1.0, 1e6),
            distribution: StartDistribution::LogUniform,
            seed: DEFAULT_SEED,
            feasibility_tol: 1e-6,
            max_iters: DEFAULT_MAX_ITERS,
        }
    }

    /// f(x) = x² − 1.
    pub fn table1() -> Self {
        Self::standard(Objective::X2m1)
    }

    /// f(x) = 100x² − 1.
    pub fn table2() -> Self {
        Self::standard(Objective::HundredX2m1)
    }

    pub fn validate(&self) -> Result<()> {
        let invalid = |m: &str| Err(BenchError::InvalidSpec(m.to_string()));
        let (lo, hi) = self.start_range;
        if self.trials == 0 {
            return invalid("trials must be at least 1");
        }
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return invalid("start range needs finite lo < hi");
        }
        if self.distribution == StartDistribution::LogUniform && lo <= 0.0 {
            return invalid("log_uniform starts need lo > 0");
        }
        if !(self.feasibility_tol >= 0.0) {
            return invalid("feasibility_tol must be >= 0");
        }
        if self.max_iters == 0 {
            return invalid("max_iters must be at least 1");
        }
        for row in &self.rows {
            let eta = row.eta();
            if !(eta > 0.0 && eta <= 2.0) {
                return invalid("row eta must lie in ]0, 2]");
            }
        }
        Ok(())
    }

    /// Starting points, one per trial. Trial `i` draws from stream `i` of a
    /// ChaCha8 generator seeded with `seed`, so every row sees the same starts.
    pub fn starts(&self) -> Vec<Vector> {
        let (lo, hi) = self.start_range;
        (0..self.trials)
            .map(|trial| {
                let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
                rng.set_stream(trial as u64);
                let magnitude = self.distribution.sample(lo, hi, rng.random::<f64>());
                match self.objective.dim() {
                    None | Some(1) => Vector::scalar(magnitude),
                    Some(d) => magnitude * &unit_direction(d, &mut rng),
                }
            })
            .collect()
    }
}

fn unit_direction<R: Rng>(d: usize, rng: &mut R) -> Vector {
    loop {
        let v: Vec<f64> = (0..d).map(|_| rng.random_range(-1.0..1.0)).collect();
        let norm2: f64 = v.iter().map(|c| c * c).sum();
        if norm2 > 1e-6 && norm2 <= 1.0 {
            let norm = norm2.sqrt();
            return Vector::new(v.into_iter().map(|c| c / norm).collect())
                .expect("finite direction");
        }
    }
}

/// Summary of one table row.
#[derive(Debug, Clone, PartialEq)]
pub struct StatsRow {
    pub row: AlgorithmRow,
    pub mean: f64,
    /// Lower-middle order statistic for an even trial count.
    pub median: usize,
    pub min: usize,
    pub max: usize,
    pub trials: usize,
}

impl StatsRow {
    pub fn from_counts(row: AlgorithmRow, counts: &[usize]) -> Option<Self> {
        if counts.is_empty() {
            return None;
        }
        let mut sorted = counts.to_vec();
        sorted.sort_unstable();
        let total: usize = sorted.iter().sum();
        Some(Self {
            row,
            mean: total as f64 / sorted.len() as f64,
            median: sorted[(sorted.len() - 1) / 2],
            min: sorted[0],
            max: sorted[sorted.len() - 1],
            trials: sorted.len(),
        })
    }
}

/// A row in which at least one trial did not converge.
#[derive(Debug, Clone, PartialEq)]
pub struct RowFailed {
    pub row: AlgorithmRow,
    pub failed_trials: usize,
    pub first_reason: String,
}

impl fmt::Display for RowFailed {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "row {} failed in {} trial(s): {}",
            self.row, self.failed_trials, self.first_reason
        )
    }
}

pub type RowOutcome = std::result::Result<StatsRow, RowFailed>;

/// Iteration count `n*` of a single run, or a description of why it failed.
pub fn trial_count(
    objective: Objective,
    row: AlgorithmRow,
    x0: &Vector,
    feasibility_tol: f64,
    max_iters: usize,
) -> std::result::Result<usize, String> {
    let f = objective.function();
    let config = RunConfig::new(max_iters, feasibility_tol);
    let eta = ParameterSchedule::constant(row.eta()).map_err(|e| e.to_string())?;
    let trace = match row {
        AlgorithmRow::ProjectedCutter { r, .. } => {
            let problem = ProblemSpec::unconstrained(
                CutterOperator::subgradient_projector(f),
                r.schedule(),
                eta,
                x0.clone(),
            )
            .map_err(|e| e.to_string())?;
            run_with(&problem, &config)
        }
        AlgorithmRow::Mcspa { eps } => run_mcspa_with(&f, x0, &eps.schedule(), &eta, &config),
    }
    .map_err(|e| e.to_string())?;
    match trace.verdict {
        Verdict::ConvergedAt(n) => Ok(n),
        Verdict::MaxItersReached => Err(format!("no convergence within {max_iters} iterations")),
        Verdict::Inconsistent => Err("inconsistent problem".to_string()),
    }
}

/// Runs one row over the given starts.
pub fn run_row(
    objective: Objective,
    row: AlgorithmRow,
    starts: &[Vector],
    feasibility_tol: f64,
    max_iters: usize,
) -> RowOutcome {
    let mut counts = Vec::with_capacity(starts.len());
    let mut failed = 0;
    let mut first_reason = None;
    for x0 in starts {
        match trial_count(objective, row, x0, feasibility_tol, max_iters) {
            Ok(n) => counts.push(n),
            Err(reason) => {
                failed += 1;
                first_reason.get_or_insert(reason);
            }
        }
    }
    match (failed, StatsRow::from_counts(row, &counts)) {
        (0, Some(stats)) => Ok(stats),
        _ => Err(RowFailed {
            row,
            failed_trials: failed,
            first_reason: first_reason.unwrap_or_else(|| "no starts".to_string()),
        }),
    }
}

/// Runs every row of `spec`. A failing row does not stop the others.
pub fn run_table(spec: &TableSpec) -> Result<Vec<RowOutcome>> {
    spec.validate()?;
    let starts = spec.starts();
    Ok(spec
        .rows
        .iter()
        .map(|&row| {
            run_row(
                spec.objective,
                row,
                &starts,
                spec.feasibility_tol,
                spec.max_iters,
            )
        })
        .collect())
}
