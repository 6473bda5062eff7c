//! Replays of three scalar examples in which one hypothesis of the finite
//! convergence results is dropped, each checked against its closed form.

use std::fmt;
use std::str::FromStr;

use cutter_core::{
    run_with, ConvexFunction, CutterOperator, IterationTrace, ParameterSchedule, ProblemSpec,
    RunConfig, Vector,
};

use crate::error::{BenchError, Result};

const INV_SQRT3: f64 = 0.577_350_269_189_625_8;

/// Tolerance of the `x_n = 1 + r_{n−1}` check.
pub const DIVERGENT_SERIES_TOL: f64 = 1e-12;
/// Tolerance of the `|x_n| = 1/√3 + k_n` check.
pub const EMPTY_FIXSET_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scenario {
    /// f = x² − 1, summable `r_n` from the quartic recurrence, x₀ = 2.
    DivergentSeries,
    /// f = x², adaptive `r_n`, x₀ = ½.
    EmptyInterior,
    /// f = x² + 1, oscillating `r_n` with k₀ = 1, x₀ = 1/√3 + 1.
    EmptyFixset,
}

impl Scenario {
    pub const ALL: [Scenario; 3] = [
        Scenario::DivergentSeries,
        Scenario::EmptyInterior,
        Scenario::EmptyFixset,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Scenario::DivergentSeries => "divergent_series",
            Scenario::EmptyInterior => "empty_interior",
            Scenario::EmptyFixset => "empty_fixset",
        }
    }
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Scenario {
    type Err = BenchError;

    fn from_str(s: &str) -> Result<Self> {
        Scenario::ALL
            .into_iter()
            .find(|sc| sc.name() == s)
            .ok_or_else(|| BenchError::UnknownScenario(s.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioReport {
    pub scenario: Scenario,
    pub horizon: usize,
    pub passed: bool,
    /// Largest deviation from the closed form. For `empty_interior` this is
    /// the largest amount by which `|x_n/2| < r_n` is violated (0 if never).
    pub max_deviation: f64,
    pub tolerance: f64,
    /// First index at which the assertion fails.
    pub first_failure: Option<usize>,
    pub detail: String,
}

impl fmt::Display for ScenarioReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} horizon={} {} max_deviation={:e}",
            self.scenario,
            self.horizon,
            if self.passed { "pass" } else { "FAIL" },
            self.max_deviation
        )?;
        if let Some(n) = self.first_failure {
            write!(f, " first_failure={n}")?;
        }
        if !self.detail.is_empty() {
            write!(f, " ({})", self.detail)?;
        }
        Ok(())
    }
}

fn run_fixed_horizon(
    f: ConvexFunction,
    r: ParameterSchedule,
    x0: f64,
    steps: usize,
) -> Result<IterationTrace> {
    let problem = ProblemSpec::unconstrained(
        CutterOperator::subgradient_projector(f),
        r,
        ParameterSchedule::constant(1.0)?,
        Vector::scalar(x0),
    )?;
    let config = RunConfig {
        max_iters: steps,
        feasibility_tol: 0.0,
        stop_when_feasible: false,
        full_window: steps,
        stride: 1,
    };
    run_with(&problem, &config).map_err(|failure| BenchError::Solver(failure.error))
}

/// Runs the named example for `horizon` steps and checks its closed form at
/// every index `0 ≤ n ≤ horizon`.
pub fn run_limiting_example(scenario: Scenario, horizon: usize) -> Result<ScenarioReport> {
    if horizon == 0 {
        return Err(BenchError::InvalidSpec("horizon must be at least 1".into()));
    }
    match scenario {
        Scenario::DivergentSeries => divergent_series(horizon),
        Scenario::EmptyInterior => empty_interior(horizon),
        Scenario::EmptyFixset => empty_fixset(horizon),
    }
}

fn divergent_series(horizon: usize) -> Result<ScenarioReport> {
    let x0 = 2.0;
    let trace = run_fixed_horizon(
        ConvexFunction::x2m1(),
        ParameterSchedule::recurrence(x0 - 1.0)?,
        x0,
        horizon,
    )?;
    let mut max_dev: f64 = 0.0;
    let mut first_failure = None;
    let mut first_absorbed = None;
    let mut r_prev = x0 - 1.0;
    for rec in &trace.records {
        let x = rec.x[0];
        let dev = (x - (1.0 + r_prev)).abs();
        max_dev = max_dev.max(dev);
        if !(dev <= DIVERGENT_SERIES_TOL) && first_failure.is_none() {
            first_failure = Some(rec.n);
        }
        if x <= 1.0 && first_absorbed.is_none() {
            first_absorbed = Some(rec.n);
        }
        if let Some(r) = rec.param {
            r_prev = r;
        }
    }
    let detail = match first_absorbed {
        Some(n) => format!("x_n rounds to 1 from n={n}"),
        None => String::new(),
    };
    Ok(ScenarioReport {
        scenario: Scenario::DivergentSeries,
        horizon,
        passed: first_failure.is_none(),
        max_deviation: max_dev,
        tolerance: DIVERGENT_SERIES_TOL,
        first_failure,
        detail,
    })
}

fn empty_interior(horizon: usize) -> Result<ScenarioReport> {
    // one extra step so that r_horizon is recorded
    let trace = run_fixed_horizon(
        ConvexFunction::squared_norm(),
        ParameterSchedule::adaptive(),
        0.5,
        horizon + 1,
    )?;
    let mut max_violation: f64 = 0.0;
    let mut first_failure = None;
    let mut doubled = 0;
    for rec in trace.records.iter().take(horizon + 1) {
        let half = (rec.x[0] / 2.0).abs();
        let r = rec.param.unwrap_or(f64::NAN);
        let w = 1.0 / ((rec.n + 1) as f64).sqrt();
        if r > w {
            doubled += 1;
        }
        let ok = half > 0.0 && half < r;
        if !ok {
            max_violation = max_violation.max(if half > 0.0 { half - r } else { r });
            first_failure.get_or_insert(rec.n);
        }
    }
    Ok(ScenarioReport {
        scenario: Scenario::EmptyInterior,
        horizon,
        passed: first_failure.is_none(),
        max_deviation: max_violation,
        tolerance: 0.0,
        first_failure,
        detail: format!("r_n doubled at {doubled} indices"),
    })
}

fn empty_fixset(horizon: usize) -> Result<ScenarioReport> {
    let k0 = 1.0;
    let trace = run_fixed_horizon(
        ConvexFunction::squared_norm_plus_one(),
        ParameterSchedule::oscillating(k0)?,
        INV_SQRT3 + k0,
        horizon,
    )?;
    let mut max_dev: f64 = 0.0;
    let mut first_failure = None;
    let mut sign_breaks = 0;
    let mut k = k0;
    for rec in &trace.records {
        let n = rec.n;
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        let x = rec.x[0];
        let dev = (sign * x - (INV_SQRT3 + k)).abs();
        let sign_ok = sign * x > 0.0;
        if !sign_ok {
            sign_breaks += 1;
        }
        max_dev = max_dev.max(if dev.is_nan() { f64::INFINITY } else { dev });
        if (!(dev <= EMPTY_FIXSET_TOL) || !sign_ok) && first_failure.is_none() {
            first_failure = Some(n);
        }
        k *= ((n + 1) as f64 / (n + 2) as f64).sqrt();
    }
    Ok(ScenarioReport {
        scenario: Scenario::EmptyFixset,
        horizon,
        passed: first_failure.is_none(),
        max_deviation: max_dev,
        tolerance: EMPTY_FIXSET_TOL,
        first_failure,
        detail: format!("sign alternation broken at {sign_breaks} indices"),
    })
}
