//! The projected cutter iteration and the modified cyclic subgradient
//! projection algorithm (MCSPA), with trace recording and Fejér monitoring.
//!
//! Projected cutter method, for `x_0 ∈ C`:
//!
//! ```text
//! x_{n+1} = Q_C(x_n + η_n (U_{r_n} x_n − x_n))   if x_n ∉ Fix T
//! x_{n+1} = x_n                                  otherwise
//! ```
//!
//! MCSPA, for a differentiable `f` and `C = X`:
//!
//! ```text
//! y_{n+1} = y_n − η_n (f(y_n) + ε_n)/‖∇f(y_n)‖² ∇f(y_n)   if f(y_n) > 0
//! ```
//!
//! The algorithmic branch uses the exact fixed-point test. The stopping rule
//! is separate: `f(x_n) ≤ feasibility_tol` for subgradient projectors,
//! otherwise `‖T x_n − x_n‖ ≤ feasibility_tol` together with `x_n ∈ C`.

use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::function::ConvexFunction;
use crate::operators::{ur_eta_apply, CutterOperator};
use crate::schedules::ParameterSchedule;
use crate::sets::{ConvexSet, QuasiProjector};
use crate::vector::Vector;

/// Distance slack for `x ∈ C` checks on starting points and trace points.
pub const CONSTRAINT_TOL: f64 = 1e-9;

/// The data of one projected cutter run.
#[derive(Debug, Clone)]
pub struct ProblemSpec {
    cutter: CutterOperator,
    constraint: QuasiProjector,
    r_schedule: ParameterSchedule,
    eta_schedule: ParameterSchedule,
    x0: Vector,
}

impl ProblemSpec {
    /// Validates `x_0 ∈ C` (within [`CONSTRAINT_TOL`]).
    pub fn new(
        cutter: CutterOperator,
        constraint: QuasiProjector,
        r_schedule: ParameterSchedule,
        eta_schedule: ParameterSchedule,
        x0: Vector,
    ) -> Result<Self> {
        x0.ensure_dim(constraint.set().dim())?;
        if !constraint.set().contains_within(&x0, CONSTRAINT_TOL) {
            return Err(Error::InvalidInput("x0 must lie in the constraint set"));
        }
        Ok(Self {
            cutter,
            constraint,
            r_schedule,
            eta_schedule,
            x0,
        })
    }

    /// `C = X`, `Q_C = Id`.
    pub fn unconstrained(
        cutter: CutterOperator,
        r_schedule: ParameterSchedule,
        eta_schedule: ParameterSchedule,
        x0: Vector,
    ) -> Result<Self> {
        let c = QuasiProjector::metric(ConvexSet::whole_space(x0.dim()));
        Self::new(cutter, c, r_schedule, eta_schedule, x0)
    }

    pub fn cutter(&self) -> &CutterOperator {
        &self.cutter
    }

    pub fn constraint(&self) -> &QuasiProjector {
        &self.constraint
    }

    pub fn r_schedule(&self) -> &ParameterSchedule {
        &self.r_schedule
    }

    pub fn eta_schedule(&self) -> &ParameterSchedule {
        &self.eta_schedule
    }

    pub fn x0(&self) -> &Vector {
        &self.x0
    }
}

/// One projected cutter step.
pub fn step(problem: &ProblemSpec, x: &Vector, r: f64, eta: f64) -> Result<Vector> {
    if !(eta > 0.0 && eta <= 2.0) {
        return Err(Error::InvalidParameter("relaxation eta must lie in ]0, 2]"));
    }
    if problem.cutter.is_fixed(x)? {
        return Ok(x.clone());
    }
    let moved = ur_eta_apply(&problem.cutter, r, eta, x)?;
    problem.constraint.apply(&moved)
}

/// Options for [`run_with`] and [`run_mcspa_with`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunConfig {
    pub max_iters: usize,
    pub feasibility_tol: f64,
    /// Stop at the first index passing the stopping test. When `false` the
    /// run continues to `max_iters` steps and records the tail.
    pub stop_when_feasible: bool,
    /// Every point with `n ≤ full_window` is stored.
    pub full_window: usize,
    /// Beyond the window only every `stride`-th point (and the last) is stored.
    pub stride: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            max_iters: 100_000,
            feasibility_tol: 1e-6,
            stop_when_feasible: true,
            full_window: 10_000,
            stride: 100,
        }
    }
}

impl RunConfig {
    pub fn new(max_iters: usize, feasibility_tol: f64) -> Self {
        Self {
            max_iters,
            feasibility_tol,
            ..Self::default()
        }
    }

    fn validate(&self) -> Result<()> {
        if self.max_iters == 0 {
            return Err(Error::InvalidParameter("max_iters must be at least 1"));
        }
        if !(self.feasibility_tol >= 0.0) {
            return Err(Error::InvalidParameter("feasibility_tol must be >= 0"));
        }
        if self.stride == 0 {
            return Err(Error::InvalidParameter("stride must be at least 1"));
        }
        Ok(())
    }

    fn keeps(&self, n: usize) -> bool {
        n <= self.full_window || n.is_multiple_of(self.stride)
    }
}

/// How a run ended.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    /// The stopping test first passed at this index.
    ConvergedAt(usize),
    MaxItersReached,
    Inconsistent,
}

/// What the first trace parameter column holds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParamKind {
    /// Extrapolation `r_n` of the projected cutter method.
    Radius,
    /// Perturbation `ε_n` of MCSPA.
    Epsilon,
}

/// One recorded iterate.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceRecord {
    pub n: usize,
    pub x: Vector,
    /// `r_n` (or `ε_n`) used to leave `x_n`; `None` for the final point.
    pub param: Option<f64>,
    /// `η_n` used to leave `x_n`; `None` for the final point.
    pub eta: Option<f64>,
    /// `f(x_n)` for function-based runs, `‖T x_n − x_n‖` otherwise.
    pub value: f64,
}

/// The recorded sequence of a run.
#[derive(Debug, Clone, PartialEq)]
pub struct IterationTrace {
    pub records: Vec<TraceRecord>,
    pub verdict: Verdict,
    /// Number of steps performed.
    pub steps: usize,
    pub param_kind: ParamKind,
}

impl IterationTrace {
    pub fn converged_at(&self) -> Option<usize> {
        match self.verdict {
            Verdict::ConvergedAt(n) => Some(n),
            _ => None,
        }
    }

    pub fn last(&self) -> &TraceRecord {
        self.records.last().expect("a trace holds at least x_0")
    }

    /// The stored point with index `n`.
    pub fn point(&self, n: usize) -> Option<&Vector> {
        self.records
            .binary_search_by_key(&n, |r| r.n)
            .ok()
            .map(|i| &self.records[i].x)
    }

    /// `(n, r_n or ε_n)` for every stored step.
    pub fn params(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.records
            .iter()
            .filter_map(|r| r.param.map(|p| (r.n, p)))
    }

    /// CSV rows `n,x_1..x_d,r|eps,eta,value`; empty cells for the missing
    /// parameters of the final point.
    pub fn write_csv<W: fmt::Write>(&self, out: &mut W) -> fmt::Result {
        let dim = self.records.first().map_or(0, |r| r.x.dim());
        out.write_str("n")?;
        for i in 0..dim {
            write!(out, ",x{i}")?;
        }
        let p = match self.param_kind {
            ParamKind::Radius => "r",
            ParamKind::Epsilon => "eps",
        };
        writeln!(out, ",{p},eta,value")?;
        for rec in &self.records {
            write!(out, "{}", rec.n)?;
            for c in rec.x.as_slice() {
                write!(out, ",{c:e}")?;
            }
            match rec.param {
                Some(v) => write!(out, ",{v:e}")?,
                None => out.write_str(",")?,
            }
            match rec.eta {
                Some(v) => write!(out, ",{v:e}")?,
                None => out.write_str(",")?,
            }
            writeln!(out, ",{:e}", rec.value)?;
        }
        Ok(())
    }
}

/// A run that stopped on an error, with everything recorded before it.
#[derive(Debug, Clone, PartialEq)]
pub struct Failure {
    pub error: Error,
    pub trace: IterationTrace,
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} after {} steps", self.error, self.trace.steps)
    }
}

impl core::error::Error for Failure {}

/// Runs the projected cutter method with default storage settings.
pub fn run(
    problem: &ProblemSpec,
    max_iters: usize,
    feasibility_tol: f64,
) -> core::result::Result<IterationTrace, Failure> {
    run_with(problem, &RunConfig::new(max_iters, feasibility_tol))
}

/// Shared driver for both iterations.
struct Driver<'a> {
    config: &'a RunConfig,
    records: Vec<TraceRecord>,
    first_feasible: Option<usize>,
    steps: usize,
    param_kind: ParamKind,
}

impl<'a> Driver<'a> {
    fn new(config: &'a RunConfig, param_kind: ParamKind) -> Self {
        Self {
            config,
            records: Vec::new(),
            first_feasible: None,
            steps: 0,
            param_kind,
        }
    }

    fn trace(self, verdict: Verdict) -> IterationTrace {
        IterationTrace {
            records: self.records,
            verdict,
            steps: self.steps,
            param_kind: self.param_kind,
        }
    }

    fn fail(mut self, n: usize, x: &Vector, value: f64, error: Error) -> Failure {
        if self.records.last().map(|r| r.n) != Some(n) {
            self.records.push(TraceRecord {
                n,
                x: x.clone(),
                param: None,
                eta: None,
                value,
            });
        }
        let verdict = match error {
            Error::InconsistentProblem { .. } => Verdict::Inconsistent,
            _ => Verdict::MaxItersReached,
        };
        Failure {
            error,
            trace: self.trace(verdict),
        }
    }

    /// Iterates `advance` from `x0`. `measure` returns the recorded value and
    /// whether the stopping test passes; `advance` returns the parameters
    /// used and the next point.
    fn drive(
        mut self,
        x0: Vector,
        mut measure: impl FnMut(&Vector) -> Result<(f64, bool)>,
        mut advance: impl FnMut(&Vector) -> Result<(f64, f64, Vector)>,
    ) -> core::result::Result<IterationTrace, Failure> {
        let mut x = x0;
        let mut n = 0;
        loop {
            let (value, feasible) = match measure(&x) {
                Ok(m) => m,
                Err(e) => return Err(self.fail(n, &x, f64::NAN, e)),
            };
            if feasible && self.first_feasible.is_none() {
                self.first_feasible = Some(n);
            }
            let done = (feasible && self.config.stop_when_feasible) || n == self.config.max_iters;
            if done {
                self.records.push(TraceRecord {
                    n,
                    x,
                    param: None,
                    eta: None,
                    value,
                });
                break;
            }
            let (param, eta, next) = match advance(&x) {
                Ok(s) => s,
                Err(e) => return Err(self.fail(n, &x, value, e)),
            };
            if self.config.keeps(n) {
                self.records.push(TraceRecord {
                    n,
                    x,
                    param: Some(param),
                    eta: Some(eta),
                    value,
                });
            }
            x = next;
            n += 1;
            self.steps += 1;
        }
        let verdict = match self.first_feasible {
            Some(k) => Verdict::ConvergedAt(k),
            None => Verdict::MaxItersReached,
        };
        Ok(self.trace(verdict))
    }
}

/// Runs the projected cutter method.
pub fn run_with(
    problem: &ProblemSpec,
    config: &RunConfig,
) -> core::result::Result<IterationTrace, Failure> {
    let driver = Driver::new(config, ParamKind::Radius);
    if let Err(e) = config.validate() {
        return Err(driver.fail(0, &problem.x0, f64::NAN, e));
    }
    let mut r_schedule = problem.r_schedule.clone();
    let mut eta_schedule = problem.eta_schedule.clone();
    r_schedule.reset();
    eta_schedule.reset();
    let cutter = &problem.cutter;
    let set = problem.constraint.set();
    let tol = config.feasibility_tol;

    let measure = |x: &Vector| -> Result<(f64, bool)> {
        match cutter.function() {
            Some(f) => {
                let v = f.value(x);
                if v.is_nan() {
                    return Err(Error::NonFiniteResult);
                }
                Ok((v, v <= tol))
            }
            None => {
                let res = cutter.residual(x)?;
                Ok((res, res <= tol && set.contains(x)))
            }
        }
    };
    let advance = |x: &Vector| -> Result<(f64, f64, Vector)> {
        let r = r_schedule.next_value(Some((x, cutter)))?;
        let eta = eta_schedule.next_value(Some((x, cutter)))?;
        let next = step(problem, x, r, eta)?;
        Ok((r, eta, next))
    };
    driver.drive(problem.x0.clone(), measure, advance)
}

/// Runs MCSPA with default storage settings. Requires `0 < η_n < 2`.
pub fn run_mcspa(
    f: &ConvexFunction,
    x0: &Vector,
    eps_schedule: &ParameterSchedule,
    eta_schedule: &ParameterSchedule,
    max_iters: usize,
    feasibility_tol: f64,
) -> core::result::Result<IterationTrace, Failure> {
    run_mcspa_with(
        f,
        x0,
        eps_schedule,
        eta_schedule,
        &RunConfig::new(max_iters, feasibility_tol),
    )
}

/// Runs MCSPA; `ε_n` is recorded in the parameter column.
pub fn run_mcspa_with(
    f: &ConvexFunction,
    x0: &Vector,
    eps_schedule: &ParameterSchedule,
    eta_schedule: &ParameterSchedule,
    config: &RunConfig,
) -> core::result::Result<IterationTrace, Failure> {
    let driver = Driver::new(config, ParamKind::Epsilon);
    if let Err(e) = config.validate() {
        return Err(driver.fail(0, x0, f64::NAN, e));
    }
    let mut eps_schedule = eps_schedule.clone();
    let mut eta_schedule = eta_schedule.clone();
    eps_schedule.reset();
    eta_schedule.reset();
    let tol = config.feasibility_tol;

    let measure = |x: &Vector| -> Result<(f64, bool)> {
        let v = f.value(x);
        if v.is_nan() {
            return Err(Error::NonFiniteResult);
        }
        Ok((v, v <= tol))
    };
    let advance = |y: &Vector| -> Result<(f64, f64, Vector)> {
        let eps = eps_schedule.next_value(None)?;
        let eta = eta_schedule.next_value(None)?;
        if !(eta > 0.0 && eta < 2.0) {
            return Err(Error::InvalidParameter("MCSPA needs eta in ]0, 2["));
        }
        if !(eps > 0.0) {
            return Err(Error::InvalidParameter("MCSPA needs eps > 0"));
        }
        let value = f.value(y);
        if !(value > 0.0) {
            return Ok((eps, eta, y.clone()));
        }
        let g = f.subgradient(y);
        g.ensure_dim(y.dim())?;
        let g2 = g.norm_squared();
        if g2 == 0.0 {
            return Err(Error::InconsistentProblem { value });
        }
        let next = y.axpy(-eta * (value + eps) / g2, &g).checked()?;
        Ok((eps, eta, next))
    };
    driver.drive(x0.clone(), measure, advance)
}

/// Result of [`fejer_violations`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FejerReport {
    pub count: usize,
    pub first_violation: Option<usize>,
}

/// Counts indices `n ≥ start_index` with `‖x_{n+1} − y‖ > ‖x_n − y‖ + 1e-9`
/// among consecutive stored points.
pub fn fejer_violations(trace: &IterationTrace, y: &Vector, start_index: usize) -> FejerReport {
    let mut report = FejerReport {
        count: 0,
        first_violation: None,
    };
    for w in trace.records.windows(2) {
        let (a, b) = (&w[0], &w[1]);
        if a.n < start_index || b.n != a.n + 1 {
            continue;
        }
        if b.x.distance(y) > a.x.distance(y) + 1e-9 {
            report.count += 1;
            report.first_violation.get_or_insert(a.n);
        }
    }
    report
}
