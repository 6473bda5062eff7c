//! Parsing of objective, constraint and schedule identifiers used on the
//! command line and in config files.

use cutter_core::{ConvexFunction, ConvexSet, ParameterSchedule, QuasiProjector, Vector};

use crate::error::{BenchError, Result};

const INV_SQRT3: f64 = 0.577_350_269_189_625_8;

fn unknown(what: &'static str, value: &str) -> BenchError {
    BenchError::UnknownName {
        what,
        value: value.to_string(),
    }
}

fn number(what: &'static str, s: &str) -> Result<f64> {
    s.trim().parse::<f64>().map_err(|_| unknown(what, s))
}

/// Built-in objectives: `x2m1` (x² − 1), `100x2m1` (100x² − 1),
/// `ball_<d>` (‖x‖² − 1 in R^d), `x2` (x²) and `x2p1` (x² + 1).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Objective {
    X2m1,
    HundredX2m1,
    Ball(usize),
    Squared,
    SquaredPlusOne,
}

impl Objective {
    pub fn parse(s: &str) -> Result<Self> {
        match s.trim() {
            "x2m1" => Ok(Self::X2m1),
            "100x2m1" => Ok(Self::HundredX2m1),
            "x2" => Ok(Self::Squared),
            "x2p1" => Ok(Self::SquaredPlusOne),
            other => other
                .strip_prefix("ball_")
                .and_then(|d| d.parse::<usize>().ok())
                .filter(|&d| d >= 1)
                .map(Self::Ball)
                .ok_or_else(|| unknown("objective", s)),
        }
    }

    pub fn name(&self) -> String {
        match self {
            Self::X2m1 => "x2m1".into(),
            Self::HundredX2m1 => "100x2m1".into(),
            Self::Ball(d) => format!("ball_{d}"),
            Self::Squared => "x2".into(),
            Self::SquaredPlusOne => "x2p1".into(),
        }
    }

    /// Dimension fixed by the objective, if any.
    pub fn dim(&self) -> Option<usize> {
        match self {
            Self::Ball(d) => Some(*d),
            _ => None,
        }
    }

    pub fn function(&self) -> ConvexFunction {
        match self {
            Self::X2m1 => ConvexFunction::x2m1(),
            Self::HundredX2m1 => ConvexFunction::hundred_x2m1(),
            Self::Ball(_) => ConvexFunction::unit_ball_gauge(),
            Self::Squared => ConvexFunction::squared_norm(),
            Self::SquaredPlusOne => ConvexFunction::squared_norm_plus_one(),
        }
    }
}

/// Constraint identifiers: `whole`, `orthant`, `box:LO:HI`, `ball:R`
/// (centred at the origin) and `relaxed_orthant:LAMBDA` (the relaxed
/// projector onto the orthant with constant `λ ∈ [1, 2]`).
pub fn parse_constraint(s: &str, dim: usize) -> Result<QuasiProjector> {
    let parts: Vec<&str> = s.trim().split(':').collect();
    let q = match parts.as_slice() {
        ["whole"] => QuasiProjector::metric(ConvexSet::whole_space(dim)),
        ["orthant"] => QuasiProjector::metric(ConvexSet::nonneg_orthant(dim)),
        ["box", lo, hi] => {
            let lo = number("box bound", lo)?;
            let hi = number("box bound", hi)?;
            QuasiProjector::metric(ConvexSet::boxed(
                Vector::new(vec![lo; dim])?,
                Vector::new(vec![hi; dim])?,
            )?)
        }
        ["ball", r] => QuasiProjector::metric(ConvexSet::ball(
            Vector::zeros(dim),
            number("ball radius", r)?,
        )?),
        ["relaxed_orthant", l] => {
            let lambda = number("relaxation", l)?;
            QuasiProjector::relaxed_cone(ConvexSet::nonneg_orthant(dim), move |_| lambda)?
        }
        _ => return Err(unknown("constraint", s)),
    };
    Ok(q)
}

/// Schedule identifiers: `inv_n`, `inv_sqrt_n`, `power:P:SCALE`,
/// `constant:C`, `recurrence_4_1[:R_INIT]`, `adaptive_4_2`,
/// `schedule_4_3[:K0]` and `alternating_5_2`.
///
/// Without an explicit seed the recurrence starts from `x0 − 1` and the
/// oscillating schedule from `x0 − 1/√3`, as in the scenarios they come from.
pub fn parse_schedule(s: &str, x0: Option<&Vector>) -> Result<ParameterSchedule> {
    let parts: Vec<&str> = s.trim().split(':').collect();
    let first = || x0.map(|x| x[0]);
    let sched = match parts.as_slice() {
        ["inv_n"] => ParameterSchedule::inv_n(),
        ["inv_sqrt_n"] => ParameterSchedule::inv_sqrt_n(),
        ["power", p, scale] => {
            ParameterSchedule::power(number("exponent", p)?, number("scale", scale)?)?
        }
        ["constant", c] | ["const", c] => ParameterSchedule::constant(number("constant", c)?)?,
        ["recurrence_4_1", r] => ParameterSchedule::recurrence(number("r_init", r)?)?,
        ["recurrence_4_1"] => {
            let x = first().ok_or_else(|| unknown("schedule (needs x0)", s))?;
            ParameterSchedule::recurrence(x - 1.0)?
        }
        ["adaptive_4_2"] => ParameterSchedule::adaptive(),
        ["schedule_4_3", k] => ParameterSchedule::oscillating(number("k0", k)?)?,
        ["schedule_4_3"] => {
            let x = first().ok_or_else(|| unknown("schedule (needs x0)", s))?;
            ParameterSchedule::oscillating(x - INV_SQRT3)?
        }
        ["alternating_5_2"] => ParameterSchedule::alternating(),
        _ => return Err(unknown("schedule", s)),
    };
    Ok(sched)
}

/// Comma-separated vector components.
pub fn parse_vector(s: &str) -> Result<Vector> {
    let comps = s
        .split(',')
        .map(|c| number("vector component", c))
        .collect::<Result<Vec<f64>>>()?;
    Ok(Vector::new(comps)?)
}
