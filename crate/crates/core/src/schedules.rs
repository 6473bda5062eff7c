//! Parameter sequences `(r_n)`, `(η_n)` and `(ε_n)`.
//!
//! Schedules are stateful iterators. Most ignore the solver; the adaptive
//! schedule of the empty-interior scenario inspects `U_{w_n} x_n` and
//! therefore takes the current iterate and cutter as context.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::operators::{ur_apply, CutterOperator};
use crate::vector::Vector;

const INV_SQRT3: f64 = 0.577_350_269_189_625_8;

/// Relative threshold for the test `U_{w_n} x_n = 0` in the adaptive schedule.
pub const ADAPTIVE_ZERO_RTOL: f64 = 1e-12;

/// The family a [`ParameterSchedule`] belongs to.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ScheduleKind {
    /// `scale · (n + 1)^(−exponent)`.
    Power { exponent: f64, scale: f64 },
    /// A constant value.
    Constant(f64),
    /// `r_n = r_{n−1}² / (4(1 + r_{n−1}))` from `r_{−1} = r_init`.
    /// Summable: `r_n ≤ r_init / 4^(n+1)`.
    Recurrence { r_init: f64 },
    /// `w_n = (n + 1)^(−1/2)`; `r_n = 2w_n` if `U_{w_n} x_n = 0`, else `w_n`.
    Adaptive,
    /// `k_{n+1} = √((n+1)/(n+2)) k_n` and
    /// `r_n = ½(√3 + 2k_{n+1} + k_n − 1/(k_n + 1/√3))`.
    Oscillating { k0: f64 },
    /// `1/(n+1)` for even `n`, `n^(−1/2)` for odd `n`.
    Alternating,
}

/// A stateful parameter sequence. Every emitted value is strictly positive.
#[derive(Debug, Clone, PartialEq)]
pub struct ParameterSchedule {
    kind: ScheduleKind,
    n: usize,
    carried: f64,
}

impl ParameterSchedule {
    fn from_kind(kind: ScheduleKind) -> Self {
        let carried = match kind {
            ScheduleKind::Recurrence { r_init } => r_init,
            ScheduleKind::Oscillating { k0 } => k0,
            _ => 0.0,
        };
        Self {
            kind,
            n: 0,
            carried,
        }
    }

    pub fn power(exponent: f64, scale: f64) -> Result<Self> {
        if !(exponent > 0.0 && exponent.is_finite()) || !(scale > 0.0 && scale.is_finite()) {
            return Err(Error::InvalidParameter(
                "power schedule needs exponent > 0 and scale > 0",
            ));
        }
        Ok(Self::from_kind(ScheduleKind::Power { exponent, scale }))
    }

    /// `1/(n+1)`.
    pub fn inv_n() -> Self {
        Self::from_kind(ScheduleKind::Power {
            exponent: 1.0,
            scale: 1.0,
        })
    }

    /// `1/√(n+1)`.
    pub fn inv_sqrt_n() -> Self {
        Self::from_kind(ScheduleKind::Power {
            exponent: 0.5,
            scale: 1.0,
        })
    }

    pub fn constant(value: f64) -> Result<Self> {
        if !(value > 0.0 && value.is_finite()) {
            return Err(Error::InvalidParameter(
                "constant schedule must be positive",
            ));
        }
        Ok(Self::from_kind(ScheduleKind::Constant(value)))
    }

    /// The summable recurrence seeded with `r_{−1} = r_init` (for the
    /// divergent-series scenario, `r_init = x_0 − 1`).
    pub fn recurrence(r_init: f64) -> Result<Self> {
        if !(r_init > 0.0 && r_init.is_finite()) {
            return Err(Error::InvalidParameter("recurrence needs r_init > 0"));
        }
        Ok(Self::from_kind(ScheduleKind::Recurrence { r_init }))
    }

    pub fn adaptive() -> Self {
        Self::from_kind(ScheduleKind::Adaptive)
    }

    /// The schedule driving the empty-fixed-point-set scenario, seeded with
    /// `k_0 = x_0 − 1/√3`.
    pub fn oscillating(k0: f64) -> Result<Self> {
        if !(k0 > 0.0 && k0.is_finite()) {
            return Err(Error::InvalidParameter("oscillating schedule needs k0 > 0"));
        }
        Ok(Self::from_kind(ScheduleKind::Oscillating { k0 }))
    }

    pub fn alternating() -> Self {
        Self::from_kind(ScheduleKind::Alternating)
    }

    pub fn kind(&self) -> ScheduleKind {
        self.kind
    }

    /// Index of the next value to be emitted.
    pub fn index(&self) -> usize {
        self.n
    }

    /// Carried state before the next emission: `r_{n−1}` for the
    /// recurrence, `k_n` for the oscillating schedule.
    pub fn carried(&self) -> Option<f64> {
        match self.kind {
            ScheduleKind::Recurrence { .. } | ScheduleKind::Oscillating { .. } => {
                Some(self.carried)
            }
            _ => None,
        }
    }

    pub fn needs_context(&self) -> bool {
        matches!(self.kind, ScheduleKind::Adaptive)
    }

    /// Rewinds to `n = 0`.
    pub fn reset(&mut self) {
        *self = Self::from_kind(self.kind);
    }

    /// Emits the value for the current index and advances.
    pub fn next_value(&mut self, context: Option<(&Vector, &CutterOperator)>) -> Result<f64> {
        let n = self.n as f64;
        let value = match self.kind {
            ScheduleKind::Power { exponent, scale } => {
                if exponent == 1.0 {
                    scale / (n + 1.0)
                } else if exponent == 0.5 {
                    scale / libm::sqrt(n + 1.0)
                } else {
                    scale * libm::pow(n + 1.0, -exponent)
                }
            }
            ScheduleKind::Constant(c) => c,
            ScheduleKind::Recurrence { .. } => {
                let prev = self.carried;
                let r = prev * prev / (4.0 * (1.0 + prev));
                self.carried = r;
                r
            }
            ScheduleKind::Adaptive => {
                let (x, t) = context.ok_or(Error::MissingContext)?;
                let w = 1.0 / libm::sqrt(n + 1.0);
                let u = ur_apply(t, w, x)?;
                if u.norm() <= ADAPTIVE_ZERO_RTOL * (1.0 + x.norm()) {
                    2.0 * w
                } else {
                    w
                }
            }
            ScheduleKind::Oscillating { .. } => {
                let k = self.carried;
                let k_next = libm::sqrt((n + 1.0) / (n + 2.0)) * k;
                self.carried = k_next;
                0.5 * (libm::sqrt(3.0) + 2.0 * k_next + k - 1.0 / (k + INV_SQRT3))
            }
            ScheduleKind::Alternating => {
                if self.n.is_multiple_of(2) {
                    1.0 / (n + 1.0)
                } else {
                    1.0 / libm::sqrt(n)
                }
            }
        };
        self.n += 1;
        Ok(value)
    }

    /// First `count` values of a context-free schedule, from `n = 0`.
    pub fn take(&self, count: usize) -> Result<Vec<f64>> {
        let mut fresh = Self::from_kind(self.kind);
        (0..count).map(|_| fresh.next_value(None)).collect()
    }
}

/// Heuristic classification of a partial-sum tail.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Trend {
    /// Last-quartile terms decay no faster than `c/n`.
    Diverging,
    /// Terms vanish, decay geometrically or like `c/n^(1+δ)` with `δ ≥ 0.1`.
    Bounded,
    Inconclusive,
}

/// Numerical audit of the divergent-series hypotheses
/// `Σ η_n r_n = ∞` and `Σ η_n(2 − η_n) r_n² = ∞`.
///
/// Advisory only: a finite horizon proves nothing about a series.
#[derive(Debug, Clone, PartialEq)]
pub struct DivergenceReport {
    pub partial_sum_eta_r: f64,
    pub partial_sum_eta_2me_r2: f64,
    pub horizon: usize,
    pub trend_eta_r: Trend,
    pub trend_eta_2me_r2: Trend,
}

/// Partial sums over `n < horizon` of `η_n r_n` and `η_n(2 − η_n) r_n²`,
/// computed on fresh copies of both schedules.
pub fn divergence_report(
    r_schedule: &ParameterSchedule,
    eta_schedule: &ParameterSchedule,
    horizon: usize,
) -> Result<DivergenceReport> {
    if horizon == 0 {
        return Err(Error::InvalidParameter("horizon must be at least 1"));
    }
    let r = r_schedule.take(horizon)?;
    let eta = eta_schedule.take(horizon)?;
    let first: Vec<f64> = r.iter().zip(&eta).map(|(r, e)| e * r).collect();
    let second: Vec<f64> = r
        .iter()
        .zip(&eta)
        .map(|(r, e)| (e * (2.0 - e) * r * r).max(0.0))
        .collect();
    Ok(DivergenceReport {
        partial_sum_eta_r: first.iter().sum(),
        partial_sum_eta_2me_r2: second.iter().sum(),
        horizon,
        trend_eta_r: classify_tail(&first),
        trend_eta_2me_r2: classify_tail(&second),
    })
}

/// Least-squares slope of `ln t_n` against `ln(n + 1)` over the last quarter.
fn classify_tail(terms: &[f64]) -> Trend {
    let start = terms.len() - terms.len() / 4;
    let tail = &terms[start..];
    if tail.iter().all(|&t| t == 0.0) {
        return Trend::Bounded;
    }
    if tail.len() < 2 {
        return Trend::Inconclusive;
    }
    if tail.iter().any(|&t| t <= 0.0) {
        // Underflow of a positive sequence.
        return Trend::Bounded;
    }
    let pts: Vec<(f64, f64)> = tail
        .iter()
        .enumerate()
        .map(|(i, &t)| (libm::log((start + i + 1) as f64), libm::log(t)))
        .collect();
    let m = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / m;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / m;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    if sxx == 0.0 {
        return Trend::Inconclusive;
    }
    let decay = -sxy / sxx;
    if decay <= 1.0 + 1e-3 {
        Trend::Diverging
    } else if decay >= 1.1 {
        Trend::Bounded
    } else {
        Trend::Inconclusive
    }
}

/// `ε_n = r_n ‖∇f(x_n)‖`, the perturbation that makes the modified cyclic
/// subgradient projection step coincide with the extrapolated one.
pub fn mcspa_epsilon_linked(r_n: f64, grad_norm: f64) -> f64 {
    debug_assert!(r_n > 0.0 && grad_norm >= 0.0);
    r_n * grad_norm
}

/// Result of [`epsilon_monotonicity_audit`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MonotonicityAudit {
    pub strictly_decreasing: bool,
    /// First `n` with `ε_{n+1} ≥ ε_n`.
    pub first_violation: Option<usize>,
}

pub fn epsilon_monotonicity_audit(values: &[f64]) -> MonotonicityAudit {
    let first_violation = values.windows(2).position(|w| w[1] >= w[0]);
    MonotonicityAudit {
        strictly_decreasing: first_violation.is_none(),
        first_violation,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::function::ConvexFunction;

    #[test]
    fn power_first_value() {
        let mut s = ParameterSchedule::power(1.0, 1.0).unwrap();
        assert_eq!(s.next_value(None).unwrap(), 1.0);
        assert_eq!(s.next_value(None).unwrap(), 0.5);
        assert!(ParameterSchedule::power(0.0, 1.0).is_err());
        assert!(ParameterSchedule::constant(-1.0).is_err());
    }

    #[test]
    fn recurrence_values() {
        let mut s = ParameterSchedule::recurrence(1.0).unwrap();
        assert_eq!(s.next_value(None).unwrap(), 0.125);
        let r1 = s.next_value(None).unwrap();
        assert!((r1 - 0.015625 / 4.5).abs() < 1e-15);
        assert!((r1 - 0.003_472_22).abs() < 1e-8);
    }

    #[test]
    fn oscillating_first_value() {
        let mut s = ParameterSchedule::oscillating(1.0).unwrap();
        let r0 = s.next_value(None).unwrap();
        let expected =
            0.5 * (3f64.sqrt() + 2.0 / 2f64.sqrt() + 1.0 - 1.0 / (1.0 + 1.0 / 3f64.sqrt()));
        assert!((r0 - expected).abs() < 1e-15);
        assert!((r0 - 1.756_145).abs() < 1e-6);
        assert!((s.carried().unwrap() - 0.5f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn alternating_values() {
        let v = ParameterSchedule::alternating().take(5).unwrap();
        assert_eq!(v[0], 1.0);
        assert_eq!(v[1], 1.0);
        assert!((v[2] - 1.0 / 3.0).abs() < 1e-15);
        assert!((v[3] - 1.0 / 3f64.sqrt()).abs() < 1e-15);
        assert!((v[4] - 0.2).abs() < 1e-15);
    }

    #[test]
    fn adaptive_requires_context() {
        let mut s = ParameterSchedule::adaptive();
        assert_eq!(s.next_value(None), Err(Error::MissingContext));
        assert!(matches!(
            divergence_report(&s, &ParameterSchedule::constant(1.0).unwrap(), 10),
            Err(Error::MissingContext)
        ));
    }

    #[test]
    fn adaptive_doubles_on_zero() {
        let t = CutterOperator::subgradient_projector(ConvexFunction::squared_norm());
        let mut s = ParameterSchedule::adaptive();
        // U_1(1/2) = 1/4 − 1 ≠ 0.
        assert_eq!(s.next_value(Some((&Vector::scalar(0.5), &t))).unwrap(), 1.0);
        // w_1 = 1/√2 and U_{w_1}(2 w_1) = 0.
        let w1 = 1.0 / 2f64.sqrt();
        let r1 = s.next_value(Some((&Vector::scalar(2.0 * w1), &t))).unwrap();
        assert_eq!(r1, 2.0 * w1);
    }

    #[test]
    fn divergence_examples() {
        let one = ParameterSchedule::constant(1.0).unwrap();
        let rep = divergence_report(&ParameterSchedule::inv_n(), &one, 1000).unwrap();
        let h1000: f64 = (1..=1000).map(|k| 1.0 / k as f64).sum();
        assert!((rep.partial_sum_eta_r - h1000).abs() < 1e-12);
        assert!((rep.partial_sum_eta_r - 7.4855).abs() < 1e-4);
        assert_eq!(rep.trend_eta_r, Trend::Diverging);

        let rec = ParameterSchedule::recurrence(1.0).unwrap();
        let rep = divergence_report(&rec, &one, 1000).unwrap();
        assert!(rep.partial_sum_eta_r < 0.13);
        assert_eq!(rep.trend_eta_r, Trend::Bounded);

        let two = ParameterSchedule::constant(2.0).unwrap();
        let rep = divergence_report(&ParameterSchedule::inv_sqrt_n(), &two, 500).unwrap();
        assert_eq!(rep.partial_sum_eta_2me_r2, 0.0);
        assert_eq!(rep.trend_eta_2me_r2, Trend::Bounded);
        assert_eq!(rep.trend_eta_r, Trend::Diverging);
    }

    #[test]
    fn summable_power_is_bounded() {
        let one = ParameterSchedule::constant(1.0).unwrap();
        let p2 = ParameterSchedule::power(2.0, 1.0).unwrap();
        let rep = divergence_report(&p2, &one, 4000).unwrap();
        assert_eq!(rep.trend_eta_r, Trend::Bounded);
        let p105 = ParameterSchedule::power(1.05, 1.0).unwrap();
        let rep = divergence_report(&p105, &one, 4000).unwrap();
        assert_eq!(rep.trend_eta_r, Trend::Inconclusive);
    }

    #[test]
    fn epsilon_helpers() {
        assert_eq!(mcspa_epsilon_linked(0.5, 4.0), 2.0);
        assert_eq!(mcspa_epsilon_linked(0.3, 0.0), 0.0);
        assert_eq!(mcspa_epsilon_linked(0.1, 200.0), 20.0);
        let ok = epsilon_monotonicity_audit(&[1.0, 0.5, 0.25]);
        assert!(ok.strictly_decreasing && ok.first_violation.is_none());
        let bad = epsilon_monotonicity_audit(&[1.0, 1.0]);
        assert_eq!(bad.first_violation, Some(0));
        assert!(!bad.strictly_decreasing);
    }
}
