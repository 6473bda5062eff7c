//! Projected cutter method with extrapolation parameters.
//!
//! The crate finds a point of `C ∩ Fix T`, where `T` is a cutter (a quasi
//! firmly nonexpansive operator) and `C` a closed convex set reached through a
//! quasi projector `Q_C`. Each step overshoots the cutter image by a distance
//! `r_n`:
//!
//! ```text
//! x_{n+1} = Q_C(x_n + η_n (U_{r_n} x_n − x_n))     if x_n ∉ Fix T
//! U_r x   = T x + r (T x − x) / ‖T x − x‖
//! ```
//!
//! When `Fix T` has nonempty interior and the parameters satisfy a divergent
//! series condition (`Σ η_n r_n = ∞` or `Σ η_n (2 − η_n) r_n² = ∞`), the
//! iteration reaches `C ∩ Fix T` after finitely many steps.
//!
//! Modules:
//!
//! * [`operators`] – subgradient projectors, metric projectors, resolvents,
//!   the extrapolated operator `U_r` and its relaxation.
//! * [`sets`] – closed convex sets, reflectors of obtuse cones and quasi
//!   projectors.
//! * [`schedules`] – parameter sequences `(r_n)`, `(η_n)`, `(ε_n)` and
//!   divergent-series audits.
//! * [`solver`] – the projected cutter iteration, the modified cyclic
//!   subgradient projection algorithm, and Fejér monitoring.
//!
//! The crate is `no_std` and only needs `alloc`.

#![cfg_attr(not(test), no_std)]
// `!(a > b)` deliberately rejects NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod error;
pub mod function;
pub mod operators;
pub mod schedules;
pub mod sets;
pub mod solver;
pub mod vector;

pub use error::{Error, Result};
pub use function::ConvexFunction;
pub use operators::{
    cutter_inequality_residual, resolvent_apply, subgradient_projector_apply, tau_diagnostic,
    ur_apply, ur_eta_apply, CutterDiagnostics, CutterKind, CutterOperator, Extrapolated, Operator,
    RelaxedExtrapolated, ResolventSpec,
};
pub use schedules::{
    divergence_report, epsilon_monotonicity_audit, mcspa_epsilon_linked, DivergenceReport,
    MonotonicityAudit, ParameterSchedule, ScheduleKind, Trend,
};
pub use sets::{obtuseness_sample_check, ConvexSet, ObtusenessReport, QuasiProjector};
pub use solver::{
    fejer_violations, run, run_mcspa, run_mcspa_with, run_with, step, Failure, FejerReport,
    IterationTrace, ParamKind, ProblemSpec, RunConfig, TraceRecord, Verdict,
};
pub use vector::Vector;
