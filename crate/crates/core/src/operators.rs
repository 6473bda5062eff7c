//! Cutters and the extrapolated operators built on them.
//!
//! A cutter `T` has a nonempty fixed-point set and satisfies
//! `⟨y − Tx, x − Tx⟩ ≤ 0` for every `x` and every `y ∈ Fix T`. The built-in
//! cutters are subgradient projectors, metric projectors and resolvents.
//!
//! `U_r` extrapolates `T` by an extra distance `r` along `Tx − x`; it keeps
//! `Fix U_r = Fix T` but is not a cutter in general.

use crate::error::{Error, Result};
use crate::function::ConvexFunction;
use crate::sets::{ConvexSet, QuasiProjector};
use crate::vector::Vector;

/// Relative tolerance of the surrogate fixed-point test `‖Tx − x‖ ≤ atol`
/// used when no exact test exists; scaled by `1 + ‖x‖`.
pub const DEFAULT_FIXED_POINT_RTOL: f64 = 1e-12;

/// Anything that maps a vector to a vector.
pub trait Operator {
    fn apply(&self, x: &Vector) -> Result<Vector>;
}

/// Resolvents `(Id + A)^{-1}` with closed forms.
#[derive(Debug, Clone, PartialEq)]
pub enum ResolventSpec {
    /// `A = ∂‖·‖`; the resolvent is the (block) soft threshold by 1.
    ProxAbs,
    /// `A = ∇d²_B = 2(Id − P_B)` for the ball `B = ball(center; radius)`.
    SquaredDistanceBall { center: Vector, radius: f64 },
}

impl ResolventSpec {
    pub fn squared_distance_ball(center: Vector, radius: f64) -> Result<Self> {
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::InvalidParameter("ball radius must be positive"));
        }
        Ok(Self::SquaredDistanceBall { center, radius })
    }

    /// The zero set `A^{-1}0 = Fix (Id + A)^{-1}`.
    pub fn zero_set(&self, dim: usize) -> ConvexSet {
        match self {
            ResolventSpec::ProxAbs => ConvexSet::affine_subspace(Vector::zeros(dim), alloc::vec![])
                .expect("a point is a valid affine subspace"),
            ResolventSpec::SquaredDistanceBall { center, radius } => {
                ConvexSet::ball(center.clone(), *radius).expect("radius validated on construction")
            }
        }
    }

    /// Distance from `x − y` to `A(y)`; zero iff `y = (Id + A)^{-1} x`.
    pub fn inclusion_residual(&self, x: &Vector, y: &Vector) -> f64 {
        let gap = x - y;
        match self {
            ResolventSpec::ProxAbs => {
                let n = y.norm();
                if n > 0.0 {
                    gap.distance(&y.scale(1.0 / n))
                } else {
                    (gap.norm() - 1.0).max(0.0)
                }
            }
            ResolventSpec::SquaredDistanceBall { center, radius } => {
                let d = y - center;
                let n = d.norm();
                let a = if n <= *radius {
                    Vector::zeros(y.dim())
                } else {
                    d.scale(2.0 * (1.0 - radius / n))
                };
                gap.distance(&a)
            }
        }
    }
}

/// Evaluates `(Id + A)^{-1} x` for a built-in resolvent.
pub fn resolvent_apply(spec: &ResolventSpec, x: &Vector) -> Result<Vector> {
    let y = match spec {
        ResolventSpec::ProxAbs => {
            let n = x.norm();
            if n <= 1.0 {
                Vector::zeros(x.dim())
            } else {
                x.scale(1.0 - 1.0 / n)
            }
        }
        ResolventSpec::SquaredDistanceBall { center, radius } => {
            x.ensure_dim(center.dim())?;
            let d = x - center;
            let n = d.norm();
            if n <= *radius {
                x.clone()
            } else {
                // Radial solution of y + 2(y − P_B y) = x.
                center.axpy((n + 2.0 * radius) / (3.0 * n), &d)
            }
        }
    };
    y.checked()
}

/// `G_f x = x − f(x)/‖s(x)‖² · s(x)` when `f(x) > 0`, else `x`.
pub fn subgradient_projector_apply(f: &ConvexFunction, x: &Vector) -> Result<Vector> {
    let value = f.value(x);
    if !(value > 0.0) {
        if value.is_nan() {
            return Err(Error::NonFiniteResult);
        }
        return Ok(x.clone());
    }
    let s = f.subgradient(x);
    s.ensure_dim(x.dim())?;
    let s2 = s.norm_squared();
    if s2 == 0.0 {
        return Err(Error::InconsistentProblem { value });
    }
    x.axpy(-value / s2, &s).checked()
}

/// The variants of [`CutterOperator`].
#[derive(Debug, Clone)]
pub enum CutterKind {
    SubgradientProjector(ConvexFunction),
    MetricProjector(ConvexSet),
    Resolvent(ResolventSpec),
}

/// A cutter `T` with a fixed-point membership test.
#[derive(Debug, Clone)]
pub struct CutterOperator {
    kind: CutterKind,
    atol: Option<f64>,
}

impl CutterOperator {
    pub fn subgradient_projector(f: ConvexFunction) -> Self {
        Self {
            kind: CutterKind::SubgradientProjector(f),
            atol: None,
        }
    }

    pub fn metric_projector(set: ConvexSet) -> Self {
        Self {
            kind: CutterKind::MetricProjector(set),
            atol: None,
        }
    }

    pub fn resolvent(spec: ResolventSpec) -> Self {
        Self {
            kind: CutterKind::Resolvent(spec),
            atol: None,
        }
    }

    /// Absolute tolerance of the surrogate test `‖Tx − x‖ ≤ atol` used for
    /// resolvents. Defaults to `1e-12·(1 + ‖x‖)`.
    pub fn with_atol(mut self, atol: f64) -> Result<Self> {
        if !(atol >= 0.0) {
            return Err(Error::InvalidParameter("atol must be non-negative"));
        }
        self.atol = Some(atol);
        Ok(self)
    }

    pub fn kind(&self) -> &CutterKind {
        &self.kind
    }

    /// The underlying function for subgradient projectors.
    pub fn function(&self) -> Option<&ConvexFunction> {
        match &self.kind {
            CutterKind::SubgradientProjector(f) => Some(f),
            _ => None,
        }
    }

    pub fn apply(&self, x: &Vector) -> Result<Vector> {
        match &self.kind {
            CutterKind::SubgradientProjector(f) => subgradient_projector_apply(f, x),
            CutterKind::MetricProjector(set) => set.project(x),
            CutterKind::Resolvent(spec) => resolvent_apply(spec, x),
        }
    }

    /// `x ∈ Fix T`. Exact for subgradient projectors (`f(x) ≤ 0`) and set
    /// membership for projectors; `‖Tx − x‖ ≤ atol` for resolvents.
    pub fn is_fixed(&self, x: &Vector) -> Result<bool> {
        match &self.kind {
            CutterKind::SubgradientProjector(f) => {
                let value = f.value(x);
                if value.is_nan() {
                    return Err(Error::NonFiniteResult);
                }
                Ok(value <= 0.0)
            }
            CutterKind::MetricProjector(set) => {
                x.ensure_dim(set.dim())?;
                Ok(set.contains(x))
            }
            CutterKind::Resolvent(_) => {
                let tx = self.apply(x)?;
                let atol = self
                    .atol
                    .unwrap_or(DEFAULT_FIXED_POINT_RTOL * (1.0 + x.norm()));
                Ok(tx.distance(x) <= atol)
            }
        }
    }

    /// `‖x − Tx‖`.
    pub fn residual(&self, x: &Vector) -> Result<f64> {
        Ok(self.apply(x)?.distance(x))
    }
}

impl Operator for CutterOperator {
    fn apply(&self, x: &Vector) -> Result<Vector> {
        CutterOperator::apply(self, x)
    }
}

impl Operator for ConvexSet {
    fn apply(&self, x: &Vector) -> Result<Vector> {
        self.project(x)
    }
}

impl Operator for QuasiProjector {
    fn apply(&self, x: &Vector) -> Result<Vector> {
        QuasiProjector::apply(self, x)
    }
}

impl Operator for ResolventSpec {
    fn apply(&self, x: &Vector) -> Result<Vector> {
        resolvent_apply(self, x)
    }
}

fn check_radius(r: f64) -> Result<()> {
    if r >= 0.0 && r.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(
            "extrapolation r must be finite and >= 0",
        ))
    }
}

fn check_eta(eta: f64) -> Result<()> {
    if eta > 0.0 && eta <= 2.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter("relaxation eta must lie in ]0, 2]"))
    }
}

/// `U_{r,η} x = x + η (r + ‖x − Tx‖)/‖Tx − x‖ · (Tx − x)` outside `Fix T`.
/// Callers validate `r` and `η`.
fn relaxed_step(t: &CutterOperator, r: f64, eta: f64, x: &Vector) -> Result<Vector> {
    if t.is_fixed(x)? {
        return Ok(x.clone());
    }
    let out = match &t.kind {
        CutterKind::SubgradientProjector(f) => {
            // x − η (f(x) + r‖s‖)/‖s‖² s, avoiding the difference Tx − x.
            let value = f.value(x);
            let s = f.subgradient(x);
            s.ensure_dim(x.dim())?;
            let s2 = s.norm_squared();
            if s2 == 0.0 {
                return Err(Error::InconsistentProblem { value });
            }
            let step = eta * (value + r * libm::sqrt(s2)) / s2;
            x.axpy(-step, &s)
        }
        _ => {
            let tx = t.apply(x)?;
            let d = &tx - x;
            let n = d.norm();
            if n == 0.0 {
                return Ok(x.clone());
            }
            x.axpy(eta * (r + n) / n, &d)
        }
    };
    out.checked()
}

/// `U_r x = Tx + r (Tx − x)/‖Tx − x‖` for `x ∉ Fix T`, `x` otherwise.
///
/// `r = 0` gives `T` itself; finite convergence of the iteration needs
/// `r > 0`.
pub fn ur_apply(t: &CutterOperator, r: f64, x: &Vector) -> Result<Vector> {
    check_radius(r)?;
    relaxed_step(t, r, 1.0, x)
}

/// `U_{r,η} x = (1 − η) x + η U_r x`, `η ∈ ]0, 2]`.
pub fn ur_eta_apply(t: &CutterOperator, r: f64, eta: f64, x: &Vector) -> Result<Vector> {
    check_radius(r)?;
    check_eta(eta)?;
    relaxed_step(t, r, eta, x)
}

/// `U_r` as an [`Operator`].
#[derive(Debug, Clone, Copy)]
pub struct Extrapolated<'a> {
    pub cutter: &'a CutterOperator,
    pub r: f64,
}

impl Operator for Extrapolated<'_> {
    fn apply(&self, x: &Vector) -> Result<Vector> {
        ur_apply(self.cutter, self.r, x)
    }
}

/// `U_{r,η}` as an [`Operator`].
#[derive(Debug, Clone, Copy)]
pub struct RelaxedExtrapolated<'a> {
    pub cutter: &'a CutterOperator,
    pub r: f64,
    pub eta: f64,
}

impl Operator for RelaxedExtrapolated<'_> {
    fn apply(&self, x: &Vector) -> Result<Vector> {
        ur_eta_apply(self.cutter, self.r, self.eta, x)
    }
}

/// Quantities around a non-fixed point `x` and a reference point `y`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CutterDiagnostics {
    /// `τ_x = ⟨x − y, (x − Tx)/‖x − Tx‖⟩ − (r + ‖x − Tx‖)`.
    pub tau: f64,
    /// `‖x − Tx‖`.
    pub residual_t: f64,
    /// `⟨y − Tx, x − Tx⟩`.
    pub cutter_residual: f64,
}

/// Computes `τ_x` and companions.
///
/// The caller asserts `ball(y; r) ⊆ Fix T`; under that assumption `τ_x ≥ 0`
/// and `‖U_r x − y‖² = ‖Tx − y‖² − r² − 2rτ_x`.
pub fn tau_diagnostic(
    t: &CutterOperator,
    x: &Vector,
    y: &Vector,
    r: f64,
) -> Result<CutterDiagnostics> {
    if !(r > 0.0 && r.is_finite()) {
        return Err(Error::InvalidParameter("tau diagnostic needs r > 0"));
    }
    y.ensure_dim(x.dim())?;
    if t.is_fixed(x)? {
        return Err(Error::InvalidInput("tau is undefined at a fixed point"));
    }
    let tx = t.apply(x)?;
    let d = x - &tx;
    let n = d.norm();
    if n == 0.0 {
        return Err(Error::InvalidInput("tau is undefined at a fixed point"));
    }
    let tau = (x - y).dot(&d) / n - (r + n);
    Ok(CutterDiagnostics {
        tau,
        residual_t: n,
        cutter_residual: (y - &tx).dot(&d),
    })
}

/// `⟨y − op(x), x − op(x)⟩`. A non-positive value certifies the cutter
/// inequality at `(x, y)`; a positive one witnesses a violation. `y` is
/// assumed to be a fixed point of `op`.
pub fn cutter_inequality_residual<O: Operator + ?Sized>(
    op: &O,
    x: &Vector,
    y: &Vector,
) -> Result<f64> {
    let ox = op.apply(x)?;
    Ok((y - &ox).dot(&(x - &ox)))
}
