//! Closed convex sets, their metric projectors, reflectors of obtuse cones
//! and quasi projectors.
//!
//! A quasi projector of `C` is any `Q` with `ran Q = Fix Q = C` that never
//! increases the distance to points of `C`. The metric projector `P_C` is
//! one; for an obtuse cone every relaxation `(1 − λ(x))x + λ(x)P_C x` with
//! `λ(x) ∈ [1, 2]` is another, and so is `P_C ∘ R` for a quasi nonexpansive
//! `R` with `C ⊆ Fix R`.

use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use rand::Rng;

use crate::error::{Error, Result};
use crate::vector::Vector;

/// Relative slack used by [`ConvexSet::contains`].
pub const MEMBERSHIP_SLACK: f64 = 1e-12;

const GRAM_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
enum SetKind {
    Box { lo: Vector, hi: Vector },
    IntervalProduct { bounds: Vec<(f64, f64)> },
    Ball { center: Vector, radius: f64 },
    Halfspace { normal: Vector, offset: f64 },
    AffineSubspace { anchor: Vector, basis: Vec<Vector> },
    NonnegOrthant { dim: usize },
    WholeSpace { dim: usize },
    Ray { direction: Vector },
}

/// A nonempty closed convex subset of `R^d`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvexSet {
    kind: SetKind,
}

impl ConvexSet {
    /// `{x : lo ≤ x ≤ hi}` componentwise.
    pub fn boxed(lo: Vector, hi: Vector) -> Result<Self> {
        lo.ensure_dim(hi.dim())?;
        if lo.as_slice().iter().zip(hi.as_slice()).any(|(l, h)| l > h) {
            return Err(Error::InvalidInput("box requires lo <= hi componentwise"));
        }
        Ok(Self {
            kind: SetKind::Box { lo, hi },
        })
    }

    /// Product of closed intervals; endpoints may be infinite.
    pub fn interval_product(bounds: Vec<(f64, f64)>) -> Result<Self> {
        if bounds.is_empty() {
            return Err(Error::InvalidInput(
                "interval product needs at least one factor",
            ));
        }
        for &(l, h) in &bounds {
            if l.is_nan() || h.is_nan() || l > h || l == f64::INFINITY || h == f64::NEG_INFINITY {
                return Err(Error::InvalidInput("interval product requires lo <= hi"));
            }
        }
        Ok(Self {
            kind: SetKind::IntervalProduct { bounds },
        })
    }

    /// Closed ball of positive radius.
    pub fn ball(center: Vector, radius: f64) -> Result<Self> {
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::InvalidParameter("ball radius must be positive"));
        }
        Ok(Self {
            kind: SetKind::Ball { center, radius },
        })
    }

    /// `{x : ⟨normal, x⟩ ≤ offset}` with `normal ≠ 0`.
    pub fn halfspace(normal: Vector, offset: f64) -> Result<Self> {
        if normal.norm_squared() == 0.0 {
            return Err(Error::InvalidParameter("halfspace normal must be nonzero"));
        }
        if !offset.is_finite() {
            return Err(Error::InvalidParameter("halfspace offset must be finite"));
        }
        Ok(Self {
            kind: SetKind::Halfspace { normal, offset },
        })
    }

    /// `anchor + span(basis)`. The basis must be orthonormal (Gram matrix
    /// within `1e-10` of the identity); an empty basis gives `{anchor}`.
    pub fn affine_subspace(anchor: Vector, basis: Vec<Vector>) -> Result<Self> {
        for (i, b) in basis.iter().enumerate() {
            b.ensure_dim(anchor.dim())?;
            for (j, c) in basis.iter().enumerate().skip(i) {
                let target = if i == j { 1.0 } else { 0.0 };
                if (b.dot(c) - target).abs() > GRAM_TOL {
                    return Err(Error::InvalidInput(
                        "affine subspace basis is not orthonormal",
                    ));
                }
            }
        }
        Ok(Self {
            kind: SetKind::AffineSubspace { anchor, basis },
        })
    }

    /// `R^dim_+`.
    pub fn nonneg_orthant(dim: usize) -> Self {
        assert!(dim >= 1, "dimension must be at least 1");
        Self {
            kind: SetKind::NonnegOrthant { dim },
        }
    }

    /// All of `R^dim`.
    pub fn whole_space(dim: usize) -> Self {
        assert!(dim >= 1, "dimension must be at least 1");
        Self {
            kind: SetKind::WholeSpace { dim },
        }
    }

    /// `{t·direction : t ≥ 0}`.
    pub fn ray(direction: Vector) -> Result<Self> {
        let n = direction.norm();
        if n == 0.0 {
            return Err(Error::InvalidParameter("ray direction must be nonzero"));
        }
        Ok(Self {
            kind: SetKind::Ray {
                direction: direction.scale(1.0 / n),
            },
        })
    }

    pub fn dim(&self) -> usize {
        match &self.kind {
            SetKind::Box { lo, .. } => lo.dim(),
            SetKind::IntervalProduct { bounds } => bounds.len(),
            SetKind::Ball { center, .. } => center.dim(),
            SetKind::Halfspace { normal, .. } => normal.dim(),
            SetKind::AffineSubspace { anchor, .. } => anchor.dim(),
            SetKind::NonnegOrthant { dim } | SetKind::WholeSpace { dim } => *dim,
            SetKind::Ray { direction } => direction.dim(),
        }
    }

    /// Short human-readable description.
    pub fn label(&self) -> &'static str {
        match &self.kind {
            SetKind::Box { .. } => "box",
            SetKind::IntervalProduct { .. } => "interval_product",
            SetKind::Ball { .. } => "ball",
            SetKind::Halfspace { .. } => "halfspace",
            SetKind::AffineSubspace { .. } => "affine_subspace",
            SetKind::NonnegOrthant { .. } => "nonneg_orthant",
            SetKind::WholeSpace { .. } => "whole_space",
            SetKind::Ray { .. } => "ray",
        }
    }

    /// Metric projection: the unique nearest point of the set.
    pub fn project(&self, x: &Vector) -> Result<Vector> {
        x.ensure_dim(self.dim())?;
        let p = match &self.kind {
            SetKind::Box { lo, hi } => {
                let lower = x.zip_map(lo, f64::max);
                lower.zip_map(hi, f64::min)
            }
            SetKind::IntervalProduct { bounds } => Vector::from_raw(
                x.as_slice()
                    .iter()
                    .zip(bounds)
                    .map(|(&v, &(l, h))| v.max(l).min(h))
                    .collect(),
            ),
            SetKind::Ball { center, radius } => {
                let d = x - center;
                let n = d.norm();
                if n <= *radius {
                    x.clone()
                } else {
                    center.axpy(radius / n, &d)
                }
            }
            SetKind::Halfspace { normal, offset } => {
                let excess = normal.dot(x) - offset;
                if excess <= 0.0 {
                    x.clone()
                } else {
                    x.axpy(-excess / normal.norm_squared(), normal)
                }
            }
            SetKind::AffineSubspace { anchor, basis } => {
                let d = x - anchor;
                basis
                    .iter()
                    .fold(anchor.clone(), |acc, b| acc.axpy(d.dot(b), b))
            }
            SetKind::NonnegOrthant { .. } => x.map(|v| v.max(0.0)),
            SetKind::WholeSpace { .. } => x.clone(),
            SetKind::Ray { direction } => direction.scale(direction.dot(x).max(0.0)),
        };
        p.checked()
    }

    /// Euclidean distance from `x` to the set.
    pub fn distance(&self, x: &Vector) -> Result<f64> {
        match &self.kind {
            SetKind::Halfspace { normal, offset } => {
                x.ensure_dim(normal.dim())?;
                Ok((normal.dot(x) - offset).max(0.0) / normal.norm())
            }
            _ => Ok(x.distance(&self.project(x)?)),
        }
    }

    /// Membership within `tol` distance.
    pub fn contains_within(&self, x: &Vector, tol: f64) -> bool {
        matches!(self.distance(x), Ok(d) if d <= tol)
    }

    /// Membership up to `MEMBERSHIP_SLACK · (1 + ‖x‖)`. Exact for boxes,
    /// orthants, interval products and the whole space.
    pub fn contains(&self, x: &Vector) -> bool {
        self.contains_within(x, MEMBERSHIP_SLACK * (1.0 + x.norm()))
    }

    /// Whether the set is a cone (`t·C ⊆ C` for all `t ≥ 0`).
    pub fn is_cone(&self) -> bool {
        match &self.kind {
            SetKind::NonnegOrthant { .. } | SetKind::WholeSpace { .. } | SetKind::Ray { .. } => {
                true
            }
            SetKind::Halfspace { offset, .. } => *offset == 0.0,
            SetKind::IntervalProduct { bounds } => bounds.iter().all(|&(l, h)| {
                (l == 0.0 || l == f64::NEG_INFINITY) && (h == 0.0 || h == f64::INFINITY)
            }),
            SetKind::AffineSubspace { anchor, basis } => {
                let at_origin = basis
                    .iter()
                    .fold(anchor.clone(), |acc, b| acc.axpy(-anchor.dot(b), b));
                at_origin.norm() <= MEMBERSHIP_SLACK * (1.0 + anchor.norm())
            }
            SetKind::Box { .. } | SetKind::Ball { .. } => false,
        }
    }

    /// Cones whose polar cone is contained in their negative.
    ///
    /// Declared from the closed form of the polar for each built-in kind;
    /// [`obtuseness_sample_check`] can audit the claim.
    pub fn is_declared_obtuse(&self) -> bool {
        match &self.kind {
            SetKind::NonnegOrthant { .. } | SetKind::WholeSpace { .. } => true,
            SetKind::Halfspace { offset, .. } => *offset == 0.0,
            SetKind::Ray { direction } => direction.dim() == 1,
            SetKind::IntervalProduct { bounds } => {
                self.is_cone() && bounds.iter().all(|&(l, h)| l != h)
            }
            SetKind::AffineSubspace { basis, anchor } => {
                self.is_cone() && basis.len() == anchor.dim()
            }
            SetKind::Box { .. } | SetKind::Ball { .. } => false,
        }
    }

    /// The reflector `2 P_C x − x`. Lands in the set when the set is an
    /// obtuse cone.
    pub fn reflect(&self, x: &Vector) -> Result<Vector> {
        if !self.is_cone() {
            return Err(Error::NotACone);
        }
        let p = self.project(x)?;
        p.axpy(1.0, &(&p - x)).checked()
    }
}

/// Outcome of [`obtuseness_sample_check`].
#[derive(Debug, Clone, PartialEq)]
pub struct ObtusenessReport {
    /// `true` when no sampled polar direction `u` had `−u` outside the cone.
    pub passed: bool,
    /// Number of sampled directions accepted as polar.
    pub polar_samples: usize,
    /// A polar direction `u` with `−u ∉ C`, if one was found.
    pub witness: Option<Vector>,
}

/// Samples polar directions of a cone and checks `−u ∈ C` for each.
///
/// Candidates come from two sources: residuals `z − P_C z` (always polar
/// for a closed convex cone) and random unit directions `u` kept only when
/// `⟨c, u⟩ ≤ 0` for every sampled unit vector `c ∈ C`. A pass is evidence,
/// not proof.
pub fn obtuseness_sample_check<R: Rng + ?Sized>(
    set: &ConvexSet,
    n_samples: usize,
    rng: &mut R,
) -> Result<ObtusenessReport> {
    if !set.is_cone() {
        return Err(Error::NotACone);
    }
    let dim = set.dim();
    let draw = |rng: &mut R| -> Vector {
        Vector::from_raw((0..dim).map(|_| rng.random_range(-1.0..1.0)).collect())
    };

    let mut cone_samples = Vec::with_capacity(n_samples);
    for _ in 0..n_samples {
        let p = set.project(&draw(rng))?;
        let n = p.norm();
        if n > 1e-12 {
            cone_samples.push(p.scale(1.0 / n));
        }
    }

    let mut report = ObtusenessReport {
        passed: true,
        polar_samples: 0,
        witness: None,
    };
    for _ in 0..n_samples {
        let z = draw(rng);
        let residual = &z - &set.project(&z)?;
        let random = draw(rng);
        for candidate in [residual, random] {
            let n = candidate.norm();
            if n <= 1e-12 {
                continue;
            }
            let u = candidate.scale(1.0 / n);
            if cone_samples.iter().any(|c| c.dot(&u) > 1e-9) {
                continue;
            }
            report.polar_samples += 1;
            let neg = -&u;
            if !set.contains_within(&neg, 1e-9) {
                report.passed = false;
                report.witness.get_or_insert(u);
            }
        }
    }
    Ok(report)
}

type Relaxation = dyn Fn(&Vector) -> f64 + Send + Sync;
type PreMap = dyn Fn(&Vector) -> Vector + Send + Sync;

#[derive(Clone)]
enum QuasiKind {
    Metric,
    RelaxedCone(Arc<Relaxation>),
    Composed(Arc<PreMap>),
}

/// A quasi projector `Q_C` of a closed convex set `C`.
#[derive(Clone)]
pub struct QuasiProjector {
    set: ConvexSet,
    kind: QuasiKind,
}

impl QuasiProjector {
    /// The metric projector `P_C`.
    pub fn metric(set: ConvexSet) -> Self {
        Self {
            set,
            kind: QuasiKind::Metric,
        }
    }

    /// `x ↦ (1 − λ(x)) x + λ(x) P_C x` on an obtuse cone. `λ` may be
    /// discontinuous but must be pure and map into `[1, 2]`; values outside
    /// are reported when queried.
    pub fn relaxed_cone<F>(set: ConvexSet, lambda: F) -> Result<Self>
    where
        F: Fn(&Vector) -> f64 + Send + Sync + 'static,
    {
        if !set.is_declared_obtuse() {
            return Err(if set.is_cone() {
                Error::NotObtuse
            } else {
                Error::NotACone
            });
        }
        Ok(Self {
            set,
            kind: QuasiKind::RelaxedCone(Arc::new(lambda)),
        })
    }

    /// `P_C ∘ R` for a quasi nonexpansive `R`. The caller asserts
    /// `C ⊆ Fix R`.
    pub fn composed<F>(set: ConvexSet, pre_map: F) -> Self
    where
        F: Fn(&Vector) -> Vector + Send + Sync + 'static,
    {
        Self {
            set,
            kind: QuasiKind::Composed(Arc::new(pre_map)),
        }
    }

    /// The target set `C = ran Q = Fix Q`.
    pub fn set(&self) -> &ConvexSet {
        &self.set
    }

    pub fn apply(&self, x: &Vector) -> Result<Vector> {
        match &self.kind {
            QuasiKind::Metric => self.set.project(x),
            QuasiKind::RelaxedCone(lambda) => {
                let l = lambda(x);
                if !(1.0..=2.0).contains(&l) {
                    return Err(Error::InvalidRelaxation { lambda: l });
                }
                let p = self.set.project(x)?;
                x.lerp(l, &p).checked()
            }
            QuasiKind::Composed(pre) => {
                let y = pre(x);
                y.ensure_dim(x.dim())?;
                self.set.project(&y)
            }
        }
    }
}

impl fmt::Debug for QuasiProjector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match self.kind {
            QuasiKind::Metric => "metric",
            QuasiKind::RelaxedCone(_) => "relaxed_cone",
            QuasiKind::Composed(_) => "composed",
        };
        f.debug_struct("QuasiProjector")
            .field("kind", &kind)
            .field("set", &self.set)
            .finish()
    }
}
