//! Convex functions given by a value oracle and a subgradient selection.

use alloc::string::String;
use alloc::sync::Arc;
use core::fmt;

use crate::vector::Vector;

type ValueFn = dyn Fn(&Vector) -> f64 + Send + Sync;
type SubgradientFn = dyn Fn(&Vector) -> Vector + Send + Sync;

/// A convex function `f: R^d → R` together with a selection `s(x) ∈ ∂f(x)`.
///
/// The 0-sublevel set `{x : f(x) ≤ 0}` is asserted nonempty by whoever
/// builds the function. The built-in `x ↦ a‖x‖² + c` with `c > 0` is the
/// only exception and reports [`ConvexFunction::is_feasible`] as `false`.
#[derive(Clone)]
pub struct ConvexFunction {
    name: String,
    value: Arc<ValueFn>,
    subgradient: Arc<SubgradientFn>,
    feasible: bool,
}

impl ConvexFunction {
    /// Wraps caller-supplied oracles. The sublevel set `{f ≤ 0}` is assumed
    /// nonempty.
    pub fn new<V, S>(name: impl Into<String>, value: V, subgradient: S) -> Self
    where
        V: Fn(&Vector) -> f64 + Send + Sync + 'static,
        S: Fn(&Vector) -> Vector + Send + Sync + 'static,
    {
        Self {
            name: name.into(),
            value: Arc::new(value),
            subgradient: Arc::new(subgradient),
            feasible: true,
        }
    }

    /// `x ↦ scale·‖x‖² + offset`, gradient `2·scale·x`.
    ///
    /// `scale` must be positive. The sublevel set is nonempty iff `offset ≤ 0`.
    pub fn scaled_squared_norm(scale: f64, offset: f64) -> Self {
        assert!(scale > 0.0, "scale must be positive");
        let name = alloc::format!("{scale}*|x|^2{offset:+}");
        let mut f = Self::new(
            name,
            move |x: &Vector| scale * x.norm_squared() + offset,
            move |x: &Vector| x.scale(2.0 * scale),
        );
        f.feasible = offset <= 0.0;
        f
    }

    /// `x ↦ x² − 1` (or `‖x‖² − 1` in higher dimension); `Fix G_f = [−1, 1]`.
    pub fn x2m1() -> Self {
        Self::scaled_squared_norm(1.0, -1.0).named("x^2-1")
    }

    /// `x ↦ 100x² − 1`; `Fix G_f = [−0.1, 0.1]`.
    pub fn hundred_x2m1() -> Self {
        Self::scaled_squared_norm(100.0, -1.0).named("100x^2-1")
    }

    /// `x ↦ ‖x‖² − 1`, the unit ball as a sublevel set.
    pub fn unit_ball_gauge() -> Self {
        Self::scaled_squared_norm(1.0, -1.0).named("|x|^2-1")
    }

    /// `x ↦ ‖x‖²`; the sublevel set `{0}` has empty interior.
    pub fn squared_norm() -> Self {
        Self::scaled_squared_norm(1.0, 0.0).named("|x|^2")
    }

    /// `x ↦ ‖x‖² + 1`, which has no feasible point. Flagged infeasible.
    pub fn squared_norm_plus_one() -> Self {
        Self::scaled_squared_norm(1.0, 1.0).named("|x|^2+1")
    }

    /// `x ↦ ‖x − center‖ − radius`, choosing the zero subgradient at the kink.
    pub fn distance_to_ball(center: Vector, radius: f64) -> Self {
        assert!(radius >= 0.0, "radius must be non-negative");
        let c = center.clone();
        Self::new(
            "|x-c|-rho",
            move |x: &Vector| x.distance(&center) - radius,
            move |x: &Vector| {
                let d = x - &c;
                let n = d.norm();
                if n > 0.0 {
                    d.scale(1.0 / n)
                } else {
                    Vector::zeros(x.dim())
                }
            },
        )
    }

    /// Replaces the descriptive name.
    pub fn named(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn value(&self, x: &Vector) -> f64 {
        (self.value)(x)
    }

    pub fn subgradient(&self, x: &Vector) -> Vector {
        (self.subgradient)(x)
    }

    /// `false` only for functions known to have an empty 0-sublevel set.
    pub fn is_feasible(&self) -> bool {
        self.feasible
    }
}

impl fmt::Debug for ConvexFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ConvexFunction")
            .field("name", &self.name)
            .field("feasible", &self.feasible)
            .finish_non_exhaustive()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use alloc::vec::Vec;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn sample(rng: &mut ChaCha8Rng, dim: usize, spread: f64) -> Vector {
        Vector::new(
            (0..dim)
                .map(|_| rng.random_range(-spread..spread))
                .collect(),
        )
        .unwrap()
    }

    fn check_subgradient_inequality(f: &ConvexFunction, dim: usize) {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..500 {
            let x = sample(&mut rng, dim, 3.0);
            let u = sample(&mut rng, dim, 3.0);
            let s = f.subgradient(&x);
            let lower = f.value(&x) + s.dot(&(&u - &x));
            assert!(f.value(&u) >= lower - 1e-9, "{}: {x:?} {u:?}", f.name());
        }
    }

    #[test]
    fn builtin_subgradient_inequality() {
        let fs: Vec<ConvexFunction> = vec![
            ConvexFunction::x2m1(),
            ConvexFunction::hundred_x2m1(),
            ConvexFunction::squared_norm(),
            ConvexFunction::squared_norm_plus_one(),
        ];
        for f in &fs {
            for dim in 1..=4 {
                check_subgradient_inequality(f, dim);
            }
        }
        check_subgradient_inequality(
            &ConvexFunction::distance_to_ball(Vector::new(vec![0.5, -1.0]).unwrap(), 1.0),
            2,
        );
    }

    #[test]
    fn feasibility_flags() {
        assert!(ConvexFunction::x2m1().is_feasible());
        assert!(ConvexFunction::squared_norm().is_feasible());
        assert!(!ConvexFunction::squared_norm_plus_one().is_feasible());
    }

    #[test]
    fn kink_uses_zero_subgradient() {
        let f = ConvexFunction::distance_to_ball(Vector::zeros(2), 1.0);
        assert_eq!(f.subgradient(&Vector::zeros(2)), Vector::zeros(2));
        assert_eq!(f.value(&Vector::zeros(2)), -1.0);
    }
}
