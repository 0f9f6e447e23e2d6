//! One-stage explicit ERKN integrators and the algebraic tests for
//! symmetry and symplecticity of their coefficients.
//!
//! A method is fixed by a node `c1` and two coefficient functions of
//! `ν = hω`. One step reads
//!
//! ```text
//! Q  = cos(c1 hΩ) q + c1 h sinc(c1 hΩ) p
//! q⁺ = cos(hΩ) q + h sinc(hΩ) p + h² b̄1(hΩ) g(Q)
//! p⁺ = -Ω sin(hΩ) q + cos(hΩ) p + h b1(hΩ) g(Q)
//! ```

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::oscfun::{block_combine, block_eval, check_finite_block, sinc, BlockScalar};
use crate::scalar::Real;
use crate::systems::{State, System};

/// A real coefficient function of `ν = hω`.
pub type CoefFn<T> = Arc<dyn Fn(T) -> T + Send + Sync>;

/// Stable identifiers of the built-in methods.
pub const METHOD_NAMES: [&str; 6] = ["ERKN1", "ERKN2", "ERKN3", "ERKN4", "ERKN5", "ERKN6"];

/// A one-step map `(q, p) ↦ (q⁺, p⁺)` for a partitioned oscillatory system.
pub trait Integrator<T: Real>: Send + Sync {
    fn name(&self) -> &str;

    fn step(&self, sys: &System<T>, h: T, s: &State<T>) -> Result<State<T>>;
}

#[derive(Clone)]
pub struct ErknMethod<T> {
    name: String,
    c1: T,
    bbar: CoefFn<T>,
    b: CoefFn<T>,
}

impl<T: Real> ErknMethod<T> {
    pub fn new(
        name: impl Into<String>,
        c1: T,
        bbar: impl Fn(T) -> T + Send + Sync + 'static,
        b: impl Fn(T) -> T + Send + Sync + 'static,
    ) -> Self {
        Self {
            name: name.into(),
            c1,
            bbar: Arc::new(bbar),
            b: Arc::new(b),
        }
    }

    /// The symplectic family `b1 = d1 cos((1-c1)ν)`, `b̄1 = d1 (1-c1) sinc((1-c1)ν)`.
    pub fn symplectic_family(name: impl Into<String>, c1: T, d1: T) -> Self {
        let r = T::one() - c1;
        Self::new(name, c1, move |nu| d1 * r * sinc(r * nu), move |nu| d1 * (r * nu).cos())
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn c1(&self) -> T {
        self.c1
    }

    /// `b̄1(ν)`, the weight of the force in the position update.
    pub fn bbar(&self, nu: T) -> T {
        (self.bbar)(nu)
    }

    /// `b1(ν)`, the weight of the force in the momentum update.
    pub fn b(&self, nu: T) -> T {
        (self.b)(nu)
    }

    /// Looks up one of the built-in methods `ERKN1`..`ERKN6` (case-insensitive).
    pub fn by_name(name: &str) -> Option<Self> {
        registry().into_iter().find(|m| m.name.eq_ignore_ascii_case(name))
    }

    pub fn step(&self, sys: &System<T>, h: T, s: &State<T>) -> Result<State<T>> {
        erkn_step(self, sys, h, s)
    }
}

impl<T: Real> fmt::Debug for ErknMethod<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ErknMethod")
            .field("name", &self.name)
            .field("c1", &self.c1)
            .finish_non_exhaustive()
    }
}

impl<T: Real> Integrator<T> for ErknMethod<T> {
    fn name(&self) -> &str {
        &self.name
    }

    fn step(&self, sys: &System<T>, h: T, s: &State<T>) -> Result<State<T>> {
        erkn_step(self, sys, h, s)
    }
}

/// The six methods ERKN1..ERKN6.
pub fn registry<T: Real>() -> Vec<ErknMethod<T>> {
    let half = T::lit(0.5);
    let cos = |x: T| x.cos();
    vec![
        // neither symmetric nor symplectic
        ErknMethod::new(
            "ERKN1",
            half,
            move |nu| half * sinc(half * nu).powi(2),
            move |nu| cos(half * nu),
        ),
        // symmetric and symplectic
        ErknMethod::new(
            "ERKN2",
            half,
            move |nu| half * sinc(half * nu),
            move |nu| cos(half * nu),
        ),
        // symmetric
        ErknMethod::new(
            "ERKN3",
            half,
            move |nu| half * sinc(nu) * cos(half * nu),
            move |nu| cos(half * nu).powi(3),
        ),
        ErknMethod::new(
            "ERKN4",
            half,
            move |nu| half * sinc(half * nu).powi(2),
            move |nu| sinc(half * nu) * cos(half * nu),
        ),
        // symplectic
        ErknMethod::new(
            "ERKN5",
            T::lit(0.4),
            |nu| T::lit(0.6) * sinc(T::lit(0.6) * nu),
            |nu: T| (T::lit(0.6) * nu).cos(),
        ),
        ErknMethod::new(
            "ERKN6",
            T::lit(0.2),
            |nu| T::lit(0.8) * sinc(T::lit(0.8) * nu),
            |nu: T| (T::lit(0.8) * nu).cos(),
        ),
    ]
}

/// Linear-flow block scalars of a (possibly negative) step `h`:
/// `cos(hΩ)`, `h sinc(hΩ)` and `-Ω sin(hΩ)`.
pub(crate) struct Rotation<T> {
    pub cos: BlockScalar<T>,
    pub h_sinc: BlockScalar<T>,
    pub neg_omega_sin: BlockScalar<T>,
}

impl<T: Real> Rotation<T> {
    pub fn new(h: T, omega: T) -> Self {
        let nu = h * omega;
        Self {
            cos: BlockScalar::new(T::one(), nu.cos()),
            h_sinc: BlockScalar::new(h, h * sinc(nu)),
            neg_omega_sin: BlockScalar::new(T::zero(), -(omega * nu.sin())),
        }
    }
}

/// Advances `s` by one step of size `h`.
pub fn erkn_step<T: Real>(m: &ErknMethod<T>, sys: &System<T>, h: T, s: &State<T>) -> Result<State<T>> {
    let part = sys.partition();
    part.check_state(s)?;
    let omega = part.omega();

    let inner = Rotation::new(m.c1 * h, omega);
    let stage = block_combine(&[(inner.cos, &s.q), (inner.h_sinc, &s.p)], part);
    let g = sys.force(&stage)?;

    let rot = Rotation::new(h, omega);
    let bbar = block_eval(|nu| m.bbar(nu), h, part).scale(h * h);
    let b = block_eval(|nu| m.b(nu), h, part).scale(h);
    check_finite_block(&bbar, h * omega)?;
    check_finite_block(&b, h * omega)?;

    let q = block_combine(&[(rot.cos, &s.q), (rot.h_sinc, &s.p), (bbar, &g)], part);
    let p = block_combine(&[(rot.neg_omega_sin, &s.q), (rot.cos, &s.p), (b, &g)], part);
    Ok(State { q, p })
}

/// Outcome of a coefficient-identity check over a grid of `ν` values.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConditionReport<T> {
    pub pass: bool,
    pub max_residual: T,
    /// Symplecticity constant `d1 = b1(0)`; `None` for the symmetry check.
    pub d1: Option<T>,
}

/// `ν ∈ {0.1 k : k = 0..=100}`.
pub fn default_grid<T: Real>() -> Vec<T> {
    grid(T::lit(10.0), 100)
}

/// `n + 1` equally spaced points on `[0, nu_max]`.
pub fn grid<T: Real>(nu_max: T, n: usize) -> Vec<T> {
    (0..=n).map(|k| nu_max * T::from_count(k) / T::from_count(n)).collect()
}

/// Symmetry test: `c1 = ½` and `(1 + cos ν) b̄1(ν) = sinc(ν) b1(ν)` on the grid.
pub fn check_symmetry<T: Real>(m: &ErknMethod<T>, grid: &[T]) -> ConditionReport<T> {
    let residual = |nu: T| ((T::one() + nu.cos()) * m.bbar(nu) - sinc(nu) * m.b(nu)).abs();
    let max_residual = std::iter::once(T::zero())
        .chain(grid.iter().copied())
        .map(residual)
        .fold(T::zero(), T::max);
    ConditionReport {
        pass: m.c1 == T::lit(0.5) && max_residual <= T::identity_tol(),
        max_residual,
        d1: None,
    }
}

/// Symplecticity test: `b1(ν) = d1 cos((1-c1)ν)` and
/// `b̄1(ν) = d1 (1-c1) sinc((1-c1)ν)` on the grid, with `d1 = b1(0)`.
pub fn check_symplecticity<T: Real>(m: &ErknMethod<T>, grid: &[T]) -> ConditionReport<T> {
    let d1 = m.b(T::zero());
    let r = T::one() - m.c1;
    let residual = |nu: T| {
        let rb = (m.b(nu) - d1 * (r * nu).cos()).abs();
        let rbbar = (m.bbar(nu) - d1 * r * sinc(r * nu)).abs();
        rb.max(rbbar)
    };
    let max_residual = std::iter::once(T::zero())
        .chain(grid.iter().copied())
        .map(residual)
        .fold(T::zero(), T::max);
    ConditionReport {
        pass: max_residual <= T::identity_tol(),
        max_residual,
        d1: Some(d1),
    }
}

pub(crate) fn non_symmetric(m: &ErknMethod<impl Real>) -> Error {
    Error::NonSymmetricMethod {
        method: m.name.clone(),
        c1: m.c1.to_f64().unwrap_or(f64::NAN),
    }
}
