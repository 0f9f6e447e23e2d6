//! Strang splitting of the ERKN step into linear rotations and filtered kicks,
//! and the trigonometric integrator obtained by reordering the splitting.
//!
//! For a symmetric method there is a filter `Υ` with
//! `½ sinc(ν/2) Υ(ν) = b̄1(ν)` and `cos(ν/2) Υ(ν) = b1(ν)`, and then
//!
//! ```text
//! Φ_h = L_{h/2} ∘ K_h ∘ L_{h/2}        (the ERKN step)
//! Φ̂_h = K_{h/2} ∘ L_h ∘ K_{h/2}        (trigonometric integrator)
//! ```
//!
//! where `L_t` is the exact flow of `q'' = -Ω²q` and `K_t` is the kick
//! `p += t Υ(hΩ) g(q)`. The kicks always evaluate `Υ` at the outer step's
//! `ν = hω`; only the increment changes.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::methods::{
    check_symmetry, default_grid, erkn_step, non_symmetric, CoefFn, ErknMethod, Integrator, Rotation,
};
use crate::oscfun::{block_combine, check_finite_block, sinc, BlockScalar};
use crate::scalar::Real;
use crate::systems::{Partition, State, System};

/// Distance from a pole of `Υ` (zero of `cos(ν/2)`) treated as resonant.
pub const RESONANCE_GUARD: f64 = 1e-8;

/// Exact flow of the linear part over time `h` (any sign).
pub fn flow_linear<T: Real>(part: &Partition<T>, h: T, s: &State<T>) -> Result<State<T>> {
    part.check_state(s)?;
    let rot = Rotation::new(h, part.omega());
    Ok(State {
        q: block_combine(&[(rot.cos, &s.q), (rot.h_sinc, &s.p)], part),
        p: block_combine(&[(rot.neg_omega_sin, &s.q), (rot.cos, &s.p)], part),
    })
}

/// Kick `p ↦ p + h Υ g(q)` with a pre-evaluated filter `upsilon`.
pub fn flow_kick<T: Real>(sys: &System<T>, upsilon: BlockScalar<T>, h: T, s: &State<T>) -> Result<State<T>> {
    let part = sys.partition();
    part.check_state(s)?;
    let g = sys.force(&s.q)?;
    Ok(State {
        q: s.q.clone(),
        p: block_combine(&[(BlockScalar::one(), &s.p), (upsilon.scale(h), &g)], part),
    })
}

/// The averaged-equation filter `Υ(ν) = b1(ν) / cos(ν/2)` of a symmetric method.
#[derive(Clone)]
pub struct Upsilon<T> {
    method: ErknMethod<T>,
}

impl<T: Real> Upsilon<T> {
    pub fn method(&self) -> &ErknMethod<T> {
        &self.method
    }

    /// `Υ(ν)`; fails within [`RESONANCE_GUARD`] of a zero of `cos(ν/2)`.
    pub fn eval(&self, nu: T) -> Result<T> {
        let c = (T::lit(0.5) * nu).cos();
        if c.abs() < T::lit(RESONANCE_GUARD) {
            return Err(Error::ResonantStepsize {
                nu: nu.to_f64().unwrap_or(f64::NAN),
            });
        }
        Ok(self.method.b(nu) / c)
    }

    /// The second expression `2 b̄1(ν) / sinc(ν/2)`, equal to `eval` off poles.
    pub fn eval_alt(&self, nu: T) -> T {
        T::lit(2.0) * self.method.bbar(nu) / sinc(T::lit(0.5) * nu)
    }

    pub fn block(&self, h: T, part: &Partition<T>) -> Result<BlockScalar<T>> {
        Ok(BlockScalar::new(self.eval(T::zero())?, self.eval(h * part.omega())?))
    }
}

impl<T: Real> fmt::Debug for Upsilon<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Upsilon").field("method", &self.method.name()).finish()
    }
}

/// Builds `Υ` for `m`, checking both of its expressions agree on the default grid.
pub fn upsilon_from<T: Real>(m: &ErknMethod<T>) -> Result<Upsilon<T>> {
    upsilon_on_grid(m, &default_grid())
}

pub fn upsilon_on_grid<T: Real>(m: &ErknMethod<T>, grid: &[T]) -> Result<Upsilon<T>> {
    if m.c1() != T::lit(0.5) {
        return Err(non_symmetric(m));
    }
    let ups = Upsilon { method: m.clone() };
    for &nu in grid {
        let Ok(a) = ups.eval(nu) else { continue };
        let b = ups.eval_alt(nu);
        let residual = (a - b).abs();
        if !(residual <= T::identity_tol() * T::one().max(a.abs())) {
            return Err(Error::InconsistentFilter {
                method: m.name().to_owned(),
                nu: nu.to_f64().unwrap_or(f64::NAN),
                residual: residual.to_f64().unwrap_or(f64::NAN),
            });
        }
    }
    // consistent filters with c1 = ½ are exactly the symmetric methods
    if !check_symmetry(m, grid).pass {
        return Err(non_symmetric(m));
    }
    Ok(ups)
}

/// `L_{h/2} ∘ K_h ∘ L_{h/2}` with the method's filter.
pub fn strang_lnl_step<T: Real>(m: &ErknMethod<T>, sys: &System<T>, h: T, s: &State<T>) -> Result<State<T>> {
    let ups = upsilon_from(m)?;
    strang_lnl_with(&ups, sys, h, s)
}

pub fn strang_lnl_with<T: Real>(ups: &Upsilon<T>, sys: &System<T>, h: T, s: &State<T>) -> Result<State<T>> {
    let part = sys.partition();
    let half = T::lit(0.5) * h;
    let filt = ups.block(h, part)?;
    let s = flow_linear(part, half, s)?;
    let s = flow_kick(sys, filt, h, &s)?;
    flow_linear(part, half, &s)
}

/// Trigonometric integrator with filter functions `Φ, Ψ, Ψ₀, Ψ₁`:
///
/// ```text
/// q⁺ = cos(hΩ) q + h sinc(hΩ) p + ½h² Ψ g(Φq)
/// p⁺ = -Ω sin(hΩ) q + cos(hΩ) p + ½h (Ψ₀ g(Φq) + Ψ₁ g(Φq⁺))
/// ```
#[derive(Clone)]
pub struct TrigMethod<T> {
    name: String,
    pub phi: CoefFn<T>,
    pub psi: CoefFn<T>,
    pub psi0: CoefFn<T>,
    pub psi1: CoefFn<T>,
    upsilon: Option<Upsilon<T>>,
}

impl<T: Real> TrigMethod<T> {
    pub fn new(name: impl Into<String>, phi: CoefFn<T>, psi: CoefFn<T>, psi0: CoefFn<T>, psi1: CoefFn<T>) -> Self {
        Self {
            name: name.into(),
            phi,
            psi,
            psi0,
            psi1,
            upsilon: None,
        }
    }

    /// `Φ = 1, Ψ = sinc·Υ, Ψ₀ = cos·Υ, Ψ₁ = Υ`.
    pub fn from_upsilon(ups: Upsilon<T>) -> Self {
        let filt = |u: &Upsilon<T>| {
            let u = u.clone();
            move |nu: T| u.eval(nu).unwrap_or(T::nan())
        };
        let f = filt(&ups);
        let psi: CoefFn<T> = Arc::new(move |nu| sinc(nu) * f(nu));
        let f = filt(&ups);
        let psi0: CoefFn<T> = Arc::new(move |nu: T| nu.cos() * f(nu));
        let psi1: CoefFn<T> = Arc::new(filt(&ups));
        Self {
            name: format!("trig:{}", ups.method().name()),
            phi: Arc::new(|_| T::one()),
            psi,
            psi0,
            psi1,
            upsilon: Some(ups),
        }
    }

    /// The trigonometric conjugate of a symmetric ERKN method.
    pub fn from_erkn(m: &ErknMethod<T>) -> Result<Self> {
        upsilon_from(m).map(Self::from_upsilon)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn upsilon(&self) -> Option<&Upsilon<T>> {
        self.upsilon.as_ref()
    }
}

impl<T: Real> fmt::Debug for TrigMethod<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TrigMethod")
            .field("name", &self.name)
            .finish_non_exhaustive()
    }
}

impl<T: Real> Integrator<T> for TrigMethod<T> {
    fn name(&self) -> &str {
        &self.name
    }

    fn step(&self, sys: &System<T>, h: T, s: &State<T>) -> Result<State<T>> {
        trig_step(self, sys, h, s)
    }
}

fn eval_block<T: Real>(f: &CoefFn<T>, h: T, part: &Partition<T>) -> Result<BlockScalar<T>> {
    let nu = h * part.omega();
    let b = BlockScalar::new(f(T::zero()), f(nu));
    check_finite_block(&b, nu)?;
    Ok(b)
}

/// One step of the trigonometric integrator in closed form.
pub fn trig_step<T: Real>(tm: &TrigMethod<T>, sys: &System<T>, h: T, s: &State<T>) -> Result<State<T>> {
    let part = sys.partition();
    part.check_state(s)?;
    if let Some(ups) = &tm.upsilon {
        ups.block(h, part)?;
    }
    let phi = eval_block(&tm.phi, h, part)?;
    let half_h = T::lit(0.5) * h;
    let psi = eval_block(&tm.psi, h, part)?.scale(half_h * h);
    let psi0 = eval_block(&tm.psi0, h, part)?.scale(half_h);
    let psi1 = eval_block(&tm.psi1, h, part)?.scale(half_h);
    let rot = Rotation::new(h, part.omega());

    let g0 = sys.force(&phi.apply(&s.q, part)?)?;
    let q = block_combine(&[(rot.cos, &s.q), (rot.h_sinc, &s.p), (psi, &g0)], part);
    let g1 = sys.force(&phi.apply(&q, part)?)?;
    let p = block_combine(
        &[(rot.neg_omega_sin, &s.q), (rot.cos, &s.p), (psi0, &g0), (psi1, &g1)],
        part,
    );
    Ok(State { q, p })
}

/// `K_{h/2} ∘ L_h ∘ K_{h/2}`; requires a method built from a filter.
pub fn trig_step_composed<T: Real>(tm: &TrigMethod<T>, sys: &System<T>, h: T, s: &State<T>) -> Result<State<T>> {
    let ups = tm
        .upsilon
        .as_ref()
        .ok_or_else(|| Error::InvalidArgument(format!("{} has no splitting filter", tm.name)))?;
    let part = sys.partition();
    let filt = ups.block(h, part)?;
    let half = T::lit(0.5) * h;
    let s = flow_kick(sys, filt, half, s)?;
    let s = flow_linear(part, h, &s)?;
    flow_kick(sys, filt, half, &s)
}

/// Deviations between `n` ERKN steps and the two wrapped trigonometric forms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConjugacyReport<T> {
    /// `L_{-h/2} K_{-h/2} Φ̂_h^n K_{h/2} L_{h/2}` versus `Φ_h^n`.
    pub inverse_wrapped: T,
    /// `L_{h/2} K_{h/2} Φ̂_h^{n-1} K_{h/2} L_{h/2}` versus `Φ_h^n`.
    pub forward_wrapped: T,
    pub max_deviation: T,
}

/// Checks numerically that `n` steps of a symmetric ERKN method are conjugate
/// to `n` (or `n - 1`) steps of its trigonometric integrator.
pub fn conjugacy_check<T: Real>(
    m: &ErknMethod<T>,
    sys: &System<T>,
    h: T,
    s: &State<T>,
    n: usize,
) -> Result<ConjugacyReport<T>> {
    if n == 0 {
        return Err(Error::InvalidArgument("conjugacy check needs n >= 1".into()));
    }
    let ups = upsilon_from(m)?;
    let tm = TrigMethod::from_upsilon(ups.clone());
    let part = sys.partition();
    let filt = ups.block(h, part)?;
    let half = T::lit(0.5) * h;

    let mut direct = s.clone();
    for _ in 0..n {
        direct = erkn_step(m, sys, h, &direct)?;
    }

    let mut inner = flow_kick(sys, filt, half, &flow_linear(part, half, s)?)?;
    for _ in 1..n {
        inner = trig_step(&tm, sys, h, &inner)?;
    }
    let forward = flow_linear(part, half, &flow_kick(sys, filt, half, &inner)?)?;
    inner = trig_step(&tm, sys, h, &inner)?;
    let inverse = flow_linear(part, -half, &flow_kick(sys, filt, -half, &inner)?)?;

    let inverse_wrapped = direct.max_abs_diff(&inverse);
    let forward_wrapped = direct.max_abs_diff(&forward);
    Ok(ConjugacyReport {
        inverse_wrapped,
        forward_wrapped,
        max_deviation: inverse_wrapped.max(forward_wrapped),
    })
}
