//! Checks of the stepsize, non-resonance and coefficient-bound assumptions
//! under which the long-time energy results hold.

use crate::error::{Error, Result};
use crate::methods::ErknMethod;
use crate::oscfun::sinc;
use crate::scalar::Real;

/// Largest `k` tried by [`non_resonance_max_n`].
pub const MAX_RESONANCE_ORDER: usize = 10_000;

/// Largest `N` with `|sin(½ k hω)| ≥ c √h` for every `k = 1..=N`
/// (0 if the condition already fails at `k = 1`), capped at [`MAX_RESONANCE_ORDER`].
pub fn non_resonance_max_n<T: Real>(h: T, omega: T, c: T) -> usize {
    let threshold = c * h.sqrt();
    let half_nu = T::lit(0.5) * h * omega;
    (1..=MAX_RESONANCE_ORDER)
        .take_while(|&k| (T::from_count(k) * half_nu).sin().abs() >= threshold)
        .count()
}

/// Lower stepsize bound `hω ≥ c0`.
pub fn stepsize_bound_holds<T: Real>(h: T, omega: T, c0: T) -> bool {
    h * omega >= c0
}

/// `σ(ν) = sinc(ν) cos(ν/2) / (2 b̄1(ν)) + ν² sinc(ν) ½ sinc(ν/2) / (2 b1(ν))`.
pub fn sigma<T: Real>(m: &ErknMethod<T>, nu: T) -> Result<T> {
    let bbar = m.bbar(nu);
    let b = m.b(nu);
    let tiny = T::lit(1e-14);
    if bbar.abs() <= tiny || b.abs() <= tiny {
        return Err(Error::ZeroCoefficient {
            nu: nu.to_f64().unwrap_or(f64::NAN),
        });
    }
    let half = T::lit(0.5);
    let two = T::lit(2.0);
    let s = sinc(nu);
    Ok(s * (half * nu).cos() / (two * bbar) + nu * nu * s * (half * sinc(half * nu)) / (two * b))
}

/// Bounds on `σ` and the constants used to assess the assumptions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AssumptionConfig<T> {
    /// Non-resonance constant `c`.
    pub c: T,
    /// Stepsize lower bound `c0` on `hω`.
    pub c0: T,
    /// Lower bound on `±σ`.
    pub sigma_lo: T,
    /// Upper bound on `±σ`.
    pub sigma_hi: T,
}

impl<T: Real> Default for AssumptionConfig<T> {
    fn default() -> Self {
        Self {
            c: T::one(),
            c0: T::lit(0.1),
            sigma_lo: T::lit(0.1),
            sigma_hi: T::lit(10.0),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AssumptionReport<T> {
    pub h_omega: T,
    pub c: T,
    pub c0: T,
    pub stepsize_bound: bool,
    pub max_n: usize,
    /// `σ(0)`, or the reason it is undefined.
    pub sigma_at_0: Result<T>,
    /// `σ(hω)`, or the reason it is undefined.
    pub sigma_at_nu: Result<T>,
    pub sigma_pass: bool,
}

/// `sigma_lo ≤ σ ≤ sigma_hi` at both points, or the same for `-σ`.
pub fn sigma_bound_holds<T: Real>(values: &[T], lo: T, hi: T) -> bool {
    let within = |sign: T| values.iter().all(|&v| lo <= sign * v && sign * v <= hi);
    lo > T::zero() && (within(T::one()) || within(-T::one()))
}

pub fn assess<T: Real>(m: &ErknMethod<T>, h: T, omega: T, cfg: &AssumptionConfig<T>) -> AssumptionReport<T> {
    let nu = h * omega;
    let sigma_at_0 = sigma(m, T::zero());
    let sigma_at_nu = sigma(m, nu);
    let sigma_pass = match (&sigma_at_0, &sigma_at_nu) {
        (Ok(a), Ok(b)) => sigma_bound_holds(&[*a, *b], cfg.sigma_lo, cfg.sigma_hi),
        _ => false,
    };
    AssumptionReport {
        h_omega: nu,
        c: cfg.c,
        c0: cfg.c0,
        stepsize_bound: stepsize_bound_holds(h, omega, cfg.c0),
        max_n: non_resonance_max_n(h, omega, cfg.c),
        sigma_at_0,
        sigma_at_nu,
        sigma_pass,
    }
}
