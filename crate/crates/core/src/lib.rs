//! One-stage explicit extended Runge-Kutta-Nyström (ERKN) integrators for
//! highly oscillatory Hamiltonian systems `q'' + Ω²q = -∇U(q)` with
//! `Ω = diag(0, ω I)`.
//!
//! Besides the integrators themselves the crate provides their conjugate
//! trigonometric integrators obtained from a Strang splitting, algebraic and
//! numerical checks of symmetry and symplecticity, and drift analytics for
//! long-time energy experiments on the Fermi-Pasta-Ulam problem.
//!
//! Everything is generic over [`Real`] (`f32` or `f64`); the `*64` aliases
//! below fix the double-precision types used by the command-line tools.

// `!(x > 0)` style guards are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod methods;
pub mod oscfun;
pub mod scalar;
pub mod splitting;
pub mod systems;
pub mod verify;

pub use error::{Error, Result};
pub use methods::{
    check_symmetry, check_symplecticity, default_grid, erkn_step, registry, CoefFn, ConditionReport, ErknMethod,
    Integrator, METHOD_NAMES,
};
pub use oscfun::{block_apply, block_eval, phi_series, sinc, BlockScalar};
pub use scalar::Real;
pub use splitting::{
    conjugacy_check, flow_kick, flow_linear, strang_lnl_step, trig_step, trig_step_composed, upsilon_from,
    ConjugacyReport, TrigMethod, Upsilon,
};
pub use systems::{
    fpu_initial, fpu_system, linear_system, DriftRecord, FnPotential, FpuPotential, Partition, Potential, State,
    System, ZeroPotential,
};

pub type Partition64 = Partition<f64>;
pub type State64 = State<f64>;
pub type System64 = System<f64>;
pub type ErknMethod64 = ErknMethod<f64>;
pub type TrigMethod64 = TrigMethod<f64>;
pub type DriftRecord64 = DriftRecord<f64>;
pub type BlockScalar64 = BlockScalar<f64>;

pub type Partition32 = Partition<f32>;
pub type State32 = State<f32>;
pub type System32 = System<f32>;
pub type ErknMethod32 = ErknMethod<f32>;
pub type TrigMethod32 = TrigMethod<f32>;
