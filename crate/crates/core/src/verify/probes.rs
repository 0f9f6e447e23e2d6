//! Numerical probes of the symmetry and symplecticity of a one-step map.

use std::fmt;

use crate::error::{Error, Result};
use crate::methods::Integrator;
use crate::scalar::Real;
use crate::systems::{State, System};

/// Default central-difference perturbation for [`symplecticity_defect`].
pub const DEFAULT_FD_EPS: f64 = 1e-5;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DefectKind {
    Adjoint,
    Symplecticity,
}

impl fmt::Display for DefectKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DefectKind::Adjoint => "adjoint",
            DefectKind::Symplecticity => "symplecticity",
        })
    }
}

/// A structure defect measured in the max-norm.
#[derive(Debug, Clone, PartialEq)]
pub struct DefectReport<T> {
    pub method: String,
    pub kind: DefectKind,
    pub defect: T,
    pub h: T,
    pub context: String,
}

impl<T: Real> DefectReport<T> {
    pub fn adjoint<M: Integrator<T> + ?Sized>(m: &M, sys: &System<T>, h: T, s: &State<T>) -> Result<Self> {
        Ok(Self {
            method: m.name().to_owned(),
            kind: DefectKind::Adjoint,
            defect: adjoint_defect(m, sys, h, s)?,
            h,
            context: sys.label().to_owned(),
        })
    }

    pub fn symplecticity<M: Integrator<T> + ?Sized>(
        m: &M,
        sys: &System<T>,
        h: T,
        s: &State<T>,
        fd_eps: T,
    ) -> Result<Self> {
        Ok(Self {
            method: m.name().to_owned(),
            kind: DefectKind::Symplecticity,
            defect: symplecticity_defect(m, sys, h, s, fd_eps)?,
            h,
            context: format!("{} fd_eps={fd_eps}", sys.label()),
        })
    }
}

/// `‖Φ_{-h}(Φ_h(s)) - s‖_∞`; zero up to roundoff exactly for symmetric maps.
pub fn adjoint_defect<T: Real, M: Integrator<T> + ?Sized>(m: &M, sys: &System<T>, h: T, s: &State<T>) -> Result<T> {
    let fwd = m.step(sys, h, s)?;
    let back = m.step(sys, -h, &fwd)?;
    Ok(back.max_abs_diff(s))
}

/// Jacobian of the step map in `(q, p)` coordinates by central differences,
/// stored row-major as `jac[i][j] = ∂x⁺_i/∂x_j`.
pub fn step_jacobian<T: Real, M: Integrator<T> + ?Sized>(
    m: &M,
    sys: &System<T>,
    h: T,
    s: &State<T>,
    fd_eps: T,
) -> Result<Vec<Vec<T>>> {
    if !(fd_eps > T::zero()) {
        return Err(Error::InvalidArgument(format!("fd_eps must be positive, got {fd_eps}")));
    }
    sys.partition().check_state(s)?;
    let x0 = s.to_flat();
    let n = x0.len();
    let mut jac = vec![vec![T::zero(); n]; n];
    let two_eps = fd_eps + fd_eps;
    let mut x = x0.clone();
    for j in 0..n {
        x[j] = x0[j] + fd_eps;
        let plus = m.step(sys, h, &State::from_flat(&x)?)?.to_flat();
        x[j] = x0[j] - fd_eps;
        let minus = m.step(sys, h, &State::from_flat(&x)?)?.to_flat();
        x[j] = x0[j];
        for i in 0..n {
            jac[i][j] = (plus[i] - minus[i]) / two_eps;
        }
    }
    Ok(jac)
}

/// `max |MᵀJM - J|` for the finite-difference Jacobian `M` of the step map,
/// with `J = [[0, I], [-I, 0]]`.
pub fn symplecticity_defect<T: Real, M: Integrator<T> + ?Sized>(
    m: &M,
    sys: &System<T>,
    h: T,
    s: &State<T>,
    fd_eps: T,
) -> Result<T> {
    let jac = step_jacobian(m, sys, h, s, fd_eps)?;
    Ok(symplectic_residual(&jac))
}

/// `max |MᵀJM - J|` for a square matrix of even order.
pub fn symplectic_residual<T: Real>(jac: &[Vec<T>]) -> T {
    let n = jac.len();
    let d = n / 2;
    // (MᵀJM)_{ab} = Σ_k M_{k,a} M_{k+d,b} - M_{k+d,a} M_{k,b}
    let mut worst = T::zero();
    for a in 0..n {
        for b in 0..n {
            let form = (0..d).fold(T::zero(), |acc, k| {
                acc + jac[k][a] * jac[k + d][b] - jac[k + d][a] * jac[k][b]
            });
            let target = if b == a + d && a < d {
                T::one()
            } else if a == b + d && b < d {
                -T::one()
            } else {
                T::zero()
            };
            worst = worst.max((form - target).abs());
        }
    }
    worst
}
