//! Highly oscillatory Hamiltonian systems `q'' + Ω²q = g(q)`, their energies,
//! and the benchmark problems.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::scalar::{norm_sq, Real};

/// Splits the configuration space into a slow block of length `d1`
/// and a fast block of length `d2` oscillating at frequency `omega`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Partition<T> {
    d1: usize,
    d2: usize,
    omega: T,
}

impl<T: Real> Partition<T> {
    pub fn new(d1: usize, d2: usize, omega: T) -> Result<Self> {
        if d1 + d2 == 0 {
            return Err(Error::InvalidPartition("d1 + d2 must be at least 1".into()));
        }
        if !omega.is_finite() || omega < T::zero() {
            return Err(Error::InvalidPartition(format!(
                "omega must be finite and nonnegative, got {omega}"
            )));
        }
        Ok(Self { d1, d2, omega })
    }

    pub fn d1(&self) -> usize {
        self.d1
    }

    pub fn d2(&self) -> usize {
        self.d2
    }

    pub fn omega(&self) -> T {
        self.omega
    }

    pub fn dim(&self) -> usize {
        self.d1 + self.d2
    }

    pub(crate) fn check_len(&self, len: usize) -> Result<()> {
        if len == self.dim() {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: len,
            })
        }
    }

    pub fn check_state(&self, s: &State<T>) -> Result<()> {
        self.check_len(s.q.len())?;
        self.check_len(s.p.len())
    }

    /// `½‖p₂‖² + ½ω²‖q₂‖²`, the energy stored in the fast block.
    pub fn oscillatory_energy(&self, s: &State<T>) -> Result<T> {
        self.check_state(s)?;
        Ok(self.fast_energy(s))
    }

    /// `½‖p‖² + ½‖Ωq‖²`, the quadratic part of the Hamiltonian.
    pub fn quadratic_energy(&self, s: &State<T>) -> Result<T> {
        self.check_state(s)?;
        Ok(self.slow_kinetic(s) + self.fast_energy(s))
    }

    /// True iff the quadratic energy of `s` does not exceed `bound`.
    pub fn has_finite_energy(&self, s: &State<T>, bound: T) -> Result<bool> {
        Ok(self.quadratic_energy(s)? <= bound)
    }

    fn fast_energy(&self, s: &State<T>) -> T {
        let half = T::lit(0.5);
        let w = self.omega;
        let pot: T = s.q[self.d1..].iter().map(|&x| (w * x) * (w * x)).sum();
        half * norm_sq(&s.p[self.d1..]) + half * pot
    }

    fn slow_kinetic(&self, s: &State<T>) -> T {
        T::lit(0.5) * norm_sq(&s.p[..self.d1])
    }
}

/// Positions and momenta, each stored slow block first.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct State<T> {
    pub q: Vec<T>,
    pub p: Vec<T>,
}

impl<T: Real> State<T> {
    pub fn new(q: Vec<T>, p: Vec<T>) -> Result<Self> {
        if q.len() != p.len() {
            return Err(Error::DimensionMismatch {
                expected: q.len(),
                found: p.len(),
            });
        }
        Ok(Self { q, p })
    }

    pub fn zeros(dim: usize) -> Self {
        Self {
            q: vec![T::zero(); dim],
            p: vec![T::zero(); dim],
        }
    }

    pub fn dim(&self) -> usize {
        self.q.len()
    }

    pub fn is_finite(&self) -> bool {
        self.q.iter().chain(&self.p).all(|x| x.is_finite())
    }

    /// Max-norm distance over both positions and momenta.
    pub fn max_abs_diff(&self, other: &Self) -> T {
        crate::scalar::max_abs_diff(&self.q, &other.q).max(crate::scalar::max_abs_diff(&self.p, &other.p))
    }

    /// Flattens to `(q, p)`, the coordinate order used for Jacobians.
    pub fn to_flat(&self) -> Vec<T> {
        self.q.iter().chain(&self.p).copied().collect()
    }

    pub fn from_flat(x: &[T]) -> Result<Self> {
        if !x.len().is_multiple_of(2) {
            return Err(Error::InvalidArgument(format!(
                "flat state must have even length, got {}",
                x.len()
            )));
        }
        let (q, p) = x.split_at(x.len() / 2);
        Self::new(q.to_vec(), p.to_vec())
    }
}

/// The nonlinear part `U` of a Hamiltonian together with its force `g = -∇U`.
///
/// Implementations must be reentrant; they are shared across threads.
pub trait Potential<T>: Send + Sync {
    fn value(&self, q: &[T]) -> T;

    fn force(&self, q: &[T]) -> Vec<T>;
}

/// `U ≡ 0`.
#[derive(Debug, Clone, Copy, Default)]
pub struct ZeroPotential;

impl<T: Real> Potential<T> for ZeroPotential {
    fn value(&self, _q: &[T]) -> T {
        T::zero()
    }

    fn force(&self, q: &[T]) -> Vec<T> {
        vec![T::zero(); q.len()]
    }
}

type ValueFn<T> = Box<dyn Fn(&[T]) -> T + Send + Sync>;
type ForceFn<T> = Box<dyn Fn(&[T]) -> Vec<T> + Send + Sync>;

/// Potential assembled from a pair of closures.
pub struct FnPotential<T> {
    value: ValueFn<T>,
    force: ForceFn<T>,
}

impl<T> FnPotential<T> {
    pub fn new(
        value: impl Fn(&[T]) -> T + Send + Sync + 'static,
        force: impl Fn(&[T]) -> Vec<T> + Send + Sync + 'static,
    ) -> Self {
        Self {
            value: Box::new(value),
            force: Box::new(force),
        }
    }
}

impl<T> Potential<T> for FnPotential<T> {
    fn value(&self, q: &[T]) -> T {
        (self.value)(q)
    }

    fn force(&self, q: &[T]) -> Vec<T> {
        (self.force)(q)
    }
}

/// Quartic coupling of the Fermi-Pasta-Ulam chain of `m` stiff and `m` soft springs.
///
/// With coordinates `x = (x₁..x_m, x_{m+1}..x_{2m})` (slow block first),
/// `U = ¼[(x₁ - x_{m+1})⁴ + Σ_{i<m} (x_{i+1} - x_{m+i+1} - x_i - x_{m+i})⁴ + (x_m + x_{2m})⁴]`.
#[derive(Debug, Clone, Copy)]
pub struct FpuPotential {
    m: usize,
}

impl FpuPotential {
    pub fn new(m: usize) -> Self {
        assert!(m >= 1, "FPU chain needs at least one spring pair");
        Self { m }
    }

    /// Soft-spring elongations `a_j` and the coordinate weights `∂a_j/∂x_k`.
    fn for_each_term<T: Real>(&self, x: &[T], mut f: impl FnMut(T, &[(usize, T)])) {
        let m = self.m;
        let one = T::one();
        f(x[0] - x[m], &[(0, one), (m, -one)]);
        for i in 0..m - 1 {
            let a = x[i + 1] - x[m + i + 1] - x[i] - x[m + i];
            f(a, &[(i + 1, one), (m + i + 1, -one), (i, -one), (m + i, -one)]);
        }
        f(x[m - 1] + x[2 * m - 1], &[(m - 1, one), (2 * m - 1, one)]);
    }
}

impl<T: Real> Potential<T> for FpuPotential {
    fn value(&self, q: &[T]) -> T {
        let mut sum = T::zero();
        self.for_each_term(q, |a, _| {
            let a2 = a * a;
            sum = sum + a2 * a2;
        });
        T::lit(0.25) * sum
    }

    fn force(&self, q: &[T]) -> Vec<T> {
        let mut g = vec![T::zero(); q.len()];
        self.for_each_term(q, |a, weights| {
            let a3 = a * a * a;
            for &(k, w) in weights {
                g[k] = g[k] - w * a3;
            }
        });
        g
    }
}

/// A partitioned second-order system `q'' + Ω²q = -∇U(q)`.
#[derive(Clone)]
pub struct System<T> {
    partition: Partition<T>,
    potential: Arc<dyn Potential<T>>,
    label: String,
}

impl<T: Real> System<T> {
    pub fn new(partition: Partition<T>, potential: Arc<dyn Potential<T>>, label: impl Into<String>) -> Self {
        Self {
            partition,
            potential,
            label: label.into(),
        }
    }

    pub fn partition(&self) -> &Partition<T> {
        &self.partition
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn potential(&self, q: &[T]) -> Result<T> {
        self.partition.check_len(q.len())?;
        Ok(self.potential.value(q))
    }

    /// `g(q) = -∇U(q)`.
    pub fn force(&self, q: &[T]) -> Result<Vec<T>> {
        self.partition.check_len(q.len())?;
        let g = self.potential.force(q);
        self.partition.check_len(g.len())?;
        Ok(g)
    }

    /// `H = ½‖p₁‖² + I(q, p) + U(q)`.
    pub fn hamiltonian(&self, s: &State<T>) -> Result<T> {
        let osc = self.partition.oscillatory_energy(s)?;
        let kin = T::lit(0.5) * norm_sq(&s.p[..self.partition.d1()]);
        Ok(kin + osc + self.potential.value(&s.q))
    }

    pub fn oscillatory_energy(&self, s: &State<T>) -> Result<T> {
        self.partition.oscillatory_energy(s)
    }
}

impl<T> fmt::Debug for System<T>
where
    T: fmt::Debug,
{
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("System")
            .field("label", &self.label)
            .field("partition", &self.partition)
            .finish_non_exhaustive()
    }
}

/// The Fermi-Pasta-Ulam problem with `m` stiff springs of frequency `omega`.
pub fn fpu_system<T: Real>(m: usize, omega: T) -> Result<System<T>> {
    if m == 0 {
        return Err(Error::InvalidArgument("FPU chain needs m >= 1".into()));
    }
    let part = Partition::new(m, m, omega)?;
    Ok(System::new(part, Arc::new(FpuPotential::new(m)), format!("fpu(m={m})")))
}

/// Benchmark initial data: `q = e₁ + e_{m+1}/ω`, `p = e₁ + e_{m+1}`.
pub fn fpu_initial<T: Real>(m: usize, omega: T) -> State<T> {
    let mut s = State::zeros(2 * m);
    s.q[0] = T::one();
    s.q[m] = T::one() / omega;
    s.p[0] = T::one();
    s.p[m] = T::one();
    s
}

/// The purely linear system (`U ≡ 0`), whose flow is known in closed form.
pub fn linear_system<T: Real>(part: Partition<T>) -> System<T> {
    System::new(part, Arc::new(ZeroPotential), "linear")
}

/// One sample of energy drift along a trajectory.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DriftRecord<T> {
    pub t: T,
    pub h_total: T,
    pub i_osc: T,
    pub dh: T,
    pub di: T,
}

impl<T: Real> DriftRecord<T> {
    /// Builds a record relative to the initial energies `(h0, i0)`.
    pub fn new(t: T, h_total: T, i_osc: T, h0: T, i0: T) -> Self {
        Self {
            t,
            h_total,
            i_osc,
            dh: h_total - h0,
            di: i_osc - i0,
        }
    }
}
