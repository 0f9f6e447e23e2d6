//! Scalar special functions and their blockwise action as matrix functions of `hΩ`.
//!
//! The stiff matrix is `Ω = diag(0, ω I)`, so any matrix function `f(hΩ)` is
//! fully described by the two scalars `f(0)` and `f(hω)`. [`BlockScalar`]
//! stores that pair and applies it to partitioned vectors without ever
//! materialising a matrix.

use std::ops::{Mul, Neg};

use num_traits::{FromPrimitive, Num};

use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::systems::Partition;

/// Below this magnitude `sinc` switches to its truncated Taylor series.
pub const SINC_SERIES_THRESHOLD: f64 = 1e-2;

/// `sin(x)/x`, continuous through the origin.
///
/// Evaluated on `|x|` so that the result is even bit-for-bit.
pub fn sinc<T: Real>(x: T) -> T {
    let a = x.abs();
    if a < T::lit(SINC_SERIES_THRESHOLD) {
        let a2 = a * a;
        // 1 - a²/6 + a⁴/120 - a⁶/5040 in Horner form
        T::one() - a2 / T::lit(6.0) * (T::one() - a2 / T::lit(20.0) * (T::one() - a2 / T::lit(42.0)))
    } else {
        a.sin() / a
    }
}

/// Truncated series `Σ_{k<terms} (-1)^k V^k / (2k+j)!` for `j ∈ {0, 1}`.
///
/// `φ₀(ν²) = cos ν` and `φ₁(ν²) = sinc ν`. Kept generic over any numeric
/// field so it can be evaluated in exact rational arithmetic as an oracle.
pub fn phi_series<T>(j: u8, v: T, terms: usize) -> T
where
    T: Num + Neg<Output = T> + Clone + FromPrimitive,
{
    assert!(j <= 1, "phi_series is defined for j = 0 or 1");
    assert!(terms >= 1, "phi_series needs at least one term");
    let j = u64::from(j);
    let factorial = |n: u64| (1..=n).fold(T::one(), |acc, k| acc * T::from_u64(k).unwrap());
    let mut term = T::one() / factorial(j);
    let mut sum = term.clone();
    for k in 1..terms as u64 {
        let denom = T::from_u64((2 * k + j - 1) * (2 * k + j)).unwrap();
        term = -(term * v.clone()) / denom;
        sum = sum + term.clone();
    }
    sum
}

/// A matrix function of `hΩ` reduced to its values on the two blocks.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct BlockScalar<T> {
    /// Value on the slow block (argument 0).
    pub slow: T,
    /// Value on the fast block (argument `hω`).
    pub fast: T,
}

impl<T: Real> BlockScalar<T> {
    pub const fn new(slow: T, fast: T) -> Self {
        Self { slow, fast }
    }

    pub fn splat(value: T) -> Self {
        Self::new(value, value)
    }

    pub fn one() -> Self {
        Self::splat(T::one())
    }

    pub fn zero() -> Self {
        Self::splat(T::zero())
    }

    /// Scalar acting on coordinate `i` when the slow block has length `d1`.
    #[inline]
    pub fn at(&self, i: usize, d1: usize) -> T {
        if i < d1 {
            self.slow
        } else {
            self.fast
        }
    }

    pub fn scale(self, c: T) -> Self {
        Self::new(self.slow * c, self.fast * c)
    }

    pub fn is_finite(&self) -> bool {
        self.slow.is_finite() && self.fast.is_finite()
    }

    pub fn apply(&self, v: &[T], part: &Partition<T>) -> Result<Vec<T>> {
        block_apply(*self, v, part)
    }
}

impl<T: Real> Mul for BlockScalar<T> {
    type Output = Self;

    fn mul(self, rhs: Self) -> Self {
        Self::new(self.slow * rhs.slow, self.fast * rhs.fast)
    }
}

/// Evaluates `f(hΩ)` as the pair `(f(0), f(hω))`.
pub fn block_eval<T: Real, F: Fn(T) -> T>(f: F, h: T, part: &Partition<T>) -> BlockScalar<T> {
    BlockScalar::new(f(T::zero()), f(h * part.omega()))
}

/// Applies `b` to a partitioned vector: slow entries scaled by `b.slow`,
/// fast entries by `b.fast`.
pub fn block_apply<T: Real>(b: BlockScalar<T>, v: &[T], part: &Partition<T>) -> Result<Vec<T>> {
    part.check_len(v.len())?;
    let d1 = part.d1();
    Ok(v.iter().enumerate().map(|(i, &x)| b.at(i, d1) * x).collect())
}

/// `Σ_k b_k(hΩ) v_k` over several block scalars, in one pass.
///
/// All vectors must already be validated against `part`.
pub(crate) fn block_combine<T: Real>(terms: &[(BlockScalar<T>, &[T])], part: &Partition<T>) -> Vec<T> {
    let n = part.dim();
    let d1 = part.d1();
    (0..n)
        .map(|i| terms.iter().fold(T::zero(), |acc, (b, v)| acc + b.at(i, d1) * v[i]))
        .collect()
}

pub(crate) fn check_finite_block<T: Real>(b: &BlockScalar<T>, nu: T) -> Result<()> {
    if b.is_finite() {
        Ok(())
    } else {
        Err(Error::ResonantStepsize {
            nu: nu.to_f64().unwrap_or(f64::NAN),
        })
    }
}
