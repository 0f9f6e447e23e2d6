//! Long-time energy drift along numerical trajectories.

use crate::error::{Error, Result};
use crate::methods::Integrator;
use crate::scalar::Real;
use crate::systems::{DriftRecord, State, System};

/// Where a trajectory stopped producing finite states.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlowUp<T> {
    pub step: usize,
    pub t: T,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DriftSeries<T> {
    pub records: Vec<DriftRecord<T>>,
    /// Set when the run was aborted on a non-finite state; `records` then
    /// holds the samples taken before that step.
    pub blow_up: Option<BlowUp<T>>,
}

impl<T> DriftSeries<T> {
    pub fn completed(&self) -> bool {
        self.blow_up.is_none()
    }
}

/// Integrates `steps ≈ t_end / h` steps from `initial`, sampling energies every
/// `stride` steps plus the initial and final state.
pub fn drift_series<T: Real, M: Integrator<T> + ?Sized>(
    m: &M,
    sys: &System<T>,
    initial: &State<T>,
    h: T,
    t_end: T,
    stride: usize,
) -> Result<DriftSeries<T>> {
    if !(h > T::zero()) || !h.is_finite() {
        return Err(Error::InvalidArgument(format!("stepsize must be positive, got {h}")));
    }
    if !(t_end >= h) {
        return Err(Error::InvalidArgument(format!(
            "t_end = {t_end} must be at least h = {h}"
        )));
    }
    if stride == 0 {
        return Err(Error::InvalidArgument("stride must be at least 1".into()));
    }
    let steps = (t_end / h)
        .round()
        .to_usize()
        .ok_or_else(|| Error::InvalidArgument(format!("step count for t_end = {t_end} overflows")))?;

    let h0 = sys.hamiltonian(initial)?;
    let i0 = sys.oscillatory_energy(initial)?;
    let record = |k: usize, s: &State<T>| -> Result<DriftRecord<T>> {
        Ok(DriftRecord::new(
            T::from_count(k) * h,
            sys.hamiltonian(s)?,
            sys.oscillatory_energy(s)?,
            h0,
            i0,
        ))
    };

    let mut records = Vec::with_capacity(steps / stride + 2);
    records.push(record(0, initial)?);
    let mut s = initial.clone();
    for k in 1..=steps {
        s = m.step(sys, h, &s)?;
        let sample = if s.is_finite() { Some(record(k, &s)?) } else { None };
        let Some(sample) = sample.filter(|r| r.h_total.is_finite() && r.i_osc.is_finite()) else {
            return Ok(DriftSeries {
                records,
                blow_up: Some(BlowUp {
                    step: k,
                    t: T::from_count(k) * h,
                }),
            });
        };
        if k % stride == 0 || k == steps {
            records.push(sample);
        }
    }
    Ok(DriftSeries { records, blow_up: None })
}

/// Summary of a drift series.
///
/// The window ratios compare the largest deviation on the second half of the
/// time span with that on the first half; values near 1 mean no secular growth.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DriftStats<T> {
    pub max_dh: T,
    pub max_di: T,
    pub window_ratio_h: T,
    pub window_ratio_i: T,
}

pub fn drift_stats<T: Real>(records: &[DriftRecord<T>]) -> DriftStats<T> {
    let t_end = records.last().map_or(T::zero(), |r| r.t);
    let t_mid = T::lit(0.5) * t_end;
    let max_by = |f: &dyn Fn(&DriftRecord<T>) -> T, second: Option<bool>| {
        records
            .iter()
            .filter(|r| second.is_none_or(|s| (r.t > t_mid) == s))
            .map(|r| f(r).abs())
            .fold(T::zero(), T::max)
    };
    let ratio = |f: &dyn Fn(&DriftRecord<T>) -> T| {
        let first = max_by(f, Some(false));
        let second = max_by(f, Some(true));
        if first == T::zero() {
            if second == T::zero() {
                T::one()
            } else {
                T::infinity()
            }
        } else {
            second / first
        }
    };
    let dh = |r: &DriftRecord<T>| r.dh;
    let di = |r: &DriftRecord<T>| r.di;
    DriftStats {
        max_dh: max_by(&dh, None),
        max_di: max_by(&di, None),
        window_ratio_h: ratio(&dh),
        window_ratio_i: ratio(&di),
    }
}
