//! Structure-preservation probes, assumption checks and drift analytics.

mod assumptions;
mod drift;
mod probes;

pub use assumptions::{
    assess, non_resonance_max_n, sigma, sigma_bound_holds, stepsize_bound_holds, AssumptionConfig, AssumptionReport,
    MAX_RESONANCE_ORDER,
};
pub use drift::{drift_series, drift_stats, BlowUp, DriftSeries, DriftStats};
pub use probes::{
    adjoint_defect, step_jacobian, symplectic_residual, symplecticity_defect, DefectKind, DefectReport, DEFAULT_FD_EPS,
};
