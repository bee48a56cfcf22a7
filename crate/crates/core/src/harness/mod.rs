//! Experiment orchestration: configurations, code construction, BER sweeps
//! and the figures of merit computed from them.

pub mod codes;
pub mod config;
pub mod metrics;
pub mod sweep;

pub use codes::{build_codes, build_user_code, cached_graph, UserCode};
pub use config::{ExperimentConfig, PuncturingMode};
pub use metrics::{
    ordering_violations, read_curves, read_curves_file, security_gap, snr_loss, sum_rate_comparison,
    write_curves, wilson_halfwidth, BerCurve, BerPoint, GapReport, OrderingViolation, SumRateReport,
    SUM_RATE_LABEL,
};
pub use sweep::{run_point, run_sweep, run_sweep_with_codes, simulate_frame, StopRule};
