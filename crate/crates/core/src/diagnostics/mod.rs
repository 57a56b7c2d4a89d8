//! Safety-margin scanning and statistical validation of sampler output.

pub mod oracle;
pub mod report;
pub mod scan;
pub mod stats;
pub mod validate;

pub use oracle::{brute_force_truncated_moments, truncated_mean_oracle_normal, truncated_mean_oracle_poisson};
pub use report::{SafetyReport, SafetyRow, ScanMeta};
pub use scan::{scan_safety, scan_safety_with, ProbeSchedule, ScanConfig, ScanMethod};
pub use validate::{
    exp_memorylessness_check, exp_tail_qq, memorylessness_check, z_test_mean, MemorylessResult, QqPoint, QqTable,
    ValidationResult,
};
