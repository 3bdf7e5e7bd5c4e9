//! Image metrics, experiment orchestration and report emission for the
//! `efslab` command line.

pub mod experiment;
pub mod metrics;
pub mod preview;
pub mod report;
pub mod spec;

pub use experiment::{
    backend_for, prepare, run_experiment, run_pipeline, wedge_loss, ExperimentError, ExperimentOutput, Prepared, Stage,
};
pub use metrics::{psnr, psnr_masked, ssim, ssim_map, ssim_masked, MetricError, PSNR_CAP};
pub use report::{evaluate, validate_metrics, MetricsReport, SchemaError, SweepRow, ViewMetrics, SCHEMA_VERSION};
pub use spec::{BackendSpec, ExperimentSpec, InputSpec, ReconSpec, SceneSpec, SweepSpec};

/// Environment variable capping the worker count.
pub const THREADS_VAR: &str = "EFSLAB_THREADS";

/// Sizes the global rayon pool from `EFSLAB_THREADS` when it is set.
/// Returns the cap that was applied.
pub fn init_threads() -> anyhow::Result<Option<usize>> {
    let Ok(raw) = std::env::var(THREADS_VAR) else {
        return Ok(None);
    };
    let n: usize = raw
        .trim()
        .parse()
        .map_err(|_| anyhow::anyhow!("{THREADS_VAR} must be a positive integer, got {raw:?}"))?;
    if n == 0 {
        anyhow::bail!("{THREADS_VAR} must be at least 1");
    }
    #[cfg(feature = "parallel")]
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| anyhow::anyhow!("thread pool: {e}"))?;
    Ok(Some(n))
}
