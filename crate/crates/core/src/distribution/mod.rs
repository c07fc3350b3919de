//! Distribution-function estimation and the reference profiles it is checked against.

mod analytic;
mod counts;
mod estimate;

pub use analytic::{analytic_df, oscillation_hits, window_length, AnalyticDf, OscillationHits};
pub use counts::{delta_count, xi_count, xi_prefix_counts};
pub use estimate::{
    default_grid, default_window_start, df_at_zero, epoch_checkpoints, estimate_df, Checkpoint,
    CheckpointDensity, DfAccumulator, DfEstimate, Parity, PhiZero, CSV_DIGITS,
};
