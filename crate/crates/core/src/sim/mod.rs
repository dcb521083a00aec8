//! Monte Carlo BLER sweeps.
//!
//! Each trial draws, in this order, from its own counter-addressed stream
//! ([`crate::rng::trial_rng`]): the message, the channel gains (Rayleigh only)
//! and the chip noise. None of these depend on the spreading matrix, so two
//! runs with the same master seed see identical messages, fades and noise
//! whatever matrix they use.
//!
//! Trials run in fixed batches. Early stopping is checked only between
//! batches, so results do not depend on the number of worker threads.

mod config;
mod histogram;
pub mod presets;
mod report;

use std::time::Instant;

use serde::{Deserialize, Serialize};

pub use config::{MatrixSource, SimConfig, StopRule};
pub use histogram::{gram_histogram_export, HistogramRow, HistogramSidecar, HistogramTable};
pub use report::{results_csv, BlerRow, RESULTS_HEADER};

use crate::bitmatrix::{BipolarMatrix, GramProfile};
use crate::codec::{
    apply_channel, mmp_decode, sparse_demap, sparse_map, spread, ChannelKind, ChannelRealization,
    SparseCodeParams,
};
use crate::error::{Error, Result};
use crate::rng::trial_rng;
use rand::Rng;

/// Trials per scheduling batch; early stopping is checked between batches.
pub const BATCH: u32 = 1000;

/// Two-sided 95% normal quantile.
const Z95: f64 = 1.959_963_984_540_054;

/// Wilson score interval for `errors` out of `trials`.
pub fn wilson_interval(errors: u64, trials: u64) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let n = trials as f64;
    let p = errors as f64 / n;
    let z2 = Z95 * Z95;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = Z95 * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    (
        (center - half).max(0.0).min(p),
        (center + half).min(1.0).max(p),
    )
}

/// Noise variance for a per-chip SNR in dB; `+inf` gives a noiseless channel.
pub fn noise_variance(snr_db: f64) -> f64 {
    if snr_db == f64::INFINITY {
        0.0
    } else {
        10f64.powf(-snr_db / 10.0)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointResult {
    pub snr_db: f64,
    pub trials: u64,
    pub errors: u64,
    pub bler: f64,
    pub ci_lo: f64,
    pub ci_hi: f64,
    /// Seconds spent on this point; excluded from equality-sensitive outputs.
    pub wall_time_s: f64,
}

impl PointResult {
    fn new(snr_db: f64, trials: u64, errors: u64, wall_time_s: f64) -> Self {
        let (ci_lo, ci_hi) = wilson_interval(errors, trials);
        Self {
            snr_db,
            trials,
            errors,
            bler: if trials == 0 {
                0.0
            } else {
                errors as f64 / trials as f64
            },
            ci_lo,
            ci_hi,
            wall_time_s,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimResult {
    pub label: String,
    pub config: SimConfig,
    pub gram: GramSummary,
    pub points: Vec<PointResult>,
}

impl SimResult {
    pub fn rows(&self) -> Vec<BlerRow> {
        self.points
            .iter()
            .map(|p| BlerRow {
                method: self.label.clone(),
                snr_db: p.snr_db,
                trials: p.trials,
                errors: p.errors,
                bler: p.bler,
                ci_lo: p.ci_lo,
                ci_hi: p.ci_hi,
                seed: self.config.master_seed,
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GramSummary {
    pub max_abs_ip: u64,
    pub mu: f64,
    pub mean_abs_coherence: f64,
}

impl From<&GramProfile> for GramSummary {
    fn from(p: &GramProfile) -> Self {
        Self {
            max_abs_ip: p.max_abs_ip,
            mu: p.mu(),
            mean_abs_coherence: p.mean_abs_coherence(),
        }
    }
}

/// Outcome of one simulated packet.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialOutcome {
    pub message: u64,
    pub decoded: Option<u64>,
}

impl TrialOutcome {
    pub fn is_error(&self) -> bool {
        self.decoded != Some(self.message)
    }
}

/// Runs trial `trial` of SNR point `point`.
#[allow(clippy::too_many_arguments)]
pub fn run_trial(
    c: &BipolarMatrix,
    params: &SparseCodeParams,
    channel: ChannelKind,
    noise_var: f64,
    branching: usize,
    master_seed: u64,
    point: u32,
    trial: u32,
) -> Result<TrialOutcome> {
    let mut rng = trial_rng(master_seed, point, trial);
    let message = rng.random_range(0..params.codebook_size());
    let support = sparse_map(message, params)?;
    let x = spread(&support, c, params)?;
    let realization = ChannelRealization::draw(channel, params.spread_len, noise_var, &mut rng);
    let y = apply_channel(&x, &realization, &mut rng);
    let decoded = match mmp_decode(&y, &realization.gains, c, params.sparsity, branching) {
        Ok(s) => sparse_demap(&s, params).ok(),
        Err(Error::DecodeFailure(_)) => None,
        Err(e) => return Err(e),
    };
    Ok(TrialOutcome { message, decoded })
}

fn check_dims(c: &BipolarMatrix, params: &SparseCodeParams) -> Result<()> {
    if c.rows() != params.spread_len || c.cols() != params.vector_len {
        return Err(Error::InvalidArgument(format!(
            "matrix is {}x{} but the code needs {}x{}",
            c.rows(),
            c.cols(),
            params.spread_len,
            params.vector_len
        )));
    }
    Ok(())
}

fn count_errors(
    c: &BipolarMatrix,
    config: &SimConfig,
    noise_var: f64,
    point: u32,
    range: std::ops::Range<u32>,
) -> Result<u64> {
    let one = |t: u32| -> Result<u64> {
        run_trial(
            c,
            &config.params,
            config.channel,
            noise_var,
            config.mmp_branching,
            config.master_seed,
            point,
            t,
        )
        .map(|o| u64::from(o.is_error()))
    };
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        range
            .into_par_iter()
            .map(one)
            .try_reduce(|| 0, |a, b| Ok(a + b))
    }
    #[cfg(not(feature = "parallel"))]
    {
        range.map(one).sum()
    }
}

/// BLER sweep of `config` on an explicit matrix.
pub fn run_bler_with_matrix(
    config: &SimConfig,
    c: &BipolarMatrix,
    label: &str,
) -> Result<SimResult> {
    config.validate()?;
    check_dims(c, &config.params)?;
    let gram = GramSummary::from(&c.coherence()?);
    let mut points = Vec::with_capacity(config.snr_grid_db.len());
    for (idx, &snr_db) in config.snr_grid_db.iter().enumerate() {
        let start = Instant::now();
        let noise_var = noise_variance(snr_db);
        let total = config.trials_per_point;
        let (mut trials, mut errors) = (0u32, 0u64);
        while trials < total {
            let end = trials.saturating_add(BATCH).min(total);
            errors += count_errors(c, config, noise_var, idx as u32, trials..end)?;
            trials = end;
            if config.stop_rule.should_stop(errors) {
                break;
            }
        }
        points.push(PointResult::new(
            snr_db,
            u64::from(trials),
            errors,
            start.elapsed().as_secs_f64(),
        ));
    }
    Ok(SimResult {
        label: label.to_string(),
        config: config.clone(),
        gram,
        points,
    })
}

/// Resolves the configured matrix and runs the sweep.
pub fn run_bler(config: &SimConfig) -> Result<SimResult> {
    config.validate()?;
    let (c, label) = config.matrix.resolve()?;
    run_bler_with_matrix(config, &c, &label)
}

/// Runs the same sweep (same master seed, hence common random numbers) over several matrices.
pub fn compare_matrices(
    config: &SimConfig,
    matrices: &[(String, BipolarMatrix)],
) -> Result<Vec<SimResult>> {
    config.validate()?;
    for (label, c) in matrices {
        check_dims(c, &config.params)
            .map_err(|e| Error::InvalidArgument(format!("{label}: {e}")))?;
    }
    matrices
        .iter()
        .map(|(label, c)| run_bler_with_matrix(config, c, label))
        .collect()
}

/// Constructs each method at the configured size and seed, then compares them.
///
/// Every construction is attempted before any simulation; failures are reported together.
pub fn compare_methods(config: &SimConfig, methods: &[crate::Method]) -> Result<Vec<SimResult>> {
    config.validate()?;
    let seed = config.matrix.construction_seed();
    let mut built = Vec::new();
    let mut failures = Vec::new();
    for &m in methods {
        let spec = crate::ConstructionSpec::new(
            m,
            config.params.spread_len,
            config.params.vector_len,
            seed,
        );
        match crate::construct(&spec) {
            Ok(c) => built.push((m.name().to_string(), c)),
            Err(e) => failures.push(format!("{m}: {e}")),
        }
    }
    if !failures.is_empty() {
        return Err(Error::InvalidArgument(format!(
            "construction failed for {}",
            failures.join("; ")
        )));
    }
    compare_matrices(config, &built)
}
