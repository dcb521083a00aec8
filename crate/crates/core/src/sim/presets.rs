//! Canned experiments for the four BLER comparisons (15×24, 20×24, 25×65,
//! 40×65) and the 15×24 Gram histogram.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{
    compare_matrices, gram_histogram_export, results_csv, BlerRow, HistogramTable, MatrixSource,
    SimConfig, SimResult, StopRule,
};
use crate::bitmatrix::BipolarMatrix;
use crate::codec::{min_length, ChannelKind, SparseCodeParams};
use crate::constructors::{construct, construct_oca_with, ConstructionSpec, Method, OcaOptions};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Budget {
    /// 10³ trials per point.
    Smoke,
    /// 10⁵ trials per point, stopping early at 200 block errors.
    Desk,
}

impl Budget {
    pub fn trials_per_point(self) -> u32 {
        match self {
            Budget::Smoke => 1_000,
            Budget::Desk => 100_000,
        }
    }

    pub fn stop_rule(self) -> StopRule {
        match self {
            Budget::Smoke => StopRule::DISABLED,
            Budget::Desk => StopRule::default(),
        }
    }
}

impl FromStr for Budget {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "smoke" => Ok(Budget::Smoke),
            "desk" => Ok(Budget::Desk),
            other => Err(Error::InvalidArgument(format!(
                "unknown budget {other:?} (expected smoke or desk)"
            ))),
        }
    }
}

impl fmt::Display for Budget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Budget::Smoke => "smoke",
            Budget::Desk => "desk",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FigurePreset {
    pub figure: u8,
    pub rows: usize,
    pub cols: usize,
    pub bits: u32,
    pub methods: Vec<Method>,
    /// Channels and their SNR grids; empty for the histogram figure.
    pub sweeps: Vec<(ChannelKind, Vec<f64>)>,
}

fn grid(start: f64, step: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| start + step * i as f64).collect()
}

/// Each size carries the payload whose shortest 2-sparse vector length equals its column count.
pub fn preset(figure: u8) -> Result<FigurePreset> {
    let (rows, cols, bits, awgn, rayleigh) = match figure {
        2 => (15, 24, 8, grid(0.0, 2.0, 5), grid(5.0, 5.0, 5)),
        3 => (20, 24, 8, grid(-2.0, 2.0, 5), grid(5.0, 5.0, 5)),
        4 => (25, 65, 11, grid(0.0, 2.0, 5), grid(5.0, 5.0, 5)),
        5 => (40, 65, 11, grid(-4.0, 2.0, 5), grid(0.0, 5.0, 5)),
        6 => (15, 24, 8, vec![], vec![]),
        other => {
            return Err(Error::InvalidArgument(format!(
                "no preset for figure {other} (expected 2-6)"
            )))
        }
    };
    debug_assert_eq!(min_length(bits, 2).ok(), Some(cols));
    let (methods, sweeps) = if figure == 6 {
        (
            vec![Method::Bernoulli, Method::Bgm, Method::Ophm, Method::Oca],
            vec![],
        )
    } else {
        (
            Method::ALL.to_vec(),
            vec![(ChannelKind::Awgn, awgn), (ChannelKind::Rayleigh, rayleigh)],
        )
    };
    Ok(FigurePreset {
        figure,
        rows,
        cols,
        bits,
        methods,
        sweeps,
    })
}

/// One pairwise comparison at one SNR point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrderingEntry {
    pub channel: ChannelKind,
    pub snr_db: f64,
    pub better: String,
    pub worse: String,
    pub bler_better: f64,
    pub bler_worse: f64,
    /// The 95% Wilson intervals do not overlap.
    pub ci_separated: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChannelSummary {
    pub channel: ChannelKind,
    /// Methods from lowest to highest summed BLER over the grid.
    pub ranking: Vec<String>,
    pub summed_bler: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoherenceEntry {
    pub method: String,
    pub mu: f64,
    pub mean_abs_coherence: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub figure: u8,
    pub budget: Budget,
    pub seed: u64,
    pub rows: usize,
    pub cols: usize,
    pub coherence: Vec<CoherenceEntry>,
    pub channels: Vec<ChannelSummary>,
}

#[derive(Debug, Clone)]
pub struct Reproduction {
    pub preset: FigurePreset,
    pub budget: Budget,
    pub seed: u64,
    pub matrices: Vec<(String, BipolarMatrix)>,
    pub results: Vec<(ChannelKind, Vec<SimResult>)>,
    pub histograms: Vec<(String, HistogramTable)>,
}

/// Pairwise BLER ordering at every SNR point, over all runs sharing one channel.
pub fn ordering(channel: ChannelKind, runs: &[SimResult]) -> Vec<OrderingEntry> {
    let mut out = Vec::new();
    let Some(first) = runs.first() else {
        return out;
    };
    for (idx, point) in first.points.iter().enumerate() {
        for (a, ra) in runs.iter().enumerate() {
            for rb in runs.iter().skip(a + 1) {
                let (pa, pb) = (&ra.points[idx], &rb.points[idx]);
                if pa.bler == pb.bler {
                    continue;
                }
                let (better, worse, pbet, pwor) = if pa.bler < pb.bler {
                    (ra, rb, pa, pb)
                } else {
                    (rb, ra, pb, pa)
                };
                out.push(OrderingEntry {
                    channel,
                    snr_db: point.snr_db,
                    better: better.label.clone(),
                    worse: worse.label.clone(),
                    bler_better: pbet.bler,
                    bler_worse: pwor.bler,
                    ci_separated: pbet.ci_hi < pwor.ci_lo,
                });
            }
        }
    }
    out
}

pub fn ordering_csv(entries: &[OrderingEntry]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record([
        "channel",
        "snr_db",
        "better",
        "worse",
        "bler_better",
        "bler_worse",
        "ci_separated",
    ])
    .expect("in-memory write");
    for e in entries {
        w.write_record([
            e.channel.to_string(),
            e.snr_db.to_string(),
            e.better.clone(),
            e.worse.clone(),
            e.bler_better.to_string(),
            e.bler_worse.to_string(),
            e.ci_separated.to_string(),
        ])
        .expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("flush")).expect("utf-8")
}

fn channel_summary(channel: ChannelKind, runs: &[SimResult]) -> ChannelSummary {
    let mut scored: Vec<(f64, String)> = runs
        .iter()
        .map(|r| (r.points.iter().map(|p| p.bler).sum(), r.label.clone()))
        .collect();
    scored.sort_by(|a, b| a.0.total_cmp(&b.0).then_with(|| a.1.cmp(&b.1)));
    ChannelSummary {
        channel,
        ranking: scored.iter().map(|s| s.1.clone()).collect(),
        summed_bler: scored.iter().map(|s| s.0).collect(),
    }
}

/// Builds the figure's matrices and runs its sweeps (or histograms).
pub fn reproduce(figure: u8, budget: Budget, seed: u64) -> Result<Reproduction> {
    let preset = preset(figure)?;
    let mut matrices = Vec::new();
    for &m in &preset.methods {
        // the parity skip returns the same OCA matrix with fewer solver calls
        let c = match m {
            Method::Oca => {
                construct_oca_with(preset.rows, preset.cols, OcaOptions { parity_skip: true })
                    .map(|(c, _)| c)
            }
            _ => construct(&ConstructionSpec::new(m, preset.rows, preset.cols, seed)),
        }
        .map_err(|e| Error::InvalidArgument(format!("{m}: {e}")))?;
        matrices.push((m.name().to_string(), c));
    }
    let histograms = if preset.sweeps.is_empty() {
        matrices
            .iter()
            .map(|(label, c)| Ok((label.clone(), gram_histogram_export(c, 10)?)))
            .collect::<Result<Vec<_>>>()?
    } else {
        Vec::new()
    };
    let params = SparseCodeParams::new(preset.bits, 2, preset.cols, preset.rows)?;
    let mut results = Vec::new();
    for (channel, snrs) in &preset.sweeps {
        let mut config = SimConfig::new(
            params,
            MatrixSource::Construct(ConstructionSpec::new(
                Method::Oca,
                preset.rows,
                preset.cols,
                seed,
            )),
            *channel,
        );
        config.snr_grid_db = snrs.clone();
        config.trials_per_point = budget.trials_per_point();
        config.stop_rule = budget.stop_rule();
        config.master_seed = seed;
        results.push((*channel, compare_matrices(&config, &matrices)?));
    }
    Ok(Reproduction {
        preset,
        budget,
        seed,
        matrices,
        results,
        histograms,
    })
}

impl Reproduction {
    pub fn ordering(&self) -> Vec<OrderingEntry> {
        self.results
            .iter()
            .flat_map(|(ch, runs)| ordering(*ch, runs))
            .collect()
    }

    pub fn summary(&self) -> Summary {
        Summary {
            figure: self.preset.figure,
            budget: self.budget,
            seed: self.seed,
            rows: self.preset.rows,
            cols: self.preset.cols,
            coherence: self
                .matrices
                .iter()
                .filter_map(|(l, c)| {
                    let p = c.coherence().ok()?;
                    Some(CoherenceEntry {
                        method: l.clone(),
                        mu: p.mu(),
                        mean_abs_coherence: p.mean_abs_coherence(),
                    })
                })
                .collect(),
            channels: self
                .results
                .iter()
                .map(|(ch, runs)| channel_summary(*ch, runs))
                .collect(),
        }
    }

    /// Output files as `(file name, contents)`, in a fixed order.
    pub fn files(&self) -> Vec<(String, String)> {
        let fig = self.preset.figure;
        let mut files = Vec::new();
        for (ch, runs) in &self.results {
            let rows: Vec<BlerRow> = runs.iter().flat_map(SimResult::rows).collect();
            files.push((format!("fig{fig}_{ch}.csv"), results_csv(&rows)));
        }
        if !self.results.is_empty() {
            files.push((
                format!("fig{fig}_ordering.csv"),
                ordering_csv(&self.ordering()),
            ));
        }
        for (label, table) in &self.histograms {
            files.push((format!("fig{fig}_{label}_hist.csv"), table.to_csv()));
            let sidecar = serde_json::to_string_pretty(&table.sidecar(label, self.seed))
                .expect("sidecar serializes");
            files.push((format!("fig{fig}_{label}_hist.json"), sidecar + "\n"));
        }
        let summary = serde_json::to_string_pretty(&self.summary()).expect("summary serializes");
        files.push((format!("fig{fig}_summary.json"), summary + "\n"));
        files
    }

    pub fn write_to(&self, dir: &Path) -> Result<Vec<std::path::PathBuf>> {
        std::fs::create_dir_all(dir)?;
        self.files()
            .into_iter()
            .map(|(name, body)| {
                let path = dir.join(name);
                std::fs::write(&path, body)?;
                Ok(path)
            })
            .collect()
    }
}
