use serde::{Deserialize, Serialize};

use crate::bitmatrix::{BipolarMatrix, GramProfile};
use crate::error::Result;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HistogramRow {
    pub bin_lo: f64,
    pub bin_hi: f64,
    pub count: u64,
    pub fraction: f64,
}

/// Histogram of normalized `|G[i,j]|`, `i < j`, plus the headline coherence numbers.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HistogramTable {
    pub rows: Vec<HistogramRow>,
    pub mu: f64,
    pub mean_abs_coherence: f64,
    pub matrix_rows: usize,
    pub matrix_cols: usize,
}

/// JSON sidecar written next to the histogram CSV.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HistogramSidecar {
    pub mu: f64,
    pub mean_abs_coherence: f64,
    pub rows: usize,
    pub cols: usize,
    pub method: String,
    pub seed: u64,
}

pub fn gram_histogram_export(c: &BipolarMatrix, bins: usize) -> Result<HistogramTable> {
    let profile = GramProfile::compute(c, bins)?;
    let pairs = profile.pairs() as f64;
    Ok(HistogramTable {
        rows: profile
            .histogram
            .iter()
            .map(|b| HistogramRow {
                bin_lo: b.lo,
                bin_hi: b.hi,
                count: b.count,
                fraction: b.count as f64 / pairs,
            })
            .collect(),
        mu: profile.mu(),
        mean_abs_coherence: profile.mean_abs_coherence(),
        matrix_rows: c.rows(),
        matrix_cols: c.cols(),
    })
}

impl HistogramTable {
    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["bin_lo", "bin_hi", "count", "fraction"])
            .expect("in-memory write");
        for r in &self.rows {
            w.write_record([
                r.bin_lo.to_string(),
                r.bin_hi.to_string(),
                r.count.to_string(),
                r.fraction.to_string(),
            ])
            .expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("flush")).expect("utf-8")
    }

    pub fn sidecar(&self, method: &str, seed: u64) -> HistogramSidecar {
        HistogramSidecar {
            mu: self.mu,
            mean_abs_coherence: self.mean_abs_coherence,
            rows: self.matrix_rows,
            cols: self.matrix_cols,
            method: method.to_string(),
            seed,
        }
    }
}
