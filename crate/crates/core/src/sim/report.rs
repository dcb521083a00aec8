use serde::{Deserialize, Serialize};

pub const RESULTS_HEADER: [&str; 8] = [
    "method", "snr_db", "trials", "errors", "bler", "ci_lo", "ci_hi", "seed",
];

/// One long-format result row.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlerRow {
    pub method: String,
    pub snr_db: f64,
    pub trials: u64,
    pub errors: u64,
    pub bler: f64,
    pub ci_lo: f64,
    pub ci_hi: f64,
    pub seed: u64,
}

pub fn results_csv(rows: &[BlerRow]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(RESULTS_HEADER).expect("in-memory write");
    for r in rows {
        w.write_record([
            r.method.clone(),
            r.snr_db.to_string(),
            r.trials.to_string(),
            r.errors.to_string(),
            r.bler.to_string(),
            r.ci_lo.to_string(),
            r.ci_hi.to_string(),
            r.seed.to_string(),
        ])
        .expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("flush")).expect("utf-8")
}
