//! WebAssembly bindings for the static demo page in `www/`.
//!
//! Every export takes plain numbers and strings and returns a JSON string.
//! The `*_json` functions carry the logic and also run natively, which is how
//! they are tested; the exported wrappers only turn errors into exceptions.

use bipolar_svc::codec::{min_length, ChannelKind, SparseCodeParams};
use bipolar_svc::constructors::{construct_oca_with, OcaOptions};
use bipolar_svc::matrix_file::MatrixFile;
use bipolar_svc::sim::{
    gram_histogram_export, run_bler_with_matrix, HistogramRow, MatrixSource, SimConfig, StopRule,
};
use bipolar_svc::{construct, welch_bound, ConstructionSpec, Method};
use serde::Serialize;
use wasm_bindgen::prelude::*;

/// Trial cap per SNR point so a click cannot freeze the tab for minutes.
pub const MAX_TRIALS: u32 = 100_000;

#[derive(Serialize)]
struct MatrixReport {
    method: Method,
    seed: u64,
    max_abs_ip: u64,
    mu: f64,
    mean_abs_coherence: f64,
    welch_bound: f64,
    histogram: Vec<HistogramRow>,
    matrix: MatrixFile,
}

#[derive(Serialize)]
struct OcaReport {
    rows: usize,
    cols: usize,
    bound_per_column: Vec<u64>,
    tried_bounds: Vec<u64>,
    solver_calls: u64,
    nodes: u64,
    mu: f64,
}

#[derive(Serialize)]
struct CurvePoint {
    snr_db: f64,
    trials: u64,
    errors: u64,
    bler: f64,
    ci_lo: f64,
    ci_hi: f64,
}

#[derive(Serialize)]
struct Curve {
    method: String,
    channel: ChannelKind,
    rows: usize,
    cols: usize,
    mu: f64,
    points: Vec<CurvePoint>,
}

fn to_json<T: Serialize>(v: &T) -> Result<String, String> {
    serde_json::to_string(v).map_err(|e| e.to_string())
}

/// Builds a matrix and reports its coherence and ten-bin Gram histogram.
pub fn construct_json(method: &str, rows: usize, cols: usize, seed: u64) -> Result<String, String> {
    let method: Method = method
        .parse()
        .map_err(|e: bipolar_svc::Error| e.to_string())?;
    let c =
        construct(&ConstructionSpec::new(method, rows, cols, seed)).map_err(|e| e.to_string())?;
    let table = gram_histogram_export(&c, 10).map_err(|e| e.to_string())?;
    to_json(&MatrixReport {
        method,
        seed,
        max_abs_ip: c.max_abs_inner_product(),
        mu: table.mu,
        mean_abs_coherence: table.mean_abs_coherence,
        welch_bound: welch_bound(rows, cols),
        histogram: table.rows,
        matrix: MatrixFile::from(&c),
    })
}

/// Runs OCA and reports the bound in force as each column was appended.
pub fn oca_trace_json(rows: usize, cols: usize) -> Result<String, String> {
    let (c, trace) =
        construct_oca_with(rows, cols, OcaOptions::default()).map_err(|e| e.to_string())?;
    let mu = if cols > 1 {
        c.max_abs_inner_product() as f64 / rows as f64
    } else {
        0.0
    };
    to_json(&OcaReport {
        rows,
        cols,
        bound_per_column: trace.bound_per_column,
        tried_bounds: trace.tried_bounds,
        solver_calls: trace.solver_calls,
        nodes: trace.nodes,
        mu,
    })
}

/// BLER against SNR for a 2-sparse code carrying `bits` bits over `rows` chips.
///
/// `snrs` is a comma-separated list in dB. Sweeps run single-threaded in the browser.
#[allow(clippy::too_many_arguments)]
pub fn bler_json(
    method: &str,
    rows: usize,
    bits: u32,
    channel: &str,
    snrs: &str,
    trials: u32,
    seed: u64,
) -> Result<String, String> {
    let method: Method = method
        .parse()
        .map_err(|e: bipolar_svc::Error| e.to_string())?;
    let channel: ChannelKind = channel
        .parse()
        .map_err(|e: bipolar_svc::Error| e.to_string())?;
    let grid = snrs
        .split(',')
        .map(|s| {
            s.trim()
                .parse::<f64>()
                .map_err(|_| format!("bad SNR value {s:?}"))
        })
        .collect::<Result<Vec<_>, _>>()?;
    if trials > MAX_TRIALS {
        return Err(format!(
            "at most {MAX_TRIALS} trials per point in the browser"
        ));
    }
    let cols = min_length(bits, 2).map_err(|e| e.to_string())?;
    let params = SparseCodeParams::new(bits, 2, cols, rows).map_err(|e| e.to_string())?;
    let spec = ConstructionSpec::new(method, rows, cols, seed);
    let c = construct(&spec).map_err(|e| e.to_string())?;
    let mut config = SimConfig::new(params, MatrixSource::Construct(spec), channel);
    config.snr_grid_db = grid;
    config.trials_per_point = trials;
    config.master_seed = seed;
    config.stop_rule = StopRule::default();
    let r = run_bler_with_matrix(&config, &c, method.name()).map_err(|e| e.to_string())?;
    to_json(&Curve {
        method: r.label,
        channel,
        rows,
        cols,
        mu: r.gram.mu,
        points: r
            .points
            .into_iter()
            .map(|p| CurvePoint {
                snr_db: p.snr_db,
                trials: p.trials,
                errors: p.errors,
                bler: p.bler,
                ci_lo: p.ci_lo,
                ci_hi: p.ci_hi,
            })
            .collect(),
    })
}

#[wasm_bindgen]
pub fn construct_matrix(
    method: &str,
    rows: usize,
    cols: usize,
    seed: u32,
) -> Result<String, JsError> {
    construct_json(method, rows, cols, u64::from(seed)).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn oca_trace(rows: usize, cols: usize) -> Result<String, JsError> {
    oca_trace_json(rows, cols).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn bler_curve(
    method: &str,
    rows: usize,
    bits: u32,
    channel: &str,
    snrs: &str,
    trials: u32,
    seed: u32,
) -> Result<String, JsError> {
    bler_json(method, rows, bits, channel, snrs, trials, u64::from(seed))
        .map_err(|e| JsError::new(&e))
}
