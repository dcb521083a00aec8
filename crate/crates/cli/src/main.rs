use std::path::{Path, PathBuf};
use std::process::ExitCode;

use bipolar_svc::codec::{min_length, ChannelKind, SparseCodeParams};
use bipolar_svc::sim::presets::{reproduce, Budget};
use bipolar_svc::sim::{
    compare_methods, gram_histogram_export, results_csv, run_bler, BlerRow, MatrixSource,
    SimConfig, SimResult, StopRule,
};
use bipolar_svc::{construct, matrix_file, ConstructionSpec, Error, Method};
use clap::{Args, Parser, Subcommand};
use serde_json::json;

#[derive(Parser, Debug)]
#[command(
    name = "svcmat",
    version,
    about = "Bipolar spreading matrices for sparse vector codes"
)]
struct Cli {
    /// Worker threads for trial simulation [default: all cores]
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Directory for outputs written without an explicit --out
    #[arg(long, global = true, env = "SVCMAT_OUT_DIR", default_value = ".")]
    out_dir: PathBuf,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build a spreading matrix and write it as JSON
    Construct(ConstructArgs),
    /// Gram histogram of a matrix file
    Analyze(AnalyzeArgs),
    /// BLER sweep for one matrix
    Simulate(SimulateArgs),
    /// BLER sweep for several construction methods on common random numbers
    Compare(CompareArgs),
    /// Run a canned figure configuration
    Reproduce(ReproduceArgs),
}

#[derive(Args, Debug)]
struct ConstructArgs {
    #[arg(long)]
    method: Method,
    #[arg(long)]
    rows: usize,
    #[arg(long)]
    cols: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct AnalyzeArgs {
    #[arg(long)]
    matrix: PathBuf,
    #[arg(long, default_value_t = 10)]
    bins: usize,
    /// Histogram CSV path; the JSON sidecar goes next to it
    #[arg(long)]
    out: Option<PathBuf>,
    /// Method name recorded in the sidecar [default: file stem]
    #[arg(long)]
    label: Option<String>,
    /// Seed recorded in the sidecar
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

/// Overrides shared by `simulate` and `compare`; each one replaces the config file value.
#[derive(Args, Debug)]
struct SweepArgs {
    /// JSON file mirroring the simulation config
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    rows: Option<usize>,
    /// Sparse-vector length [default: shortest that carries --bits]
    #[arg(long)]
    cols: Option<usize>,
    #[arg(long)]
    bits: Option<u32>,
    #[arg(long)]
    sparsity: Option<usize>,
    #[arg(long)]
    channel: Option<ChannelKind>,
    /// Comma-separated SNR points in dB (`inf` for noiseless)
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    snr: Option<Vec<f64>>,
    #[arg(long)]
    trials: Option<u32>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    branching: Option<usize>,
    /// Stop a point after this many block errors; 0 runs every trial
    #[arg(long)]
    min_errors: Option<u64>,
    /// Results CSV path
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct SimulateArgs {
    #[command(flatten)]
    sweep: SweepArgs,
    /// Construction method for the matrix
    #[arg(long, conflicts_with = "matrix")]
    method: Option<Method>,
    /// Matrix JSON file instead of constructing one
    #[arg(long)]
    matrix: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct CompareArgs {
    #[command(flatten)]
    sweep: SweepArgs,
    /// Comma-separated methods [default: all seven]
    #[arg(long, value_delimiter = ',')]
    methods: Option<Vec<Method>>,
}

#[derive(Args, Debug)]
struct ReproduceArgs {
    #[arg(long, value_parser = clap::value_parser!(u8).range(2..=6))]
    figure: u8,
    #[arg(long, default_value = "smoke")]
    budget: Budget,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(summary) => {
            println!("{summary}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

fn run(cli: Cli) -> Result<serde_json::Value, Error> {
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(Error::InvalidArgument(
                "--threads must be at least 1".into(),
            ));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Error::InvalidArgument(format!("thread pool: {e}")))?;
    }
    let out_dir = cli.out_dir;
    match cli.command {
        Command::Construct(a) => cmd_construct(a, &out_dir),
        Command::Analyze(a) => cmd_analyze(a, &out_dir),
        Command::Simulate(a) => cmd_simulate(a, &out_dir),
        Command::Compare(a) => cmd_compare(a, &out_dir),
        Command::Reproduce(a) => cmd_reproduce(a, &out_dir),
    }
}

fn write_file(path: &Path, body: &str) -> Result<(), Error> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        std::fs::create_dir_all(parent)?;
    }
    std::fs::write(path, body)?;
    Ok(())
}

fn cmd_construct(a: ConstructArgs, out_dir: &Path) -> Result<serde_json::Value, Error> {
    let spec = ConstructionSpec::new(a.method, a.rows, a.cols, a.seed);
    let c = construct(&spec)?;
    let profile = c.coherence()?;
    let out = a.out.unwrap_or_else(|| {
        out_dir.join(format!(
            "{}_{}x{}_seed{}.json",
            a.method, a.rows, a.cols, a.seed
        ))
    });
    write_file(&out, &matrix_file::to_json(&c))?;
    Ok(json!({
        "out": out,
        "method": a.method,
        "rows": c.rows(),
        "cols": c.cols(),
        "seed": a.seed,
        "max_abs_ip": profile.max_abs_ip,
        "mu": profile.mu(),
        "mean_abs_coherence": profile.mean_abs_coherence(),
    }))
}

fn cmd_analyze(a: AnalyzeArgs, out_dir: &Path) -> Result<serde_json::Value, Error> {
    let c = matrix_file::read(&a.matrix)?;
    let stem = a.matrix.file_stem().map_or_else(
        || "matrix".to_string(),
        |s| s.to_string_lossy().into_owned(),
    );
    let label = a.label.unwrap_or_else(|| stem.clone());
    let table = gram_histogram_export(&c, a.bins)?;
    let csv_path = a
        .out
        .unwrap_or_else(|| out_dir.join(format!("{stem}_hist.csv")));
    let json_path = csv_path.with_extension("json");
    write_file(&csv_path, &table.to_csv())?;
    let sidecar = table.sidecar(&label, a.seed);
    let body = serde_json::to_string_pretty(&sidecar).map_err(Error::from)? + "\n";
    write_file(&json_path, &body)?;
    Ok(json!({
        "out": csv_path,
        "sidecar": json_path,
        "mu": table.mu,
        "mean_abs_coherence": table.mean_abs_coherence,
    }))
}

/// Starts from the config file (or flag-only defaults) and applies every flag given.
fn build_config(
    s: &SweepArgs,
    matrix: Option<MatrixSource>,
    method: Option<Method>,
) -> Result<SimConfig, Error> {
    let mut config = match &s.config {
        Some(path) => SimConfig::from_json(&std::fs::read_to_string(path)?)?,
        None => {
            let (Some(bits), Some(rows)) = (s.bits, s.rows) else {
                return Err(Error::InvalidArgument(
                    "without --config, both --bits and --rows are required".into(),
                ));
            };
            let k = s.sparsity.unwrap_or(2);
            let cols = match s.cols {
                Some(c) => c,
                None => min_length(bits, k)?,
            };
            let params = SparseCodeParams::new(bits, k, cols, rows)?;
            let spec = ConstructionSpec::new(Method::Oca, rows, cols, 0);
            SimConfig::new(params, MatrixSource::Construct(spec), ChannelKind::Awgn)
        }
    };
    let p = config.params;
    let bits = s.bits.unwrap_or(p.bits);
    let sparsity = s.sparsity.unwrap_or(p.sparsity);
    // changing the payload without a length picks the shortest length
    let cols = match s.cols {
        Some(c) => c,
        None if s.bits.is_some() || s.sparsity.is_some() => min_length(bits, sparsity)?,
        None => p.vector_len,
    };
    config.params = SparseCodeParams::new(bits, sparsity, cols, s.rows.unwrap_or(p.spread_len))?;
    if let Some(m) = matrix {
        config.matrix = m;
    }
    if let Some(seed) = s.seed {
        config.master_seed = seed;
    }
    if let MatrixSource::Construct(spec) = &mut config.matrix {
        spec.rows = config.params.spread_len;
        spec.cols = config.params.vector_len;
        if let Some(m) = method {
            spec.method = m;
        }
        if let Some(seed) = s.seed {
            spec.seed = seed;
        }
    }
    if let Some(ch) = s.channel {
        config.channel = ch;
    }
    if let Some(grid) = &s.snr {
        config.snr_grid_db = grid.clone();
    }
    if let Some(t) = s.trials {
        config.trials_per_point = t;
    }
    if let Some(b) = s.branching {
        config.mmp_branching = b;
    }
    if let Some(e) = s.min_errors {
        config.stop_rule = if e == 0 {
            StopRule::DISABLED
        } else {
            StopRule {
                min_errors: Some(e),
            }
        };
    }
    config.validate()?;
    Ok(config)
}

fn log_points(results: &[SimResult]) {
    for r in results {
        for p in &r.points {
            eprintln!(
                "{} snr={} dB trials={} errors={} bler={:.3e} [{:.3e}, {:.3e}] {:.2}s",
                r.label, p.snr_db, p.trials, p.errors, p.bler, p.ci_lo, p.ci_hi, p.wall_time_s
            );
        }
    }
}

fn write_results(results: &[SimResult], out: &Path) -> Result<serde_json::Value, Error> {
    log_points(results);
    let rows: Vec<BlerRow> = results.iter().flat_map(SimResult::rows).collect();
    write_file(out, &results_csv(&rows))?;
    let gram: Vec<_> = results
        .iter()
        .map(|r| json!({"method": r.label, "mu": r.gram.mu, "mean_abs_coherence": r.gram.mean_abs_coherence}))
        .collect();
    Ok(json!({"out": out, "rows": rows.len(), "matrices": gram}))
}

fn cmd_simulate(a: SimulateArgs, out_dir: &Path) -> Result<serde_json::Value, Error> {
    let config = build_config(&a.sweep, a.matrix.map(MatrixSource::File), a.method)?;
    let result = run_bler(&config)?;
    let out = a
        .sweep
        .out
        .clone()
        .unwrap_or_else(|| out_dir.join(format!("simulate_{}.csv", result.label)));
    write_results(&[result], &out)
}

fn cmd_compare(a: CompareArgs, out_dir: &Path) -> Result<serde_json::Value, Error> {
    let config = build_config(&a.sweep, None, None)?;
    let methods = a.methods.unwrap_or_else(|| Method::ALL.to_vec());
    let results = compare_methods(&config, &methods)?;
    let out = a
        .sweep
        .out
        .clone()
        .unwrap_or_else(|| out_dir.join("compare.csv"));
    write_results(&results, &out)
}

fn cmd_reproduce(a: ReproduceArgs, out_dir: &Path) -> Result<serde_json::Value, Error> {
    let r = reproduce(a.figure, a.budget, a.seed)?;
    for (_, runs) in &r.results {
        log_points(runs);
    }
    let written = r.write_to(out_dir)?;
    let ordering = r.ordering();
    let separated = ordering.iter().filter(|e| e.ci_separated).count();
    Ok(json!({
        "figure": a.figure,
        "budget": a.budget,
        "seed": a.seed,
        "files": written,
        "comparisons": ordering.len(),
        "ci_separated": separated,
        "summary": r.summary(),
    }))
}
