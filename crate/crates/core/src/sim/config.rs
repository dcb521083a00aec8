use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::bitmatrix::BipolarMatrix;
use crate::codec::{ChannelKind, SparseCodeParams};
use crate::constructors::{construct, ConstructionSpec};
use crate::error::{Error, Result};
use crate::matrix_file;

/// Where the spreading matrix comes from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MatrixSource {
    Construct(ConstructionSpec),
    File(PathBuf),
}

impl MatrixSource {
    /// The matrix and a label for result rows (method name or file stem).
    pub fn resolve(&self) -> Result<(BipolarMatrix, String)> {
        match self {
            MatrixSource::Construct(spec) => Ok((construct(spec)?, spec.method.to_string())),
            MatrixSource::File(path) => {
                let label = path.file_stem().map_or_else(
                    || "matrix".to_string(),
                    |s| s.to_string_lossy().into_owned(),
                );
                Ok((matrix_file::read(path)?, label))
            }
        }
    }

    pub fn construction_seed(&self) -> u64 {
        match self {
            MatrixSource::Construct(spec) => spec.seed,
            MatrixSource::File(_) => 0,
        }
    }
}

/// Early stopping: end an SNR point once this many block errors are seen.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct StopRule {
    pub min_errors: Option<u64>,
}

impl Default for StopRule {
    fn default() -> Self {
        Self {
            min_errors: Some(200),
        }
    }
}

impl StopRule {
    pub const DISABLED: StopRule = StopRule { min_errors: None };

    pub fn should_stop(&self, errors: u64) -> bool {
        self.min_errors.is_some_and(|m| errors >= m)
    }
}

fn default_branching() -> usize {
    2
}

/// One BLER experiment. The JSON config file mirrors this struct field for field.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    pub params: SparseCodeParams,
    pub matrix: MatrixSource,
    pub channel: ChannelKind,
    #[serde(with = "snr_grid")]
    pub snr_grid_db: Vec<f64>,
    pub trials_per_point: u32,
    #[serde(default)]
    pub master_seed: u64,
    #[serde(default = "default_branching")]
    pub mmp_branching: usize,
    #[serde(default)]
    pub stop_rule: StopRule,
}

impl SimConfig {
    pub fn new(params: SparseCodeParams, matrix: MatrixSource, channel: ChannelKind) -> Self {
        Self {
            params,
            matrix,
            channel,
            snr_grid_db: vec![0.0],
            trials_per_point: 1000,
            master_seed: 0,
            mmp_branching: default_branching(),
            stop_rule: StopRule::default(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.params.validate()?;
        if self.trials_per_point == 0 {
            return Err(Error::InvalidArgument(
                "trials_per_point must be at least 1".into(),
            ));
        }
        if self.snr_grid_db.is_empty() {
            return Err(Error::InvalidArgument("SNR grid is empty".into()));
        }
        if self
            .snr_grid_db
            .iter()
            .any(|s| s.is_nan() || *s == f64::NEG_INFINITY)
        {
            return Err(Error::InvalidArgument(
                "SNR values must be finite or +inf".into(),
            ));
        }
        if self.mmp_branching == 0 {
            return Err(Error::InvalidArgument(
                "mmp_branching must be positive".into(),
            ));
        }
        if let MatrixSource::Construct(spec) = &self.matrix {
            if (spec.rows, spec.cols) != (self.params.spread_len, self.params.vector_len) {
                return Err(Error::InvalidArgument(format!(
                    "construction is {}x{} but the code needs {}x{}",
                    spec.rows, spec.cols, self.params.spread_len, self.params.vector_len
                )));
            }
            spec.validate()?;
        }
        Ok(())
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let c: SimConfig = serde_json::from_str(text)?;
        c.validate()?;
        Ok(c)
    }
}

/// SNR values as JSON numbers, with `+inf` written as the string `"inf"`.
mod snr_grid {
    use serde::de::Error as _;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    #[derive(Serialize, Deserialize)]
    #[serde(untagged)]
    enum Snr {
        Number(f64),
        Text(String),
    }

    pub fn serialize<S: Serializer>(v: &[f64], s: S) -> Result<S::Ok, S::Error> {
        v.iter()
            .map(|&x| {
                if x.is_finite() {
                    Snr::Number(x)
                } else {
                    Snr::Text(if x > 0.0 { "inf" } else { "-inf" }.into())
                }
            })
            .collect::<Vec<_>>()
            .serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<f64>, D::Error> {
        Vec::<Snr>::deserialize(d)?
            .into_iter()
            .map(|v| match v {
                Snr::Number(x) => Ok(x),
                Snr::Text(t) => match t.as_str() {
                    "inf" | "+inf" | "Infinity" => Ok(f64::INFINITY),
                    other => Err(D::Error::custom(format!("bad SNR value {other:?}"))),
                },
            })
            .collect()
    }
}
