//! Spreading-matrix constructions.
//!
//! [`construct`] dispatches a [`ConstructionSpec`] to one of seven methods.
//! Every method is a pure function of the spec: the seed keys the only
//! random stream any of them consumes.

mod baselines;
pub mod oca;
pub mod ophm;
pub mod sequences;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub use baselines::logistic_chips;
pub use oca::{OcaOptions, OcaTrace};
pub use ophm::{DeletionStep, OphmTrace};
pub use sequences::{golay_pair, hadamard, m_sequence};

use crate::bitmatrix::BipolarMatrix;
use crate::error::{Error, Result};
use crate::rng::construction_rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Bernoulli,
    Pm,
    Cbm,
    Phm,
    Bgm,
    Ophm,
    Oca,
}

impl Method {
    pub const ALL: [Method; 7] = [
        Method::Bernoulli,
        Method::Pm,
        Method::Cbm,
        Method::Phm,
        Method::Bgm,
        Method::Ophm,
        Method::Oca,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Method::Bernoulli => "bernoulli",
            Method::Pm => "pm",
            Method::Cbm => "cbm",
            Method::Phm => "phm",
            Method::Bgm => "bgm",
            Method::Ophm => "ophm",
            Method::Oca => "oca",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Method::ALL
            .into_iter()
            .find(|m| m.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| {
                Error::InvalidArgument(format!(
                    "unknown method {s:?} (expected one of bernoulli, pm, cbm, phm, bgm, ophm, oca)"
                ))
            })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ConstructionSpec {
    pub method: Method,
    pub rows: usize,
    pub cols: usize,
    #[serde(default)]
    pub seed: u64,
}

impl ConstructionSpec {
    pub fn new(method: Method, rows: usize, cols: usize, seed: u64) -> Self {
        Self {
            method,
            rows,
            cols,
            seed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.rows == 0 || self.cols == 0 {
            return Err(Error::InvalidArgument(
                "rows and cols must be positive".into(),
            ));
        }
        if self.rows > self.cols {
            return Err(Error::InvalidArgument(format!(
                "rows ({}) > cols ({}): spreading matrices must be compressive",
                self.rows, self.cols
            )));
        }
        Ok(())
    }
}

/// Diagnostics recorded by the two optimizing constructions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Trace {
    None,
    Ophm(OphmTrace),
    Oca(OcaTrace),
}

/// Builds the spreading matrix described by `spec`.
pub fn construct(spec: &ConstructionSpec) -> Result<BipolarMatrix> {
    construct_traced(spec).map(|(c, _)| c)
}

pub fn construct_traced(spec: &ConstructionSpec) -> Result<(BipolarMatrix, Trace)> {
    spec.validate()?;
    let (rows, cols) = (spec.rows, spec.cols);
    let mut rng = construction_rng(spec.seed);
    let plain = |c: Result<BipolarMatrix>| c.map(|c| (c, Trace::None));
    match spec.method {
        Method::Bernoulli => plain(baselines::bernoulli(rows, cols, &mut rng)),
        Method::Pm => plain(baselines::pm(rows, cols, &mut rng)),
        Method::Cbm => plain(baselines::cbm(rows, cols, &mut rng)),
        Method::Phm => plain(baselines::phm(rows, cols, &mut rng)),
        Method::Bgm => plain(baselines::bgm(rows, cols, &mut rng)),
        Method::Ophm => ophm::ophm(rows, cols, &mut rng).map(|(c, t)| (c, Trace::Ophm(t))),
        Method::Oca => oca::oca(rows, cols, OcaOptions::default()).map(|(c, t)| (c, Trace::Oca(t))),
    }
}

pub fn construct_bernoulli(rows: usize, cols: usize, seed: u64) -> Result<BipolarMatrix> {
    construct(&ConstructionSpec::new(Method::Bernoulli, rows, cols, seed))
}

pub fn construct_pm(rows: usize, cols: usize, seed: u64) -> Result<BipolarMatrix> {
    construct(&ConstructionSpec::new(Method::Pm, rows, cols, seed))
}

pub fn construct_cbm(rows: usize, cols: usize, seed: u64) -> Result<BipolarMatrix> {
    construct(&ConstructionSpec::new(Method::Cbm, rows, cols, seed))
}

pub fn construct_phm(rows: usize, cols: usize, seed: u64) -> Result<BipolarMatrix> {
    construct(&ConstructionSpec::new(Method::Phm, rows, cols, seed))
}

pub fn construct_bgm(rows: usize, cols: usize, seed: u64) -> Result<BipolarMatrix> {
    construct(&ConstructionSpec::new(Method::Bgm, rows, cols, seed))
}

pub fn construct_ophm(rows: usize, cols: usize, seed: u64) -> Result<BipolarMatrix> {
    construct(&ConstructionSpec::new(Method::Ophm, rows, cols, seed))
}

pub fn construct_oca(rows: usize, cols: usize) -> Result<BipolarMatrix> {
    construct(&ConstructionSpec::new(Method::Oca, rows, cols, 0))
}

/// OCA with explicit options, returning the bound history.
pub fn construct_oca_with(
    rows: usize,
    cols: usize,
    opts: OcaOptions,
) -> Result<(BipolarMatrix, OcaTrace)> {
    ConstructionSpec::new(Method::Oca, rows, cols, 0).validate()?;
    oca::oca(rows, cols, opts)
}
