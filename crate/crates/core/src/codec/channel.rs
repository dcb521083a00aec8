//! Spreading and the per-chip fading channel `y = h ∘ x + n`.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use super::mapping::{SparseCodeParams, SupportSet};
use crate::bitmatrix::BipolarMatrix;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ChannelKind {
    Awgn,
    Rayleigh,
}

impl std::str::FromStr for ChannelKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "awgn" | "gaussian" => Ok(ChannelKind::Awgn),
            "rayleigh" => Ok(ChannelKind::Rayleigh),
            other => Err(Error::InvalidArgument(format!("unknown channel {other:?}"))),
        }
    }
}

impl std::fmt::Display for ChannelKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            ChannelKind::Awgn => "awgn",
            ChannelKind::Rayleigh => "rayleigh",
        })
    }
}

/// Per-chip gains and noise level for one transmission.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelRealization {
    pub kind: ChannelKind,
    pub gains: Vec<Complex64>,
    pub noise_variance: f64,
}

/// One circular complex Gaussian sample with variance `variance`.
pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R, variance: f64) -> Complex64 {
    let s = (variance / 2.0).sqrt();
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(s * re, s * im)
}

impl ChannelRealization {
    /// Unit gains (AWGN) or i.i.d. `CN(0, 1)` gains (Rayleigh).
    pub fn draw<R: Rng + ?Sized>(
        kind: ChannelKind,
        len: usize,
        noise_variance: f64,
        rng: &mut R,
    ) -> Self {
        let gains = match kind {
            ChannelKind::Awgn => vec![Complex64::new(1.0, 0.0); len],
            ChannelKind::Rayleigh => (0..len).map(|_| complex_gaussian(rng, 1.0)).collect(),
        };
        Self {
            kind,
            gains,
            noise_variance,
        }
    }
}

/// `x[l] = (1/α) Σ_{i ∈ support} C[l, i]`.
pub fn spread(
    support: &SupportSet,
    c: &BipolarMatrix,
    params: &SparseCodeParams,
) -> Result<Vec<f64>> {
    if c.rows() != params.spread_len || c.cols() != params.vector_len {
        return Err(Error::InvalidArgument(format!(
            "matrix is {}x{}, parameters expect {}x{}",
            c.rows(),
            c.cols(),
            params.spread_len,
            params.vector_len
        )));
    }
    if let Some(&bad) = support.indices().iter().find(|&&i| i >= c.cols()) {
        return Err(Error::InvalidArgument(format!(
            "support index {bad} out of range"
        )));
    }
    let scale = 1.0 / params.alpha();
    Ok((0..c.rows())
        .map(|l| {
            let sum: i32 = support
                .indices()
                .iter()
                .map(|&i| i32::from(c.get(l, i)))
                .sum();
            f64::from(sum) * scale
        })
        .collect())
}

/// `y = h ∘ x + n` with `n ~ CN(0, σ²)`. Noise is drawn even when `σ² = 0` so
/// the generator advances identically at every SNR.
pub fn apply_channel<R: Rng + ?Sized>(
    x: &[f64],
    realization: &ChannelRealization,
    rng: &mut R,
) -> Vec<Complex64> {
    assert_eq!(x.len(), realization.gains.len(), "chip count mismatch");
    x.iter()
        .zip(&realization.gains)
        .map(|(&xl, &h)| h * xl + complex_gaussian(rng, realization.noise_variance))
        .collect()
}
