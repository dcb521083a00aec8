//! Reference constructions: Bernoulli, m-sequence (PM), chaotic (CBM),
//! partial Hadamard (PHM) and Golay-based (BGM).

use rand::seq::index;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::sequences::{bits_to_signs, golay_pair, hadamard, m_sequence, PRIMITIVE_TRINOMIALS};
use crate::bitmatrix::BipolarMatrix;
use crate::error::{Error, Result};

/// `k` distinct indices from `0..n`, ascending.
fn sorted_sample(rng: &mut ChaCha8Rng, n: usize, k: usize) -> Vec<usize> {
    let mut v = index::sample(rng, n, k).into_vec();
    v.sort_unstable();
    v
}

/// i.i.d. uniform signs, drawn a word at a time per column.
pub fn bernoulli(rows: usize, cols: usize, rng: &mut ChaCha8Rng) -> Result<BipolarMatrix> {
    let words = rows.div_ceil(64) * cols;
    let data = (0..words).map(|_| rng.random::<u64>()).collect();
    if rows == 0 || cols == 0 {
        return Err(Error::InvalidArgument("empty matrix".into()));
    }
    Ok(BipolarMatrix::from_packed(rows, cols, data))
}

/// Rows sampled from the circulant of an m-sequence, first `cols` columns.
pub fn pm(rows: usize, cols: usize, rng: &mut ChaCha8Rng) -> Result<BipolarMatrix> {
    let &(n, _) = PRIMITIVE_TRINOMIALS
        .iter()
        .find(|&&(n, _)| (1usize << n) > cols)
        .ok_or_else(|| {
            Error::InvalidArgument(format!("PM supports at most 127 columns, got {cols}"))
        })?;
    let seq = bits_to_signs(&m_sequence(n)?);
    let period = seq.len();
    let picked = sorted_sample(rng, period, rows);
    BipolarMatrix::from_fn(rows, cols, |l, j| seq[(picked[l] + j) % period] == 1)
}

const LOGISTIC_BURN_IN: usize = 1000;
const LOGISTIC_STRIDE: usize = 5;

fn logistic(x: f64) -> f64 {
    4.0 * x * (1.0 - x)
}

fn degenerate(x: f64) -> bool {
    x <= 0.0 || x >= 1.0 || x == 0.5 || x == 0.75
}

/// Chaotic logistic-map chips, column-major: `+1` where the sample exceeds 0.5.
pub fn cbm(rows: usize, cols: usize, rng: &mut ChaCha8Rng) -> Result<BipolarMatrix> {
    let chips = logistic_chips(rows * cols, rng);
    BipolarMatrix::from_fn(rows, cols, |l, j| chips[j * rows + l])
}

/// `count` thresholded samples of a logistic orbit; redraws the start if the orbit degenerates.
pub fn logistic_chips(count: usize, rng: &mut ChaCha8Rng) -> Vec<bool> {
    'draw: loop {
        let mut x: f64 = rng.random();
        if degenerate(x) {
            continue;
        }
        for _ in 0..LOGISTIC_BURN_IN {
            x = logistic(x);
            if degenerate(x) {
                continue 'draw;
            }
        }
        let mut out = Vec::with_capacity(count);
        for _ in 0..count {
            for _ in 0..LOGISTIC_STRIDE {
                x = logistic(x);
            }
            if degenerate(x) {
                continue 'draw;
            }
            out.push(x > 0.5);
        }
        return out;
    }
}

/// Random rows and columns of the smallest Sylvester Hadamard matrix covering `cols`.
pub fn phm(rows: usize, cols: usize, rng: &mut ChaCha8Rng) -> Result<BipolarMatrix> {
    let n = cols.next_power_of_two();
    let h = hadamard(n)?;
    let r = sorted_sample(rng, n, rows);
    let c = sorted_sample(rng, n, cols);
    BipolarMatrix::from_fn(rows, cols, |l, j| h.get(r[l], c[j]) == 1)
}

/// Rows sampled from all cyclic shifts of both members of a Golay pair, first `cols` columns.
pub fn bgm(rows: usize, cols: usize, rng: &mut ChaCha8Rng) -> Result<BipolarMatrix> {
    let len = cols.next_power_of_two();
    let (a, b) = golay_pair(len.trailing_zeros());
    let picked = sorted_sample(rng, 2 * len, rows);
    BipolarMatrix::from_fn(rows, cols, |l, j| {
        let r = picked[l];
        let chip = if r < len {
            a[(j + r) % len]
        } else {
            b[(j + r - len) % len]
        };
        chip == 1
    })
}
