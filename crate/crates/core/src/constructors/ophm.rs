//! Optimized partial Hadamard matrix: greedy row deletion.
//!
//! Start from the leading `cols × cols` block of the smallest Sylvester
//! Hadamard matrix of order `≥ cols`, then delete `cols - rows` rows one at a
//! time. Each step removes a row whose deletion leaves the smallest
//! `max |⟨c_i, c_j⟩|`; ties are broken uniformly at random.
//!
//! The off-diagonal Gram entries are maintained incrementally: deleting row
//! `k` changes `G[i,j]` by `-C[k,i]·C[k,j]`.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::sequences::hadamard;
use crate::bitmatrix::BipolarMatrix;
use crate::error::Result;

/// One greedy deletion.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeletionStep {
    /// Index of the deleted row in the starting matrix.
    pub original_row: usize,
    /// Position of the deleted row in the matrix it was deleted from.
    pub position: usize,
    /// `max |⟨c_i, c_j⟩|` after the deletion.
    pub max_abs_ip: u64,
    /// Number of rows that tied for the minimum.
    pub ties: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OphmTrace {
    pub initial: BipolarMatrix,
    pub steps: Vec<DeletionStep>,
}

/// Leading `cols × cols` block of the Sylvester Hadamard matrix of order `cols.next_power_of_two()`.
pub fn initial_block(cols: usize) -> Result<BipolarMatrix> {
    let h = hadamard(cols.next_power_of_two())?;
    let idx: Vec<usize> = (0..cols).collect();
    h.select_rows(&idx)?.select_cols(&idx)
}

pub fn ophm(rows: usize, cols: usize, rng: &mut ChaCha8Rng) -> Result<(BipolarMatrix, OphmTrace)> {
    let initial = initial_block(cols)?;
    let (c, steps) = greedy_delete(&initial, rows, rng)?;
    Ok((c, OphmTrace { initial, steps }))
}

/// Deletes rows of `start` greedily until `target_rows` remain.
pub fn greedy_delete(
    start: &BipolarMatrix,
    target_rows: usize,
    rng: &mut ChaCha8Rng,
) -> Result<(BipolarMatrix, Vec<DeletionStep>)> {
    let n = start.cols();
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .collect();
    let mut gram: Vec<i64> = pairs
        .iter()
        .map(|&(i, j)| start.column_inner_product(i, j))
        .collect();
    let row_signs: Vec<Vec<i64>> = (0..start.rows())
        .map(|l| start.row(l).into_iter().map(i64::from).collect())
        .collect();
    let mut alive: Vec<usize> = (0..start.rows()).collect();
    let mut steps = Vec::new();

    while alive.len() > target_rows {
        let scores: Vec<u64> = alive
            .iter()
            .map(|&k| {
                let r = &row_signs[k];
                pairs
                    .iter()
                    .zip(&gram)
                    .map(|(&(i, j), &g)| (g - r[i] * r[j]).unsigned_abs())
                    .max()
                    .unwrap_or(0)
            })
            .collect();
        let best = *scores.iter().min().expect("at least one row alive");
        let candidates: Vec<usize> = (0..alive.len()).filter(|&p| scores[p] == best).collect();
        let position = if candidates.len() == 1 {
            candidates[0]
        } else {
            candidates[rng.random_range(0..candidates.len())]
        };
        let k = alive.remove(position);
        let r = &row_signs[k];
        for (&(i, j), g) in pairs.iter().zip(gram.iter_mut()) {
            *g -= r[i] * r[j];
        }
        steps.push(DeletionStep {
            original_row: k,
            position,
            max_abs_ip: best,
            ties: candidates.len(),
        });
    }
    Ok((start.select_rows(&alive)?, steps))
}
