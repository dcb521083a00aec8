//! Bit-packed bipolar matrices and their Gram/coherence statistics.
//!
//! A [`BipolarMatrix`] stores each column as a run of `u64` words, bit set
//! meaning `+1` and bit clear meaning `-1`. Padding bits past `rows` are kept
//! at zero so that XOR + popcount over whole words counts only real chips.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const WORD_BITS: usize = 64;

fn words_for(rows: usize) -> usize {
    rows.div_ceil(WORD_BITS)
}

fn tail_mask(rows: usize) -> u64 {
    match rows % WORD_BITS {
        0 => u64::MAX,
        r => (1u64 << r) - 1,
    }
}

/// Packs a sign slice into words (bit set ⇔ `+1`).
fn pack(signs: &[i8]) -> Result<Vec<u64>> {
    let mut words = vec![0u64; words_for(signs.len())];
    for (l, &s) in signs.iter().enumerate() {
        match s {
            1 => words[l / WORD_BITS] |= 1 << (l % WORD_BITS),
            -1 => {}
            other => {
                return Err(Error::InvalidArgument(format!(
                    "entry {other} at chip {l} is not +1 or -1"
                )))
            }
        }
    }
    Ok(words)
}

/// Inner product of two sign vectors, `Σ a[l]·b[l]`.
pub fn inner_product(a: &[i8], b: &[i8]) -> Result<i64> {
    if a.len() != b.len() {
        return Err(Error::InvalidArgument(format!(
            "length mismatch: {} vs {}",
            a.len(),
            b.len()
        )));
    }
    let (pa, pb) = (pack(a)?, pack(b)?);
    Ok(a.len() as i64 - 2 * hamming_words(&pa, &pb) as i64)
}

fn hamming_words(a: &[u64], b: &[u64]) -> u32 {
    a.iter().zip(b).map(|(x, y)| (x ^ y).count_ones()).sum()
}

/// A `rows × cols` matrix over `{+1, -1}`, stored column-major and bit-packed.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BipolarMatrix {
    rows: usize,
    cols: usize,
    words_per_col: usize,
    data: Vec<u64>,
}

impl BipolarMatrix {
    /// Builds a matrix from explicit sign columns.
    pub fn from_columns(rows: usize, columns: &[Vec<i8>]) -> Result<Self> {
        if rows == 0 || columns.is_empty() {
            return Err(Error::InvalidArgument(
                "matrix needs at least one row and one column".into(),
            ));
        }
        let words_per_col = words_for(rows);
        let mut data = Vec::with_capacity(words_per_col * columns.len());
        for (j, col) in columns.iter().enumerate() {
            if col.len() != rows {
                return Err(Error::InvalidArgument(format!(
                    "column {j} has length {}, expected {rows}",
                    col.len()
                )));
            }
            data.extend(pack(col)?);
        }
        Ok(Self {
            rows,
            cols: columns.len(),
            words_per_col,
            data,
        })
    }

    /// Builds a matrix from row-major sign rows.
    pub fn from_rows(rows: &[Vec<i8>]) -> Result<Self> {
        let n = rows.len();
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::InvalidArgument("ragged rows".into()));
        }
        let columns: Vec<Vec<i8>> = (0..cols)
            .map(|j| rows.iter().map(|r| r[j]).collect())
            .collect();
        Self::from_columns(n, &columns)
    }

    /// Builds a matrix by evaluating `sign(row, col)` for every entry; `true` is `+1`.
    pub fn from_fn(
        rows: usize,
        cols: usize,
        mut plus: impl FnMut(usize, usize) -> bool,
    ) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::InvalidArgument(
                "matrix needs at least one row and one column".into(),
            ));
        }
        let words_per_col = words_for(rows);
        let mut data = vec![0u64; words_per_col * cols];
        for j in 0..cols {
            for l in 0..rows {
                if plus(l, j) {
                    data[j * words_per_col + l / WORD_BITS] |= 1 << (l % WORD_BITS);
                }
            }
        }
        Ok(Self {
            rows,
            cols,
            words_per_col,
            data,
        })
    }

    /// Builds a matrix directly from packed column words. Bits past `rows` are cleared.
    pub(crate) fn from_packed(rows: usize, cols: usize, mut data: Vec<u64>) -> Self {
        let words_per_col = words_for(rows);
        debug_assert_eq!(data.len(), words_per_col * cols);
        let mask = tail_mask(rows);
        for j in 0..cols {
            data[(j + 1) * words_per_col - 1] &= mask;
        }
        Self {
            rows,
            cols,
            words_per_col,
            data,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Packed words of column `j`.
    pub fn column_words(&self, j: usize) -> &[u64] {
        &self.data[j * self.words_per_col..(j + 1) * self.words_per_col]
    }

    /// Entry `(l, j)` as `+1` or `-1` (zero-based indices).
    pub fn get(&self, l: usize, j: usize) -> i8 {
        assert!(
            l < self.rows && j < self.cols,
            "index ({l}, {j}) out of bounds"
        );
        let w = self.data[j * self.words_per_col + l / WORD_BITS];
        if (w >> (l % WORD_BITS)) & 1 == 1 {
            1
        } else {
            -1
        }
    }

    /// Column `j` unpacked into signs.
    pub fn column(&self, j: usize) -> Vec<i8> {
        (0..self.rows).map(|l| self.get(l, j)).collect()
    }

    pub fn columns(&self) -> Vec<Vec<i8>> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn row(&self, l: usize) -> Vec<i8> {
        (0..self.cols).map(|j| self.get(l, j)).collect()
    }

    /// Inner product of columns `i` and `j` via XOR + popcount.
    pub fn column_inner_product(&self, i: usize, j: usize) -> i64 {
        self.rows as i64 - 2 * hamming_words(self.column_words(i), self.column_words(j)) as i64
    }

    /// Unnormalized Gram matrix `CᵀC`, row-major `cols × cols`.
    pub fn gram(&self) -> Vec<i64> {
        let n = self.cols;
        let mut g = vec![0i64; n * n];
        for i in 0..n {
            g[i * n + i] = self.rows as i64;
            for j in i + 1..n {
                let ip = self.column_inner_product(i, j);
                g[i * n + j] = ip;
                g[j * n + i] = ip;
            }
        }
        g
    }

    /// Largest off-diagonal `|⟨c_i, c_j⟩|`, or 0 for a single column.
    pub fn max_abs_inner_product(&self) -> u64 {
        let mut best = 0;
        for i in 0..self.cols {
            for j in i + 1..self.cols {
                best = best.max(self.column_inner_product(i, j).unsigned_abs());
            }
        }
        best
    }

    /// Returns a copy with zero-based row `k` removed.
    pub fn delete_row(&self, k: usize) -> Result<Self> {
        if self.rows < 2 {
            return Err(Error::InvalidArgument("cannot delete the only row".into()));
        }
        if k >= self.rows {
            return Err(Error::InvalidArgument(format!(
                "row {k} out of range for {} rows",
                self.rows
            )));
        }
        self.select_rows(&(0..self.rows).filter(|&l| l != k).collect::<Vec<_>>())
    }

    /// Submatrix made of the given rows, in the given order.
    pub fn select_rows(&self, rows: &[usize]) -> Result<Self> {
        if let Some(&bad) = rows.iter().find(|&&l| l >= self.rows) {
            return Err(Error::InvalidArgument(format!("row {bad} out of range")));
        }
        Self::from_fn(rows.len(), self.cols, |l, j| self.get(rows[l], j) == 1)
    }

    /// Submatrix made of the given columns, in the given order.
    pub fn select_cols(&self, cols: &[usize]) -> Result<Self> {
        if let Some(&bad) = cols.iter().find(|&&j| j >= self.cols) {
            return Err(Error::InvalidArgument(format!("column {bad} out of range")));
        }
        Self::from_fn(self.rows, cols.len(), |l, j| self.get(l, cols[j]) == 1)
    }

    /// Column `j` as `f64` chips.
    pub fn column_f64(&self, j: usize) -> Vec<f64> {
        (0..self.rows).map(|l| f64::from(self.get(l, j))).collect()
    }

    /// Gram/coherence profile with the default 10-bin histogram.
    pub fn coherence(&self) -> Result<GramProfile> {
        GramProfile::compute(self, DEFAULT_BINS)
    }
}

impl fmt::Debug for BipolarMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BipolarMatrix {}x{} [", self.rows, self.cols)?;
        for l in 0..self.rows {
            let line: String = (0..self.cols)
                .map(|j| if self.get(l, j) == 1 { '+' } else { '-' })
                .collect();
            writeln!(f, "  {line}")?;
        }
        write!(f, "]")
    }
}

pub const DEFAULT_BINS: usize = 10;

/// One histogram bin over normalized `|G[i,j]|`. Bins are `[lo, hi)` except the last, which is closed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HistogramBin {
    pub lo: f64,
    pub hi: f64,
    pub count: u64,
}

/// Off-diagonal Gram statistics of a bipolar matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GramProfile {
    pub rows: usize,
    pub cols: usize,
    /// `max_{i<j} |⟨c_i, c_j⟩|`, unnormalized.
    pub max_abs_ip: u64,
    /// Sum over `i<j` of `|⟨c_i, c_j⟩|`, unnormalized.
    pub sum_abs_ip: u64,
    /// Count of unordered pairs per unnormalized `|ip|` value, index = `|ip|`.
    pub abs_ip_counts: Vec<u64>,
    pub histogram: Vec<HistogramBin>,
}

impl GramProfile {
    pub fn compute(c: &BipolarMatrix, bins: usize) -> Result<Self> {
        if c.cols() < 2 {
            return Err(Error::InvalidArgument(
                "coherence needs at least two columns".into(),
            ));
        }
        if bins == 0 {
            return Err(Error::InvalidArgument(
                "histogram needs at least one bin".into(),
            ));
        }
        let mut counts = vec![0u64; c.rows() + 1];
        for i in 0..c.cols() {
            for j in i + 1..c.cols() {
                counts[c.column_inner_product(i, j).unsigned_abs() as usize] += 1;
            }
        }
        Ok(Self::from_counts(c.rows(), c.cols(), counts, bins))
    }

    pub(crate) fn from_counts(rows: usize, cols: usize, counts: Vec<u64>, bins: usize) -> Self {
        let max_abs_ip = counts.iter().rposition(|&n| n > 0).unwrap_or(0) as u64;
        let sum_abs_ip = counts.iter().enumerate().map(|(v, &n)| v as u64 * n).sum();
        let mut histogram: Vec<HistogramBin> = (0..bins)
            .map(|b| HistogramBin {
                lo: b as f64 / bins as f64,
                hi: (b + 1) as f64 / bins as f64,
                count: 0,
            })
            .collect();
        for (v, &n) in counts.iter().enumerate() {
            histogram[bin_index(v, rows, bins)].count += n;
        }
        Self {
            rows,
            cols,
            max_abs_ip,
            sum_abs_ip,
            abs_ip_counts: counts,
            histogram,
        }
    }

    /// Normalized mutual coherence `max_abs_ip / rows`.
    pub fn mu(&self) -> f64 {
        self.max_abs_ip as f64 / self.rows as f64
    }

    pub fn pairs(&self) -> u64 {
        (self.cols * (self.cols - 1) / 2) as u64
    }

    pub fn mean_abs_coherence(&self) -> f64 {
        self.sum_abs_ip as f64 / (self.pairs() as f64 * self.rows as f64)
    }

    /// Number of pairs with normalized `|G|` in `[lo, hi)`, evaluated exactly on integers.
    pub fn count_in(&self, lo: f64, hi: f64) -> u64 {
        self.abs_ip_counts
            .iter()
            .enumerate()
            .filter(|&(v, _)| {
                let g = v as f64 / self.rows as f64;
                g >= lo && g < hi
            })
            .map(|(_, &n)| n)
            .sum()
    }

    pub fn fraction_in(&self, lo: f64, hi: f64) -> f64 {
        self.count_in(lo, hi) as f64 / self.pairs() as f64
    }
}

/// Bin of `v / rows` among `bins` uniform bins over `[0, 1]`, decided in integer arithmetic.
fn bin_index(v: usize, rows: usize, bins: usize) -> usize {
    // floor(v * bins / rows), with v == rows landing in the closed last bin
    ((v * bins) / rows).min(bins - 1)
}

/// Welch lower bound on the coherence of `cols` unit vectors in dimension `rows`; 0 when `cols ≤ rows`.
pub fn welch_bound(rows: usize, cols: usize) -> f64 {
    if cols <= rows || rows == 0 {
        return 0.0;
    }
    let (m, n) = (rows as f64, cols as f64);
    ((n - m) / (m * (n - 1.0))).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i8]]) -> BipolarMatrix {
        BipolarMatrix::from_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn inner_product_examples() {
        assert_eq!(inner_product(&[1, 1], &[1, 1]).unwrap(), 2);
        assert_eq!(inner_product(&[1, 1], &[1, -1]).unwrap(), 0);
        assert_eq!(
            inner_product(&[1, 1, 1, 1, -1], &[1, -1, 1, -1, 1]).unwrap(),
            -1
        );
    }

    #[test]
    fn inner_product_rejects_bad_input() {
        assert!(matches!(
            inner_product(&[1, 1], &[1]),
            Err(Error::InvalidArgument(_))
        ));
        assert!(inner_product(&[1, 0], &[1, 1]).is_err());
    }

    #[test]
    fn coherence_of_tiny_matrices() {
        let orth = m(&[&[1, 1], &[1, -1]]);
        assert_eq!(orth.coherence().unwrap().mu(), 0.0);
        let dup = m(&[&[1, 1], &[1, 1]]);
        let p = dup.coherence().unwrap();
        assert_eq!(p.mu(), 1.0);
        // |G| = 1 lands in the closed last bin
        assert_eq!(p.histogram[9].count, 1);
    }

    #[test]
    fn coherence_needs_two_columns() {
        let one = m(&[&[1], &[-1]]);
        assert!(one.coherence().is_err());
    }

    #[test]
    fn printed_five_by_nine_example() {
        let c = m(&[
            &[1, 1, 1, 1, -1, 1, -1, 1, -1],
            &[1, -1, 1, -1, 1, -1, 1, -1, -1],
            &[1, 1, -1, -1, 1, 1, -1, -1, 1],
            &[1, -1, -1, 1, 1, -1, 1, 1, -1],
            &[-1, 1, 1, 1, -1, -1, -1, -1, 1],
        ]);
        let p = c.coherence().unwrap();
        // brute-force Gram of the printed matrix: columns 5 and 9 are negatives
        assert_eq!(p.max_abs_ip, 5);
        assert_eq!(p.sum_abs_ip, 64);
        assert_eq!(p.abs_ip_counts, vec![0, 23, 0, 12, 0, 1]);
        assert_eq!(p.mu(), 1.0);
    }

    #[test]
    fn delete_row_examples() {
        let h2 = m(&[&[1, 1], &[1, -1]]);
        assert_eq!(h2.delete_row(0).unwrap(), m(&[&[1, -1]]));
        assert!(h2.delete_row(2).is_err());
        assert!(m(&[&[1, -1]]).delete_row(0).is_err());
        let h4 = m(&[
            &[1, 1, 1, 1],
            &[1, -1, 1, -1],
            &[1, 1, -1, -1],
            &[1, -1, -1, 1],
        ]);
        for k in 0..4 {
            let p = h4.delete_row(k).unwrap().coherence().unwrap();
            assert_eq!(p.abs_ip_counts, vec![0, 6, 0, 0]);
        }
        // deleting rows 3 then 1 equals deleting {1, 3}
        let a = h4.delete_row(3).unwrap().delete_row(1).unwrap();
        assert_eq!(a, h4.select_rows(&[0, 2]).unwrap());
        assert_eq!(h4.rows(), 4);
    }

    #[test]
    fn welch_examples() {
        assert!((welch_bound(15, 24) - (9.0f64 / 345.0).sqrt()).abs() < 1e-12);
        assert!((welch_bound(15, 24) - 0.161_515).abs() < 1e-6);
        assert!((welch_bound(25, 65) - 0.158_113_883).abs() < 1e-8);
        assert_eq!(welch_bound(7, 7), 0.0);
        assert_eq!(welch_bound(8, 3), 0.0);
    }

    #[test]
    fn multi_word_columns() {
        let rows = 130;
        let c = BipolarMatrix::from_fn(rows, 3, |l, j| (l * (j + 1)) % 3 != 0).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let naive: i64 = (0..rows)
                    .map(|l| i64::from(c.get(l, i)) * i64::from(c.get(l, j)))
                    .sum();
                assert_eq!(c.column_inner_product(i, j), naive);
            }
        }
        assert_eq!(c.column_inner_product(1, 1), rows as i64);
    }
}
