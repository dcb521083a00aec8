//! Message ↔ support mapping.
//!
//! Messages `0 .. 2^b` are ranked onto K-subsets of `{0, .., L_sv-1}`. The
//! ordering reads the sparse vector from the right: subsets containing the
//! last position come first, ordered by their next-highest index descending,
//! so message 0 is `{L_sv-2, L_sv-1}` and message 1 is `{L_sv-3, L_sv-1}`.
//! Equivalently, after mirroring indices `i → L_sv-1-i` this is plain
//! lexicographic order on ascending tuples.

use num_bigint::BigUint;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Code dimensions `(b, K, L_sv, L_s)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SparseCodeParams {
    /// Payload bits `b`.
    pub bits: u32,
    /// Non-zero entries `K`.
    pub sparsity: usize,
    /// Sparse-vector length `L_sv` (matrix columns).
    pub vector_len: usize,
    /// Spread length `L_s` (matrix rows).
    pub spread_len: usize,
}

impl SparseCodeParams {
    pub fn new(bits: u32, sparsity: usize, vector_len: usize, spread_len: usize) -> Result<Self> {
        let p = Self {
            bits,
            sparsity,
            vector_len,
            spread_len,
        };
        p.validate()?;
        Ok(p)
    }

    /// Parameters with the shortest vector length that carries `bits`.
    pub fn minimal(bits: u32, sparsity: usize, spread_len: usize) -> Result<Self> {
        Self::new(bits, sparsity, min_length(bits, sparsity)?, spread_len)
    }

    pub fn validate(&self) -> Result<()> {
        if self.bits == 0 || self.bits > 63 {
            return Err(Error::InvalidArgument(format!(
                "payload bits must be in 1..=63, got {}",
                self.bits
            )));
        }
        if self.sparsity == 0 || self.sparsity > self.vector_len {
            return Err(Error::InvalidArgument(format!(
                "sparsity {} must be in 1..={}",
                self.sparsity, self.vector_len
            )));
        }
        if self.spread_len == 0 || self.spread_len > self.vector_len {
            return Err(Error::InvalidArgument(format!(
                "spread length {} must be in 1..={}",
                self.spread_len, self.vector_len
            )));
        }
        if binomial_big(self.vector_len, self.sparsity) < BigUint::one() << self.bits {
            return Err(Error::InvalidArgument(format!(
                "C({}, {}) < 2^{}: vector too short for the payload",
                self.vector_len, self.sparsity, self.bits
            )));
        }
        Ok(())
    }

    /// Spreading normalization `α = √K` (unit average chip power).
    pub fn alpha(&self) -> f64 {
        (self.sparsity as f64).sqrt()
    }

    pub fn codebook_size(&self) -> u64 {
        1u64 << self.bits
    }
}

fn binomial_big(n: usize, k: usize) -> BigUint {
    if k > n {
        return BigUint::ZERO;
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    acc
}

/// Exact `C(n, k)` in `u128`; saturates on overflow.
fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc * (n - i) is divisible by (i + 1) after the multiply
        match acc.checked_mul((n - i) as u128) {
            Some(v) => acc = v / (i as u128 + 1),
            None => return u128::MAX,
        }
    }
    acc
}

/// Smallest `L_sv` with `⌊log₂ C(L_sv, K)⌋ ≥ b`, i.e. `C(L_sv, K) ≥ 2^b`.
pub fn min_length(bits: u32, sparsity: usize) -> Result<usize> {
    if bits == 0 || sparsity == 0 {
        return Err(Error::InvalidArgument(
            "bits and sparsity must be positive".into(),
        ));
    }
    let target = BigUint::one() << bits;
    let enough = |n: usize| binomial_big(n, sparsity) >= target;
    // C(n, K) is increasing in n ≥ K: bracket, then bisect
    let mut lo = sparsity;
    if enough(lo) {
        return Ok(lo);
    }
    let mut hi = sparsity.checked_mul(2).ok_or_else(overflow)?;
    while !enough(hi) {
        lo = hi;
        hi = hi.checked_mul(2).ok_or_else(overflow)?;
    }
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if enough(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

fn overflow() -> Error {
    Error::InvalidArgument("vector length overflows usize".into())
}

/// Sorted zero-based indices of the non-zero entries of a sparse vector.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SupportSet(Vec<usize>);

impl SupportSet {
    pub fn new(mut indices: Vec<usize>) -> Result<Self> {
        indices.sort_unstable();
        if indices.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidArgument(
                "support indices must be distinct".into(),
            ));
        }
        Ok(Self(indices))
    }

    /// From one-based indices, as sparse vectors are usually written.
    pub fn from_one_based(indices: &[usize]) -> Result<Self> {
        if indices.contains(&0) {
            return Err(Error::InvalidArgument("one-based index 0".into()));
        }
        Self::new(indices.iter().map(|&i| i - 1).collect())
    }

    pub fn indices(&self) -> &[usize] {
        &self.0
    }

    pub fn one_based(&self) -> Vec<usize> {
        self.0.iter().map(|&i| i + 1).collect()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// The sparse vector as a 0/1 string, first position leftmost.
    pub fn to_bit_string(&self, vector_len: usize) -> String {
        (0..vector_len)
            .map(|i| {
                if self.0.binary_search(&i).is_ok() {
                    '1'
                } else {
                    '0'
                }
            })
            .collect()
    }
}

/// Canonical rank of a K-subset of `0..n` in the mapping order.
pub fn support_rank(support: &SupportSet, n: usize) -> Result<u128> {
    let k = support.len();
    if support.indices().iter().any(|&i| i >= n) {
        return Err(Error::InvalidArgument(format!(
            "support index out of range for length {n}"
        )));
    }
    // mirrored, ascending
    let mut mirrored: Vec<usize> = support.indices().iter().map(|&i| n - 1 - i).collect();
    mirrored.reverse();
    let mut rank = 0u128;
    let mut prev: Option<usize> = None;
    for (t, &r) in mirrored.iter().enumerate() {
        let start = prev.map_or(0, |p| p + 1);
        for v in start..r {
            rank += binomial(n - 1 - v, k - t - 1);
        }
        prev = Some(r);
    }
    Ok(rank)
}

/// Inverse of [`support_rank`].
pub fn support_unrank(mut rank: u128, n: usize, k: usize) -> Result<SupportSet> {
    if rank >= binomial(n, k) {
        return Err(Error::InvalidArgument(format!(
            "rank {rank} exceeds C({n}, {k})"
        )));
    }
    let mut mirrored = Vec::with_capacity(k);
    let mut v = 0usize;
    for t in 0..k {
        loop {
            let block = binomial(n - 1 - v, k - t - 1);
            if rank < block {
                break;
            }
            rank -= block;
            v += 1;
        }
        mirrored.push(v);
        v += 1;
    }
    SupportSet::new(mirrored.into_iter().map(|r| n - 1 - r).collect())
}

/// Maps a `b`-bit message to its support.
pub fn sparse_map(message: u64, params: &SparseCodeParams) -> Result<SupportSet> {
    if message >= params.codebook_size() {
        return Err(Error::InvalidArgument(format!(
            "message {message} does not fit in {} bits",
            params.bits
        )));
    }
    support_unrank(u128::from(message), params.vector_len, params.sparsity)
}

/// Maps a support back to its message; supports ranked past `2^b` are out of the codebook.
pub fn sparse_demap(support: &SupportSet, params: &SparseCodeParams) -> Result<u64> {
    if support.len() != params.sparsity {
        return Err(Error::InvalidArgument(format!(
            "support has {} indices, expected {}",
            support.len(),
            params.sparsity
        )));
    }
    let rank = support_rank(support, params.vector_len)?;
    let limit = u128::from(params.codebook_size());
    if rank >= limit {
        return Err(Error::OutOfCodebook { rank, limit });
    }
    Ok(rank as u64)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p5() -> SparseCodeParams {
        SparseCodeParams::new(5, 2, 9, 5).unwrap()
    }

    #[test]
    fn min_length_table_values() {
        assert_eq!(min_length(5, 2).unwrap(), 9);
        assert_eq!(min_length(8, 2).unwrap(), 24);
        assert_eq!(min_length(11, 2).unwrap(), 65);
        assert_eq!(min_length(1, 1).unwrap(), 2);
        assert!(min_length(0, 2).is_err());
        // binomials past u128
        let n = min_length(150, 4).unwrap();
        assert!(binomial_big(n, 4) >= BigUint::one() << 150u32);
        assert!(binomial_big(n - 1, 4) < BigUint::one() << 150u32);
    }

    #[test]
    fn printed_mapping_rows() {
        let p = p5();
        let s0 = sparse_map(0, &p).unwrap();
        assert_eq!(s0.one_based(), vec![8, 9]);
        assert_eq!(s0.to_bit_string(9), "000000011");
        let s1 = sparse_map(1, &p).unwrap();
        assert_eq!(s1.one_based(), vec![7, 9]);
        assert_eq!(s1.to_bit_string(9), "000000101");
        assert_eq!(
            sparse_demap(&SupportSet::from_one_based(&[8, 9]).unwrap(), &p).unwrap(),
            0
        );
        assert_eq!(
            sparse_demap(&SupportSet::from_one_based(&[7, 9]).unwrap(), &p).unwrap(),
            1
        );
    }

    #[test]
    fn four_of_thirty_six_pairs_are_out_of_codebook() {
        let p = p5();
        let mut outside = Vec::new();
        for i in 1..=9 {
            for j in i + 1..=9 {
                let s = SupportSet::from_one_based(&[i, j]).unwrap();
                if let Err(Error::OutOfCodebook { .. }) = sparse_demap(&s, &p) {
                    outside.push((i, j));
                }
            }
        }
        assert_eq!(outside.len(), 4);
        assert!(outside.contains(&(1, 2)));
    }

    #[test]
    fn rejects_bad_messages_and_params() {
        assert!(sparse_map(32, &p5()).is_err());
        assert!(SparseCodeParams::new(8, 2, 23, 15).is_err());
        assert!(SparseCodeParams::new(8, 2, 24, 25).is_err());
        assert!(SparseCodeParams::new(8, 0, 24, 15).is_err());
        assert!(SupportSet::new(vec![3, 3]).is_err());
        let wrong_k = SupportSet::new(vec![1]).unwrap();
        assert!(sparse_demap(&wrong_k, &p5()).is_err());
    }

    #[test]
    fn rank_is_a_bijection_on_all_subsets() {
        for (n, k) in [(9, 2), (7, 3), (6, 1), (5, 5)] {
            let total = binomial(n, k);
            let mut seen = std::collections::HashSet::new();
            for r in 0..total {
                let s = support_unrank(r, n, k).unwrap();
                assert_eq!(support_rank(&s, n).unwrap(), r);
                assert!(seen.insert(s));
            }
            assert!(support_unrank(total, n, k).is_err());
        }
    }
}
