//! Structured ±1 sequences used by the algebraic constructions.

use crate::bitmatrix::BipolarMatrix;
use crate::error::{Error, Result};

/// Sylvester Hadamard matrix of order `n`: `H[i][j] = (-1)^{popcount(i & j)}`.
pub fn hadamard(n: usize) -> Result<BipolarMatrix> {
    if n == 0 || !n.is_power_of_two() {
        return Err(Error::InvalidArgument(format!(
            "Hadamard order {n} is not a power of two"
        )));
    }
    BipolarMatrix::from_fn(n, n, |i, j| (i & j).count_ones() % 2 == 0)
}

/// Primitive trinomials `x^n + x^k + 1`, as `(n, k)`.
pub const PRIMITIVE_TRINOMIALS: [(u32, u32); 5] = [(3, 1), (4, 1), (5, 2), (6, 1), (7, 3)];

/// One period (`2^n - 1` bits) of the maximal-length sequence for register length `n`.
///
/// The register starts from the all-ones state and follows
/// `a[t+n] = a[t+n-k] ⊕ a[t]` for the trinomial `x^n + x^k + 1`.
pub fn m_sequence(n: u32) -> Result<Vec<u8>> {
    let &(_, k) = PRIMITIVE_TRINOMIALS
        .iter()
        .find(|&&(deg, _)| deg == n)
        .ok_or_else(|| Error::InvalidArgument(format!("no primitive polynomial for degree {n}")))?;
    let (n, k) = (n as usize, k as usize);
    let period = (1usize << n) - 1;
    let mut a = vec![1u8; n];
    a.reserve(period - n);
    for t in 0..period - n {
        let next = a[t + n - k] ^ a[t];
        a.push(next);
    }
    Ok(a)
}

/// Golay complementary pair of length `2^k`, built by `a' = a‖b`, `b' = a‖(-b)` from `a = b = [1]`.
pub fn golay_pair(k: u32) -> (Vec<i8>, Vec<i8>) {
    let (mut a, mut b) = (vec![1i8], vec![1i8]);
    for _ in 0..k {
        let next_a: Vec<i8> = a.iter().chain(&b).copied().collect();
        let next_b: Vec<i8> = a.iter().copied().chain(b.iter().map(|&x| -x)).collect();
        a = next_a;
        b = next_b;
    }
    (a, b)
}

/// Aperiodic autocorrelation at lag `tau`.
pub fn aperiodic_autocorrelation(a: &[i8], tau: usize) -> i64 {
    a.iter()
        .zip(a.iter().skip(tau))
        .map(|(&x, &y)| i64::from(x * y))
        .sum()
}

/// Periodic autocorrelation at lag `tau`.
pub fn periodic_autocorrelation(a: &[i8], tau: usize) -> i64 {
    let n = a.len();
    (0..n).map(|i| i64::from(a[i] * a[(i + tau) % n])).sum()
}

/// Maps register bits to chips, `0 → +1` and `1 → -1`.
pub fn bits_to_signs(bits: &[u8]) -> Vec<i8> {
    bits.iter().map(|&b| if b == 0 { 1 } else { -1 }).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hadamard_small_orders() {
        assert_eq!(hadamard(1).unwrap().columns(), vec![vec![1]]);
        assert_eq!(
            hadamard(2).unwrap().columns(),
            vec![vec![1, 1], vec![1, -1]]
        );
        assert!(hadamard(0).is_err());
        assert!(hadamard(12).is_err());
    }

    #[test]
    fn hadamard_follows_the_doubling_recursion() {
        let h4 = hadamard(4).unwrap();
        let h8 = hadamard(8).unwrap();
        for i in 0..8 {
            for j in 0..8 {
                let base = h4.get(i % 4, j % 4);
                let expected = if i >= 4 && j >= 4 { -base } else { base };
                assert_eq!(h8.get(i, j), expected);
            }
        }
    }

    #[test]
    fn hadamard_32_is_orthogonal() {
        let h = hadamard(32).unwrap();
        assert_eq!(h.max_abs_inner_product(), 0);
    }

    #[test]
    fn degree_three_register_by_hand() {
        assert_eq!(m_sequence(3).unwrap(), vec![1, 1, 1, 0, 1, 0, 0]);
    }

    #[test]
    fn m_sequences_have_two_valued_autocorrelation() {
        for &(n, _) in &PRIMITIVE_TRINOMIALS {
            let s = bits_to_signs(&m_sequence(n).unwrap());
            assert_eq!(s.len(), (1 << n) - 1);
            assert_eq!(periodic_autocorrelation(&s, 0), s.len() as i64);
            for tau in 1..s.len() {
                assert_eq!(periodic_autocorrelation(&s, tau), -1, "n={n} tau={tau}");
            }
        }
        assert!(m_sequence(8).is_err());
    }

    #[test]
    fn golay_pairs_are_complementary() {
        assert_eq!(golay_pair(1), (vec![1, 1], vec![1, -1]));
        for k in 0..8 {
            let (a, b) = golay_pair(k);
            assert_eq!(a.len(), 1 << k);
            for tau in 1..a.len() {
                assert_eq!(
                    aperiodic_autocorrelation(&a, tau) + aperiodic_autocorrelation(&b, tau),
                    0
                );
            }
        }
    }
}
