//! Multipath matching pursuit over the effective dictionary `diag(h)·C`.
//!
//! The search tree has depth `K`. Every surviving path expands its `branching`
//! best atoms by correlation with its residual; paths reaching the same index
//! set are merged. Each path keeps an orthonormal basis of its atoms, so the
//! residual is always the least-squares residual `y - Φ_Ω Φ_Ω⁺ y`. The answer
//! is the leaf with the smallest residual energy, ties going to the
//! lexicographically smallest support.

use std::collections::HashSet;

use num_complex::Complex64;

use super::mapping::SupportSet;
use crate::bitmatrix::BipolarMatrix;
use crate::error::{Error, Result};

/// Squared norm below which a newly orthogonalized atom counts as dependent.
const RANK_TOLERANCE: f64 = 1e-12;

/// Unit-norm atoms `h ∘ C[:, i] / ‖h ∘ C[:, i]‖`.
#[derive(Debug, Clone)]
pub struct Dictionary {
    atoms: Vec<Vec<Complex64>>,
}

impl Dictionary {
    pub fn new(c: &BipolarMatrix, gains: &[Complex64]) -> Result<Self> {
        if gains.len() != c.rows() {
            return Err(Error::InvalidArgument(format!(
                "{} channel gains for {} chips",
                gains.len(),
                c.rows()
            )));
        }
        let atoms = (0..c.cols())
            .map(|j| {
                let mut atom: Vec<Complex64> = gains
                    .iter()
                    .enumerate()
                    .map(|(l, &h)| h * f64::from(c.get(l, j)))
                    .collect();
                let norm = atom.iter().map(Complex64::norm_sqr).sum::<f64>().sqrt();
                if norm > 0.0 {
                    atom.iter_mut().for_each(|a| *a /= norm);
                }
                atom
            })
            .collect();
        Ok(Self { atoms })
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn atom(&self, i: usize) -> &[Complex64] {
        &self.atoms[i]
    }
}

/// `⟨a, b⟩ = Σ conj(a) b`.
fn dot(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

fn energy(v: &[Complex64]) -> f64 {
    v.iter().map(Complex64::norm_sqr).sum()
}

#[derive(Debug, Clone)]
struct Path {
    indices: Vec<usize>,
    basis: Vec<Vec<Complex64>>,
    residual: Vec<Complex64>,
}

impl Path {
    fn root(y: &[Complex64]) -> Self {
        Self {
            indices: Vec::new(),
            basis: Vec::new(),
            residual: y.to_vec(),
        }
    }

    fn key_with(&self, i: usize) -> Vec<usize> {
        let mut k = self.indices.clone();
        k.push(i);
        k.sort_unstable();
        k
    }

    /// Indices of the `count` atoms most correlated with the residual, lowest index on ties.
    fn best_atoms(&self, dict: &Dictionary, count: usize) -> Vec<usize> {
        let mut scored: Vec<(f64, usize)> = (0..dict.len())
            .filter(|i| !self.indices.contains(i))
            .map(|i| (dot(dict.atom(i), &self.residual).norm(), i))
            .collect();
        scored.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)));
        scored.into_iter().take(count).map(|(_, i)| i).collect()
    }

    /// Adds atom `i`, or `None` if it lies in the span of the path's atoms.
    fn extend(&self, dict: &Dictionary, i: usize) -> Option<Path> {
        let mut q = dict.atom(i).to_vec();
        // two Gram-Schmidt passes
        for _ in 0..2 {
            for b in &self.basis {
                let proj = dot(b, &q);
                q.iter_mut().zip(b).for_each(|(qv, bv)| *qv -= bv * proj);
            }
        }
        let norm2 = energy(&q);
        if norm2 < RANK_TOLERANCE {
            return None;
        }
        let norm = norm2.sqrt();
        q.iter_mut().for_each(|v| *v /= norm);
        let proj = dot(&q, &self.residual);
        let residual = self
            .residual
            .iter()
            .zip(&q)
            .map(|(r, qv)| r - qv * proj)
            .collect();
        let mut basis = self.basis.clone();
        basis.push(q);
        let mut indices = self.indices.clone();
        indices.push(i);
        Some(Path {
            indices,
            basis,
            residual,
        })
    }
}

/// Result of a decode: the support plus the residual energy of the winning path.
#[derive(Debug, Clone, PartialEq)]
pub struct Detection {
    pub support: SupportSet,
    pub residual_energy: f64,
}

/// Detects a `sparsity`-atom support in `y`.
pub fn mmp_detect(
    y: &[Complex64],
    dict: &Dictionary,
    sparsity: usize,
    branching: usize,
) -> Result<Detection> {
    if branching == 0 {
        return Err(Error::InvalidArgument(
            "branching factor must be positive".into(),
        ));
    }
    if sparsity == 0 || sparsity > dict.len() {
        return Err(Error::InvalidArgument(format!(
            "sparsity {sparsity} with {} atoms",
            dict.len()
        )));
    }
    if dict.atoms.first().is_some_and(|a| a.len() != y.len()) {
        return Err(Error::InvalidArgument("observation length mismatch".into()));
    }
    let mut paths = vec![Path::root(y)];
    for _ in 0..sparsity {
        let mut seen = HashSet::new();
        let mut next = Vec::new();
        for path in &paths {
            for i in path.best_atoms(dict, branching) {
                if !seen.insert(path.key_with(i)) {
                    continue;
                }
                if let Some(child) = path.extend(dict, i) {
                    next.push(child);
                }
            }
        }
        if next.is_empty() {
            return Err(Error::DecodeFailure(
                "every path became rank deficient".into(),
            ));
        }
        paths = next;
    }
    let best = paths
        .into_iter()
        .map(|p| {
            let e = energy(&p.residual);
            let mut k = p.indices;
            k.sort_unstable();
            (e, k)
        })
        .min_by(|a, b| a.0.total_cmp(&b.0).then_with(|| a.1.cmp(&b.1)))
        .expect("at least one path");
    Ok(Detection {
        support: SupportSet::new(best.1)?,
        residual_energy: best.0,
    })
}

/// MMP support detection with perfect channel knowledge.
pub fn mmp_decode(
    y: &[Complex64],
    gains: &[Complex64],
    c: &BipolarMatrix,
    sparsity: usize,
    branching: usize,
) -> Result<SupportSet> {
    let dict = Dictionary::new(c, gains)?;
    mmp_detect(y, &dict, sparsity, branching).map(|d| d.support)
}
