//! Exact search for a sign column with bounded inner products.
//!
//! Given existing columns `C[:, j]` of length `L` and a bound `m`, find
//! `c ∈ {+1, -1}^L` with `|⟨c, C[:, j]⟩| ≤ m` for every `j`, or prove that no
//! such `c` exists. The search assigns chips in index order with `c[0] = +1`
//! fixed (the constraints are symmetric under `c → -c`), tries `+1` before
//! `-1`, and cuts a branch as soon as some partial sum can no longer be pulled
//! back into `[-m, m]` by the chips still unassigned. The first leaf reached is
//! therefore the lexicographically first feasible column.

use std::collections::HashSet;

use crate::error::{Error, Result};

/// Existing columns plus the inner-product bound.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FeasibilityProblem {
    dim: usize,
    columns: Vec<Vec<i8>>,
    bound: u64,
}

impl FeasibilityProblem {
    pub fn new(dim: usize, columns: Vec<Vec<i8>>, bound: u64) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidArgument("dimension must be positive".into()));
        }
        for (j, c) in columns.iter().enumerate() {
            if c.len() != dim {
                return Err(Error::InvalidArgument(format!(
                    "column {j} has length {}, expected {dim}",
                    c.len()
                )));
            }
            if c.iter().any(|&s| s != 1 && s != -1) {
                return Err(Error::InvalidArgument(format!("column {j} is not bipolar")));
            }
        }
        Ok(Self {
            dim,
            columns,
            bound,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn columns(&self) -> &[Vec<i8>] {
        &self.columns
    }

    pub fn bound(&self) -> u64 {
        self.bound
    }

    /// True when `c` meets every constraint, checked directly.
    pub fn is_satisfied_by(&self, c: &[i8]) -> bool {
        c.len() == self.dim
            && self.columns.iter().all(|col| {
                let ip: i64 = col.iter().zip(c).map(|(&a, &b)| i64::from(a * b)).sum();
                ip.unsigned_abs() <= self.bound
            })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchOptions {
    /// Cut branches whose partial sums can no longer meet the bound.
    pub prune: bool,
    /// Remember `(depth, partial sums)` states whose subtree holds no
    /// solution. Prefixes reaching the same state have identical subtrees, so
    /// skipping a remembered state never changes the result.
    pub memoize: bool,
    /// Also bound `s_j ± s_k` for every column pair by twice the number of
    /// unassigned chips where the two columns agree (disagree).
    pub pair_bounds: bool,
}

impl Default for SearchOptions {
    fn default() -> Self {
        Self {
            prune: true,
            memoize: true,
            pair_bounds: true,
        }
    }
}

/// Upper bound on remembered dead states, to cap memory.
const MEMO_CAPACITY: usize = 1 << 20;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outcome {
    Feasible {
        column: Vec<i8>,
        /// `m ≥ L`: every column is feasible and the all-ones column was returned without search.
        degenerate: bool,
    },
    Infeasible,
}

impl Outcome {
    pub fn column(&self) -> Option<&[i8]> {
        match self {
            Outcome::Feasible { column, .. } => Some(column),
            Outcome::Infeasible => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolveReport {
    pub outcome: Outcome,
    /// Search nodes visited; the root (`c[0] = +1`) counts as one.
    pub nodes: u64,
}

/// Finds the lexicographically first feasible column (`+1 < -1`), if any.
pub fn find_feasible_column(p: &FeasibilityProblem) -> Option<Vec<i8>> {
    match solve(p, SearchOptions::default()).outcome {
        Outcome::Feasible { column, .. } => Some(column),
        Outcome::Infeasible => None,
    }
}

/// Runs the search and reports the number of nodes visited.
pub fn count_solver_nodes(p: &FeasibilityProblem) -> u64 {
    solve(p, SearchOptions::default()).nodes
}

pub fn solve(p: &FeasibilityProblem, opts: SearchOptions) -> SolveReport {
    let dim = p.dim;
    if p.columns.is_empty() || p.bound >= dim as u64 {
        return SolveReport {
            outcome: Outcome::Feasible {
                column: vec![1; dim],
                degenerate: !p.columns.is_empty(),
            },
            nodes: 1,
        };
    }
    let ncols = p.columns.len();
    // chip-major copy: signs[l * ncols + j] = C[l, j]
    let mut signs = vec![0i32; dim * ncols];
    for (j, col) in p.columns.iter().enumerate() {
        for (l, &s) in col.iter().enumerate() {
            signs[l * ncols + j] = i32::from(s);
        }
    }
    let mut search = Search {
        dim,
        ncols,
        bound: p.bound as i32,
        prune: opts.prune,
        signs,
        sums: signs_row(&p.columns, 0),
        assignment: vec![1i8; dim],
        nodes: 1,
        // partial sums fit in i8 only for short columns
        dead: (opts.memoize && dim <= 127).then(|| vec![HashSet::new(); dim]),
        dead_len: 0,
        pairs: if opts.prune && opts.pair_bounds {
            PairTable::new(&p.columns, dim)
        } else {
            PairTable::default()
        },
    };
    let found = if search.viable(0) {
        search.descend(1)
    } else {
        false
    };
    SolveReport {
        outcome: if found {
            Outcome::Feasible {
                column: search.assignment,
                degenerate: false,
            }
        } else {
            Outcome::Infeasible
        },
        nodes: search.nodes,
    }
}

fn signs_row(columns: &[Vec<i8>], l: usize) -> Vec<i32> {
    columns.iter().map(|c| i32::from(c[l])).collect()
}

struct Search {
    dim: usize,
    ncols: usize,
    bound: i32,
    prune: bool,
    signs: Vec<i32>,
    /// Partial inner products over chips `0..=depth`.
    sums: Vec<i32>,
    assignment: Vec<i8>,
    nodes: u64,
    /// Per depth, partial-sum vectors known to lead nowhere.
    dead: Option<Vec<HashSet<Box<[i8]>>>>,
    dead_len: usize,
    pairs: PairTable,
}

/// Column pairs with, per depth, how many chips at or past that depth agree.
#[derive(Default)]
struct PairTable {
    pairs: Vec<(usize, usize)>,
    /// `agree[d * pairs.len() + q]`: chips `l ≥ d` with `C[l, j] == C[l, k]` for pair `q`.
    agree: Vec<i32>,
}

impl PairTable {
    fn new(columns: &[Vec<i8>], dim: usize) -> Self {
        let n = columns.len();
        let pairs: Vec<(usize, usize)> = (0..n)
            .flat_map(|j| (j + 1..n).map(move |k| (j, k)))
            .collect();
        let mut agree = vec![0i32; (dim + 1) * pairs.len()];
        for d in (0..dim).rev() {
            for (q, &(j, k)) in pairs.iter().enumerate() {
                agree[d * pairs.len() + q] =
                    agree[(d + 1) * pairs.len() + q] + i32::from(columns[j][d] == columns[k][d]);
            }
        }
        Self { pairs, agree }
    }
}

impl Search {
    /// Whether the node with chips `0..=depth` assigned can still reach a feasible leaf.
    fn viable(&self, depth: usize) -> bool {
        let remaining = (self.dim - depth - 1) as i32;
        if remaining > 0 && !self.prune {
            return true;
        }
        if !self.sums.iter().all(|s| s.abs() - remaining <= self.bound) {
            return false;
        }
        if remaining == 0 || self.pairs.pairs.is_empty() {
            return true;
        }
        let np = self.pairs.pairs.len();
        let agree = &self.pairs.agree[(depth + 1) * np..(depth + 2) * np];
        let twice = 2 * self.bound;
        self.pairs.pairs.iter().zip(agree).all(|(&(j, k), &same)| {
            let (a, b) = (self.sums[j], self.sums[k]);
            (a + b).abs() - 2 * same <= twice && (a - b).abs() - 2 * (remaining - same) <= twice
        })
    }

    fn descend(&mut self, depth: usize) -> bool {
        if depth == self.dim {
            return true;
        }
        if let Some(dead) = &self.dead {
            let key: Box<[i8]> = self.sums.iter().map(|&s| s as i8).collect();
            if dead[depth].contains(&key) {
                return false;
            }
        }
        let row = depth * self.ncols;
        for sign in [1i32, -1] {
            self.nodes += 1;
            for (s, &c) in self.sums.iter_mut().zip(&self.signs[row..row + self.ncols]) {
                *s += sign * c;
            }
            self.assignment[depth] = sign as i8;
            if self.viable(depth) && self.descend(depth + 1) {
                return true;
            }
            for (s, &c) in self.sums.iter_mut().zip(&self.signs[row..row + self.ncols]) {
                *s -= sign * c;
            }
        }
        self.assignment[depth] = 1;
        if self.dead_len < MEMO_CAPACITY {
            if let Some(dead) = &mut self.dead {
                dead[depth].insert(self.sums.iter().map(|&s| s as i8).collect());
                self.dead_len += 1;
            }
        }
        false
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn problem(dim: usize, cols: &[&[i8]], m: u64) -> FeasibilityProblem {
        FeasibilityProblem::new(dim, cols.iter().map(|c| c.to_vec()).collect(), m).unwrap()
    }

    #[test]
    fn single_column_zero_bound() {
        let p = problem(2, &[&[1, 1]], 0);
        assert_eq!(find_feasible_column(&p), Some(vec![1, -1]));
        assert!(count_solver_nodes(&p) <= 3);
    }

    #[test]
    fn two_dimensional_basis_is_full() {
        let p = problem(2, &[&[1, 1], &[1, -1]], 1);
        assert_eq!(find_feasible_column(&p), None);
    }

    #[test]
    fn empty_constraints() {
        for m in [0, 1, 7] {
            let p = problem(5, &[], m);
            assert_eq!(find_feasible_column(&p), Some(vec![1; 5]));
            assert_eq!(count_solver_nodes(&p), 1);
        }
    }

    #[test]
    fn degenerate_bound_is_flagged() {
        let p = problem(3, &[&[1, -1, 1]], 3);
        let r = solve(&p, SearchOptions::default());
        assert_eq!(
            r.outcome,
            Outcome::Feasible {
                column: vec![1, 1, 1],
                degenerate: true
            }
        );
    }

    #[test]
    fn odd_dimension_cannot_be_orthogonal() {
        let p = problem(3, &[&[1, 1, 1]], 0);
        assert_eq!(find_feasible_column(&p), None);
        let p = problem(3, &[&[1, 1, 1]], 1);
        assert_eq!(find_feasible_column(&p), Some(vec![1, 1, -1]));
    }

    #[test]
    fn rejects_ragged_columns() {
        assert!(FeasibilityProblem::new(3, vec![vec![1, 1]], 0).is_err());
        assert!(FeasibilityProblem::new(2, vec![vec![1, 0]], 0).is_err());
        assert!(FeasibilityProblem::new(0, vec![], 0).is_err());
    }
}
