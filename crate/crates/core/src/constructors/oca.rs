//! Optimized column augmentation.
//!
//! Columns are added one at a time. The first is all ones; each further column
//! is the first solution of the bounded-inner-product feasibility problem
//! against every column so far. When no column meets the current bound `m`,
//! the bound is raised and the search repeated. `m` never decreases, so the
//! final `m` is the coherence of the result.

use crate::bitmatrix::BipolarMatrix;
use crate::error::{Error, Result};
use crate::solver::{solve, FeasibilityProblem, Outcome, SearchOptions};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct OcaOptions {
    /// Only try bounds `m ≡ rows (mod 2)`. Every inner product has the parity
    /// of `rows`, so the skipped bounds admit exactly the same columns.
    pub parity_skip: bool,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct OcaTrace {
    /// Bound in force when column `i` (zero-based, `i ≥ 1`) was appended.
    pub bound_per_column: Vec<u64>,
    /// Every bound the solver was called with, in order.
    pub tried_bounds: Vec<u64>,
    pub solver_calls: u64,
    pub infeasible_calls: u64,
    pub nodes: u64,
}

impl OcaTrace {
    pub fn final_bound(&self) -> u64 {
        self.bound_per_column.last().copied().unwrap_or(0)
    }
}

fn parity_consistent(m: u64, rows: usize) -> bool {
    m >= rows as u64 || m % 2 == rows as u64 % 2
}

pub fn oca(rows: usize, cols: usize, opts: OcaOptions) -> Result<(BipolarMatrix, OcaTrace)> {
    if rows == 0 || cols == 0 {
        return Err(Error::InvalidArgument("empty matrix".into()));
    }
    let mut columns: Vec<Vec<i8>> = vec![vec![1; rows]];
    let mut trace = OcaTrace::default();
    let mut m = 0u64;
    let step = |m: u64| {
        let mut next = m + 1;
        if opts.parity_skip {
            while !parity_consistent(next, rows) {
                next += 1;
            }
        }
        next
    };
    if opts.parity_skip && !parity_consistent(m, rows) {
        m = step(m);
    }
    while columns.len() < cols {
        let problem = FeasibilityProblem::new(rows, columns.clone(), m)?;
        let report = solve(&problem, SearchOptions::default());
        trace.solver_calls += 1;
        trace.nodes += report.nodes;
        trace.tried_bounds.push(m);
        match report.outcome {
            Outcome::Feasible { column, .. } => {
                columns.push(column);
                trace.bound_per_column.push(m);
            }
            Outcome::Infeasible => {
                trace.infeasible_calls += 1;
                m = step(m);
            }
        }
    }
    Ok((BipolarMatrix::from_columns(rows, &columns)?, trace))
}
