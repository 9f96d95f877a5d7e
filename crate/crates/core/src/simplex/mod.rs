//! Dense linear programs in standard equality form,
//! `minimize c.x subject to A x = b, x >= 0`.
//!
//! [`solve_lp`] is a two-phase tableau simplex with Bland's rule always on;
//! the site models are heavily degenerate and cycling is a real risk there.
//! Dual multipliers come from the final basis inverse, so complementary
//! slackness with the reported primal holds by construction.
//! [`solve_lp_exact`] repeats the same pivoting in rational arithmetic and
//! [`verify_by_vertex_enumeration`] is an independent brute-force oracle.

mod oracle;
mod tableau;

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use tableau::{two_phase, Outcome, Scalar, Tolerances};

pub use oracle::{verify_by_vertex_enumeration, MAX_ORACLE_BASES, MAX_ORACLE_COLUMNS};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LinearProgram {
    objective: Vec<f64>,
    constraints: Vec<Vec<f64>>,
    rhs: Vec<f64>,
}

impl LinearProgram {
    pub fn new(objective: Vec<f64>, constraints: Vec<Vec<f64>>, rhs: Vec<f64>) -> Result<Self> {
        let n = objective.len();
        let m = constraints.len();
        if n == 0 {
            return Err(Error::MalformedProgram("no columns".into()));
        }
        if rhs.len() != m {
            return Err(Error::MalformedProgram(format!(
                "{} constraint rows but {} right-hand sides",
                m,
                rhs.len()
            )));
        }
        if m > n {
            return Err(Error::MalformedProgram(format!("{m} rows exceed {n} columns")));
        }
        if let Some(i) = constraints.iter().position(|row| row.len() != n) {
            return Err(Error::MalformedProgram(format!(
                "row {} has {} entries, expected {}",
                i,
                constraints[i].len(),
                n
            )));
        }
        let finite = objective.iter().chain(constraints.iter().flatten()).chain(&rhs);
        if finite.into_iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("linear program"));
        }
        Ok(Self {
            objective,
            constraints,
            rhs,
        })
    }

    pub fn num_rows(&self) -> usize {
        self.constraints.len()
    }

    pub fn num_cols(&self) -> usize {
        self.objective.len()
    }

    pub fn objective(&self) -> &[f64] {
        &self.objective
    }

    pub fn constraints(&self) -> &[Vec<f64>] {
        &self.constraints
    }

    pub fn rhs(&self) -> &[f64] {
        &self.rhs
    }

    /// Same program with columns reordered: new column `j` is old `perm[j]`.
    pub fn permute_columns(&self, perm: &[usize]) -> Result<Self> {
        if perm.len() != self.num_cols() {
            return Err(Error::MalformedProgram("permutation length".into()));
        }
        let objective = perm.iter().map(|&p| self.objective[p]).collect();
        let constraints = self
            .constraints
            .iter()
            .map(|row| perm.iter().map(|&p| row[p]).collect())
            .collect();
        Self::new(objective, constraints, self.rhs.clone())
    }

    /// `max_i |(A x - b)_i|`.
    pub fn residual(&self, x: &[f64]) -> f64 {
        self.constraints
            .iter()
            .zip(&self.rhs)
            .map(|(row, b)| (row.iter().zip(x).map(|(a, x)| a * x).sum::<f64>() - b).abs())
            .fold(0.0, f64::max)
    }

    /// `c_j - y.A_j` for every column.
    pub fn reduced_costs(&self, duals: &[f64]) -> Vec<f64> {
        (0..self.num_cols())
            .map(|j| {
                self.objective[j]
                    - self
                        .constraints
                        .iter()
                        .zip(duals)
                        .map(|(row, y)| row[j] * y)
                        .sum::<f64>()
            })
            .collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

/// Result of a solve. For `Infeasible` the objective is `+inf`, for
/// `Unbounded` it is `-inf`; `primal` and `duals` are empty in both cases.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LpSolution {
    pub status: LpStatus,
    pub primal: Vec<f64>,
    pub objective_value: f64,
    pub duals: Vec<f64>,
    pub pivots: usize,
}

impl LpSolution {
    fn infeasible() -> Self {
        Self {
            status: LpStatus::Infeasible,
            primal: Vec::new(),
            objective_value: f64::INFINITY,
            duals: Vec::new(),
            pivots: 0,
        }
    }

    fn unbounded() -> Self {
        Self {
            status: LpStatus::Unbounded,
            primal: Vec::new(),
            objective_value: f64::NEG_INFINITY,
            duals: Vec::new(),
            pivots: 0,
        }
    }

    pub fn is_optimal(&self) -> bool {
        self.status == LpStatus::Optimal
    }

    /// `y.b`, equal to the objective at optimality.
    pub fn dual_objective(&self, lp: &LinearProgram) -> f64 {
        self.duals.iter().zip(lp.rhs()).map(|(y, b)| y * b).sum()
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SimplexOptions {
    /// Entries at or below this magnitude are never pivoted on.
    pub pivot_tolerance: f64,
    /// A column enters only if its reduced cost is below `-optimality_tolerance`.
    pub optimality_tolerance: f64,
    pub max_pivots: usize,
}

impl Default for SimplexOptions {
    fn default() -> Self {
        Self {
            pivot_tolerance: 1e-10,
            optimality_tolerance: 1e-10,
            max_pivots: 1_000_000,
        }
    }
}

/// A pivot this small is refused outright.
pub const BREAKDOWN_PIVOT: f64 = 1e-12;

pub fn solve_lp(lp: &LinearProgram) -> Result<LpSolution> {
    solve_lp_with(lp, &SimplexOptions::default())
}

pub fn solve_lp_with(lp: &LinearProgram, options: &SimplexOptions) -> Result<LpSolution> {
    let scale = lp.rhs.iter().fold(1.0f64, |acc, b| acc.max(b.abs()));
    let tol = Tolerances {
        pivot: options.pivot_tolerance,
        optimality: options.optimality_tolerance,
        feasibility: 1e-9 * scale,
        tie: 1e-12,
        breakdown: BREAKDOWN_PIVOT,
        max_pivots: options.max_pivots,
    };
    let raw = two_phase(&lp.constraints, &lp.rhs, &lp.objective, &tol)?;
    Ok(match raw.outcome {
        Outcome::Infeasible => LpSolution {
            pivots: raw.pivots,
            ..LpSolution::infeasible()
        },
        Outcome::Unbounded => LpSolution {
            pivots: raw.pivots,
            ..LpSolution::unbounded()
        },
        Outcome::Optimal => {
            let primal: Vec<f64> = raw
                .primal
                .iter()
                .map(|&x| if x < 0.0 && x > -1e-9 { 0.0 } else { x })
                .collect();
            let objective_value = primal.iter().zip(&lp.objective).map(|(x, c)| x * c).sum();
            LpSolution {
                status: LpStatus::Optimal,
                primal,
                objective_value,
                duals: raw.duals,
                pivots: raw.pivots,
            }
        }
    })
}

/// Exact rational solution of the program whose `f64` entries are read as
/// exact binary fractions.
#[derive(Clone, Debug, PartialEq)]
pub struct ExactLpSolution {
    pub status: LpStatus,
    pub primal: Vec<BigRational>,
    pub objective_value: Option<BigRational>,
    pub duals: Vec<BigRational>,
}

impl ExactLpSolution {
    pub fn to_f64(&self) -> LpSolution {
        match self.status {
            LpStatus::Infeasible => LpSolution::infeasible(),
            LpStatus::Unbounded => LpSolution::unbounded(),
            LpStatus::Optimal => LpSolution {
                status: LpStatus::Optimal,
                primal: self.primal.iter().map(Scalar::to_f64).collect(),
                objective_value: self.objective_value.as_ref().map_or(f64::NAN, Scalar::to_f64),
                duals: self.duals.iter().map(Scalar::to_f64).collect(),
                pivots: 0,
            },
        }
    }
}

/// Same pivoting rules as [`solve_lp`] in exact arithmetic; slow, meant for
/// settling ties and near-degenerate comparisons.
pub fn solve_lp_exact(lp: &LinearProgram) -> Result<ExactLpSolution> {
    let conv = |v: &[f64]| v.iter().map(|&x| BigRational::from_f64(x)).collect::<Vec<_>>();
    let a: Vec<Vec<BigRational>> = lp.constraints.iter().map(|r| conv(r)).collect();
    let b = conv(&lp.rhs);
    let c = conv(&lp.objective);
    let zero = || BigRational::from_f64(0.0);
    let tol = Tolerances {
        pivot: zero(),
        optimality: zero(),
        feasibility: zero(),
        tie: zero(),
        breakdown: zero(),
        max_pivots: SimplexOptions::default().max_pivots,
    };
    let raw = two_phase(&a, &b, &c, &tol)?;
    let status = match raw.outcome {
        Outcome::Optimal => LpStatus::Optimal,
        Outcome::Infeasible => LpStatus::Infeasible,
        Outcome::Unbounded => LpStatus::Unbounded,
    };
    let objective_value =
        (status == LpStatus::Optimal).then(|| raw.primal.iter().zip(&c).fold(zero(), |acc, (x, c)| acc + x * c));
    Ok(ExactLpSolution {
        status,
        primal: raw.primal,
        objective_value,
        duals: raw.duals,
    })
}
