//! Two-phase dense tableau simplex with Bland's rule, generic over the
//! arithmetic so the same pivoting runs in `f64` or exact rationals.

use std::fmt::Debug;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Num, Signed, ToPrimitive};

use crate::error::{Error, Result};

pub(crate) trait Scalar: Clone + Debug + PartialOrd + Num + Signed {
    fn from_f64(x: f64) -> Self;
    fn to_f64(&self) -> f64;
}

impl Scalar for f64 {
    fn from_f64(x: f64) -> Self {
        x
    }

    fn to_f64(&self) -> f64 {
        *self
    }
}

impl Scalar for BigRational {
    fn from_f64(x: f64) -> Self {
        // Inputs are validated finite, so the exact binary expansion exists.
        BigRational::from_float(x).unwrap_or_else(|| BigRational::from_integer(BigInt::from(0)))
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
}

/// Thresholds used by the pivoting rules. All zero in exact arithmetic.
#[derive(Clone, Debug)]
pub(crate) struct Tolerances<T> {
    pub pivot: T,
    pub optimality: T,
    pub feasibility: T,
    pub tie: T,
    pub breakdown: T,
    pub max_pivots: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum Outcome {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Clone, Debug)]
pub(crate) struct RawSolution<T> {
    pub outcome: Outcome,
    pub primal: Vec<T>,
    pub duals: Vec<T>,
    pub pivots: usize,
}

struct Tableau<T> {
    n: usize,
    rows: Vec<Vec<T>>,
    basis: Vec<usize>,
    pivots: usize,
}

impl<T: Scalar> Tableau<T> {
    fn rhs(&self) -> usize {
        self.n + self.rows.len()
    }

    fn pivot(&mut self, r: usize, col: usize, tol: &Tolerances<T>) -> Result<()> {
        let p = self.rows[r][col].clone();
        if p.abs() <= tol.breakdown {
            return Err(Error::NumericalBreakdown { pivot: p.to_f64() });
        }
        for v in self.rows[r].iter_mut() {
            *v = v.clone() / p.clone();
        }
        let pivot_row = self.rows[r].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r {
                continue;
            }
            let f = row[col].clone();
            if f.is_zero() {
                continue;
            }
            for (v, pv) in row.iter_mut().zip(&pivot_row) {
                if !pv.is_zero() {
                    *v = v.clone() - f.clone() * pv.clone();
                }
            }
            row[col] = T::zero();
        }
        self.basis[r] = col;
        self.pivots += 1;
        Ok(())
    }

    /// Simplex multipliers `c_B B^{-1}` read off the artificial columns,
    /// which hold `B^{-1}` throughout.
    fn multipliers(&self, cost: &[T]) -> Vec<T> {
        let m = self.rows.len();
        (0..m)
            .map(|i| {
                self.rows.iter().zip(&self.basis).fold(T::zero(), |acc, (row, &b)| {
                    acc + cost[b].clone() * row[self.n + i].clone()
                })
            })
            .collect()
    }

    fn reduced_cost(&self, cost: &[T], j: usize) -> T {
        self.rows
            .iter()
            .zip(&self.basis)
            .fold(cost[j].clone(), |acc, (row, &b)| acc - cost[b].clone() * row[j].clone())
    }

    /// Runs Bland-rule pivots; only columns below `enter_limit` may enter.
    fn optimize(&mut self, cost: &[T], enter_limit: usize, tol: &Tolerances<T>) -> Result<Outcome> {
        let rhs = self.rhs();
        let neg_opt = -tol.optimality.clone();
        loop {
            if self.pivots >= tol.max_pivots {
                return Err(Error::IterationLimit(tol.max_pivots));
            }
            let mut is_basic = vec![false; enter_limit];
            for &b in &self.basis {
                if b < enter_limit {
                    is_basic[b] = true;
                }
            }
            let entering = (0..enter_limit).find(|&j| !is_basic[j] && self.reduced_cost(cost, j) < neg_opt);
            let Some(col) = entering else {
                return Ok(Outcome::Optimal);
            };

            let mut leave: Option<(usize, T)> = None;
            for (i, row) in self.rows.iter().enumerate() {
                if row[col] <= tol.pivot {
                    continue;
                }
                let ratio = row[rhs].clone() / row[col].clone();
                let better = match &leave {
                    None => true,
                    Some((l, best)) => {
                        let slack = tol.tie.clone() * (T::one() + best.abs());
                        if ratio < best.clone() - slack.clone() {
                            true
                        } else {
                            ratio <= best.clone() + slack && self.basis[i] < self.basis[*l]
                        }
                    }
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
            match leave {
                None => return Ok(Outcome::Unbounded),
                Some((r, _)) => self.pivot(r, col, tol)?,
            }
        }
    }
}

/// Minimizes `c.x` subject to `A x = b`, `x >= 0`.
pub(crate) fn two_phase<T: Scalar>(a: &[Vec<T>], b: &[T], c: &[T], tol: &Tolerances<T>) -> Result<RawSolution<T>> {
    let m = a.len();
    let n = c.len();
    let signs: Vec<bool> = b.iter().map(|v| v.is_negative()).collect();

    let mut rows = Vec::with_capacity(m);
    for i in 0..m {
        let mut row = Vec::with_capacity(n + m + 1);
        for j in 0..n {
            row.push(if signs[i] { -a[i][j].clone() } else { a[i][j].clone() });
        }
        for k in 0..m {
            row.push(if k == i { T::one() } else { T::zero() });
        }
        row.push(b[i].abs());
        rows.push(row);
    }
    let mut t = Tableau {
        n,
        rows,
        basis: (n..n + m).collect(),
        pivots: 0,
    };

    // Phase 1: drive the artificial sum to zero.
    let mut phase1 = vec![T::zero(); n + m];
    for v in phase1.iter_mut().skip(n) {
        *v = T::one();
    }
    t.optimize(&phase1, n, tol)?;
    let rhs = t.rhs();
    let infeasibility = t
        .rows
        .iter()
        .zip(&t.basis)
        .filter(|(_, &bidx)| bidx >= n)
        .fold(T::zero(), |acc, (row, _)| acc + row[rhs].clone());
    if infeasibility > tol.feasibility {
        return Ok(RawSolution {
            outcome: Outcome::Infeasible,
            primal: Vec::new(),
            duals: Vec::new(),
            pivots: t.pivots,
        });
    }

    // Pivot remaining artificials out; rows where that is impossible are
    // linearly dependent and keep a zero-level artificial in the basis.
    for r in 0..m {
        if t.basis[r] < n {
            continue;
        }
        let mut best: Option<(usize, T)> = None;
        for j in 0..n {
            let mag = t.rows[r][j].abs();
            if mag > tol.pivot && best.as_ref().map_or(true, |(_, bm)| mag > *bm) {
                best = Some((j, mag));
            }
        }
        if let Some((j, _)) = best {
            t.pivot(r, j, tol)?;
        }
    }

    // Phase 2 on the true costs; artificials cost nothing and never re-enter.
    let mut cost = c.to_vec();
    cost.extend(std::iter::repeat(T::zero()).take(m));
    let outcome = t.optimize(&cost, n, tol)?;
    if outcome == Outcome::Unbounded {
        return Ok(RawSolution {
            outcome,
            primal: Vec::new(),
            duals: Vec::new(),
            pivots: t.pivots,
        });
    }

    let mut primal = vec![T::zero(); n];
    for (row, &bidx) in t.rows.iter().zip(&t.basis) {
        if bidx < n {
            primal[bidx] = row[rhs].clone();
        }
    }
    let duals = t
        .multipliers(&cost)
        .into_iter()
        .zip(&signs)
        .map(|(y, &flip)| if flip { -y } else { y })
        .collect();
    Ok(RawSolution {
        outcome: Outcome::Optimal,
        primal,
        duals,
        pivots: t.pivots,
    })
}
