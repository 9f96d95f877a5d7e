//! Derivative-free compass search.
//!
//! Polls `x ± step·e_i` for every free coordinate, then (optionally) the
//! pairwise diagonals `x ± step·e_i ± step·e_j`, moving to the first strict
//! improvement. A full poll without improvement halves the step.

use serde::Serialize;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PatternSearchOptions {
    pub initial_step: f64,
    pub min_step: f64,
    pub max_evaluations: usize,
    /// Also poll the pairwise diagonals. Without them the search stalls in
    /// valleys that are not aligned with the coordinate axes.
    pub diagonals: bool,
}

impl Default for PatternSearchOptions {
    fn default() -> Self {
        Self {
            initial_step: 1e-2,
            min_step: 1e-6,
            max_evaluations: 100_000,
            diagonals: true,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PatternSearchResult {
    pub x: Vec<f64>,
    pub value: f64,
    /// Objective evaluations, the start point included.
    pub evaluations: usize,
    pub final_step: f64,
    /// `true` when the step fell below `min_step` before the budget ran out.
    pub converged: bool,
}

fn directions(free: &[usize], diagonals: bool) -> Vec<Vec<(usize, f64)>> {
    let mut dirs = Vec::new();
    for &i in free {
        dirs.push(vec![(i, 1.0)]);
        dirs.push(vec![(i, -1.0)]);
    }
    if diagonals {
        for (p, &i) in free.iter().enumerate() {
            for &j in &free[p + 1..] {
                for (si, sj) in [(1.0, 1.0), (1.0, -1.0), (-1.0, 1.0), (-1.0, -1.0)] {
                    dirs.push(vec![(i, si), (j, sj)]);
                }
            }
        }
    }
    dirs
}

/// Minimizes `f` over the coordinates listed in `free`, leaving the others
/// at their starting values. Never returns a point worse than `start`.
pub fn compass_search<F>(start: &[f64], free: &[usize], mut f: F, opts: &PatternSearchOptions) -> PatternSearchResult
where
    F: FnMut(&[f64]) -> f64,
{
    let mut x = start.to_vec();
    let mut value = f(&x);
    let mut evaluations = 1;
    let mut step = opts.initial_step;
    let dirs = directions(free, opts.diagonals);

    let mut trial = x.clone();
    'outer: while step >= opts.min_step {
        for d in &dirs {
            if evaluations >= opts.max_evaluations {
                break 'outer;
            }
            trial.copy_from_slice(&x);
            for &(i, s) in d {
                trial[i] += s * step;
            }
            let fv = f(&trial);
            evaluations += 1;
            if fv < value {
                value = fv;
                x.copy_from_slice(&trial);
                continue 'outer;
            }
        }
        step *= 0.5;
    }
    PatternSearchResult {
        converged: step < opts.min_step,
        x,
        value,
        evaluations,
        final_step: step,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadratic() {
        let r = compass_search(
            &[1.0, -2.0],
            &[0, 1],
            |x| (x[0] - 0.3).powi(2) + 2.0 * (x[1] + 0.1).powi(2),
            &PatternSearchOptions::default(),
        );
        assert!(r.converged);
        assert!((r.x[0] - 0.3).abs() < 1e-5 && (r.x[1] + 0.1).abs() < 1e-5);
    }

    #[test]
    fn strict_minimum_returns_start() {
        let r = compass_search(
            &[0.0, 0.0],
            &[0, 1],
            |x| x[0].abs() + x[1].abs(),
            &PatternSearchOptions::default(),
        );
        assert_eq!(r.x, vec![0.0, 0.0]);
        assert_eq!(r.value, 0.0);
        assert!(r.converged);
    }

    #[test]
    fn frozen_coordinates_stay() {
        let r = compass_search(
            &[5.0, 5.0],
            &[1],
            |x| x[0].powi(2) + x[1].powi(2),
            &PatternSearchOptions::default(),
        );
        assert_eq!(r.x[0], 5.0);
        assert!(r.x[1].abs() < 1e-5);
    }

    #[test]
    fn diagonal_valley() {
        // Improving only along (1,1): each axis move alone is uphill.
        let f = |x: &[f64]| (x[0] - x[1]).abs() * 10.0 - 0.1 * (x[0] + x[1]);
        let opts = PatternSearchOptions {
            max_evaluations: 1000,
            ..Default::default()
        };
        let axis = compass_search(
            &[0.0, 0.0],
            &[0, 1],
            f,
            &PatternSearchOptions {
                diagonals: false,
                ..opts.clone()
            },
        );
        assert_eq!(axis.value, 0.0);
        let diag = compass_search(&[0.0, 0.0], &[0, 1], f, &opts);
        assert!(diag.value < -0.1);
    }

    #[test]
    fn budget_respected() {
        let opts = PatternSearchOptions {
            max_evaluations: 7,
            ..Default::default()
        };
        let r = compass_search(&[0.0], &[0], |x| -x[0], &opts);
        assert_eq!(r.evaluations, 7);
        assert!(!r.converged);
    }
}
