//! Brute-force LP oracle: enumerate every basic feasible solution.
//!
//! Shares no code with the tableau. Dependent rows are removed first so
//! that bases of the reduced row rank exist; unboundedness is detected by
//! enumerating the extreme rays `{d >= 0, A d = 0, 1.d = 1}` the same way.

use super::{LinearProgram, LpSolution, LpStatus};
use crate::error::{Error, Result};

pub const MAX_ORACLE_COLUMNS: usize = 24;
pub const MAX_ORACLE_BASES: u128 = 5_000_000;

const SINGULAR: f64 = 1e-10;
const FEASIBLE: f64 = 1e-9;

fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

/// Indices of a maximal independent subset of rows of `[A | b]`, or `None`
/// when some dependent row contradicts the others.
fn independent_rows(a: &[Vec<f64>], b: &[f64]) -> Option<Vec<usize>> {
    let n = a.first().map_or(0, |r| r.len());
    // Reduced rows in echelon form, each with its pivot column.
    let mut echelon: Vec<(usize, Vec<f64>)> = Vec::new();
    let mut kept = Vec::new();
    for (i, row) in a.iter().enumerate() {
        let mut r: Vec<f64> = row.iter().copied().chain(std::iter::once(b[i])).collect();
        let scale = r.iter().fold(1.0f64, |m, v| m.max(v.abs()));
        for (p, e) in &echelon {
            let f = r[*p];
            if f != 0.0 {
                for (x, y) in r.iter_mut().zip(e) {
                    *x -= f * y;
                }
            }
        }
        let (p, mag) = (0..n).fold(
            (0, 0.0f64),
            |best, j| {
                if r[j].abs() > best.1 {
                    (j, r[j].abs())
                } else {
                    best
                }
            },
        );
        if mag <= SINGULAR * scale {
            if r[n].abs() > FEASIBLE * scale {
                return None;
            }
            continue;
        }
        let piv = r[p];
        for x in r.iter_mut() {
            *x /= piv;
        }
        for (_, e) in echelon.iter_mut() {
            let f = e[p];
            if f != 0.0 {
                for (x, y) in e.iter_mut().zip(&r) {
                    *x -= f * y;
                }
            }
        }
        echelon.push((p, r));
        kept.push(i);
    }
    Some(kept)
}

/// Solves the square system `M z = rhs` by Gaussian elimination with
/// partial pivoting; `None` if singular.
fn solve_square(mut m: Vec<Vec<f64>>, mut rhs: Vec<f64>) -> Option<Vec<f64>> {
    let k = rhs.len();
    for col in 0..k {
        let (p, mag) = (col..k).fold((col, 0.0f64), |best, r| {
            if m[r][col].abs() > best.1 {
                (r, m[r][col].abs())
            } else {
                best
            }
        });
        if mag < SINGULAR {
            return None;
        }
        m.swap(col, p);
        rhs.swap(col, p);
        for r in col + 1..k {
            let f = m[r][col] / m[col][col];
            if f != 0.0 {
                for c in col..k {
                    m[r][c] -= f * m[col][c];
                }
                rhs[r] -= f * rhs[col];
            }
        }
    }
    let mut z = vec![0.0; k];
    for r in (0..k).rev() {
        let s: f64 = (r + 1..k).map(|c| m[r][c] * z[c]).sum();
        z[r] = (rhs[r] - s) / m[r][r];
    }
    Some(z)
}

struct Vertex {
    x: Vec<f64>,
    objective: f64,
    duals: Vec<f64>,
}

fn next_combination(idx: &mut [usize], n: usize) -> bool {
    let k = idx.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if idx[i] < n - k + i {
            idx[i] += 1;
            for j in i + 1..k {
                idx[j] = idx[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Best basic feasible solution of `A x = b, x >= 0`, or `Err(())` when the
/// system is infeasible.
fn best_vertex(a: &[Vec<f64>], b: &[f64], c: &[f64]) -> std::result::Result<Vertex, ()> {
    let n = c.len();
    let m = a.len();
    let rows = independent_rows(a, b).ok_or(())?;
    let r = rows.len();
    if r == 0 {
        return Ok(Vertex {
            x: vec![0.0; n],
            objective: 0.0,
            duals: vec![0.0; m],
        });
    }
    if r > n {
        return Err(());
    }
    let mut best: Option<Vertex> = None;
    let mut cols: Vec<usize> = (0..r).collect();
    loop {
        let basis: Vec<Vec<f64>> = rows.iter().map(|&i| cols.iter().map(|&j| a[i][j]).collect()).collect();
        let rhs: Vec<f64> = rows.iter().map(|&i| b[i]).collect();
        if let Some(z) = solve_square(basis.clone(), rhs) {
            if z.iter().all(|&v| v >= -FEASIBLE) {
                let objective: f64 = cols.iter().zip(&z).map(|(&j, v)| c[j] * v).sum();
                if best.as_ref().map_or(true, |bv| objective < bv.objective - 1e-12) {
                    let transposed: Vec<Vec<f64>> = (0..r).map(|q| (0..r).map(|p| basis[p][q]).collect()).collect();
                    let cb: Vec<f64> = cols.iter().map(|&j| c[j]).collect();
                    let y = solve_square(transposed, cb).unwrap_or_else(|| vec![0.0; r]);
                    let mut duals = vec![0.0; m];
                    for (&i, yi) in rows.iter().zip(y) {
                        duals[i] = yi;
                    }
                    let mut x = vec![0.0; n];
                    for (&j, v) in cols.iter().zip(&z) {
                        x[j] = v.max(0.0);
                    }
                    best = Some(Vertex { x, objective, duals });
                }
            }
        }
        if !next_combination(&mut cols, n) {
            break;
        }
    }
    best.ok_or(())
}

/// Ground truth for [`super::solve_lp`] on small programs.
///
/// Refuses programs with more than [`MAX_ORACLE_COLUMNS`] columns or more
/// than [`MAX_ORACLE_BASES`] candidate bases.
pub fn verify_by_vertex_enumeration(lp: &LinearProgram) -> Result<LpSolution> {
    let n = lp.num_cols();
    let m = lp.num_rows();
    let bases = binomial(n, m).max(binomial(n, (m + 1).min(n)));
    if n > MAX_ORACLE_COLUMNS || bases > MAX_ORACLE_BASES {
        return Err(Error::ProblemTooLarge { columns: n, bases });
    }
    let vertex = match best_vertex(lp.constraints(), lp.rhs(), lp.objective()) {
        Ok(v) => v,
        Err(()) => {
            return Ok(LpSolution {
                status: LpStatus::Infeasible,
                primal: Vec::new(),
                objective_value: f64::INFINITY,
                duals: Vec::new(),
                pivots: 0,
            })
        }
    };

    let mut ray_rows: Vec<Vec<f64>> = lp.constraints().to_vec();
    ray_rows.push(vec![1.0; n]);
    let mut ray_rhs = vec![0.0; m];
    ray_rhs.push(1.0);
    if let Ok(ray) = best_vertex(&ray_rows, &ray_rhs, lp.objective()) {
        if ray.objective < -FEASIBLE {
            return Ok(LpSolution {
                status: LpStatus::Unbounded,
                primal: Vec::new(),
                objective_value: f64::NEG_INFINITY,
                duals: Vec::new(),
                pivots: 0,
            });
        }
    }

    Ok(LpSolution {
        status: LpStatus::Optimal,
        primal: vertex.x,
        objective_value: vertex.objective,
        duals: vertex.duals,
        pivots: 0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn too_large() {
        let lp = LinearProgram::new(vec![1.0; 30], vec![vec![1.0; 30]], vec![1.0]).unwrap();
        assert!(matches!(
            verify_by_vertex_enumeration(&lp),
            Err(Error::ProblemTooLarge { columns: 30, .. })
        ));
    }

    #[test]
    fn small_cases() {
        let lp = LinearProgram::new(vec![1.0, 1.0], vec![vec![1.0, 1.0]], vec![1.0]).unwrap();
        let s = verify_by_vertex_enumeration(&lp).unwrap();
        assert!((s.objective_value - 1.0).abs() < 1e-12);

        let lp = LinearProgram::new(vec![1.0], vec![vec![1.0]], vec![-1.0]).unwrap();
        assert_eq!(verify_by_vertex_enumeration(&lp).unwrap().status, LpStatus::Infeasible);

        let lp = LinearProgram::new(vec![-1.0, 0.0], vec![vec![1.0, -1.0]], vec![0.0]).unwrap();
        assert_eq!(verify_by_vertex_enumeration(&lp).unwrap().status, LpStatus::Unbounded);
    }

    #[test]
    fn dependent_rows() {
        let lp = LinearProgram::new(
            vec![2.0, 3.0, 1.0],
            vec![vec![1.0, 1.0, 1.0], vec![2.0, 2.0, 2.0]],
            vec![1.0, 2.0],
        )
        .unwrap();
        let s = verify_by_vertex_enumeration(&lp).unwrap();
        assert!((s.objective_value - 1.0).abs() < 1e-12);
        let lp = LinearProgram::new(
            vec![2.0, 3.0, 1.0],
            vec![vec![1.0, 1.0, 1.0], vec![2.0, 2.0, 2.0]],
            vec![1.0, 3.0],
        )
        .unwrap();
        assert_eq!(verify_by_vertex_enumeration(&lp).unwrap().status, LpStatus::Infeasible);
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(6, 3), 20);
        assert_eq!(binomial(24, 12), 2_704_156);
        assert_eq!(binomial(3, 5), 0);
    }
}
