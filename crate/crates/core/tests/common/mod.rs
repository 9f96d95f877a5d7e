//! Random instances shared by the integration suites.
#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use siteconvex::{ExternalPotential, LinearProgram, LpSolution, SiteConfiguration};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Small-integer program with `n <= 16` columns and `m <= 8` rows. Most
/// are feasible by construction (`b = A x0`, `x0 >= 0`); about one in six
/// has an arbitrary right-hand side and may be infeasible, and columns
/// with negative cost and non-positive entries make some unbounded.
pub fn random_lp(rng: &mut ChaCha8Rng) -> LinearProgram {
    let n = rng.gen_range(2..=16);
    let m = rng.gen_range(1..=8usize.min(n));
    let a: Vec<Vec<f64>> = (0..m)
        .map(|_| (0..n).map(|_| rng.gen_range(-3..=3) as f64).collect())
        .collect();
    let b: Vec<f64> = if rng.gen_ratio(1, 6) {
        (0..m).map(|_| rng.gen_range(-5..=5) as f64).collect()
    } else {
        let x0: Vec<f64> = (0..n)
            .map(|_| {
                if rng.gen_bool(0.5) {
                    rng.gen_range(0..=4) as f64
                } else {
                    0.0
                }
            })
            .collect();
        a.iter()
            .map(|row| row.iter().zip(&x0).map(|(p, q)| p * q).sum())
            .collect()
    };
    let c: Vec<f64> = (0..n).map(|_| rng.gen_range(-2..=6) as f64).collect();
    LinearProgram::new(c, a, b).unwrap()
}

/// Primal residual, dual infeasibility and complementary slackness of an
/// optimal solution, as the largest violation.
pub fn kkt_violation(lp: &LinearProgram, sol: &LpSolution) -> f64 {
    let residual = lp.residual(&sol.primal);
    let neg = sol.primal.iter().fold(0.0f64, |m, x| m.max(-x));
    let rc = lp.reduced_costs(&sol.duals);
    let dual_inf = rc.iter().fold(0.0f64, |m, r| m.max(-r));
    let slack = rc
        .iter()
        .zip(&sol.primal)
        .fold(0.0f64, |m, (r, x)| m.max((r * x).abs()));
    let gap = (sol.objective_value - sol.dual_objective(lp)).abs();
    residual.max(neg).max(dual_inf).max(slack).max(gap)
}

pub fn random_points(rng: &mut ChaCha8Rng, k: usize, half_width: f64) -> Vec<[f64; 3]> {
    loop {
        let pts: Vec<[f64; 3]> = (0..k)
            .map(|_| {
                [
                    rng.gen_range(-half_width..half_width),
                    rng.gen_range(-half_width..half_width),
                    rng.gen_range(-half_width..half_width),
                ]
            })
            .collect();
        let ok = pts.iter().enumerate().all(|(i, p)| {
            pts[i + 1..]
                .iter()
                .all(|q| p.iter().zip(q).map(|(a, b)| (a - b).powi(2)).sum::<f64>() > 0.01)
        });
        if ok {
            return pts;
        }
    }
}

/// Coulomb configuration with 2..=`max_sites` sites and a potential in `[-4, 1]`.
pub fn random_system(rng: &mut ChaCha8Rng, max_sites: usize) -> (SiteConfiguration, ExternalPotential) {
    let k = rng.gen_range(2..=max_sites);
    let config = SiteConfiguration::coulomb(random_points(rng, k, 2.0)).unwrap();
    let v = ExternalPotential::new((0..k).map(|_| rng.gen_range(-4.0..1.0)).collect()).unwrap();
    (config, v)
}
