//! Hardness minimization, level-line grids, functional-gap searches over
//! geometries, and exhaustive counterexample certification.

mod certify;
mod geometry;
pub mod pattern;

use rayon::prelude::*;
use serde::Serialize;

pub use certify::{certify_counterexample, CertificationReport, Level};
pub use geometry::{
    diamond_gap, diamond_sites, gap_at_density, optimize_diamond, random_geometry_search, refine_positions, GapSample,
    GeometryOptimum, RandomSearchSpec, SearchHit, GAP_TOLERANCE,
};
pub use pattern::{compass_search, PatternSearchOptions, PatternSearchResult};

use crate::canonical::{energy_profile, EnergyProfile};
use crate::error::{Error, Result};
use crate::numfmt::format_number;
use crate::sites::{ExternalPotential, SiteConfiguration};

/// `eta` below minus this certifies a convexity violation.
pub const CERTIFY_TOLERANCE: f64 = 1e-9;

/// Hardness `eta = (E_{N-1} + E_{N+1})/2 - E_N` of a potential.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HardnessResult {
    pub potential: ExternalPotential,
    pub n: usize,
    pub eta: f64,
    pub profile: EnergyProfile,
    pub certified: bool,
}

fn check_interior(n: usize, k: usize) -> Result<()> {
    if n == 0 || n >= k {
        return Err(Error::CardinalityOutOfRange { n, k });
    }
    Ok(())
}

fn eta_of(profile: &EnergyProfile, n: usize) -> f64 {
    let e = &profile.energies;
    0.5 * (e[n - 1] + e[n + 1]) - e[n]
}

pub fn hardness(config: &SiteConfiguration, potential: &ExternalPotential, n: usize) -> Result<HardnessResult> {
    check_interior(n, config.len())?;
    let profile = energy_profile(config, potential)?;
    let eta = eta_of(&profile, n);
    Ok(HardnessResult {
        potential: potential.clone(),
        n,
        eta,
        profile,
        certified: eta < -CERTIFY_TOLERANCE,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HardnessMinimum {
    pub start_eta: f64,
    pub best: HardnessResult,
    pub evaluations: usize,
    pub final_step: f64,
}

/// Compass search for the most negative hardness around `start`, keeping
/// the sites in `frozen` at their starting values.
pub fn minimize_hardness(
    config: &SiteConfiguration,
    start: &ExternalPotential,
    n: usize,
    frozen: &[usize],
    options: &PatternSearchOptions,
) -> Result<HardnessMinimum> {
    let k = config.len();
    check_interior(n, k)?;
    start.check_sites(k)?;
    if let Some(&bad) = frozen.iter().find(|&&i| i >= k) {
        return Err(Error::BadRange(format!(
            "frozen site {} out of range for {} sites",
            bad + 1,
            k
        )));
    }
    let free: Vec<usize> = (0..k).filter(|i| !frozen.contains(i)).collect();
    let table = config.subset_energies();

    // Hot loop: min over subsets of each cardinality without allocating.
    let mut best = vec![f64::INFINITY; k + 1];
    let mut one_body = vec![0.0; table.len()];
    let mut eta = |v: &[f64]| -> f64 {
        best.iter_mut().for_each(|b| *b = f64::INFINITY);
        best[0] = 0.0;
        for mask in 1..table.len() {
            let low = mask.trailing_zeros() as usize;
            one_body[mask] = one_body[mask & (mask - 1)] + v[low];
            let c = mask.count_ones() as usize;
            if c + 1 >= n && c <= n + 1 {
                best[c] = best[c].min(table[mask] + one_body[mask]);
            }
        }
        0.5 * (best[n - 1] + best[n + 1]) - best[n]
    };
    let start_eta = eta(start.values());
    let r = compass_search(start.values(), &free, &mut eta, options);
    let potential = ExternalPotential::new(r.x)?;
    Ok(HardnessMinimum {
        start_eta,
        best: hardness(config, &potential, n)?,
        evaluations: r.evaluations,
        final_step: r.final_step,
    })
}

/// Rectangle of `|v1|` and `|v3|` magnitudes sampled on a regular grid.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GridSpec {
    pub v1_abs: (f64, f64),
    pub v3_abs: (f64, f64),
    pub steps: usize,
    /// Common value of `v5 = v6`.
    pub fixed: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct GridCell {
    pub v1_abs: f64,
    pub v3_abs: f64,
    pub eta: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HardnessGrid {
    pub steps: usize,
    /// Row-major: `v1_abs` outer, `v3_abs` inner.
    pub cells: Vec<GridCell>,
}

pub const GRID_CSV_HEADER: &str = "v1_abs,v3_abs,eta";

impl HardnessGrid {
    pub fn to_csv(&self) -> String {
        let mut out = String::with_capacity(32 * (self.cells.len() + 1));
        out.push_str(GRID_CSV_HEADER);
        out.push('\n');
        for c in &self.cells {
            out.push_str(&format!(
                "{},{},{}\n",
                format_number(c.v1_abs),
                format_number(c.v3_abs),
                format_number(c.eta)
            ));
        }
        out
    }
}

fn axis(range: (f64, f64), steps: usize, name: &str) -> Result<Vec<f64>> {
    let (lo, hi) = range;
    if !lo.is_finite() || !hi.is_finite() || lo < 0.0 || hi < lo {
        return Err(Error::BadRange(format!(
            "{name} range [{lo}, {hi}] must be finite non-negative magnitudes with lo <= hi"
        )));
    }
    let h = (hi - lo) / (steps - 1) as f64;
    Ok((0..steps)
        .map(|i| if i + 1 == steps { hi } else { lo + h * i as f64 })
        .collect())
}

/// Hardness at `N = 3` over the plane `v1 = v2 = -|v1|`, `v3 = v4 = -|v3|`,
/// `v5 = v6 = fixed` of a six-site configuration.
pub fn hardness_grid(config: &SiteConfiguration, spec: &GridSpec) -> Result<HardnessGrid> {
    if config.len() != 6 {
        return Err(Error::BadRange(format!(
            "the hardness grid needs 6 sites, got {}",
            config.len()
        )));
    }
    if spec.steps < 2 {
        return Err(Error::BadRange(format!(
            "grid needs at least 2 steps, got {}",
            spec.steps
        )));
    }
    if !spec.fixed.is_finite() {
        return Err(Error::NonFinite("fixed potential"));
    }
    let xs = axis(spec.v1_abs, spec.steps, "|v1|")?;
    let ys = axis(spec.v3_abs, spec.steps, "|v3|")?;
    config.subset_energies();
    let cells = xs
        .par_iter()
        .flat_map_iter(|&x| {
            ys.iter().map(move |&y| {
                let v = ExternalPotential::new(vec![-x, -x, -y, -y, spec.fixed, spec.fixed])?;
                let eta = hardness(config, &v, 3)?.eta;
                Ok(GridCell {
                    v1_abs: x,
                    v3_abs: y,
                    eta,
                })
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(HardnessGrid {
        steps: spec.steps,
        cells,
    })
}
