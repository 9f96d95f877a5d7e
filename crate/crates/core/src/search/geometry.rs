use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::pattern::{compass_search, PatternSearchOptions};
use crate::canonical::canonical_functional;
use crate::error::{Error, Result};
use crate::fixtures::diamond_points;
use crate::grandcanonical::gc_functional;
use crate::sites::{DensityVector, Point, SiteConfiguration, MAX_SITES};

/// A gap above this is a certified canonical/grand-canonical separation.
pub const GAP_TOLERANCE: f64 = 1e-9;

/// Canonical and grand-canonical functionals at one density.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GapSample {
    pub config: SiteConfiguration,
    pub rho: DensityVector,
    pub n: usize,
    pub f_canonical: f64,
    pub f_gc: f64,
    pub gap: f64,
    /// `gap / f_canonical`; undefined unless `f_canonical > 0`.
    pub relative_gap: Option<f64>,
}

impl GapSample {
    pub fn is_counterexample(&self) -> bool {
        self.gap > GAP_TOLERANCE
    }
}

pub fn gap_at_density(config: &SiteConfiguration, rho: &DensityVector, n: usize) -> Result<GapSample> {
    let f_canonical = canonical_functional(config, rho, n)?.value;
    let f_gc = gc_functional(config, rho)?.value;
    let gap = f_canonical - f_gc;
    Ok(GapSample {
        config: config.clone(),
        rho: rho.clone(),
        n,
        f_canonical,
        f_gc,
        gap,
        relative_gap: (f_canonical > 0.0).then(|| gap / f_canonical),
    })
}

/// Sites `(-a,0,0), (a,0,0), (b,0,0), (-b,0,0), (0,h,0), (0,-h,0)`.
pub fn diamond_sites(a: f64, b: f64, h: f64) -> Result<SiteConfiguration> {
    if !(a.is_finite() && b.is_finite() && h.is_finite()) || !(0.0 < a && a < b && h > 0.0) {
        return Err(Error::DegenerateGeometry(format!(
            "diamond needs 0 < a < b and h > 0, got a = {a}, b = {b}, h = {h}"
        )));
    }
    SiteConfiguration::coulomb(diamond_points(a, b, h))
}

/// Functional gap of the diamond `(a, b, h)` at half-filling.
pub fn diamond_gap(a: f64, b: f64, h: f64) -> Result<GapSample> {
    gap_at_density(&diamond_sites(a, b, h)?, &DensityVector::half_filling(6), 3)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RandomSearchSpec {
    pub sites: usize,
    pub trials: usize,
    /// Points are drawn uniformly from `[-w, w]^2` (or `^3`), or from boxes
    /// of this half-width around the points of `around`.
    pub box_halfwidth: f64,
    pub seed: u64,
    /// Density to test; half-filling when absent, which needs an even site count.
    pub density: Option<DensityVector>,
    pub three_dimensional: bool,
    /// Reference geometry for a local search; uniform sampling of a
    /// centered box almost never produces a gap on six sites.
    pub around: Option<SiteConfiguration>,
    /// Draws with two points closer than this are redrawn.
    pub min_separation: f64,
}

impl RandomSearchSpec {
    pub fn new(sites: usize, trials: usize, box_halfwidth: f64, seed: u64) -> Self {
        Self {
            sites,
            trials,
            box_halfwidth,
            seed,
            density: None,
            three_dimensional: false,
            around: None,
            min_separation: 1e-3,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SearchHit {
    pub trial: usize,
    pub sample: GapSample,
}

const MAX_REDRAWS: usize = 1000;

fn draw_points(rng: &mut ChaCha8Rng, spec: &RandomSearchSpec) -> Option<Vec<Point>> {
    let w = spec.box_halfwidth;
    for _ in 0..MAX_REDRAWS {
        let pts: Vec<Point> = (0..spec.sites)
            .map(|i| {
                let c = spec.around.as_ref().map_or([0.0; 3], |a| a.points()[i]);
                let z = if spec.three_dimensional {
                    rng.gen_range(-w..=w)
                } else {
                    0.0
                };
                [c[0] + rng.gen_range(-w..=w), c[1] + rng.gen_range(-w..=w), c[2] + z]
            })
            .collect();
        let separated = pts.iter().enumerate().all(|(i, p)| {
            pts[i + 1..].iter().all(|q| {
                let d2: f64 = p.iter().zip(q).map(|(a, b)| (a - b) * (a - b)).sum();
                d2.sqrt() >= spec.min_separation
            })
        });
        if separated {
            return Some(pts);
        }
    }
    None
}

/// Seeded random geometries; returns those with a certified functional gap,
/// largest gap first. Trial `t` draws from stream `t` of the seed, so
/// results do not depend on the thread count.
pub fn random_geometry_search(spec: &RandomSearchSpec) -> Result<Vec<SearchHit>> {
    let k = spec.sites;
    if !(2..=MAX_SITES).contains(&k) {
        return Err(Error::SiteCount(k));
    }
    if !(spec.box_halfwidth.is_finite() && spec.box_halfwidth > 0.0) {
        return Err(Error::BadRange(format!(
            "box half-width {} must be positive",
            spec.box_halfwidth
        )));
    }
    if !(spec.min_separation.is_finite() && spec.min_separation > 0.0) {
        return Err(Error::BadRange(format!(
            "minimum separation {} must be positive",
            spec.min_separation
        )));
    }
    if let Some(a) = &spec.around {
        if a.len() != k {
            return Err(Error::LengthMismatch {
                what: "reference geometry",
                expected: k,
                found: a.len(),
            });
        }
    }
    let rho = match &spec.density {
        Some(r) => {
            r.check_sites(k)?;
            r.clone()
        }
        None if k % 2 == 0 => DensityVector::half_filling(k),
        None => {
            return Err(Error::InfeasibleDensity(format!(
                "half-filling of {k} sites has non-integer mass; supply a density"
            )))
        }
    };
    let n = rho.mass().round() as usize;
    if (rho.mass() - n as f64).abs() > 1e-9 {
        return Err(Error::InfeasibleDensity(format!(
            "density mass {} is not an integer",
            rho.mass()
        )));
    }

    let mut hits = (0..spec.trials)
        .into_par_iter()
        .map(|trial| -> Result<Option<SearchHit>> {
            let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
            rng.set_stream(trial as u64);
            let Some(points) = draw_points(&mut rng, spec) else {
                return Ok(None);
            };
            let config = SiteConfiguration::coulomb(points)?;
            let sample = gap_at_density(&config, &rho, n)?;
            Ok(sample.is_counterexample().then_some(SearchHit { trial, sample }))
        })
        .filter_map(|r| r.transpose())
        .collect::<Result<Vec<_>>>()?;
    hits.sort_by(|a, b| b.sample.gap.total_cmp(&a.sample.gap).then(a.trial.cmp(&b.trial)));
    Ok(hits)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GeometryOptimum {
    pub start_gap: f64,
    pub best: GapSample,
    pub evaluations: usize,
}

/// Maximizes the half-filling gap over the diamond parameters `(a, b, h)`.
pub fn optimize_diamond(start: (f64, f64, f64), options: &PatternSearchOptions) -> Result<GeometryOptimum> {
    let first = diamond_gap(start.0, start.1, start.2)?;
    let objective = |x: &[f64]| diamond_gap(x[0], x[1], x[2]).map_or(f64::INFINITY, |s| -s.gap);
    let r = compass_search(&[start.0, start.1, start.2], &[0, 1, 2], objective, options);
    Ok(GeometryOptimum {
        start_gap: first.gap,
        best: diamond_gap(r.x[0], r.x[1], r.x[2])?,
        evaluations: r.evaluations,
    })
}

/// Maximizes the gap at `rho` over independent moves of every site
/// coordinate (in-plane only when every site has `z = 0`).
pub fn refine_positions(
    config: &SiteConfiguration,
    rho: &DensityVector,
    options: &PatternSearchOptions,
) -> Result<GeometryOptimum> {
    let k = config.len();
    rho.check_sites(k)?;
    let n = rho.mass().round() as usize;
    let first = gap_at_density(config, rho, n)?;
    let exponent = config.exponent();
    let flat: Vec<f64> = config.points().iter().flatten().copied().collect();
    let planar = config.points().iter().all(|p| p[2] == 0.0);
    let free: Vec<usize> = (0..3 * k).filter(|i| !planar || i % 3 != 2).collect();
    let build = |x: &[f64]| {
        let pts = x.chunks(3).map(|c| [c[0], c[1], c[2]]).collect();
        SiteConfiguration::new(pts, exponent)
    };
    let objective = |x: &[f64]| {
        build(x)
            .and_then(|c| gap_at_density(&c, rho, n))
            .map_or(f64::INFINITY, |s| -s.gap)
    };
    let r = compass_search(&flat, &free, objective, options);
    Ok(GeometryOptimum {
        start_gap: first.gap,
        best: gap_at_density(&build(&r.x)?, rho, n)?,
        evaluations: r.evaluations,
    })
}
