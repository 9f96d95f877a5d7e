//! Randomized checks that the canonical and grand-canonical functionals
//! coincide wherever theory says they must: on at most four sites and on
//! collinear sites, both at integer mass.

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::Result;
use crate::search::gap_at_density;
use crate::sites::{DensityVector, Occupation, Point, SiteConfiguration};

pub const EQUALITY_TOLERANCE: f64 = 1e-8;
pub const IDENTITY_TOLERANCE: f64 = 1e-12;
const MIN_SEPARATION: f64 = 0.05;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Counterexample {
    pub case: usize,
    pub config: SiteConfiguration,
    pub rho: Option<DensityVector>,
    pub deviation: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuiteReport {
    pub name: String,
    pub cases: usize,
    pub tolerance: f64,
    pub max_deviation: f64,
    pub failures: Vec<Counterexample>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    fn record(&mut self, c: Counterexample) {
        self.max_deviation = self.max_deviation.max(c.deviation);
        if !(c.deviation <= self.tolerance) {
            self.failures.push(c);
        }
    }
}

/// Random density with integer mass `n`: a random mixture of a few random
/// `n`-subsets, hence always realizable by `n` particles.
pub fn random_integer_mass_density<R: Rng>(rng: &mut R, k: usize, n: usize) -> DensityVector {
    let terms = rng.gen_range(1..=4);
    let weights: Vec<f64> = (0..terms).map(|_| rng.gen_range(0.05..1.0)).collect();
    let total: f64 = weights.iter().sum();
    let mut rho = vec![0.0; k];
    for w in weights {
        for i in sample(rng, k, n) {
            rho[i] += w / total;
        }
    }
    DensityVector::new(rho.into_iter().map(|r| r.min(1.0)).collect()).expect("mixture of indicators")
}

fn separated(points: &[Point]) -> bool {
    points.iter().enumerate().all(|(i, p)| {
        points[i + 1..]
            .iter()
            .all(|q| p.iter().zip(q).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt() >= MIN_SEPARATION)
    })
}

fn random_points<R: Rng>(rng: &mut R, k: usize, collinear: bool) -> Vec<Point> {
    loop {
        let pts: Vec<Point> = if collinear {
            (0..k).map(|_| [rng.gen_range(-3.0..3.0), 0.0, 0.0]).collect()
        } else {
            (0..k)
                .map(|_| {
                    [
                        rng.gen_range(-2.0..2.0),
                        rng.gen_range(-2.0..2.0),
                        rng.gen_range(-2.0..2.0),
                    ]
                })
                .collect()
        };
        if separated(&pts) {
            return pts;
        }
    }
}

fn functional_suite(
    name: &str,
    cases: usize,
    seed: u64,
    mut draw: impl FnMut(&mut ChaCha8Rng) -> Vec<Point>,
) -> Result<SuiteReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = SuiteReport {
        name: name.to_owned(),
        cases,
        tolerance: EQUALITY_TOLERANCE,
        max_deviation: 0.0,
        failures: Vec::new(),
    };
    for case in 0..cases {
        let config = SiteConfiguration::coulomb(draw(&mut rng))?;
        let k = config.len();
        let n = rng.gen_range(1..k);
        let rho = random_integer_mass_density(&mut rng, k, n);
        let s = gap_at_density(&config, &rho, n)?;
        report.record(Counterexample {
            case,
            config,
            rho: Some(rho),
            deviation: s.gap.abs(),
        });
    }
    Ok(report)
}

/// Four random sites in a cube, random integer-mass densities.
pub fn verify_four_sites(cases: usize, seed: u64) -> Result<SuiteReport> {
    functional_suite("four sites", cases, seed, |rng| random_points(rng, 4, false))
}

/// Between 2 and `max_sites` random collinear sites, random integer-mass densities.
pub fn verify_collinear(cases: usize, max_sites: usize, seed: u64) -> Result<SuiteReport> {
    let max_sites = max_sites.max(2);
    functional_suite("collinear", cases, seed, |rng| {
        let k = rng.gen_range(2..=max_sites);
        random_points(rng, k, true)
    })
}

/// `c_123 + c_124 - c_12 - c_1234 + |R_3 - R_4|^{-s}`, zero for any four
/// sites: exchanging one particle between two configurations leaves only
/// the 3-4 pair uncounted.
pub fn exchange_identity_residual(config: &SiteConfiguration) -> f64 {
    let c = config.subset_energies();
    let m = |sites: &[usize]| Occupation::from_sites(sites.iter().copied()).mask() as usize;
    c[m(&[0, 1, 2])] + c[m(&[0, 1, 3])] - c[m(&[0, 1])] - c[m(&[0, 1, 2, 3])] + config.interaction(2, 3)
}

pub fn verify_exchange_identity(cases: usize, seed: u64) -> Result<SuiteReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = SuiteReport {
        name: "exchange identity".to_owned(),
        cases,
        tolerance: IDENTITY_TOLERANCE,
        max_deviation: 0.0,
        failures: Vec::new(),
    };
    for case in 0..cases {
        let config = SiteConfiguration::coulomb(random_points(&mut rng, 4, false))?;
        let deviation = exchange_identity_residual(&config).abs();
        report.record(Counterexample {
            case,
            config,
            rho: None,
            deviation,
        });
    }
    Ok(report)
}
