use serde::Serialize;

use super::CERTIFY_TOLERANCE;
use crate::error::{Error, Result};
use crate::sites::{configuration_energy, enumerate_occupations, ExternalPotential, Occupation, SiteConfiguration};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Level {
    pub n: usize,
    pub energy: f64,
    pub minimizer: Occupation,
}

/// Energies at `N-1, N, N+1` recomputed pair by pair, the midpoint of the
/// outer two, and whether `E_N` exceeds it.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CertificationReport {
    pub n: usize,
    pub below: Level,
    pub at: Level,
    pub above: Level,
    pub midpoint: f64,
    /// `E_N - midpoint`; positive when convexity fails.
    pub margin: f64,
    pub violated: bool,
}

fn level(config: &SiteConfiguration, v: &ExternalPotential, n: usize) -> Result<Level> {
    let mut best: Option<Level> = None;
    for occ in enumerate_occupations(config.len(), Some(n))? {
        let e = configuration_energy(config, occ)? + occ.sites().map(|i| v.values()[i]).sum::<f64>();
        if best.as_ref().map_or(true, |b| e < b.energy) {
            best = Some(Level {
                n,
                energy: e,
                minimizer: occ,
            });
        }
    }
    best.ok_or(Error::CardinalityOutOfRange { n, k: config.len() })
}

/// Brute-force check of `E_N > (E_{N-1} + E_{N+1})/2` sharing no code with
/// the subset-energy table or the LP.
pub fn certify_counterexample(
    config: &SiteConfiguration,
    potential: &ExternalPotential,
    n: usize,
) -> Result<CertificationReport> {
    let k = config.len();
    potential.check_sites(k)?;
    if n == 0 || n >= k {
        return Err(Error::CardinalityOutOfRange { n, k });
    }
    let below = level(config, potential, n - 1)?;
    let at = level(config, potential, n)?;
    let above = level(config, potential, n + 1)?;
    let midpoint = 0.5 * (below.energy + above.energy);
    let margin = at.energy - midpoint;
    Ok(CertificationReport {
        n,
        below,
        at,
        above,
        midpoint,
        margin,
        violated: margin > CERTIFY_TOLERANCE,
    })
}
