//! Canonical (fixed particle number) energies and functional.
//!
//! `E[V,N] = min_{#I=N} c_I + sum_{i in I} v_i` by exhaustive enumeration,
//! its lower convex envelope in `N` (which is the grand-canonical energy at
//! integer mean particle number), and the canonical density functional
//! `F[rho]` as a linear program over probabilities of `N`-subsets.

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::simplex::{solve_lp, LinearProgram, LpStatus};
use crate::sites::{
    masks_with_cardinality, DensityVector, EnsembleState, ExternalPotential, Occupation, SiteConfiguration,
};

/// Energies within this of the minimum count as minimizers.
pub const TIE_TOLERANCE: f64 = 1e-9;
/// Convexity is violated at `N` only if `E_N` exceeds the midpoint by more than this.
pub const CONVEXITY_TOLERANCE: f64 = 1e-12;

const MASS_TOL: f64 = 1e-9;

/// Canonical energy, `Infinite` once there are more electrons than sites.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Energy {
    Finite(f64),
    Infinite,
}

impl Energy {
    pub fn finite(self) -> Option<f64> {
        match self {
            Energy::Finite(e) => Some(e),
            Energy::Infinite => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, Energy::Infinite)
    }
}

impl Serialize for Energy {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Energy::Finite(e) => s.serialize_f64(*e),
            Energy::Infinite => s.serialize_str("inf"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CanonicalEnergy {
    pub n: usize,
    pub energy: Energy,
    /// Every optimal configuration, ascending mask order.
    pub minimizers: Vec<Occupation>,
}

/// `E[V,N]` together with all its minimizers.
pub fn canonical_energy(
    config: &SiteConfiguration,
    potential: &ExternalPotential,
    n: usize,
) -> Result<CanonicalEnergy> {
    let k = config.len();
    potential.check_sites(k)?;
    if n > k {
        return Ok(CanonicalEnergy {
            n,
            energy: Energy::Infinite,
            minimizers: Vec::new(),
        });
    }
    let table = config.subset_energies();
    let values: Vec<(u32, f64)> = masks_with_cardinality(k, n)
        .map(|m| {
            let occ = Occupation::from_mask(m);
            (m, table[m as usize] + potential.occupied_sum(occ))
        })
        .collect();
    let best = values.iter().map(|(_, e)| *e).fold(f64::INFINITY, f64::min);
    let minimizers = values
        .iter()
        .filter(|(_, e)| *e <= best + TIE_TOLERANCE)
        .map(|(m, _)| Occupation::from_mask(*m))
        .collect();
    Ok(CanonicalEnergy {
        n,
        energy: Energy::Finite(best),
        minimizers,
    })
}

/// `E[V,N]` for every `N = 0..=K` with its convex envelope.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EnergyProfile {
    pub energies: Vec<f64>,
    pub minimizers: Vec<Vec<Occupation>>,
    pub envelope: Vec<f64>,
    pub violations: Vec<usize>,
}

impl EnergyProfile {
    pub fn sites(&self) -> usize {
        self.energies.len() - 1
    }

    /// `E[V,N]`, infinite past the site count.
    pub fn energy(&self, n: usize) -> Energy {
        self.energies.get(n).map_or(Energy::Infinite, |&e| Energy::Finite(e))
    }

    /// Grand-canonical energy at fractional mean particle number `lambda`,
    /// by linear interpolation of the envelope.
    pub fn envelope_at(&self, lambda: f64) -> Option<f64> {
        let k = self.sites() as f64;
        if !(0.0..=k).contains(&lambda) {
            return None;
        }
        let lo = lambda.floor() as usize;
        let t = lambda - lo as f64;
        if t == 0.0 {
            return Some(self.envelope[lo]);
        }
        Some((1.0 - t) * self.envelope[lo] + t * self.envelope[lo + 1])
    }
}

/// All canonical energies in one sweep over the `2^K` subsets.
pub fn energy_profile(config: &SiteConfiguration, potential: &ExternalPotential) -> Result<EnergyProfile> {
    let k = config.len();
    potential.check_sites(k)?;
    let table = config.subset_energies();
    let v = potential.values();

    let mut totals = vec![0.0; table.len()];
    let mut one_body = vec![0.0; table.len()];
    let mut energies = vec![f64::INFINITY; k + 1];
    energies[0] = 0.0;
    for mask in 1..table.len() {
        let low = mask.trailing_zeros() as usize;
        one_body[mask] = one_body[mask & (mask - 1)] + v[low];
        let e = table[mask] + one_body[mask];
        totals[mask] = e;
        let n = mask.count_ones() as usize;
        if e < energies[n] {
            energies[n] = e;
        }
    }
    let mut minimizers = vec![Vec::new(); k + 1];
    for (mask, &e) in totals.iter().enumerate() {
        let n = mask.count_ones() as usize;
        if e <= energies[n] + TIE_TOLERANCE {
            minimizers[n].push(Occupation::from_mask(mask as u32));
        }
    }
    let envelope = lower_convex_envelope(&energies);
    let violations = convexity_check(&energies);
    Ok(EnergyProfile {
        energies,
        minimizers,
        envelope,
        violations,
    })
}

/// Largest convex sequence below `values`, from the lower hull of the
/// points `(i, values[i])`.
pub fn lower_convex_envelope(values: &[f64]) -> Vec<f64> {
    let mut hull: Vec<usize> = Vec::with_capacity(values.len());
    for i in 0..values.len() {
        while hull.len() >= 2 {
            let a = hull[hull.len() - 2];
            let b = hull[hull.len() - 1];
            // Drop b when it is on or above the chord from a to i.
            let lhs = (values[b] - values[a]) * (i - a) as f64;
            let rhs = (values[i] - values[a]) * (b - a) as f64;
            if lhs >= rhs {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(i);
    }
    let mut envelope = vec![0.0; values.len()];
    for w in hull.windows(2) {
        let (a, b) = (w[0], w[1]);
        for (i, slot) in envelope.iter_mut().enumerate().take(b + 1).skip(a) {
            let t = (i - a) as f64 / (b - a) as f64;
            *slot = (1.0 - t) * values[a] + t * values[b];
        }
    }
    if hull.len() == 1 {
        envelope[hull[0]] = values[hull[0]];
    }
    envelope
}

/// Interior indices `N` with `E_N > (E_{N-1} + E_{N+1}) / 2 + 1e-12`.
pub fn convexity_check(energies: &[f64]) -> Vec<usize> {
    (1..energies.len().saturating_sub(1))
        .filter(|&n| energies[n] > 0.5 * (energies[n - 1] + energies[n + 1]) + CONVEXITY_TOLERANCE)
        .collect()
}

/// Optimal value of a functional program and an optimal state.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LpMinimum {
    pub value: f64,
    pub ensemble: EnsembleState,
}

fn check_integer_mass(rho: &DensityVector, n: usize) -> Result<()> {
    if (rho.mass() - n as f64).abs() > MASS_TOL {
        return Err(Error::InfeasibleDensity(format!(
            "density mass {} differs from N = {}",
            rho.mass(),
            n
        )));
    }
    Ok(())
}

/// Program `min sum_I p_I c_I` over `N`-subsets with the density rows
/// `sum_{I containing k} p_I = rho_k`. Normalization follows from the mass.
pub fn canonical_program(
    config: &SiteConfiguration,
    rho: &DensityVector,
    n: usize,
) -> Result<(LinearProgram, Vec<Occupation>)> {
    let k = config.len();
    rho.check_sites(k)?;
    if n == 0 || n >= k {
        return Err(Error::CardinalityOutOfRange { n, k });
    }
    let columns: Vec<Occupation> = masks_with_cardinality(k, n).map(Occupation::from_mask).collect();
    let table = config.subset_energies();
    let objective = columns.iter().map(|o| table[o.mask() as usize]).collect();
    let rows = (0..k)
        .map(|site| {
            columns
                .iter()
                .map(|o| if o.contains(site) { 1.0 } else { 0.0 })
                .collect()
        })
        .collect();
    let lp = LinearProgram::new(objective, rows, rho.values().to_vec())?;
    Ok((lp, columns))
}

/// Canonical functional `F[rho]` at mass `N`.
pub fn canonical_functional(config: &SiteConfiguration, rho: &DensityVector, n: usize) -> Result<LpMinimum> {
    rho.check_sites(config.len())?;
    check_integer_mass(rho, n)?;
    if let Some(occ) = rho.as_occupation() {
        return Ok(LpMinimum {
            value: config.subset_energies()[occ.mask() as usize],
            ensemble: EnsembleState::deterministic(occ),
        });
    }
    let (lp, columns) = canonical_program(config, rho, n)?;
    let sol = solve_lp(&lp)?;
    if sol.status != LpStatus::Optimal {
        return Err(Error::InfeasibleDensity(format!(
            "no {n}-particle state has this density"
        )));
    }
    Ok(LpMinimum {
        value: sol.objective_value,
        ensemble: EnsembleState::from_weights(&columns, &sol.primal)?,
    })
}
