//! Leading-order predictions for the quantum system obtained by placing
//! small nuclei far apart.
//!
//! Nucleus `j` sits at `ell * R_j` with charge `z_j = sqrt(2|v_j|/ell)`, so
//! its hydrogenic ground energy `-z_j^2/2` equals `v_j/ell`. As `ell` grows,
//! electrons localize on the wells and
//! `E[N] = min_{1<=n<=min(N,K)} E_cl[V,n] / ell + o(1/ell)`.

use serde::Serialize;

use crate::canonical::energy_profile;
use crate::error::{Error, Result};
use crate::numfmt::format_number;
use crate::sites::{ExternalPotential, Point, SiteConfiguration};

/// Binding requires the classical energy to drop by more than this.
pub const BINDING_TOLERANCE: f64 = 1e-9;

/// Error exponent of the upper bound: `E <= E_cl/ell + O(ell^{-3/2})`.
pub const UPPER_ERROR_EXPONENT: f64 = 1.5;
/// Error exponent of the lower bound: `E >= E_cl/ell - O(ell^{-5/4})`.
/// Probably not optimal.
pub const LOWER_ERROR_EXPONENT: f64 = 1.25;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScaledNuclearSystem {
    pub ell: f64,
    pub positions: Vec<Point>,
    pub charges: Vec<f64>,
}

impl ScaledNuclearSystem {
    pub fn total_charge(&self) -> f64 {
        self.charges.iter().sum()
    }

    /// Ground energy `-z^2/2` of each isolated well.
    pub fn well_energies(&self) -> Vec<f64> {
        self.charges.iter().map(|z| -0.5 * z * z).collect()
    }

    /// The site potential this system was built from, `v_j = -ell z_j^2 / 2`.
    pub fn potential(&self) -> Vec<f64> {
        self.well_energies().iter().map(|e| e * self.ell).collect()
    }
}

fn check_ell(ell: f64) -> Result<()> {
    if !(ell.is_finite() && ell > 0.0) {
        return Err(Error::InvalidScale(ell));
    }
    Ok(())
}

pub fn scale_system(
    config: &SiteConfiguration,
    potential: &ExternalPotential,
    ell: f64,
) -> Result<ScaledNuclearSystem> {
    check_ell(ell)?;
    potential.check_sites(config.len())?;
    if let Some((site, &value)) = potential.values().iter().enumerate().find(|(_, &v)| v >= 0.0) {
        return Err(Error::NonAttractivePotential { site, value });
    }
    Ok(ScaledNuclearSystem {
        ell,
        positions: config
            .points()
            .iter()
            .map(|p| [ell * p[0], ell * p[1], ell * p[2]])
            .collect(),
        charges: potential
            .values()
            .iter()
            .map(|v| (2.0 * v.abs() / ell).sqrt())
            .collect(),
    })
}

/// `min_{1<=n<=min(N,K)} E_cl[V,n] / ell`.
pub fn leading_order_energy(
    config: &SiteConfiguration,
    potential: &ExternalPotential,
    ell: f64,
    n: usize,
) -> Result<f64> {
    check_ell(ell)?;
    if n == 0 {
        return Err(Error::CardinalityOutOfRange { n, k: config.len() });
    }
    let p = energy_profile(config, potential)?;
    let top = n.min(config.len());
    Ok(p.energies[1..=top].iter().copied().fold(f64::INFINITY, f64::min) / ell)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BindingEntry {
    pub n: usize,
    pub classical_energy: f64,
    /// `ell` times the leading-order quantum energy; independent of `ell`.
    pub leading_coefficient: f64,
    /// The `n <= N` attaining the leading coefficient.
    pub minimizing_n: usize,
    pub binds: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BindingReport {
    pub entries: Vec<BindingEntry>,
    pub upper_error_exponent: f64,
    pub lower_error_exponent: f64,
}

pub const STEP_CSV_HEADER: &str = "n,ell_energy";

impl BindingReport {
    /// Electron counts predicted to have a ground state.
    pub fn binding_numbers(&self) -> Vec<usize> {
        self.entries.iter().filter(|e| e.binds).map(|e| e.n).collect()
    }

    /// Leading-order energy of `N` electrons at scale `ell`.
    pub fn energy_at(&self, n: usize, ell: f64) -> Option<f64> {
        self.entries
            .iter()
            .find(|e| e.n == n)
            .map(|e| e.leading_coefficient / ell)
    }

    /// Step profile `(N, ell * E[N])`.
    pub fn step_csv(&self) -> String {
        let mut out = format!("{STEP_CSV_HEADER}\n");
        for e in &self.entries {
            out.push_str(&format!("{},{}\n", e.n, format_number(e.leading_coefficient)));
        }
        out
    }
}

/// Classifies `N = 1..=K`: `N` electrons bind iff `E_cl[V,N]` lies strictly
/// below every `E_cl[V,n]`, `n < N` (including `E_0 = 0`). Ties do not bind.
pub fn binding_report(config: &SiteConfiguration, potential: &ExternalPotential) -> Result<BindingReport> {
    let p = energy_profile(config, potential)?;
    let mut entries = Vec::with_capacity(config.len());
    // Lowest energy with fewer electrons, the empty system included.
    let mut floor = p.energies[0];
    let mut best = (f64::INFINITY, 0);
    for n in 1..=config.len() {
        let e = p.energies[n];
        let binds = e < floor - BINDING_TOLERANCE;
        floor = floor.min(e);
        if e < best.0 {
            best = (e, n);
        }
        entries.push(BindingEntry {
            n,
            classical_energy: e,
            leading_coefficient: best.0,
            minimizing_n: best.1,
            binds,
        });
    }
    Ok(BindingReport {
        entries,
        upper_error_exponent: UPPER_ERROR_EXPONENT,
        lower_error_exponent: LOWER_ERROR_EXPONENT,
    })
}

/// Lieb's bound `floor(2 Z) + M` on the number of electrons the nuclei can bind.
pub fn lieb_max_binding(system: &ScaledNuclearSystem) -> usize {
    (2.0 * system.total_charge()).floor() as usize + system.charges.len()
}
