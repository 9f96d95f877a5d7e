//! Grand-canonical functional, fixed-mean energy, and dual potentials.
//!
//! Every subset (including the empty set and singletons) is a column. The
//! density-constrained program has the dual
//!
//! ```text
//! F_GC[rho] = max  E0 - sum_k v_k rho_k
//!             s.t. E0 <= c_I + sum_{i in I} v_i   for every subset I,
//! ```
//!
//! so `v_k` is minus the multiplier of density row `k` and `E0`, the
//! multiplier of the normalization row, is the grand-canonical ground
//! energy in the potential `v`.

use std::collections::{BTreeSet, VecDeque};

use serde::Serialize;

use crate::canonical::LpMinimum;
use crate::error::{Error, Result};
use crate::simplex::{solve_lp, LinearProgram, LpSolution, LpStatus};
use crate::sites::{DensityVector, EnsembleState, ExternalPotential, Occupation, SiteConfiguration};

/// Reduced costs at or below this mark a subset as active (tight).
pub const ACTIVE_TOLERANCE: f64 = 1e-8;
const SYMMETRY_TOL: f64 = 1e-9;
const MAX_GROUP_ORDER: usize = 40_320;

/// Density program over all `2^K` subsets; rows are the `K` densities
/// followed by normalization.
pub fn gc_program(config: &SiteConfiguration, rho: &DensityVector) -> Result<(LinearProgram, Vec<Occupation>)> {
    let k = config.len();
    rho.check_sites(k)?;
    let columns: Vec<Occupation> = (0..config.subset_count() as u32).map(Occupation::from_mask).collect();
    let objective = config.subset_energies().to_vec();
    let mut rows: Vec<Vec<f64>> = (0..k)
        .map(|site| {
            columns
                .iter()
                .map(|o| if o.contains(site) { 1.0 } else { 0.0 })
                .collect()
        })
        .collect();
    rows.push(vec![1.0; columns.len()]);
    let mut rhs = rho.values().to_vec();
    rhs.push(1.0);
    Ok((LinearProgram::new(objective, rows, rhs)?, columns))
}

fn solve_gc(config: &SiteConfiguration, rho: &DensityVector) -> Result<(LpSolution, Vec<Occupation>)> {
    let (lp, columns) = gc_program(config, rho)?;
    let sol = solve_lp(&lp)?;
    if sol.status != LpStatus::Optimal {
        // Any rho in [0,1]^K is a mixture of subsets, so this is numerical.
        return Err(Error::InfeasibleDensity(format!(
            "grand-canonical program reported {:?}",
            sol.status
        )));
    }
    Ok((sol, columns))
}

/// Grand-canonical functional `F_GC[rho]`.
pub fn gc_functional(config: &SiteConfiguration, rho: &DensityVector) -> Result<LpMinimum> {
    let (sol, columns) = solve_gc(config, rho)?;
    Ok(LpMinimum {
        value: sol.objective_value,
        ensemble: EnsembleState::from_weights(&columns, &sol.primal)?,
    })
}

/// Program for the grand-canonical energy at mean particle number `lambda`:
/// normalization and mean-cardinality rows over all subsets.
pub fn gc_energy_program(
    config: &SiteConfiguration,
    potential: &ExternalPotential,
    lambda: f64,
) -> Result<(LinearProgram, Vec<Occupation>)> {
    let k = config.len();
    potential.check_sites(k)?;
    if !lambda.is_finite() || lambda < -1e-12 || lambda > k as f64 + 1e-12 {
        return Err(Error::MassOutOfRange { lambda, k });
    }
    let lambda = lambda.clamp(0.0, k as f64);
    let columns: Vec<Occupation> = (0..config.subset_count() as u32).map(Occupation::from_mask).collect();
    let table = config.subset_energies();
    let objective = columns
        .iter()
        .map(|o| table[o.mask() as usize] + potential.occupied_sum(*o))
        .collect();
    let rows = vec![
        vec![1.0; columns.len()],
        columns.iter().map(|o| o.cardinality() as f64).collect(),
    ];
    Ok((LinearProgram::new(objective, rows, vec![1.0, lambda])?, columns))
}

/// Grand-canonical ground energy at mean particle number `lambda`.
pub fn gc_energy(config: &SiteConfiguration, potential: &ExternalPotential, lambda: f64) -> Result<LpMinimum> {
    let (lp, columns) = gc_energy_program(config, potential, lambda)?;
    let sol = solve_lp(&lp)?;
    if sol.status != LpStatus::Optimal {
        return Err(Error::MassOutOfRange {
            lambda,
            k: config.len(),
        });
    }
    Ok(LpMinimum {
        value: sol.objective_value,
        ensemble: EnsembleState::from_weights(&columns, &sol.primal)?,
    })
}

/// A dual solution of the density program, checked against both
/// optimality conditions.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DualCertificate {
    pub potential: ExternalPotential,
    pub gc_ground_energy: f64,
    pub functional_value: f64,
    /// `|F_GC - (E0 - sum_k v_k rho_k)|`.
    pub gap_check: f64,
    /// `min_I (c_I + sum_{i in I} v_i) - E0`; non-negative for a feasible dual.
    pub min_reduced_cost: f64,
    /// Subsets whose constraint is tight; their count measures how
    /// degenerate the optimal face is.
    pub active_subsets: Vec<Occupation>,
    pub ensemble: EnsembleState,
    pub group_order: usize,
}

impl DualCertificate {
    pub fn strong_duality_holds(&self) -> bool {
        self.gap_check <= 1e-7
    }

    pub fn dual_feasible(&self) -> bool {
        self.min_reduced_cost >= -1e-8
    }

    pub fn is_valid(&self) -> bool {
        self.strong_duality_holds() && self.dual_feasible()
    }
}

fn check_permutation(perm: &[usize], k: usize) -> Result<()> {
    if perm.len() != k {
        return Err(Error::InvalidSymmetry(format!(
            "permutation has {} entries for {} sites",
            perm.len(),
            k
        )));
    }
    let mut seen = vec![false; k];
    for &p in perm {
        if p >= k || std::mem::replace(&mut seen[p], true) {
            return Err(Error::InvalidSymmetry(format!("{perm:?} is not a permutation")));
        }
    }
    Ok(())
}

/// Closes a set of site permutations under composition after checking that
/// each preserves all pair distances and the density.
pub fn symmetry_group(
    config: &SiteConfiguration,
    rho: &DensityVector,
    generators: &[Vec<usize>],
) -> Result<Vec<Vec<usize>>> {
    let k = config.len();
    for g in generators {
        check_permutation(g, k)?;
        for i in 0..k {
            if (rho.values()[g[i]] - rho.values()[i]).abs() > SYMMETRY_TOL {
                return Err(Error::InvalidSymmetry(format!("{g:?} does not preserve the density")));
            }
            for j in i + 1..k {
                let d = config.distance(i, j);
                if (config.distance(g[i], g[j]) - d).abs() > SYMMETRY_TOL * (1.0 + d) {
                    return Err(Error::InvalidSymmetry(format!("{g:?} does not preserve distances")));
                }
            }
        }
    }
    let identity: Vec<usize> = (0..k).collect();
    let mut group: BTreeSet<Vec<usize>> = BTreeSet::new();
    group.insert(identity.clone());
    let mut queue = VecDeque::from([identity]);
    while let Some(h) = queue.pop_front() {
        for g in generators {
            let composed: Vec<usize> = h.iter().map(|&i| g[i]).collect();
            if group.insert(composed.clone()) {
                if group.len() > MAX_GROUP_ORDER {
                    return Err(Error::InvalidSymmetry(format!("group order exceeds {MAX_GROUP_ORDER}")));
                }
                queue.push_back(composed);
            }
        }
    }
    Ok(group.into_iter().collect())
}

/// Dual potential for `rho` from the final simplex basis, optionally
/// averaged over the orbit of a symmetry group given by its generators.
///
/// Averaging stays dual-optimal because the dual feasible set is convex and
/// the group permutes it while fixing the objective.
pub fn dual_potential(
    config: &SiteConfiguration,
    rho: &DensityVector,
    symmetry: Option<&[Vec<usize>]>,
) -> Result<DualCertificate> {
    let k = config.len();
    let (sol, columns) = solve_gc(config, rho)?;
    let mut v: Vec<f64> = sol.duals[..k].iter().map(|y| -y).collect();
    let ground = sol.duals[k];

    let group = match symmetry {
        Some(gens) if !gens.is_empty() => symmetry_group(config, rho, gens)?,
        _ => vec![(0..k).collect()],
    };
    if group.len() > 1 {
        let order = group.len() as f64;
        v = (0..k)
            .map(|site| group.iter().map(|g| v[g[site]]).sum::<f64>() / order)
            .collect();
    }
    let potential = ExternalPotential::new(v)?;

    let table = config.subset_energies();
    let mut min_reduced_cost = f64::INFINITY;
    let mut active_subsets = Vec::new();
    for occ in &columns {
        let r = table[occ.mask() as usize] + potential.occupied_sum(*occ) - ground;
        min_reduced_cost = min_reduced_cost.min(r);
        if r <= ACTIVE_TOLERANCE {
            active_subsets.push(*occ);
        }
    }
    let reconstructed = ground
        - potential
            .values()
            .iter()
            .zip(rho.values())
            .map(|(v, r)| v * r)
            .sum::<f64>();
    Ok(DualCertificate {
        gap_check: (sol.objective_value - reconstructed).abs(),
        functional_value: sol.objective_value,
        gc_ground_energy: ground,
        potential,
        min_reduced_cost,
        active_subsets,
        ensemble: EnsembleState::from_weights(&columns, &sol.primal)?,
        group_order: group.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::canonical::{canonical_functional, energy_profile};
    use crate::fixtures;
    use crate::sites::{configuration_energy, ensemble_density};

    fn occ(labels: &[usize]) -> Occupation {
        Occupation::from_sites(labels.iter().map(|l| l - 1))
    }

    #[test]
    fn half_filling_functional() {
        let d = fixtures::diamond();
        let rho = DensityVector::half_filling(6);
        let f = gc_functional(&d, &rho).unwrap();
        let c12 = configuration_energy(&d, occ(&[1, 2])).unwrap();
        let c3456 = configuration_energy(&d, occ(&[3, 4, 5, 6])).unwrap();
        assert!((f.value - 0.5 * (c12 + c3456)).abs() < 1e-9);
        assert!((f.value - 1.938924).abs() < 1e-6);
        assert!((f.ensemble.probability(occ(&[1, 2])) - 0.5).abs() < 1e-8);
        assert!((f.ensemble.probability(occ(&[3, 4, 5, 6])) - 0.5).abs() < 1e-8);
        let back = ensemble_density(&f.ensemble, 6).unwrap();
        assert!(back.values().iter().all(|r| (r - 0.5).abs() < 1e-8));
        let fc = canonical_functional(&d, &rho, 3).unwrap();
        assert!(f.value < fc.value);
    }

    #[test]
    fn zero_density() {
        let d = fixtures::diamond();
        let f = gc_functional(&d, &DensityVector::new(vec![0.0; 6]).unwrap()).unwrap();
        assert!(f.value.abs() < 1e-12);
        assert_eq!(f.ensemble, EnsembleState::deterministic(Occupation::EMPTY));
    }

    #[test]
    fn gc_energy_matches_envelope() {
        let d = fixtures::diamond();
        let v = fixtures::v_star();
        let p = energy_profile(&d, &v).unwrap();
        for n in 0..=6 {
            let e = gc_energy(&d, &v, n as f64).unwrap();
            assert!((e.value - p.envelope[n]).abs() < 1e-8, "N={n}");
        }
        let e3 = gc_energy(&d, &v, 3.0).unwrap();
        assert!((e3.value + 3.63185).abs() < 5e-5);
        let egc = gc_energy(&d, &fixtures::v_gc(), 3.0).unwrap();
        assert!((egc.value + 3.6319).abs() < 1e-4);
        assert!(gc_energy(&d, &v, 0.0).unwrap().value.abs() < 1e-12);
        assert!(matches!(gc_energy(&d, &v, 6.5), Err(Error::MassOutOfRange { .. })));
        assert!(matches!(gc_energy(&d, &v, -0.1), Err(Error::MassOutOfRange { .. })));
    }

    #[test]
    fn two_site_dual() {
        let cfg = SiteConfiguration::coulomb(vec![[0.0; 3], [2.0, 0.0, 0.0]]).unwrap();
        let rho = DensityVector::new(vec![1.0, 1.0]).unwrap();
        let cert = dual_potential(&cfg, &rho, None).unwrap();
        assert!(cert.is_valid());
        assert!((cert.functional_value - 0.5).abs() < 1e-12);
        let v = cert.potential.values();
        assert!(((v[0] + v[1]) - (cert.gc_ground_energy - cert.functional_value)).abs() < 1e-9);
    }

    #[test]
    fn symmetric_dual_on_diamond() {
        let d = fixtures::diamond();
        let rho = DensityVector::half_filling(6);
        let gens = fixtures::diamond_reflections();
        let cert = dual_potential(&d, &rho, Some(&gens)).unwrap();
        assert_eq!(cert.group_order, 4);
        assert!(cert.is_valid(), "{cert:?}");
        let v = cert.potential.values();
        assert!((v[0] - v[1]).abs() < 1e-12);
        assert!((v[2] - v[3]).abs() < 1e-12);
        assert!((v[4] - v[5]).abs() < 1e-12);
        assert!(cert.active_subsets.contains(&occ(&[1, 2])));
        assert!(cert.active_subsets.contains(&occ(&[3, 4, 5, 6])));
    }

    #[test]
    fn raw_dual_on_diamond_is_valid() {
        let d = fixtures::diamond();
        let cert = dual_potential(&d, &DensityVector::half_filling(6), None).unwrap();
        assert!(cert.is_valid());
        assert_eq!(cert.group_order, 1);
    }

    #[test]
    fn bad_symmetries_rejected() {
        let d = fixtures::diamond();
        let rho = DensityVector::half_filling(6);
        let swap_15 = vec![vec![4, 1, 2, 3, 0, 5]];
        assert!(matches!(
            dual_potential(&d, &rho, Some(&swap_15)),
            Err(Error::InvalidSymmetry(_))
        ));
        let not_perm = vec![vec![0, 0, 2, 3, 4, 5]];
        assert!(dual_potential(&d, &rho, Some(&not_perm)).is_err());
        let skew = DensityVector::new(vec![0.6, 0.4, 0.5, 0.5, 0.5, 0.5]).unwrap();
        assert!(dual_potential(&d, &skew, Some(&fixtures::diamond_reflections())).is_err());
    }

    #[test]
    fn group_closure() {
        let d = fixtures::diamond();
        let rho = DensityVector::half_filling(6);
        let g = symmetry_group(&d, &rho, &fixtures::diamond_reflections()).unwrap();
        assert_eq!(g.len(), 4);
    }
}
