//! Classical electrons on a finite set of sites: ground-state energies,
//! convexity in the particle number, and the canonical and grand-canonical
//! density functionals, with tools to search for convexity violations.
//!
//! ```
//! use siteconvex::{energy_profile, fixtures};
//!
//! let profile = energy_profile(&fixtures::diamond(), &fixtures::v_star()).unwrap();
//! assert_eq!(profile.violations, vec![3]);
//! ```

pub mod asymptotics;
pub mod canonical;
pub mod error;
pub mod fixtures;
pub mod grandcanonical;
pub mod numfmt;
pub mod search;
pub mod simplex;
pub mod sites;
pub mod verify;

pub use asymptotics::{
    binding_report, leading_order_energy, lieb_max_binding, scale_system, BindingEntry, BindingReport,
    ScaledNuclearSystem,
};
pub use canonical::{
    canonical_energy, canonical_functional, canonical_program, convexity_check, energy_profile, lower_convex_envelope,
    CanonicalEnergy, Energy, EnergyProfile, LpMinimum, CONVEXITY_TOLERANCE, TIE_TOLERANCE,
};
pub use error::{Error, Result};
pub use grandcanonical::{
    dual_potential, gc_energy, gc_energy_program, gc_functional, gc_program, symmetry_group, DualCertificate,
};
pub use search::{
    certify_counterexample, diamond_gap, diamond_sites, gap_at_density, hardness, hardness_grid, minimize_hardness,
    random_geometry_search, CertificationReport, GapSample, GridSpec, HardnessGrid, HardnessMinimum, HardnessResult,
    PatternSearchOptions, RandomSearchSpec, SearchHit,
};
pub use simplex::{
    solve_lp, solve_lp_exact, solve_lp_with, verify_by_vertex_enumeration, ExactLpSolution, LinearProgram, LpSolution,
    LpStatus, SimplexOptions,
};
pub use sites::{
    configuration_energy, ensemble_density, ensemble_energy, enumerate_occupations, pair_distance_matrix,
    DensityVector, EnsembleEntry, EnsembleState, ExternalPotential, Occupation, Point, SiteConfiguration, MAX_SITES,
};
