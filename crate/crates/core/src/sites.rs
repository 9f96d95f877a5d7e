//! Site geometry, occupations, and the elementary energy and density
//! formulas shared by every solver in the crate.
//!
//! A configuration of classical electrons is a subset `I` of the `K` sites,
//! stored as a bitmask. Its interaction energy is the sum of
//! `|R_j - R_k|^(-s)` over unordered pairs of occupied sites, so the empty
//! set and singletons cost nothing.

use std::fmt;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest supported site count; occupations are `u32` bitmasks and the
/// grand-canonical programs enumerate all `2^K` subsets.
pub const MAX_SITES: usize = 20;

const COINCIDENCE_TOL: f64 = 1e-12;
const DENSITY_TOL: f64 = 1e-12;
const NORMALIZATION_TOL: f64 = 1e-10;

pub type Point = [f64; 3];

fn euclidean(a: &Point, b: &Point) -> f64 {
    let dx = a[0] - b[0];
    let dy = a[1] - b[1];
    let dz = a[2] - b[2];
    (dx * dx + dy * dy + dz * dz).sqrt()
}

/// Symmetric matrix of pairwise distances with a zero diagonal.
pub fn pair_distance_matrix(points: &[Point]) -> Result<Vec<Vec<f64>>> {
    let k = points.len();
    let mut d = vec![vec![0.0; k]; k];
    for i in 0..k {
        for j in i + 1..k {
            let r = euclidean(&points[i], &points[j]);
            if !(r > COINCIDENCE_TOL) {
                return Err(Error::CoincidentSites { i, j, distance: r });
            }
            d[i][j] = r;
            d[j][i] = r;
        }
    }
    Ok(d)
}

#[derive(Serialize, Deserialize)]
struct RawSites {
    points: Vec<Point>,
    #[serde(default = "coulomb_exponent")]
    exponent: f64,
}

fn coulomb_exponent() -> f64 {
    1.0
}

/// `K` distinct points in space together with the Riesz exponent `s` of the
/// pair interaction `|r|^(-s)` (`s = 1` is Coulomb).
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(try_from = "RawSites", into = "RawSites")]
pub struct SiteConfiguration {
    points: Vec<Point>,
    exponent: f64,
    distances: Vec<Vec<f64>>,
    kernel: Vec<Vec<f64>>,
    subset_energies: OnceLock<Vec<f64>>,
}

impl PartialEq for SiteConfiguration {
    fn eq(&self, other: &Self) -> bool {
        self.points == other.points && self.exponent == other.exponent
    }
}

impl TryFrom<RawSites> for SiteConfiguration {
    type Error = Error;

    fn try_from(raw: RawSites) -> Result<Self> {
        Self::new(raw.points, raw.exponent)
    }
}

impl From<SiteConfiguration> for RawSites {
    fn from(config: SiteConfiguration) -> Self {
        RawSites {
            points: config.points,
            exponent: config.exponent,
        }
    }
}

impl SiteConfiguration {
    pub fn new(points: Vec<Point>, exponent: f64) -> Result<Self> {
        if points.len() < 2 || points.len() > MAX_SITES {
            return Err(Error::SiteCount(points.len()));
        }
        if !(exponent.is_finite() && exponent > 0.0) {
            return Err(Error::InvalidExponent(exponent));
        }
        if points.iter().flatten().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite("site coordinates"));
        }
        let distances = pair_distance_matrix(&points)?;
        let kernel = distances
            .iter()
            .enumerate()
            .map(|(i, row)| {
                row.iter()
                    .enumerate()
                    .map(|(j, &r)| if i == j { 0.0 } else { r.powf(-exponent) })
                    .collect()
            })
            .collect();
        Ok(Self {
            points,
            exponent,
            distances,
            kernel,
            subset_energies: OnceLock::new(),
        })
    }

    pub fn coulomb(points: Vec<Point>) -> Result<Self> {
        Self::new(points, 1.0)
    }

    pub fn with_exponent(&self, exponent: f64) -> Result<Self> {
        Self::new(self.points.clone(), exponent)
    }

    /// Same geometry with every coordinate multiplied by `t`.
    pub fn scaled(&self, t: f64) -> Result<Self> {
        let points = self.points.iter().map(|p| [p[0] * t, p[1] * t, p[2] * t]).collect();
        Self::new(points, self.exponent)
    }

    /// Relabels sites so that new site `i` is old site `perm[i]`.
    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        if perm.len() != self.len() {
            return Err(Error::LengthMismatch {
                what: "permutation",
                expected: self.len(),
                found: perm.len(),
            });
        }
        let points = perm.iter().map(|&p| self.points[p]).collect();
        Self::new(points, self.exponent)
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn exponent(&self) -> f64 {
        self.exponent
    }

    pub fn distance(&self, i: usize, j: usize) -> f64 {
        self.distances[i][j]
    }

    pub fn pair_distance_matrix(&self) -> &[Vec<f64>] {
        &self.distances
    }

    /// Pair interaction `|R_i - R_j|^(-s)`; zero on the diagonal.
    pub fn interaction(&self, i: usize, j: usize) -> f64 {
        self.kernel[i][j]
    }

    /// Number of subsets, `2^K`.
    pub fn subset_count(&self) -> usize {
        1usize << self.len()
    }

    /// Interaction energy `c_I` of every subset, indexed by mask.
    ///
    /// Built once per configuration by peeling off the lowest occupied site,
    /// `c_I = c_{I \ {j}} + sum_{k in I \ {j}} w_jk`.
    pub fn subset_energies(&self) -> &[f64] {
        self.subset_energies.get_or_init(|| {
            let n = self.subset_count();
            let mut table = vec![0.0; n];
            for mask in 1..n {
                let low = mask.trailing_zeros() as usize;
                let rest = mask & (mask - 1);
                let row = &self.kernel[low];
                let mut e = table[rest];
                let mut bits = rest;
                while bits != 0 {
                    let j = bits.trailing_zeros() as usize;
                    e += row[j];
                    bits &= bits - 1;
                }
                table[mask] = e;
            }
            table
        })
    }

    pub(crate) fn check_occupation(&self, occ: Occupation) -> Result<()> {
        if (occ.mask() as usize) >= self.subset_count() {
            return Err(Error::MaskOutOfRange {
                mask: occ.mask(),
                k: self.len(),
            });
        }
        Ok(())
    }
}

/// A set of occupied sites encoded as a bitmask (bit `k` is site `k`).
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Occupation(u32);

impl Occupation {
    pub const EMPTY: Occupation = Occupation(0);

    pub const fn from_mask(mask: u32) -> Self {
        Occupation(mask)
    }

    /// Checked constructor for a mask over `k` sites.
    pub fn new(mask: u32, k: usize) -> Result<Self> {
        if k > MAX_SITES || (mask as u64) >= (1u64 << k) {
            return Err(Error::MaskOutOfRange { mask, k });
        }
        Ok(Occupation(mask))
    }

    /// Occupation from zero-based site indices.
    pub fn from_sites<I: IntoIterator<Item = usize>>(sites: I) -> Self {
        Occupation(sites.into_iter().fold(0, |m, s| m | (1 << s)))
    }

    pub fn mask(self) -> u32 {
        self.0
    }

    pub fn cardinality(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn contains(self, site: usize) -> bool {
        site < 32 && self.0 >> site & 1 == 1
    }

    /// Zero-based occupied sites in increasing order.
    pub fn sites(self) -> impl Iterator<Item = usize> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                None
            } else {
                let s = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(s)
            }
        })
    }

    /// One-based site labels, the way configurations are usually written.
    pub fn labels(self) -> Vec<usize> {
        self.sites().map(|s| s + 1).collect()
    }
}

impl fmt::Display for Occupation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0 == 0 {
            return write!(f, "{{}}");
        }
        let labels: Vec<String> = self.labels().iter().map(|l| l.to_string()).collect();
        write!(f, "{{{}}}", labels.join(","))
    }
}

/// Masks over `k` sites with exactly `n` bits set, ascending (Gosper's hack).
pub(crate) fn masks_with_cardinality(k: usize, n: usize) -> impl Iterator<Item = u32> {
    let limit = 1u64 << k;
    let mut next = if n > k {
        limit
    } else if n == 0 {
        0
    } else {
        (1u64 << n) - 1
    };
    let mut done = n > k;
    std::iter::from_fn(move || {
        if done || next >= limit {
            return None;
        }
        let current = next;
        if current == 0 {
            done = true;
        } else {
            let c = current & current.wrapping_neg();
            let r = current + c;
            next = (((r ^ current) >> 2) / c) | r;
        }
        Some(current as u32)
    })
}

/// All subsets of `k` sites in ascending mask order, or only those of
/// cardinality `n` when given.
pub fn enumerate_occupations(k: usize, n: Option<usize>) -> Result<Vec<Occupation>> {
    if k > MAX_SITES {
        return Err(Error::SiteCount(k));
    }
    match n {
        None => Ok((0..1u32 << k).map(Occupation).collect()),
        Some(n) if n > k => Err(Error::CardinalityOutOfRange { n, k }),
        Some(n) => Ok(masks_with_cardinality(k, n).map(Occupation).collect()),
    }
}

/// Interaction energy `c_I` by a direct sum over occupied pairs.
pub fn configuration_energy(config: &SiteConfiguration, occ: Occupation) -> Result<f64> {
    config.check_occupation(occ)?;
    let sites: Vec<usize> = occ.sites().collect();
    let mut total = 0.0;
    for (a, &i) in sites.iter().enumerate() {
        for &j in &sites[a + 1..] {
            total += config.interaction(i, j);
        }
    }
    Ok(total)
}

/// Per-site external potential values `v_k` in Hartree.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct ExternalPotential(Vec<f64>);

impl TryFrom<Vec<f64>> for ExternalPotential {
    type Error = Error;

    fn try_from(values: Vec<f64>) -> Result<Self> {
        Self::new(values)
    }
}

impl From<ExternalPotential> for Vec<f64> {
    fn from(v: ExternalPotential) -> Self {
        v.0
    }
}

impl ExternalPotential {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("external potential"));
        }
        Ok(Self(values))
    }

    pub fn zero(k: usize) -> Self {
        Self(vec![0.0; k])
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `V + c` on every site.
    pub fn shifted(&self, c: f64) -> Self {
        Self(self.0.iter().map(|v| v + c).collect())
    }

    /// `sum_{i in I} v_i`.
    pub fn occupied_sum(&self, occ: Occupation) -> f64 {
        occ.sites().map(|s| self.0[s]).sum()
    }

    pub(crate) fn check_sites(&self, k: usize) -> Result<()> {
        if self.0.len() != k {
            return Err(Error::LengthMismatch {
                what: "external potential",
                expected: k,
                found: self.0.len(),
            });
        }
        Ok(())
    }
}

/// Per-site occupation probabilities `rho_k` in `[0, 1]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct DensityVector(Vec<f64>);

impl TryFrom<Vec<f64>> for DensityVector {
    type Error = Error;

    fn try_from(values: Vec<f64>) -> Result<Self> {
        Self::new(values)
    }
}

impl From<DensityVector> for Vec<f64> {
    fn from(rho: DensityVector) -> Self {
        rho.0
    }
}

impl DensityVector {
    /// Values within `1e-12` outside `[0, 1]` are clamped; anything further
    /// out is infeasible (the functionals are `+inf` there).
    pub fn new(values: Vec<f64>) -> Result<Self> {
        let mut rho = values;
        for (k, r) in rho.iter_mut().enumerate() {
            if !r.is_finite() {
                return Err(Error::NonFinite("density"));
            }
            if *r < -DENSITY_TOL || *r > 1.0 + DENSITY_TOL {
                return Err(Error::InfeasibleDensity(format!(
                    "rho[{}] = {} is outside [0, 1]",
                    k + 1,
                    r
                )));
            }
            *r = r.clamp(0.0, 1.0);
        }
        Ok(Self(rho))
    }

    /// `rho_k = 1/2` everywhere.
    pub fn half_filling(k: usize) -> Self {
        Self(vec![0.5; k])
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Total mass `sum_k rho_k`, the mean electron number.
    pub fn mass(&self) -> f64 {
        self.0.iter().sum()
    }

    /// `Some(I)` when every entry is 0 or 1 within tolerance.
    pub fn as_occupation(&self) -> Option<Occupation> {
        let mut mask = 0u32;
        for (k, &r) in self.0.iter().enumerate() {
            if r > 1.0 - DENSITY_TOL {
                mask |= 1 << k;
            } else if r >= DENSITY_TOL {
                return None;
            }
        }
        Some(Occupation(mask))
    }

    pub(crate) fn check_sites(&self, k: usize) -> Result<()> {
        if self.0.len() != k {
            return Err(Error::LengthMismatch {
                what: "density",
                expected: k,
                found: self.0.len(),
            });
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnsembleEntry {
    pub occupation: Occupation,
    pub probability: f64,
}

/// A probability distribution over occupations, stored sparsely in
/// ascending mask order with zero-probability entries dropped.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EnsembleState {
    entries: Vec<EnsembleEntry>,
}

impl EnsembleState {
    pub fn new<I: IntoIterator<Item = (Occupation, f64)>>(probs: I) -> Result<Self> {
        let mut entries: Vec<EnsembleEntry> = Vec::new();
        let mut raw: Vec<(Occupation, f64)> = probs.into_iter().collect();
        raw.sort_by_key(|(occ, _)| *occ);
        for (occ, p) in raw {
            if !p.is_finite() {
                return Err(Error::NonFinite("ensemble probability"));
            }
            if p < -DENSITY_TOL {
                return Err(Error::UnnormalizedEnsemble { total: p });
            }
            match entries.last_mut() {
                Some(last) if last.occupation == occ => last.probability += p,
                _ => entries.push(EnsembleEntry {
                    occupation: occ,
                    probability: p,
                }),
            }
        }
        let total: f64 = entries.iter().map(|e| e.probability).sum();
        if (total - 1.0).abs() > NORMALIZATION_TOL {
            return Err(Error::UnnormalizedEnsemble { total });
        }
        entries.retain(|e| e.probability > 0.0);
        Ok(Self { entries })
    }

    /// All probability on a single configuration.
    pub fn deterministic(occ: Occupation) -> Self {
        Self {
            entries: vec![EnsembleEntry {
                occupation: occ,
                probability: 1.0,
            }],
        }
    }

    /// Builds a state from LP weights over `columns`, dropping round-off
    /// negatives and entries below `1e-12`.
    pub(crate) fn from_weights(columns: &[Occupation], weights: &[f64]) -> Result<Self> {
        Self::new(
            columns
                .iter()
                .zip(weights)
                .filter(|(_, &w)| w > 1e-12)
                .map(|(&occ, &w)| (occ, w)),
        )
    }

    pub fn entries(&self) -> &[EnsembleEntry] {
        &self.entries
    }

    pub fn probability(&self, occ: Occupation) -> f64 {
        self.entries
            .binary_search_by_key(&occ, |e| e.occupation)
            .map(|i| self.entries[i].probability)
            .unwrap_or(0.0)
    }

    pub fn support(&self) -> impl Iterator<Item = Occupation> + '_ {
        self.entries.iter().map(|e| e.occupation)
    }

    /// `sum_I p_I #I`.
    pub fn mean_cardinality(&self) -> f64 {
        self.entries
            .iter()
            .map(|e| e.probability * e.occupation.cardinality() as f64)
            .sum()
    }

    /// The common cardinality when the support lies in one particle sector.
    pub fn canonical_cardinality(&self) -> Option<usize> {
        let mut support = self.support();
        let n = support.next()?.cardinality();
        support.all(|o| o.cardinality() == n).then_some(n)
    }
}

/// `sum_I p_I (c_I + sum_{i in I} v_i)`, the potential term omitted when
/// `potential` is `None`.
pub fn ensemble_energy(
    config: &SiteConfiguration,
    ens: &EnsembleState,
    potential: Option<&ExternalPotential>,
) -> Result<f64> {
    if let Some(v) = potential {
        v.check_sites(config.len())?;
    }
    let mut total = 0.0;
    for e in ens.entries() {
        let mut c = configuration_energy(config, e.occupation)?;
        if let Some(v) = potential {
            c += v.occupied_sum(e.occupation);
        }
        total += e.probability * c;
    }
    Ok(total)
}

/// One-body density `rho_k = sum_{I containing k} p_I`.
pub fn ensemble_density(ens: &EnsembleState, k: usize) -> Result<DensityVector> {
    let mut rho = vec![0.0; k];
    for e in ens.entries() {
        Occupation::new(e.occupation.mask(), k)?;
        for s in e.occupation.sites() {
            rho[s] += e.probability;
        }
    }
    DensityVector::new(rho)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn occ(labels: &[usize]) -> Occupation {
        Occupation::from_sites(labels.iter().map(|l| l - 1))
    }

    // Independent reference: distances straight from the coordinates.
    fn pair_sum(points: &[Point], labels: &[usize]) -> f64 {
        let mut e = 0.0;
        for (a, &i) in labels.iter().enumerate() {
            for &j in &labels[a + 1..] {
                let p = points[i - 1];
                let q = points[j - 1];
                e += 1.0 / ((p[0] - q[0]).powi(2) + (p[1] - q[1]).powi(2) + (p[2] - q[2]).powi(2)).sqrt();
            }
        }
        e
    }

    #[test]
    fn diamond_distances() {
        let d = fixtures::diamond();
        assert!((d.distance(0, 1) - 1.4).abs() < 1e-12);
        assert!((d.distance(4, 5) - 2.0 * 0.51f64.sqrt()).abs() < 1e-12);
        assert!((d.distance(4, 5) - 1.428286).abs() < 1e-6);
        for i in 0..6 {
            assert_eq!(d.distance(i, i), 0.0);
            for j in 0..6 {
                assert_eq!(d.distance(i, j), d.distance(j, i));
            }
        }
    }

    #[test]
    fn coincident_sites_rejected() {
        let err = SiteConfiguration::coulomb(vec![[0.0; 3], [1.0, 0.0, 0.0], [0.0; 3]]).unwrap_err();
        assert!(matches!(err, Error::CoincidentSites { i: 0, j: 2, .. }));
        assert!(pair_distance_matrix(&[[0.0; 3], [5e-13, 0.0, 0.0]]).is_err());
    }

    #[test]
    fn site_count_and_exponent_guards() {
        assert!(matches!(
            SiteConfiguration::coulomb(vec![[0.0; 3]]),
            Err(Error::SiteCount(1))
        ));
        let many: Vec<Point> = (0..21).map(|i| [i as f64, 0.0, 0.0]).collect();
        assert!(matches!(SiteConfiguration::coulomb(many), Err(Error::SiteCount(21))));
        assert!(matches!(
            SiteConfiguration::new(vec![[0.0; 3], [1.0, 0.0, 0.0]], 0.0),
            Err(Error::InvalidExponent(_))
        ));
    }

    #[test]
    fn diamond_configuration_energies() {
        let d = fixtures::diamond();
        let pts = d.points().to_vec();
        let c12 = configuration_energy(&d, occ(&[1, 2])).unwrap();
        assert!((c12 - 1.0 / 1.4).abs() < 1e-12);
        assert!((c12 - 0.714286).abs() < 1e-6);
        let c456 = configuration_energy(&d, occ(&[4, 5, 6])).unwrap();
        assert!((c456 - pair_sum(&pts, &[4, 5, 6])).abs() < 1e-12);
        assert!((c456 - 1.784792).abs() < 1e-5);
        // Table row N=3 cross-check: c_456 + v4 + v5 + v6 ~ -3.6129
        let v = fixtures::v_star();
        assert!((c456 + v.occupied_sum(occ(&[4, 5, 6])) + 3.6129).abs() < 5e-5);
        assert_eq!(configuration_energy(&d, Occupation::EMPTY).unwrap(), 0.0);
        assert_eq!(configuration_energy(&d, occ(&[3])).unwrap(), 0.0);
    }

    #[test]
    fn table_matches_direct_sum() {
        let d = fixtures::diamond();
        let table = d.subset_energies();
        for mask in 0..64u32 {
            let direct = configuration_energy(&d, Occupation(mask)).unwrap();
            assert!((table[mask as usize] - direct).abs() < 1e-12);
        }
    }

    #[test]
    fn mask_out_of_range() {
        let d = fixtures::diamond();
        assert!(configuration_energy(&d, Occupation(64)).is_err());
        assert!(Occupation::new(64, 6).is_err());
        assert!(Occupation::new(63, 6).is_ok());
    }

    #[test]
    fn enumeration_order_and_counts() {
        let all = enumerate_occupations(2, None).unwrap();
        assert_eq!(all, vec![Occupation(0), Occupation(1), Occupation(2), Occupation(3)]);
        let triples = enumerate_occupations(6, Some(3)).unwrap();
        assert_eq!(triples.len(), 20);
        assert!(triples.windows(2).all(|w| w[0] < w[1]));
        assert!(triples.iter().all(|o| o.cardinality() == 3));
        assert_eq!(enumerate_occupations(6, Some(0)).unwrap(), vec![Occupation::EMPTY]);
        assert_eq!(enumerate_occupations(6, Some(6)).unwrap(), vec![Occupation(63)]);
        assert!(matches!(
            enumerate_occupations(4, Some(5)),
            Err(Error::CardinalityOutOfRange { n: 5, k: 4 })
        ));
        assert_eq!(enumerate_occupations(20, Some(10)).unwrap().len(), 184_756);
    }

    #[test]
    fn ensemble_energy_and_density() {
        let d = fixtures::diamond();
        let pts = d.points().to_vec();
        let det = EnsembleState::deterministic(occ(&[1, 2, 3]));
        let e = ensemble_energy(&d, &det, None).unwrap();
        assert!((e - pair_sum(&pts, &[1, 2, 3])).abs() < 1e-12);
        assert!((e - 2.130952).abs() < 1e-6);
        assert_eq!(
            ensemble_density(&det, 6).unwrap().values(),
            &[1.0, 1.0, 1.0, 0.0, 0.0, 0.0]
        );

        let half = EnsembleState::new([(occ(&[1, 2]), 0.5), (occ(&[3, 4, 5, 6]), 0.5)]).unwrap();
        let e = ensemble_energy(&d, &half, None).unwrap();
        let expected = 0.5 * pair_sum(&pts, &[1, 2]) + 0.5 * pair_sum(&pts, &[3, 4, 5, 6]);
        assert!((e - expected).abs() < 1e-12);
        let rho = ensemble_density(&half, 6).unwrap();
        assert_eq!(rho.values(), &[0.5; 6]);
        assert!((rho.mass() - 3.0).abs() < 1e-12);

        let empty = EnsembleState::deterministic(Occupation::EMPTY);
        assert_eq!(ensemble_energy(&d, &empty, None).unwrap(), 0.0);
        assert_eq!(ensemble_density(&empty, 6).unwrap().mass(), 0.0);
    }

    #[test]
    fn ensemble_energy_with_potential() {
        let d = fixtures::diamond();
        let v = fixtures::v_star();
        let det = EnsembleState::deterministic(occ(&[1, 2]));
        let e = ensemble_energy(&d, &det, Some(&v)).unwrap();
        assert!((e - (1.0 / 1.4 - 2.0 * 2.1665)).abs() < 1e-12);
        assert!(ensemble_energy(&d, &det, Some(&ExternalPotential::zero(5))).is_err());
    }

    #[test]
    fn unnormalized_ensemble_rejected() {
        let err = EnsembleState::new([(Occupation(1), 0.5), (Occupation(2), 0.4)]).unwrap_err();
        assert!(matches!(err, Error::UnnormalizedEnsemble { .. }));
        assert!(EnsembleState::new([(Occupation(1), 1.5), (Occupation(2), -0.5)]).is_err());
    }

    #[test]
    fn density_bounds() {
        assert!(matches!(
            DensityVector::new(vec![1.2, 0.0]),
            Err(Error::InfeasibleDensity(_))
        ));
        let rho = DensityVector::new(vec![1.0 + 1e-13, -1e-13]).unwrap();
        assert_eq!(rho.values(), &[1.0, 0.0]);
        assert_eq!(rho.as_occupation(), Some(Occupation(1)));
        assert_eq!(DensityVector::half_filling(4).as_occupation(), None);
    }

    #[test]
    fn occupation_display() {
        assert_eq!(occ(&[1, 2, 5]).to_string(), "{1,2,5}");
        assert_eq!(Occupation::EMPTY.to_string(), "{}");
        assert_eq!(occ(&[4, 5, 6]).mask(), 0b111000);
    }

    #[test]
    fn config_serde_round_trip() {
        let d = fixtures::diamond();
        let json = serde_json::to_string(&d).unwrap();
        let back: SiteConfiguration = serde_json::from_str(&json).unwrap();
        assert_eq!(back.points(), d.points());
        assert_eq!(back.exponent(), 1.0);
        let bad = r#"{"points": [[0,0,0],[0,0,0]]}"#;
        assert!(serde_json::from_str::<SiteConfiguration>(bad).is_err());
    }
}
