//! TOML run configuration.
//!
//! ```toml
//! [geometry]
//! points = [[-0.7, 0.0], [0.7, 0.0, 0.0]]   # 2 or 3 coordinates per site
//! exponent = 1.0                           # optional, Coulomb by default
//! # or instead of `points`:
//! # diamond = { a = 0.7, b = 1.7, h_squared = 0.51 }
//!
//! [potential]
//! values = [-2.1665, -2.1665]
//!
//! [density]
//! values = [0.5, 0.5]          # or: half_filling = true
//! symmetries = [[2, 1]]        # 1-based site permutations, used by `dual --symmetrize`
//! ```
//!
//! Per-command sections: `[certify]`, `[grid]`, `[search]`, `[minimize]`,
//! `[quantum]`, `[verify]`. Site labels in the file are 1-based.

use std::path::Path;

use serde::Deserialize;
use siteconvex::{fixtures, DensityVector, ExternalPotential, Point, SiteConfiguration};

use crate::CliError;

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub geometry: Option<GeometrySection>,
    pub potential: Option<PotentialSection>,
    pub density: Option<DensitySection>,
    pub certify: Option<CertifySection>,
    pub grid: Option<GridSection>,
    pub search: Option<SearchSection>,
    pub minimize: Option<MinimizeSection>,
    pub quantum: Option<QuantumSection>,
    pub verify: Option<VerifySection>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeometrySection {
    pub points: Option<Vec<Vec<f64>>>,
    pub diamond: Option<DiamondSection>,
    pub exponent: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiamondSection {
    pub a: f64,
    pub b: f64,
    pub h: Option<f64>,
    pub h_squared: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PotentialSection {
    pub values: Vec<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DensitySection {
    pub values: Option<Vec<f64>>,
    #[serde(default)]
    pub half_filling: bool,
    #[serde(default)]
    pub symmetries: Vec<Vec<usize>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CertifySection {
    pub n: usize,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSection {
    pub v1_abs: [f64; 2],
    pub v3_abs: [f64; 2],
    pub steps: usize,
    pub fixed: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SearchSection {
    pub sites: usize,
    pub trials: usize,
    pub box_halfwidth: f64,
    pub seed: Option<u64>,
    #[serde(default)]
    pub three_dimensional: bool,
    pub min_separation: Option<f64>,
    /// Sample around the `[geometry]` points instead of a centered box.
    #[serde(default)]
    pub local: bool,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MinimizeSection {
    pub n: usize,
    #[serde(default)]
    pub frozen: Vec<usize>,
    pub max_evaluations: Option<usize>,
    pub initial_step: Option<f64>,
    pub min_step: Option<f64>,
    pub diagonals: Option<bool>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuantumSection {
    pub ell: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerifySection {
    pub cases: Option<usize>,
    pub max_sites: Option<usize>,
    pub seed: Option<u64>,
}

fn line_col(src: &str, offset: usize) -> (usize, usize) {
    let before = &src[..offset.min(src.len())];
    let line = before.matches('\n').count() + 1;
    let col = before.len() - before.rfind('\n').map_or(0, |i| i + 1) + 1;
    (line, col)
}

impl RunConfig {
    pub fn parse(src: &str, origin: &str) -> Result<Self, CliError> {
        toml::from_str(src).map_err(|e| {
            let msg = e.message().trim().to_string();
            match e.span() {
                Some(span) => {
                    let (line, col) = line_col(src, span.start);
                    CliError::input(format!("{origin}:{line}:{col}: {msg}"))
                }
                None => CliError::input(format!("{origin}: {msg}")),
            }
        })
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let src = std::fs::read_to_string(path)
            .map_err(|e| CliError::input(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&src, &path.display().to_string())
    }

    /// Sites from `[geometry]`; `exponent` overrides the file.
    pub fn sites(&self, exponent: Option<f64>) -> Result<SiteConfiguration, CliError> {
        let g = self
            .geometry
            .as_ref()
            .ok_or_else(|| CliError::input("missing [geometry] section"))?;
        let s = exponent.or(g.exponent).unwrap_or(1.0);
        let points: Vec<Point> = match (&g.points, &g.diamond) {
            (Some(pts), None) => pts
                .iter()
                .enumerate()
                .map(|(i, p)| match p.as_slice() {
                    [x, y] => Ok([*x, *y, 0.0]),
                    [x, y, z] => Ok([*x, *y, *z]),
                    _ => Err(CliError::input(format!(
                        "[geometry] point {} has {} coordinates, expected 2 or 3",
                        i + 1,
                        p.len()
                    ))),
                })
                .collect::<Result<_, _>>()?,
            (None, Some(d)) => {
                let h = match (d.h, d.h_squared) {
                    (Some(h), None) => h,
                    (None, Some(h2)) if h2 >= 0.0 => h2.sqrt(),
                    (None, Some(h2)) => {
                        return Err(CliError::input(format!(
                            "[geometry.diamond] h_squared = {h2} is negative"
                        )))
                    }
                    _ => return Err(CliError::input("[geometry.diamond] needs exactly one of h, h_squared")),
                };
                fixtures::diamond_points(d.a, d.b, h)
            }
            _ => return Err(CliError::input("[geometry] needs exactly one of points, diamond")),
        };
        Ok(SiteConfiguration::new(points, s)?)
    }

    pub fn potential(&self, k: usize) -> Result<ExternalPotential, CliError> {
        let p = self
            .potential
            .as_ref()
            .ok_or_else(|| CliError::input("missing [potential] section"))?;
        if p.values.len() != k {
            return Err(CliError::input(format!(
                "[potential] has {} values for {} sites",
                p.values.len(),
                k
            )));
        }
        Ok(ExternalPotential::new(p.values.clone())?)
    }

    pub fn density(&self, k: usize) -> Result<DensityVector, CliError> {
        let d = self
            .density
            .as_ref()
            .ok_or_else(|| CliError::input("missing [density] section"))?;
        match (&d.values, d.half_filling) {
            (Some(v), false) => {
                if v.len() != k {
                    return Err(CliError::input(format!(
                        "[density] has {} values for {} sites",
                        v.len(),
                        k
                    )));
                }
                Ok(DensityVector::new(v.clone())?)
            }
            (None, true) => Ok(DensityVector::half_filling(k)),
            _ => Err(CliError::input(
                "[density] needs exactly one of values, half_filling = true",
            )),
        }
    }

    /// Declared symmetries converted to 0-based permutations.
    pub fn symmetries(&self) -> Result<Vec<Vec<usize>>, CliError> {
        let perms = self.density.as_ref().map(|d| d.symmetries.as_slice()).unwrap_or(&[]);
        perms
            .iter()
            .map(|p| {
                p.iter()
                    .map(|&l| {
                        l.checked_sub(1)
                            .ok_or_else(|| CliError::input("[density] symmetries use 1-based labels"))
                    })
                    .collect()
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_error_has_line_number() {
        let err = RunConfig::parse("[geometry]\npoints = 3x\n", "x.toml").unwrap_err();
        assert_eq!(err.code, 2);
        assert!(err.message.starts_with("x.toml:2:"), "{}", err.message);
    }

    #[test]
    fn unknown_field_has_line_number() {
        let err = RunConfig::parse("[potential]\nvalues = [1.0]\n\n[grid]\nstep = 3\n", "c").unwrap_err();
        assert!(err.message.starts_with("c:5:"), "{}", err.message);
    }

    #[test]
    fn planar_points_and_exponent_override() {
        let c = RunConfig::parse("[geometry]\npoints = [[0, 0], [2, 0, 0]]\nexponent = 2.0\n", "c").unwrap();
        assert_eq!(c.sites(None).unwrap().interaction(0, 1), 0.25);
        assert_eq!(c.sites(Some(1.0)).unwrap().interaction(0, 1), 0.5);
    }

    #[test]
    fn diamond_parameters() {
        let c = RunConfig::parse("[geometry]\ndiamond = { a = 0.7, b = 1.7, h_squared = 0.51 }\n", "c").unwrap();
        assert_eq!(c.sites(None).unwrap(), fixtures::diamond());
        let both = RunConfig::parse(
            "[geometry]\ndiamond = { a = 0.7, b = 1.7, h = 0.7, h_squared = 0.51 }\n",
            "c",
        );
        assert_eq!(both.unwrap().sites(None).unwrap_err().code, 2);
    }

    #[test]
    fn geometry_sources_are_exclusive() {
        let c = RunConfig::parse(
            "[geometry]\npoints = [[0, 0], [1, 0]]\ndiamond = { a = 0.7, b = 1.7, h = 0.7 }\n",
            "c",
        )
        .unwrap();
        assert_eq!(c.sites(None).unwrap_err().code, 2);
    }

    #[test]
    fn density_errors() {
        let c = RunConfig::parse("[density]\nvalues = [1.5, 0.0]\n", "c").unwrap();
        assert_eq!(c.density(2).unwrap_err().code, 3);
        let c = RunConfig::parse("[density]\nvalues = [0.5]\n", "c").unwrap();
        assert_eq!(c.density(2).unwrap_err().code, 2);
        let c = RunConfig::parse("[density]\nhalf_filling = true\nsymmetries = [[2, 1]]\n", "c").unwrap();
        assert_eq!(c.density(2).unwrap().values(), &[0.5, 0.5]);
        assert_eq!(c.symmetries().unwrap(), vec![vec![1, 0]]);
    }

    #[test]
    fn missing_potential() {
        let c = RunConfig::parse("[geometry]\npoints = [[0, 0], [1, 0]]\n", "c").unwrap();
        let err = c.potential(2).unwrap_err();
        assert_eq!(err.code, 2);
        assert!(err.message.contains("[potential]"));
    }
}
