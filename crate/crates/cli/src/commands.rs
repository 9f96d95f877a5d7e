use std::io::Write;
use std::path::PathBuf;

use serde::Serialize;
use siteconvex::{
    binding_report, certify_counterexample, dual_potential, energy_profile, hardness_grid, lieb_max_binding,
    minimize_hardness, random_geometry_search, scale_system, verify, BindingReport, CertificationReport,
    DualCertificate, EnergyProfile, ExternalPotential, GridSpec, Occupation, PatternSearchOptions, RandomSearchSpec,
    ScaledNuclearSystem,
};

use crate::config::RunConfig;
use crate::output::{text_table, to_json, write_all};
use crate::{Cli, CliError, Command};

/// Everything a command produces, assembled before anything is written.
pub struct Outcome {
    pub stdout: String,
    pub files: Vec<(PathBuf, String)>,
    pub code: u8,
}

impl Outcome {
    fn new(code: u8) -> Self {
        Self {
            stdout: String::new(),
            files: Vec::new(),
            code,
        }
    }

    /// The main result goes to `--out` when given, stdout otherwise.
    fn primary(mut self, out: Option<&PathBuf>, contents: String) -> Self {
        match out {
            Some(p) => self.files.push((p.clone(), contents)),
            None => self.stdout.push_str(&contents),
        }
        self
    }

    pub fn emit(self) -> Result<u8, CliError> {
        write_all(&self.files)?;
        let mut stdout = std::io::stdout().lock();
        stdout
            .write_all(self.stdout.as_bytes())
            .and_then(|_| stdout.flush())
            .map_err(|e| CliError::input(format!("cannot write to stdout: {e}")))?;
        Ok(self.code)
    }
}

pub fn run(cli: &Cli) -> Result<Outcome, CliError> {
    let cfg = match &cli.config {
        Some(p) => RunConfig::load(p)?,
        None if matches!(cli.command, Command::Verify) => RunConfig::default(),
        None => return Err(CliError::input("--config is required for this command")),
    };
    let out = cli.out.as_ref();
    match &cli.command {
        Command::Table => table(cli, &cfg),
        Command::Dual => dual(cli, &cfg),
        Command::Certify { n } => certify(cli, &cfg, *n),
        Command::Grid => grid(cli, &cfg),
        Command::Search => search(cli, &cfg),
        Command::Minimize => minimize(cli, &cfg),
        Command::Quantum { csv } => quantum(cli, &cfg, csv.as_ref()),
        Command::Verify => run_verify(cli, &cfg),
    }
    .map(|(o, json)| match json {
        Some(s) => o.primary(out, s),
        None => o,
    })
}

type Produced = Result<(Outcome, Option<String>), CliError>;

#[derive(Serialize)]
struct TableReport<'a> {
    sites: usize,
    exponent: f64,
    potential: &'a ExternalPotential,
    #[serde(flatten)]
    profile: &'a EnergyProfile,
    configurations: Vec<Vec<String>>,
}

fn labels(occs: &[Occupation]) -> Vec<String> {
    occs.iter().map(|o| o.to_string()).collect()
}

fn table(cli: &Cli, cfg: &RunConfig) -> Produced {
    let sites = cfg.sites(cli.exponent)?;
    let v = cfg.potential(sites.len())?;
    let profile = energy_profile(&sites, &v)?;
    let report = TableReport {
        sites: sites.len(),
        exponent: sites.exponent(),
        potential: &v,
        profile: &profile,
        configurations: profile.minimizers.iter().map(|m| labels(m)).collect(),
    };
    let json = to_json(&report)?;
    let mut o = Outcome::new(0);
    o.stdout = text_table(&profile);
    // The table is for reading; JSON is only written when asked for.
    Ok((o, cli.out.is_some().then_some(json)))
}

#[derive(Serialize)]
struct DualReport<'a> {
    density: Vec<f64>,
    symmetrized: bool,
    #[serde(flatten)]
    certificate: &'a DualCertificate,
    active_configurations: Vec<String>,
    valid: bool,
}

fn dual(cli: &Cli, cfg: &RunConfig) -> Produced {
    let sites = cfg.sites(cli.exponent)?;
    let rho = cfg.density(sites.len())?;
    let perms = if cli.symmetrize {
        let p = cfg.symmetries()?;
        if p.is_empty() {
            return Err(CliError::input("--symmetrize needs [density] symmetries"));
        }
        Some(p)
    } else {
        None
    };
    let cert = dual_potential(&sites, &rho, perms.as_deref())?;
    let report = DualReport {
        density: rho.values().to_vec(),
        symmetrized: perms.is_some(),
        active_configurations: labels(&cert.active_subsets),
        valid: cert.is_valid(),
        certificate: &cert,
    };
    Ok((Outcome::new(0), Some(to_json(&report)?)))
}

#[derive(Serialize)]
struct CertifyOutput<'a> {
    #[serde(flatten)]
    report: &'a CertificationReport,
    configurations: [String; 3],
}

fn certify(cli: &Cli, cfg: &RunConfig, n: Option<usize>) -> Produced {
    let n = n
        .or(cfg.certify.as_ref().map(|c| c.n))
        .ok_or_else(|| CliError::input("particle number missing: pass -n or set [certify] n"))?;
    let sites = cfg.sites(cli.exponent)?;
    let v = cfg.potential(sites.len())?;
    let report = certify_counterexample(&sites, &v, n)?;
    let out = CertifyOutput {
        configurations: [
            report.below.minimizer.to_string(),
            report.at.minimizer.to_string(),
            report.above.minimizer.to_string(),
        ],
        report: &report,
    };
    let code = if report.violated { 0 } else { 1 };
    Ok((Outcome::new(code), Some(to_json(&out)?)))
}

fn grid(cli: &Cli, cfg: &RunConfig) -> Produced {
    let g = cfg
        .grid
        .as_ref()
        .ok_or_else(|| CliError::input("missing [grid] section"))?;
    let sites = cfg.sites(cli.exponent)?;
    let spec = GridSpec {
        v1_abs: (g.v1_abs[0], g.v1_abs[1]),
        v3_abs: (g.v3_abs[0], g.v3_abs[1]),
        steps: g.steps,
        fixed: g.fixed,
    };
    let csv = hardness_grid(&sites, &spec)?.to_csv();
    Ok((Outcome::new(0), Some(csv)))
}

fn search(cli: &Cli, cfg: &RunConfig) -> Produced {
    let s = cfg
        .search
        .as_ref()
        .ok_or_else(|| CliError::input("missing [search] section"))?;
    let seed = cli.seed.or(s.seed).unwrap_or(0);
    let mut spec = RandomSearchSpec::new(s.sites, s.trials, s.box_halfwidth, seed);
    spec.three_dimensional = s.three_dimensional;
    if let Some(m) = s.min_separation {
        spec.min_separation = m;
    }
    if cfg.density.is_some() {
        spec.density = Some(cfg.density(s.sites)?);
    }
    if s.local {
        spec.around = Some(cfg.sites(None)?);
    }
    let hits = random_geometry_search(&spec)?;
    Ok((Outcome::new(0), Some(to_json(&hits)?)))
}

fn minimize(cli: &Cli, cfg: &RunConfig) -> Produced {
    let m = cfg
        .minimize
        .as_ref()
        .ok_or_else(|| CliError::input("missing [minimize] section"))?;
    let sites = cfg.sites(cli.exponent)?;
    let v = cfg.potential(sites.len())?;
    let frozen = m
        .frozen
        .iter()
        .map(|&l| {
            l.checked_sub(1)
                .ok_or_else(|| CliError::input("[minimize] frozen uses 1-based labels"))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let mut opts = PatternSearchOptions::default();
    if let Some(x) = m.max_evaluations {
        opts.max_evaluations = x;
    }
    if let Some(x) = m.initial_step {
        opts.initial_step = x;
    }
    if let Some(x) = m.min_step {
        opts.min_step = x;
    }
    if let Some(x) = m.diagonals {
        opts.diagonals = x;
    }
    if !(opts.initial_step > 0.0 && opts.min_step > 0.0 && opts.min_step <= opts.initial_step) {
        return Err(CliError::input("[minimize] needs 0 < min_step <= initial_step"));
    }
    let r = minimize_hardness(&sites, &v, m.n, &frozen, &opts)?;
    Ok((Outcome::new(0), Some(to_json(&r)?)))
}

#[derive(Serialize)]
struct StepEnergy {
    n: usize,
    energy: f64,
    ell_energy: f64,
}

#[derive(Serialize)]
struct QuantumOutput<'a> {
    ell: f64,
    binding_numbers: Vec<usize>,
    lieb_max_binding: usize,
    system: &'a ScaledNuclearSystem,
    total_charge: f64,
    energies: Vec<StepEnergy>,
    report: &'a BindingReport,
}

fn quantum(cli: &Cli, cfg: &RunConfig, csv: Option<&PathBuf>) -> Produced {
    let q = cfg
        .quantum
        .as_ref()
        .ok_or_else(|| CliError::input("missing [quantum] section"))?;
    let sites = cfg.sites(cli.exponent)?;
    let v = cfg.potential(sites.len())?;
    let system = scale_system(&sites, &v, q.ell)?;
    let report = binding_report(&sites, &v)?;
    let energies = report
        .entries
        .iter()
        .map(|e| StepEnergy {
            n: e.n,
            energy: e.leading_coefficient / q.ell,
            ell_energy: e.leading_coefficient,
        })
        .collect();
    let out = QuantumOutput {
        ell: q.ell,
        binding_numbers: report.binding_numbers(),
        lieb_max_binding: lieb_max_binding(&system),
        total_charge: system.total_charge(),
        system: &system,
        energies,
        report: &report,
    };
    let mut o = Outcome::new(0);
    if let Some(p) = csv {
        o.files.push((p.clone(), report.step_csv()));
    }
    Ok((o, Some(to_json(&out)?)))
}

fn run_verify(cli: &Cli, cfg: &RunConfig) -> Produced {
    let section = cfg.verify.as_ref();
    let cases = section.and_then(|s| s.cases).unwrap_or(200);
    let max_sites = section.and_then(|s| s.max_sites).unwrap_or(8);
    let seed = cli.seed.or(section.and_then(|s| s.seed)).unwrap_or(0);
    if !(2..=siteconvex::MAX_SITES).contains(&max_sites) {
        return Err(CliError::input(format!(
            "[verify] max_sites = {max_sites} outside 2..=20"
        )));
    }
    let suites = vec![
        verify::verify_four_sites(cases, seed)?,
        verify::verify_exchange_identity(cases, seed)?,
        verify::verify_collinear(cases, max_sites, seed)?,
    ];
    let code = if suites.iter().all(|s| s.passed()) { 0 } else { 1 };
    Ok((Outcome::new(code), Some(to_json(&suites)?)))
}
