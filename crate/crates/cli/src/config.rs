//! Run configuration: command-line flags layered over an optional JSON file.

use std::f64::consts::PI;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use boundary_eos::spectrum::{BoundaryCondition, BoundaryPair, BoxSystem};
use boundary_eos::statmech::{Box3System, Ensemble, Statistics, VdwParams};
use clap::{Args, ValueEnum};
use serde::Deserialize;

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PairKind {
    Dd,
    Dn,
    Nn,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StatsKind {
    Mb,
    Be,
    Fd,
}

impl StatsKind {
    fn statistics(self) -> Statistics {
        match self {
            StatsKind::Mb => Statistics::MaxwellBoltzmann,
            StatsKind::Be => Statistics::BoseEinstein,
            StatsKind::Fd => Statistics::FermiDirac,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
pub enum SweepVar {
    #[serde(rename = "beta")]
    Beta,
    #[serde(rename = "l")]
    Length,
    #[serde(rename = "L_theta")]
    LTheta,
    #[serde(rename = "N")]
    Particles,
    #[serde(rename = "x")]
    Degeneracy,
}

impl SweepVar {
    pub fn name(self) -> &'static str {
        match self {
            SweepVar::Beta => "beta",
            SweepVar::Length => "l",
            SweepVar::LTheta => "L_theta",
            SweepVar::Particles => "N",
            SweepVar::Degeneracy => "x",
        }
    }
}

impl FromStr for SweepVar {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "beta" => Ok(SweepVar::Beta),
            "l" => Ok(SweepVar::Length),
            "L_theta" => Ok(SweepVar::LTheta),
            "N" => Ok(SweepVar::Particles),
            "x" => Ok(SweepVar::Degeneracy),
            other => Err(format!(
                "sweep variable must be one of beta, l, L_theta, N, x; got {other:?}"
            )),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scale {
    Log,
    Lin,
}

#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepPlan {
    pub var: SweepVar,
    pub from: f64,
    pub to: f64,
    pub points: usize,
    pub scale: Scale,
    /// When sweeping `l`, scale `N` along with the extent.
    #[serde(default)]
    pub hold_density: bool,
}

impl SweepPlan {
    pub fn validate(&self) -> Result<(), CliError> {
        if self.points < 2 {
            return Err(CliError::Config(format!(
                "sweep points must be at least 2, got {}",
                self.points
            )));
        }
        if !(self.from.is_finite() && self.to.is_finite()) {
            return Err(CliError::Config("sweep range must be finite".into()));
        }
        if self.scale == Scale::Log && (self.from <= 0.0 || self.to <= 0.0) {
            return Err(CliError::Config(
                "a log sweep needs positive endpoints".into(),
            ));
        }
        Ok(())
    }

    /// Grid points with both endpoints reproduced exactly.
    pub fn grid(&self) -> Vec<f64> {
        let last = self.points - 1;
        (0..self.points)
            .map(|i| {
                if i == 0 {
                    return self.from;
                }
                if i == last {
                    return self.to;
                }
                let t = i as f64 / last as f64;
                match self.scale {
                    Scale::Lin => self.from + (self.to - self.from) * t,
                    Scale::Log => (self.from.ln() + (self.to.ln() - self.from.ln()) * t).exp(),
                }
            })
            .collect()
    }
}

/// Parses `var=NAME,from=F,to=F,points=I,scale=log|lin[,hold=density]`.
pub fn parse_sweep(s: &str) -> Result<SweepPlan, String> {
    let (mut var, mut from, mut to, mut points, mut scale, mut hold) =
        (None, None, None, None, Scale::Lin, false);
    for part in s.split(',').filter(|p| !p.is_empty()) {
        let (key, value) = part
            .split_once('=')
            .ok_or_else(|| format!("sweep entry {part:?} is not key=value"))?;
        let number = |v: &str| v.parse::<f64>().map_err(|e| format!("sweep {key}: {e}"));
        match key.trim() {
            "var" => var = Some(value.parse::<SweepVar>()?),
            "from" => from = Some(number(value)?),
            "to" => to = Some(number(value)?),
            "points" => {
                points = Some(
                    value
                        .parse::<usize>()
                        .map_err(|e| format!("sweep points: {e}"))?,
                )
            }
            "scale" => {
                scale = match value {
                    "log" => Scale::Log,
                    "lin" => Scale::Lin,
                    other => return Err(format!("sweep scale must be log or lin, got {other:?}")),
                }
            }
            "hold" => {
                hold = match value {
                    "density" => true,
                    "none" => false,
                    other => {
                        return Err(format!("sweep hold must be density or none, got {other:?}"))
                    }
                }
            }
            other => return Err(format!("unknown sweep key {other:?}")),
        }
    }
    Ok(SweepPlan {
        var: var.ok_or("sweep needs var=")?,
        from: from.ok_or("sweep needs from=")?,
        to: to.ok_or("sweep needs to=")?,
        points: points.ok_or("sweep needs points=")?,
        scale,
        hold_density: hold,
    })
}

/// Parses `nu=F,sigma=F`.
pub fn parse_vdw(s: &str) -> Result<VdwParams, String> {
    let (mut nu, mut sigma) = (None, None);
    for part in s.split(',').filter(|p| !p.is_empty()) {
        let (key, value) = part
            .split_once('=')
            .ok_or_else(|| format!("vdw entry {part:?} is not key=value"))?;
        let v = value
            .parse::<f64>()
            .map_err(|e| format!("vdw {key}: {e}"))?;
        match key.trim() {
            "nu" => nu = Some(v),
            "sigma" => sigma = Some(v),
            other => return Err(format!("unknown vdw key {other:?}")),
        }
    }
    Ok(VdwParams {
        nu_vdw: nu.ok_or("vdw needs nu=")?,
        sigma_vdw: sigma.ok_or("vdw needs sigma=")?,
    })
}

/// Flags shared by every subcommand.
#[derive(Debug, Clone, Default, Args)]
pub struct CommonArgs {
    /// JSON configuration file; flags take precedence over its values
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[arg(long, global = true)]
    pub hbar: Option<f64>,
    #[arg(long, global = true)]
    pub mass: Option<f64>,
    /// Box length (one-dimensional box)
    #[arg(long, global = true)]
    pub length: Option<f64>,
    /// Box edges; giving all three selects the three-dimensional box
    #[arg(long, global = true)]
    pub lx: Option<f64>,
    #[arg(long, global = true)]
    pub ly: Option<f64>,
    #[arg(long, global = true)]
    pub lz: Option<f64>,
    #[arg(long, value_enum, global = true)]
    pub pair: Option<PairKind>,
    /// Robin boundary length L_theta (0 is Dirichlet, inf is Neumann)
    #[arg(
        long,
        global = true,
        allow_hyphen_values = true,
        conflicts_with = "lambda"
    )]
    pub ltheta: Option<f64>,
    /// Inverse boundary length 1/L_theta
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub lambda: Option<f64>,
    #[arg(long, value_enum, global = true)]
    pub stats: Option<StatsKind>,
    #[arg(long, global = true)]
    pub particles: Option<f64>,
    #[arg(long, global = true)]
    pub beta: Option<f64>,
    #[arg(long, value_enum, global = true)]
    pub format: Option<Format>,
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Significant digits, 6 to 17
    #[arg(long, global = true)]
    pub precision: Option<usize>,
    /// Add the exact-spectrum pressure next to the closed form
    #[arg(long, global = true)]
    pub compare_oracle: bool,
    /// Van der Waals comparison, as nu=F,sigma=F
    #[arg(long, global = true, value_parser = parse_vdw)]
    pub vdw: Option<VdwParams>,
    /// Sweep, as var=NAME,from=F,to=F,points=I,scale=log|lin[,hold=density]
    #[arg(long, global = true, value_parser = parse_sweep, allow_hyphen_values = true)]
    pub sweep: Option<SweepPlan>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileUnits {
    hbar: Option<f64>,
    m: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileGeometry {
    l: Option<f64>,
    lx: Option<f64>,
    ly: Option<f64>,
    lz: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileBoundary {
    pair: Option<PairKind>,
    #[serde(rename = "L_theta")]
    l_theta: Option<f64>,
    lambda: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileEnsemble {
    statistics: Option<StatsKind>,
    #[serde(rename = "N")]
    particles: Option<f64>,
    beta: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileOutput {
    format: Option<Format>,
    path: Option<PathBuf>,
    precision: Option<usize>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileVdw {
    nu: f64,
    sigma: f64,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    #[serde(default)]
    units: FileUnits,
    #[serde(default)]
    geometry: FileGeometry,
    #[serde(default)]
    boundary: FileBoundary,
    #[serde(default)]
    ensemble: FileEnsemble,
    sweep: Option<SweepPlan>,
    #[serde(default)]
    output: FileOutput,
    compare_oracle: Option<bool>,
    vdw: Option<FileVdw>,
}

fn read_file_config(path: &Path) -> Result<FileConfig, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("cannot read config {}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| CliError::Config(format!("config {}: {e}", path.display())))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum WallInput {
    LTheta(f64),
    Lambda(f64),
}

/// Fully resolved settings.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub hbar: f64,
    pub mass: f64,
    pub length: f64,
    pub lengths3: Option<[f64; 3]>,
    pub pair: PairKind,
    pub wall: Option<WallInput>,
    pub stats: StatsKind,
    pub particles: f64,
    pub beta: f64,
    pub sweep: Option<SweepPlan>,
    pub format: Format,
    pub out: Option<PathBuf>,
    pub precision: usize,
    pub compare_oracle: bool,
    pub vdw: Option<VdwParams>,
}

pub const DEFAULT_PRECISION: usize = 12;

impl RunConfig {
    pub fn resolve(args: &CommonArgs) -> Result<Self, CliError> {
        let file = match &args.config {
            Some(path) => read_file_config(path)?,
            None => FileConfig::default(),
        };
        let lx = args.lx.or(file.geometry.lx);
        let ly = args.ly.or(file.geometry.ly);
        let lz = args.lz.or(file.geometry.lz);
        let lengths3 = match (lx, ly, lz) {
            (Some(x), Some(y), Some(z)) => Some([x, y, z]),
            (None, None, None) => None,
            _ => {
                return Err(CliError::Config(
                    "three-dimensional box needs all of --lx, --ly, --lz".into(),
                ))
            }
        };
        let flag_wall = args
            .ltheta
            .map(WallInput::LTheta)
            .or(args.lambda.map(WallInput::Lambda));
        let file_wall = file
            .boundary
            .l_theta
            .map(WallInput::LTheta)
            .or(file.boundary.lambda.map(WallInput::Lambda));
        let precision = args
            .precision
            .or(file.output.precision)
            .unwrap_or(DEFAULT_PRECISION);
        if !(6..=17).contains(&precision) {
            return Err(CliError::Config(format!(
                "precision must be within 6..=17, got {precision}"
            )));
        }
        let config = RunConfig {
            hbar: args.hbar.or(file.units.hbar).unwrap_or(1.0),
            mass: args.mass.or(file.units.m).unwrap_or(1.0),
            length: args.length.or(file.geometry.l).or(lx).unwrap_or(1.0),
            lengths3,
            pair: args.pair.or(file.boundary.pair).unwrap_or(PairKind::Dn),
            wall: flag_wall.or(file_wall),
            stats: args
                .stats
                .or(file.ensemble.statistics)
                .unwrap_or(StatsKind::Mb),
            particles: args.particles.or(file.ensemble.particles).unwrap_or(1.0),
            beta: args.beta.or(file.ensemble.beta).unwrap_or(0.01),
            sweep: args.sweep.or(file.sweep),
            format: args.format.or(file.output.format).unwrap_or(Format::Csv),
            out: args.out.clone().or(file.output.path),
            precision,
            compare_oracle: args.compare_oracle || file.compare_oracle.unwrap_or(false),
            vdw: args.vdw.or(file.vdw.map(|v| VdwParams {
                nu_vdw: v.nu,
                sigma_vdw: v.sigma,
            })),
        };
        if let Some(sweep) = &config.sweep {
            sweep.validate()?;
        }
        Ok(config)
    }

    pub fn wall(&self) -> Result<BoundaryCondition, CliError> {
        Ok(match self.wall {
            None => BoundaryCondition::NEUMANN,
            Some(WallInput::LTheta(l)) => BoundaryCondition::from_l_theta(l)?,
            Some(WallInput::Lambda(lambda)) => BoundaryCondition::robin(lambda)?,
        })
    }

    pub fn boundary_pair(&self) -> Result<BoundaryPair, CliError> {
        Ok(match self.pair {
            PairKind::Dd => BoundaryPair::DirichletDirichlet,
            PairKind::Dn => BoundaryPair::DirichletRobin(self.wall()?),
            PairKind::Nn => BoundaryPair::SymmetricRobin(self.wall()?),
        })
    }

    pub fn system(&self) -> Result<BoxSystem, CliError> {
        Ok(BoxSystem::new(
            self.length,
            self.mass,
            self.hbar,
            self.boundary_pair()?,
        )?)
    }

    pub fn box3(&self) -> Result<Option<Box3System>, CliError> {
        let Some([lx, ly, lz]) = self.lengths3 else {
            return Ok(None);
        };
        if self.pair != PairKind::Nn {
            return Err(CliError::Config(
                "the three-dimensional box uses --pair nn".into(),
            ));
        }
        Ok(Some(Box3System::new(
            lx,
            ly,
            lz,
            self.mass,
            self.hbar,
            self.wall()?,
        )?))
    }

    pub fn statistics(&self) -> Statistics {
        self.stats.statistics()
    }

    pub fn ensemble(&self) -> Result<Ensemble, CliError> {
        Ok(Ensemble::new(self.statistics(), self.particles, self.beta)?)
    }

    /// Copy with the sweep variable set to `value`.
    pub fn at(&self, var: SweepVar, value: f64, hold_density: bool) -> RunConfig {
        let mut c = self.clone();
        match var {
            SweepVar::Beta => c.beta = value,
            SweepVar::Particles => c.particles = value,
            SweepVar::LTheta => c.wall = Some(WallInput::LTheta(value)),
            SweepVar::Length => {
                let factor = value / self.length;
                c.length = value;
                if let Some(lengths) = self.lengths3 {
                    c.lengths3 = Some(lengths.map(|l| l * factor));
                    if hold_density {
                        c.particles = self.particles * factor.powi(3);
                    }
                } else if hold_density {
                    c.particles = self.particles * factor;
                }
            }
            SweepVar::Degeneracy => {
                // x = κβN²/l² is reached by adjusting β
                let kappa = self.hbar * self.hbar * PI * PI / (2.0 * self.mass);
                c.beta =
                    value * self.length * self.length / (kappa * self.particles * self.particles);
            }
        }
        c
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sweep_parsing() {
        let s = parse_sweep("var=beta,from=0.001,to=1,points=4,scale=log").unwrap();
        assert_eq!(s.var, SweepVar::Beta);
        let g = s.grid();
        assert_eq!(g[0], 0.001);
        assert_eq!(g[3], 1.0);
        assert!((g[1] - 0.01).abs() < 1e-15);
        assert!(parse_sweep("var=T,from=1,to=2,points=3").is_err());
        assert!(parse_sweep("var=l,from=1,to=2").is_err());
        let hold = parse_sweep("var=l,from=1,to=100,points=3,scale=log,hold=density").unwrap();
        assert!(hold.hold_density);
        let lin = parse_sweep("var=N,from=1,to=3,points=3,scale=lin").unwrap();
        assert_eq!(lin.grid(), vec![1.0, 2.0, 3.0]);
    }

    #[test]
    fn vdw_parsing() {
        let v = parse_vdw("nu=0.1,sigma=0.2").unwrap();
        assert_eq!((v.nu_vdw, v.sigma_vdw), (0.1, 0.2));
        assert!(parse_vdw("nu=0.1").is_err());
    }

    #[test]
    fn degeneracy_sweep_sets_beta() {
        let args = CommonArgs {
            particles: Some(2.0),
            ..Default::default()
        };
        let c = RunConfig::resolve(&args).unwrap();
        let at = c.at(SweepVar::Degeneracy, 3.0, false);
        let kappa = PI * PI / 2.0;
        assert!((kappa * at.beta * 4.0 - 3.0).abs() < 1e-14);
    }
}
