use boundary_eos::euler_maclaurin::{coefficients, to_f64};
use boundary_eos::polylog::{
    polylog, polylog_duplication_residual, PolylogOrder, SignedExponentArg, Species,
};
use boundary_eos::spectrum::{approx_levels, dn_error_bound, exact_levels, BoundaryPair, Source};
use boundary_eos::statmech::{
    bec_occupancy, delta_pressure, eos_3d, eos_report, eos_report_in_regime, fermi_t0_report,
    pressure_oracle, vdw_pressure, Regime,
};
use rayon::prelude::*;

use crate::config::RunConfig;
use crate::table::{Cell, Table};
use crate::CliError;

/// What `eos` and `sweep` evaluate at each state point.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EosMode {
    /// Closed-form equation of state, regime chosen automatically or forced.
    Standard(Option<Regime>),
    Bec,
    FermiT0,
    DeltaP,
}

pub fn spectrum(cfg: &RunConfig, count: Option<usize>) -> Result<Table, CliError> {
    let count = count.or(cfg.sweep.map(|s| s.points)).unwrap_or(10);
    if count == 0 {
        return Err(CliError::Config("level count must be at least 1".into()));
    }
    let system = cfg.system()?;
    let exact = exact_levels(&system, count)?;
    let approx = approx_levels(&system, count)?;
    let mut table = Table::new(&[
        "n",
        "branch",
        "k_exact",
        "k_approx",
        "E_exact",
        "E_approx",
        "error_bound",
    ]);
    for (e, a) in exact.iter().zip(&approx) {
        let bound = match system.pair() {
            BoundaryPair::DirichletRobin(_) => Cell::Num(dn_error_bound(&system, e.n)?),
            BoundaryPair::DirichletDirichlet => Cell::Num(0.0),
            BoundaryPair::SymmetricRobin(_) if e.n == 1 => Cell::Null,
            BoundaryPair::SymmetricRobin(_) => Cell::Num(
                (system.boundary_ratio() / (std::f64::consts::PI * (e.n - 1) as f64)).abs(),
            ),
        };
        table.push(vec![
            e.n.into(),
            e.branch.as_str().into(),
            e.k.into(),
            a.k.into(),
            e.energy.into(),
            a.energy.into(),
            bound,
        ]);
    }
    Ok(table)
}

fn columns(cfg: &RunConfig, mode: EosMode) -> Vec<&'static str> {
    match mode {
        EosMode::Bec => vec![
            "l",
            "N",
            "beta",
            "lambda",
            "condition_ratio",
            "ground_fraction",
            "mu",
        ],
        EosMode::FermiT0 => vec![
            "source",
            "l",
            "N",
            "pressure",
            "force_correction",
            "lhs",
            "rhs",
            "lhs_over_rhs",
        ],
        EosMode::DeltaP => vec!["l", "N", "beta", "closed_form", "eos_difference", "ratio"],
        EosMode::Standard(_) if cfg.lengths3.is_some() => vec![
            "axis",
            "lx",
            "ly",
            "lz",
            "N",
            "beta",
            "regime",
            "pressure",
            "force_correction",
            "length_correction",
            "lhs",
            "rhs",
            "residual",
            "deviation",
        ],
        EosMode::Standard(_) => {
            let mut c = vec![
                "pair",
                "stats",
                "l",
                "N",
                "beta",
                "regime",
                "pressure",
                "force_correction",
                "length_correction",
                "lhs",
                "rhs",
                "residual",
                "R",
                "mu",
                "deviation",
            ];
            if cfg.compare_oracle {
                c.extend(["p_oracle", "oracle_rel_diff"]);
            }
            if cfg.vdw.is_some() {
                c.push("p_vdw");
            }
            c
        }
    }
}

fn rows(cfg: &RunConfig, mode: EosMode) -> Result<Vec<Vec<Cell>>, CliError> {
    let ensemble = cfg.ensemble()?;
    match mode {
        EosMode::Bec => {
            let system = cfg.system()?;
            let b = bec_occupancy(&system, &ensemble)?;
            Ok(vec![vec![
                cfg.length.into(),
                cfg.particles.into(),
                cfg.beta.into(),
                system.lambda().into(),
                b.condition_ratio.into(),
                b.ground_fraction.into(),
                b.chemical_potential.into(),
            ]])
        }
        EosMode::FermiT0 => {
            let system = cfg.system()?;
            let n = cfg.particles;
            if n.fract() != 0.0 || n < 1.0 {
                return Err(CliError::Config(format!(
                    "the Fermi sea needs a whole particle number, got {n}"
                )));
            }
            [
                (Source::Approximate, "approximate"),
                (Source::Exact, "exact"),
            ]
            .iter()
            .map(|&(source, name)| {
                let r = fermi_t0_report(&system, n as usize, source)?;
                Ok(vec![
                    name.into(),
                    cfg.length.into(),
                    n.into(),
                    r.pressure.into(),
                    r.force_correction.into(),
                    r.lhs.into(),
                    r.rhs.into(),
                    (r.lhs / r.rhs).into(),
                ])
            })
            .collect()
        }
        EosMode::DeltaP => {
            let d = delta_pressure(&cfg.system()?, &ensemble)?;
            Ok(vec![vec![
                cfg.length.into(),
                cfg.particles.into(),
                cfg.beta.into(),
                d.closed_form.into(),
                d.eos_difference.into(),
                (d.eos_difference / d.closed_form).into(),
            ]])
        }
        EosMode::Standard(regime) => {
            if let Some(box3) = cfg.box3()? {
                if regime.is_some_and(|r| r != Regime::HighTemperature) {
                    return Err(CliError::Config(
                        "the three-dimensional box has the high-T form only".into(),
                    ));
                }
                let [lx, ly, lz] = box3.lengths();
                let reports = eos_3d(&box3, &ensemble)?;
                return Ok(reports
                    .iter()
                    .zip(["x", "y", "z"])
                    .map(|(r, axis)| {
                        vec![
                            axis.into(),
                            lx.into(),
                            ly.into(),
                            lz.into(),
                            cfg.particles.into(),
                            cfg.beta.into(),
                            r.regime.as_str().into(),
                            r.pressure.into(),
                            r.force_correction.into(),
                            r.length_correction.into(),
                            r.lhs.into(),
                            r.rhs.into(),
                            r.residual.into(),
                            r.ideal_gas_deviation(&ensemble).into(),
                        ]
                    })
                    .collect());
            }
            let system = cfg.system()?;
            let r = match regime {
                Some(regime) => eos_report_in_regime(&system, &ensemble, regime)?,
                None => eos_report(&system, &ensemble)?,
            };
            let mut row: Vec<Cell> = vec![
                system.pair().short_name().into(),
                cfg.statistics().short_name().into(),
                cfg.length.into(),
                cfg.particles.into(),
                cfg.beta.into(),
                r.regime.as_str().into(),
                r.pressure.into(),
                r.force_correction.into(),
                r.length_correction.into(),
                r.lhs.into(),
                r.rhs.into(),
                r.residual.into(),
                r.r_value.into(),
                r.chemical_potential.into(),
                r.ideal_gas_deviation(&ensemble).into(),
            ];
            if cfg.compare_oracle {
                let oracle = pressure_oracle(&system, &ensemble)?;
                row.push(oracle.into());
                row.push(((r.pressure - oracle) / r.pressure).abs().into());
            }
            if let Some(params) = cfg.vdw {
                row.push(vdw_pressure(cfg.length, cfg.particles, cfg.beta, params)?.into());
            }
            Ok(vec![row])
        }
    }
}

pub fn eos(cfg: &RunConfig, mode: EosMode) -> Result<Table, CliError> {
    let mut table = Table::new(&columns(cfg, mode));
    for row in rows(cfg, mode)? {
        table.push(row);
    }
    Ok(table)
}

/// One block of rows per grid point, computed in parallel and emitted in
/// grid order. A failing point yields a single row carrying its error.
pub fn sweep(cfg: &RunConfig, mode: EosMode) -> Result<Table, CliError> {
    let plan = cfg.sweep.ok_or_else(|| {
        CliError::Config("sweep needs --sweep var=NAME,from=F,to=F,points=I,scale=log|lin".into())
    })?;
    let names = columns(cfg, mode);
    // The swept value gets its own leading column unless the record already has one.
    let own_column = !names.contains(&plan.var.name());
    let mut header = Vec::new();
    if own_column {
        header.push(plan.var.name());
    }
    header.extend(names.iter().copied());
    header.push("error");
    let blocks: Vec<Vec<Vec<Cell>>> = plan
        .grid()
        .par_iter()
        .map(|&value| {
            let point = cfg.at(plan.var, value, plan.hold_density);
            let lead = || {
                if own_column {
                    vec![Cell::Num(value)]
                } else {
                    Vec::new()
                }
            };
            match rows(&point, mode) {
                Ok(rows) => rows
                    .into_iter()
                    .map(|row| {
                        let mut full = lead();
                        full.extend(row);
                        full.push(Cell::Null);
                        full
                    })
                    .collect(),
                Err(e) => {
                    let mut full = lead();
                    full.extend(names.iter().map(|&name| {
                        if name == plan.var.name() {
                            Cell::Num(value)
                        } else {
                            Cell::Null
                        }
                    }));
                    full.push(Cell::Error(e.to_string()));
                    vec![full]
                }
            }
        })
        .collect();
    let mut table = Table::new(&header);
    for row in blocks.into_iter().flatten() {
        table.push(row);
    }
    Ok(table)
}

pub fn coeffs(order: usize) -> Result<Table, CliError> {
    let t = coefficients(order)?;
    let mut table = Table::new(&["name", "numerator", "denominator", "value"]);
    let mut push = |name: String, numerator: String, denominator: String, value: f64| {
        table.push(vec![
            Cell::Text(name),
            Cell::Text(numerator),
            Cell::Text(denominator),
            value.into(),
        ]);
    };
    for e in t.entries() {
        push(e.name, e.numerator, e.denominator, e.value);
    }
    for (j, b) in t.b_recursion.iter().enumerate() {
        push(
            format!("b{j}_recursion"),
            b.numer().to_string(),
            b.denom().to_string(),
            to_f64(b),
        );
    }
    Ok(table)
}

pub fn parse_order(s: &str) -> Result<PolylogOrder, CliError> {
    match s {
        "1/2" | "0.5" => Ok(PolylogOrder::Half),
        "3/2" | "1.5" => Ok(PolylogOrder::ThreeHalves),
        other => Err(CliError::Config(format!(
            "polylog order must be 1/2 or 3/2, got {other:?}"
        ))),
    }
}

pub fn polylog_table(order: PolylogOrder, species: Species, ys: &[f64]) -> Result<Table, CliError> {
    let mut table = Table::new(&[
        "order",
        "species",
        "y",
        "z",
        "value",
        "duplication_residual",
    ]);
    let order_name = match order {
        PolylogOrder::Half => "1/2",
        PolylogOrder::ThreeHalves => "3/2",
    };
    let species_name = match species {
        Species::Boson => "boson",
        Species::Fermion => "fermion",
    };
    for &y in ys {
        let arg = SignedExponentArg::new(species, y)?;
        let value = polylog(order, arg)?;
        let magnitude = y.exp();
        let residual = if magnitude > 0.0 && magnitude < 1.0 {
            Cell::Num(polylog_duplication_residual(order, magnitude)?)
        } else {
            Cell::Null
        };
        table.push(vec![
            order_name.into(),
            species_name.into(),
            y.into(),
            arg.z().into(),
            value.into(),
            residual,
        ]);
    }
    Ok(table)
}
