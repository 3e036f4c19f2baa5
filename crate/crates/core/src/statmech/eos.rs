use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::{Ensemble, EosReport, Regime, Statistics, BEC_ONSET_Y, GROUND_LIMIT, HIGH_T_LIMIT};
use crate::error::{Error, Result};
use crate::polylog::{fugacity_exponent_of_x, polylog, ratio_r, PolylogOrder, SignedExponentArg};
use crate::spectrum::{
    approx_level, de_dl, exact_level, BoundaryCondition, BoundaryPair, BoxSystem, Source,
};

/// `βκ/l²`, the level spacing in units of the temperature.
pub(crate) fn spacing_ratio(system: &BoxSystem, beta: f64) -> f64 {
    beta * system.kappa() / (system.length() * system.length())
}

/// Thermal length `√(βκ/π)`.
pub(crate) fn thermal_shift(system: &BoxSystem, beta: f64) -> f64 {
    (beta * system.kappa() / PI).sqrt()
}

/// `(force correction, length correction)` of the high-temperature form.
fn corrections(system: &BoxSystem, ensemble: &Ensemble) -> (f64, f64) {
    let l = system.length();
    let n = ensemble.particles;
    let s = thermal_shift(system, ensemble.beta);
    match system.pair() {
        BoundaryPair::DirichletRobin(_) => (n * system.nu() / (l * l), 0.0),
        BoundaryPair::DirichletDirichlet => (0.0, -s),
        BoundaryPair::SymmetricRobin(_) => (2.0 * n * system.nu() / (l * l), s),
    }
}

/// `κ m₁²/l²` is the kinetic part of the lowest approximate level.
fn ground_index(pair: BoundaryPair) -> f64 {
    match pair {
        BoundaryPair::DirichletRobin(_) => 0.5,
        BoundaryPair::DirichletDirichlet => 1.0,
        BoundaryPair::SymmetricRobin(_) => 0.0,
    }
}

fn require_dirichlet_robin(system: &BoxSystem, what: &str) -> Result<()> {
    match system.pair() {
        BoundaryPair::DirichletRobin(_) => Ok(()),
        other => Err(Error::UnsupportedRegime(format!(
            "{what} is available for the Dirichlet-Robin pair only, got {}",
            other.short_name()
        ))),
    }
}

fn default_regime(system: &BoxSystem, ensemble: &Ensemble) -> Result<Regime> {
    let alpha = spacing_ratio(system, ensemble.beta);
    if alpha < HIGH_T_LIMIT {
        Ok(Regime::HighTemperature)
    } else if alpha > GROUND_LIMIT {
        Ok(match ensemble.statistics {
            Statistics::MaxwellBoltzmann => Regime::GroundDominated,
            Statistics::BoseEinstein => Regime::Bec,
            Statistics::FermiDirac => Regime::FermiZeroT,
        })
    } else {
        Err(Error::UnsupportedRegime(format!(
            "βκ/l² = {alpha} lies in the crossover [{HIGH_T_LIMIT}, {GROUND_LIMIT}] where no closed form applies"
        )))
    }
}

/// `ln Z` of `N` distinguishable particles from the closed forms, with the regime used.
pub fn mb_log_partition(system: &BoxSystem, ensemble: &Ensemble) -> Result<(f64, Regime)> {
    if ensemble.statistics != Statistics::MaxwellBoltzmann {
        return Err(Error::InvalidParameter(
            "the canonical partition function needs Maxwell-Boltzmann statistics".into(),
        ));
    }
    let regime = default_regime(system, ensemble)?;
    let l = system.length();
    let beta = ensemble.beta;
    let n = ensemble.particles;
    let value = match regime {
        Regime::HighTemperature => {
            let g0 = 0.5 * l * (PI / (beta * system.kappa())).sqrt();
            let boundary = beta * system.nu() / l;
            match system.pair() {
                BoundaryPair::DirichletRobin(_) => n * (g0.ln() + boundary),
                BoundaryPair::DirichletDirichlet => {
                    if g0 <= 0.5 {
                        return Err(Error::UnsupportedRegime(format!(
                            "(l/2)√(π/βκ) = {g0} is not above 1/2"
                        )));
                    }
                    n * (g0 - 0.5).ln()
                }
                BoundaryPair::SymmetricRobin(_) => n * (2.0 * boundary + (g0 + 0.5).ln()),
            }
        }
        _ => -beta * n * approx_level(system, 1)?.energy,
    };
    Ok((value, regime))
}

/// Closed-form equation of state, choosing the regime from `βκ/l²`.
pub fn eos_report(system: &BoxSystem, ensemble: &Ensemble) -> Result<EosReport> {
    let regime = default_regime(system, ensemble)?;
    eos_report_in_regime(system, ensemble, regime)
}

/// Closed-form equation of state in the requested regime, without checking
/// that `βκ/l²` actually lies in it.
pub fn eos_report_in_regime(
    system: &BoxSystem,
    ensemble: &Ensemble,
    regime: Regime,
) -> Result<EosReport> {
    let l = system.length();
    let n = ensemble.particles;
    let beta = ensemble.beta;
    let (force, length) = corrections(system, ensemble);
    let thermal = n / beta;
    let stats = ensemble.statistics;
    match (regime, stats) {
        (Regime::HighTemperature, Statistics::MaxwellBoltzmann) => {
            if l + length <= 0.0 {
                return Err(Error::UnsupportedRegime(format!(
                    "thermal length {} exceeds the box length {l}",
                    -length
                )));
            }
            Ok(EosReport::solve(thermal, force, l, length, regime, 1.0))
        }
        (Regime::HighTemperature, _) => {
            require_dirichlet_robin(system, "quantum statistics")?;
            let species = stats.species().expect("quantum statistics");
            let y = fugacity_exponent(system, ensemble)?;
            let r = ratio_r(species, y)?;
            let mut report = EosReport::solve(thermal * r, force, l, length, regime, r);
            report.chemical_potential = Some(y / beta - system.nu() / l);
            Ok(report)
        }
        (Regime::GroundDominated, Statistics::MaxwellBoltzmann)
        | (Regime::Bec, Statistics::BoseEinstein)
        | (Regime::FermiZeroT, Statistics::FermiDirac) => {
            let kappa = system.kappa();
            let rhs = if regime == Regime::FermiZeroT {
                require_dirichlet_robin(system, "the zero-temperature Fermi form")?;
                2.0 * kappa * n * n * n / (3.0 * l * l)
            } else {
                if regime == Regime::Bec {
                    require_dirichlet_robin(system, "the condensate form")?;
                }
                let m1 = ground_index(system.pair());
                2.0 * n * kappa * m1 * m1 / (l * l)
            };
            let r = if stats == Statistics::MaxwellBoltzmann {
                1.0
            } else {
                rhs / thermal
            };
            Ok(EosReport::solve(rhs, force, l, 0.0, regime, r))
        }
        _ => Err(Error::UnsupportedRegime(format!(
            "regime {} does not apply to {} statistics",
            regime.as_str(),
            stats.short_name()
        ))),
    }
}

/// `y = β(ν/l + μ)` from the integrated number equation.
fn fugacity_exponent(system: &BoxSystem, ensemble: &Ensemble) -> Result<f64> {
    let species = ensemble.statistics.species().ok_or_else(|| {
        Error::InvalidParameter(
            "chemical potential needs Bose-Einstein or Fermi-Dirac statistics".into(),
        )
    })?;
    require_dirichlet_robin(system, "quantum statistics")?;
    let x = spacing_ratio(system, ensemble.beta) * ensemble.particles * ensemble.particles;
    let y = fugacity_exponent_of_x(species, x)?;
    if ensemble.statistics == Statistics::BoseEinstein && y > BEC_ONSET_Y {
        return Err(Error::UnsupportedRegime(format!(
            "bosonic fugacity exponent {y} is above {BEC_ONSET_Y}: condensation onset, use the condensate occupancy"
        )));
    }
    Ok(y)
}

/// Chemical potential solving `N = ±(l/2)√(π/βκ) Li_{1/2}(±e^{β(ν/l + μ)})`.
pub fn chemical_potential(system: &BoxSystem, ensemble: &Ensemble) -> Result<f64> {
    let alpha = spacing_ratio(system, ensemble.beta);
    if alpha >= HIGH_T_LIMIT {
        return Err(Error::UnsupportedRegime(format!(
            "βκ/l² = {alpha}: the integrated number equation needs values below {HIGH_T_LIMIT}"
        )));
    }
    let y = fugacity_exponent(system, ensemble)?;
    Ok(y / ensemble.beta - system.nu() / system.length())
}

/// Particle number implied by `mu` through the integrated number equation.
pub fn particles_from_mu(
    system: &BoxSystem,
    statistics: Statistics,
    beta: f64,
    mu: f64,
) -> Result<f64> {
    let species = statistics
        .species()
        .ok_or_else(|| Error::InvalidParameter("needs quantum statistics".into()))?;
    let y = beta * (system.nu() / system.length() + mu);
    let li = polylog(PolylogOrder::Half, SignedExponentArg::new(species, y)?)?;
    Ok(species.sign() * 0.5 * system.length() * (PI / (beta * system.kappa())).sqrt() * li)
}

/// Pressure difference across a partition with a Dirichlet face on one side
/// and a Neumann face on the other.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DeltaPressure {
    /// `(N/l²)√(κ/(βπ))`
    pub closed_form: f64,
    /// `p^{DD} - p^{DN}` from the two high-temperature equations of state.
    pub eos_difference: f64,
}

/// Uses only the geometry of `system`; the wall pair is replaced.
pub fn delta_pressure(system: &BoxSystem, ensemble: &Ensemble) -> Result<DeltaPressure> {
    if ensemble.statistics != Statistics::MaxwellBoltzmann {
        return Err(Error::UnsupportedRegime(
            "pressure difference is defined for Maxwell-Boltzmann statistics".into(),
        ));
    }
    let dd = system.with_pair(BoundaryPair::DirichletDirichlet)?;
    let dn = system.with_pair(BoundaryPair::DirichletRobin(BoundaryCondition::NEUMANN))?;
    let p_dd = eos_report(&dd, ensemble)?;
    let p_dn = eos_report(&dn, ensemble)?;
    if p_dd.regime != Regime::HighTemperature {
        return Err(Error::UnsupportedRegime(
            "pressure difference needs the high-temperature regime".into(),
        ));
    }
    let l = system.length();
    Ok(DeltaPressure {
        closed_form: ensemble.particles / (l * l) * (system.kappa() / (ensemble.beta * PI)).sqrt(),
        eos_difference: p_dd.pressure - p_dn.pressure,
    })
}

/// Zero-temperature Fermi sea of `n` particles in the lowest `n` levels of
/// the chosen spectrum, compared against `(p + Nν/l²) l = 2κN³/(3l²)`.
pub fn fermi_t0_report(system: &BoxSystem, n: usize, source: Source) -> Result<EosReport> {
    require_dirichlet_robin(system, "the zero-temperature Fermi sea")?;
    if n == 0 {
        return Err(Error::InvalidParameter(
            "particle number must be at least 1".into(),
        ));
    }
    let mut pressure = 0.0;
    for k in 1..=n {
        let level = match source {
            Source::Exact => exact_level(system, k)?,
            Source::Approximate => approx_level(system, k)?,
        };
        pressure -= de_dl(system, &level)?;
    }
    let l = system.length();
    let nf = n as f64;
    let force = nf * system.nu() / (l * l);
    let rhs = 2.0 * system.kappa() * nf * nf * nf / (3.0 * l * l);
    Ok(EosReport::from_pressure(
        pressure,
        rhs,
        force,
        l,
        0.0,
        Regime::FermiZeroT,
        f64::NAN,
    ))
}

/// Van der Waals constants: attraction `ν_vdW` and excluded length per particle `σ_vdW`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VdwParams {
    pub nu_vdw: f64,
    pub sigma_vdw: f64,
}

/// `p = N/(β(l - σN)) - N²ν/l²`.
pub fn vdw_pressure(l: f64, n: f64, beta: f64, params: VdwParams) -> Result<f64> {
    if !(l > 0.0 && n > 0.0 && beta > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "van der Waals pressure needs positive l, N, β; got {l}, {n}, {beta}"
        )));
    }
    let free = l - params.sigma_vdw * n;
    if !(free > 0.0) {
        return Err(Error::Domain(format!(
            "excluded length σN = {} is not below l = {l}",
            params.sigma_vdw * n
        )));
    }
    Ok(n / (beta * free) - n * n * params.nu_vdw / (l * l))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn dn(l_theta: f64) -> BoxSystem {
        BoxSystem::natural(
            1.0,
            BoundaryPair::DirichletRobin(BoundaryCondition::from_l_theta(l_theta).unwrap()),
        )
        .unwrap()
    }

    fn mb(n: f64, beta: f64) -> Ensemble {
        Ensemble::maxwell_boltzmann(n, beta).unwrap()
    }

    #[test]
    fn log_partition_examples() {
        let (lnz, regime) = mb_log_partition(&dn(10.0), &mb(1.0, 0.01)).unwrap();
        assert_eq!(regime, Regime::HighTemperature);
        assert_relative_eq!(lnz, 1.384646, epsilon = 1e-6);

        let (lnz, regime) = mb_log_partition(&dn(10.0), &mb(1.0, 100.0)).unwrap();
        assert_eq!(regime, Regime::GroundDominated);
        assert_relative_eq!(lnz, -113.370, epsilon = 1e-3);

        let neumann = BoxSystem::natural(
            2.0,
            BoundaryPair::SymmetricRobin(BoundaryCondition::NEUMANN),
        )
        .unwrap();
        let beta = 1e-3;
        let (lnz, _) = mb_log_partition(&neumann, &mb(1.0, beta)).unwrap();
        assert_relative_eq!(
            lnz,
            (1.0 * (PI / (beta * neumann.kappa())).sqrt() + 0.5).ln(),
            max_relative = 1e-15
        );

        let crossover = mb(1.0, 2.0 / neumann.kappa() * 4.0);
        assert!(matches!(
            mb_log_partition(&neumann, &crossover),
            Err(Error::UnsupportedRegime(_))
        ));
    }

    #[test]
    fn neumann_wall_is_ideal_gas() {
        let r = eos_report(&dn(f64::INFINITY), &mb(3.0, 0.02)).unwrap();
        assert_eq!(r.pressure, 3.0 / 0.02);
        assert_eq!(r.force_correction, 0.0);
    }

    #[test]
    fn dirichlet_pair_length_correction() {
        let dd = BoxSystem::natural(1.0, BoundaryPair::DirichletDirichlet).unwrap();
        let r = eos_report(&dd, &mb(1.0, 0.01)).unwrap();
        assert_relative_eq!(r.pressure, 114.3290, epsilon = 1e-4);
        assert_relative_eq!(r.length_correction, -0.125331, epsilon = 1e-6);
        assert!(r.residual < 1e-12);
    }

    #[test]
    fn quantum_reports_reduce_to_classical() {
        let s = dn(10.0);
        // x = κβN²/l² ≈ 5e-14, so R - 1 is of order √x
        let beta = 1e-14;
        let classical = eos_report(&s, &mb(1.0, beta)).unwrap();
        for stats in [Statistics::BoseEinstein, Statistics::FermiDirac] {
            let q = eos_report(&s, &Ensemble::new(stats, 1.0, beta).unwrap()).unwrap();
            assert_relative_eq!(q.pressure, classical.pressure, max_relative = 1e-6);
        }
    }

    #[test]
    fn chemical_potential_round_trip() {
        let s = dn(-5.0);
        for stats in [Statistics::BoseEinstein, Statistics::FermiDirac] {
            for (n, beta) in [(1.0, 0.01), (3.0, 0.05), (20.0, 1e-3)] {
                let e = Ensemble::new(stats, n, beta).unwrap();
                let mu = chemical_potential(&s, &e).unwrap();
                assert_relative_eq!(
                    particles_from_mu(&s, stats, beta, mu).unwrap(),
                    n,
                    max_relative = 1e-8
                );
            }
        }
        // bosons close to condensation are refused
        let dense = Ensemble::new(Statistics::BoseEinstein, 1e4, 0.5).unwrap();
        assert!(matches!(
            chemical_potential(&s, &dense),
            Err(Error::UnsupportedRegime(_))
        ));
    }

    #[test]
    fn delta_pressure_example() {
        let s = dn(10.0);
        let d = delta_pressure(&s, &mb(1.0, 0.01)).unwrap();
        assert_relative_eq!(d.closed_form, (50.0 * PI).sqrt(), max_relative = 1e-14);
        assert!(
            (d.eos_difference - d.closed_form).abs() / d.closed_form <= (0.01 * s.kappa()).sqrt()
        );
    }

    #[test]
    fn fermi_sea_examples() {
        let s = dn(10.0);
        let r = fermi_t0_report(&s, 10, Source::Approximate).unwrap();
        assert_relative_eq!(r.lhs / r.rhs, 0.9975, epsilon = 1e-12);
        assert_relative_eq!(r.pressure, 3280.6435, epsilon = 1e-4);
        let one = fermi_t0_report(&s, 1, Source::Approximate).unwrap();
        assert_relative_eq!(one.lhs, s.kappa() / 2.0, max_relative = 1e-14);
        assert_relative_eq!(one.lhs / one.rhs, 0.75, max_relative = 1e-14);
    }

    #[test]
    fn force_correction_in_every_regime() {
        let s = dn(4.0);
        let expected = 3.0 * s.nu();
        let cases = [
            (Statistics::MaxwellBoltzmann, 0.01),
            (Statistics::MaxwellBoltzmann, 10.0),
            (Statistics::BoseEinstein, 10.0),
            (Statistics::FermiDirac, 10.0),
            (Statistics::FermiDirac, 0.01),
        ];
        for (stats, beta) in cases {
            let r = eos_report(&s, &Ensemble::new(stats, 3.0, beta).unwrap()).unwrap();
            assert_relative_eq!(r.force_correction, expected, max_relative = 1e-15);
        }
        let t0 = fermi_t0_report(&s, 3, Source::Exact).unwrap();
        assert_relative_eq!(t0.force_correction, expected, max_relative = 1e-15);
    }

    #[test]
    fn vdw_examples() {
        let none = VdwParams {
            nu_vdw: 0.0,
            sigma_vdw: 0.0,
        };
        assert_eq!(vdw_pressure(2.0, 4.0, 0.5, none).unwrap(), 4.0);
        let p = vdw_pressure(
            1.0,
            2.0,
            1.0,
            VdwParams {
                nu_vdw: 0.1,
                sigma_vdw: 0.1,
            },
        )
        .unwrap();
        assert_relative_eq!(p, 2.1, max_relative = 1e-14);
        let s = dn(10.0);
        let n = 5.0;
        let matched = VdwParams {
            nu_vdw: s.nu() / n,
            sigma_vdw: 0.0,
        };
        let report = eos_report(&s, &mb(n, 0.01)).unwrap();
        assert_relative_eq!(
            vdw_pressure(1.0, n, 0.01, matched).unwrap(),
            report.pressure,
            max_relative = 1e-14
        );
        assert!(matches!(
            vdw_pressure(
                1.0,
                10.0,
                1.0,
                VdwParams {
                    nu_vdw: 0.0,
                    sigma_vdw: 0.1
                }
            ),
            Err(Error::Domain(_))
        ));
    }
}
