//! Equations of state of an ideal gas in a Robin/Dirichlet box: closed forms
//! in the high-temperature and limiting regimes, and brute-force sums over
//! the exact spectrum that check them.

mod box3;
mod eos;
mod oracle;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::polylog::Species;

pub use box3::{eos_3d, Box3System};
pub use eos::{
    chemical_potential, delta_pressure, eos_report, eos_report_in_regime, fermi_t0_report,
    mb_log_partition, particles_from_mu, vdw_pressure, DeltaPressure, VdwParams,
};
pub use oracle::{
    bec_occupancy, exact_log_partition, grand_canonical_state, pressure_oracle, BecOccupancy,
    GrandCanonicalState, MAX_ORACLE_LEVELS,
};

/// Closed forms that integrate over the spectrum are used below this value of `βκ/l²`.
pub const HIGH_T_LIMIT: f64 = 1.0;
/// Ground-state dominated closed forms are used above this value of `βκ/l²`.
pub const GROUND_LIMIT: f64 = 4.0;
/// Bosonic fugacity exponents above this are treated as condensing.
pub const BEC_ONSET_Y: f64 = -1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Statistics {
    #[serde(rename = "MB")]
    MaxwellBoltzmann,
    #[serde(rename = "BE")]
    BoseEinstein,
    #[serde(rename = "FD")]
    FermiDirac,
}

impl Statistics {
    pub fn species(&self) -> Option<Species> {
        match self {
            Statistics::MaxwellBoltzmann => None,
            Statistics::BoseEinstein => Some(Species::Boson),
            Statistics::FermiDirac => Some(Species::Fermion),
        }
    }

    pub fn short_name(&self) -> &'static str {
        match self {
            Statistics::MaxwellBoltzmann => "mb",
            Statistics::BoseEinstein => "be",
            Statistics::FermiDirac => "fd",
        }
    }
}

/// Statistics, particle number and inverse temperature; `mu` is filled in
/// by [`Ensemble::with_chemical_potential`] for quantum statistics.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Ensemble {
    pub statistics: Statistics,
    pub particles: f64,
    pub beta: f64,
    pub mu: Option<f64>,
}

impl Ensemble {
    pub fn new(statistics: Statistics, particles: f64, beta: f64) -> Result<Self> {
        if !(particles.is_finite() && particles > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "particle number must be positive, got {particles}"
            )));
        }
        if !(beta.is_finite() && beta > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "inverse temperature must be positive, got {beta}"
            )));
        }
        Ok(Ensemble {
            statistics,
            particles,
            beta,
            mu: None,
        })
    }

    pub fn maxwell_boltzmann(particles: f64, beta: f64) -> Result<Self> {
        Self::new(Statistics::MaxwellBoltzmann, particles, beta)
    }

    /// Copy with `mu` solved from the integrated number equation.
    pub fn with_chemical_potential(&self, system: &crate::spectrum::BoxSystem) -> Result<Self> {
        Ok(Ensemble {
            mu: Some(chemical_potential(system, self)?),
            ..*self
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Regime {
    #[serde(rename = "high-T integral")]
    HighTemperature,
    #[serde(rename = "ground-dominated")]
    GroundDominated,
    #[serde(rename = "BEC")]
    Bec,
    #[serde(rename = "fermi-T0")]
    FermiZeroT,
}

impl Regime {
    pub fn as_str(&self) -> &'static str {
        match self {
            Regime::HighTemperature => "high-T integral",
            Regime::GroundDominated => "ground-dominated",
            Regime::Bec => "BEC",
            Regime::FermiZeroT => "fermi-T0",
        }
    }
}

/// One evaluated equation of state `(p + force_correction)(extent + length_correction) = rhs`.
///
/// `extent` is the box length in one dimension and the volume in three; the
/// corrections then carry matching units.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EosReport {
    pub pressure: f64,
    pub force_correction: f64,
    pub length_correction: f64,
    pub extent: f64,
    pub lhs: f64,
    pub rhs: f64,
    pub residual: f64,
    pub regime: Regime,
    pub r_value: f64,
    pub chemical_potential: Option<f64>,
}

impl EosReport {
    fn solve(
        rhs: f64,
        force_correction: f64,
        extent: f64,
        length_correction: f64,
        regime: Regime,
        r_value: f64,
    ) -> Self {
        let pressure = rhs / (extent + length_correction) - force_correction;
        Self::from_pressure(
            pressure,
            rhs,
            force_correction,
            extent,
            length_correction,
            regime,
            r_value,
        )
    }

    fn from_pressure(
        pressure: f64,
        rhs: f64,
        force_correction: f64,
        extent: f64,
        length_correction: f64,
        regime: Regime,
        r_value: f64,
    ) -> Self {
        let lhs = (pressure + force_correction) * (extent + length_correction);
        EosReport {
            pressure,
            force_correction,
            length_correction,
            extent,
            lhs,
            rhs,
            residual: (lhs - rhs).abs(),
            regime,
            r_value,
            chemical_potential: None,
        }
    }

    /// `|p·β·extent/N - 1|`, the relative departure from the ideal gas.
    pub fn ideal_gas_deviation(&self, ensemble: &Ensemble) -> f64 {
        (self.pressure * ensemble.beta * self.extent / ensemble.particles - 1.0).abs()
    }
}
