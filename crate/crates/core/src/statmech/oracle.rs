//! Pressures summed level by level over the exact spectrum.
//!
//! Maxwell–Boltzmann sums are canonical; Bose–Einstein and Fermi–Dirac sums
//! are grand canonical with the chemical potential tuned so that the
//! occupancies add up to `N`.

use std::cell::RefCell;

use serde::Serialize;

use super::{Ensemble, Statistics};
use crate::error::{Error, Result};
use crate::roots::{bisect, bisect_relative};
use crate::spectrum::{de_dl, exact_level, BoundaryPair, BoxSystem};

/// Sums give up once this many levels have been visited.
pub const MAX_ORACLE_LEVELS: usize = 10_000_000;

/// Terms are dropped once their weight is this small relative to the running total.
const WEIGHT_CUTOFF: f64 = 1e-16;

/// Exact levels `(E_n, dE_n/dl)` computed on demand.
struct LevelCache<'a> {
    system: &'a BoxSystem,
    levels: Vec<(f64, f64)>,
}

impl<'a> LevelCache<'a> {
    fn new(system: &'a BoxSystem) -> Self {
        LevelCache {
            system,
            levels: Vec::new(),
        }
    }

    /// Level with zero-based index `i`.
    fn get(&mut self, i: usize) -> Result<(f64, f64)> {
        while self.levels.len() <= i {
            let n = self.levels.len() + 1;
            if n > MAX_ORACLE_LEVELS {
                return Err(Error::NumericalFailure(format!(
                    "spectral sum not converged within {MAX_ORACLE_LEVELS} levels"
                )));
            }
            let level = exact_level(self.system, n)?;
            self.levels
                .push((level.energy, de_dl(self.system, &level)?));
        }
        Ok(self.levels[i])
    }
}

/// `Σ e^{-β(E_n - E_1)}` and `Σ (-dE_n/dl) e^{-β(E_n - E_1)}`, plus `E_1`.
fn boltzmann_sums(system: &BoxSystem, beta: f64) -> Result<(f64, f64, f64)> {
    let mut cache = LevelCache::new(system);
    let (e1, _) = cache.get(0)?;
    let mut weights = 0.0;
    let mut forces = 0.0;
    for i in 0.. {
        let (e, de) = cache.get(i)?;
        let w = (-beta * (e - e1)).exp();
        weights += w;
        forces -= de * w;
        if w < WEIGHT_CUTOFF * weights {
            break;
        }
    }
    Ok((weights, forces, e1))
}

/// `ln Z` of `N` distinguishable particles summed over the exact spectrum.
pub fn exact_log_partition(system: &BoxSystem, ensemble: &Ensemble) -> Result<f64> {
    let (weights, _, e1) = boltzmann_sums(system, ensemble.beta)?;
    Ok(ensemble.particles * (weights.ln() - ensemble.beta * e1))
}

/// Grand-canonical solution over the exact spectrum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GrandCanonicalState {
    pub chemical_potential: f64,
    pub pressure: f64,
    pub ground_occupancy: f64,
    pub levels_used: usize,
}

/// Walks the spectrum accumulating `occupancy(β(E_n - E_1))` and the matching
/// force sum. `beyond` says whether the tail has started (for fermions, the
/// level must lie above the Fermi energy before its smallness means anything).
fn occupancy_sums<O, B>(
    cache: &mut LevelCache,
    beta: f64,
    occupancy: O,
    beyond: B,
) -> Result<(f64, f64, usize)>
where
    O: Fn(f64) -> f64,
    B: Fn(f64) -> bool,
{
    let (e1, _) = cache.get(0)?;
    let mut total = 0.0;
    let mut force = 0.0;
    let mut i = 0;
    loop {
        let (e, de) = cache.get(i)?;
        let gap = beta * (e - e1);
        let occ = occupancy(gap);
        total += occ;
        force -= de * occ;
        i += 1;
        if beyond(gap) && occ <= WEIGHT_CUTOFF * total {
            return Ok((total, force, i));
        }
    }
}

/// Solves for `μ` so that the exact-spectrum occupancies sum to `N`.
pub fn grand_canonical_state(
    system: &BoxSystem,
    ensemble: &Ensemble,
) -> Result<GrandCanonicalState> {
    let beta = ensemble.beta;
    let n = ensemble.particles;
    let cache = RefCell::new(LevelCache::new(system));
    let failure: RefCell<Option<Error>> = RefCell::new(None);
    let e1 = cache.borrow_mut().get(0)?.0;

    // Occupancy sum as a function of the shift t, NaN on failure.
    let sums = |t: f64, bose: bool| -> Result<(f64, f64, usize)> {
        let mut c = cache.borrow_mut();
        if bose {
            occupancy_sums(&mut c, beta, |gap| 1.0 / (gap + t).exp_m1(), |_| true)
        } else {
            occupancy_sums(
                &mut c,
                beta,
                |gap| 1.0 / ((gap - t).exp() + 1.0),
                |gap| gap > t,
            )
        }
    };
    let excess = |t: f64, bose: bool| -> f64 {
        match sums(t, bose) {
            Ok((total, _, _)) => total - n,
            Err(e) => {
                failure.borrow_mut().get_or_insert(e);
                f64::NAN
            }
        }
    };
    let take_failure = |e: Error| failure.borrow_mut().take().unwrap_or(e);

    match ensemble.statistics {
        Statistics::BoseEinstein => {
            // t = β(E_1 - μ) = e^w; the ground level alone holds N at t = ln(1 + 1/N)
            let w_lo = (1.0 / n).ln_1p().ln() - 1e-6;
            let mut w_hi = w_lo.max(0.0) + 1.0;
            while excess(w_hi.exp(), true) > 0.0 {
                w_hi += 2.0;
                if w_hi > 700.0 {
                    return Err(take_failure(Error::NumericalFailure(
                        "bosonic μ bracket not found".into(),
                    )));
                }
            }
            let w = bisect_relative(|w| excess(w.exp(), true), w_lo, w_hi, 1e-15)
                .map_err(take_failure)?;
            let t = w.exp();
            let (_, pressure, used) = sums(t, true)?;
            Ok(GrandCanonicalState {
                chemical_potential: e1 - t / beta,
                pressure,
                ground_occupancy: 1.0 / t.exp_m1(),
                levels_used: used,
            })
        }
        Statistics::FermiDirac => {
            // t = β(μ - E_1)
            let mut lo = -1.0;
            while excess(lo, false) >= 0.0 {
                lo *= 2.0;
                if lo < -1e300 {
                    return Err(take_failure(Error::NumericalFailure(
                        "fermionic μ bracket not found".into(),
                    )));
                }
            }
            let mut hi = 1.0;
            while excess(hi, false) <= 0.0 {
                hi *= 2.0;
                if hi > 1e300 {
                    return Err(take_failure(Error::NumericalFailure(
                        "fermionic μ bracket not found".into(),
                    )));
                }
            }
            let t = bisect(|t| excess(t, false), lo, hi, 0.0).map_err(take_failure)?;
            let (_, pressure, used) = sums(t, false)?;
            Ok(GrandCanonicalState {
                chemical_potential: e1 + t / beta,
                pressure,
                ground_occupancy: 1.0 / ((-t).exp() + 1.0),
                levels_used: used,
            })
        }
        Statistics::MaxwellBoltzmann => Err(Error::InvalidParameter(
            "grand-canonical oracle needs Bose-Einstein or Fermi-Dirac statistics".into(),
        )),
    }
}

/// Pressure summed over the exact spectrum: canonical for Maxwell–Boltzmann,
/// grand canonical for quantum statistics.
pub fn pressure_oracle(system: &BoxSystem, ensemble: &Ensemble) -> Result<f64> {
    match ensemble.statistics {
        Statistics::MaxwellBoltzmann => {
            let (weights, forces, _) = boltzmann_sums(system, ensemble.beta)?;
            Ok(ensemble.particles * forces / weights)
        }
        _ => Ok(grand_canonical_state(system, ensemble)?.pressure),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BecOccupancy {
    /// Ground-level occupancy over `N`.
    pub ground_fraction: f64,
    /// `(N/2)/(l²/(βκ))`; condensation needs this well above 1.
    pub condition_ratio: f64,
    pub chemical_potential: f64,
}

/// Ground-level occupancy of a Bose gas over the exact Dirichlet–Robin spectrum.
pub fn bec_occupancy(system: &BoxSystem, ensemble: &Ensemble) -> Result<BecOccupancy> {
    if ensemble.statistics != Statistics::BoseEinstein {
        return Err(Error::InvalidParameter(
            "condensate occupancy needs Bose-Einstein statistics".into(),
        ));
    }
    if !matches!(system.pair(), BoundaryPair::DirichletRobin(_)) {
        return Err(Error::UnsupportedRegime(
            "condensate occupancy is available for the Dirichlet-Robin pair only".into(),
        ));
    }
    let state = grand_canonical_state(system, ensemble)?;
    let l = system.length();
    Ok(BecOccupancy {
        ground_fraction: state.ground_occupancy / ensemble.particles,
        condition_ratio: 0.5 * ensemble.particles * ensemble.beta * system.kappa() / (l * l),
        chemical_potential: state.chemical_potential,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectrum::BoundaryCondition;
    use approx::assert_relative_eq;

    fn dn(lambda: f64) -> BoxSystem {
        BoxSystem::natural(
            1.0,
            BoundaryPair::DirichletRobin(BoundaryCondition::robin(lambda).unwrap()),
        )
        .unwrap()
    }

    #[test]
    fn canonical_pressure_is_derivative_of_log_partition() {
        let base = BoxSystem::natural(
            1.0,
            BoundaryPair::SymmetricRobin(BoundaryCondition::NEUMANN),
        )
        .unwrap();
        for beta in [0.01, 0.3, 2.0] {
            let e = Ensemble::maxwell_boltzmann(2.0, beta).unwrap();
            let p = pressure_oracle(&base, &e).unwrap();
            assert!(p >= 0.0);
            let h = 1e-6;
            let up = exact_log_partition(&base.with_length(1.0 + h).unwrap(), &e).unwrap();
            let down = exact_log_partition(&base.with_length(1.0 - h).unwrap(), &e).unwrap();
            let fd = (up - down) / (2.0 * h) / beta;
            assert_relative_eq!(p, fd, max_relative = 1e-6);
        }
    }

    #[test]
    fn canonical_oracle_near_closed_form() {
        let p =
            pressure_oracle(&dn(0.1), &Ensemble::maxwell_boltzmann(1.0, 0.01).unwrap()).unwrap();
        assert_relative_eq!(p, 99.9, max_relative = 1e-3);
    }

    #[test]
    fn cold_fermi_sea() {
        let s = dn(0.1);
        let e = Ensemble::new(Statistics::FermiDirac, 10.0, 1e6).unwrap();
        let p = pressure_oracle(&s, &e).unwrap();
        let filled: f64 = (1..=10)
            .map(|n| {
                let level = exact_level(&s, n).unwrap();
                -de_dl(&s, &level).unwrap()
            })
            .sum();
        assert_relative_eq!(p, filled, max_relative = 1e-12);
        assert_relative_eq!(p, 3280.64, epsilon = 0.05);
    }

    #[test]
    fn occupancies_sum_to_n() {
        let s = dn(-0.4);
        for stats in [Statistics::BoseEinstein, Statistics::FermiDirac] {
            for (n, beta) in [(1.0, 0.01), (7.0, 0.5), (50.0, 3.0)] {
                let e = Ensemble::new(stats, n, beta).unwrap();
                let state = grand_canonical_state(&s, &e).unwrap();
                // recompute the occupancy sum independently
                let mut total = 0.0;
                for k in 1..=state.levels_used + 50 {
                    let x = beta * (exact_level(&s, k).unwrap().energy - state.chemical_potential);
                    total += match stats {
                        Statistics::BoseEinstein => 1.0 / x.exp_m1(),
                        _ => 1.0 / (x.exp() + 1.0),
                    };
                }
                assert_relative_eq!(total, n, max_relative = 1e-12);
            }
        }
    }

    #[test]
    fn single_cold_boson_is_condensed() {
        let b = bec_occupancy(
            &dn(0.3),
            &Ensemble::new(Statistics::BoseEinstein, 1.0, 1e3).unwrap(),
        )
        .unwrap();
        assert!(b.ground_fraction > 1.0 - 1e-12);
        assert!(b.condition_ratio > 1e3);
    }
}
