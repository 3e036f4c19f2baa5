//! Energy spectra of a free particle in a one-dimensional box whose walls
//! carry Dirichlet or Robin (`φ = L_θ φ'`) boundary conditions.
//!
//! Three wall pairs are supported:
//!
//! * Dirichlet at both walls, where `kl = nπ` exactly.
//! * Dirichlet at `x = 0` and a quasi-Neumann Robin wall at `x = l`, with the
//!   quantization condition `l/L_θ = kl·cot(kl)`.
//! * Identical quasi-Neumann walls on `[-l/2, l/2]` (parameter `+L_θ` on the
//!   right wall, `-L_θ` on the left), whose eigenfunctions split into
//!   `cos k₁x`, `sin k₂x` and, for `l/L_θ > 0`, one `cosh k₃x` bound state.
//!
//! Robin walls are stored by their inverse length `λ = 1/L_θ` so that the
//! Neumann wall is the ordinary value `λ = 0`.
//!
//! Exact roots are found by bisection on the offset `δ` of the root from the
//! centre of its bracket. Working with the offset keeps full relative
//! precision on the (small) deviation from the Neumann-like value even when
//! `kl` itself is several hundred.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::roots::bisect;

/// Bracket endpoints are pulled this far (in units of `π`) away from the
/// poles of `tan`/`cot`.
const POLE_GUARD: f64 = 1e-9 * PI;

/// Relative step in `l` for the finite-difference derivative.
pub const FINITE_DIFFERENCE_STEP: f64 = 1e-6;

/// Self-adjoint boundary datum of a single wall.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BoundaryCondition {
    Dirichlet,
    /// `φ = L_θ φ'` with `lambda = 1/L_θ` (inverse length); `lambda = 0` is Neumann.
    Robin {
        lambda: f64,
    },
}

impl BoundaryCondition {
    pub const NEUMANN: BoundaryCondition = BoundaryCondition::Robin { lambda: 0.0 };

    /// Robin wall from its inverse length.
    pub fn robin(lambda: f64) -> Result<Self> {
        if !lambda.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "Robin parameter lambda must be finite, got {lambda}"
            )));
        }
        Ok(BoundaryCondition::Robin { lambda })
    }

    /// Wall from the boundary length `L_θ`: `0` is Dirichlet, `±∞` is Neumann.
    pub fn from_l_theta(l_theta: f64) -> Result<Self> {
        if l_theta.is_nan() {
            return Err(Error::InvalidParameter("L_theta is NaN".into()));
        }
        if l_theta == 0.0 {
            Ok(BoundaryCondition::Dirichlet)
        } else {
            Self::robin(1.0 / l_theta)
        }
    }

    /// Inverse boundary length, `None` for a Dirichlet wall.
    pub fn lambda(&self) -> Option<f64> {
        match *self {
            BoundaryCondition::Dirichlet => None,
            BoundaryCondition::Robin { lambda } => Some(lambda),
        }
    }

    /// Boundary length `L_θ` (`0` for Dirichlet, infinite for Neumann).
    pub fn l_theta(&self) -> f64 {
        match *self {
            BoundaryCondition::Dirichlet => 0.0,
            BoundaryCondition::Robin { lambda } => 1.0 / lambda,
        }
    }
}

/// Converts the `(L, θ)` parameterization of the unitary boundary relation
/// `(e^{iθ} - 1)φ + iL(e^{iθ} + 1)φ' = 0` into a wall datum.
///
/// `L_θ = -L·cot(θ/2)`, i.e. `lambda = -tan(θ/2)/L`. `θ = 0` gives the
/// Neumann wall and `θ = π` the Dirichlet wall.
pub fn robin_from_theta(l: f64, theta: f64) -> Result<BoundaryCondition> {
    if l == 0.0 || !l.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "boundary length scale L must be finite and non-zero, got {l}"
        )));
    }
    if !(0.0..2.0 * PI).contains(&theta) {
        return Err(Error::InvalidParameter(format!(
            "theta must lie in [0, 2π), got {theta}"
        )));
    }
    if (theta - PI).abs() <= 1e-12 {
        return Ok(BoundaryCondition::Dirichlet);
    }
    BoundaryCondition::robin(-(0.5 * theta).tan() / l)
}

/// The pair of walls bounding the box.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "pair", rename_all = "snake_case")]
pub enum BoundaryPair {
    DirichletDirichlet,
    /// Dirichlet at `x = 0`, the given quasi-Neumann wall at `x = l`.
    DirichletRobin(BoundaryCondition),
    /// The wall datum applies at `x = +l/2`; the mirrored wall at `x = -l/2`
    /// carries `-L_θ`.
    SymmetricRobin(BoundaryCondition),
}

impl BoundaryPair {
    pub fn short_name(&self) -> &'static str {
        match self {
            BoundaryPair::DirichletDirichlet => "dd",
            BoundaryPair::DirichletRobin(_) => "dn",
            BoundaryPair::SymmetricRobin(_) => "nn",
        }
    }
}

/// A one-dimensional box: length, particle mass, `ħ`, and its wall pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoxSystem {
    length: f64,
    mass: f64,
    hbar: f64,
    pair: BoundaryPair,
}

fn check_positive(name: &str, value: f64) -> Result<()> {
    if value.is_finite() && value > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "{name} must be positive and finite, got {value}"
        )))
    }
}

/// Checks `|lambda·l| < 1` for a quasi-Neumann wall.
pub(crate) fn check_quasi_neumann(wall: BoundaryCondition, length: f64) -> Result<f64> {
    match wall {
        BoundaryCondition::Dirichlet => Err(Error::UnsupportedRegime(
            "quasi-Neumann restriction requires a Robin wall, got Dirichlet".into(),
        )),
        BoundaryCondition::Robin { lambda } => {
            let ratio = lambda * length;
            if !lambda.is_finite() || ratio.abs() >= 1.0 {
                Err(Error::UnsupportedRegime(format!(
                    "quasi-Neumann restriction |lambda*l| < 1 violated: |{lambda} * {length}| = {}",
                    ratio.abs()
                )))
            } else {
                Ok(lambda)
            }
        }
    }
}

impl BoxSystem {
    pub fn new(length: f64, mass: f64, hbar: f64, pair: BoundaryPair) -> Result<Self> {
        check_positive("box length", length)?;
        check_positive("mass", mass)?;
        check_positive("hbar", hbar)?;
        match pair {
            BoundaryPair::DirichletDirichlet => {}
            BoundaryPair::DirichletRobin(wall) | BoundaryPair::SymmetricRobin(wall) => {
                check_quasi_neumann(wall, length)?;
            }
        }
        Ok(BoxSystem {
            length,
            mass,
            hbar,
            pair,
        })
    }

    /// Box in units with `ħ = m = 1`.
    pub fn natural(length: f64, pair: BoundaryPair) -> Result<Self> {
        Self::new(length, 1.0, 1.0, pair)
    }

    pub fn with_length(&self, length: f64) -> Result<Self> {
        Self::new(length, self.mass, self.hbar, self.pair)
    }

    pub fn with_pair(&self, pair: BoundaryPair) -> Result<Self> {
        Self::new(self.length, self.mass, self.hbar, pair)
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    pub fn pair(&self) -> BoundaryPair {
        self.pair
    }

    /// `κ = ħ²π²/(2m)`.
    pub fn kappa(&self) -> f64 {
        self.hbar * self.hbar * PI * PI / (2.0 * self.mass)
    }

    /// Inverse boundary length of the Robin wall; zero for the Dirichlet pair.
    pub fn lambda(&self) -> f64 {
        match self.pair {
            BoundaryPair::DirichletDirichlet => 0.0,
            BoundaryPair::DirichletRobin(w) | BoundaryPair::SymmetricRobin(w) => {
                w.lambda().unwrap_or(0.0)
            }
        }
    }

    /// `ν = ħ²λ/m`, carrying the sign of `λ`.
    pub fn nu(&self) -> f64 {
        self.hbar * self.hbar * self.lambda() / self.mass
    }

    /// Dimensionless wall strength `l/L_θ = λ·l`.
    pub fn boundary_ratio(&self) -> f64 {
        self.lambda() * self.length
    }

    /// `ħ²/(2m l²)`, the energy of unit dimensionless wavenumber `kl = 1`.
    fn energy_unit(&self) -> f64 {
        self.hbar * self.hbar / (2.0 * self.mass * self.length * self.length)
    }
}

/// Shape of an eigenfunction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Branch {
    OscillatorySin,
    OscillatoryCos,
    EvanescentCosh,
}

impl Branch {
    pub fn as_str(&self) -> &'static str {
        match self {
            Branch::OscillatorySin => "oscillatory-sin",
            Branch::OscillatoryCos => "oscillatory-cos",
            Branch::EvanescentCosh => "evanescent-cosh",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Source {
    Exact,
    Approximate,
}

/// One eigenlevel. `k` is the wavenumber for oscillatory branches and the
/// decay constant for the evanescent branch.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpectrumLevel {
    pub n: usize,
    pub branch: Branch,
    pub k: f64,
    pub energy: f64,
    pub source: Source,
}

fn check_index(n: usize) -> Result<()> {
    if n == 0 {
        Err(Error::InvalidParameter(
            "quantum number n starts at 1".into(),
        ))
    } else {
        Ok(())
    }
}

fn level_from_kl(
    system: &BoxSystem,
    n: usize,
    branch: Branch,
    kl: f64,
    source: Source,
) -> SpectrumLevel {
    let magnitude = system.energy_unit() * kl * kl;
    let energy = if branch == Branch::EvanescentCosh {
        -magnitude
    } else {
        magnitude
    };
    SpectrumLevel {
        n,
        branch,
        k: kl / system.length,
        energy,
        source,
    }
}

/// Offset `δ` of the `n`-th root of `kl·cot(kl) = ratio` from `π(n - 1/2)`,
/// so that `kl = π(n - 1/2) - δ` with `|δ| < π/2`.
///
/// Equivalent to solving `(c - δ)·tan δ = ratio` with `c = π(n - 1/2)`,
/// which is increasing in `δ` on `(-π/2, π/2)`.
pub fn robin_root_offset(ratio: f64, n: usize) -> Result<f64> {
    check_index(n)?;
    if !(ratio.abs() < 1.0) {
        return Err(Error::UnsupportedRegime(format!(
            "quasi-Neumann restriction |l/L_theta| < 1 violated: {ratio}"
        )));
    }
    if ratio == 0.0 {
        return Ok(0.0);
    }
    let c = PI * (n as f64 - 0.5);
    let half = 0.5 * PI - POLE_GUARD;
    bisect(|d| (c - d) * d.tan() - ratio, -half, half, 0.0)
}

/// Leading-order offset `ratio/(π(n - 1/2))`, i.e. the closed-form root
/// `kl ≈ π(n - 1/2) - (l/L_θ)/(π(n - 1/2))`.
pub fn approximate_root_offset(ratio: f64, n: usize) -> f64 {
    ratio / (PI * (n as f64 - 0.5))
}

/// Offset of the root of the linearized condition `c - kl = ratio/kl`, the
/// intersection of the linearized cotangent with the hyperbola `ratio/kl`.
/// Agrees with [`robin_root_offset`] up to a term cubic in
/// `ratio/(π(n - 1/2))`.
pub fn linearized_root_offset(ratio: f64, n: usize) -> f64 {
    let c = PI * (n as f64 - 0.5);
    2.0 * ratio / (c + (c * c - 4.0 * ratio).sqrt())
}

/// Offset `δ` of the `m`-th oscillatory root (`m ≥ 1`) of the symmetric
/// Robin pair from `mπ`: `kl = mπ - δ` solves `(mπ - δ)·tan(δ/2) = ratio`.
/// Odd `m` are `sin` modes, even `m` are `cos` modes.
fn symmetric_root_offset(ratio: f64, m: usize) -> Result<f64> {
    if ratio == 0.0 {
        return Ok(0.0);
    }
    let c = PI * m as f64;
    let half = PI - 2.0 * POLE_GUARD;
    bisect(|d| (c - d) * (0.5 * d).tan() - ratio, -half, half, 0.0)
}

/// Lowest symmetric-pair level: `(branch, kl)`.
fn symmetric_ground(ratio: f64) -> Result<(Branch, f64)> {
    if ratio > 0.0 {
        // cosh bound state: kl·tanh(kl/2) = ratio; the root is below 2 for ratio < 1
        let u = bisect(|u| u * (0.5 * u).tanh() - ratio, 0.0, 2.0, 0.0)?;
        Ok((Branch::EvanescentCosh, u))
    } else if ratio < 0.0 {
        // lowest cos root: -ratio = kl·tan(kl/2) on (0, π)
        let u = bisect(
            |u| u * (0.5 * u).tan() + ratio,
            0.0,
            PI - 2.0 * POLE_GUARD,
            0.0,
        )?;
        Ok((Branch::OscillatoryCos, u))
    } else {
        Ok((Branch::OscillatoryCos, 0.0))
    }
}

/// The exact `n`-th level (1-based, increasing in energy).
pub fn exact_level(system: &BoxSystem, n: usize) -> Result<SpectrumLevel> {
    check_index(n)?;
    let ratio = system.boundary_ratio();
    let (branch, kl) = match system.pair {
        BoundaryPair::DirichletDirichlet => (Branch::OscillatorySin, PI * n as f64),
        BoundaryPair::DirichletRobin(_) => {
            // a sinh-type state would need ratio > 1, excluded by construction
            debug_assert!(ratio < 1.0);
            let delta = robin_root_offset(ratio, n)?;
            (Branch::OscillatorySin, PI * (n as f64 - 0.5) - delta)
        }
        BoundaryPair::SymmetricRobin(_) => {
            if n == 1 {
                symmetric_ground(ratio)?
            } else {
                let m = n - 1;
                let delta = symmetric_root_offset(ratio, m)?;
                let branch = if m % 2 == 1 {
                    Branch::OscillatorySin
                } else {
                    Branch::OscillatoryCos
                };
                (branch, PI * m as f64 - delta)
            }
        }
    };
    Ok(level_from_kl(system, n, branch, kl, Source::Exact))
}

/// The `count` lowest exact levels in increasing energy.
///
/// For the symmetric pair the `cos`, `sin` and `cosh` families are merged by
/// energy and renumbered from 1.
pub fn exact_levels(system: &BoxSystem, count: usize) -> Result<Vec<SpectrumLevel>> {
    if count == 0 {
        return Err(Error::InvalidParameter(
            "level count must be at least 1".into(),
        ));
    }
    let mut levels = (1..=count)
        .map(|n| exact_level(system, n))
        .collect::<Result<Vec<_>>>()?;
    levels.sort_by(|a, b| a.energy.total_cmp(&b.energy));
    for (i, level) in levels.iter_mut().enumerate() {
        level.n = i + 1;
    }
    Ok(levels)
}

/// The `n`-th level of the closed-form approximate spectrum.
pub fn approx_level(system: &BoxSystem, n: usize) -> Result<SpectrumLevel> {
    check_index(n)?;
    let ratio = system.boundary_ratio();
    let nf = n as f64;
    // (kl)² of the approximate level, signed: negative means evanescent
    let (branch, kl_sq) = match system.pair {
        BoundaryPair::DirichletDirichlet => (Branch::OscillatorySin, (PI * nf).powi(2)),
        BoundaryPair::DirichletRobin(_) => (
            Branch::OscillatorySin,
            (PI * (nf - 0.5)).powi(2) - 2.0 * ratio,
        ),
        BoundaryPair::SymmetricRobin(_) => {
            let m = n - 1;
            let kl_sq = (PI * m as f64).powi(2) - 4.0 * ratio;
            let branch = if kl_sq < 0.0 {
                Branch::EvanescentCosh
            } else if m % 2 == 1 {
                Branch::OscillatorySin
            } else {
                Branch::OscillatoryCos
            };
            (branch, kl_sq)
        }
    };
    Ok(level_from_kl(
        system,
        n,
        branch,
        kl_sq.abs().sqrt(),
        Source::Approximate,
    ))
}

/// Closed-form spectrum: `κn²/l²` (Dirichlet pair), `κ(n-1/2)²/l² - ν/l`
/// (Dirichlet–Robin), `κ(n-1)²/l² - 2ν/l` (symmetric Robin).
pub fn approx_levels(system: &BoxSystem, count: usize) -> Result<Vec<SpectrumLevel>> {
    if count == 0 {
        return Err(Error::InvalidParameter(
            "level count must be at least 1".into(),
        ));
    }
    (1..=count).map(|n| approx_level(system, n)).collect()
}

/// First-order half-width `|l/(L_θ·π(n - 1/2))|` of the bracket around
/// `π(n - 1/2)` containing the `n`-th Dirichlet–Robin root.
pub fn dn_error_bound(system: &BoxSystem, n: usize) -> Result<f64> {
    check_index(n)?;
    match system.pair {
        BoundaryPair::DirichletRobin(_) => {
            Ok(approximate_root_offset(system.boundary_ratio(), n).abs())
        }
        _ => Err(Error::UnsupportedRegime(
            "error bound is defined for the Dirichlet-Robin pair only".into(),
        )),
    }
}

/// `dE_n/dl` for a level of `system`.
///
/// Approximate levels use the derivative of the closed form. Exact levels
/// differentiate the quantization condition implicitly: with `u = kl` and
/// `F(u) = λl`, `du/dl = λ/F'(u)`.
pub fn de_dl(system: &BoxSystem, level: &SpectrumLevel) -> Result<f64> {
    check_index(level.n)?;
    let l = system.length;
    match level.source {
        Source::Approximate => {
            let kappa = system.kappa();
            let nu = system.nu();
            let nf = level.n as f64;
            Ok(match system.pair {
                BoundaryPair::DirichletDirichlet => -2.0 * kappa * nf * nf / l.powi(3),
                BoundaryPair::DirichletRobin(_) => {
                    -2.0 * kappa * (nf - 0.5).powi(2) / l.powi(3) + nu / (l * l)
                }
                BoundaryPair::SymmetricRobin(_) => {
                    -2.0 * kappa * (nf - 1.0).powi(2) / l.powi(3) + 2.0 * nu / (l * l)
                }
            })
        }
        Source::Exact => {
            let lambda = system.lambda();
            let u = level.k * l;
            let du_dl = if lambda == 0.0 {
                0.0
            } else {
                match (system.pair, level.branch) {
                    (BoundaryPair::DirichletDirichlet, _) => 0.0,
                    (BoundaryPair::DirichletRobin(_), _) => {
                        let s = u.sin();
                        lambda / (u.cos() / s - u / (s * s))
                    }
                    (BoundaryPair::SymmetricRobin(_), Branch::OscillatorySin) => {
                        let s = (0.5 * u).sin();
                        lambda / ((0.5 * u).cos() / s - u / (2.0 * s * s))
                    }
                    (BoundaryPair::SymmetricRobin(_), Branch::OscillatoryCos) => {
                        let c = (0.5 * u).cos();
                        -lambda / ((0.5 * u).sin() / c + u / (2.0 * c * c))
                    }
                    (BoundaryPair::SymmetricRobin(_), Branch::EvanescentCosh) => {
                        let ch = (0.5 * u).cosh();
                        lambda / ((0.5 * u).tanh() + u / (2.0 * ch * ch))
                    }
                }
            };
            let sign = if level.branch == Branch::EvanescentCosh {
                -1.0
            } else {
                1.0
            };
            let unit = system.hbar * system.hbar / system.mass;
            Ok(sign * unit * u / (l * l) * (du_dl - u / l))
        }
    }
}

/// Central finite difference of the exact level energy in `l` with relative
/// step [`FINITE_DIFFERENCE_STEP`]. Used to cross-check [`de_dl`].
pub fn de_dl_finite_difference(system: &BoxSystem, level: &SpectrumLevel) -> Result<f64> {
    let h = system.length * FINITE_DIFFERENCE_STEP;
    let energy_at = |l: f64| -> Result<f64> {
        let shifted = system.with_length(l)?;
        Ok(match level.source {
            Source::Exact => exact_level(&shifted, level.n)?.energy,
            Source::Approximate => approx_level(&shifted, level.n)?.energy,
        })
    };
    let plus = energy_at(system.length + h)?;
    let minus = energy_at(system.length - h)?;
    Ok((plus - minus) / (2.0 * h))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn dn(lambda: f64) -> BoxSystem {
        BoxSystem::natural(
            1.0,
            BoundaryPair::DirichletRobin(BoundaryCondition::robin(lambda).unwrap()),
        )
        .unwrap()
    }

    fn nn(lambda: f64) -> BoxSystem {
        BoxSystem::natural(
            1.0,
            BoundaryPair::SymmetricRobin(BoundaryCondition::robin(lambda).unwrap()),
        )
        .unwrap()
    }

    #[test]
    fn theta_conversion() {
        assert_eq!(
            robin_from_theta(1.0, 0.0).unwrap(),
            BoundaryCondition::NEUMANN
        );
        assert_eq!(
            robin_from_theta(1.0, PI).unwrap(),
            BoundaryCondition::Dirichlet
        );
        match robin_from_theta(2.0, PI / 2.0).unwrap() {
            BoundaryCondition::Robin { lambda } => {
                assert_relative_eq!(lambda, -0.5, epsilon = 1e-15)
            }
            other => panic!("unexpected {other:?}"),
        }
        // θ just above 0 is nearly Neumann
        let near = robin_from_theta(1.0, 1e-8).unwrap().lambda().unwrap();
        assert!(near.abs() < 1e-8);
        assert!(matches!(
            robin_from_theta(0.0, 1.0),
            Err(Error::InvalidParameter(_))
        ));
        assert!(matches!(
            robin_from_theta(1.0, 7.0),
            Err(Error::InvalidParameter(_))
        ));
    }

    #[test]
    fn l_theta_round_trip() {
        let w = BoundaryCondition::from_l_theta(10.0).unwrap();
        assert_relative_eq!(w.lambda().unwrap(), 0.1);
        assert_eq!(
            BoundaryCondition::from_l_theta(0.0).unwrap(),
            BoundaryCondition::Dirichlet
        );
        assert_eq!(
            BoundaryCondition::from_l_theta(f64::INFINITY).unwrap(),
            BoundaryCondition::NEUMANN
        );
    }

    #[test]
    fn quasi_neumann_violation_is_rejected() {
        let wall = BoundaryCondition::robin(1.5).unwrap();
        let err = BoxSystem::natural(1.0, BoundaryPair::DirichletRobin(wall)).unwrap_err();
        assert!(matches!(err, Error::UnsupportedRegime(_)));
        assert!(err.to_string().contains("quasi-Neumann restriction"));
        assert!(BoxSystem::natural(
            1.0,
            BoundaryPair::SymmetricRobin(BoundaryCondition::Dirichlet)
        )
        .is_err());
        assert!(matches!(
            robin_root_offset(1.0, 1),
            Err(Error::UnsupportedRegime(_))
        ));
    }

    #[test]
    fn derived_scales() {
        let s = BoxSystem::new(
            2.0,
            0.5,
            3.0,
            BoundaryPair::DirichletRobin(BoundaryCondition::robin(0.25).unwrap()),
        )
        .unwrap();
        assert_relative_eq!(s.kappa(), 9.0 * PI * PI, max_relative = 1e-15);
        assert_relative_eq!(s.nu(), 9.0 * 0.25 / 0.5, max_relative = 1e-15);
        assert_relative_eq!(s.boundary_ratio(), 0.5);
    }

    #[test]
    fn neumann_ground_state_is_half_pi() {
        let level = exact_level(&dn(0.0), 1).unwrap();
        assert_eq!(level.k, PI / 2.0);
        for n in 1..50 {
            let e = exact_level(&dn(0.0), n).unwrap();
            let a = approx_level(&dn(0.0), n).unwrap();
            assert_relative_eq!(e.energy, a.energy, max_relative = 1e-14);
        }
    }

    #[test]
    fn third_root_for_small_robin_ratio() {
        let level = exact_level(&dn(0.05), 3).unwrap();
        assert_relative_eq!(level.k, 7.8476, epsilon = 1e-4);
        assert!(level.k > 2.0 * PI && level.k < 3.0 * PI);
        let predicted = 2.5 * PI - approximate_root_offset(0.05, 3);
        assert_relative_eq!(predicted, 7.84762, epsilon = 1e-5);
    }

    #[test]
    fn dirichlet_pair_is_exact() {
        let s = BoxSystem::natural(1.0, BoundaryPair::DirichletDirichlet).unwrap();
        let levels = exact_levels(&s, 2).unwrap();
        assert_relative_eq!(levels[0].energy, PI * PI / 2.0, max_relative = 1e-15);
        assert_relative_eq!(levels[1].energy, 2.0 * PI * PI, max_relative = 1e-15);
        let approx = approx_level(&s, 2).unwrap();
        assert_relative_eq!(approx.energy, 19.7392, epsilon = 1e-4);
    }

    #[test]
    fn approximate_dirichlet_robin_ground_state() {
        let level = approx_level(&dn(0.1), 1).unwrap();
        assert_relative_eq!(level.energy, PI * PI / 8.0 - 0.1, max_relative = 1e-15);
        assert_relative_eq!(level.energy, 1.13370, epsilon = 1e-5);
    }

    #[test]
    fn symmetric_neumann_ground_is_constant_mode() {
        let a = approx_level(&nn(0.0), 1).unwrap();
        let e = exact_level(&nn(0.0), 1).unwrap();
        assert_eq!(a.energy, 0.0);
        assert_eq!(e.energy, 0.0);
        assert_eq!(de_dl(&nn(0.0), &e).unwrap(), 0.0);
    }

    #[test]
    fn evanescent_ground_state_for_weak_positive_wall() {
        let s = nn(1e-3);
        let ground = exact_level(&s, 1).unwrap();
        assert_eq!(ground.branch, Branch::EvanescentCosh);
        assert!(ground.energy < 0.0);
        assert_relative_eq!(ground.energy / (s.nu() / s.length()), -1.0, epsilon = 1e-3);
        assert_relative_eq!((ground.k * s.length()).powi(2), 2e-3, max_relative = 1e-3);
    }

    #[test]
    fn negative_wall_has_no_bound_state() {
        let levels = exact_levels(&nn(-0.3), 6).unwrap();
        assert!(levels.iter().all(|l| l.energy > 0.0));
        assert_eq!(levels[0].branch, Branch::OscillatoryCos);
        let branches: Vec<_> = levels.iter().map(|l| l.branch).collect();
        assert_eq!(
            branches[1..],
            [
                Branch::OscillatorySin,
                Branch::OscillatoryCos,
                Branch::OscillatorySin,
                Branch::OscillatoryCos,
                Branch::OscillatorySin
            ]
        );
    }

    #[test]
    fn symmetric_levels_interleave_near_integer_multiples_of_pi() {
        for &lambda in &[-0.4, 0.2, 0.7] {
            let s = nn(lambda);
            let levels = exact_levels(&s, 30).unwrap();
            for w in levels.windows(2) {
                assert!(w[1].energy > w[0].energy);
            }
            for level in levels.iter().skip(1) {
                let m = (level.n - 1) as f64;
                let kl = level.k * s.length();
                assert!(kl > (m - 1.0) * PI && kl < (m + 1.0) * PI);
            }
        }
    }

    #[test]
    fn dn_bound_values() {
        assert_relative_eq!(
            dn_error_bound(&dn(0.1), 1).unwrap(),
            0.063662,
            epsilon = 1e-6
        );
        assert_eq!(dn_error_bound(&dn(0.0), 7).unwrap(), 0.0);
        assert_relative_eq!(
            dn_error_bound(&dn(0.1), 10).unwrap(),
            0.1 / (9.5 * PI),
            max_relative = 1e-14
        );
        let dd = BoxSystem::natural(1.0, BoundaryPair::DirichletDirichlet).unwrap();
        assert!(dn_error_bound(&dd, 1).is_err());
    }

    #[test]
    fn approximate_derivatives() {
        let s = dn(0.1);
        let d = de_dl(&s, &approx_level(&s, 1).unwrap()).unwrap();
        assert_relative_eq!(d, -PI * PI / 4.0 + 0.1, max_relative = 1e-14);
        assert_relative_eq!(d, -2.36740, epsilon = 1e-5);

        let dd = BoxSystem::natural(2.0, BoundaryPair::DirichletDirichlet).unwrap();
        let d = de_dl(&dd, &exact_level(&dd, 1).unwrap()).unwrap();
        assert_relative_eq!(d, -PI * PI / 8.0, max_relative = 1e-14);
    }

    #[test]
    fn implicit_derivative_matches_finite_difference() {
        let systems = [dn(0.3), dn(-0.6), nn(0.4), nn(-0.2), nn(1e-3)];
        for s in &systems {
            for level in exact_levels(s, 25).unwrap() {
                let implicit = de_dl(s, &level).unwrap();
                let fd = de_dl_finite_difference(s, &level).unwrap();
                assert!(
                    (implicit - fd).abs() <= 1e-6 * implicit.abs().max(1e-3),
                    "{:?} n={} implicit={implicit} fd={fd}",
                    s.pair(),
                    level.n
                );
            }
        }
    }

    #[test]
    fn roots_drift_towards_half_integers_with_sign_of_l_theta() {
        for &ratio in &[0.3, -0.3] {
            let mut prev = f64::INFINITY;
            for n in [1, 2, 5, 20, 100, 1000] {
                let delta = robin_root_offset(ratio, n).unwrap();
                // kl - π(n - 1/2) = -δ, which has the sign of -ratio ... i.e. δ has the sign of L_θ
                assert_eq!(delta.signum(), ratio.signum());
                assert!(delta.abs() < prev);
                prev = delta.abs();
            }
        }
    }

    #[test]
    fn linearized_root_is_cubically_close() {
        for &ratio in &[0.01, -0.01, 0.1, -0.1, 0.5, -0.5] {
            for n in 1..=200 {
                let exact = robin_root_offset(ratio, n).unwrap();
                let b = approximate_root_offset(ratio, n).abs();
                assert!((exact - linearized_root_offset(ratio, n)).abs() <= 5.0 * b.powi(3));
            }
        }
    }

    #[test]
    fn symmetric_oscillatory_levels_match_closed_form_to_second_order() {
        // exact - approximate energy is -(4κ/l²)·(ratio/((n-1)π²))² at leading order
        for &lambda in &[0.1, -0.1, 0.5, -0.5] {
            let s = nn(lambda);
            let ratio = s.boundary_ratio();
            for n in 2..=100 {
                let e = exact_level(&s, n).unwrap().energy;
                let a = approx_level(&s, n).unwrap().energy;
                let m = (n - 1) as f64;
                let leading = 4.0 * s.kappa() * ratio * ratio / (PI.powi(4) * m * m);
                let cubic = 5.0 * s.kappa() * (ratio / (PI * m)).abs().powi(3) * m * m;
                assert!(
                    (e - a).abs() <= 2.0 * leading + cubic,
                    "n={n} diff={}",
                    e - a
                );
            }
        }
    }
}
