//! `Li_{1/2}` and `Li_{3/2}` at real arguments `±e^y`, their inverse in `y`,
//! and the ratio `R = Li_{3/2}/Li_{1/2}` that multiplies the ideal-gas
//! equation of state for quantum statistics.
//!
//! Evaluation uses the power series for `e^y ≤ 1/2`, a Sommerfeld expansion
//! for fermions with `y ≥ 50`, and otherwise adaptive quadrature of the
//! Bose/Fermi integrals written with `t = πx²`:
//!
//! ```text
//! Li_{1/2}(±e^y) = ±∫₀^∞ 2 dx / (e^{πx²-y} ∓ 1)
//! Li_{3/2}(±e^y) = ±∫₀^∞ 4πx² dx / (e^{πx²-y} ∓ 1)
//! ```

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::integrate_with_breaks;
use crate::roots::bisect_relative;

const SERIES_RADIUS: f64 = 0.5;
const SOMMERFELD_START: f64 = 50.0;
const QUAD_ABS_TOL: f64 = 1e-14;
const QUAD_REL_TOL: f64 = 1e-14;
/// Below this fugacity `Li_s(z) = z` to double precision.
const NEGLIGIBLE_TARGET: f64 = 1e-300;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PolylogOrder {
    #[serde(rename = "1/2")]
    Half,
    #[serde(rename = "3/2")]
    ThreeHalves,
}

impl PolylogOrder {
    pub fn s(&self) -> f64 {
        match self {
            PolylogOrder::Half => 0.5,
            PolylogOrder::ThreeHalves => 1.5,
        }
    }

    /// `Γ(s + 1)`
    fn gamma_s_plus_one(&self) -> f64 {
        match self {
            PolylogOrder::Half => 0.5 * PI.sqrt(),
            PolylogOrder::ThreeHalves => 0.75 * PI.sqrt(),
        }
    }
}

/// Bosons see the argument `+e^y`, fermions `-e^y`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Species {
    Boson,
    Fermion,
}

impl Species {
    pub fn sign(&self) -> f64 {
        match self {
            Species::Boson => 1.0,
            Species::Fermion => -1.0,
        }
    }
}

/// The argument `sign·e^y` of a polylogarithm.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SignedExponentArg {
    pub species: Species,
    pub y: f64,
}

impl SignedExponentArg {
    pub fn new(species: Species, y: f64) -> Result<Self> {
        if y.is_nan() || y == f64::INFINITY {
            return Err(Error::Domain(format!(
                "fugacity exponent must be finite, got {y}"
            )));
        }
        if species == Species::Boson && y >= 0.0 {
            return Err(Error::Domain(format!(
                "bosonic fugacity e^y must be below 1, got y = {y}"
            )));
        }
        Ok(SignedExponentArg { species, y })
    }

    pub fn z(&self) -> f64 {
        self.species.sign() * self.y.exp()
    }
}

/// `Li_s(z)/z` by the power series, for `|z| ≤ 1/2`.
fn scaled_series(s: f64, z: f64) -> f64 {
    let mut sum = 1.0;
    let mut power = 1.0;
    for k in 2..200 {
        power *= z;
        let term = power / (k as f64).powf(s);
        sum += term;
        if term.abs() < 1e-17 * sum.abs() {
            break;
        }
    }
    sum
}

/// `-Li_s(-e^y)` for large `y` from the Sommerfeld expansion through `y^{-8}`.
fn fermi_sommerfeld(order: PolylogOrder, y: f64) -> f64 {
    const ZETA_EVEN: [f64; 4] = [
        PI * PI / 6.0,
        PI * PI * PI * PI / 90.0,
        PI * PI * PI * PI * PI * PI / 945.0,
        PI * PI * PI * PI * PI * PI * PI * PI / 9450.0,
    ];
    let s = order.s();
    let inv_y2 = 1.0 / (y * y);
    let mut falling = 1.0;
    let mut y_power = 1.0;
    let mut correction = 1.0;
    for (k, zeta) in ZETA_EVEN.iter().enumerate() {
        let j = 2 * k as i32;
        falling *= (s - j as f64) * (s - j as f64 - 1.0);
        y_power *= inv_y2;
        let eta = 2.0 * (1.0 - 2f64.powi(-(2 * k as i32 + 1))) * zeta;
        correction += eta * falling * y_power;
    }
    y.powf(s) / order.gamma_s_plus_one() * correction
}

/// `-Li_s(-e^y)` by quadrature.
fn fermi_integral(order: PolylogOrder, y: f64) -> f64 {
    let cutoff = ((y.max(0.0) + 45.0) / PI).sqrt();
    let weight = |x: f64| match order {
        PolylogOrder::Half => 2.0,
        PolylogOrder::ThreeHalves => 4.0 * PI * x * x,
    };
    let f = |x: f64| {
        let a = PI * x * x - y;
        weight(x) / (a.exp() + 1.0)
    };
    let mut breaks = vec![0.0];
    if y > 0.0 {
        breaks.push((y / PI).sqrt());
    }
    breaks.push(cutoff);
    integrate_with_breaks(f, &breaks, QUAD_ABS_TOL, QUAD_REL_TOL).value
}

/// `1/(e^a - 1) - 1/a`, regular at `a = 0`.
fn bose_regular_part(a: f64) -> f64 {
    if a < 0.05 {
        let a2 = a * a;
        -0.5 + a / 12.0 - a * a2 / 720.0 + a * a2 * a2 / 30240.0
    } else {
        1.0 / a.exp_m1() - 1.0 / a
    }
}

/// `Li_s(e^{-q})` for `q > 0` by quadrature after subtracting the `1/a` pole
/// of the Bose factor, whose integral is done in closed form.
fn bose_integral(order: PolylogOrder, q: f64) -> f64 {
    let cutoff = (45.0 / PI).sqrt();
    let arc = (cutoff * (PI / q).sqrt()).atan();
    let (f, analytic): (Box<dyn Fn(f64) -> f64>, f64) = match order {
        PolylogOrder::Half => (
            Box::new(move |x: f64| 2.0 * bose_regular_part(PI * x * x + q)),
            2.0 / (PI * q).sqrt() * arc,
        ),
        PolylogOrder::ThreeHalves => (
            Box::new(move |x: f64| 4.0 * PI * x * x * bose_regular_part(PI * x * x + q)),
            4.0 * cutoff - 4.0 * (q / PI).sqrt() * arc,
        ),
    };
    integrate_with_breaks(f, &[0.0, 1.0, cutoff], QUAD_ABS_TOL, QUAD_REL_TOL).value + analytic
}

/// `Li_s(sign·e^y)`.
pub fn polylog(order: PolylogOrder, arg: SignedExponentArg) -> Result<f64> {
    let arg = SignedExponentArg::new(arg.species, arg.y)?;
    let s = order.s();
    let y = arg.y;
    let z = arg.z();
    if z.abs() <= SERIES_RADIUS {
        return Ok(z * scaled_series(s, z));
    }
    Ok(match arg.species {
        Species::Fermion if y >= SOMMERFELD_START => -fermi_sommerfeld(order, y),
        Species::Fermion => -fermi_integral(order, y),
        Species::Boson => bose_integral(order, -y),
    })
}

/// `Li_s(-z) + Li_s(z) - 2^{1-s} Li_s(z²)`, which vanishes identically.
pub fn polylog_duplication_residual(order: PolylogOrder, z: f64) -> Result<f64> {
    if !(z > 0.0 && z < 1.0) {
        return Err(Error::Domain(format!(
            "duplication residual needs z in (0, 1), got {z}"
        )));
    }
    let y = z.ln();
    let minus = polylog(order, SignedExponentArg::new(Species::Fermion, y)?)?;
    let plus = polylog(order, SignedExponentArg::new(Species::Boson, y)?)?;
    let squared = polylog(order, SignedExponentArg::new(Species::Boson, 2.0 * y)?)?;
    Ok(minus + plus - 2f64.powf(1.0 - order.s()) * squared)
}

fn li_half(species: Species, y: f64) -> f64 {
    polylog(PolylogOrder::Half, SignedExponentArg { species, y }).unwrap_or(f64::NAN)
}

/// The `y` with `Li_{1/2}(sign·e^y) = target`.
///
/// Targets below `1e-300` in magnitude return `ln|target|`, where the
/// polylogarithm equals its argument. Bosonic results are always negative.
pub fn inverse_polylog_half(species: Species, target: f64) -> Result<f64> {
    let magnitude = target * species.sign();
    if !(magnitude > 0.0) || !magnitude.is_finite() {
        return Err(Error::Domain(format!(
            "Li_1/2 of a {species:?} argument cannot equal {target}"
        )));
    }
    if magnitude < NEGLIGIBLE_TARGET {
        return Ok(magnitude.ln());
    }
    match species {
        Species::Boson => {
            // y = -e^w; Li grows without bound as w -> -inf
            let g = |w: f64| li_half(Species::Boson, -w.exp()) - target;
            let (lo, hi) = (-700.0, 800f64.ln());
            if g(lo) < 0.0 {
                return Err(Error::Domain(format!(
                    "bosonic Li_1/2 target {target} exceeds the reachable range"
                )));
            }
            let w = bisect_relative(g, lo, hi, 1e-15)?;
            Ok(-w.exp())
        }
        Species::Fermion => {
            let g = |y: f64| li_half(Species::Fermion, y) - target;
            let lo = -745.0;
            let mut hi = 1e6;
            while g(hi) > 0.0 {
                hi *= 10.0;
                if !hi.is_finite() {
                    return Err(Error::Domain(format!(
                        "fermionic Li_1/2 target {target} exceeds the reachable range"
                    )));
                }
            }
            bisect_relative(g, lo, hi, 1e-15)
        }
    }
}

/// `R = Li_{3/2}(sign·e^y) / Li_{1/2}(sign·e^y)`; tends to 1 as `y → -∞`.
pub fn ratio_r(species: Species, y: f64) -> Result<f64> {
    let arg = SignedExponentArg::new(species, y)?;
    let z = arg.z();
    if z.abs() <= SERIES_RADIUS {
        return Ok(scaled_series(1.5, z) / scaled_series(0.5, z));
    }
    Ok(polylog(PolylogOrder::ThreeHalves, arg)? / polylog(PolylogOrder::Half, arg)?)
}

/// Fugacity exponent solving `(π/4)·Li_{1/2}(sign·e^y)² = x`.
pub fn fugacity_exponent_of_x(species: Species, x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::Domain(format!(
            "x = κβN²/l² must be positive, got {x}"
        )));
    }
    inverse_polylog_half(species, species.sign() * 2.0 * (x / PI).sqrt())
}

/// `R` as a function of the degeneracy parameter `x = κβN²/l²`.
pub fn r_of_x(species: Species, x: f64) -> Result<f64> {
    ratio_r(species, fugacity_exponent_of_x(species, x)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn li(order: PolylogOrder, species: Species, y: f64) -> f64 {
        polylog(order, SignedExponentArg::new(species, y).unwrap()).unwrap()
    }

    /// Plain power series, valid for |z| < 1 (slowly convergent near 1).
    fn brute_series(s: f64, z: f64) -> f64 {
        (1..2_000_000)
            .map(|k| z.powi(k) / (k as f64).powf(s))
            .take_while(|t| t.abs() > 1e-19)
            .sum()
    }

    #[test]
    fn zero_argument() {
        assert_eq!(
            li(PolylogOrder::Half, Species::Fermion, f64::NEG_INFINITY),
            0.0
        );
        assert_eq!(li(PolylogOrder::ThreeHalves, Species::Boson, -1e6), 0.0);
    }

    #[test]
    fn series_value_at_one_half() {
        let v = li(PolylogOrder::Half, Species::Boson, 0.5f64.ln());
        assert_relative_eq!(v, 0.80613, epsilon = 1e-5);
        assert_relative_eq!(v, brute_series(0.5, 0.5), max_relative = 1e-14);
    }

    #[test]
    fn quadrature_matches_series_inside_unit_disc() {
        for &z in &[0.55f64, 0.7, 0.9] {
            for (order, s) in [(PolylogOrder::Half, 0.5), (PolylogOrder::ThreeHalves, 1.5)] {
                let y = z.ln();
                assert_relative_eq!(
                    li(order, Species::Boson, y),
                    brute_series(s, z),
                    max_relative = 1e-12
                );
                assert_relative_eq!(
                    li(order, Species::Fermion, y),
                    brute_series(s, -z),
                    max_relative = 1e-12
                );
            }
        }
    }

    #[test]
    fn bose_function_near_unit_fugacity() {
        // Li_{3/2}(1) = ζ(3/2); Li_{1/2}(e^{-q}) ~ √(π/q) + ζ(1/2)
        let zeta_three_halves = 2.612_375_348_685_488;
        assert_relative_eq!(
            li(PolylogOrder::ThreeHalves, Species::Boson, -1e-14),
            zeta_three_halves,
            max_relative = 1e-6
        );
        let q: f64 = 1e-8;
        let zeta_half = -1.460_354_508_809_586_8;
        assert_relative_eq!(
            li(PolylogOrder::Half, Species::Boson, -q),
            (PI / q).sqrt() + zeta_half,
            max_relative = 1e-7
        );
    }

    #[test]
    fn boson_domain() {
        assert!(matches!(
            SignedExponentArg::new(Species::Boson, 0.0),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            polylog(
                PolylogOrder::Half,
                SignedExponentArg {
                    species: Species::Boson,
                    y: 0.3
                }
            ),
            Err(Error::Domain(_))
        ));
        assert!(SignedExponentArg::new(Species::Fermion, 3.0).is_ok());
    }

    #[test]
    fn fermi_asymptotics() {
        let v = li(PolylogOrder::Half, Species::Fermion, 100.0);
        assert_relative_eq!(v / (-2.0 * (100.0 / PI).sqrt()), 1.0, epsilon = 1e-3);
        assert_relative_eq!(v, -11.2838, epsilon = 2e-3);
    }

    #[test]
    fn sommerfeld_joins_quadrature() {
        for order in [PolylogOrder::Half, PolylogOrder::ThreeHalves] {
            let below = fermi_integral(order, SOMMERFELD_START);
            let above = fermi_sommerfeld(order, SOMMERFELD_START);
            assert_relative_eq!(below, above, max_relative = 1e-11);
        }
    }

    #[test]
    fn duplication_identity() {
        for &z in &[1e-4, 0.3, 0.6, 0.9, 0.99] {
            for order in [PolylogOrder::Half, PolylogOrder::ThreeHalves] {
                assert!(polylog_duplication_residual(order, z).unwrap().abs() <= 1e-9);
            }
        }
        assert!(polylog_duplication_residual(PolylogOrder::Half, 1.0).is_err());
    }

    #[test]
    fn inverse_round_trips() {
        let target = li(PolylogOrder::Half, Species::Boson, -1.0);
        assert_relative_eq!(
            inverse_polylog_half(Species::Boson, target).unwrap(),
            -1.0,
            epsilon = 1e-8
        );
        let y = inverse_polylog_half(Species::Fermion, -11.2838).unwrap();
        assert_relative_eq!(y, 100.0, max_relative = 1e-2);
        assert!(inverse_polylog_half(Species::Boson, 1e-320).unwrap() <= -700.0);
        assert!(matches!(
            inverse_polylog_half(Species::Boson, -1.0),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            inverse_polylog_half(Species::Fermion, 0.0),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn ratio_limits() {
        assert_eq!(ratio_r(Species::Boson, -800.0).unwrap(), 1.0);
        assert_relative_eq!(
            ratio_r(Species::Fermion, 1e4).unwrap() / 1e4,
            2.0 / 3.0,
            max_relative = 1e-2
        );
        let direct = brute_series(1.5, (-0.5f64).exp()) / brute_series(0.5, (-0.5f64).exp());
        assert_relative_eq!(
            ratio_r(Species::Boson, -0.5).unwrap(),
            direct,
            epsilon = 1e-8
        );
    }

    #[test]
    fn r_of_x_examples() {
        for species in [Species::Boson, Species::Fermion] {
            assert_relative_eq!(r_of_x(species, 1e-6).unwrap(), 1.0, epsilon = 1e-3);
        }
        assert_relative_eq!(
            r_of_x(Species::Fermion, 1e4).unwrap() / 1e4,
            2.0 / 3.0,
            max_relative = 1e-2
        );
        let y = fugacity_exponent_of_x(Species::Boson, 1.0).unwrap();
        let back = PI / 4.0 * li(PolylogOrder::Half, Species::Boson, y).powi(2);
        assert_relative_eq!(back, 1.0, epsilon = 1e-8);
        assert!(r_of_x(Species::Boson, 1.0).unwrap() < 1.0);
    }
}
