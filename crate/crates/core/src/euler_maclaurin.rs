//! Euler–Maclaurin coefficients relating `∫₀^∞ f` to the sums `Σ f(n + 1/2)`
//! and `Σ f(n)`, generated in exact rational arithmetic.
//!
//! With `κ_k = 1/(k! 2^k)` the midpoint coefficients follow the recursion
//!
//! ```text
//! a_{2k-1} = 2κ_{2k+1} - Σ_{n=1}^{k-1} 2κ_{2n+1} a_{2(k-n)-1}
//! ```
//!
//! and are applied as `∫₀^∞ f = Σ_{n≥0} f(n + 1/2) - Σ_k a_{2k-1} f^{(2k-1)}(0)`.
//! The integer-point coefficients are applied as
//! `∫₀^∞ f = Σ_{n≥1} f(n) + Σ_j b_j f^{(j)}(0)`, with `b_0 = 1/2`,
//! `b_{2k-1} = a_{2k-1}/(1 - 2^{1-2k})` and vanishing even `b_{2k}` for `k ≥ 1`.
//! Both conventions reproduce `∫₀^∞ e^{-αx} dx = 1/α`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};

pub const MAX_ORDER: usize = 10;

/// Coefficients up to correction order `K`.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientTable {
    pub order: usize,
    /// `κ_0 … κ_{2K+1}`
    pub kappas: Vec<BigRational>,
    /// `a_1, a_3, …, a_{2K-1}`
    pub a_odd: Vec<BigRational>,
    /// `b_0, b_1, …, b_{2K-1}` in the validated convention.
    pub b_all: Vec<BigRational>,
    /// `b_0, b_1, …, b_{2K}` exactly as the integer-point recursion
    /// `b_{2k} = a_{2k-1}/2`, `b_{2k-1} = a_{2k-1} + κ_{2k} - Σ κ_{2n} a_{2(k-n)-1}`
    /// produces them. These do not reproduce the classical values
    /// (`b_1 = 1/6` instead of `1/12`) and are kept for comparison only.
    pub b_recursion: Vec<BigRational>,
}

/// One named coefficient as a rational and a float.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoefficientEntry {
    pub name: String,
    pub numerator: String,
    pub denominator: String,
    pub value: f64,
}

impl CoefficientEntry {
    fn new(name: String, q: &BigRational) -> Self {
        CoefficientEntry {
            name,
            numerator: q.numer().to_string(),
            denominator: q.denom().to_string(),
            value: to_f64(q),
        }
    }
}

pub fn to_f64(q: &BigRational) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

fn rational(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// `κ_k = 1/(k! 2^k)` for `k = 0..=max`.
pub fn kappa_sequence(max: usize) -> Vec<BigRational> {
    let mut out = Vec::with_capacity(max + 1);
    let mut denom = BigInt::one();
    out.push(BigRational::one());
    for k in 1..=max {
        denom *= BigInt::from(2 * k);
        out.push(BigRational::new(BigInt::one(), denom.clone()));
    }
    out
}

/// Builds the table for `1 ≤ K ≤ 10`.
pub fn coefficients(order: usize) -> Result<CoefficientTable> {
    if !(1..=MAX_ORDER).contains(&order) {
        return Err(Error::InvalidParameter(format!(
            "correction order K must be in 1..={MAX_ORDER}, got {order}"
        )));
    }
    let kappas = kappa_sequence(2 * order + 1);
    let two = rational(2, 1);

    // a[k-1] holds a_{2k-1}
    let mut a_odd: Vec<BigRational> = Vec::with_capacity(order);
    for k in 1..=order {
        let mut value = &two * &kappas[2 * k + 1];
        for n in 1..k {
            value -= &two * &kappas[2 * n + 1] * &a_odd[k - n - 1];
        }
        a_odd.push(value);
    }

    let mut b_all = vec![rational(1, 2)];
    for (k, a) in a_odd.iter().enumerate().map(|(i, a)| (i + 1, a)) {
        let scale = BigRational::one()
            - BigRational::new(BigInt::one(), BigInt::from(2).pow(2 * k as u32 - 1));
        b_all.push(a / scale);
        if k < order {
            b_all.push(BigRational::zero());
        }
    }

    let mut b_recursion = vec![rational(1, 2)];
    for k in 1..=order {
        let mut odd = &a_odd[k - 1] + &kappas[2 * k];
        for n in 1..k {
            odd -= &kappas[2 * n] * &a_odd[k - n - 1];
        }
        b_recursion.push(odd);
        b_recursion.push(&a_odd[k - 1] / &two);
    }

    Ok(CoefficientTable {
        order,
        kappas,
        a_odd,
        b_all,
        b_recursion,
    })
}

impl CoefficientTable {
    pub fn a_odd_f64(&self) -> Vec<f64> {
        self.a_odd.iter().map(to_f64).collect()
    }

    pub fn b_f64(&self) -> Vec<f64> {
        self.b_all.iter().map(to_f64).collect()
    }

    /// Flat listing: `a_1, a_3, …`, then `b_0, b_1, …`, then `κ_0, κ_1, …`.
    pub fn entries(&self) -> Vec<CoefficientEntry> {
        let mut out = Vec::new();
        for (i, a) in self.a_odd.iter().enumerate() {
            out.push(CoefficientEntry::new(format!("a{}", 2 * i + 1), a));
        }
        for (j, b) in self.b_all.iter().enumerate() {
            out.push(CoefficientEntry::new(format!("b{j}"), b));
        }
        for (k, kappa) in self.kappas.iter().enumerate() {
            out.push(CoefficientEntry::new(format!("kappa{k}"), kappa));
        }
        out
    }
}

/// `∫₀^∞ f` from `Σ_{n≥0} f(n + 1/2)` and `f'(0), f'''(0), …`.
///
/// Derivatives beyond the table order are ignored; missing ones count as zero.
pub fn integral_from_midpoint_sum(
    sum_value: f64,
    odd_derivs_at_0: &[f64],
    table: &CoefficientTable,
) -> f64 {
    let correction: f64 = table
        .a_odd
        .iter()
        .zip(odd_derivs_at_0)
        .map(|(a, d)| to_f64(a) * d)
        .sum();
    sum_value - correction
}

/// `∫₀^∞ f` from `Σ_{n≥1} f(n)` and `f(0), f'(0), f''(0), …`.
pub fn integral_from_integer_sum(
    sum_value_from_1: f64,
    derivs_at_0: &[f64],
    table: &CoefficientTable,
) -> Result<f64> {
    if derivs_at_0.is_empty() {
        return Err(Error::InvalidParameter("f(0) is required".into()));
    }
    let correction: f64 = table
        .b_all
        .iter()
        .zip(derivs_at_0)
        .map(|(b, d)| to_f64(b) * d)
        .sum();
    Ok(sum_value_from_1 + correction)
}
