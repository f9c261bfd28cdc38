//! Wigner rotation matrix `d(±π/2)` for spin `S = (N−1)/2`.
//!
//! Site `j` (1-based) corresponds to the `J_z` eigenvalue `m = j − 1 − S`, so
//! `d(π/2)` has rows indexed by `j` and columns by `l`. Its columns are the
//! normal modes of the engineered chain, ordered by increasing energy, and
//! `d(−π/2) = d(π/2)ᵀ`.
//!
//! The alternating ν-sum is the numerically dangerous part: the individual
//! terms grow like `2^{N/2}` while the result is bounded by one. We multiply
//! the sum by `(N−1)!`, which turns every term into a multinomial
//! coefficient, and add the terms exactly in big-integer arithmetic. Only
//! the normalisation goes through log-factorials.

use nalgebra::DMatrix;
use num_bigint::{BigInt, BigUint, Sign};
use num_traits::{ToPrimitive, Zero};

use crate::error::{QstError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RotationAngle {
    PlusHalfPi,
    MinusHalfPi,
}

#[derive(Debug, Clone, PartialEq)]
pub struct WignerD {
    matrix: DMatrix<f64>,
    angle: RotationAngle,
}

impl WignerD {
    /// Evaluates `d(angle)` for an `n_sites`-dimensional representation.
    pub fn new(n_sites: usize, angle: RotationAngle) -> Result<Self> {
        if n_sites == 0 {
            return Err(QstError::InvalidChain(
                "the rotation matrix needs at least one site".into(),
            ));
        }
        let plus = half_pi_matrix(n_sites)?;
        let matrix = match angle {
            RotationAngle::PlusHalfPi => plus,
            RotationAngle::MinusHalfPi => plus.transpose(),
        };
        Ok(WignerD { matrix, angle })
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn into_matrix(self) -> DMatrix<f64> {
        self.matrix
    }

    pub fn angle(&self) -> RotationAngle {
        self.angle
    }

    pub fn n_sites(&self) -> usize {
        self.matrix.nrows()
    }

    /// Entry `d_{jl}` with 1-based site labels, as the formulas write it.
    pub fn entry(&self, j: usize, l: usize) -> f64 {
        self.matrix[(j - 1, l - 1)]
    }

    /// The same rotation by the opposite angle.
    pub fn inverse(&self) -> WignerD {
        WignerD {
            matrix: self.matrix.transpose(),
            angle: match self.angle {
                RotationAngle::PlusHalfPi => RotationAngle::MinusHalfPi,
                RotationAngle::MinusHalfPi => RotationAngle::PlusHalfPi,
            },
        }
    }
}

fn half_pi_matrix(n: usize) -> Result<DMatrix<f64>> {
    let top = n - 1;
    let ln_fact = log_factorials(top);
    let fact = big_factorials(top);
    let ln2 = std::f64::consts::LN_2;

    let mut d = DMatrix::zeros(n, n);
    for j in 1..=n {
        for l in 1..=n {
            let sum = multinomial_sum(n, j, l, &fact);
            if sum.is_zero() {
                continue;
            }
            let ln_norm = 0.5 * (1.0 - n as f64) * ln2
                + 0.5 * (ln_fact[l - 1] + ln_fact[n - l] + ln_fact[j - 1] + ln_fact[n - j])
                - ln_fact[top];
            let value = (ln_norm + ln_abs(&sum)).exp();
            if !value.is_finite() {
                return Err(QstError::Precision(format!(
                    "d-matrix entry ({j}, {l}) for N = {n} is not finite"
                )));
            }
            let negative = (sum.sign() == Sign::Minus) ^ ((j + l) % 2 == 1);
            d[(j - 1, l - 1)] = if negative { -value } else { value };
        }
    }
    Ok(d)
}

/// `Σ_ν (−1)^ν (N−1)! / [(N−j−ν)! (l−1−ν)! (ν+j−l)! ν!]` over all ν with
/// nonnegative factorial arguments. The arguments always add up to `N−1`.
fn multinomial_sum(n: usize, j: usize, l: usize, fact: &[BigUint]) -> BigInt {
    let (n, j, l) = (n as i64, j as i64, l as i64);
    let lo = 0.max(l - j);
    let hi = (n - j).min(l - 1);
    let mut sum = BigInt::zero();
    for nu in lo..=hi {
        let parts = [n - j - nu, l - 1 - nu, nu + j - l, nu];
        let mut term = fact[(n - 1) as usize].clone();
        for p in parts {
            term /= &fact[p as usize];
        }
        let term = BigInt::from(term);
        if nu % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
    }
    sum
}

fn ln_abs(x: &BigInt) -> f64 {
    let mag = x.magnitude();
    let bits = mag.bits();
    if bits <= 1000 {
        mag.to_f64().map(f64::ln).unwrap_or(f64::INFINITY)
    } else {
        let shift = bits - 900;
        let head = (mag >> shift).to_f64().unwrap_or(f64::INFINITY);
        head.ln() + shift as f64 * std::f64::consts::LN_2
    }
}

fn log_factorials(top: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(top + 1);
    let mut acc = 0.0;
    out.push(acc);
    for k in 1..=top {
        acc += (k as f64).ln();
        out.push(acc);
    }
    out
}

fn big_factorials(top: usize) -> Vec<BigUint> {
    let mut out = Vec::with_capacity(top + 1);
    let mut acc = BigUint::from(1u32);
    out.push(acc.clone());
    for k in 1..=top {
        acc *= k as u64;
        out.push(acc.clone());
    }
    out
}
