//! Wick contractions in a number-conserving Gaussian fermion state.
//!
//! The state is fixed by its occupations `ν_k = ⟨f_k† f_k⟩` with no
//! off-diagonal coherence, which is the case for a product of a thermal
//! bath and an empty chain. Each operator in a product is a linear
//! combination of either creators or annihilators, so only `⟨f† f⟩` and
//! `⟨f f†⟩` contractions survive.

use nalgebra::Complex;

pub type C64 = Complex<f64>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    Create,
    Annihilate,
}

/// `Σ_k c_k f_k†` or `Σ_k c_k f_k`.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearOp {
    pub kind: Kind,
    pub coeffs: Vec<C64>,
}

impl LinearOp {
    pub fn create(coeffs: Vec<C64>) -> Self {
        LinearOp {
            kind: Kind::Create,
            coeffs,
        }
    }

    pub fn annihilate(coeffs: Vec<C64>) -> Self {
        LinearOp {
            kind: Kind::Annihilate,
            coeffs,
        }
    }

    /// Single-mode operator `f_k†` or `f_k` in a space of `dim` modes.
    pub fn mode(kind: Kind, k: usize, dim: usize) -> Self {
        let mut coeffs = vec![C64::new(0.0, 0.0); dim];
        coeffs[k] = C64::new(1.0, 0.0);
        LinearOp { kind, coeffs }
    }

    pub fn adjoint(&self) -> Self {
        LinearOp {
            kind: match self.kind {
                Kind::Create => Kind::Annihilate,
                Kind::Annihilate => Kind::Create,
            },
            coeffs: self.coeffs.iter().map(|c| c.conj()).collect(),
        }
    }
}

/// Diagonal Gaussian state.
#[derive(Debug, Clone)]
pub struct GaussianState {
    occupations: Vec<f64>,
}

impl GaussianState {
    pub fn new(occupations: Vec<f64>) -> Self {
        GaussianState { occupations }
    }

    pub fn occupations(&self) -> &[f64] {
        &self.occupations
    }

    pub fn contract(&self, left: &LinearOp, right: &LinearOp) -> C64 {
        match (left.kind, right.kind) {
            (Kind::Create, Kind::Annihilate) => left
                .coeffs
                .iter()
                .zip(&right.coeffs)
                .zip(&self.occupations)
                .map(|((a, b), n)| a * b * *n)
                .sum(),
            (Kind::Annihilate, Kind::Create) => left
                .coeffs
                .iter()
                .zip(&right.coeffs)
                .zip(&self.occupations)
                .map(|((a, b), n)| a * b * (1.0 - *n))
                .sum(),
            _ => C64::new(0.0, 0.0),
        }
    }

    /// `⟨o_1 o_2 … o_n⟩`. Odd products vanish identically.
    pub fn expectation(&self, ops: &[LinearOp]) -> C64 {
        if ops.len() % 2 == 1 {
            return C64::new(0.0, 0.0);
        }
        let refs: Vec<&LinearOp> = ops.iter().collect();
        self.expand(&refs)
    }

    fn expand(&self, ops: &[&LinearOp]) -> C64 {
        if ops.is_empty() {
            return C64::new(1.0, 0.0);
        }
        let first = ops[0];
        let mut total = C64::new(0.0, 0.0);
        for k in 1..ops.len() {
            let pair = self.contract(first, ops[k]);
            if pair == C64::new(0.0, 0.0) {
                continue;
            }
            let rest: Vec<&LinearOp> = ops[1..]
                .iter()
                .enumerate()
                .filter(|(i, _)| *i + 1 != k)
                .map(|(_, o)| *o)
                .collect();
            let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
            total += pair * sign * self.expand(&rest);
        }
        total
    }
}
