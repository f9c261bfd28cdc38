//! The sixteen fidelity components and the qubit weighting that turns them
//! into a transfer fidelity.
//!
//! The qubit lives in the {empty, occupied} pair of a site. Component
//! `F_{ijlm}` is the `(l, m)` matrix element of the site-N output produced
//! from the site-1 input `|i⟩⟨j|`:
//!
//! ```text
//! F_ijlm = ⟨l_N| Tr_rest[ U (|i⟩⟨j|₁ ⊗ |0…0⟩⟨0…0| ⊗ ρ_B) U† ] |m_N⟩
//! ```
//!
//! so for a state `c₀|0⟩ + c₁|1⟩` sent and compared against `t₀|0⟩ + t₁|1⟩`
//! the fidelity is `Σ c_i c_j* t_l* t_m F_ijlm`.
//!
//! Particle-number conservation leaves six nonzero entries: the diagonal
//! `F_0000, F_0011, F_1100, F_1111` and the coherences `F_1010 = F_0101*`.

use crate::error::{QstError, Result};
use crate::wick::C64;

/// Components that vanish by parity or number conservation, as
/// `(i, j, l, m)`.
pub const VANISHING: [(u8, u8, u8, u8); 5] = [
    (0, 1, 0, 0),
    (0, 0, 1, 0),
    (1, 0, 0, 1),
    (1, 1, 1, 0),
    (0, 1, 1, 1),
];

const IMAG_TOLERANCE: f64 = 1e-10;
const NORM_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FidelityComponents {
    values: [C64; 16],
}

fn index(i: u8, j: u8, l: u8, m: u8) -> usize {
    debug_assert!(i < 2 && j < 2 && l < 2 && m < 2);
    ((i as usize) << 3) | ((j as usize) << 2) | ((l as usize) << 1) | m as usize
}

impl Default for FidelityComponents {
    fn default() -> Self {
        FidelityComponents {
            values: [C64::new(0.0, 0.0); 16],
        }
    }
}

impl FidelityComponents {
    pub fn get(&self, i: u8, j: u8, l: u8, m: u8) -> C64 {
        self.values[index(i, j, l, m)]
    }

    pub fn set(&mut self, i: u8, j: u8, l: u8, m: u8, value: C64) {
        self.values[index(i, j, l, m)] = value;
    }

    /// All sixteen `((i, j, l, m), value)` pairs in binary order.
    pub fn iter(&self) -> impl Iterator<Item = ((u8, u8, u8, u8), C64)> + '_ {
        (0..16u8).map(move |k| {
            let key = ((k >> 3) & 1, (k >> 2) & 1, (k >> 1) & 1, k & 1);
            (key, self.values[k as usize])
        })
    }

    /// Largest `|F_ijlm − conj(F_jiml)|`.
    pub fn hermitian_defect(&self) -> f64 {
        self.iter()
            .map(|((i, j, l, m), v)| (v - self.get(j, i, m, l).conj()).norm())
            .fold(0.0, f64::max)
    }

    /// `(|F_0000 + F_0011 − 1|, |F_1100 + F_1111 − 1|)`.
    pub fn sum_rule_defects(&self) -> (f64, f64) {
        let one = C64::new(1.0, 0.0);
        (
            (self.get(0, 0, 0, 0) + self.get(0, 0, 1, 1) - one).norm(),
            (self.get(1, 1, 0, 0) + self.get(1, 1, 1, 1) - one).norm(),
        )
    }

    /// `Σ c_i c_j* t_l* t_m F_ijlm`; fails if the result is not real.
    pub fn fidelity(&self, source: &Amplitudes, target: &Amplitudes) -> Result<f64> {
        let c = source.as_array();
        let t = target.as_array();
        let total: C64 = self
            .iter()
            .map(|((i, j, l, m), v)| {
                c[i as usize] * c[j as usize].conj() * t[l as usize].conj() * t[m as usize] * v
            })
            .sum();
        if total.im.abs() > IMAG_TOLERANCE {
            return Err(QstError::Numeric(format!(
                "fidelity has imaginary part {:e}",
                total.im
            )));
        }
        Ok(total.re)
    }
}

/// Qubit amplitudes `(c₀, c₁)` on the {empty, occupied} pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Amplitudes {
    pub amp0: C64,
    pub amp1: C64,
}

impl Amplitudes {
    pub fn new(amp0: C64, amp1: C64) -> Result<Self> {
        let norm = amp0.norm_sqr() + amp1.norm_sqr();
        if norm.is_nan() || (norm - 1.0).abs() > NORM_TOLERANCE {
            return Err(QstError::config(
                "amplitudes",
                format!("|amp0|² + |amp1|² = {norm}, expected 1"),
            ));
        }
        Ok(Amplitudes { amp0, amp1 })
    }

    pub fn real(amp0: f64, amp1: f64) -> Result<Self> {
        Self::new(C64::new(amp0, 0.0), C64::new(amp1, 0.0))
    }

    /// Same state with the occupied amplitude rotated by `e^{iφ}`.
    pub fn with_relative_phase(&self, phi: f64) -> Self {
        Amplitudes {
            amp0: self.amp0,
            amp1: self.amp1 * C64::from_polar(1.0, phi),
        }
    }

    fn as_array(&self) -> [C64; 2] {
        [self.amp0, self.amp1]
    }
}
