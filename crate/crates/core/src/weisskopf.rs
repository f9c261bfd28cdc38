//! Perturbative Wigner-Weisskopf solution in the chain's normal-mode basis.
//!
//! Normal mode `m` (energy `E_m`) couples to bath site `x` through
//! `g̃_{mx}`. To second order in `g̃` with the pole approximation, the
//! interaction-picture creator evolves as
//!
//! ```text
//! C_m†(t) = e^{−Γ_m t} C_m†
//!         + i Σ_x g̃*_{mx} e^{−Γ_m t} / (i(E_m − ω_x) − Γ_m) · B_x†
//!         − Σ_x Σ_{l≠m} g̃*_{mx} g̃_{lx} e^{−Γ_m t}
//!               / [(i(E_m − ω_x) − Γ_m)(i(E_m − E_l) − Γ_m)] · C_l†
//! ```
//!
//! with `Γ_m = π Σ_x |g̃_{mx}|² δ(ω_x − E_m)`. The mode-mixing (last) term
//! is kept in [`HeisenbergSolution`] for inspection but, like every product
//! `g̃*_{mx} g̃_{lx}` with `m ≠ l`, it is dropped from the observables.
//! No energy (Lamb) shift is included.

use nalgebra::DMatrix;

use crate::error::{QstError, Result};
use crate::fidelity::{Amplitudes, FidelityComponents};
use crate::model::SystemModel;
use crate::wick::C64;

const IMAG_TOLERANCE: f64 = 1e-10;
const RANGE_TOLERANCE: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq)]
pub struct DecayRates {
    rates: Vec<f64>,
    broadening: f64,
}

impl DecayRates {
    /// All modes decaying at the same rate.
    pub fn uniform(n_modes: usize, gamma: f64, broadening: f64) -> Result<Self> {
        if !(gamma >= 0.0 && gamma.is_finite()) {
            return Err(QstError::Domain(format!(
                "decay rate must be nonnegative, got {gamma}"
            )));
        }
        Ok(DecayRates {
            rates: vec![gamma; n_modes],
            broadening,
        })
    }

    /// Rates for modes 1..N, index 0 ↔ m = 1.
    pub fn rates(&self) -> &[f64] {
        &self.rates
    }

    pub fn broadening(&self) -> f64 {
        self.broadening
    }

    pub fn mean(&self) -> f64 {
        self.rates.iter().sum::<f64>() / self.rates.len() as f64
    }
}

/// Unit-normalised Gaussian of standard deviation `eta`.
fn broadened_delta(x: f64, eta: f64) -> f64 {
    (-0.5 * (x / eta).powi(2)).exp() / (eta * (2.0 * std::f64::consts::PI).sqrt())
}

/// `Γ_m = π Σ_x |g̃_{mx}|² δ_η(ω_x − E_m)`.
///
/// A discrete bath never hits a resonance exactly, so the delta function is
/// replaced by a Gaussian of width `eta`.
pub fn decay_rates(model: &SystemModel, eta: f64) -> Result<DecayRates> {
    if !(eta > 0.0 && eta.is_finite()) {
        return Err(QstError::Domain(format!(
            "broadening width must be positive, got {eta}"
        )));
    }
    let gt = model.transformed_coupling();
    let omega = model.bath_energies();
    let rates = model
        .mode_energies()
        .iter()
        .enumerate()
        .map(|(m, e)| {
            std::f64::consts::PI
                * omega
                    .iter()
                    .enumerate()
                    .map(|(x, w)| gt[(m, x)].powi(2) * broadened_delta(w - e, eta))
                    .sum::<f64>()
        })
        .collect();
    Ok(DecayRates {
        rates,
        broadening: eta,
    })
}

/// Coefficients of `C_m†(t)` on the initial operators.
#[derive(Debug, Clone)]
pub struct HeisenbergSolution {
    /// `e^{−Γ_m t}`.
    pub diagonal: Vec<f64>,
    /// Coefficient of `B_x†`, rows = modes, columns = bath sites.
    pub bath_feed: DMatrix<C64>,
    /// Coefficient of `C_l†` for `l ≠ m`, rows = m, columns = l.
    pub mode_mixing: DMatrix<C64>,
}

impl HeisenbergSolution {
    pub fn at(model: &SystemModel, rates: &DecayRates, t: f64) -> Self {
        let n = model.n_sites();
        let m_sites = model.m_sites();
        let gt = model.transformed_coupling();
        let omega = model.bath_energies();
        let e = model.mode_energies();
        let g = rates.rates();
        let i = C64::new(0.0, 1.0);

        let diagonal: Vec<f64> = g.iter().map(|gm| (-gm * t).exp()).collect();
        let bath_feed = DMatrix::from_fn(n, m_sites, |m, x| {
            i * gt[(m, x)] * diagonal[m] / (i * (e[m] - omega[x]) - g[m])
        });
        let mode_mixing = DMatrix::from_fn(n, n, |m, l| {
            if m == l {
                return C64::new(0.0, 0.0);
            }
            let denom_mode = i * (e[m] - e[l]) - g[m];
            -(0..m_sites)
                .map(|x| gt[(m, x)] * gt[(l, x)] / (i * (e[m] - omega[x]) - g[m]))
                .sum::<C64>()
                * diagonal[m]
                / denom_mode
        });
        HeisenbergSolution {
            diagonal,
            bath_feed,
            mode_mixing,
        }
    }
}

/// `(sin(θt/2))^{2(N−1)} e^{−2Γt}`.
pub fn mtf_closed_form(n_sites: usize, theta: f64, gamma: f64, t: f64) -> Result<f64> {
    if gamma.is_nan() || gamma < 0.0 {
        return Err(QstError::Domain(format!(
            "decay rate must be nonnegative, got {gamma}"
        )));
    }
    if n_sites < 2 {
        return Err(QstError::InvalidChain(format!(
            "need at least 2 sites, got {n_sites}"
        )));
    }
    Ok((0.5 * theta * t).sin().powi(2 * (n_sites as i32 - 1)) * (-2.0 * gamma * t).exp())
}

#[derive(Debug, Clone)]
pub struct WeisskopfSolver {
    model: SystemModel,
    rates: DecayRates,
    energies: Vec<f64>,
}

impl WeisskopfSolver {
    pub fn new(model: &SystemModel, rates: DecayRates) -> Result<Self> {
        if rates.rates().len() != model.n_sites() {
            return Err(QstError::Shape {
                expected: (model.n_sites(), 1),
                got: (rates.rates().len(), 1),
            });
        }
        Ok(WeisskopfSolver {
            energies: model.mode_energies(),
            model: model.clone(),
            rates,
        })
    }

    /// Solver using the model's own mode energies, overridden by `energies`.
    pub fn with_mode_energies(mut self, energies: Vec<f64>) -> Result<Self> {
        if energies.len() != self.model.n_sites() {
            return Err(QstError::Shape {
                expected: (self.model.n_sites(), 1),
                got: (energies.len(), 1),
            });
        }
        self.energies = energies;
        Ok(self)
    }

    pub fn rates(&self) -> &DecayRates {
        &self.rates
    }

    pub fn model(&self) -> &SystemModel {
        &self.model
    }

    /// `⟨c_m(t) a_1†⟩ = D_{1m} e^{−iE_m t − Γ_m t}`.
    fn source_overlaps(&self, t: f64) -> Vec<C64> {
        let d = self.model.wigner().matrix();
        self.energies
            .iter()
            .zip(self.rates.rates())
            .enumerate()
            .map(|(m, (e, g))| C64::from_polar(d[(0, m)] * (-g * t).exp(), -e * t))
            .collect()
    }

    /// `Σ_{m,n} d_{Nm} d_{Nn} d_{1m} d_{1n} e^{i(E_m − E_n)t − (Γ_m + Γ_n)t}`.
    pub fn mtf(&self, t: f64) -> Result<f64> {
        let n = self.model.n_sites();
        let d = self.model.wigner().matrix();
        let g = self.rates.rates();
        let e = &self.energies;
        let mut total = C64::new(0.0, 0.0);
        for m in 0..n {
            for k in 0..n {
                let w = d[(n - 1, m)] * d[(n - 1, k)] * d[(0, m)] * d[(0, k)];
                total += C64::from_polar(w * (-(g[m] + g[k]) * t).exp(), (e[m] - e[k]) * t);
            }
        }
        if total.im.abs() > IMAG_TOLERANCE {
            return Err(QstError::Numeric(format!(
                "transfer probability has imaginary part {:e} at t = {t}",
                total.im
            )));
        }
        if total.re < -RANGE_TOLERANCE || total.re > 1.0 + RANGE_TOLERANCE {
            log::warn!(
                "perturbative transfer probability {} outside [0, 1] at t = {t}",
                total.re
            );
        }
        Ok(total.re)
    }

    pub fn components(&self, t: f64, temperature: f64) -> Result<FidelityComponents> {
        let n = self.model.n_sites();
        let d = self.model.wigner().matrix();
        let solution = HeisenbergSolution::at(&self.model, &self.rates, t);
        let occupations: Vec<f64> = self
            .model
            .bath_energies()
            .iter()
            .map(|w| crate::exact::thermal_occupation(*w, temperature))
            .collect::<Result<_>>()?;

        // ⟨c_m†(t) c_n(t)⟩ over the thermal bath, mode-diagonal once the
        // g̃*_{mx} g̃_{nx} (m ≠ n) products are dropped
        let lesser: Vec<f64> = (0..n)
            .map(|m| {
                occupations
                    .iter()
                    .enumerate()
                    .map(|(x, nx)| solution.bath_feed[(m, x)].norm_sqr() * nx)
                    .sum()
            })
            .collect();
        let thermal_feed: f64 = (0..n).map(|m| d[(n - 1, m)].powi(2) * lesser[m]).sum();

        let transfer: C64 = self
            .source_overlaps(t)
            .iter()
            .enumerate()
            .map(|(m, s)| s * d[(n - 1, m)])
            .sum();

        let particle = thermal_feed + transfer.norm_sqr();
        let mut out = FidelityComponents::default();
        out.set(0, 0, 1, 1, C64::new(thermal_feed, 0.0));
        out.set(0, 0, 0, 0, C64::new(1.0 - thermal_feed, 0.0));
        out.set(1, 1, 1, 1, C64::new(particle, 0.0));
        out.set(1, 1, 0, 0, C64::new(1.0 - particle, 0.0));
        out.set(1, 0, 1, 0, transfer);
        out.set(0, 1, 0, 1, transfer.conj());
        Ok(out)
    }

    pub fn fidelity(
        &self,
        t: f64,
        temperature: f64,
        amplitudes: &Amplitudes,
        phase_compensation: bool,
    ) -> Result<f64> {
        let target = if phase_compensation {
            amplitudes.with_relative_phase(self.model.bath_free_transfer_amplitude(t).arg())
        } else {
            *amplitudes
        };
        self.components(t, temperature)?
            .fidelity(amplitudes, &target)
    }
}

pub fn mtf_weisskopf(model: &SystemModel, rates: &DecayRates, t: f64) -> Result<f64> {
    WeisskopfSolver::new(model, rates.clone())?.mtf(t)
}

pub fn fidelity_components_weisskopf(
    model: &SystemModel,
    rates: &DecayRates,
    t: f64,
    temperature: f64,
) -> Result<FidelityComponents> {
    WeisskopfSolver::new(model, rates.clone())?.components(t, temperature)
}

pub fn fidelity_weisskopf(
    model: &SystemModel,
    rates: &DecayRates,
    t: f64,
    temperature: f64,
    amplitudes: &Amplitudes,
) -> Result<f64> {
    WeisskopfSolver::new(model, rates.clone())?.fidelity(t, temperature, amplitudes, false)
}
