//! Exact solution of the chain + bath model.
//!
//! The total Hamiltonian is quadratic and conserves particle number, so every
//! mode operator evolves linearly, `f_k(t) = Σ_q P_kq(t) f_q` with
//! `P(t) = exp(−i h t)` the single-particle propagator. Expectation values in
//! the initial state (empty chain, thermal bath) then follow from Wick's
//! theorem.
//!
//! Mode layout: indices `0..N` are chain sites, `N..N+M` bath sites.

use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{QstError, Result};
use crate::fidelity::{Amplitudes, FidelityComponents};
use crate::model::{chain_hamiltonian, SystemModel};
use crate::wick::{GaussianState, Kind, LinearOp, C64};

#[derive(Debug, Clone, PartialEq)]
pub struct OneParticleHamiltonian {
    matrix: DMatrix<f64>,
    n_chain: usize,
}

impl OneParticleHamiltonian {
    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn n_chain(&self) -> usize {
        self.n_chain
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }
}

/// Chain block: hopping plus the uniform on-site energy of the model's
/// energy reference. Bath block: `diag(ω)`. Off-diagonal blocks: `g`, `gᵀ`.
pub fn assemble_one_particle_h(model: &SystemModel) -> Result<OneParticleHamiltonian> {
    let n = model.n_sites();
    let m = model.m_sites();
    let hs = chain_hamiltonian(model.chain())?;
    let onsite = model.chain_onsite();
    let g = model.coupling();
    let mut h = DMatrix::zeros(n + m, n + m);
    h.view_mut((0, 0), (n, n)).copy_from(&hs);
    for l in 0..n {
        h[(l, l)] += onsite;
    }
    for (x, w) in model.bath_energies().iter().enumerate() {
        h[(n + x, n + x)] = *w;
    }
    h.view_mut((0, n), (n, m)).copy_from(g);
    h.view_mut((n, 0), (m, n)).copy_from(&g.transpose());
    Ok(OneParticleHamiltonian {
        matrix: h,
        n_chain: n,
    })
}

#[derive(Debug, Clone)]
pub struct Propagator {
    matrix: DMatrix<C64>,
    time: f64,
}

impl Propagator {
    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.matrix
    }

    pub fn time(&self) -> f64 {
        self.time
    }

    /// `max |P P† − I|`.
    pub fn unitarity_defect(&self) -> f64 {
        let n = self.matrix.nrows();
        let prod = &self.matrix * self.matrix.adjoint();
        let mut worst = 0.0_f64;
        for r in 0..n {
            for c in 0..n {
                let target = if r == c { 1.0 } else { 0.0 };
                worst = worst.max((prod[(r, c)] - C64::new(target, 0.0)).norm());
            }
        }
        worst
    }
}

/// Eigendecomposition of `h`, computed once and shared read-only by every
/// `(t, T)` evaluation.
#[derive(Debug, Clone)]
pub struct Spectrum {
    eigenvalues: Vec<f64>,
    eigenvectors: DMatrix<f64>,
}

impl Spectrum {
    pub fn new(h: &OneParticleHamiltonian) -> Result<Self> {
        let dim = h.dim();
        let eig =
            SymmetricEigen::try_new(h.matrix().clone(), f64::EPSILON, 0).ok_or_else(|| {
                QstError::Numeric(format!(
                    "symmetric eigensolver did not converge for a {dim}×{dim} Hamiltonian \
                 (max |h_ij| = {:e})",
                    h.matrix().amax()
                ))
            })?;
        Ok(Spectrum {
            eigenvalues: eig.eigenvalues.iter().copied().collect(),
            eigenvectors: eig.eigenvectors,
        })
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    fn phases(&self, t: f64) -> Vec<C64> {
        self.eigenvalues
            .iter()
            .map(|lam| C64::from_polar(1.0, -lam * t))
            .collect()
    }

    /// `V diag(e^{−iλt}) Vᵀ`.
    pub fn propagator(&self, t: f64) -> Propagator {
        let dim = self.dim();
        let phases = self.phases(t);
        let v = &self.eigenvectors;
        let matrix = DMatrix::from_fn(dim, dim, |r, c| {
            (0..dim)
                .map(|q| phases[q] * (v[(r, q)] * v[(c, q)]))
                .sum::<C64>()
        });
        Propagator { matrix, time: t }
    }

    /// Row `r` of the propagator, `P_{r,·}(t)`.
    pub fn propagator_row(&self, r: usize, t: f64) -> Vec<C64> {
        let dim = self.dim();
        let phases = self.phases(t);
        let v = &self.eigenvectors;
        let weights: Vec<C64> = (0..dim).map(|q| phases[q] * v[(r, q)]).collect();
        (0..dim)
            .map(|c| (0..dim).map(|q| weights[q] * v[(c, q)]).sum())
            .collect()
    }
}

pub fn propagator(h: &OneParticleHamiltonian, t: f64) -> Result<Propagator> {
    Ok(Spectrum::new(h)?.propagator(t))
}

/// Fermi factor `1/(e^{ω/T} + 1)`; at `T = 0` it is the step function with
/// value ½ at `ω = 0`.
pub fn thermal_occupation(omega: f64, temperature: f64) -> Result<f64> {
    if temperature.is_nan() || temperature < 0.0 {
        return Err(QstError::Domain(format!(
            "temperature must be nonnegative, got {temperature}"
        )));
    }
    if temperature == 0.0 {
        return Ok(if omega > 0.0 {
            0.0
        } else if omega < 0.0 {
            1.0
        } else {
            0.5
        });
    }
    let x = omega / temperature;
    Ok(if x > 0.0 {
        let e = (-x).exp();
        e / (1.0 + e)
    } else {
        1.0 / (1.0 + x.exp())
    })
}

/// Occupations of the initial Gaussian state: empty chain, thermal bath.
pub fn initial_occupations(model: &SystemModel, temperature: f64) -> Result<Vec<f64>> {
    let mut occ = vec![0.0; model.n_sites()];
    for w in model.bath_energies() {
        occ.push(thermal_occupation(*w, temperature)?);
    }
    Ok(occ)
}

/// Exact solver with the eigendecomposition cached.
#[derive(Debug, Clone)]
pub struct ExactSolver {
    model: SystemModel,
    spectrum: Spectrum,
}

impl ExactSolver {
    pub fn new(model: &SystemModel) -> Result<Self> {
        let h = assemble_one_particle_h(model)?;
        Ok(ExactSolver {
            model: model.clone(),
            spectrum: Spectrum::new(&h)?,
        })
    }

    pub fn model(&self) -> &SystemModel {
        &self.model
    }

    pub fn spectrum(&self) -> &Spectrum {
        &self.spectrum
    }

    pub fn propagator(&self, t: f64) -> Propagator {
        self.spectrum.propagator(t)
    }

    /// Probability to find the excitation on site N at time `t`, having
    /// started on site 1 with the bath empty: `|P_{N1}(t)|²`.
    pub fn mtf(&self, t: f64) -> f64 {
        let n = self.model.n_sites();
        self.spectrum.propagator_row(n - 1, t)[0].norm_sqr()
    }

    pub fn components(&self, t: f64, temperature: f64) -> Result<FidelityComponents> {
        let n = self.model.n_sites();
        let dim = self.spectrum.dim();
        let state = GaussianState::new(initial_occupations(&self.model, temperature)?);
        let a_n = LinearOp::annihilate(self.spectrum.propagator_row(n - 1, t));
        let a_n_dag = a_n.adjoint();
        let a_1 = LinearOp::mode(Kind::Annihilate, 0, dim);
        let a_1_dag = a_1.adjoint();

        let mut out = FidelityComponents::default();
        for i in 0..2u8 {
            for j in 0..2u8 {
                for l in 0..2u8 {
                    for m in 0..2u8 {
                        // target operator |m⟩⟨l| at site N, Heisenberg-evolved
                        let target: Vec<(f64, Vec<LinearOp>)> = match (l, m) {
                            (0, 0) => {
                                vec![(1.0, vec![]), (-1.0, vec![a_n_dag.clone(), a_n.clone()])]
                            }
                            (1, 1) => vec![(1.0, vec![a_n_dag.clone(), a_n.clone()])],
                            (1, 0) => vec![(1.0, vec![a_n.clone()])],
                            _ => vec![(1.0, vec![a_n_dag.clone()])],
                        };
                        let mut value = C64::new(0.0, 0.0);
                        for (coef, ops) in target {
                            if (i as usize + j as usize + ops.len()) % 2 == 1 {
                                continue;
                            }
                            let mut product = Vec::with_capacity(ops.len() + 2);
                            if j == 1 {
                                product.push(a_1.clone());
                            }
                            product.extend(ops);
                            if i == 1 {
                                product.push(a_1_dag.clone());
                            }
                            value += state.expectation(&product) * coef;
                        }
                        out.set(i, j, l, m, value);
                    }
                }
            }
        }
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

pub fn mtf_exact(model: &SystemModel, t: f64) -> Result<f64> {
    Ok(ExactSolver::new(model)?.mtf(t))
}

pub fn fidelity_components_exact(
    model: &SystemModel,
    t: f64,
    temperature: f64,
) -> Result<FidelityComponents> {
    ExactSolver::new(model)?.components(t, temperature)
}

pub fn fidelity_exact(
    model: &SystemModel,
    t: f64,
    temperature: f64,
    amplitudes: &Amplitudes,
) -> Result<f64> {
    ExactSolver::new(model)?.fidelity(t, temperature, amplitudes, false)
}
