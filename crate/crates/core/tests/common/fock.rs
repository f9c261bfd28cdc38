//! Brute-force many-body reference: Jordan-Wigner matrices on the full
//! `2^(N+M)` Fock space, with the chain sites first.

use chainqst::exact::thermal_occupation;
use chainqst::wick::C64;
use chainqst::SystemModel;
use nalgebra::{DMatrix, SymmetricEigen};

/// Annihilator of mode `k` among `modes`; bit `k` of a basis index is the
/// occupation of mode `k`, and the sign string runs over modes `< k`.
pub fn annihilator(k: usize, modes: usize) -> DMatrix<f64> {
    let dim = 1usize << modes;
    let mut a = DMatrix::zeros(dim, dim);
    for s in 0..dim {
        if s & (1 << k) != 0 {
            let below = (s & ((1 << k) - 1)).count_ones();
            a[(s ^ (1 << k), s)] = if below.is_multiple_of(2) { 1.0 } else { -1.0 };
        }
    }
    a
}

pub struct FockSystem {
    pub modes: usize,
    pub n_chain: usize,
    pub hamiltonian: DMatrix<f64>,
    pub ops: Vec<DMatrix<f64>>,
    occupations_energy: Vec<f64>,
}

impl FockSystem {
    /// Hopping `(θ/2)√(l(N−l))`, the model's uniform chain on-site energy,
    /// bath energies and couplings, written out directly.
    pub fn new(model: &SystemModel) -> Self {
        let n = model.n_sites();
        let m = model.m_sites();
        let modes = n + m;
        let theta = model.theta();
        let mut h1 = DMatrix::<f64>::zeros(modes, modes);
        for l in 1..n {
            let v = 0.5 * theta * ((l * (n - l)) as f64).sqrt();
            h1[(l - 1, l)] = v;
            h1[(l, l - 1)] = v;
        }
        for l in 0..n {
            h1[(l, l)] = model.chain_onsite();
        }
        for (x, w) in model.bath_energies().iter().enumerate() {
            h1[(n + x, n + x)] = *w;
            for l in 0..n {
                h1[(l, n + x)] = model.coupling()[(l, x)];
                h1[(n + x, l)] = model.coupling()[(l, x)];
            }
        }
        let ops: Vec<DMatrix<f64>> = (0..modes).map(|k| annihilator(k, modes)).collect();
        let dim = 1usize << modes;
        let mut h = DMatrix::zeros(dim, dim);
        for i in 0..modes {
            for j in 0..modes {
                if h1[(i, j)] != 0.0 {
                    h += h1[(i, j)] * ops[i].transpose() * &ops[j];
                }
            }
        }
        FockSystem {
            modes,
            n_chain: n,
            hamiltonian: h,
            ops,
            occupations_energy: model.bath_energies().to_vec(),
        }
    }

    pub fn dim(&self) -> usize {
        1 << self.modes
    }

    pub fn evolution(&self, t: f64) -> DMatrix<C64> {
        let eig = SymmetricEigen::new(self.hamiltonian.clone());
        let v = eig.eigenvectors.map(|x| C64::new(x, 0.0));
        let phases = DMatrix::from_diagonal(&eig.eigenvalues.map(|e| C64::from_polar(1.0, -e * t)));
        &v * phases * v.transpose()
    }

    /// `|i⟩⟨j|` on site 1, other chain sites empty, bath thermal.
    pub fn initial_state(&self, i: u8, j: u8, temperature: f64) -> DMatrix<C64> {
        let dim = self.dim();
        let nu: Vec<f64> = self
            .occupations_energy
            .iter()
            .map(|w| thermal_occupation(*w, temperature).unwrap())
            .collect();
        let mut rho = DMatrix::from_element(dim, dim, C64::new(0.0, 0.0));
        for bath_bits in 0..(1usize << nu.len()) {
            let mut p = 1.0;
            for (x, n) in nu.iter().enumerate() {
                p *= if bath_bits & (1 << x) != 0 {
                    *n
                } else {
                    1.0 - n
                };
            }
            let base = bath_bits << self.n_chain;
            rho[(base | i as usize, base | j as usize)] = C64::new(p, 0.0);
        }
        rho
    }

    /// `|m⟩⟨l|` on site N as a fermionic operator: `1 − n`, `n`, `a`, `a†`.
    pub fn target_operator(&self, l: u8, m: u8) -> DMatrix<C64> {
        let a = &self.ops[self.n_chain - 1];
        let n = a.transpose() * a;
        let op = match (l, m) {
            (0, 0) => DMatrix::identity(self.dim(), self.dim()) - n,
            (1, 1) => n,
            (1, 0) => a.clone(),
            _ => a.transpose(),
        };
        op.map(|x| C64::new(x, 0.0))
    }

    /// All sixteen `Tr[U ρ_ij U† O_lm]` in binary order of `(i, j, l, m)`.
    pub fn components(&self, t: f64, temperature: f64) -> [C64; 16] {
        let u = self.evolution(t);
        let mut out = [C64::new(0.0, 0.0); 16];
        for k in 0..16u8 {
            let (i, j, l, m) = ((k >> 3) & 1, (k >> 2) & 1, (k >> 1) & 1, k & 1);
            let rho = &u * self.initial_state(i, j, temperature) * u.adjoint();
            out[k as usize] = (rho * self.target_operator(l, m)).trace();
        }
        out
    }
}
