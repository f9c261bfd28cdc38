//! Chain, bath and coupling description, and the assembled [`SystemModel`].

use nalgebra::DMatrix;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::error::{QstError, Result};
use crate::wigner::{RotationAngle, WignerD};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChainSpec {
    pub n_sites: usize,
    pub theta: f64,
}

impl ChainSpec {
    pub fn new(n_sites: usize, theta: f64) -> Result<Self> {
        let chain = ChainSpec { n_sites, theta };
        chain.validate()?;
        Ok(chain)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_sites < 2 {
            return Err(QstError::InvalidChain(format!(
                "need at least 2 sites, got {}",
                self.n_sites
            )));
        }
        if !(self.theta > 0.0 && self.theta.is_finite()) {
            return Err(QstError::InvalidChain(format!(
                "theta must be positive and finite, got {}",
                self.theta
            )));
        }
        Ok(())
    }

    /// Time of perfect transfer in the uncoupled chain, `π/θ`.
    pub fn transfer_time(&self) -> f64 {
        std::f64::consts::PI / self.theta
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BathSpec {
    pub m_sites: usize,
    pub energy_mean: f64,
    pub energy_std: f64,
    pub seed: u64,
    /// Explicit on-site energies; when present they replace sampling.
    pub energies: Option<Vec<f64>>,
}

impl BathSpec {
    pub fn validate(&self) -> Result<()> {
        if self.m_sites == 0 {
            return Err(QstError::InvalidBath("need at least one bath site".into()));
        }
        if !(self.energy_std >= 0.0 && self.energy_std.is_finite()) {
            return Err(QstError::InvalidBath(format!(
                "energy std must be finite and nonnegative, got {}",
                self.energy_std
            )));
        }
        if !self.energy_mean.is_finite() {
            return Err(QstError::InvalidBath("energy mean must be finite".into()));
        }
        if let Some(e) = &self.energies {
            if e.len() != self.m_sites {
                return Err(QstError::InvalidBath(format!(
                    "{} explicit energies given for {} sites",
                    e.len(),
                    self.m_sites
                )));
            }
            if e.iter().any(|w| !w.is_finite()) {
                return Err(QstError::InvalidBath(
                    "explicit energies must be finite".into(),
                ));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum CouplingModel {
    /// `g_{lx} = (√α / π^{1/4}) · exp(−α² (l − x)² / 2)`, α dimensionless.
    Gaussian {
        width: f64,
    },
    Uniform {
        g0: f64,
    },
    /// Rows are chain sites, columns bath sites.
    Explicit(DMatrix<f64>),
}

/// Where the chain's single-particle spectrum sits on the energy axis.
///
/// The hopping Hamiltonian alone has spectrum `θ(m − (N+1)/2)`. Writing it in
/// normal modes as `Σ_m θ·m c_m† c_m` moves it to `θ·m`, which matters once a
/// bath with absolute on-site energies is attached. Both solvers honour the
/// same choice.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EnergyReference {
    /// Normal-mode energies `θ·m`, m = 1..N.
    #[default]
    ModeGrid,
    /// Normal-mode energies `θ(m − (N+1)/2)`.
    Centered,
}

impl EnergyReference {
    /// Uniform on-site energy added to every chain site.
    pub fn chain_onsite(self, chain: &ChainSpec) -> f64 {
        match self {
            EnergyReference::ModeGrid => chain.theta * (chain.n_sites as f64 + 1.0) / 2.0,
            EnergyReference::Centered => 0.0,
        }
    }
}

/// `J_l = √(l(N−l))` for l = 1..N−1.
pub fn hopping_amplitudes(chain: &ChainSpec) -> Result<Vec<f64>> {
    chain.validate()?;
    let n = chain.n_sites;
    Ok((1..n).map(|l| ((l * (n - l)) as f64).sqrt()).collect())
}

/// Tridiagonal hopping Hamiltonian with `(l, l+1)` entry `(θ/2)·J_l` and
/// zero diagonal.
pub fn chain_hamiltonian(chain: &ChainSpec) -> Result<DMatrix<f64>> {
    let hops = hopping_amplitudes(chain)?;
    let n = chain.n_sites;
    let mut h = DMatrix::zeros(n, n);
    for (k, j) in hops.iter().enumerate() {
        let v = 0.5 * chain.theta * j;
        h[(k, k + 1)] = v;
        h[(k + 1, k)] = v;
    }
    Ok(h)
}

pub fn wigner_d(n_sites: usize, angle: RotationAngle) -> Result<WignerD> {
    WignerD::new(n_sites, angle)
}

/// Bath on-site energies: explicit values if given, otherwise `M` draws from
/// `Normal(mean, std²)` using ChaCha8 seeded with `seed`.
pub fn sample_bath_energies(bath: &BathSpec) -> Result<Vec<f64>> {
    bath.validate()?;
    if let Some(e) = &bath.energies {
        return Ok(e.clone());
    }
    if bath.energy_std == 0.0 {
        return Ok(vec![bath.energy_mean; bath.m_sites]);
    }
    let normal = Normal::new(bath.energy_mean, bath.energy_std)
        .map_err(|e| QstError::InvalidBath(e.to_string()))?;
    let mut rng = ChaCha8Rng::seed_from_u64(bath.seed);
    Ok((0..bath.m_sites).map(|_| normal.sample(&mut rng)).collect())
}

/// Coupling matrix `g_{lx}`. Chain site `l` sits at position `l`, bath site
/// `x` at `x + bath_offset`.
pub fn coupling_matrix(
    model: &CouplingModel,
    n: usize,
    m: usize,
    bath_offset: i64,
) -> Result<DMatrix<f64>> {
    match model {
        CouplingModel::Gaussian { width } => {
            if !(*width > 0.0 && width.is_finite()) {
                return Err(QstError::Domain(format!(
                    "gaussian coupling width must be positive, got {width}"
                )));
            }
            let amp = width.sqrt() / std::f64::consts::PI.powf(0.25);
            let a2 = width * width;
            Ok(DMatrix::from_fn(n, m, |r, c| {
                let dist = (r as i64 + 1) as f64 - (c as i64 + 1 + bath_offset) as f64;
                amp * (-0.5 * a2 * dist * dist).exp()
            }))
        }
        CouplingModel::Uniform { g0 } => Ok(DMatrix::from_element(n, m, *g0)),
        CouplingModel::Explicit(g) => {
            if g.shape() != (n, m) {
                return Err(QstError::Shape {
                    expected: (n, m),
                    got: g.shape(),
                });
            }
            Ok(g.clone())
        }
    }
}

/// `g̃_{lx} = Σ_j g_{jx} d_{jl}`: couplings of normal mode `l` to bath site
/// `x` when `d` holds the normal modes in its columns.
pub fn transform_couplings(g: &DMatrix<f64>, d: &WignerD) -> Result<DMatrix<f64>> {
    if g.nrows() != d.n_sites() {
        return Err(QstError::Shape {
            expected: (d.n_sites(), g.ncols()),
            got: g.shape(),
        });
    }
    Ok(d.matrix().transpose() * g)
}

/// Fully assembled chain + bath + coupling.
#[derive(Debug, Clone)]
pub struct SystemModel {
    chain: ChainSpec,
    bath: BathSpec,
    energy_reference: EnergyReference,
    bath_energies: Vec<f64>,
    d: WignerD,
    g: DMatrix<f64>,
    g_tilde: DMatrix<f64>,
}

impl SystemModel {
    pub fn new(
        chain: ChainSpec,
        bath: BathSpec,
        coupling: &CouplingModel,
        energy_reference: EnergyReference,
        bath_offset: i64,
    ) -> Result<Self> {
        chain.validate()?;
        let bath_energies = sample_bath_energies(&bath)?;
        let g = coupling_matrix(coupling, chain.n_sites, bath.m_sites, bath_offset)?;
        Self::from_parts(chain, bath, bath_energies, g, energy_reference)
    }

    /// Builds a model from already realised energies and couplings.
    pub fn from_parts(
        chain: ChainSpec,
        bath: BathSpec,
        bath_energies: Vec<f64>,
        g: DMatrix<f64>,
        energy_reference: EnergyReference,
    ) -> Result<Self> {
        chain.validate()?;
        if bath_energies.len() != bath.m_sites {
            return Err(QstError::InvalidBath(format!(
                "{} energies for {} bath sites",
                bath_energies.len(),
                bath.m_sites
            )));
        }
        if g.shape() != (chain.n_sites, bath.m_sites) {
            return Err(QstError::Shape {
                expected: (chain.n_sites, bath.m_sites),
                got: g.shape(),
            });
        }
        let d = WignerD::new(chain.n_sites, RotationAngle::PlusHalfPi)?;
        let g_tilde = transform_couplings(&g, &d)?;
        Ok(SystemModel {
            chain,
            bath,
            energy_reference,
            bath_energies,
            d,
            g,
            g_tilde,
        })
    }

    pub fn chain(&self) -> &ChainSpec {
        &self.chain
    }

    pub fn bath(&self) -> &BathSpec {
        &self.bath
    }

    pub fn n_sites(&self) -> usize {
        self.chain.n_sites
    }

    pub fn m_sites(&self) -> usize {
        self.bath.m_sites
    }

    pub fn theta(&self) -> f64 {
        self.chain.theta
    }

    pub fn energy_reference(&self) -> EnergyReference {
        self.energy_reference
    }

    pub fn bath_energies(&self) -> &[f64] {
        &self.bath_energies
    }

    /// `d(π/2)`; column `m` is normal mode `m` in the site basis.
    pub fn wigner(&self) -> &WignerD {
        &self.d
    }

    pub fn coupling(&self) -> &DMatrix<f64> {
        &self.g
    }

    pub fn transformed_coupling(&self) -> &DMatrix<f64> {
        &self.g_tilde
    }

    /// Energies of the chain normal modes, index 0 ↔ m = 1.
    pub fn mode_energies(&self) -> Vec<f64> {
        let n = self.chain.n_sites as f64;
        let shift = self.energy_reference.chain_onsite(&self.chain);
        (1..=self.chain.n_sites)
            .map(|m| self.chain.theta * (m as f64 - (n + 1.0) / 2.0) + shift)
            .collect()
    }

    pub fn chain_onsite(&self) -> f64 {
        self.energy_reference.chain_onsite(&self.chain)
    }

    /// `⟨N| e^{−iH_s t} |1⟩` of the isolated chain, from its normal modes.
    pub fn bath_free_transfer_amplitude(&self, t: f64) -> nalgebra::Complex<f64> {
        let n = self.chain.n_sites;
        self.mode_energies()
            .iter()
            .enumerate()
            .map(|(k, e)| {
                let w = self.d.matrix()[(n - 1, k)] * self.d.matrix()[(0, k)];
                nalgebra::Complex::from_polar(w, -e * t)
            })
            .sum()
    }

    /// Same model with every coupling set to zero.
    pub fn decoupled(&self) -> SystemModel {
        let g = DMatrix::zeros(self.chain.n_sites, self.bath.m_sites);
        SystemModel {
            g_tilde: g.clone(),
            g,
            ..self.clone()
        }
    }
}
