#![allow(dead_code)]

pub mod fock;

use chainqst::{BathSpec, ChainSpec, CouplingModel, EnergyReference, SystemModel};

pub fn gaussian_model(
    n: usize,
    m: usize,
    width: f64,
    mean: f64,
    std: f64,
    seed: u64,
) -> SystemModel {
    SystemModel::new(
        ChainSpec::new(n, 1.0).unwrap(),
        BathSpec {
            m_sites: m,
            energy_mean: mean,
            energy_std: std,
            seed,
            energies: None,
        },
        &CouplingModel::Gaussian { width },
        EnergyReference::ModeGrid,
        0,
    )
    .unwrap()
}
