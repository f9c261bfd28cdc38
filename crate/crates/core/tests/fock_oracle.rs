mod common;

use chainqst::exact::ExactSolver;
use chainqst::{BathSpec, ChainSpec, CouplingModel, EnergyReference, SystemModel};
use common::fock::{annihilator, FockSystem};
use nalgebra::DMatrix;

fn check(model: &SystemModel, temperatures: &[f64], times: &[f64], tol: f64) {
    let solver = ExactSolver::new(model).unwrap();
    let fock = FockSystem::new(model);
    for &temperature in temperatures {
        for &t in times {
            let exact = solver.components(t, temperature).unwrap();
            let brute = fock.components(t, temperature);
            for ((key, v), b) in exact.iter().zip(brute) {
                assert!(
                    (v - b).norm() < tol,
                    "{key:?} t={t} T={temperature}: {v} vs {b}"
                );
            }
        }
    }
}

#[test]
fn jordan_wigner_anticommutation() {
    let modes = 3;
    let a: Vec<DMatrix<f64>> = (0..modes).map(|k| annihilator(k, modes)).collect();
    for i in 0..modes {
        for j in 0..modes {
            let anti = &a[i] * a[j].transpose() + a[j].transpose() * &a[i];
            let expect = if i == j {
                DMatrix::identity(8, 8)
            } else {
                DMatrix::zeros(8, 8)
            };
            assert_eq!(anti, expect);
            assert_eq!(&a[i] * &a[j] + &a[j] * &a[i], DMatrix::zeros(8, 8));
        }
    }
}

#[test]
fn two_by_two_random_bath() {
    let model = common::gaussian_model(2, 2, 0.7, 1.0, 1.0, 11);
    let times: Vec<f64> = (0..20).map(|k| 0.37 * k as f64).collect();
    check(&model, &[0.0, 0.5, 2.0], &times, 1e-8);
}

#[test]
fn three_site_chain_with_signed_energies() {
    let model = SystemModel::new(
        ChainSpec::new(3, 1.3).unwrap(),
        BathSpec {
            m_sites: 2,
            energy_mean: 0.0,
            energy_std: 0.0,
            seed: 0,
            energies: Some(vec![-0.4, 2.2]),
        },
        &CouplingModel::Explicit(DMatrix::from_row_slice(
            3,
            2,
            &[0.3, -0.1, 0.2, 0.25, -0.15, 0.4],
        )),
        EnergyReference::Centered,
        0,
    )
    .unwrap();
    check(&model, &[0.0, 1.0], &[0.0, 0.9, 2.3, 4.1], 1e-8);
}
