//! Quantum state transfer through an engineered hopping chain coupled to a
//! spatially distributed bath of two-level fermionic sites.
//!
//! The chain has hopping `(θ/2)·√(l(N−l))` between sites `l` and `l+1`, which
//! makes it equivalent to a spin `(N−1)/2` precessing about `x` and transfers
//! an excitation from site 1 to site N perfectly at `t = π/θ`. Each chain site
//! exchanges particles with every bath site through a coupling matrix `g`.
//!
//! Two solvers are provided:
//!
//! - [`exact`]: the full model is quadratic, so the single-particle propagator
//!   plus Wick's theorem gives every observable exactly, at any temperature.
//! - [`weisskopf`]: the perturbative Wigner-Weisskopf solution in the chain's
//!   normal-mode basis, with Fermi-golden-rule decay rates.
//!
//! [`scenario`] and [`sweep`] drive both over time/temperature grids and
//! write CSV tables.
//!
//! Units: `ħ = k_B = 1`; energies and rates in units of `θ`, time in `1/θ`.
//! Matrices that couple chain and bath are laid out with rows indexed by
//! chain site and columns by bath site.

pub mod error;
pub mod exact;
pub mod fidelity;
pub mod model;
pub mod report;
pub mod scenario;
pub mod sweep;
pub mod weisskopf;
pub mod wick;
pub mod wigner;

pub use error::{QstError, Result};
pub use fidelity::{Amplitudes, FidelityComponents};
pub use model::{BathSpec, ChainSpec, CouplingModel, EnergyReference, SystemModel};
pub use wigner::{RotationAngle, WignerD};
