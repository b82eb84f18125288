//! Brute-force reference backends.
//!
//! - [`SectorPropagator`] / [`expm_propagate`]: the bosonised model
//!   diagonalised on one excitation sector at a time.
//! - [`FiniteNPropagator`]: the exact `N`-atom model on the symmetric subspace.
//! - [`tensor_operators`]: the full `3^N` space for very small `N`.
//! - [`bosonization_error`]: how far the finite-`N` photons drift from the
//!   bosonised ones.

mod dicke;
mod sector;
mod tensor;

pub use dicke::{
    dicke_operators, exact_finite_n_propagate, finite_n_hamiltonian, photon_density, DickeLabel, DickeOperators,
    DickeSpace, DickeState, FiniteNPropagator,
};
pub use sector::{expm_propagate, sector_hamiltonian, SectorBasis, SectorPropagator};
pub use tensor::{mini_oracle_defect, symmetric_isometry, tensor_operators, TensorOperators, MAX_TENSOR_ATOMS};

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;
use serde::Serialize;

use crate::dynamics::{check_time_grid, coherent_state_sector, CoherentAmplitudes};
use crate::error::{Error, Result};
use crate::fock::TruncatedFockState;
use crate::linalg::{commutator, hermitian_trace_norm, operator_norm};
use crate::polariton::{CouplingConfig, ModeLabel};

/// Errors below this are indistinguishable from round-off; ratios of them are
/// not reported.
pub const RATIO_FLOOR: f64 = 1e-12;

/// `½‖ρ − σ‖₁`.
pub fn trace_distance(rho: &DMatrix<C64>, sigma: &DMatrix<C64>) -> f64 {
    0.5 * hermitian_trace_norm(&(rho - sigma))
}

/// Photon reduced state of a bosonised state, indexed like
/// [`DickeState::photon_density`].
pub fn fock_photon_density(state: &TruncatedFockState, cutoffs: [usize; 2]) -> DMatrix<C64> {
    photon_density(state.iter_nonzero(), cutoffs)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PhotonDeviation {
    pub n_atoms: usize,
    pub max_error: f64,
    pub t_at_max: f64,
}

/// Largest photon trace distance between the finite-`N` and bosonised
/// evolutions of `|m, n⟩_ab` with ground-state atoms over `times`.
pub fn photon_deviation(n_atoms: usize, m: usize, n: usize, cfg: &CouplingConfig, times: &[f64]) -> Result<PhotonDeviation> {
    check_time_grid(times)?;
    let s = m + n;
    let exact = FiniteNPropagator::new(n_atoms, cfg, s)?;
    let boson = SectorPropagator::new(cfg, s);
    let psi0 = DickeState::photons_over_ground(n_atoms, m, n)?;
    let phi0 = TruncatedFockState::number_state([m, n, 0, 0], TruncatedFockState::sector_cutoffs(s))?;
    let cut = [s + 1, s + 1];
    let mut out = PhotonDeviation { n_atoms, max_error: 0.0, t_at_max: times.first().copied().unwrap_or(0.0) };
    for &t in times {
        let rho = exact.propagate(&psi0, t)?.photon_density();
        let sigma = fock_photon_density(&boson.propagate(&phi0, t)?, cut);
        let d = trace_distance(&rho, &sigma);
        if d > out.max_error {
            out = PhotonDeviation { n_atoms, max_error: d, t_at_max: t };
        }
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ScalingRatio {
    pub n_atoms: usize,
    /// `err(N)/err(2N)`, absent when either error is at round-off level.
    pub ratio: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BosonizationReport {
    pub sector: usize,
    pub entries: Vec<PhotonDeviation>,
    pub ratios: Vec<ScalingRatio>,
}

/// Photon-state error of the bosonised model for `|s, 0⟩_ab` at each atom
/// number, with `err(N)/err(2N)` for every doubled pair present. Requires
/// `s ≤ N/4` for all `N`.
pub fn bosonization_error(
    atom_numbers: &[usize],
    s: usize,
    cfg: &CouplingConfig,
    times: &[f64],
) -> Result<BosonizationReport> {
    if let Some(&n) = atom_numbers.iter().find(|&&n| 4 * s > n || n == 0) {
        return Err(Error::InvalidInput(format!("need 1 ≤ N and s ≤ N/4, got N = {n}, s = {s}")));
    }
    let entries = atom_numbers
        .iter()
        .map(|&n| photon_deviation(n, s, 0, cfg, times))
        .collect::<Result<Vec<_>>>()?;
    let ratios = entries
        .iter()
        .filter_map(|e| {
            let doubled = entries.iter().find(|d| d.n_atoms == 2 * e.n_atoms)?;
            let ratio = (e.max_error > RATIO_FLOOR && doubled.max_error > RATIO_FLOOR)
                .then(|| e.max_error / doubled.max_error);
            Some(ScalingRatio { n_atoms: e.n_atoms, ratio })
        })
        .collect();
    Ok(BosonizationReport { sector: s, entries, ratios })
}

/// Operator-norm residuals of the collective commutation relations at finite
/// `N`, on the whole symmetric subspace.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CommutatorReport {
    pub n_atoms: usize,
    /// `‖[A, C†]‖`
    pub a_cdag: f64,
    /// `‖[A, C†] + T⁻/N‖`
    pub a_cdag_identity: f64,
    /// `‖[A, C]‖`
    pub a_c: f64,
    /// `‖[T⁻, A†] − C†‖`
    pub tminus_adag: f64,
    /// `‖[T⁺, C†] − A†‖`
    pub tplus_cdag: f64,
    /// `‖[T⁺, T⁻] − T^z‖`
    pub tplus_tminus: f64,
}

pub fn commutator_report(n_atoms: usize) -> Result<CommutatorReport> {
    let ops = dicke_operators(n_atoms, [1, 1])?;
    let (a, c) = (&ops.atom_a, &ops.atom_c);
    let (a_dag, c_dag) = (a.adjoint(), c.adjoint());
    let ac_dag = commutator(a, &c_dag);
    let inv_n = C64::new(1.0 / n_atoms as f64, 0.0);
    Ok(CommutatorReport {
        n_atoms,
        a_cdag: operator_norm(&ac_dag),
        a_cdag_identity: operator_norm(&(&ac_dag + &ops.t_minus * inv_n)),
        a_c: operator_norm(&commutator(a, c)),
        tminus_adag: operator_norm(&(commutator(&ops.t_minus, &a_dag) - &c_dag)),
        tplus_cdag: operator_norm(&(commutator(&ops.t_plus, &c_dag) - &a_dag)),
        tplus_tminus: operator_norm(&(commutator(&ops.t_plus, &ops.t_minus) - &ops.t_z)),
    })
}

/// `‖([A, A†] − 1)‖` restricted to atomic states with at most `s` excitations.
pub fn number_defect(n_atoms: usize, s: usize) -> Result<f64> {
    let ops = dicke_operators(n_atoms, [1, 1])?;
    let comm = commutator(&ops.atom_a, &ops.atom_a.adjoint());
    let keep: Vec<usize> =
        ops.space.states().iter().enumerate().filter(|(_, l)| l[2] + l[3] <= s).map(|(i, _)| i).collect();
    let block = DMatrix::from_fn(keep.len(), keep.len(), |i, j| {
        comm[(keep[i], keep[j])] - if i == j { C64::new(1.0, 0.0) } else { C64::new(0.0, 0.0) }
    });
    Ok(operator_norm(&block))
}

/// `⟨x(t)⟩` for a product coherent input, from its excitation sectors
/// `0..=max_sector` each propagated exactly. The neglected sectors bound the
/// error.
pub fn coherent_first_moments(
    propagator: &SectorPropagator,
    amps: &CoherentAmplitudes,
    t: f64,
) -> Result<CoherentAmplitudes> {
    let components = (0..=propagator.max_sector())
        .map(|s| propagator.propagate(&coherent_state_sector(amps, s)?, t))
        .collect::<Result<Vec<_>>>()?;
    let mut moments = [C64::new(0.0, 0.0); 4];
    for mode in ModeLabel::ALL {
        moments[mode.index()] = components.windows(2).map(|w| w[0].inner(&w[1].annihilate(mode))).sum();
    }
    Ok(CoherentAmplitudes::from_array(moments))
}
