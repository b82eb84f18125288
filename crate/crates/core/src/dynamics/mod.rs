//! Closed-form dynamics at constant coupling.
//!
//! An initial state `Π_x (x†)^{n_x}/√n_x! |0⟩` evolves into
//! `Π_x (Σ_β F_β^x(t) β†)^{n_x}/√n_x! |0⟩`; everything here is built on that.

mod cat;
mod coherent;
mod resonance;

pub use cat::{evolve_cat, CatEvolution, CatState, Parity, PHOTON_ONLY_PRECONDITION};
pub use coherent::{
    coherent_overlap, coherent_state, coherent_state_sector, evolve_coherent, poisson_cutoff,
    poisson_tail, CoherentAmplitudes,
};
pub use resonance::{resonance_times, resonance_times_from_ratio, Progression, ResonanceTimes};

use nalgebra::Matrix4;
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::fock::{apply_creation_polynomial, entanglement_entropy, CreationPolynomial, Occupation, TruncatedFockState};
use crate::polariton::{EvolutionMatrix, ModeEvolution, ModeLabel};

/// Atomic residual below which an instant counts as photon-only.
pub const PHOTON_ONLY_TOLERANCE: f64 = 1e-10;

fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

/// Image of `|occ⟩` under the single-particle map `map`: each `x†` becomes
/// `Σ_β map[β][x] β†`. Cutoffs default to the sector size.
pub fn fock_image(map: &Matrix4<C64>, occ: Occupation) -> Result<TruncatedFockState> {
    let sector: usize = occ.iter().sum();
    fock_image_in(map, occ, TruncatedFockState::sector_cutoffs(sector))
}

pub fn fock_image_in(map: &Matrix4<C64>, occ: Occupation, cutoffs: Occupation) -> Result<TruncatedFockState> {
    let mut poly = CreationPolynomial::one();
    let mut prefactor = 1.0;
    for mode in ModeLabel::ALL {
        let n = occ[mode.index()];
        if n == 0 {
            continue;
        }
        let j = mode.index();
        let image = CreationPolynomial::linear([map[(0, j)], map[(1, j)], map[(2, j)], map[(3, j)]]);
        poly = &poly * &image.pow(n as u32);
        prefactor /= factorial(n).sqrt();
    }
    let vacuum = TruncatedFockState::vacuum(cutoffs)?;
    Ok(apply_creation_polynomial(&poly, &vacuum)?.scaled(C64::new(prefactor, 0.0)))
}

/// `|ψ(t)⟩` for the initial photon state `|m, n⟩_ab ⊗ |0, 0⟩_AC`. Unitarity of
/// `F` keeps the result normalised; no renormalisation is applied.
pub fn evolve_fock<E: ModeEvolution + ?Sized>(model: &E, m: usize, n: usize, t: f64) -> Result<TruncatedFockState> {
    evolve_number_state(&model.evolution_at(t), [m, n, 0, 0])
}

/// General four-mode number state through a given `F`.
pub fn evolve_number_state(f: &EvolutionMatrix, occ: Occupation) -> Result<TruncatedFockState> {
    fock_image(&f.f, occ)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PhotonOnly {
    /// `max(|F_A^a|, |F_C^a|, |F_A^b|, |F_C^b|)`.
    pub residual: f64,
    pub holds: bool,
}

pub fn photon_only_condition(f: &EvolutionMatrix) -> PhotonOnly {
    use ModeLabel::*;
    let residual = [(AtomA, PhotonA), (AtomC, PhotonA), (AtomA, PhotonB), (AtomC, PhotonB)]
        .into_iter()
        .map(|(out, input)| f.coeff(out, input).norm())
        .fold(0.0, f64::max);
    PhotonOnly { residual, holds: residual < PHOTON_ONLY_TOLERANCE }
}

/// `|⟨m, n, 0, 0|ψ(t)⟩|`.
pub fn revival_fidelity(state: &TruncatedFockState, m: usize, n: usize) -> f64 {
    state.amplitude([m, n, 0, 0]).norm()
}

/// `|⟨n, m, 0, 0|ψ(t)⟩|`.
pub fn swap_fidelity(state: &TruncatedFockState, m: usize, n: usize) -> f64 {
    state.amplitude([n, m, 0, 0]).norm()
}

pub fn check_time_grid(times: &[f64]) -> Result<()> {
    if times.iter().any(|t| !t.is_finite()) {
        return Err(Error::InvalidInput("time grid contains non-finite values".into()));
    }
    if times.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidInput("time grid must be strictly ascending".into()));
    }
    Ok(())
}

/// `E(t)` across the `a | (b, A, C)` cut for the initial state `|m, n⟩_ab`.
pub fn entanglement_scan<E: ModeEvolution + ?Sized>(
    model: &E,
    m: usize,
    n: usize,
    times: &[f64],
) -> Result<Vec<(f64, f64)>> {
    check_time_grid(times)?;
    times
        .iter()
        .map(|&t| {
            let psi = evolve_fock(model, m, n, t)?;
            Ok((t, entanglement_entropy(&psi, &[ModeLabel::PhotonA])))
        })
        .collect()
}

/// `n` evenly spaced points on `[start, stop]`.
pub fn linspace(start: f64, stop: f64, n: usize) -> Vec<f64> {
    match n {
        0 => vec![],
        1 => vec![start],
        _ => (0..n).map(|k| start + (stop - start) * k as f64 / (n - 1) as f64).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polariton::{CouplingConfig, PolaritonBasis};
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

    #[test]
    fn zero_time_returns_input() {
        let cfg = CouplingConfig::real(0.7, -1.1).unwrap();
        let psi = evolve_fock(&cfg, 1, 0, 0.0).unwrap();
        assert!((psi.amplitude([1, 0, 0, 0]) - C64::new(1.0, 0.0)).norm() < 1e-15);
        assert_eq!(psi.sector(), Some(1));
    }

    #[test]
    fn quarter_period_stores_photon_in_atom_a() {
        let cfg = CouplingConfig::real(1.0, 0.0).unwrap();
        let psi = evolve_fock(&cfg, 1, 0, FRAC_PI_2).unwrap();
        assert!((psi.amplitude([0, 0, 1, 0]) - C64::new(0.0, -1.0)).norm() < 1e-14);
        assert!((psi.norm() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn case_one_limit_makes_noon_state() {
        // θ = 0 and φ₃ = π/4: (-i/√2)(|2,0⟩ + |0,2⟩)
        let basis = PolaritonBasis::case_one_limit(1.0);
        let psi = evolve_fock(&basis, 1, 1, FRAC_PI_4).unwrap();
        let want = C64::new(0.0, -std::f64::consts::FRAC_1_SQRT_2);
        assert!((psi.amplitude([2, 0, 0, 0]) - want).norm() < 1e-15);
        assert!((psi.amplitude([0, 2, 0, 0]) - want).norm() < 1e-15);
        assert!(psi.amplitude([1, 1, 0, 0]).norm() < 1e-15);
        assert!((entanglement_entropy(&psi, &[ModeLabel::PhotonA]) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn photon_only_at_zero_time_and_in_case_one() {
        let cfg = CouplingConfig::real(1.0, 0.3).unwrap();
        let p = photon_only_condition(&cfg.evolution_at(0.0));
        assert_eq!(p.residual, 0.0);
        assert!(p.holds);
        let limit = PolaritonBasis::case_one_limit(-0.8);
        for t in linspace(0.0, 20.0, 41) {
            assert!(photon_only_condition(&limit.evolution_at(t)).holds);
        }
        assert!(!photon_only_condition(&cfg.evolution_at(0.9)).holds);
    }

    #[test]
    fn photon_only_at_first_resonance() {
        // Ω = 2/√3, t = √3 π: φ₁ = 3π, φ₃ = -π.
        let cfg = CouplingConfig::real(1.0, 2.0 / 3f64.sqrt()).unwrap();
        let p = photon_only_condition(&cfg.evolution_at(3f64.sqrt() * PI));
        assert!(p.holds, "residual {}", p.residual);
    }

    #[test]
    fn time_grid_validation() {
        let cfg = CouplingConfig::real(1.0, 0.0).unwrap();
        assert!(entanglement_scan(&cfg, 1, 1, &[0.0, 0.0]).is_err());
        assert!(entanglement_scan(&cfg, 1, 1, &[0.0, f64::NAN]).is_err());
        assert_eq!(entanglement_scan(&cfg, 1, 1, &[0.0, 0.5]).unwrap().len(), 2);
    }

    #[test]
    fn linspace_endpoints() {
        let v = linspace(0.0, 1.0, 5);
        assert_eq!(v, vec![0.0, 0.25, 0.5, 0.75, 1.0]);
    }
}
