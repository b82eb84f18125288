use std::collections::BTreeMap;

use nalgebra::Matrix4;
use num_complex::Complex64 as C64;

use super::integrator::{exact_timeordered_evolve_with, IntegratorOptions};
use super::phase::{dynamic_phases, phase_tuned, DynamicPhases};
use super::schedule::Schedule;
use crate::dynamics::fock_image;
use crate::error::{Error, Result};
use crate::fock::{apply_creation_polynomial, CreationPolynomial, Occupation, TruncatedFockState};
use crate::polariton::{CouplingConfig, PolaritonBasis};

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

/// Coefficients in `|m, n⟩_ab = Σ_{jk} f^{jk} (D₃†)^{j+k} (D₄†)^{m+n−j−k} |0⟩`
/// for photon-like polaritons `D₃† = (a† + b†)/√2`, `D₄† = (a† − b†)/√2`:
/// `f^{jk} = (−1)^{n−k} C(m,j) C(n,k) / √(2^{m+n} m! n!)`.
pub fn decomposition_coefficients(m: usize, n: usize) -> BTreeMap<(usize, usize), C64> {
    coefficients(m, n, |m, j, n, k| binomial(m, j) * binomial(n, k))
}

/// Same expansion with every binomial squared. Does not reproduce `|m, n⟩`
/// once `m ≥ 2` or `n ≥ 2`.
pub fn squared_binomial_coefficients(m: usize, n: usize) -> BTreeMap<(usize, usize), C64> {
    coefficients(m, n, |m, j, n, k| binomial(m, j) * binomial(m, m - j) * binomial(n, k) * binomial(n, n - k))
}

fn coefficients(m: usize, n: usize, weight: impl Fn(usize, usize, usize, usize) -> f64) -> BTreeMap<(usize, usize), C64> {
    let norm = (2f64.powi((m + n) as i32) * factorial(m) * factorial(n)).sqrt();
    let mut out = BTreeMap::new();
    for j in 0..=m {
        for k in 0..=n {
            let sign = if (n - k) % 2 == 0 { 1.0 } else { -1.0 };
            out.insert((j, k), C64::new(sign * weight(m, j, n, k) / norm, 0.0));
        }
    }
    out
}

/// `D_i† = Σ_x conj(M[i][x]) x†`.
fn polariton_creation(basis: &PolaritonBasis, i: usize) -> CreationPolynomial {
    let m = basis.transform();
    CreationPolynomial::linear([m[(i, 0)].conj(), m[(i, 1)].conj(), m[(i, 2)].conj(), m[(i, 3)].conj()])
}

/// `Σ_{jk} f^{jk} e^{−i(2j+2k−m−n)Φ₃} (D₃†)^{j+k} (D₄†)^{m+n−j−k} |0⟩` with the
/// polaritons of `basis`.
pub fn polariton_superposition(
    m: usize,
    n: usize,
    coeffs: &BTreeMap<(usize, usize), C64>,
    basis: &PolaritonBasis,
    phase3: f64,
) -> Result<TruncatedFockState> {
    let d3 = polariton_creation(basis, 2);
    let d4 = polariton_creation(basis, 3);
    let total = m + n;
    let mut poly = CreationPolynomial::zero();
    for (&(j, k), &f) in coeffs {
        let up = j + k;
        let phase = C64::from_polar(1.0, -((2 * up) as f64 - total as f64) * phase3);
        let term = (&d3.pow(up as u32) * &d4.pow((total - up) as u32)).scale(f * phase);
        poly = &poly + &term;
    }
    let vacuum = TruncatedFockState::vacuum(TruncatedFockState::sector_cutoffs(total))?;
    apply_creation_polynomial(&poly, &vacuum)
}

/// Ideal storage output for photons `|m, n⟩` that start purely in the
/// photon-like polaritons and end in those of `end`.
pub fn ideal_transfer_state(m: usize, n: usize, phase3: f64, end: &PolaritonBasis) -> Result<TruncatedFockState> {
    polariton_superposition(m, n, &decomposition_coefficients(m, n), end, phase3)
}

/// `W = M_end† diag(e^{−iΦ}) M_start`: each instantaneous polariton keeps its
/// label and collects its dynamic phase `(Φ₁, −Φ₁, Φ₃, −Φ₃)`.
pub fn mode_following_map(schedule: &Schedule, phases: &DynamicPhases) -> Result<Matrix4<C64>> {
    let start = PolaritonBasis::new(&schedule.config_at(schedule.t_start()))?;
    let end = PolaritonBasis::new(&schedule.config_at(schedule.t_end()))?;
    let phi = [phases.eps1, -phases.eps1, phases.eps3, -phases.eps3];
    let diag = Matrix4::from_diagonal(&nalgebra::Vector4::from_fn(|i, _| C64::from_polar(1.0, -phi[i])));
    Ok(end.transform().adjoint() * diag * start.transform())
}

/// `(−1)^{m+n} |0, 0, n, m⟩`.
pub fn storage_target(m: usize, n: usize) -> Result<TruncatedFockState> {
    signed_number_state([0, 0, n, m])
}

/// `(−1)^{n_A+n_C} |n_C, n_A, 0, 0⟩`.
pub fn retrieval_target(n_atom_a: usize, n_atom_c: usize) -> Result<TruncatedFockState> {
    signed_number_state([n_atom_c, n_atom_a, 0, 0])
}

fn signed_number_state(occ: Occupation) -> Result<TruncatedFockState> {
    let s: usize = occ.iter().sum();
    let sign = if s % 2 == 0 { 1.0 } else { -1.0 };
    Ok(TruncatedFockState::number_state(occ, TruncatedFockState::sector_cutoffs(s))?.scaled(C64::new(sign, 0.0)))
}

#[derive(Clone, Debug, PartialEq)]
pub struct PassageResult {
    pub initial_state: TruncatedFockState,
    pub target_state: TruncatedFockState,
    /// Mode-following (adiabatic) prediction.
    pub final_state: TruncatedFockState,
    /// Exact time-ordered propagation.
    pub exact_state: TruncatedFockState,
    /// The schedule actually run, hold included.
    pub schedule: Schedule,
    /// `∫ε₃ dt`.
    pub dynamic_phase_integral: f64,
    /// `∫ε₁ dt`.
    pub eps1_phase_integral: f64,
    /// `|⟨target|exact⟩|`.
    pub fidelity_vs_target: f64,
    /// `|⟨exact|prediction⟩|`.
    pub fidelity_vs_exact: f64,
    /// `|⟨target|prediction⟩|`.
    pub prediction_vs_target: f64,
    pub storage_grade: bool,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PassageOptions {
    /// Set the hold so that `∫ε₃ dt ∈ 2πℤ` (when the schedule has a hold tail).
    pub tune_phase: bool,
    pub integrator: IntegratorOptions,
}

impl Default for PassageOptions {
    fn default() -> Self {
        Self { tune_phase: true, integrator: IntegratorOptions::default() }
    }
}

fn passage(
    occ: Occupation,
    target: TruncatedFockState,
    schedule: &Schedule,
    opts: &PassageOptions,
) -> Result<PassageResult> {
    let schedule = if opts.tune_phase && schedule.hold_tail() { phase_tuned(schedule)? } else { schedule.clone() };
    let phases = dynamic_phases(&schedule)?;
    let w = mode_following_map(&schedule, &phases)?;
    let s: usize = occ.iter().sum();
    let initial = TruncatedFockState::number_state(occ, TruncatedFockState::sector_cutoffs(s))?;
    let predicted = fock_image(&w, occ)?;
    let exact = exact_timeordered_evolve_with(&initial, &schedule, &opts.integrator)?.state;
    Ok(PassageResult {
        fidelity_vs_target: target.fidelity(&exact),
        fidelity_vs_exact: exact.fidelity(&predicted),
        prediction_vs_target: target.fidelity(&predicted),
        storage_grade: schedule.is_storage_grade(),
        dynamic_phase_integral: phases.eps3,
        eps1_phase_integral: phases.eps1,
        initial_state: initial,
        target_state: target,
        final_state: predicted,
        exact_state: exact,
        schedule,
    })
}

/// Photon storage `|m, n⟩_ab → (−1)^{m+n}|n⟩_A|m⟩_C` with `Ω` swept from
/// positive to negative.
pub fn adiabatic_evolve(m: usize, n: usize, schedule: &Schedule) -> Result<PassageResult> {
    adiabatic_evolve_with(m, n, schedule, &PassageOptions::default())
}

pub fn adiabatic_evolve_with(m: usize, n: usize, schedule: &Schedule, opts: &PassageOptions) -> Result<PassageResult> {
    if !(schedule.omega_start() > 0.0 && schedule.omega_end() < 0.0) {
        return Err(Error::InvalidSchedule("storage needs Ω to sweep from positive to negative".into()));
    }
    passage([m, n, 0, 0], storage_target(m, n)?, schedule, opts)
}

/// Retrieval `|n_A⟩_A|n_C⟩_C → (−1)^{n_A+n_C}|n_C, n_A⟩_ab` with `Ω` swept from
/// negative to positive.
pub fn inverse_passage(n_atom_a: usize, n_atom_c: usize, schedule: &Schedule) -> Result<PassageResult> {
    inverse_passage_with(n_atom_a, n_atom_c, schedule, &PassageOptions::default())
}

pub fn inverse_passage_with(
    n_atom_a: usize,
    n_atom_c: usize,
    schedule: &Schedule,
    opts: &PassageOptions,
) -> Result<PassageResult> {
    if !(schedule.omega_start() < 0.0 && schedule.omega_end() > 0.0) {
        return Err(Error::InvalidSchedule("retrieval needs Ω to sweep from negative to positive".into()));
    }
    passage([0, 0, n_atom_a, n_atom_c], retrieval_target(n_atom_a, n_atom_c)?, schedule, opts)
}

/// The photon-like polaritons at `θ = 0`.
pub fn photonic_basis() -> PolaritonBasis {
    PolaritonBasis::from_parts(0.0, 0.0, 0.0, 0.0)
}

/// The atom-like polaritons at `θ = π/2`.
pub fn atomic_basis() -> PolaritonBasis {
    PolaritonBasis::from_parts(std::f64::consts::FRAC_PI_2, 0.0, 0.0, 0.0)
}

/// Instantaneous polaritons at `Ω`.
pub fn basis_at(g_n: f64, omega: f64) -> Result<PolaritonBasis> {
    PolaritonBasis::new(&CouplingConfig::real(g_n, omega)?)
}
