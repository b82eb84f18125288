use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fock::{Occupation, TruncatedFockState};
use crate::polariton::{EvolutionMatrix, ModeEvolution, ModeLabel};

/// Displacements `(α, β, ζ, η)` of modes `(a, b, A, C)`.
#[derive(Clone, Copy, Debug, PartialEq, Default, Serialize, Deserialize)]
pub struct CoherentAmplitudes {
    pub alpha: C64,
    pub beta: C64,
    pub zeta: C64,
    pub eta: C64,
}

impl CoherentAmplitudes {
    pub fn new(alpha: C64, beta: C64, zeta: C64, eta: C64) -> Self {
        Self { alpha, beta, zeta, eta }
    }

    pub fn single(mode: ModeLabel, amplitude: C64) -> Self {
        let mut v = [C64::new(0.0, 0.0); 4];
        v[mode.index()] = amplitude;
        Self::from_array(v)
    }

    pub fn from_array(v: [C64; 4]) -> Self {
        Self { alpha: v[0], beta: v[1], zeta: v[2], eta: v[3] }
    }

    pub fn as_array(&self) -> [C64; 4] {
        [self.alpha, self.beta, self.zeta, self.eta]
    }

    pub fn get(&self, mode: ModeLabel) -> C64 {
        self.as_array()[mode.index()]
    }

    pub fn norm(&self) -> f64 {
        self.as_array().iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn is_finite(&self) -> bool {
        self.as_array().iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn scaled(&self, c: C64) -> Self {
        Self::from_array(self.as_array().map(|z| z * c))
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.as_array().iter().zip(other.as_array()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
    }

    /// Image under `F`: `v' = F v`.
    pub fn mapped(&self, f: &EvolutionMatrix) -> Self {
        let v = self.as_array();
        let mut out = [C64::new(0.0, 0.0); 4];
        for (b, o) in out.iter_mut().enumerate() {
            *o = (0..4).map(|a| f.f[(b, a)] * v[a]).sum();
        }
        Self::from_array(out)
    }
}

/// A product coherent state stays a product coherent state; its labels move
/// linearly with the mode operators.
pub fn evolve_coherent<E: ModeEvolution + ?Sized>(amps: &CoherentAmplitudes, model: &E, t: f64) -> CoherentAmplitudes {
    amps.mapped(&model.evolution_at(t))
}

/// `⟨u|v⟩` for product coherent states restricted to `modes`.
pub fn coherent_overlap(u: &CoherentAmplitudes, v: &CoherentAmplitudes, modes: &[ModeLabel]) -> C64 {
    let exponent: C64 = modes
        .iter()
        .map(|&m| {
            let (x, y) = (u.get(m), v.get(m));
            x.conj() * y - 0.5 * (x.norm_sqr() + y.norm_sqr())
        })
        .sum();
    exponent.exp()
}

/// `Σ_{n ≥ c} e^{-μ} μⁿ/n!`.
pub fn poisson_tail(mean: f64, c: usize) -> f64 {
    if mean == 0.0 {
        return if c == 0 { 1.0 } else { 0.0 };
    }
    let mut term = (-mean).exp();
    let mut head = 0.0;
    for n in 0..c {
        head += term;
        term *= mean / (n + 1) as f64;
    }
    // Sum forward when the head is close to 1 to avoid cancellation.
    if head < 0.5 {
        return 1.0 - head;
    }
    let mut tail = 0.0;
    let mut n = c;
    while term > 0.0 && (tail == 0.0 || term > tail * 1e-18) {
        tail += term;
        n += 1;
        term *= mean / n as f64;
    }
    tail
}

/// Smallest `c ≥ 1` with Poisson tail below `tol`.
pub fn poisson_cutoff(mean: f64, tol: f64) -> usize {
    (1..).find(|&c| poisson_tail(mean, c) < tol).expect("tail is eventually below any positive tolerance")
}

fn coherent_coeff(v: &[C64; 4], occ: &Occupation, prefactor: f64) -> C64 {
    let mut amp = C64::new(prefactor, 0.0);
    for k in 0..4 {
        let n = occ[k];
        if n > 0 {
            let inv_fact_sqrt: f64 = (1..=n).map(|j| (j as f64).sqrt()).product::<f64>().recip();
            amp *= v[k].powu(n as u32) * inv_fact_sqrt;
        }
    }
    amp
}

/// `D_a(α)D_b(β)D_A(ζ)D_C(η)|0⟩` truncated to `cutoffs`, not renormalised.
pub fn coherent_state(amps: &CoherentAmplitudes, cutoffs: Occupation) -> Result<TruncatedFockState> {
    if !amps.is_finite() {
        return Err(Error::InvalidInput("coherent amplitudes must be finite".into()));
    }
    let v = amps.as_array();
    let prefactor = (-0.5 * amps.norm().powi(2)).exp();
    TruncatedFockState::from_fn(cutoffs, None, |occ| coherent_coeff(&v, &occ, prefactor))
}

/// The excitation-number-`s` component of the product coherent state, with
/// its weight `e^{-|v|²}|v|^{2s}/s!` left in.
pub fn coherent_state_sector(amps: &CoherentAmplitudes, sector: usize) -> Result<TruncatedFockState> {
    let v = amps.as_array();
    let prefactor = (-0.5 * amps.norm().powi(2)).exp();
    TruncatedFockState::from_fn(TruncatedFockState::sector_cutoffs(sector), Some(sector), |occ| {
        coherent_coeff(&v, &occ, prefactor)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polariton::{CouplingConfig, PolaritonBasis};
    use std::f64::consts::FRAC_PI_2;
    use ModeLabel::*;

    #[test]
    fn identity_at_zero_time() {
        let cfg = CouplingConfig::real(1.3, 0.4).unwrap();
        let v = CoherentAmplitudes::new(C64::new(0.3, 0.1), C64::new(-0.2, 0.5), C64::new(0.0, 0.7), C64::new(1.0, 0.0));
        assert!(evolve_coherent(&v, &cfg, 0.0).max_abs_diff(&v) < 1e-15);
    }

    #[test]
    fn case_one_quarter_cycle_moves_field_to_b() {
        let alpha = C64::new(0.8, -0.3);
        let basis = PolaritonBasis::case_one_limit(1.0);
        let out = evolve_coherent(&CoherentAmplitudes::single(PhotonA, alpha), &basis, FRAC_PI_2);
        let want = CoherentAmplitudes::single(PhotonB, C64::new(0.0, -1.0) * alpha);
        assert!(out.max_abs_diff(&want) < 1e-15);
    }

    #[test]
    fn atomic_excitations_radiate_into_both_photon_modes() {
        let cfg = CouplingConfig::real(1.0, 0.7).unwrap();
        let v = CoherentAmplitudes::new(C64::default(), C64::default(), C64::new(0.5, 0.0), C64::new(0.0, 0.4));
        let out = evolve_coherent(&v, &cfg, 1.1);
        assert!(out.as_array().iter().all(|z| z.norm() > 1e-3));
        assert!((out.norm() - v.norm()).abs() < 1e-12);
    }

    #[test]
    fn poisson_tail_values() {
        assert!((poisson_tail(1.0, 0) - 1.0).abs() < 1e-15);
        assert!((poisson_tail(1.0, 1) - (1.0 - (-1f64).exp())).abs() < 1e-15);
        // μ = 1: tail from 3 is 1 - e^{-1}(1 + 1 + 1/2)
        assert!((poisson_tail(1.0, 3) - (1.0 - 2.5 * (-1f64).exp())).abs() < 1e-15);
        assert_eq!(poisson_tail(0.0, 1), 0.0);
        let c = poisson_cutoff(4.0, 1e-12);
        assert!(poisson_tail(4.0, c) < 1e-12);
        assert!(poisson_tail(4.0, c - 1) >= 1e-12);
    }

    #[test]
    fn truncated_coherent_state_moments() {
        let v = CoherentAmplitudes::new(C64::new(0.6, 0.2), C64::new(0.0, -0.5), C64::default(), C64::new(0.3, 0.0));
        let psi = coherent_state(&v, [14, 14, 2, 12]).unwrap();
        assert!((psi.norm() - 1.0).abs() < 1e-10);
        for mode in ModeLabel::ALL {
            assert!((psi.mean_lowering(mode) - v.get(mode)).norm() < 1e-9, "{mode}");
        }
    }

    #[test]
    fn sector_components_sum_to_the_state() {
        let v = CoherentAmplitudes::new(C64::new(0.4, 0.0), C64::new(0.1, 0.3), C64::new(0.0, 0.2), C64::default());
        let total: f64 = (0..20).map(|s| coherent_state_sector(&v, s).unwrap().norm_sqr()).sum();
        assert!((total - 1.0).abs() < 1e-14);
    }

    #[test]
    fn overlap_matches_truncated_inner_product() {
        let u = CoherentAmplitudes::new(C64::new(0.5, 0.1), C64::new(-0.2, 0.0), C64::default(), C64::default());
        let w = CoherentAmplitudes::new(C64::new(-0.1, 0.3), C64::new(0.4, 0.4), C64::default(), C64::default());
        let cut = [16, 16, 1, 1];
        let direct = coherent_state(&u, cut).unwrap().inner(&coherent_state(&w, cut).unwrap());
        assert!((direct - coherent_overlap(&u, &w, &ModeLabel::ALL)).norm() < 1e-12);
    }
}
