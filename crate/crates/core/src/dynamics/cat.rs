use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use super::coherent::{coherent_overlap, coherent_state, poisson_cutoff, CoherentAmplitudes};
use super::photon_only_condition;
use crate::error::{Error, Result};
use crate::fock::{complement, Occupation, TruncatedFockState};
use crate::polariton::{ModeEvolution, ModeLabel};

/// Atomic leakage tolerated when a cat is propagated.
pub const PHOTON_ONLY_PRECONDITION: f64 = 1e-8;

/// Total truncated Poisson weight allowed for a materialised cat; it is split
/// between the two modes each branch occupies.
pub const CAT_TAIL_BUDGET: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn sign(self) -> f64 {
        match self {
            Parity::Even => 1.0,
            Parity::Odd => -1.0,
        }
    }
}

/// `N(|α⟩ ± |−α⟩)` on one mode, vacuum elsewhere.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CatState {
    mode: ModeLabel,
    alpha: C64,
    parity: Parity,
    normalization: f64,
}

impl CatState {
    pub fn new(mode: ModeLabel, alpha: C64, parity: Parity) -> Result<Self> {
        if !(alpha.re.is_finite() && alpha.im.is_finite()) {
            return Err(Error::InvalidCat("amplitude must be finite".into()));
        }
        if parity == Parity::Odd && alpha.norm() == 0.0 {
            return Err(Error::InvalidCat("odd cat with zero amplitude is the zero vector".into()));
        }
        let x = 2.0 * alpha.norm_sqr();
        let norm_sqr = match parity {
            Parity::Even => 2.0 + 2.0 * (-x).exp(),
            // 2 - 2e^{-x} without cancellation for small x
            Parity::Odd => -2.0 * (-x).exp_m1(),
        };
        Ok(Self { mode, alpha, parity, normalization: norm_sqr.sqrt().recip() })
    }

    pub fn mode(&self) -> ModeLabel {
        self.mode
    }

    pub fn alpha(&self) -> C64 {
        self.alpha
    }

    pub fn parity(&self) -> Parity {
        self.parity
    }

    pub fn normalization(&self) -> f64 {
        self.normalization
    }

    pub fn branches(&self) -> CatEvolution {
        CatEvolution {
            t: 0.0,
            normalization: self.normalization,
            sign: self.parity.sign(),
            plus: CoherentAmplitudes::single(self.mode, self.alpha),
            minus: CoherentAmplitudes::single(self.mode, -self.alpha),
            residual: 0.0,
        }
    }

    /// Renormalised truncation of the cat; see [`CatEvolution::default_cutoffs`].
    pub fn materialize(&self, cutoffs: Option<Occupation>) -> Result<TruncatedFockState> {
        self.branches().materialize(cutoffs)
    }
}

/// `N(|plus⟩ + sign·|minus⟩)` with both branches product coherent states.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CatEvolution {
    pub t: f64,
    pub normalization: f64,
    pub sign: f64,
    pub plus: CoherentAmplitudes,
    pub minus: CoherentAmplitudes,
    /// Atomic leakage of `F` at `t`.
    pub residual: f64,
}

impl CatEvolution {
    /// Cutoff `c` per mode carrying amplitude, 1 elsewhere, where `c` keeps each
    /// mode's Poisson tail below half the budget.
    pub fn default_cutoffs(&self) -> Occupation {
        let mut cutoffs = [1; 4];
        for mode in ModeLabel::ALL {
            let mean = self.plus.get(mode).norm_sqr().max(self.minus.get(mode).norm_sqr());
            if mean > 1e-24 {
                cutoffs[mode.index()] = poisson_cutoff(mean, 0.5 * CAT_TAIL_BUDGET);
            }
        }
        cutoffs
    }

    /// The branch superposition truncated to `cutoffs` and renormalised.
    pub fn materialize(&self, cutoffs: Option<Occupation>) -> Result<TruncatedFockState> {
        let cutoffs = cutoffs.unwrap_or_else(|| self.default_cutoffs());
        let plus = coherent_state(&self.plus, cutoffs)?;
        let minus = coherent_state(&self.minus, cutoffs)?.scaled(C64::new(self.sign, 0.0));
        (&plus + &minus).normalized()
    }

    /// Gram matrix `⟨branch_i|branch_j⟩` over `modes`.
    fn gram(&self, modes: &[ModeLabel]) -> [[C64; 2]; 2] {
        let b = [self.plus, self.minus];
        let mut g = [[C64::default(); 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                g[i][j] = coherent_overlap(&b[i], &b[j], modes);
            }
        }
        g
    }

    /// Entropy (bits) across `keep | rest` from the two-branch Gram matrices,
    /// with no Fock truncation.
    pub fn analytic_entropy(&self, keep: &[ModeLabel]) -> f64 {
        let rest = complement(keep);
        let gk = self.gram(keep);
        let gr = self.gram(&rest);
        let s = [C64::new(1.0, 0.0), C64::new(self.sign, 0.0)];
        let mut norm_sqr = C64::default();
        for i in 0..2 {
            for j in 0..2 {
                norm_sqr += s[i].conj() * s[j] * gk[i][j] * gr[i][j];
            }
        }
        let n2 = norm_sqr.re.recip();
        // ρ_keep = Σ X_ij |u_i⟩⟨u_j|, X_ij = N² s_i s_j* ⟨w_j|w_i⟩; spectrum of X·G_keep.
        let mut x = [[C64::default(); 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                x[i][j] = n2 * s[i] * s[j].conj() * gr[j][i];
            }
        }
        let mut k = [[C64::default(); 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                k[i][j] = x[i][0] * gk[0][j] + x[i][1] * gk[1][j];
            }
        }
        let tr = (k[0][0] + k[1][1]).re;
        let det = (k[0][0] * k[1][1] - k[0][1] * k[1][0]).re;
        let disc = (tr * tr - 4.0 * det).max(0.0).sqrt();
        [(tr + disc) / 2.0, (tr - disc) / 2.0]
            .into_iter()
            .filter(|&l| l > 1e-300)
            .map(|l| -l * l.log2())
            .sum::<f64>()
            .max(0.0)
    }
}

/// Propagates a photonic cat through `F(t)`; each branch maps linearly. `t`
/// must be an instant at which the photons are decoupled from the atoms.
pub fn evolve_cat<E: ModeEvolution + ?Sized>(cat: &CatState, model: &E, t: f64) -> Result<CatEvolution> {
    if !cat.mode.is_photonic() {
        return Err(Error::InvalidCat(format!("cat must live on a photon mode, got {}", cat.mode)));
    }
    let f = model.evolution_at(t);
    let residual = photon_only_condition(&f).residual;
    if residual > PHOTON_ONLY_PRECONDITION {
        return Err(Error::NotPhotonOnly { residual });
    }
    let start = cat.branches();
    Ok(CatEvolution {
        t,
        residual,
        plus: start.plus.mapped(&f),
        minus: start.minus.mapped(&f),
        ..start
    })
}
